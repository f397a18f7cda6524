#include "skewharmonic/repsim.hpp"

#include "skewharmonic/orbits.hpp"
#include "skewharmonic/skewlin.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace skewharmonic::repsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

Eigen::MatrixXd skew_basis_entry(int p, int i, int j) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(p, p);
  z(i, j) = 1.0;
  z(j, i) = -1.0;
  return z;
}

double m_norm(const nilgroup::NilPoint& a) { return std::sqrt(m_inner(a, a)); }

// Scales a point's coordinates; the group is a vector space here.
nilgroup::NilPoint axpy(double c, const nilgroup::NilPoint& a, const nilgroup::NilPoint& b) {
  return nilgroup::NilPoint(b.z + c * a.z, b.v + c * a.v);
}

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
  Eigen::MatrixXcd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

Eigen::VectorXcd subvector(const Eigen::VectorXcd& v, const std::vector<int>& idx) {
  Eigen::VectorXcd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

// log det(M)^{1/2} for complex symmetric M with Re(M) positive definite,
// through the factorization M = L L^T with principal square roots. The
// branch is the continuous extension from real positive widths.
cplx half_log_det(const Eigen::MatrixXcd& m) {
  const int k = static_cast<int>(m.rows());
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(k, k);
  cplx acc = 0.0;
  for (int j = 0; j < k; ++j) {
    cplx d = m(j, j);
    for (int t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
    const cplx root = std::sqrt(d);
    if (std::abs(root) < 1e-150)
      throw std::runtime_error("gaussian descriptor is not integrable");
    l(j, j) = root;
    acc += std::log(root);
    for (int i = j + 1; i < k; ++i) {
      cplx s = m(i, j);
      for (int t = 0; t < j; ++t) s -= l(i, t) * l(j, t);
      l(i, j) = s / root;
    }
  }
  return acc;
}

cplx dot_t(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a.transpose() * b)(0, 0);
}

// Dirichlet sum sum_k e^{2 pi i tau_k delta} on the centered frequency grid.
// For even n the sum depends only on the fractional part of theta, which
// keeps the ratio well conditioned near grid-aligned shifts.
cplx dirichlet(int n, double dtau, double delta) {
  const double theta = delta * dtau;
  const double frac = theta - std::round(theta);
  if (std::abs(frac) < 1e-14) return cplx(static_cast<double>(n), 0.0);
  const double ratio = std::sin(kPi * n * frac) / std::sin(kPi * frac);
  return ratio * std::exp(-kI * (kPi * frac));
}

Eigen::MatrixXcd translation_matrix(const numerics::Grid1D& grid, double x) {
  const int n = grid.n;
  Eigen::MatrixXcd t(n, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      t(j, m) = dirichlet(n, grid.dtau, grid.x(m) - grid.x(j) - x) / static_cast<double>(n);
  return t;
}

nilgroup::NilPoint base2() { return orbits::base_point(2); }

// Slice x = y = 0 integrated against the base-point phases; this is the
// closed form of the kernel's diagonal integral (the identity-trace side).
cplx slice_trace(const GaussPoly& f) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 2) = 1.0;
  a(5, 3) = 1.0;
  GaussPoly s = pullback(f, a, Eigen::VectorXd::Zero(6));
  s.lin(0) += 2.0 * kPi * kI;
  s.lin(3) += kPi * kI;
  return full_integral(s);
}

Eigen::Matrix3d haar_so3(numerics::CounterRng& rng) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(m);
  Eigen::Matrix3d q = qr.householderQ();
  Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 3; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  if (q.determinant() < 0.0) q.col(2) *= -1.0;
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// Heisenberg splitting.

double m_inner(const nilgroup::NilPoint& a, const nilgroup::NilPoint& b) {
  const int p = a.p();
  if (b.p() != p) throw std::invalid_argument("m_inner: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) s += a.z(i, j) * b.z(i, j);
  return s + 0.25 * a.v.dot(b.v);
}

double pairing_on(int q, const nilgroup::NilPoint& a, const nilgroup::NilPoint& b) {
  const nilgroup::NilPoint o = orbits::base_point(q);
  const Eigen::MatrixXd zc = a.v * b.v.transpose() - b.v * a.v.transpose();
  return m_inner(o, nilgroup::NilPoint(zc, Eigen::VectorXd::Zero(a.p())));
}

HeisenbergSplit heisenberg_split(int q) {
  if (q < 2) throw std::invalid_argument("heisenberg_split: q must be at least 2");
  const int p = 2 * q - 1;
  const nilgroup::NilPoint o = orbits::base_point(q);
  const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(p);
  const Eigen::MatrixXd z0 = Eigen::MatrixXd::Zero(p, p);

  HeisenbergSplit out;
  out.h_basis.push_back(nilgroup::NilPoint(o.z, v0));
  for (int i = 0; i < q - 1; ++i)
    out.h_basis.push_back(nilgroup::NilPoint(z0, Eigen::VectorXd::Unit(p, 2 * i)));
  for (int i = 0; i < q - 1; ++i)
    out.h_basis.push_back(nilgroup::NilPoint(z0, Eigen::VectorXd::Unit(p, 2 * i + 1)));

  // Orthocomplement of the center direction inside the skew part, built by
  // projection and deterministic Gram-Schmidt over the lexicographic basis.
  nilgroup::NilPoint center(o.z, v0);
  const double cnorm2 = m_inner(center, center);
  std::vector<nilgroup::NilPoint> kept;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      nilgroup::NilPoint cand(skew_basis_entry(p, i, j), v0);
      cand = axpy(-m_inner(cand, center) / cnorm2, center, cand);
      for (const auto& k : kept) cand = axpy(-m_inner(cand, k), k, cand);
      const double nn = m_norm(cand);
      if (nn > 1e-9) kept.push_back(nilgroup::NilPoint(cand.z / nn, v0));
    }
  }
  out.n0_basis = kept;
  out.n0_basis.push_back(nilgroup::NilPoint(z0, Eigen::VectorXd::Unit(p, p - 1)));

  const int s = 2 * (q - 1);
  out.pairing = Eigen::MatrixXd::Zero(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      out.pairing(i, j) = pairing_on(q, out.h_basis[1 + i], out.h_basis[1 + j]);
  return out;
}

// ---------------------------------------------------------------------------
// Grid operators.

GridGeometry::GridGeometry(int n, double half_width) : grid(n, half_width) {
  if (std::abs(grid.h - grid.dtau) > 1e-12 * grid.h)
    throw std::invalid_argument(
        "grid geometry: frequency spacing must equal the spatial spacing "
        "(half_width = sqrt(n)/2)");
}

GridOperator identity_op(const GridGeometry& g) {
  return {Eigen::MatrixXcd::Identity(g.grid.n, g.grid.n), g.grid.n, g.grid.half_width};
}

GridOperator fourier_op(const GridGeometry& g) {
  const int n = g.grid.n;
  Eigen::MatrixXcd f(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      f(k, j) = g.grid.h * std::exp(2.0 * kPi * kI * (g.grid.x(j) * g.grid.tau(k)));
  return {f, n, g.grid.half_width};
}

GridOperator reflection_u(const GridGeometry& g) {
  const int n = g.grid.n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) u(j, (n - j) % n) = 1.0;
  return {u, n, g.grid.half_width};
}

GridOperator lambda_o(const GridGeometry& g, const nilgroup::NilPoint& n) {
  if (n.p() != 3)
    throw std::domain_error("lambda_o: the grid realization is implemented at q = 2");
  const double x = n.v(0);
  const double y = n.v(1);
  const double w = n.v(2);
  if (std::abs(x) > 0.5 * g.grid.half_width)
    throw std::domain_error("lambda_o: translation escapes the grid support");
  const cplx phase = std::exp(2.0 * kPi * kI * (n.z(0, 1) + 0.5 * w));
  Eigen::MatrixXcd m = translation_matrix(g.grid, x);
  for (int j = 0; j < g.grid.n; ++j)
    m.row(j) *= phase * std::exp(2.0 * kPi * kI * (y * (g.grid.x(j) + 0.5 * x)));
  return {m, g.grid.n, g.grid.half_width};
}

double unitarity_residual(const GridOperator& u) {
  const Eigen::MatrixXcd r =
      u.mat.adjoint() * u.mat - Eigen::MatrixXcd::Identity(u.n, u.n);
  return r.norm();
}

std::vector<Eigen::VectorXcd> gaussian_test_family(const GridGeometry& g) {
  const double centers[] = {0.0, 1.0, -1.5};
  const double widths[] = {1.0, 0.7};
  const double freqs[] = {0.0, 0.8};
  std::vector<Eigen::VectorXcd> fam;
  for (double c : centers)
    for (double s : widths)
      for (double f0 : freqs) {
        Eigen::VectorXcd psi(g.grid.n);
        for (int j = 0; j < g.grid.n; ++j) {
          const double xi = g.grid.x(j);
          psi(j) = std::exp(-kPi * (xi - c) * (xi - c) / (s * s)) *
                   std::exp(2.0 * kPi * kI * (f0 * xi));
        }
        fam.push_back(psi);
      }
  return fam;
}

double family_residual(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                       const std::vector<Eigen::VectorXcd>& fam) {
  double worst = 0.0;
  for (const auto& psi : fam)
    worst = std::max(worst, ((a - b) * psi).norm() / psi.norm());
  return worst;
}

// ---------------------------------------------------------------------------
// Gaussian-polynomial calculus.

cplx GaussPoly::evaluate(const Eigen::VectorXd& u) const {
  const Eigen::VectorXcd uc = u.cast<cplx>();
  const cplx quadform = dot_t(uc, quad * uc);
  const cplx expo = -kPi * quadform + dot_t(lin, uc) + logamp;
  return (poly_const + dot_t(poly_coef, uc)) * std::exp(expo);
}

GaussPoly product_gaussian(const Eigen::VectorXd& sigmas) {
  const int d = static_cast<int>(sigmas.size());
  GaussPoly f;
  f.quad = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) f.quad(i, i) = 1.0 / (sigmas(i) * sigmas(i));
  f.lin = Eigen::VectorXcd::Zero(d);
  f.poly_coef = Eigen::VectorXcd::Zero(d);
  return f;
}

GaussPoly shifted(const GaussPoly& f, const Eigen::VectorXd& center) {
  return pullback(f, Eigen::MatrixXd::Identity(f.dim(), f.dim()), -center);
}

GaussPoly with_linear_factor(const GaussPoly& f, const Eigen::VectorXcd& coef,
                             cplx constant) {
  if (f.poly_coef.norm() > 0.0)
    throw std::logic_error("with_linear_factor: descriptor already carries one");
  GaussPoly out = f;
  out.poly_coef = f.poly_const * coef;
  out.poly_const = f.poly_const * constant;
  return out;
}

GaussPoly with_phase(const GaussPoly& f, const Eigen::VectorXcd& freq) {
  GaussPoly out = f;
  out.lin += 2.0 * kPi * kI * freq;
  return out;
}

GaussPoly scaled_by(const GaussPoly& f, cplx factor) {
  GaussPoly out = f;
  out.logamp += std::log(factor);
  return out;
}

GaussPoly pullback(const GaussPoly& f, const Eigen::MatrixXd& a,
                   const Eigen::VectorXd& s) {
  if (a.rows() != f.dim() || s.size() != f.dim())
    throw std::invalid_argument("pullback: shape mismatch");
  const Eigen::MatrixXcd ac = a.cast<cplx>();
  const Eigen::VectorXcd sc = s.cast<cplx>();
  GaussPoly out;
  out.quad = ac.transpose() * f.quad * ac;
  out.lin = ac.transpose() * (f.lin - 2.0 * kPi * (f.quad * sc));
  out.logamp = f.logamp + dot_t(f.lin, sc) - kPi * dot_t(sc, f.quad * sc);
  out.poly_coef = ac.transpose() * f.poly_coef;
  out.poly_const = f.poly_const + dot_t(f.poly_coef, sc);
  return out;
}

GaussPoly integrate_out(const GaussPoly& f, const std::vector<int>& idx_in) {
  std::vector<int> idx = idx_in;
  std::sort(idx.begin(), idx.end());
  std::vector<int> rest;
  for (int i = 0; i < f.dim(); ++i)
    if (!std::binary_search(idx.begin(), idx.end(), i)) rest.push_back(i);

  const Eigen::MatrixXcd m = submatrix(f.quad, idx, idx);
  const Eigen::MatrixXcd c = submatrix(f.quad, idx, rest);
  const Eigen::MatrixXcd d = submatrix(f.quad, rest, rest);
  const Eigen::VectorXcd bv = subvector(f.lin, idx);
  const Eigen::VectorXcd br = subvector(f.lin, rest);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const Eigen::VectorXcd m_bv = lu.solve(bv);
  const Eigen::MatrixXcd m_c = lu.solve(c);

  GaussPoly out;
  out.quad = d - c.transpose() * m_c;
  out.lin = br - c.transpose() * m_bv;
  out.logamp = f.logamp + dot_t(bv, m_bv) / (4.0 * kPi) - half_log_det(m);

  const Eigen::VectorXcd av = subvector(f.poly_coef, idx);
  const Eigen::VectorXcd ar = subvector(f.poly_coef, rest);
  if (av.norm() > 0.0) {
    const Eigen::VectorXcd m_av = lu.solve(av);
    out.poly_coef = ar - c.transpose() * m_av;
    out.poly_const = f.poly_const + dot_t(av, m_bv) / (2.0 * kPi);
  } else {
    out.poly_coef = ar;
    out.poly_const = f.poly_const;
  }
  return out;
}

cplx full_integral(const GaussPoly& f) {
  if (f.dim() == 0) return f.poly_const * std::exp(f.logamp);
  std::vector<int> all(f.dim());
  for (int i = 0; i < f.dim(); ++i) all[i] = i;
  const GaussPoly g = integrate_out(f, all);
  return g.poly_const * std::exp(g.logamp);
}

// ---------------------------------------------------------------------------
// Group descriptors at q = 2.

Eigen::VectorXd nil_coords(const nilgroup::NilPoint& n) {
  if (n.p() != 3) throw std::invalid_argument("nil_coords: needs p = 3");
  Eigen::VectorXd c(6);
  c << n.z(0, 1), n.z(0, 2), n.z(1, 2), n.v(0), n.v(1), n.v(2);
  return c;
}

nilgroup::NilPoint nil_from_coords(const Eigen::VectorXd& c) {
  if (c.size() != 6) throw std::invalid_argument("nil_from_coords: needs 6 coordinates");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  z(0, 1) = c(0);
  z(0, 2) = c(1);
  z(1, 2) = c(2);
  z -= Eigen::MatrixXd(z.transpose());
  return nilgroup::NilPoint(z, c.tail(3));
}

Eigen::MatrixXd coord_action(const Eigen::Matrix3d& g) {
  Eigen::MatrixXd a(6, 6);
  for (int i = 0; i < 6; ++i) {
    const nilgroup::NilPoint base = nil_from_coords(Eigen::VectorXd::Unit(6, i));
    a.col(i) = nil_coords(nilgroup::gl_action(g, base));
  }
  return a;
}

cplx euclid_fourier(const GaussPoly& f, const nilgroup::NilPoint& zeta) {
  Eigen::VectorXcd freq(6);
  freq << zeta.z(0, 1), zeta.z(0, 2), zeta.z(1, 2), 0.25 * zeta.v(0), 0.25 * zeta.v(1),
      0.25 * zeta.v(2);
  return full_integral(with_phase(f, freq));
}

GaussPoly partial_integral(const GaussPoly& f, N0Character ch) {
  if (f.dim() != 6) throw std::invalid_argument("partial_integral: needs 6 coordinates");
  GaussPoly g = f;
  if (ch == N0Character::base_point) g.lin(5) += kPi * kI;
  return integrate_out(g, {1, 2, 5});
}

Eigen::MatrixXcd fourier_kernel(const numerics::Grid1D& grid, const GaussPoly& f) {
  if (f.dim() != 6) throw std::invalid_argument("fourier_kernel: needs 6 coordinates");
  // Variables (z12, z13, z23, y, w, xi, eta) with x = eta - xi substituted.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 7);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 2) = 1.0;
  a(3, 5) = -1.0;
  a(3, 6) = 1.0;
  a(4, 3) = 1.0;
  a(5, 4) = 1.0;
  GaussPoly k7 = pullback(f, a, Eigen::VectorXd::Zero(6));
  k7.lin(0) += 2.0 * kPi * kI;
  k7.lin(4) += kPi * kI;
  // Exponent picks up pi i y (xi + eta).
  const cplx cross = -kI * 0.5;
  k7.quad(3, 5) += cross;
  k7.quad(5, 3) += cross;
  k7.quad(3, 6) += cross;
  k7.quad(6, 3) += cross;
  const GaussPoly k2 = integrate_out(k7, {0, 1, 2, 3, 4});

  const cplx q00 = k2.quad(0, 0), q01 = k2.quad(0, 1), q11 = k2.quad(1, 1);
  const cplx l0 = k2.lin(0), l1 = k2.lin(1);
  const cplx amp = std::exp(k2.logamp);
  const cplx p0 = k2.poly_coef(0), p1 = k2.poly_coef(1), pc = k2.poly_const;

  const int n = grid.n;
  Eigen::MatrixXcd k(n, n);
  for (int j = 0; j < n; ++j) {
    const double xi = grid.x(j);
    for (int m = 0; m < n; ++m) {
      const double eta = grid.x(m);
      const cplx expo =
          -kPi * (q00 * (xi * xi) + 2.0 * q01 * (xi * eta) + q11 * (eta * eta)) +
          l0 * xi + l1 * eta;
      k(j, m) = (pc + p0 * xi + p1 * eta) * amp * std::exp(expo);
    }
  }
  return k;
}

GridOperator group_fourier(const GridGeometry& g, const GaussPoly& f,
                           const nilgroup::NilPoint& w) {
  if (w.p() != 3) throw std::invalid_argument("group_fourier: needs p = 3");
  const nilgroup::NilPoint o = base2();
  const double dist = (w.z - o.z).norm() + (w.v - o.v).norm();
  GaussPoly pulled = f;
  if (dist > 1e-12) {
    const orbits::OrbitSolution sol = orbits::orbit_solve(w);
    const Eigen::Matrix3d ginv = Eigen::Matrix3d(sol.g).inverse();
    pulled = scaled_by(pullback(f, coord_action(ginv), Eigen::VectorXd::Zero(6)),
                       std::pow(std::abs(sol.g.determinant()), -3.0));
  }
  Eigen::MatrixXcd k = fourier_kernel(g.grid, pulled);
  return {k * g.grid.h, g.grid.n, g.grid.half_width};
}

Eigen::MatrixXcd weyl_kernel(const numerics::Grid1D& grid, const GaussPoly& f_on_h) {
  if (f_on_h.dim() != 3) throw std::invalid_argument("weyl_kernel: needs 3 coordinates");
  GaussPoly g = f_on_h;
  g.lin(0) += 2.0 * kPi * kI;
  const GaussPoly g2 = integrate_out(g, {0});  // (a, u)

  // Scalar form of the two-variable descriptor; the inner loop runs millions
  // of evaluations and must not touch dynamic-size temporaries.
  const cplx qaa = g2.quad(0, 0), qau = g2.quad(0, 1), quu_c = g2.quad(1, 1);
  const cplx la = g2.lin(0), lu = g2.lin(1);
  const cplx amp = std::exp(g2.logamp);
  const cplx p0 = g2.poly_coef(0), p1 = g2.poly_coef(1), pc = g2.poly_const;
  auto value = [&](double d, double u) {
    const cplx expo = -kPi * (qaa * (d * d) + 2.0 * qau * (d * u) + quu_c * (u * u)) +
                      la * d + lu * u;
    return (pc + p0 * d + p1 * u) * amp * std::exp(expo);
  };

  // Integration window for the remaining frequency variable.
  const double quu = std::max(quu_c.real(), 1e-8);
  const double shift = std::abs(lu.real()) / (2.0 * kPi * quu);
  const double radius = std::min(shift + std::sqrt(45.0 / (kPi * quu)), 40.0);

  const int n = grid.n;
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);

  auto envelope = [&](double d) {
    double e = 0.0;
    for (double u : {0.0, shift, -shift, 0.5 * radius})
      e = std::max(e, std::abs(value(d, u)));
    return e * 2.0 * radius;
  };
  const double ref = envelope(0.0);

  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      const double d = grid.x(m) - grid.x(j);
      const double s = grid.x(j) + grid.x(m);
      if (envelope(d) < 1e-16 * ref) continue;
      auto part = [&](bool re) {
        return numerics::quad_adaptive(
            [&](double u) {
              const cplx val = value(d, u) * std::exp(kI * (kPi * u * s));
              return re ? val.real() : val.imag();
            },
            -radius, radius, 5e-12, 1e-10);
      };
      k(j, m) = cplx(part(true), part(false));
    }
  return k;
}

cplx kernel_trace(const numerics::Grid1D& grid, const Eigen::MatrixXcd& k,
                  bool against_reflection) {
  const int n = grid.n;
  cplx t = 0.0;
  for (int j = 0; j < n; ++j) t += k(j, against_reflection ? (n - j) % n : j);
  return t * grid.h;
}

TraceCheck trace_check(const GridGeometry& g, const std::vector<GaussPoly>& family) {
  if (family.size() < 3)
    throw std::invalid_argument("trace_check: needs at least 3 descriptors");
  const nilgroup::NilPoint o = base2();
  TraceCheck out;
  for (const auto& f : family) {
    const cplx side = kernel_trace(g.grid, fourier_kernel(g.grid, f), true);
    const cplx ff = euclid_fourier(f, o);
    if (std::abs(ff) < 1e-13)
      throw std::invalid_argument("trace_check: member with vanishing transform");
    out.ratios.push_back(side / ff);
  }
  cplx mean = 0.0;
  for (const cplx& r : out.ratios) mean += r;
  mean /= static_cast<double>(out.ratios.size());
  double gap = 0.0;
  for (const cplx& a : out.ratios)
    for (const cplx& b : out.ratios) gap = std::max(gap, std::abs(a - b));
  out.spread = gap / std::abs(mean);
  return out;
}

// ---------------------------------------------------------------------------
// Metaplectic generators.

GridOperator metaplectic_shear(const GridGeometry& g, double b) {
  const int n = g.grid.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double xi = g.grid.x(j);
    m(j, j) = std::exp(kI * (kPi * b * xi * xi));
  }
  return {m, n, g.grid.half_width};
}

GridOperator metaplectic_rotation(const GridGeometry& g) { return fourier_op(g); }

GridOperator metaplectic_dilation(const GridGeometry& g, double a) {
  if (!(a > 0.0)) throw std::domain_error("metaplectic_dilation: scale must be positive");
  if (a < 0.25 || a > 4.0)
    throw std::domain_error("metaplectic_dilation: scale outside the resolved band");
  if (a == 1.0) return identity_op(g);
  // Staged so each factor's chirps stay gentle; one stage per quarter octave.
  // The word stays an exact product of unitaries at any stage count.
  const int stages = std::max(1, static_cast<int>(std::ceil(std::abs(std::log2(a)) / 0.25)));
  const double step = std::pow(a, 1.0 / stages);
  const Eigen::MatrixXcd f = fourier_op(g).mat;
  const Eigen::VectorXcd ca = metaplectic_shear(g, step).mat.diagonal();
  const Eigen::VectorXcd cinv = metaplectic_shear(g, 1.0 / step).mat.diagonal();
  // diag(a, 1/a) = S(a) T(-1/a) S(a) J^{-1} with S(a) = J chirp(a) J^{-1}.
  const Eigen::MatrixXcd s_a = f * ca.asDiagonal() * f.adjoint();
  const Eigen::MatrixXcd stage = s_a * cinv.asDiagonal() * s_a * f.adjoint();
  Eigen::MatrixXcd word = stage;
  for (int t = 1; t < stages; ++t) word = stage * word;
  return {word, g.grid.n, g.grid.half_width};
}

Eigen::Matrix3d embed_sl2(const Eigen::Matrix2d& a) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  g.topLeftCorner<2, 2>() = a;
  return g;
}

double covariance_check(const GridGeometry& g, const GridOperator& tau,
                        const Eigen::Matrix2d& a, const nilgroup::NilPoint& n) {
  const Eigen::Matrix3d g3 = embed_sl2(a);
  if (!orbits::stabilizer_check(g3, 2))
    throw std::invalid_argument("covariance_check: the generator must fix the base point");
  const Eigen::MatrixXcd lam = lambda_o(g, n).mat;
  const Eigen::MatrixXcd moved = lambda_o(g, nilgroup::gl_action(g3, n)).mat;
  const Eigen::MatrixXcd taua = tau.mat.adjoint();
  double worst = 0.0;
  for (const auto& psi : gaussian_test_family(g)) {
    const Eigen::VectorXcd lhs = tau.mat * (lam * (taua * psi));
    const Eigen::VectorXcd rhs = moved * psi;
    worst = std::max(worst, (lhs - rhs).norm() / psi.norm());
  }
  return worst;
}

double parity_commutator(const GridGeometry& g, const GridOperator& tau) {
  const Eigen::MatrixXcd u = reflection_u(g).mat;
  return (tau.mat * u - u * tau.mat).norm();
}

// ---------------------------------------------------------------------------
// Commutant witness.

SchurResult schur_experiment(const GridGeometry& g, const GaussPoly& f,
                             const Eigen::Matrix3d& gmat, int orbit_samples,
                             std::uint64_t seed) {
  if (orbit_samples < 8)
    throw std::invalid_argument("schur_experiment: needs at least 8 sampled orbits");
  const nilgroup::NilPoint o = base2();
  const Eigen::MatrixXcd k_o = fourier_kernel(g.grid, f);
  const cplx c_hat = kernel_trace(g.grid, k_o, true) / euclid_fourier(f, o);
  const cplx c0_hat = kernel_trace(g.grid, k_o, false) / slice_trace(f);

  const Eigen::Matrix3d ginv = gmat.inverse();
  numerics::CounterRng rng(seed, 0);

  double num_u = 0.0, den_u = 0.0, num_i = 0.0, den_i = 0.0;
  int accepted = 0, attempts = 0;
  while (accepted < orbit_samples) {
    if (++attempts > 20 * orbit_samples)
      throw std::runtime_error("schur_experiment: orbit sampling failed to converge");
    const Eigen::Matrix3d rot = haar_so3(rng);
    const nilgroup::NilPoint zeta =
        nilgroup::gl_action(ginv, nilgroup::gl_action(rot, o));
    orbits::OrbitSolution sol;
    try {
      sol = orbits::orbit_solve(zeta);
    } catch (const std::exception&) {
      continue;
    }
    const Eigen::Matrix3d sec_inv = Eigen::Matrix3d(sol.g).inverse();
    const GaussPoly fk =
        scaled_by(pullback(f, coord_action(sec_inv), Eigen::VectorXd::Zero(6)),
                  std::pow(std::abs(sol.g.determinant()), -3.0));
    const Eigen::MatrixXcd kk = fourier_kernel(g.grid, fk);

    const cplx tu = kernel_trace(g.grid, kk, true);
    const cplx pu = c_hat * euclid_fourier(f, zeta);
    num_u += std::norm(tu - pu);
    den_u += std::norm(pu);

    const cplx ti = kernel_trace(g.grid, kk, false);
    const cplx pi = c0_hat * slice_trace(fk);
    num_i += std::norm(ti - pi);
    den_i += std::norm(pi);
    ++accepted;
  }
  SchurResult out;
  out.commutator_norm = std::sqrt(num_u / den_u);
  out.baseline = std::sqrt(num_i / den_i);
  out.constant = c_hat.real();
  return out;
}

}  // namespace skewharmonic::repsim
