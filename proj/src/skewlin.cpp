#include "skewharmonic/skewlin.hpp"

#include <cmath>
#include <stdexcept>

namespace skewharmonic::skewlin {

SkewMatrix::SkewMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SkewMatrix: square input required");
  const int n = static_cast<int>(a.rows());
  m_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m_(i, j) = a(i, j);
      m_(j, i) = -a(i, j);
    }
}

SkewMatrix SkewMatrix::from_upper(int n, const std::vector<double>& upper_lex) {
  if (static_cast<int>(upper_lex.size()) != n * (n - 1) / 2)
    throw std::invalid_argument("SkewMatrix::from_upper: wrong entry count");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = upper_lex[k++];
  return SkewMatrix(a);
}

SkewMatrix SkewMatrix::zero(int n) { return SkewMatrix(Eigen::MatrixXd::Zero(n, n)); }

double pfaffian(const SkewMatrix& a) {
  const int n = a.size();
  if (n % 2 == 1) return 0.0;
  if (n == 0) return 1.0;
  Eigen::MatrixXd m = a.mat();
  double pf = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    // Pivot: largest |m(j,k)| below the diagonal into row k+1.
    int piv = k + 1;
    for (int j = k + 2; j < n; ++j)
      if (std::abs(m(j, k)) > std::abs(m(piv, k))) piv = j;
    if (m(piv, k) == 0.0) return 0.0;
    if (piv != k + 1) {
      m.row(piv).swap(m.row(k + 1));
      m.col(piv).swap(m.col(k + 1));
      pf = -pf;
    }
    for (int j = k + 2; j < n; ++j) {
      const double mu = m(j, k) / m(k + 1, k);
      if (mu != 0.0) {
        m.row(j) -= mu * m.row(k + 1);
        m.col(j) -= mu * m.col(k + 1);
      }
    }
    pf *= m(k, k + 1);
  }
  return pf;
}

Eigen::MatrixXd standard_form(int q) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * q, 2 * q);
  for (int i = 0; i < q; ++i) {
    j(2 * i, 2 * i + 1) = 1.0;
    j(2 * i + 1, 2 * i) = -1.0;
  }
  return j;
}

namespace {

// Deterministic sign: first component exceeding 1e-8 of the max is positive.
void fix_sign(Eigen::VectorXd& u) {
  const double m = u.cwiseAbs().maxCoeff();
  if (m == 0.0) return;
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-8 * m) {
      if (u(i) < 0.0) u = -u;
      return;
    }
  }
}

}  // namespace

SkewCanonical skew_canonical(const Eigen::MatrixXd& z, double kernel_tol) {
  const int n = static_cast<int>(z.rows());
  if (z.cols() != n) throw std::invalid_argument("skew_canonical: square input required");
  const double scale = std::max(1e-300, z.cwiseAbs().maxCoeff());

  // z^T z is symmetric PSD; each positive eigenvalue sigma^2 carries an even
  // multiplicity and u -> z u / sigma maps the eigenspace to itself.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z.transpose() * z);
  const Eigen::VectorXd ev = es.eigenvalues();   // ascending
  const Eigen::MatrixXd V = es.eigenvectors();

  SkewCanonical out;
  std::vector<Eigen::VectorXd> rows;
  // Kernel cut: the Gram matrix squares the condition, so eigenvalue noise
  // sits at ~eps * sigma_max^2. Singular values below ~1e-7 sigma_max are
  // indistinguishable from zero on this route and are treated as kernel;
  // inputs are assumed rank-separated at that level.
  const double sigma_max = std::sqrt(std::max(0.0, ev(n - 1)));
  const double cut = std::max(kernel_tol * scale, 1e-7 * sigma_max);
  const double lam_cut = cut * cut;

  // Every candidate direction is reduced against the rows already chosen:
  // when a weak pair's eigenvalues split across clusters (their absolute
  // noise is eps * sigma_max^2, which can exceed any relative gap), the
  // second copy arrives as a near-zero remainder and is skipped instead of
  // double-counting the plane.
  auto reduce = [&rows](Eigen::VectorXd u) {
    for (const auto& r : rows) u -= r * (r.dot(u));
    return u;
  };

  int i = n - 1;
  while (i >= 0 && ev(i) > lam_cut) {
    const double lam = ev(i);
    // Cluster of (numerically) equal eigenvalues, processed together so the
    // pairing u -> z u / sigma stays inside the eigenspace. The absolute
    // term keeps true pairs together when lam is small against sigma_max^2.
    int lo = i;
    while (lo - 1 >= 0 &&
           std::abs(ev(lo - 1) - lam) <= 1e-9 * lam + 1e-11 * ev(n - 1))
      --lo;
    std::vector<Eigen::VectorXd> basis;
    for (int c = i; c >= lo; --c) basis.push_back(V.col(c));
    const double sigma = std::sqrt(lam);
    while (!basis.empty()) {
      Eigen::VectorXd u = reduce(basis.front());
      basis.erase(basis.begin());
      if (u.norm() < 1e-6) continue;  // plane already consumed
      u.normalize();
      fix_sign(u);
      Eigen::VectorXd v = reduce(z * u / sigma);  // orthogonal to u: z is skew
      v -= u * (u.dot(v));
      if (v.norm() < 1e-6) continue;
      v.normalize();
      rows.push_back(v);
      rows.push_back(u);
      out.w.push_back(v.dot(z * u));  // Rayleigh value, accurate to eps*|z|
      // Remove the chosen plane from the cluster: project out {u, v}, then
      // re-orthonormalize what is left (the span drops by exactly two).
      std::vector<Eigen::VectorXd> rest;
      for (const auto& b : basis) {
        Eigen::VectorXd r = b;
        r -= u * (u.dot(r));
        r -= v * (v.dot(r));
        for (const auto& p : rest) r -= p * (p.dot(r));
        if (r.norm() > 1e-6) rest.push_back(r.normalized());
      }
      basis = std::move(rest);
    }
    i = lo - 1;
  }
  // Kernel rows, highest residual eigenvalue first, reduced in case a pair
  // straddled the cut.
  for (int c = i; c >= 0; --c) {
    Eigen::VectorXd u = reduce(V.col(c));
    if (u.norm() < 1e-6) continue;
    u.normalize();
    fix_sign(u);
    rows.push_back(u);
  }
  // Top up any shortfall from the remaining eigenvector columns; the reduce
  // filter makes the completion deterministic.
  for (int c = n - 1; c >= 0 && static_cast<int>(rows.size()) < n; --c) {
    Eigen::VectorXd u = reduce(V.col(c));
    if (u.norm() < 1e-6) continue;
    u.normalize();
    fix_sign(u);
    rows.push_back(u);
  }
  out.rank = 2 * static_cast<int>(out.w.size());
  if (static_cast<int>(rows.size()) != n)
    throw std::logic_error("skew_canonical: eigenspace pairing lost dimensions");

  out.rotation = Eigen::MatrixXd(n, n);
  for (int r = 0; r < n; ++r) out.rotation.row(r) = rows[r].transpose();
  if (out.rotation.determinant() < 0.0) {
    out.rotation.row(n - 1) *= -1.0;
    if (out.rank == n) out.w.back() *= -1.0;  // flipped row belongs to the last block
  }
  return out;
}

SkewMatrix congruence(const SkewMatrix& a, const Eigen::MatrixXd& b) {
  return SkewMatrix(b * a.mat() * b.transpose());
}

double inner(const SkewMatrix& z, const SkewMatrix& w) {
  double s = 0.0;
  const int n = z.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += z(i, j) * w(i, j);
  return s;
}

}  // namespace skewharmonic::skewlin
