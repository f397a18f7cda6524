#include "skewharmonic/zeta.hpp"

#include "skewharmonic/skewlin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace skewharmonic::zeta {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_nonpositive_integer(double x) {
  if (x > 0.5) return false;
  return std::abs(x - std::round(x)) < 1e-12;
}

double ipow(double base, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= base;
  return out;
}

using Poly = XDescriptor::Poly;

void poly_add_term(Poly& p, const std::vector<int>& deg, cplx c) {
  if (c == cplx(0.0, 0.0)) return;
  auto it = p.find(deg);
  if (it == p.end()) {
    p.emplace(deg, c);
  } else {
    it->second += c;
    if (it->second == cplx(0.0, 0.0)) p.erase(it);
  }
}

Poly poly_mul(const Poly& a, const Poly& b, int d) {
  Poly out;
  for (const auto& [da, ca] : a)
    for (const auto& [db, cb] : b) {
      std::vector<int> deg(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) deg[static_cast<size_t>(i)] = da[static_cast<size_t>(i)] + db[static_cast<size_t>(i)];
      poly_add_term(out, deg, ca * cb);
    }
  return out;
}

int entry_index(int q, int i, int j) {
  const int n = 2 * q;
  int idx = 0;
  for (int r = 0; r < i; ++r) idx += n - 1 - r;
  return idx + (j - i - 1);
}

// Pf on the index set, expanded along the first active row.
void pf_expand(int q, std::vector<int> active, std::vector<int> deg, double sign, Poly& out) {
  if (active.empty()) {
    poly_add_term(out, deg, sign);
    return;
  }
  const int i = active.front();
  for (size_t pos = 1; pos < active.size(); ++pos) {
    const int j = active[pos];
    std::vector<int> rest;
    for (size_t r = 1; r < active.size(); ++r)
      if (r != pos) rest.push_back(active[r]);
    std::vector<int> d2 = deg;
    d2[static_cast<size_t>(entry_index(q, i, j))] += 1;
    pf_expand(q, rest, std::move(d2), sign * ((pos % 2) ? 1.0 : -1.0), out);
  }
}

Poly pf_power_poly(int q, int k) {
  const int d = x_dim(q);
  Poly one;
  one.emplace(std::vector<int>(static_cast<size_t>(d), 0), cplx(1.0, 0.0));
  if (k == 0) return one;
  Poly pf;
  std::vector<int> active;
  for (int i = 0; i < 2 * q; ++i) active.push_back(i);
  pf_expand(q, active, std::vector<int>(static_cast<size_t>(d), 0), 1.0, pf);
  Poly out = pf;
  for (int r = 1; r < k; ++r) out = poly_mul(out, pf, d);
  return out;
}

// Coefficient table for F(t^m e^{-a pi t^2}) = a^{-1/2} (sum_j H[m][j] z^j) e^{-pi z^2 / a},
// kernel e^{2 pi i t z}; recursion H_{m+1} = (H_m' - (2 pi / a) z H_m) / (2 pi i).
std::vector<std::vector<cplx>> hermite_table(int mmax, double a) {
  std::vector<std::vector<cplx>> table(static_cast<size_t>(mmax) + 1);
  table[0] = {cplx(1.0, 0.0)};
  const cplx inv2pii = 1.0 / cplx(0.0, 2.0 * kPi);
  for (int m = 0; m < mmax; ++m) {
    const auto& cur = table[static_cast<size_t>(m)];
    std::vector<cplx> nxt(cur.size() + 1, cplx(0.0, 0.0));
    for (size_t j = 1; j < cur.size(); ++j) nxt[j - 1] += static_cast<double>(j) * cur[j];
    for (size_t j = 0; j < cur.size(); ++j) nxt[j + 1] -= (2.0 * kPi / a) * cur[j];
    for (auto& c : nxt) c *= inv2pii;
    table[static_cast<size_t>(m) + 1] = std::move(nxt);
  }
  return table;
}

double radial_m(double c, double a) {
  return 0.5 * std::pow(a * kPi, -0.5 * (c + 1.0)) * std::tgamma(0.5 * (c + 1.0));
}

}  // namespace

GammaFactor gamma_factor(double s, int q) {
  if (q < 1) throw std::invalid_argument("gamma_factor: q must be >= 1");
  for (int j = 0; j < q; ++j) {
    const double arg = 0.5 * (s + 2.0 * q - 1.0) - j;
    if (near_nonpositive_integer(arg)) return {0.0, true};
  }
  double prod = 1.0;
  for (int j = 0; j < q; ++j) prod *= std::tgamma(0.5 * (s + 2.0 * q - 1.0) - j);
  return {std::pow(kPi, 0.5 * q * (s + 2.0 * q - 1.0)) / prod, false};
}

int x_dim(int q) { return q * (2 * q - 1); }

Eigen::MatrixXd assemble_skew(int q, const Eigen::VectorXd& x) {
  const int n = 2 * q;
  if (x.size() != x_dim(q)) throw std::invalid_argument("assemble_skew: wrong coordinate count");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = x(idx);
      m(j, i) = -x(idx);
      ++idx;
    }
  return m;
}

double pfaffian_entry(int q, const Eigen::VectorXd& x) {
  if (q == 1) return x(0);
  if (q == 2) return x(0) * x(5) - x(1) * x(4) + x(2) * x(3);
  return skewlin::pfaffian(skewlin::SkewMatrix(assemble_skew(q, x)));
}

XDescriptor XDescriptor::gaussian(int q, double width) {
  XDescriptor out;
  out.q = q;
  out.width = width;
  out.poly.emplace(std::vector<int>(static_cast<size_t>(x_dim(q)), 0), cplx(1.0, 0.0));
  return out;
}

XDescriptor XDescriptor::times_pf_power(int k) const {
  XDescriptor out = *this;
  out.pf_power += k;
  out.fourier_image.reset();
  return out;
}

XDescriptor XDescriptor::times_monomial(const std::vector<int>& deg, cplx coeff) const {
  XDescriptor out = *this;
  Poly factor;
  factor.emplace(deg, coeff);
  out.poly = poly_mul(poly, factor, x_dim(q));
  out.fourier_image.reset();
  return out;
}

XDescriptor XDescriptor::plus_monomial(const std::vector<int>& deg, cplx coeff) const {
  XDescriptor out = *this;
  poly_add_term(out.poly, deg, coeff);
  out.fourier_image.reset();
  return out;
}

XDescriptor XDescriptor::scaled(cplx c) const {
  XDescriptor out = *this;
  for (auto& [deg, co] : out.poly) co *= c;
  if (fourier_image)
    out.fourier_image = std::make_shared<XDescriptor>(fourier_image->scaled(c));
  return out;
}

cplx XDescriptor::evaluate(const Eigen::VectorXd& x) const {
  if (poly.empty()) return {0.0, 0.0};
  double pf = 1.0;
  if (pf_power) pf = ipow(pfaffian_entry(q, x), pf_power);
  cplx sum(0.0, 0.0);
  for (const auto& [deg, c] : poly) {
    double mono = 1.0;
    for (size_t i = 0; i < deg.size(); ++i)
      for (int r = 0; r < deg[i]; ++r) mono *= x(static_cast<int>(i));
    sum += c * mono;
  }
  return sum * pf * std::exp(-width * kPi * x.squaredNorm());
}

XDescriptor XDescriptor::scale_argument(double c) const {
  XDescriptor out = *this;
  out.width = width * c * c;
  const double pfscale = ipow(c, q * pf_power);
  Poly np;
  for (const auto& [deg, co] : poly) {
    int tot = 0;
    for (int d : deg) tot += d;
    np.emplace(deg, co * pfscale * ipow(c, tot));
  }
  out.poly = std::move(np);
  out.fourier_image.reset();
  return out;
}

XDescriptor XDescriptor::parity() const {
  XDescriptor out = *this;
  const double pfsign = ((q * pf_power) % 2) ? -1.0 : 1.0;
  Poly np;
  for (const auto& [deg, co] : poly) {
    int tot = 0;
    for (int d : deg) tot += d;
    np.emplace(deg, co * pfsign * ((tot % 2) ? -1.0 : 1.0));
  }
  out.poly = std::move(np);
  out.fourier_image.reset();
  if (fourier_image)
    out.fourier_image = std::make_shared<XDescriptor>(fourier_image->parity());
  return out;
}

XDescriptor fourier_x(const XDescriptor& h) {
  if (h.fourier_image) return *h.fourier_image;
  const int d = x_dim(h.q);
  const Poly full = poly_mul(pf_power_poly(h.q, h.pf_power), h.poly, d);
  int mmax = 0;
  for (const auto& [deg, c] : full)
    for (int dm : deg) mmax = std::max(mmax, dm);
  const auto table = hermite_table(mmax, h.width);
  const double amp = std::pow(h.width, -0.5 * d);

  Poly out_poly;
  for (const auto& [deg, c] : full) {
    Poly acc;
    acc.emplace(std::vector<int>(static_cast<size_t>(d), 0), c * amp);
    for (int i = 0; i < d; ++i) {
      const int m = deg[static_cast<size_t>(i)];
      if (m == 0) continue;
      const auto& hp = table[static_cast<size_t>(m)];
      Poly next;
      for (const auto& [dg, cc] : acc)
        for (size_t j = 0; j < hp.size(); ++j) {
          if (hp[j] == cplx(0.0, 0.0)) continue;
          std::vector<int> dg2 = dg;
          dg2[static_cast<size_t>(i)] += static_cast<int>(j);
          poly_add_term(next, dg2, cc * hp[j]);
        }
      acc = std::move(next);
    }
    for (const auto& [dg, cc] : acc) poly_add_term(out_poly, dg, cc);
  }

  XDescriptor out;
  out.q = h.q;
  out.width = 1.0 / h.width;
  out.pf_power = 0;
  out.poly = std::move(out_poly);
  XDescriptor back = h.parity();
  back.fourier_image.reset();
  out.fourier_image = std::make_shared<XDescriptor>(std::move(back));
  return out;
}

XDescriptor inverse_fourier_x(const XDescriptor& h) {
  XDescriptor out = fourier_x(h).parity();
  XDescriptor image = h;
  out.fourier_image = std::make_shared<XDescriptor>(std::move(image));
  return out;
}

double zeta_quadrature(const XDescriptor& h, double s) {
  if (h.q != 1) throw std::invalid_argument("zeta_quadrature: only the scalar case q = 1");
  if (s <= -3.0 || std::abs(s + 1.0) < 1e-12)
    throw std::domain_error("zeta_quadrature: s must lie in (-3,-1) or (-1,inf)");
  if (h.is_zero()) return 0.0;
  const GammaFactor g = gamma_factor(s, 1);
  const double a = h.width;

  // Full even polynomial in t (odd part integrates to zero against |t|^s).
  std::vector<double> even;
  for (const auto& [deg, c] : h.poly) {
    const int j = deg[0] + h.pf_power;
    if (j % 2) continue;
    if (static_cast<int>(even.size()) <= j) even.resize(static_cast<size_t>(j) + 1, 0.0);
    even[static_cast<size_t>(j)] += c.real();
  }
  if (even.empty()) return 0.0;
  const auto eval_even = [&](double t) {
    double acc = 0.0, tp = 1.0;
    for (size_t j = 0; j < even.size(); ++j) {
      acc += even[j] * tp;
      tp *= t;
    }
    return acc;
  };
  const double cutoff = std::sqrt(130.0 / (kPi * a));

  if (s > -1.0) {
    const double integral = numerics::quad_singular(
        [&](double t) { return 2.0 * eval_even(t) * std::exp(-a * kPi * t * t); }, s, 0.0,
        cutoff);
    return g.value * integral;
  }

  // -3 < s < -1: one-term subtraction on [0,1]; the 1/(s+1) moment carries
  // the continuation of the divergent piece.
  const double e0 = even[0];
  const auto eval_q = [&](double t) {
    double acc = 0.0, tp = 1.0;
    for (size_t j = 2; j < even.size(); ++j) {
      acc += even[j] * tp;
      tp *= t;
    }
    return acc;
  };
  const double i1 = numerics::quad_singular(
      [&](double t) { return 2.0 * eval_q(t) * std::exp(-a * kPi * t * t); }, s + 2.0, 0.0, 1.0);
  const double i2 =
      2.0 * e0 *
      numerics::quad_singular(
          [&](double t) { return std::expm1(-a * kPi * t * t) / (t * t); }, s + 2.0, 0.0, 1.0);
  const double i3 = 2.0 * e0 / (s + 1.0);
  const double i4 = numerics::quad_adaptive(
      [&](double t) { return 2.0 * eval_even(t) * std::exp(-a * kPi * t * t) * std::pow(t, s); },
      1.0, cutoff);
  return g.value * (i1 + i2 + i3 + i4);
}

double radial_moment2(double sigma, double a) {
  if (sigma <= -1.0) throw std::domain_error("radial_moment2: sigma must exceed -1");
  return radial_m(sigma + 4.0, a) * radial_m(sigma, a) - radial_m(sigma + 2.0, a) * radial_m(sigma + 2.0, a);
}

numerics::MonteCarloEstimate zeta_monte_carlo(const XDescriptor& h, double s, std::uint64_t n,
                                              std::uint64_t seed) {
  if (h.q != 2) throw std::invalid_argument("zeta_monte_carlo: implemented for q = 2");
  if (n == 0) throw std::invalid_argument("zeta_monte_carlo: need a positive sample count");
  const double seff = s + h.pf_power;
  if (!(seff > -1.0 + 1e-12))
    throw std::domain_error(
        "zeta_monte_carlo: s + pf_power must exceed -1 (Pfaffian-divisor integrability)");
  if (h.is_zero()) return {0.0, 0.0, n, seed};
  const GammaFactor g = gamma_factor(s, 2);
  const double a = h.width;
  const double sig = std::min(seff, 0.0);
  const double r2 = radial_moment2(sig, a);
  // Envelope (w1 w2)^sig (w1^2+w2^2)^2 e^{-a pi |w|^2} as a three-component
  // product mixture; acceptance ratio ((w1^2-w2^2)/(w1^2+w2^2))^2.
  const double wa = radial_m(sig + 4.0, a) * radial_m(sig, a);
  const double wb = radial_m(sig + 2.0, a) * radial_m(sig + 2.0, a);
  const double pb = wb / (wa + wb);
  const double expo = seff - sig;
  const double factor = (g.at_pole ? 0.0 : g.value) * 8.0 * kPi * kPi * r2;
  const int k = h.pf_power;

  const auto sample = [&](numerics::CounterRng& rng) -> double {
    double w1 = 0.0, w2 = 0.0;
    for (;;) {
      if (rng.uniform() < pb) {
        w1 = std::sqrt(rng.gamma(0.5 * (sig + 3.0)) / (a * kPi));
        w2 = std::sqrt(rng.gamma(0.5 * (sig + 3.0)) / (a * kPi));
      } else {
        w1 = std::sqrt(rng.gamma(0.5 * (sig + 5.0)) / (a * kPi));
        w2 = std::sqrt(rng.gamma(0.5 * (sig + 1.0)) / (a * kPi));
        if (rng.uniform() < 0.5) std::swap(w1, w2);
      }
      const double num = w1 * w1 - w2 * w2;
      const double den = w1 * w1 + w2 * w2;
      if (rng.uniform() < (num * num) / (den * den)) break;
    }
    Eigen::Matrix4d gauss;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gauss(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::Matrix4d> qr(gauss);
    Eigen::Matrix4d rot = qr.householderQ();
    const Eigen::Matrix4d rmat = qr.matrixQR();
    for (int i = 0; i < 4; ++i)
      if (rmat(i, i) < 0.0) rot.col(i) *= -1.0;
    if (rot.determinant() < 0.0) rot.col(3) *= -1.0;
    const double eps = (rng.uniform() < 0.5) ? 1.0 : -1.0;
    Eigen::Matrix4d zw = Eigen::Matrix4d::Zero();
    zw(0, 1) = w1;
    zw(1, 0) = -w1;
    zw(2, 3) = eps * w2;
    zw(3, 2) = -eps * w2;
    const Eigen::Matrix4d x = rot * zw * rot.transpose();
    Eigen::VectorXd xv(6);
    xv << x(0, 1), x(0, 2), x(0, 3), x(1, 2), x(1, 3), x(2, 3);
    double pval = 0.0;
    for (const auto& [deg, c] : h.poly) {
      double mono = 1.0;
      for (size_t i = 0; i < deg.size(); ++i)
        for (int r = 0; r < deg[i]; ++r) mono *= xv(static_cast<int>(i));
      pval += c.real() * mono;
    }
    const double esign = (k % 2 != 0 && eps < 0.0) ? -1.0 : 1.0;
    return esign * pval * std::pow(w1 * w2, expo);
  };

  numerics::MonteCarloEstimate est = numerics::mc_integrate(sample, n, seed, 0);
  est.mean *= factor;
  est.stderr_ *= std::abs(factor);
  if (est.stderr_ > 0.05 * std::max(std::abs(est.mean), 1e-12))
    throw std::runtime_error(
        "zeta_monte_carlo: relative standard error above 5% at the sample budget");
  return est;
}

FunctionalEqCheck functional_eq_check(const XDescriptor& h, double s, std::uint64_t n,
                                      std::uint64_t seed) {
  FunctionalEqCheck out;
  const int shift = 2 * h.q - 1;
  const XDescriptor fh = fourier_x(h);
  if (h.q == 1) {
    out.side_fourier = zeta_quadrature(fh, s - shift);
    out.side_direct = zeta_quadrature(h, -s);
  } else if (h.q == 2) {
    const std::uint64_t budget = n ? n : 400000;
    const auto e1 = zeta_monte_carlo(fh, s - shift, budget, seed);
    const auto e2 = zeta_monte_carlo(h, -s, budget, seed + 1);
    out.side_fourier = e1.mean;
    out.side_direct = e2.mean;
    out.stderr_combined = std::hypot(e1.stderr_, e2.stderr_);
  } else {
    throw std::invalid_argument("functional_eq_check: q must be 1 or 2");
  }
  out.residual = std::abs(out.side_fourier - out.side_direct);
  return out;
}

namespace {

// (1/dtau) Int over the cell around tau of |t|^{-mu} dt, closed form.
double cell_average_weight(double tau, double dtau, double mu) {
  const double lo = tau - 0.5 * dtau;
  const double hi = tau + 0.5 * dtau;
  const auto prim = [mu](double t) {
    const double sgn = (t >= 0.0) ? 1.0 : -1.0;
    return sgn * std::pow(std::abs(t), 1.0 - mu) / (1.0 - mu);
  };
  return (prim(hi) - prim(lo)) / dtau;
}

}  // namespace

std::vector<cplx> f_mu(const numerics::Grid1D& g, const std::vector<cplx>& f, double mu) {
  if (mu < 0.0 || mu >= 1.0) throw std::domain_error("f_mu: mu must lie in [0, 1)");
  auto spec = numerics::dft_forward(g, f);
  for (int k = 0; k < g.n; ++k)
    spec[static_cast<size_t>(k)] *= std::sqrt(cell_average_weight(g.tau(k), g.dtau, mu));
  return numerics::dft_inverse(g, spec);
}

double cmu_norm(const numerics::Grid1D& g, const std::vector<cplx>& f, double mu) {
  if (mu < 0.0 || mu >= 1.0) throw std::domain_error("cmu_norm: mu must lie in [0, 1)");
  const auto spec = numerics::dft_forward(g, f);
  double sum = 0.0;
  for (int k = 0; k < g.n; ++k)
    sum += cell_average_weight(g.tau(k), g.dtau, mu) * std::norm(spec[static_cast<size_t>(k)]) *
           g.dtau;
  return std::sqrt(sum);
}

std::vector<cplx> pi_sharp_translate(const numerics::Grid1D& g, double z,
                                     const std::vector<cplx>& phi) {
  if (std::abs(z) > 0.5 * g.half_width)
    throw std::domain_error("pi_sharp_translate: shift exceeds half the padded support");
  auto spec = numerics::dft_forward(g, phi);
  for (int k = 0; k < g.n; ++k) {
    const double ph = 2.0 * kPi * z * g.tau(k);
    spec[static_cast<size_t>(k)] *= cplx(std::cos(ph), std::sin(ph));
  }
  return numerics::dft_inverse(g, spec);
}

std::vector<cplx> pi_sharp_gl(const numerics::Grid1D& g, const Eigen::Matrix2d& gm,
                              const std::vector<cplx>& phi) {
  const double det = gm.determinant();
  if (det <= 0.0) throw std::domain_error("pi_sharp_gl: orientation-preserving g required");
  if (det < 0.25 || det > 4.0)
    throw std::domain_error("pi_sharp_gl: det outside the bandwidth-safe range [1/4, 4]");
  const auto spec = numerics::dft_forward(g, phi);
  const double amp = std::sqrt(det);
  std::vector<cplx> out(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    const double y = det * g.x(j);
    // The trig interpolant is periodic; arguments beyond the grid window
    // would wrap, so they are treated as lying in the vanishing tail.
    if (std::abs(y) > g.half_width) {
      out[static_cast<size_t>(j)] = cplx(0.0, 0.0);
      continue;
    }
    cplx acc(0.0, 0.0);
    for (int k = 0; k < g.n; ++k) {
      const double ph = -2.0 * kPi * g.tau(k) * y;
      acc += spec[static_cast<size_t>(k)] * cplx(std::cos(ph), std::sin(ph));
    }
    out[static_cast<size_t>(j)] = amp * g.dtau * acc;
  }
  double in_norm = 0.0, out_norm = 0.0;
  for (int j = 0; j < g.n; ++j) {
    in_norm += std::norm(phi[static_cast<size_t>(j)]);
    out_norm += std::norm(out[static_cast<size_t>(j)]);
  }
  if (in_norm > 0.0 && std::abs(std::sqrt(out_norm / in_norm) - 1.0) > 1e-6)
    throw std::runtime_error("pi_sharp_gl: support escaped the grid under dilation");
  return out;
}

}  // namespace skewharmonic::zeta
