// The verification suites behind `verify <name>`: each builds its module's
// gated checks from the public APIs at the Config's sizes. Draw streams are
// fixed per check, so reports are reproducible for a given (config, seed)
// regardless of which suites run.
#include "skewharmonic/report.hpp"

#include "skewharmonic/liegroups.hpp"
#include "skewharmonic/nilgroup.hpp"
#include "skewharmonic/numerics.hpp"
#include "skewharmonic/orbits.hpp"
#include "skewharmonic/repsim.hpp"
#include "skewharmonic/skewlin.hpp"
#include "skewharmonic/zeta.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace skewharmonic::report {

namespace {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;
using numerics::CounterRng;

constexpr double kPi = 3.14159265358979323846;

class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteResult& out) : out_(out), t0_(clock::now()) {}
  ~SuiteTimer() {
    out_.wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  SuiteResult& out_;
  clock::time_point t0_;
};

MatrixXd random_skew(int n, CounterRng& rng) {
  MatrixXd a = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = rng.normal();
      a(j, i) = -a(i, j);
    }
  return a;
}

VectorXd random_vec(int n, CounterRng& rng) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

MatrixXd random_dense(int n, CounterRng& rng) {
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

// Mixed absolute/relative residual: |got - want| / (1 + |want|).
double mixed_residual(double got, double want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

// Pfaffian as the signed sum over perfect matchings; independent of the
// elimination route, exponential in n, used only at n <= 6.
double pfaffian_matchings(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n % 2 != 0) return 0.0;
  std::function<double(const std::vector<int>&)> rec =
      [&](const std::vector<int>& v) -> double {
    if (v.empty()) return 1.0;
    double acc = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) {
      std::vector<int> rest;
      rest.reserve(v.size() - 2);
      for (std::size_t t = 1; t < v.size(); ++t)
        if (t != k) rest.push_back(v[t]);
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      acc += sign * a(v[0], v[k]) * rec(rest);
    }
    return acc;
  };
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  return rec(idx);
}

VectorXd coords6(double a, double b, double c, double d, double e, double f) {
  VectorXd v(6);
  v << a, b, c, d, e, f;
  return v;
}

double grid_norm(const numerics::Grid1D& g, const std::vector<cplx>& f) {
  double acc = 0.0;
  for (const cplx& c : f) acc += std::norm(c);
  return std::sqrt(acc * g.h);
}

std::vector<cplx> sample_grid(const numerics::Grid1D& g,
                              const std::function<cplx(double)>& f) {
  std::vector<cplx> out(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) out[static_cast<std::size_t>(j)] = f(g.x(j));
  return out;
}

// Random element preserving the block-pair form diag(J, ..., J) (m pairs):
// shear, Levi, shear words for the split form, conjugated into the pair
// ordering.
MatrixXd random_symplectic_pairs(int m, CounterRng& rng) {
  const int d = 2 * m;
  auto shear = [&](bool upper) {
    MatrixXd b = MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        const double t = 0.4 * rng.normal();
        b(i, j) = t;
        b(j, i) = t;
      }
    MatrixXd s = MatrixXd::Identity(d, d);
    if (upper)
      s.topRightCorner(m, m) = b;
    else
      s.bottomLeftCorner(m, m) = b;
    return s;
  };
  auto levi = [&]() {
    MatrixXd a = MatrixXd::Identity(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) += 0.3 * rng.normal();
    if (std::abs(a.determinant()) < 0.1) a = MatrixXd::Identity(m, m);
    MatrixXd s = MatrixXd::Zero(d, d);
    s.topLeftCorner(m, m) = a;
    s.bottomRightCorner(m, m) = a.inverse().transpose();
    return s;
  };
  MatrixXd acc = shear(true) * levi() * shear(false);
  if (rng.uniform() < 0.5) {
    MatrixXd k = MatrixXd::Zero(d, d);
    k.topRightCorner(m, m) = MatrixXd::Identity(m, m);
    k.bottomLeftCorner(m, m) = -MatrixXd::Identity(m, m);
    acc = acc * k;
  }
  MatrixXd perm = MatrixXd::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    perm(2 * i, i) = 1.0;
    perm(2 * i + 1, m + i) = 1.0;
  }
  return perm * acc * perm.transpose();
}

nilgroup::QuadGaussian random_quad_gaussian(int dim, CounterRng& rng) {
  const MatrixXd a = 0.5 * random_dense(dim, rng);
  const MatrixXd q =
      a * a.transpose() + 0.5 * MatrixXd::Identity(dim, dim);
  VectorXd m = 0.3 * random_vec(dim, rng);
  const double amp = std::exp(0.2 * rng.normal());
  return nilgroup::QuadGaussian(amp, q, m);
}

double descriptor_distance(const nilgroup::QuadGaussian& a,
                           const nilgroup::QuadGaussian& b) {
  const double na = nilgroup::norm_l2(a);
  const double nb = nilgroup::norm_l2(b);
  const double cross = nilgroup::pair_l2(a, b);
  return std::sqrt(std::max(0.0, na * na + nb * nb - 2.0 * cross));
}

std::vector<double> s_grid(const Config& cfg) {
  std::vector<double> s = {-0.5, 0.3, 0.7, 1.5};
  if (std::find(s.begin(), s.end(), cfg.s) == s.end()) s.push_back(cfg.s);
  return s;
}

std::vector<zeta::XDescriptor> q1_descriptors() {
  using zeta::XDescriptor;
  const XDescriptor g1 = XDescriptor::gaussian(1, 1.0);
  return {g1, g1.times_monomial({2}, 1.0), XDescriptor::gaussian(1, 2.0),
          g1.times_monomial({4}, 1.0),
          g1.times_monomial({2}, 1.0 / 3.0).plus_monomial({0}, 1.0)};
}

}  // namespace

SuiteResult run_skew_suite(const Config& cfg) {
  SuiteResult out;
  out.suite = "skew";
  SuiteTimer timer(out);
  const int trials = std::max(1, cfg.trials);

  double worst_sq = 0.0;
  double worst_cong = 0.0;
  double worst_match = 0.0;
  double worst_canon = 0.0;
  CounterRng rng(cfg.seed, 1001);
  for (int n : {2, 4, 6, 8}) {
    for (int t = 0; t < trials; ++t) {
      const skewlin::SkewMatrix a(random_skew(n, rng));
      const double pf = skewlin::pfaffian(a);
      worst_sq = std::max(worst_sq,
                          mixed_residual(pf * pf, a.mat().determinant()));

      const MatrixXd b = random_dense(n, rng);
      const double pfc = skewlin::pfaffian(skewlin::congruence(a, b));
      worst_cong =
          std::max(worst_cong, mixed_residual(pfc, b.determinant() * pf));

      if (n == 4 || n == 6)
        worst_match =
            std::max(worst_match, mixed_residual(pf, pfaffian_matchings(a.mat())));

      if (t < 25) {
        const auto canon = skewlin::skew_canonical(a.mat());
        MatrixXd want = MatrixXd::Zero(n, n);
        for (std::size_t blk = 0; blk < canon.w.size(); ++blk) {
          want(2 * static_cast<int>(blk), 2 * static_cast<int>(blk) + 1) =
              canon.w[blk];
          want(2 * static_cast<int>(blk) + 1, 2 * static_cast<int>(blk)) =
              -canon.w[blk];
        }
        const MatrixXd got = canon.rotation * a.mat() * canon.rotation.transpose();
        worst_canon = std::max(
            worst_canon, (got - want).cwiseAbs().maxCoeff() /
                             (1.0 + a.mat().cwiseAbs().maxCoeff()));
      }
    }
  }
  out.checks.push_back(make_check(
      cfg, "pf_square_det", "pfaffian(A)^2 equals det(A), n in {2,4,6,8}",
      worst_sq, 1e-9));
  out.checks.push_back(make_check(
      cfg, "pf_congruence",
      "pfaffian(B A B^T) equals det(B) pfaffian(A), n in {2,4,6,8}",
      worst_cong, 1e-9));
  out.checks.push_back(make_check(
      cfg, "pf_matching_oracle",
      "elimination pfaffian equals the perfect-matching sum, n in {4,6}",
      worst_match, 1e-9));
  out.checks.push_back(make_check(
      cfg, "skew_canonical_reconstruct",
      "R A R^T equals the canonical block form from skew_canonical",
      worst_canon, 1e-9));
  for (auto& c : out.checks) c.seed = cfg.seed;
  return out;
}

SuiteResult run_lie_suite(const Config& cfg) {
  SuiteResult out;
  out.suite = "lie";
  SuiteTimer timer(out);
  const int trials = std::max(1, cfg.trials);

  double worst_fact = 0.0;
  CounterRng rng(cfg.seed, 2001);
  for (int p : {3, 5}) {
    for (int t = 0; t < trials; ++t) {
      const MatrixXd z = random_skew(p, rng);
      const VectorXd v = random_vec(p, rng);
      worst_fact = std::max(worst_fact, liegroups::factorization_residual(z, v));
    }
  }
  auto fact = make_check(
      cfg, "factorization_lemma",
      "unipotent times Levi factorization of exp(n(z, v)), p in {3,5}",
      worst_fact, 1e-11);
  fact.seed = cfg.seed;
  out.checks.push_back(fact);

  int mismatches = 0;
  for (int p : {1, 3, 5, 7}) {
    std::map<int, int> want = {{0, p * p}, {1, p}, {-1, p}};
    if (p > 1) {
      want[2] = p * (p - 1) / 2;
      want[-2] = p * (p - 1) / 2;
    }
    if (liegroups::ad_generator_spectrum(p) != want) ++mismatches;
  }
  out.checks.push_back(make_check(
      cfg, "ad_spectrum_multiplicities",
      "ad of the grading generator has eigenvalues {0, +-1, +-2} with "
      "multiplicities {p^2, p, p(p-1)/2}, p in {1,3,5,7}",
      static_cast<double>(mismatches), 0.0));
  return out;
}

SuiteResult run_nil_suite(const Config& cfg) {
  SuiteResult out;
  out.suite = "nil";
  SuiteTimer timer(out);
  const int trials = std::max(1, cfg.trials / 4);

  double worst_cocycle = 0.0;
  double worst_ratio = 0.0;
  double worst_flat = 0.0;
  CounterRng rng(cfg.seed, 3001);
  for (int p : {1, 3, 5}) {
    for (int t = 0; t < trials; ++t) {
      const nilgroup::NilPoint n0(random_skew(p, rng), random_vec(p, rng));
      const nilgroup::NilPoint n1(random_skew(p, rng), random_vec(p, rng));
      worst_cocycle =
          std::max(worst_cocycle, nilgroup::moment_cocycle_residual(n0, n1));
      if (std::abs(nilgroup::det_moment(n1)) > 1e-6)
        worst_ratio =
            std::max(worst_ratio, std::abs(nilgroup::kernel_ratio(n1) - 2.0) / 2.0);
      const VectorXd u = nilgroup::flatten(n1);
      const VectorXd back = nilgroup::flatten(nilgroup::unflatten(u, p));
      worst_flat = std::max(worst_flat, (back - u).cwiseAbs().maxCoeff());
    }
  }
  out.checks.push_back(make_check(
      cfg, "moment_cocycle",
      "-M(n0) + h^T M(n) h equals M(n0^{-1} n) with the unipotent h",
      worst_cocycle, 1e-11));
  out.checks.push_back(make_check(
      cfg, "kernel_det_ratio",
      "det(z + v v^T / 2) is twice the moment determinant away from the "
      "divisor",
      worst_ratio, 1e-9));
  out.checks.push_back(make_check(
      cfg, "flat_roundtrip",
      "unflatten then flatten is the identity on coordinates", worst_flat,
      1e-14));

  const int p = 3;
  const int dim = nilgroup::flat_dim(p);
  double worst_translate = 0.0;
  double worst_gl = 0.0;
  double worst_semi = 0.0;
  for (int t = 0; t < std::max(1, trials / 2); ++t) {
    const nilgroup::QuadGaussian f = random_quad_gaussian(dim, rng);
    const double nf = nilgroup::norm_l2(f);
    const nilgroup::NilPoint n0(random_skew(p, rng), random_vec(p, rng));
    worst_translate = std::max(
        worst_translate,
        std::abs(nilgroup::norm_l2(nilgroup::op_translate(n0, f)) - nf) / nf);

    MatrixXd g = MatrixXd::Identity(p, p) + 0.25 * random_dense(p, rng);
    if (std::abs(g.determinant()) < 0.3) g = MatrixXd::Identity(p, p);
    worst_gl =
        std::max(worst_gl,
                 std::abs(nilgroup::norm_l2(nilgroup::op_gl(g, f)) - nf) / nf);

    const auto lhs = nilgroup::op_gl(g, nilgroup::op_translate(n0, f));
    const auto rhs =
        nilgroup::op_translate(nilgroup::gl_action(g, n0), nilgroup::op_gl(g, f));
    worst_semi = std::max(worst_semi, descriptor_distance(lhs, rhs) / nf);
  }
  out.checks.push_back(make_check(
      cfg, "regular_rep_unitary",
      "left translation preserves the L2 norm of Gaussian descriptors",
      worst_translate, 1e-10));
  out.checks.push_back(make_check(
      cfg, "reductive_twist_unitary",
      "|det g|^{-p/2} f(g^{-1} . n) preserves the L2 norm", worst_gl, 1e-10));
  // The distance is assembled from closed-form pairings, so an exact zero
  // surfaces at the square root of the pairing roundoff.
  out.checks.push_back(make_check(
      cfg, "semidirect_intertwine",
      "twist of a translation is the translation of the transported point",
      worst_semi, 1e-6));
  for (auto& c : out.checks) c.seed = cfg.seed;
  return out;
}

SuiteResult run_orbit_suite(const Config& cfg) {
  SuiteResult out;
  out.suite = "orbit";
  SuiteTimer timer(out);
  const int trials = std::max(1, cfg.trials);

  double worst_solve = 0.0;
  CounterRng rng(cfg.seed, 4001);
  for (int q : {2, 3}) {
    const int p = 2 * q - 1;
    int done = 0;
    int attempts = 0;
    while (done < trials && attempts < 40 * trials) {
      ++attempts;
      const nilgroup::NilPoint n(random_skew(p, rng), random_vec(p, rng));
      if (!orbits::membership(n).in_omega) continue;
      try {
        worst_solve = std::max(worst_solve, orbits::orbit_solve(n).residual);
      } catch (const std::runtime_error&) {
        continue;  // conditioning guard near the divisor; redraw
      }
      ++done;
    }
  }
  auto solve = make_check(
      cfg, "orbit_solve_residual",
      "solver output g maps the sample to the base point, p in {3,5}",
      worst_solve, 1e-9);
  solve.seed = cfg.seed;
  out.checks.push_back(solve);

  int stab_failures = 0;
  CounterRng srng(cfg.seed, 4002);
  for (int q : {2, 3}) {
    const int p = 2 * q - 1;
    for (int t = 0; t < 25; ++t) {
      MatrixXd g = MatrixXd::Identity(p, p);
      g.topLeftCorner(2 * (q - 1), 2 * (q - 1)) =
          random_symplectic_pairs(q - 1, srng);
      if (!orbits::stabilizer_check(g, q)) ++stab_failures;
    }
  }
  {
    // Negative control: a non-symplectic stretch must be rejected.
    MatrixXd bad = MatrixXd::Identity(3, 3);
    bad(0, 0) = 2.0;
    if (orbits::stabilizer_check(bad, 2)) ++stab_failures;
  }
  auto stab = make_check(
      cfg, "stabilizer_symplectic",
      "embedded symplectic elements fix the base point; a stretch does not "
      "(50 samples)",
      static_cast<double>(stab_failures), 0.0);
  stab.seed = cfg.seed;
  out.checks.push_back(stab);

  int witness_failures = 0;
  double worst_base = 0.0;
  for (int q : {2, 3}) {
    const auto w = orbits::membership(orbits::strict_inclusion_witness(q));
    if (!w.in_omega || w.in_o) ++witness_failures;
    const auto b = orbits::membership(orbits::base_point(q));
    if (!b.in_o) ++witness_failures;
    worst_base = std::max(worst_base, std::abs(b.det_m - 1.0));
  }
  out.checks.push_back(make_check(
      cfg, "strict_inclusion_witness",
      "a point with det M nonzero but z v nonzero lies outside the cone",
      static_cast<double>(witness_failures), 0.0));
  out.checks.push_back(make_check(
      cfg, "base_point_moment",
      "the base point's moment matrix is the standard form, determinant one",
      worst_base, 1e-12));
  return out;
}

SuiteResult run_zeta_suite(const Config& cfg) {
  SuiteResult out;
  out.suite = "zeta";
  SuiteTimer timer(out);

  double worst_fe = 0.0;
  double worst_self = 0.0;
  const auto descriptors = q1_descriptors();
  for (double s : s_grid(cfg)) {
    for (const auto& h : descriptors)
      worst_fe = std::max(worst_fe, zeta::functional_eq_check(h, s).residual);
    worst_self = std::max(
        worst_self, std::abs(zeta::zeta_quadrature(descriptors[0], s) - 1.0));
  }
  out.checks.push_back(make_check(
      cfg, "functional_eq_q1",
      "Z_{s-1}(F h) equals Z_{-s}(h) by quadrature, five descriptors",
      worst_fe, 1e-8));
  out.checks.push_back(make_check(
      cfg, "zeta_selfdual_q1",
      "the self-dual Gaussian has Z_s identically one", worst_self, 1e-8));

  // The admissible member pair: the Fourier side carries the Pf^2 factor
  // that keeps both exponents above the integrability threshold.
  const auto pf2g = zeta::inverse_fourier_x(
      zeta::XDescriptor::gaussian(2, 1.0).times_pf_power(2));
  const auto fe2 =
      zeta::functional_eq_check(pf2g, 0.5, cfg.mc_samples, cfg.seed);
  out.checks.push_back(make_mc_check(
      cfg, "functional_eq_q2_mc",
      "Z_{s-3}(F h) equals Z_{-s}(h) by importance-sampled Monte Carlo at "
      "s = 0.5",
      fe2.residual, fe2.stderr_combined, cfg.seed));
  const double scale =
      std::max(std::abs(fe2.side_fourier), std::abs(fe2.side_direct));
  out.checks.push_back(make_check(
      cfg, "mc_stderr_ratio",
      "Monte Carlo relative precision stderr/value at the configured budget",
      fe2.stderr_combined / scale, 0.02));

  const numerics::Grid1D grid(cfg.grid_n, cfg.grid_l);
  const auto gauss = sample_grid(
      grid, [](double x) { return cplx(std::exp(-kPi * x * x), 0.0); });
  const auto bump = sample_grid(grid, [](double x) {
    return std::exp(-kPi * (x - 0.4) * (x - 0.4) / 1.3) *
           std::exp(cplx(0.0, 2.0 * kPi * 0.5 * x));
  });
  double worst_iso = 0.0;
  for (double mu : {0.1, 0.5, 0.9}) {
    for (const auto* f : {&gauss, &bump}) {
      const double lhs = grid_norm(grid, zeta::f_mu(grid, *f, mu));
      const double rhs = zeta::cmu_norm(grid, *f, mu);
      worst_iso = std::max(worst_iso, std::abs(lhs * lhs - rhs * rhs) / (rhs * rhs));
    }
  }
  out.checks.push_back(make_check(
      cfg, "fractional_isometry",
      "the fractional unitarizer satisfies grid Parseval against cmu_norm, "
      "mu in {0.1, 0.5, 0.9}",
      worst_iso, 1e-6));

  double worst_tr = 0.0;
  for (double z : {0.3, -0.7, 1.1}) {
    for (const auto* f : {&gauss, &bump}) {
      const double nf = grid_norm(grid, *f);
      worst_tr = std::max(
          worst_tr,
          std::abs(grid_norm(grid, zeta::pi_sharp_translate(grid, z, *f)) - nf) / nf);
    }
  }
  out.checks.push_back(make_check(
      cfg, "pi_translate_parseval",
      "grid translation preserves the L2 norm", worst_tr, 1e-6));

  double worst_gl = 0.0;
  std::vector<Matrix2d> gms(3);
  gms[0] = Matrix2d::Identity() * 1.4;
  gms[1] << 2.0, 0.0, 0.0, 1.0;
  gms[2] << 1.2, 0.3, 0.1, 0.9;
  for (const auto& gm : gms) {
    const double ng = grid_norm(grid, gauss);
    worst_gl = std::max(
        worst_gl,
        std::abs(grid_norm(grid, zeta::pi_sharp_gl(grid, gm, gauss)) - ng) / ng);
  }
  out.checks.push_back(make_check(
      cfg, "pi_gl_parseval",
      "the determinant-weighted coordinate action preserves the L2 norm",
      worst_gl, 1e-6));

  {
    Matrix2d g2;
    g2 << 2.0, 0.0, 0.0, 1.0;
    const Matrix2d g2inv = g2.inverse();
    const auto conj = zeta::pi_sharp_gl(
        grid, g2,
        zeta::pi_sharp_translate(grid, 1.0, zeta::pi_sharp_gl(grid, g2inv, gauss)));
    const auto direct = zeta::pi_sharp_translate(grid, 0.5, gauss);
    double worst = 0.0;
    for (std::size_t j = 0; j < conj.size(); ++j)
      worst = std::max(worst, std::abs(conj[j] - direct[j]));
    out.checks.push_back(make_check(
        cfg, "pi_semidirect_covariance",
        "conjugating a translation rescales the shift by the inverse "
        "determinant",
        worst / grid_norm(grid, gauss), 1e-5));
  }
  return out;
}

SuiteResult run_rep_suite(const Config& cfg) {
  SuiteResult out;
  out.suite = "rep";
  SuiteTimer timer(out);

  const repsim::GridGeometry geo(cfg.grid_n, cfg.grid_l);
  const auto fam = repsim::gaussian_test_family(geo);

  double worst_unit = 0.0;
  const std::vector<VectorXd> gen_pts = {
      coords6(0.7, 0, 0, 0, 0, 0),    coords6(0, 0, 0, 0.9, 0, 0),
      coords6(0, 0, 0, 0, 0.8, 0),    coords6(0, 0, 0, 0, 0, 1.3),
      coords6(0.2, 0.4, -0.3, 0.5, -0.6, 0.3)};
  for (const auto& c : gen_pts)
    worst_unit = std::max(
        worst_unit,
        repsim::unitarity_residual(repsim::lambda_o(geo, repsim::nil_from_coords(c))));
  out.checks.push_back(make_check(
      cfg, "lambda_unitarity",
      "the grid representation operators are unitary on each generator type",
      worst_unit, 1e-8));

  double worst_hom = 0.0;
  CounterRng rng(cfg.seed, 6001);
  for (int t = 0; t < 30; ++t) {
    VectorXd ca(6), cb(6);
    for (int i = 0; i < 6; ++i) {
      ca(i) = 2.0 * rng.uniform() - 1.0;
      cb(i) = 2.0 * rng.uniform() - 1.0;
    }
    const auto na = repsim::nil_from_coords(ca);
    const auto nb = repsim::nil_from_coords(cb);
    const auto la = repsim::lambda_o(geo, na);
    const auto lb = repsim::lambda_o(geo, nb);
    const auto lab = repsim::lambda_o(geo, nilgroup::multiply(na, nb));
    worst_hom =
        std::max(worst_hom, repsim::family_residual(la.mat * lb.mat, lab.mat, fam));
  }
  auto hom = make_check(
      cfg, "lambda_homomorphism",
      "lambda(a) lambda(b) equals lambda(ab) on the Gaussian family",
      worst_hom, 1e-6);
  hom.seed = cfg.seed;
  out.checks.push_back(hom);

  {
    std::vector<repsim::GaussPoly> family;
    family.push_back(
        repsim::product_gaussian(coords6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1)));
    family.push_back(
        repsim::shifted(repsim::product_gaussian(coords6(0.8, 1.0, 1.1, 0.9, 1.2, 0.7)),
                        coords6(0.2, 0.0, -0.1, 0.1, 0.0, 0.2)));
    VectorXcd fr(6);
    fr << 0.1, -0.1, 0.2, 0.0, 0.1, -0.2;
    family.push_back(repsim::with_phase(
        repsim::product_gaussian(coords6(1.1, 0.9, 1.0, 1.2, 0.8, 1.0)), fr));
    family.push_back(
        repsim::product_gaussian(coords6(1.3, 0.7, 1.0, 0.8, 1.1, 0.9)));
    const auto tc = repsim::trace_check(geo, family);
    out.checks.push_back(make_check(
        cfg, "trace_identity_spread",
        "Tr(f^(o) U) / (F f)(o) is constant across four Gaussian families",
        tc.spread, 1e-3));
    double worst_half = 0.0;
    for (const cplx& r : tc.ratios)
      worst_half = std::max(worst_half, std::abs(r - cplx(0.5, 0.0)));
    out.checks.push_back(make_check(
        cfg, "trace_constant_half",
        "the trace ratio equals one half in this kernel normalization",
        worst_half, 1e-9));
  }

  {
    // Fixed self-dual cross-check geometry; the per-entry quadrature route
    // is quadratic in N, so it stays at 128 independent of the grid knob.
    const repsim::GridGeometry g128(128, std::sqrt(128.0) / 2.0);
    const nilgroup::NilPoint o = orbits::base_point(2);
    auto f = repsim::shifted(
        repsim::product_gaussian(coords6(1.0, 1.1, 0.9, 1.2, 0.8, 1.0)),
        coords6(0.1, -0.2, 0.2, 0.3, -0.1, 0.2));
    VectorXcd fr(6);
    fr << 0.0, 0.1, -0.1, 0.2, 0.1, 0.0;
    f = repsim::with_phase(f, fr);
    const auto direct = repsim::group_fourier(g128, f, o);
    const auto fonh = repsim::partial_integral(f, repsim::N0Character::base_point);
    const MatrixXcd viaweyl =
        repsim::weyl_kernel(g128.grid, fonh) * g128.grid.h;
    out.checks.push_back(make_check(
        cfg, "weyl_vs_group",
        "the per-entry quadrature kernel matches the closed-form transform "
        "route in Hilbert-Schmidt norm",
        (viaweyl - direct.mat).norm() / direct.mat.norm(), 1e-5));
  }

  {
    Matrix2d a_dil2, a_dilh, a_shear, a_rot;
    a_dil2 << 2, 0, 0, 0.5;
    a_dilh << 0.5, 0, 0, 2;
    a_shear << 1, 0, -0.7, 1;
    a_rot << 0, 1, -1, 0;
    const auto tau_dil2 = repsim::metaplectic_dilation(geo, 2.0);
    const auto tau_dilh = repsim::metaplectic_dilation(geo, 0.5);
    const auto tau_shear = repsim::metaplectic_shear(geo, 0.7);
    const auto tau_rot = repsim::metaplectic_rotation(geo);
    const std::vector<nilgroup::NilPoint> points = {
        repsim::nil_from_coords(coords6(0, 0, 0, 1, 0, 0)),
        repsim::nil_from_coords(coords6(0.4, 0, 0, 0, 0, 0)),
        repsim::nil_from_coords(coords6(0.2, 0, 0, 0.7, 0.4, 0.3)),
        repsim::nil_from_coords(coords6(0, 0, 0, 0, 0.4, 0)),
        repsim::nil_from_coords(coords6(0, 0, 0, 0, 0, 1.1))};
    const std::vector<std::pair<const repsim::GridOperator*, const Matrix2d*>>
        combos = {{&tau_dil2, &a_dil2},
                  {&tau_dilh, &a_dilh},
                  {&tau_shear, &a_shear},
                  {&tau_rot, &a_rot}};
    double worst_cov = 0.0;
    for (const auto& [tau, a] : combos)
      for (const auto& pt : points)
        worst_cov = std::max(worst_cov, repsim::covariance_check(geo, *tau, *a, pt));
    out.checks.push_back(make_check(
        cfg, "metaplectic_covariance",
        "tau lambda(n) tau^* equals lambda(a . n) over the full generator "
        "and element matrix",
        worst_cov, 1e-5));

    double worst_par = 0.0;
    for (const auto* tau : {&tau_dil2, &tau_dilh, &tau_shear, &tau_rot})
      worst_par = std::max(worst_par, repsim::parity_commutator(geo, *tau));
    out.checks.push_back(make_check(
        cfg, "parity_commutator",
        "the reflection commutes with every metaplectic generator",
        worst_par, 1e-6));

    // Global phase of the dilation word at a = 2, recorded for reference;
    // covariance conjugation is phase-free, so this never gates.
    cplx overlap(0.0, 0.0);
    const auto& psi0 = fam[0];
    VectorXcd want(geo.grid.n);
    for (int j = 0; j < geo.grid.n; ++j) {
      const double x = geo.grid.x(j);
      want(j) = 0.0;
      for (int m = 0; m < geo.grid.n; ++m)
        if (std::abs(geo.grid.x(m) - x / 2.0) < 1e-12) want(j) = psi0(m);
      want(j) *= std::sqrt(0.5);
    }
    overlap = (want.adjoint() * (tau_dil2.mat * psi0))(0, 0);
    out.checks.push_back(make_check(
        cfg, "metaplectic_phase_recorded",
        "argument in radians of the dilation word's global phase at a = 2 "
        "(informational)",
        std::abs(std::arg(overlap)), 2.0 * kPi));
  }

  {
    const repsim::GridGeometry g64(64, 4.0);
    const auto f =
        repsim::product_gaussian(coords6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1));
    const auto at_id =
        repsim::schur_experiment(g64, f, Matrix3d::Identity(), 10, cfg.seed);
    auto ident = make_check(
        cfg, "schur_identity_null",
        "the reflection-twisted field is equivariant under the trivial "
        "transport",
        at_id.commutator_norm, 1e-10);
    ident.seed = cfg.seed;
    out.checks.push_back(ident);

    Matrix3d diag2 = Matrix3d::Identity();
    diag2(0, 0) = 2.0;
    const auto at_diag = repsim::schur_experiment(g64, f, diag2, 10, cfg.seed);
    auto sep = make_check(
        cfg, "schur_separation",
        "a non-symplectic stretch breaks equivariance by at least 100x the "
        "noise floor",
        100.0 * at_diag.baseline / std::max(at_diag.commutator_norm, 1e-300),
        1.0);
    sep.seed = cfg.seed;
    out.checks.push_back(sep);
  }
  return out;
}

std::vector<SuiteResult> run_all_suites(const Config& cfg) {
  std::vector<SuiteResult> out;
  out.push_back(run_skew_suite(cfg));
  out.push_back(run_lie_suite(cfg));
  out.push_back(run_nil_suite(cfg));
  out.push_back(run_orbit_suite(cfg));
  out.push_back(run_zeta_suite(cfg));
  out.push_back(run_rep_suite(cfg));
  return out;
}

std::string plot_data_csv(const Config& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "check,param,residual,tolerance,stderr\n";

  for (int n : {64, 128, 256, 512, 1024}) {
    const numerics::Grid1D grid(n, 8.0);
    const auto f = sample_grid(grid, [](double x) {
      return std::exp(-kPi * x * x) * std::exp(cplx(0.0, 2.0 * kPi * 0.4 * x));
    });
    const auto back = numerics::dft_inverse(grid, numerics::dft_forward(grid, f));
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
      worst = std::max(worst, std::abs(back[j] - f[j]));
    os << "dft_roundtrip," << n << "," << worst << "," << 1e-12 << ",\n";
  }

  for (int n : {64, 128, 256, 512, 1024}) {
    const numerics::Grid1D grid(n, 8.0);
    const auto f = sample_grid(
        grid, [](double x) { return cplx(std::exp(-kPi * x * x), 0.0); });
    const double rhs = zeta::cmu_norm(grid, f, 0.5);
    const double lhs = grid_norm(grid, zeta::f_mu(grid, f, 0.5));
    os << "fractional_parseval," << n << ","
       << std::abs(lhs * lhs - rhs * rhs) / (rhs * rhs) << "," << 1e-6 << ",\n";
  }

  for (int n : {64, 256, 1024}) {
    const repsim::GridGeometry geo(n, std::sqrt(static_cast<double>(n)) / 2.0);
    const auto fam = repsim::gaussian_test_family(geo);
    const auto na = repsim::nil_from_coords(coords6(0.3, -0.2, 0.1, 0.4, -0.5, 0.2));
    const auto nb = repsim::nil_from_coords(coords6(-0.1, 0.3, 0.2, -0.3, 0.2, 0.5));
    const auto la = repsim::lambda_o(geo, na);
    const auto lb = repsim::lambda_o(geo, nb);
    const auto lab = repsim::lambda_o(geo, nilgroup::multiply(na, nb));
    os << "lambda_homomorphism," << n << ","
       << repsim::family_residual(la.mat * lb.mat, lab.mat, fam) << "," << 1e-6
       << ",\n";
  }
  (void)cfg;
  return os.str();
}

}  // namespace skewharmonic::report
