// Discretized orbit-method representations: splitting, Schrodinger model,
// group Fourier transform, Weyl kernel, trace identity, metaplectic action,
// parity, and the commutant witness.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "skewharmonic/liegroups.hpp"
#include "skewharmonic/nilgroup.hpp"
#include "skewharmonic/numerics.hpp"
#include "skewharmonic/orbits.hpp"
#include "skewharmonic/repsim.hpp"
#include "skewharmonic/skewlin.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace skewharmonic;
using repsim::cplx;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = 3.14159265358979323846;

repsim::GridGeometry default_geometry() { return repsim::GridGeometry(256, 8.0); }

VectorXd coords6(double a, double b, double c, double d, double e, double f) {
  VectorXd v(6);
  v << a, b, c, d, e, f;
  return v;
}

repsim::GaussPoly product6(double a, double b, double c, double d, double e, double f) {
  return repsim::product_gaussian(coords6(a, b, c, d, e, f));
}

}  // namespace

TEST_CASE("heisenberg splitting: dimensions, orthogonality, pairing") {
  for (int q : {2, 3}) {
    const int p = 2 * q - 1;
    const auto split = repsim::heisenberg_split(q);
    CHECK(static_cast<int>(split.h_basis.size()) == 2 * q - 1);
    const int zdim = p * (p - 1) / 2;
    CHECK(static_cast<int>(split.n0_basis.size()) == zdim - 1 + 1);
    CHECK(static_cast<int>(split.h_basis.size() + split.n0_basis.size()) == zdim + p);

    for (const auto& hb : split.h_basis)
      for (const auto& nb : split.n0_basis)
        CHECK(std::abs(repsim::m_inner(hb, nb)) < 1e-12);

    // B restricted to the X/Y span is the standard symplectic matrix.
    const int s = 2 * (q - 1);
    MatrixXd want = MatrixXd::Zero(s, s);
    want.topRightCorner(q - 1, q - 1) = MatrixXd::Identity(q - 1, q - 1);
    want.bottomLeftCorner(q - 1, q - 1) = -MatrixXd::Identity(q - 1, q - 1);
    CHECK((split.pairing - want).norm() < 1e-12);
    CHECK(std::abs(split.pairing.determinant()) > 0.5);

    // Radical of B on the R^p part is exactly the v_o direction.
    MatrixXd bfull(p, p);
    std::vector<nilgroup::NilPoint> vdirs;
    for (int i = 0; i < p; ++i)
      vdirs.push_back(
          nilgroup::NilPoint(MatrixXd::Zero(p, p), VectorXd::Unit(p, i)));
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) bfull(i, j) = repsim::pairing_on(q, vdirs[i], vdirs[j]);
    CHECK((bfull * VectorXd::Unit(p, p - 1)).norm() < 1e-14);
    Eigen::FullPivLU<MatrixXd> lu(bfull);
    lu.setThreshold(1e-10);
    CHECK(lu.rank() == p - 1);
  }
  CHECK_THROWS_AS(repsim::heisenberg_split(1), std::invalid_argument);
}

TEST_CASE("grid geometry and basic operators") {
  CHECK_THROWS_AS(repsim::GridGeometry(256, 7.0), std::invalid_argument);
  const auto geo = default_geometry();
  CHECK(geo.grid.h == doctest::Approx(geo.grid.dtau).epsilon(1e-14));

  // The Fourier operator is the same map as the transform routine.
  const auto fop = repsim::fourier_op(geo);
  CHECK(fop.n == 256);
  CHECK(fop.half_width == 8.0);
  numerics::CounterRng rng(131, 1);
  std::vector<cplx> in(256);
  VectorXcd inv(256);
  for (int j = 0; j < 256; ++j) {
    in[j] = cplx(rng.normal(), rng.normal());
    inv(j) = in[j];
  }
  const auto out = numerics::dft_forward(geo.grid, in);
  const VectorXcd outv = fop.mat * inv;
  double diff = 0.0;
  for (int k = 0; k < 256; ++k) diff = std::max(diff, std::abs(out[k] - outv(k)));
  CHECK(diff < 1e-11);
  CHECK(repsim::unitarity_residual(fop) < 1e-8);

  // Reflection is an exact permutation squaring to the identity.
  const auto u = repsim::reflection_u(geo);
  for (int j = 0; j < 256; ++j) {
    double rowsum = 0.0;
    for (int m = 0; m < 256; ++m) {
      const double a = std::abs(u.mat(j, m));
      CHECK((a == 0.0 || a == 1.0));
      rowsum += a;
    }
    CHECK(rowsum == 1.0);
  }
  CHECK((u.mat * u.mat - MatrixXcd::Identity(256, 256)).norm() == 0.0);
  VectorXcd even(256);
  for (int j = 0; j < 256; ++j) {
    const double x = geo.grid.x(j);
    even(j) = std::exp(-kPi * x * x);
  }
  CHECK((u.mat * even - even).norm() / even.norm() < 1e-12);
}

TEST_CASE("lambda: identity, central characters, support escape") {
  const auto geo = default_geometry();
  const int n = geo.grid.n;
  const MatrixXcd id = MatrixXcd::Identity(n, n);

  CHECK((repsim::lambda_o(geo, nilgroup::NilPoint::identity(3)).mat - id).norm() < 1e-12);

  // Central characters, checked against the moment-matrix pairing route.
  const nilgroup::NilPoint o = orbits::base_point(2);
  const skewlin::SkewMatrix jq(skewlin::standard_form(2));
  numerics::CounterRng rng(132, 0);
  for (int t = 0; t < 4; ++t) {
    VectorXd c = VectorXd::Zero(6);
    for (int i = 0; i < 3; ++i) c(i) = 2.0 * rng.uniform() - 1.0;
    const nilgroup::NilPoint zc = repsim::nil_from_coords(c);
    const Eigen::MatrixXd m =
        liegroups::moment_matrix(zc.z, VectorXd::Zero(3));
    const double pair = skewlin::inner(skewlin::SkewMatrix(m), jq);
    const cplx want = std::exp(cplx(0.0, 2.0 * kPi * pair));
    CHECK((repsim::lambda_o(geo, zc).mat - want * id).norm() < 1e-11);
  }
  // z = z_o, t = 1: the pairing is q - 1 = 1, so the scalar is 1.
  CHECK((repsim::lambda_o(geo, nilgroup::NilPoint(o.z, VectorXd::Zero(3))).mat - id)
            .norm() < 1e-12);
  // exp(t o) acts by e^{2 pi i q t}.
  for (double t : {0.3, -0.7, 1.0}) {
    const nilgroup::NilPoint to(t * o.z, t * o.v);
    const cplx want = std::exp(cplx(0.0, 2.0 * kPi * 2.0 * t));
    CHECK((repsim::lambda_o(geo, to).mat - want * id).norm() < 1e-11);
  }

  CHECK_THROWS_AS(
      repsim::lambda_o(geo, repsim::nil_from_coords(coords6(0, 0, 0, 5.0, 0, 0))),
      std::domain_error);
  CHECK_THROWS_AS(repsim::lambda_o(geo, nilgroup::NilPoint::identity(5)),
                  std::domain_error);
}

TEST_CASE("lambda: homomorphism over 100 random pairs") {
  const auto geo = default_geometry();
  const auto fam = repsim::gaussian_test_family(geo);
  numerics::CounterRng rng(133, 0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    VectorXd ca(6), cb(6);
    for (int i = 0; i < 6; ++i) {
      ca(i) = 2.0 * rng.uniform() - 1.0;
      cb(i) = 2.0 * rng.uniform() - 1.0;
    }
    const auto na = repsim::nil_from_coords(ca);
    const auto nb = repsim::nil_from_coords(cb);
    const MatrixXcd prod =
        repsim::lambda_o(geo, na).mat * repsim::lambda_o(geo, nb).mat;
    const MatrixXcd direct = repsim::lambda_o(geo, nilgroup::multiply(na, nb)).mat;
    worst = std::max(worst, repsim::family_residual(prod, direct, fam));
  }
  CHECK(worst < 1e-6);
  MESSAGE("homomorphism worst residual over 100 pairs: ", worst);
}

TEST_CASE("lambda: unitarity per generator type") {
  const auto geo = default_geometry();
  const std::vector<VectorXd> gens = {
      coords6(0.4, -0.2, 0.7, 0, 0, 0),   // central
      coords6(0, 0, 0, 0.9, 0, 0),        // translation
      coords6(0, 0, 0, 0, 1.3, 0),        // modulation
      coords6(0, 0, 0, 0, 0, 0.8),        // w direction
      coords6(0.3, 0.1, -0.5, 0.6, -0.4, 0.9)};  // mixed
  for (const auto& c : gens) {
    const auto lam = repsim::lambda_o(geo, repsim::nil_from_coords(c));
    CHECK(repsim::unitarity_residual(lam) < 1e-8);
  }
}

TEST_CASE("gaussian descriptors match quadrature oracles") {
  // Composite descriptor: widths, modulation, shift, one linear factor.
  VectorXd sig(2);
  sig << 1.0, 0.8;
  auto f = repsim::product_gaussian(sig);
  VectorXcd fr(2);
  fr << cplx(0.3, 0), cplx(-0.2, 0);
  f = repsim::with_phase(f, fr);
  VectorXd sh(2);
  sh << 0.4, -0.1;
  f = repsim::shifted(f, sh);
  VectorXcd co(2);
  co << cplx(1.0, 0.5), cplx(-0.3, 0);
  f = repsim::with_linear_factor(f, co, cplx(0.2, 0.1));

  // Direct evaluation against the defining formula.
  {
    const VectorXd pt = (VectorXd(2) << 0.7, -0.5).finished();
    const double u0 = pt(0) - 0.4, u1 = pt(1) + 0.1;  // shift precedes the factor
    const cplx gauss = std::exp(cplx(0.0, 2.0 * kPi * (0.3 * u0 - 0.2 * u1))) *
                       std::exp(-kPi * (u0 * u0 / 1.0 + u1 * u1 / 0.64));
    const cplx want =
        (cplx(0.2, 0.1) + cplx(1.0, 0.5) * pt(0) - 0.3 * pt(1)) * gauss;
    CHECK(std::abs(f.evaluate(pt) - want) < 1e-13);
  }

  // Marginalization against adaptive quadrature.
  const auto g = repsim::integrate_out(f, {0});
  for (double u1 : {0.0, 0.5, -1.2}) {
    const double re = numerics::quad_adaptive(
        [&](double u0) {
          return f.evaluate((VectorXd(2) << u0, u1).finished()).real();
        },
        -12, 12);
    const double im = numerics::quad_adaptive(
        [&](double u0) {
          return f.evaluate((VectorXd(2) << u0, u1).finished()).imag();
        },
        -12, 12);
    const cplx got = g.evaluate((VectorXd(1) << u1).finished());
    CHECK(std::abs(got - cplx(re, im)) < 1e-10);
  }

  // Full integral against iterated quadrature.
  {
    auto inner = [&](double u1, bool re) {
      return numerics::quad_adaptive(
          [&](double u0) {
            const cplx v = f.evaluate((VectorXd(2) << u0, u1).finished());
            return re ? v.real() : v.imag();
          },
          -12, 12);
    };
    const double re =
        numerics::quad_adaptive([&](double u1) { return inner(u1, true); }, -12, 12, 1e-10, 1e-9);
    const double im =
        numerics::quad_adaptive([&](double u1) { return inner(u1, false); }, -12, 12, 1e-10, 1e-9);
    CHECK(std::abs(repsim::full_integral(f) - cplx(re, im)) < 1e-8);
  }

  CHECK_THROWS_AS(repsim::with_linear_factor(f, co, cplx(0, 0)), std::logic_error);
}

TEST_CASE("partial integral: product, odd, fubini") {
  const auto f = product6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1);
  const auto m = repsim::partial_integral(f, repsim::N0Character::unit);
  CHECK(m.dim() == 3);

  // Product Gaussian marginalizes to a product Gaussian scaled by the
  // integrated widths.
  const double mass = 1.2 * 0.8 * 1.1;
  const VectorXd pt = (VectorXd(3) << 0.3, -0.4, 0.6).finished();
  const double want =
      mass * std::exp(-kPi * (0.09 / 1.0 + 0.16 / 1.0 + 0.36 / 0.81));
  CHECK(std::abs(m.evaluate(pt) - want) < 1e-12);

  // Fubini holds for the plain marginal.
  CHECK(std::abs(repsim::full_integral(m) - repsim::full_integral(f)) <
        1e-12 * std::abs(repsim::full_integral(f)));

  // Odd in an integrated coordinate kills the marginal identically.
  VectorXcd co = VectorXcd::Zero(6);
  co(1) = 1.0;  // linear in the first integrated coordinate
  const auto fo = repsim::with_linear_factor(f, co, cplx(0, 0));
  const auto mo = repsim::partial_integral(fo, repsim::N0Character::unit);
  CHECK(std::abs(mo.poly_const) < 1e-15);
  CHECK(mo.poly_coef.norm() < 1e-15);
  CHECK(std::abs(mo.evaluate(pt)) < 1e-15);

  // The character-twisted marginal differs only through the w direction.
  const auto mb = repsim::partial_integral(f, repsim::N0Character::base_point);
  CHECK(std::abs(repsim::full_integral(mb)) < std::abs(repsim::full_integral(m)));

  VectorXd sig3(3);
  sig3 << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(
      repsim::partial_integral(repsim::product_gaussian(sig3), repsim::N0Character::unit),
      std::invalid_argument);
}

TEST_CASE("fourier kernel: closed form and trace identity") {
  const auto geo = default_geometry();
  const auto f = product6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1);

  // Product Gaussians give a factorized kernel in closed form.
  numerics::Grid1D g64(64, 4.0);
  const MatrixXcd k = repsim::fourier_kernel(g64, f);
  auto hat = [](double s, double freq) {
    return s * std::exp(-kPi * s * s * freq * freq);
  };
  for (auto [ji, mi] : {std::pair{20, 30}, std::pair{32, 32}, std::pair{10, 50}}) {
    const double xi = g64.x(ji), eta = g64.x(mi);
    const double x = eta - xi;
    const cplx want = hat(1.0, 1.0) * 1.2 * 0.8 * std::exp(-kPi * x * x) *
                      hat(0.9, 0.5 * (xi + eta)) * hat(1.1, 0.5);
    CHECK(std::abs(k(ji, mi) - want) <= 1e-12 * std::abs(want) + 1e-15);
  }

  // Trace identity: the reflected-kernel trace over the transform at the
  // base point is constant across the family.
  std::vector<repsim::GaussPoly> family;
  family.push_back(f);
  family.push_back(repsim::shifted(product6(0.8, 1.0, 1.1, 0.9, 1.2, 0.7),
                                   coords6(0.2, 0.0, -0.1, 0.1, 0.0, 0.2)));
  {
    VectorXcd fr(6);
    fr << 0.1, -0.1, 0.2, 0.0, 0.1, -0.2;
    family.push_back(repsim::with_phase(product6(1.1, 0.9, 1.0, 1.2, 0.8, 1.0), fr));
  }
  const auto tc = repsim::trace_check(geo, family);
  CHECK(tc.spread < 1e-3);
  // The measured constant for this kernel normalization; pinned as a
  // regression value.
  for (const cplx& r : tc.ratios) CHECK(std::abs(r - cplx(0.5, 0.0)) < 1e-9);
  MESSAGE("trace ratio spread: ", tc.spread);

  // Rescaling the descriptor rescales both sides exactly.
  const auto scaled = repsim::scaled_by(f, cplx(2.5, 0.0));
  const cplx ta =
      repsim::kernel_trace(geo.grid, repsim::fourier_kernel(geo.grid, f), true);
  const cplx tb =
      repsim::kernel_trace(geo.grid, repsim::fourier_kernel(geo.grid, scaled), true);
  CHECK(std::abs(tb - 2.5 * ta) < 1e-12 * std::abs(tb));

  // Odd descriptor in a direction unpaired with the base-point phase:
  // both sides are odd one-dimensional integrals and vanish.
  VectorXcd codd = VectorXcd::Zero(6);
  codd(3) = 1.0;
  const auto fodd = repsim::with_linear_factor(f, codd, cplx(0, 0));
  const cplx todd =
      repsim::kernel_trace(geo.grid, repsim::fourier_kernel(geo.grid, fodd), true);
  const cplx ffodd = repsim::euclid_fourier(fodd, orbits::base_point(2));
  CHECK(std::abs(todd) < 1e-6 * std::abs(ta));
  CHECK(std::abs(ffodd) < 1e-12);

  // Degenerate families are rejected.
  CHECK_THROWS_AS(repsim::trace_check(geo, {f, family[1]}), std::invalid_argument);
  CHECK_THROWS_AS(repsim::trace_check(geo, {fodd, fodd, fodd}), std::invalid_argument);
}

TEST_CASE("weyl kernel: closed form, symmetry, route agreement") {
  // Centered real descriptor on the h coordinates: the kernel factorizes
  // into Gaussians in x+y and y-x.
  numerics::Grid1D g64(64, 4.0);
  VectorXd sig3(3);
  sig3 << 0.9, 1.1, 0.8;
  const auto fh = repsim::product_gaussian(sig3);
  const MatrixXcd kw = repsim::weyl_kernel(g64, fh);
  const cplx tconst = 0.9 * std::exp(-kPi * 0.81);
  for (auto [ji, mi] : {std::pair{20, 30}, std::pair{30, 20}, std::pair{40, 40}}) {
    const double x = g64.x(ji), y = g64.x(mi);
    const cplx want = tconst * std::exp(-kPi * (y - x) * (y - x) / (1.1 * 1.1)) *
                      0.8 * std::exp(-kPi * 0.64 * 0.25 * (x + y) * (x + y));
    CHECK(std::abs(kw(ji, mi) - want) <= 1e-9 * std::abs(want) + 1e-12);
  }
  CHECK((kw - kw.transpose()).norm() / kw.norm() < 1e-8);

  // Route agreement: marginalize then build the kernel by quadrature, or
  // build it directly from the full descriptor in closed form.
  repsim::GridGeometry g128(128, std::sqrt(128.0) / 2.0);
  for (int variant = 0; variant < 2; ++variant) {
    auto f = product6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1);
    if (variant == 1) {
      f = repsim::shifted(f, coords6(0.1, -0.2, 0.2, 0.3, -0.1, 0.2));
      VectorXcd fr(6);
      fr << 0.0, 0.1, -0.1, 0.2, 0.1, 0.0;
      f = repsim::with_phase(f, fr);
    }
    const MatrixXcd direct = repsim::fourier_kernel(g128.grid, f);
    const auto fonh = repsim::partial_integral(f, repsim::N0Character::base_point);
    const MatrixXcd viaweyl = repsim::weyl_kernel(g128.grid, fonh);
    CHECK((viaweyl - direct).norm() / direct.norm() < 1e-5);
  }

  CHECK_THROWS_AS(repsim::weyl_kernel(g64, product6(1, 1, 1, 1, 1, 1)),
                  std::invalid_argument);
}

TEST_CASE("group fourier: narrow limit and involution") {
  const auto geo = default_geometry();
  const nilgroup::NilPoint o = orbits::base_point(2);

  // Narrow descriptor acts as multiplication by its mass. Widths along the
  // kernel's off-diagonal direction must stay above the grid spacing.
  const auto narrow = product6(0.02, 0.1, 0.1, 0.15, 0.02, 0.02);
  const auto op = repsim::group_fourier(geo, narrow, o);
  CHECK(repsim::unitarity_residual(repsim::lambda_o(geo, o)) < 1e-8);
  const cplx mass = repsim::full_integral(narrow);
  double worst = 0.0;
  for (auto [c, s] : {std::pair{0.0, 2.0}, {0.0, 3.0}, {0.5, 2.0}, {-0.5, 2.0}}) {
    VectorXcd psi(geo.grid.n);
    for (int j = 0; j < geo.grid.n; ++j) {
      const double x = geo.grid.x(j);
      psi(j) = std::exp(-kPi * (x - c) * (x - c) / (s * s));
    }
    worst = std::max(worst,
                     (op.mat * psi - mass * psi).norm() / (std::abs(mass) * psi.norm()));
  }
  CHECK(worst < 1e-2);
  MESSAGE("narrow-descriptor residual: ", worst);

  // Involution: conjugate-inverse on the group side is the adjoint on the
  // operator side.
  auto f = product6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1);
  f = repsim::shifted(f, coords6(0.2, -0.1, 0.3, 0.1, -0.2, 0.15));
  {
    VectorXcd fr(6);
    fr << 0.1, 0.0, -0.2, 0.3, 0.1, -0.1;
    f = repsim::with_phase(f, fr);
  }
  repsim::GaussPoly fstar = f;
  fstar.quad = f.quad.conjugate();
  fstar.lin = f.lin.conjugate();
  fstar.logamp = std::conj(f.logamp);
  fstar.poly_coef = f.poly_coef.conjugate();
  fstar.poly_const = std::conj(f.poly_const);
  fstar = repsim::pullback(fstar, -MatrixXd::Identity(6, 6), VectorXd::Zero(6));
  const auto lhs = repsim::group_fourier(geo, fstar, o);
  const auto rhs = repsim::group_fourier(geo, f, o);
  CHECK((lhs.mat - rhs.mat.adjoint()).norm() / rhs.mat.norm() < 1e-5);

  CHECK_THROWS_AS(repsim::group_fourier(geo, f, nilgroup::NilPoint::identity(5)),
                  std::invalid_argument);
}

TEST_CASE("metaplectic: identity, unitarity, action") {
  const auto geo = default_geometry();
  const int n = geo.grid.n;

  // Identity parameter short-circuits to the exact identity.
  CHECK((repsim::metaplectic_dilation(geo, 1.0).mat - MatrixXcd::Identity(n, n))
            .norm() == 0.0);

  const auto dil = repsim::metaplectic_dilation(geo, 2.0);
  const auto shear = repsim::metaplectic_shear(geo, 0.7);
  const auto rot = repsim::metaplectic_rotation(geo);
  CHECK(repsim::unitarity_residual(dil) < 1e-8);
  CHECK(repsim::unitarity_residual(shear) < 1e-8);
  CHECK(repsim::unitarity_residual(rot) < 1e-8);

  // Dilation acts by a^{-1/2} psi(x/a) up to a global phase.
  VectorXcd psi(n), ideal(n);
  for (int j = 0; j < n; ++j) {
    const double x = geo.grid.x(j);
    psi(j) = std::exp(-kPi * x * x);
    ideal(j) = std::exp(-kPi * x * x / 4.0) / std::sqrt(2.0);
  }
  const VectorXcd got = dil.mat * psi;
  const cplx ip = ideal.dot(got);
  const cplx phase = ip / std::abs(ip);
  CHECK((got / phase - ideal).norm() / ideal.norm() < 1e-6);
  MESSAGE("dilation word global phase: ", std::arg(phase));

  // The rotation squares to the reflection and has order four.
  const MatrixXcd f2 = rot.mat * rot.mat;
  CHECK((f2 - repsim::reflection_u(geo).mat).norm() < 1e-10);
  CHECK((f2 * f2 - MatrixXcd::Identity(n, n)).norm() < 1e-10);

  // Shear is the chirp multiplier.
  for (int j : {0, 100, 200}) {
    const double x = geo.grid.x(j);
    CHECK(std::abs(shear.mat(j, j) - std::exp(cplx(0.0, kPi * 0.7 * x * x))) < 1e-14);
  }

  CHECK_THROWS_AS(repsim::metaplectic_dilation(geo, 0.0), std::domain_error);
  CHECK_THROWS_AS(repsim::metaplectic_dilation(geo, 8.0), std::domain_error);
}

TEST_CASE("covariance of the metaplectic action") {
  const auto geo = default_geometry();

  const Eigen::Matrix2d a_id = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d a_dil2, a_dilh, a_shear, a_rot;
  a_dil2 << 2, 0, 0, 0.5;
  a_dilh << 0.5, 0, 0, 2;
  a_shear << 1, 0, -0.7, 1;
  a_rot << 0, 1, -1, 0;

  const auto tau_id = repsim::identity_op(geo);
  const auto tau_dil2 = repsim::metaplectic_dilation(geo, 2.0);
  const auto tau_dilh = repsim::metaplectic_dilation(geo, 0.5);
  const auto tau_shear = repsim::metaplectic_shear(geo, 0.7);
  const auto tau_rot = repsim::metaplectic_rotation(geo);

  // Modulation points stay below half the band margin: a dilation halves a
  // member's width, and the doubled frequency content plus the modulation
  // must remain resolved.
  const std::vector<nilgroup::NilPoint> points = {
      repsim::nil_from_coords(coords6(0, 0, 0, 1, 0, 0)),
      repsim::nil_from_coords(coords6(0.4, 0, 0, 0, 0, 0)),
      repsim::nil_from_coords(coords6(0.2, 0, 0, 0.7, 0.4, 0.3)),
      repsim::nil_from_coords(coords6(0, 0, 0, 0, 0.4, 0)),
      repsim::nil_from_coords(coords6(0, 0, 0, 0, 0, 1.1))};

  // Identity generator commutes exactly.
  for (const auto& pt : points)
    CHECK(repsim::covariance_check(geo, tau_id, a_id, pt) < 1e-13);

  struct Combo {
    const repsim::GridOperator* tau;
    const Eigen::Matrix2d* a;
  };
  const std::vector<Combo> combos = {{&tau_dil2, &a_dil2},
                                     {&tau_dilh, &a_dilh},
                                     {&tau_shear, &a_shear},
                                     {&tau_rot, &a_rot}};
  double worst = 0.0;
  for (const auto& combo : combos)
    for (const auto& pt : points)
      worst = std::max(worst, repsim::covariance_check(geo, *combo.tau, *combo.a, pt));
  CHECK(worst < 1e-5);
  MESSAGE("covariance matrix worst residual: ", worst);

  // Named cases: dilation at the first coordinate vector, rotation at a
  // central point.
  CHECK(repsim::covariance_check(geo, tau_dil2, a_dil2, points[0]) < 1e-5);
  CHECK(repsim::covariance_check(geo, tau_rot, a_rot, points[1]) < 1e-6);

  // Generators outside the stabilizer are rejected up front.
  Eigen::Matrix2d bad;
  bad << 2, 0, 0, 1;
  CHECK_THROWS_AS(repsim::covariance_check(geo, tau_id, bad, points[0]),
                  std::invalid_argument);
}

TEST_CASE("parity: the reflection commutes with the metaplectic action") {
  const auto geo = default_geometry();
  CHECK(repsim::parity_commutator(geo, repsim::identity_op(geo)) == 0.0);
  CHECK(repsim::parity_commutator(geo, repsim::metaplectic_dilation(geo, 2.0)) < 1e-8);
  CHECK(repsim::parity_commutator(geo, repsim::metaplectic_shear(geo, 0.7)) < 1e-8);
  CHECK(repsim::parity_commutator(geo, repsim::metaplectic_rotation(geo)) < 1e-6);
  MESSAGE("rotation parity commutator: ",
          repsim::parity_commutator(geo, repsim::metaplectic_rotation(geo)));
}

TEST_CASE("schur commutant witness") {
  repsim::GridGeometry geo(64, 4.0);
  const auto f = product6(1.0, 1.2, 0.8, 1.0, 0.9, 1.1);

  const auto at_id =
      repsim::schur_experiment(geo, f, Eigen::Matrix3d::Identity(), 10, 137);
  CHECK(at_id.commutator_norm < 1e-10);
  CHECK(at_id.constant == doctest::Approx(0.5).epsilon(1e-6));

  Eigen::Matrix3d diag2 = Eigen::Matrix3d::Identity();
  diag2(0, 0) = 2.0;
  const auto at_diag = repsim::schur_experiment(geo, f, diag2, 10, 137);
  CHECK(at_diag.commutator_norm >= 100.0 * at_diag.baseline);
  CHECK(at_diag.commutator_norm > 0.1);
  MESSAGE("witness separation: ", at_diag.commutator_norm, " vs baseline ",
          at_diag.baseline);

  // Stabilizer elements are reported, not asserted. The orthogonal one is
  // invisible to the section-based witness; the shear moves the section
  // transpose and registers.
  Eigen::Matrix2d rot2, sh2;
  rot2 << 0, 1, -1, 0;
  sh2 << 1, 1, 0, 1;
  const auto at_rot =
      repsim::schur_experiment(geo, f, repsim::embed_sl2(rot2), 10, 137);
  const auto at_stab =
      repsim::schur_experiment(geo, f, repsim::embed_sl2(sh2), 10, 137);
  MESSAGE("orthogonal stabilizer commutator (not asserted): ", at_rot.commutator_norm);
  MESSAGE("shear stabilizer commutator (not asserted): ", at_stab.commutator_norm);

  CHECK_THROWS_AS(repsim::schur_experiment(geo, f, diag2, 7, 137),
                  std::invalid_argument);
}
