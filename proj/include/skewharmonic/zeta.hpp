// The Pfaffian zeta functional Z_s on skew 2q x 2q matrices: gamma
// normalization, exact Gaussian-polynomial descriptors with closed-form
// Fourier transforms, quadrature (q=1) and importance-sampled Monte Carlo
// (q=2) evaluation, the functional equation, the fractional unitarizer on
// the q=1 grid, and the translation/reductive action on L^2.
#pragma once

#include "skewharmonic/numerics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

namespace skewharmonic::zeta {

using cplx = std::complex<double>;

// pi^{(q/2)(s+2q-1)} / prod_{j<q} Gamma((s+2q-1)/2 - j). At a Gamma pole the
// reciprocal vanishes: value 0 with the flag set.
struct GammaFactor {
  double value = 0.0;
  bool at_pole = false;
};
GammaFactor gamma_factor(double s, int q);

// Entry coordinates: the strict upper triangle of a skew 2q x 2q matrix,
// lexicographic. dim = q(2q-1).
int x_dim(int q);
Eigen::MatrixXd assemble_skew(int q, const Eigen::VectorXd& x);
double pfaffian_entry(int q, const Eigen::VectorXd& x);

// h(x) = Pf(x)^pf_power * P(x) * e^{-width pi (x,x)} with P a sparse
// polynomial in the entry coordinates and (x,x) = sum of squared entries.
// The Pfaffian power is kept explicit: it declares the vanishing order along
// {Pf = 0} that the Monte Carlo integrability guard relies on.
struct XDescriptor {
  using Poly = std::map<std::vector<int>, cplx>;

  int q = 1;
  double width = 1.0;
  int pf_power = 0;
  Poly poly;  // empty polynomial means the zero function

  // When set, fourier() returns *fourier_image exactly; established by
  // inverse_fourier_x so that a descriptor and its transform form an exact
  // pair (Fourier inversion holds structurally, not just to roundoff).
  std::shared_ptr<const XDescriptor> fourier_image;

  static XDescriptor gaussian(int q, double width);
  XDescriptor times_pf_power(int k) const;
  XDescriptor times_monomial(const std::vector<int>& deg, cplx coeff) const;
  XDescriptor plus_monomial(const std::vector<int>& deg, cplx coeff) const;
  XDescriptor scaled(cplx c) const;

  cplx evaluate(const Eigen::VectorXd& x) const;
  XDescriptor scale_argument(double c) const;  // h(c x)
  XDescriptor parity() const;                  // h(-x)
  bool is_zero() const { return poly.empty(); }
};

// Euclidean Fourier transform with kernel e^{2 pi i (x,zeta)},
// (x,zeta) = sum_{i<j} x_ij zeta_ij; Lebesgue measure on the entries. The
// self-dual Gaussian e^{-pi (x,x)} is a fixed point.
XDescriptor fourier_x(const XDescriptor& h);
XDescriptor inverse_fourier_x(const XDescriptor& h);

// Z_s(h) = gamma_{s,2q} Int h(x) |Pf x|^s dx.
//
// q = 1: adaptive quadrature with |t|^s endpoint weighting for s > -1 and a
// one-term subtraction continuation on -3 < s < -1; throws std::domain_error
// at s = -1 and s <= -3.
double zeta_quadrature(const XDescriptor& h, double s);

// q = 2: importance-sampled Monte Carlo in radial-angular coordinates with
// the Gaussian proposal matched to the descriptor width and the |Pf|
// singularity folded into the proposal. Requires s + pf_power > -1 (local
// integrability along the Pfaffian divisor); throws std::domain_error
// otherwise and std::runtime_error when stderr/|mean| ends above 0.05.
numerics::MonteCarloEstimate zeta_monte_carlo(const XDescriptor& h, double s,
                                              std::uint64_t n, std::uint64_t seed);

// Ordered radial moment integral
//   R2(sigma, a) = Int_{w1>w2>0} (w1 w2)^sigma (w1^2-w2^2)^2 e^{-a pi (w1^2+w2^2)},
// in closed Gamma form; the q=2 radial Jacobian normalizer (8 pi^2 R2(0,a)
// equals the Gaussian volume a^{-3}).
double radial_moment2(double sigma, double a);

// |Z_{s-(2q-1)}(F h) - Z_{-s}(h)|. Quadrature on both sides at q=1
// (stderr_combined = 0); Monte Carlo on both sides at q=2 with n samples per
// side and stderr_combined the root sum of squares.
struct FunctionalEqCheck {
  double side_fourier = 0.0;
  double side_direct = 0.0;
  double residual = 0.0;
  double stderr_combined = 0.0;
};
FunctionalEqCheck functional_eq_check(const XDescriptor& h, double s,
                                      std::uint64_t n = 0, std::uint64_t seed = 0);

// Fractional unitarizer on the q=1 grid: F^{-1}(|tau|^{-mu/2} F f) with the
// weight realized by exact cell averages of |tau|^{-mu} (square roots as the
// multiplier), so the grid Parseval identity against cmu_norm is exact.
// mu in [0, 1).
std::vector<cplx> f_mu(const numerics::Grid1D& g, const std::vector<cplx>& f, double mu);

// || |tau|^{-mu/2} F f ||_2 with the same cell-averaged weights.
double cmu_norm(const numerics::Grid1D& g, const std::vector<cplx>& f, double mu);

// phi(t - z) by Fourier phase; exactly unitary on the grid. Throws
// std::domain_error when |z| > half_width / 2 (support escape).
std::vector<cplx> pi_sharp_translate(const numerics::Grid1D& g, double z,
                                     const std::vector<cplx>& phi);

// phi(t) -> |det g|^{1/2} phi(det(g) t) for g in GL+_2, the unique amplitude
// power making the coordinate action unitary; band-limited evaluation off
// the lattice. Requires det g in [1/4, 4] (bandwidth guard).
std::vector<cplx> pi_sharp_gl(const numerics::Grid1D& g, const Eigen::Matrix2d& gm,
                              const std::vector<cplx>& phi);

}  // namespace skewharmonic::zeta
