// Schrodinger realization attached to the base orbit: the Heisenberg
// splitting of the group, the grid representation and its metaplectic
// extension, the group Fourier transform with its kernel cross-route, the
// reflection trace identity, and the commutant witness experiment.
#pragma once

#include "skewharmonic/nilgroup.hpp"
#include "skewharmonic/numerics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace skewharmonic::repsim {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Heisenberg splitting n = h + n0 at the base point.

// h is spanned by the central direction z_o, then the X_i, then the Y_i
// (v-directions e_1, e_3, ... and e_2, e_4, ...); n0 is the orthocomplement
// of z_o inside the skew part plus the kernel direction v_o. The pairing
// matrix is B(a, b) = <o, [a, b]> restricted to the X/Y span, ordered
// X_1..X_{q-1}, Y_1..Y_{q-1}.
struct HeisenbergSplit {
  std::vector<nilgroup::NilPoint> h_basis;
  std::vector<nilgroup::NilPoint> n0_basis;
  Eigen::MatrixXd pairing;
};

// Requires q >= 2.
HeisenbergSplit heisenberg_split(int q);

// Inner product on the group pulled back through the moment matrix:
// <(z,v), (z',v')> = sum_{i<j} z_ij z'_ij + v.v' / 4.
double m_inner(const nilgroup::NilPoint& a, const nilgroup::NilPoint& b);

// <o, [a, b]> where [.,.] is the Lie bracket (central part v_a v_b^T - v_b v_a^T).
double pairing_on(int q, const nilgroup::NilPoint& a, const nilgroup::NilPoint& b);

// ---------------------------------------------------------------------------
// Grid operators.

// Operator matrices live on the centered grid x_j = (j - n/2) h, and the
// rotation generator is the centered discrete transform, so the frequency
// grid must coincide with the spatial grid: h = dtau, i.e. half_width =
// sqrt(n)/2. The constructor enforces this.
struct GridGeometry {
  numerics::Grid1D grid;
  explicit GridGeometry(int n = 256, double half_width = 8.0);
};

struct GridOperator {
  Eigen::MatrixXcd mat;
  int n = 0;
  double half_width = 0.0;
};

GridOperator identity_op(const GridGeometry& g);
// Centered unitary transform as a matrix (exactly unitary on the self-dual grid).
GridOperator fourier_op(const GridGeometry& g);
// psi(x) -> psi(-x): exact permutation, squares to the identity.
GridOperator reflection_u(const GridGeometry& g);

// Irreducible representation at the base point (q = 2), model on L^2(R):
//   [lambda(z, v) psi](xi) = e^{2 pi i (z_12 + w/2 + y (xi + x/2))} psi(xi + x)
// with v = (x, y, w). Translation is the band-limited interpolant; throws
// std::domain_error when |x| exceeds half the window (support escape).
GridOperator lambda_o(const GridGeometry& g, const nilgroup::NilPoint& n);

// Frobenius norm of U^* U - I.
double unitarity_residual(const GridOperator& u);

// Deterministic family of modulated Gaussians used to measure operator
// residuals; band-limited constructions are only meaningful on resolved
// vectors, so residuals are suprema over this family, not matrix norms.
std::vector<Eigen::VectorXcd> gaussian_test_family(const GridGeometry& g);
double family_residual(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                       const std::vector<Eigen::VectorXcd>& fam);

// ---------------------------------------------------------------------------
// Gaussian-polynomial descriptors on R^d (complex widths, at most one linear
// factor). value(u) = (poly_const + poly_coef.u) exp(-pi u^T quad u + lin.u
// + logamp), with Re(quad) positive definite on any integrated block.

struct GaussPoly {
  Eigen::MatrixXcd quad;
  Eigen::VectorXcd lin;
  cplx logamp{0.0, 0.0};
  Eigen::VectorXcd poly_coef;
  cplx poly_const{1.0, 0.0};

  int dim() const { return static_cast<int>(quad.rows()); }
  cplx evaluate(const Eigen::VectorXd& u) const;
};

// exp(-pi sum (u_i / sigma_i)^2).
GaussPoly product_gaussian(const Eigen::VectorXd& sigmas);
// f(u - center).
GaussPoly shifted(const GaussPoly& f, const Eigen::VectorXd& center);
// (constant + coef.u) * f; requires f to carry no linear factor yet.
GaussPoly with_linear_factor(const GaussPoly& f, const Eigen::VectorXcd& coef,
                             cplx constant);
// f * exp(2 pi i freq.u).
GaussPoly with_phase(const GaussPoly& f, const Eigen::VectorXcd& freq);
// f * factor.
GaussPoly scaled_by(const GaussPoly& f, cplx factor);
// u -> f(A u + s); A need not be square (embeddings and slices).
GaussPoly pullback(const GaussPoly& f, const Eigen::MatrixXd& a,
                   const Eigen::VectorXd& s);
// Closed-form marginal over the listed coordinates (Schur complement; the
// complex determinant branch is the continuous extension from real widths).
GaussPoly integrate_out(const GaussPoly& f, const std::vector<int>& idx);
cplx full_integral(const GaussPoly& f);

// ---------------------------------------------------------------------------
// Descriptors on the group at q = 2, coordinates (z12, z13, z23, x, y, w).

Eigen::VectorXd nil_coords(const nilgroup::NilPoint& n);
nilgroup::NilPoint nil_from_coords(const Eigen::VectorXd& c);
// 6x6 matrix of n -> g.n in these coordinates.
Eigen::MatrixXd coord_action(const Eigen::Matrix3d& g);
// Euclidean transform int f(n) e^{2 pi i <n, zeta>} dn at zeta, with the
// m_inner pairing.
cplx euclid_fourier(const GaussPoly& f, const nilgroup::NilPoint& zeta);

// Marginal over the n0 coordinates (z13, z23, w), down to the h coordinates
// (t, a, u) = (z12, x, y). `unit` is the plain marginal; `base_point`
// integrates against the character e^{pi i w} that the representation
// attaches to the kernel direction, which is the version the kernel formula
// below inverts.
enum class N0Character { unit, base_point };
GaussPoly partial_integral(const GaussPoly& f, N0Character ch);

// Kernel of the operator int f(n) lambda(n) dn at the base point, as a
// closed-form two-variable descriptor evaluated on the grid squared.
Eigen::MatrixXcd fourier_kernel(const numerics::Grid1D& grid, const GaussPoly& f);

// Operator route through the orbit section: lambda_w = lambda_o(g_w . n)
// with g_w from the transitivity solver, so f^(w) = |det g_w|^{-p} (f o
// g_w^{-1})^(o). w must satisfy the solver's membership requirements.
GridOperator group_fourier(const GridGeometry& g, const GaussPoly& f,
                           const nilgroup::NilPoint& w);

// Independent route: K(x, y) = int e^{2 pi i (u (x + y) / 2 + t)}
// F(t, y - x, u) dt du for F on the h coordinates. The t integral is closed
// form, the u integral is adaptive quadrature per matrix entry.
Eigen::MatrixXcd weyl_kernel(const numerics::Grid1D& grid, const GaussPoly& f_on_h);

// Trace of the integral operator with kernel k against the reflection
// (sum_j k(x_j, -x_j) h) or against the identity (sum_j k(x_j, x_j) h).
cplx kernel_trace(const numerics::Grid1D& grid, const Eigen::MatrixXcd& k,
                  bool against_reflection);

// Ratios Tr(f^(o) U) / (F f)(o) over a family of descriptors; spread is the
// largest relative pairwise gap. Requires at least 3 members.
struct TraceCheck {
  std::vector<cplx> ratios;
  double spread = 0.0;
};
TraceCheck trace_check(const GridGeometry& g, const std::vector<GaussPoly>& family);

// ---------------------------------------------------------------------------
// Metaplectic generators. Phases are the ones induced by the exact operator
// words below; covariance conjugation is phase-free.

// a^{-1/2} psi(xi / a) up to a constant phase, built as the exact unitary
// word F C(a) F^* C(1/a) F C(a) F^* F^* from chirps and the transform.
GridOperator metaplectic_dilation(const GridGeometry& g, double a);
// Multiplication by e^{pi i b xi^2}; implements [[1, 0], [-b, 1]] on (x, y).
GridOperator metaplectic_shear(const GridGeometry& g, double b);
// The centered transform; implements [[0, 1], [-1, 0]] on (x, y).
GridOperator metaplectic_rotation(const GridGeometry& g);

// SL(2) on span{e_1, e_2}, identity on the kernel direction.
Eigen::Matrix3d embed_sl2(const Eigen::Matrix2d& a);

// sup over the Gaussian family of ||tau lambda(n) tau^* psi - lambda(a.n) psi||
// / ||psi||. Requires embed_sl2(a) to fix the base point.
double covariance_check(const GridGeometry& g, const GridOperator& tau,
                        const Eigen::Matrix2d& a, const nilgroup::NilPoint& n);

// Frobenius norm of [tau, U] with the reflection.
double parity_commutator(const GridGeometry& g, const GridOperator& tau);

// ---------------------------------------------------------------------------
// Commutant witness: the fiberwise right multiplication by the reflection
// breaks equivariance under the reductive action. Orbit points are sampled
// as rotations of the base point and transported by g^{-1}; the witness
// compares the measured trace Tr(f^(zeta) U) against the constant-field
// prediction C (F f)(zeta), with C measured at the base point. The baseline
// runs the same pipeline with U -> I, whose prediction is an exact identity,
// so it measures the numerical noise floor alone.
struct SchurResult {
  double commutator_norm = 0.0;
  double baseline = 0.0;
  double constant = 0.0;  // measured Re of the trace constant at the base point
};

// Requires orbit_samples >= 8 (throws std::invalid_argument below that).
SchurResult schur_experiment(const GridGeometry& g, const GaussPoly& f,
                             const Eigen::Matrix3d& gmat, int orbit_samples,
                             std::uint64_t seed);

}  // namespace skewharmonic::repsim
