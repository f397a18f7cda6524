// Two-step nilpotent group on pairs (z, v), z skew p x p, v in R^p, with the
// linear reductive action, moment matrix invariants, and an exact Gaussian
// calculus for functions on the group.
#pragma once

#include <Eigen/Dense>

namespace skewharmonic::nilgroup {

// Group element. The skew part is re-antisymmetrized at every construction,
// so z == -z^T holds bit-exactly throughout.
struct NilPoint {
  Eigen::MatrixXd z;
  Eigen::VectorXd v;

  NilPoint(const Eigen::MatrixXd& z_, const Eigen::VectorXd& v_);
  int p() const { return static_cast<int>(v.size()); }
  static NilPoint identity(int p);
};

// (z1, v1)(z2, v2) = (z1 + z2 + (v1 v2^T - v2 v1^T)/2, v1 + v2).
NilPoint multiply(const NilPoint& a, const NilPoint& b);
NilPoint inverse(const NilPoint& a);

// g . (z, v) = (g z g^T, g v), g in GL(p). Automorphism of the group law.
NilPoint gl_action(const Eigen::MatrixXd& g, const NilPoint& n);

// det of the (p+1) x (p+1) moment matrix [[z, v/2], [-v^T/2, 0]].
double det_moment(const NilPoint& n);

// det(z + v v^T / 2).
double q_kernel(const NilPoint& n);

// q_kernel / det_moment where the denominator is nonzero.
double kernel_ratio(const NilPoint& n);

// Residual of the cocycle identity
//   -M(n0) + h^T M(n) h = M(n0^{-1} n),  h = [[I, v0], [0, 1]].
double moment_cocycle_residual(const NilPoint& n0, const NilPoint& n);

// Flattened coordinates: upper triangle of z lexicographic, then v.
// Lebesgue measure in these coordinates is the Haar measure.
int flat_dim(int p);
Eigen::VectorXd flatten(const NilPoint& n);
NilPoint unflatten(const Eigen::VectorXd& u, int p);

// Gaussian descriptor f(u) = amp * exp(-pi (u - m)^T Q (u - m)), Q real SPD.
// Closed under affine pullbacks; L2 pairings are in closed form, which is
// what makes operator identities testable at full precision in 6 variables.
struct QuadGaussian {
  double amp = 1.0;
  Eigen::MatrixXd Q;
  Eigen::VectorXd m;

  QuadGaussian(double amp_, const Eigen::MatrixXd& Q_, const Eigen::VectorXd& m_);
  static QuadGaussian standard(int dim);  // exp(-pi |u|^2)

  double evaluate(const Eigen::VectorXd& u) const;
  int dim() const { return static_cast<int>(m.size()); }
};

// Descriptor for u -> f(A u + b), A invertible.
QuadGaussian pullback_affine(const QuadGaussian& f, const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& b);

// int f g du and the induced norm.
double pair_l2(const QuadGaussian& f, const QuadGaussian& g);
double norm_l2(const QuadGaussian& f);

// Left regular representation: (op n0 f)(n) = f(n0^{-1} n). Unimodular, so
// no amplitude factor. Exact on descriptors.
QuadGaussian op_translate(const NilPoint& n0, const QuadGaussian& f);

// Reductive twist: (op g f)(n) = |det g|^{-p/2} f(g^{-1} . n). Unitary.
QuadGaussian op_gl(const Eigen::MatrixXd& g, const QuadGaussian& f);

// Linear part of the flattened action u -> flat(g . unflatten(u)).
Eigen::MatrixXd action_linear(const Eigen::MatrixXd& g, int p);

}  // namespace skewharmonic::nilgroup
