// Skew-symmetric matrices: construction invariants, Pfaffian, canonical
// congruence form, trace pairing.
#pragma once

#include <Eigen/Dense>

#include <vector>

namespace skewharmonic::skewlin {

// Antisymmetry is enforced bit-exactly at construction: the strict upper
// triangle is authoritative, a_ji := -a_ij and the diagonal is zeroed.
class SkewMatrix {
 public:
  explicit SkewMatrix(const Eigen::MatrixXd& a);
  static SkewMatrix from_upper(int n, const std::vector<double>& upper_lex);
  static SkewMatrix zero(int n);

  const Eigen::MatrixXd& mat() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  SkewMatrix() = default;
  Eigen::MatrixXd m_;
};

// Pfaffian via Parlett-Reid elimination with partial pivoting. Odd size
// returns 0 exactly. pfaffian(A)^2 == det(A) for even size.
double pfaffian(const SkewMatrix& a);

// The standard 2q x 2q block form J_q = diag(J, ..., J), J = [[0,1],[-1,0]].
Eigen::MatrixXd standard_form(int q);

// Result of the canonical congruence: r orthogonal with det +1 and
// r * z * r^T equal to diag(w_0 J, ..., w_{m-1} J, 0) with |w_0| >= ... and
// at most the last w signed (even size det correction); zeros trail.
struct SkewCanonical {
  Eigen::MatrixXd rotation;
  std::vector<double> w;  // one entry per 2x2 block, sorted by |w| descending
  int rank = 0;           // 2 * number of nonzero blocks
};

SkewCanonical skew_canonical(const Eigen::MatrixXd& z, double kernel_tol = 1e-10);

// B A B^T, re-antisymmetrized to keep the construction invariant bit-exact.
SkewMatrix congruence(const SkewMatrix& a, const Eigen::MatrixXd& b);

// Trace pairing (1/2) tr(Z W^T) = sum_{i<j} Z_ij W_ij.
double inner(const SkewMatrix& z, const SkewMatrix& w);

}  // namespace skewharmonic::skewlin
