#include "skewharmonic/nilgroup.hpp"

#include "skewharmonic/liegroups.hpp"
#include "skewharmonic/skewlin.hpp"

#include <cmath>
#include <stdexcept>

namespace skewharmonic::nilgroup {

NilPoint::NilPoint(const Eigen::MatrixXd& z_, const Eigen::VectorXd& v_)
    : z(skewlin::SkewMatrix(z_).mat()), v(v_) {
  if (z_.rows() != v_.size()) throw std::invalid_argument("NilPoint: dimension mismatch");
}

NilPoint NilPoint::identity(int p) {
  return NilPoint(Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p));
}

NilPoint multiply(const NilPoint& a, const NilPoint& b) {
  const Eigen::MatrixXd outer = a.v * b.v.transpose();
  return NilPoint(a.z + b.z + 0.5 * (outer - outer.transpose()), a.v + b.v);
}

NilPoint inverse(const NilPoint& a) { return NilPoint(-a.z, -a.v); }

NilPoint gl_action(const Eigen::MatrixXd& g, const NilPoint& n) {
  return NilPoint(g * n.z * g.transpose(), g * n.v);
}

double det_moment(const NilPoint& n) {
  return liegroups::moment_matrix(n.z, n.v).determinant();
}

double q_kernel(const NilPoint& n) {
  return (n.z + 0.5 * n.v * n.v.transpose()).determinant();
}

double kernel_ratio(const NilPoint& n) {
  const double dm = det_moment(n);
  if (dm == 0.0) throw std::domain_error("kernel_ratio: moment matrix is singular");
  return q_kernel(n) / dm;
}

double moment_cocycle_residual(const NilPoint& n0, const NilPoint& n) {
  const int p = n.p();
  // h is the unipotent factor [[I, v0],[0, 1]] acting by congruence on the
  // row side: -M(n0) + h M(n) h^T = M(n0^{-1} n). (The transposed orientation
  // holds only for p = 1, where the quadratic shear term vanishes.)
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(p + 1, p + 1);
  h.block(0, p, p, 1) = n0.v;
  const Eigen::MatrixXd lhs = -liegroups::moment_matrix(n0.z, n0.v) +
                              h * liegroups::moment_matrix(n.z, n.v) * h.transpose();
  const NilPoint d = multiply(inverse(n0), n);
  return (lhs - liegroups::moment_matrix(d.z, d.v)).cwiseAbs().maxCoeff();
}

int flat_dim(int p) { return p * (p - 1) / 2 + p; }

Eigen::VectorXd flatten(const NilPoint& n) {
  const int p = n.p();
  Eigen::VectorXd u(flat_dim(p));
  int k = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) u(k++) = n.z(i, j);
  u.tail(p) = n.v;
  return u;
}

NilPoint unflatten(const Eigen::VectorXd& u, int p) {
  if (u.size() != flat_dim(p)) throw std::invalid_argument("unflatten: dimension mismatch");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(p, p);
  int k = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) z(i, j) = u(k++);
  return NilPoint(z, u.tail(p));
}

QuadGaussian::QuadGaussian(double amp_, const Eigen::MatrixXd& Q_, const Eigen::VectorXd& m_)
    : amp(amp_), Q(Q_), m(m_) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != m_.size())
    throw std::invalid_argument("QuadGaussian: dimension mismatch");
}

QuadGaussian QuadGaussian::standard(int dim) {
  return QuadGaussian(1.0, Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim));
}

double QuadGaussian::evaluate(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd d = u - m;
  return amp * std::exp(-M_PI * d.dot(Q * d));
}

QuadGaussian pullback_affine(const QuadGaussian& f, const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& b) {
  // f(Au + b): quadratic form A^T Q A, center A^{-1}(m - b).
  const Eigen::MatrixXd Q2 = A.transpose() * f.Q * A;
  const Eigen::VectorXd m2 = A.lu().solve(f.m - b);
  return QuadGaussian(f.amp, 0.5 * (Q2 + Q2.transpose()), m2);
}

double pair_l2(const QuadGaussian& f, const QuadGaussian& g) {
  const Eigen::MatrixXd S = f.Q + g.Q;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw std::domain_error("pair_l2: sum form not SPD");
  const Eigen::VectorXd rhs = f.Q * f.m + g.Q * g.m;
  const Eigen::VectorXd mu = llt.solve(rhs);
  const double cross = f.m.dot(f.Q * f.m) + g.m.dot(g.Q * g.m) - mu.dot(S * mu);
  double logdet = 0.0;
  for (int i = 0; i < S.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
  return f.amp * g.amp * std::exp(-logdet - M_PI * cross);
}

double norm_l2(const QuadGaussian& f) { return std::sqrt(pair_l2(f, f)); }

QuadGaussian op_translate(const NilPoint& n0, const QuadGaussian& f) {
  const int p = n0.p();
  const int dz = p * (p - 1) / 2;
  const int d = flat_dim(p);
  // flat(n0^{-1} n) = A u + b: shear coupling v into the skew block plus a
  // constant shift. det A = 1, so the operator is isometric on L2.
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d);
  int r = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      // z'_ij = z_ij - z0_ij - (v0_i v_j - v_i v0_j) / 2
      A(r, dz + j) += -0.5 * n0.v(i);
      A(r, dz + i) += 0.5 * n0.v(j);
      ++r;
    }
  Eigen::VectorXd b = -flatten(n0);
  return pullback_affine(f, A, b);
}

Eigen::MatrixXd action_linear(const Eigen::MatrixXd& g, int p) {
  const int dz = p * (p - 1) / 2;
  const int d = flat_dim(p);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d, d);
  int r = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      int c = 0;
      for (int k = 0; k < p; ++k)
        for (int l = k + 1; l < p; ++l) {
          L(r, c) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
          ++c;
        }
      ++r;
    }
  L.block(dz, dz, p, p) = g;
  return L;
}

QuadGaussian op_gl(const Eigen::MatrixXd& g, const QuadGaussian& f) {
  const int p = static_cast<int>(g.rows());
  const Eigen::MatrixXd A = action_linear(g.inverse(), p);
  QuadGaussian out = pullback_affine(f, A, Eigen::VectorXd::Zero(flat_dim(p)));
  out.amp *= std::pow(std::abs(g.determinant()), -0.5 * p);
  return out;
}

}  // namespace skewharmonic::nilgroup
