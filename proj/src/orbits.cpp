#include "skewharmonic/orbits.hpp"

#include "skewharmonic/liegroups.hpp"
#include "skewharmonic/skewlin.hpp"

#include <cmath>
#include <stdexcept>

namespace skewharmonic::orbits {

namespace {

double point_scale(const nilgroup::NilPoint& n) {
  double s = n.v.size() ? n.v.cwiseAbs().maxCoeff() : 0.0;
  if (n.z.size()) s = std::max(s, n.z.cwiseAbs().maxCoeff());
  return s;
}

double point_dist(const nilgroup::NilPoint& a, const nilgroup::NilPoint& b) {
  const double dz = (a.z - b.z).cwiseAbs().maxCoeff();
  const double dv = (a.v - b.v).cwiseAbs().maxCoeff();
  return std::max(dz, dv);
}

}  // namespace

nilgroup::NilPoint base_point(int q) {
  if (q < 1) throw std::invalid_argument("base_point: q must be >= 1");
  const int p = 2 * q - 1;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(p, p);
  for (int b = 0; b < q - 1; ++b) {
    z(2 * b, 2 * b + 1) = 1.0;
    z(2 * b + 1, 2 * b) = -1.0;
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  v(p - 1) = 2.0;
  return nilgroup::NilPoint(z, v);
}

OrbitPoint membership(const nilgroup::NilPoint& n, double tol) {
  const int p = n.p();
  const double scale = point_scale(n);

  const skewlin::SkewMatrix m(liegroups::moment_matrix(n.z, n.v));
  const double pf = skewlin::pfaffian(m);
  const double det_m = pf * pf;

  // det M is homogeneous of degree p+1 in the point.
  const double det_cut = tol * std::pow(scale, p + 1);
  const bool in_omega = std::abs(det_m) > det_cut;

  const double zv = p ? (n.z * n.v).cwiseAbs().maxCoeff() : 0.0;
  const double zv_cut = std::max(tol * scale * scale, tol);
  const bool in_o = in_omega && zv <= zv_cut;
  return OrbitPoint{n, det_m, in_omega, in_o};
}

OrbitSolution orbit_solve(const nilgroup::NilPoint& n, double tol) {
  const int p = n.p();
  const int q = (p + 1) / 2;
  const OrbitPoint flags = membership(n, tol);
  if (!flags.in_omega)
    throw std::domain_error("orbit_solve: point has det M at or below the zero threshold");
  const double scale = point_scale(n);
  const double det_cut = tol * std::pow(scale, p + 1);
  if (std::abs(flags.det_m) <= 10.0 * det_cut)
    throw std::runtime_error(
        "orbit_solve: det M within 10x of the zero threshold, refusing ill-conditioned solve");

  // Stage one: orthogonal congruence carrying z to diag(w_1 J, ..., w_{q-1} J, 0).
  const skewlin::SkewCanonical can = skewlin::skew_canonical(n.z);
  if (can.rank != p - 1)
    throw std::runtime_error("orbit_solve: z does not have the full rank p-1");
  const Eigen::MatrixXd& g0 = can.rotation;
  const Eigen::VectorXd u = g0 * n.v;
  const double up = u(p - 1);
  if (up == 0.0)
    throw std::runtime_error("orbit_solve: kernel component of v vanished despite det M guard");

  // Stage two: block-upper corrector. A rescales each symplectic block to a
  // unit one, the last column aligns v, the last diagonal entry normalizes
  // the kernel component to 2. The upper-triangular shape keeps the
  // z-equation untouched by the v-correction.
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(p, p);
  for (int b = 0; b < q - 1; ++b) {
    const double w = can.w[static_cast<size_t>(b)];
    const double s = 1.0 / std::sqrt(std::abs(w));
    g1(2 * b, 2 * b) = (w < 0.0 ? -s : s);
    g1(2 * b + 1, 2 * b + 1) = s;
  }
  g1(p - 1, p - 1) = 2.0 / up;
  if (p > 1) {
    const Eigen::VectorXd head = u.head(p - 1);
    g1.block(0, p - 1, p - 1, 1) = -(g1.topLeftCorner(p - 1, p - 1) * head) / up;
  }

  OrbitSolution out;
  out.g = g1 * g0;
  out.residual = point_dist(nilgroup::gl_action(out.g, n), base_point(q));
  return out;
}

bool stabilizer_check(const Eigen::MatrixXd& g, int q, double tol) {
  const int p = 2 * q - 1;
  if (g.rows() != p || g.cols() != p)
    throw std::invalid_argument("stabilizer_check: g has the wrong size");
  const int m = p - 1;  // symplectic block size 2(q-1)

  // Criterion one: block shape [[A, 0], [0, 1]] with A symplectic.
  double shape = std::abs(g(m, m) - 1.0);
  if (m > 0) {
    shape = std::max(shape, g.block(0, m, m, 1).cwiseAbs().maxCoeff());
    shape = std::max(shape, g.block(m, 0, 1, m).cwiseAbs().maxCoeff());
  }
  double sympl = 0.0;
  if (m > 0) {
    const Eigen::MatrixXd jq = skewlin::standard_form(q - 1);
    const Eigen::MatrixXd a = g.topLeftCorner(m, m);
    sympl = (a * jq * a.transpose() - jq).cwiseAbs().maxCoeff();
  }
  const bool by_shape = shape <= tol && sympl <= tol;

  // Criterion two: g fixes the base point under the linear action.
  const nilgroup::NilPoint o = base_point(q);
  const bool by_action = point_dist(nilgroup::gl_action(g, o), o) <= tol;

  return by_shape && by_action;
}

nilgroup::NilPoint strict_inclusion_witness(int q) {
  if (q < 2) throw std::invalid_argument("strict_inclusion_witness: requires q >= 2");
  nilgroup::NilPoint n = base_point(q);
  n.v(0) += 1.0;
  return n;
}

}  // namespace skewharmonic::orbits
