// The distinguished linear-form point, the cone {zv = 0} inside the dense
// set {det M != 0}, the constructive transitivity solver, and the symplectic
// stabilizer test.
#pragma once

#include "skewharmonic/nilgroup.hpp"

#include <Eigen/Dense>

namespace skewharmonic::orbits {

// (z_o, v_o) with q-1 unit symplectic blocks, a kernel slot, and v_o = 2 e_p.
// Its moment matrix is exactly the standard form J_q. p = 2q - 1.
nilgroup::NilPoint base_point(int q);

struct OrbitPoint {
  nilgroup::NilPoint n;
  double det_m = 0.0;  // pfaffian(M)^2
  bool in_omega = false;  // |det M| above threshold
  bool in_o = false;      // additionally ||z v|| below threshold
};

// Thresholds are relative to homogeneous scales in ||n||: degree p+1 for
// det M, degree 2 for z v.
OrbitPoint membership(const nilgroup::NilPoint& n, double tol = 1e-9);

struct OrbitSolution {
  Eigen::MatrixXd g;
  double residual = 0.0;  // max-norm of gl_action(g, n) - base_point
};

// Solves gl_action(g, n) = base_point for n with det M(n) != 0.
// Stage one diagonalizes z orthogonally (deterministic tie-breaking); stage
// two is the block-upper-triangular correction that rescales the symplectic
// blocks and sends v to 2 e_p. Throws std::domain_error when membership
// fails and std::runtime_error when |det M| sits within 10x of the
// membership threshold (conditioning guard).
OrbitSolution orbit_solve(const nilgroup::NilPoint& n, double tol = 1e-9);

// True iff g = [[A, 0], [0, 1]] with A J_{q-1} A^T = J_{q-1} (residual
// 1e-10) and g fixes the base point (residual 1e-10). The two criteria are
// equivalent; both are evaluated.
bool stabilizer_check(const Eigen::MatrixXd& g, int q, double tol = 1e-10);

// A point with det M != 0 but ||z v|| = 1, witnessing that the cone is a
// proper subset of the dense set. Requires q >= 2.
nilgroup::NilPoint strict_inclusion_witness(int q);

}  // namespace skewharmonic::orbits
