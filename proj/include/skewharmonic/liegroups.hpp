// Split orthogonal groups in adjacent signatures, their nilpotent pieces,
// Levi embeddings, and semisimple characters.
#pragma once

#include <Eigen/Dense>

#include <map>

namespace skewharmonic::liegroups {

// p odd. The smaller group preserves a form of signature (p+1, p), the
// doubled one a split form of signature (p+1, p+1), q = (p+1)/2.
struct GroupConstants {
  int p = 0;
  int q = 0;
  double rho = 0.0;        // p^2 / 2
  double rho_doubled = 0.0;  // q * p
};

GroupConstants make_constants(int p);

// Quadratic forms, coordinates ordered minus block then plus block.
Eigen::MatrixXd form_doubled(int p);  // diag(-I_{p+1}, I_{p+1})
Eigen::MatrixXd form_base(int p);     // diag(-I_{p+1}, I_p)

// Membership/algebra residuals: ||m^T F m - F||, ||x^T F + F x|| (max norm).
double group_residual(const Eigen::MatrixXd& m, const Eigen::MatrixXd& form);
double algebra_residual(const Eigen::MatrixXd& x, const Eigen::MatrixXd& form);

// Embedding of the base group into the doubled one: fix the last plus
// coordinate. Group elements get a 1, algebra elements a 0.
Eigen::MatrixXd embed_group(const Eigen::MatrixXd& m);
Eigen::MatrixXd embed_algebra(const Eigen::MatrixXd& x);

// Abelian nilpotent piece of the doubled group, parametrized by a skew
// (p+1)x(p+1) matrix Z: [[Z, -Z], [Z, -Z]]. Squares to zero.
Eigen::MatrixXd nilpotent_doubled(const Eigen::MatrixXd& Z);

// Two-step nilpotent piece of the base group, parametrized by skew z (p x p)
// and v in R^p, in block rows (p, 1, p). Cubes to zero.
Eigen::MatrixXd nilpotent_base(const Eigen::MatrixXd& z, const Eigen::VectorXd& v);

// Skew (p+1)x(p+1) matrix [[z, v/2], [-v^T/2, 0]] that linearizes the
// base nilpotent data inside the doubled nilpotent piece.
Eigen::MatrixXd moment_matrix(const Eigen::MatrixXd& z, const Eigen::VectorXd& v);

// exp for nilpotent x: truncated series, verified to terminate within
// max_order (throws std::invalid_argument otherwise).
Eigen::MatrixXd exp_nilpotent(const Eigen::MatrixXd& x, int max_order = 8);

// Levi embedding GL(p+1) -> doubled group:
//   (1/2) [[h + h^{-T}, h - h^{-T}], [h - h^{-T}, h + h^{-T}]].
Eigen::MatrixXd levi_embed(const Eigen::MatrixXd& h);

// Residual of the unipotent factorization
//   embed(exp nilpotent_base(z, v))
//     = levi_embed([[I, v],[0, 1]]) * exp(nilpotent_doubled(moment_matrix(z, v))).
double factorization_residual(const Eigen::MatrixXd& z, const Eigen::VectorXd& v);

// Spectrum of ad(xi) on the base Lie algebra for the split generic element
// xi = [[0, X], [X^T, 0]], X = [I_p; 0]. Eigenvalues are integers; the map
// records multiplicity per integer. Throws if an eigenvalue is farther than
// 1e-6 from an integer.
std::map<int, int> ad_generator_spectrum(int p);

// Characters on Levi data, magnitudes only:
//   doubled: |det L|^{(mu + rho_doubled) / (2q)} for L in GL(p+1),
//   base:    |det h|^{(nu + rho) / p}          for h in GL(p).
double character_doubled(double mu, const Eigen::MatrixXd& L, const GroupConstants& gc);
double character_base(double nu, const Eigen::MatrixXd& h, const GroupConstants& gc);

// Fit nu = a mu + b so the two characters agree along h -> diag(h, det h).
// Exploratory: returns the fit plus its cross-sample spread and the signed
// deviation from the documented pair (p/(p+1), 0). Never used as a gate.
struct NuCompatFit {
  double a = 0.0;
  double b = 0.0;
  double spread = 0.0;       // max per-sample deviation from the fit
  double deviation_a = 0.0;  // a - p/(p+1)
  double deviation_b = 0.0;  // b - 0
};

NuCompatFit solve_nu_compat(const GroupConstants& gc, int n_samples, unsigned long long seed);

}  // namespace skewharmonic::liegroups
