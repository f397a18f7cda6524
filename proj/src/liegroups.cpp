#include "skewharmonic/liegroups.hpp"

#include "skewharmonic/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace skewharmonic::liegroups {

GroupConstants make_constants(int p) {
  if (p < 1 || p % 2 == 0) throw std::invalid_argument("make_constants: p must be odd, p >= 1");
  GroupConstants gc;
  gc.p = p;
  gc.q = (p + 1) / 2;
  gc.rho = 0.5 * p * p;
  gc.rho_doubled = static_cast<double>(gc.q) * p;
  return gc;
}

Eigen::MatrixXd form_doubled(int p) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2 * (p + 1), 2 * (p + 1));
  f.topLeftCorner(p + 1, p + 1) *= -1.0;
  return f;
}

Eigen::MatrixXd form_base(int p) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2 * p + 1, 2 * p + 1);
  f.topLeftCorner(p + 1, p + 1) *= -1.0;
  return f;
}

double group_residual(const Eigen::MatrixXd& m, const Eigen::MatrixXd& form) {
  return (m.transpose() * form * m - form).cwiseAbs().maxCoeff();
}

double algebra_residual(const Eigen::MatrixXd& x, const Eigen::MatrixXd& form) {
  return (x.transpose() * form + form * x).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd embed_group(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n + 1, n + 1);
  e.topLeftCorner(n, n) = m;
  return e;
}

Eigen::MatrixXd embed_algebra(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 1, n + 1);
  e.topLeftCorner(n, n) = x;
  return e;
}

Eigen::MatrixXd nilpotent_doubled(const Eigen::MatrixXd& Z) {
  const int m = static_cast<int>(Z.rows());
  Eigen::MatrixXd x(2 * m, 2 * m);
  x << Z, -Z, Z, -Z;
  return x;
}

Eigen::MatrixXd nilpotent_base(const Eigen::MatrixXd& z, const Eigen::VectorXd& v) {
  const int p = static_cast<int>(z.rows());
  if (v.size() != p) throw std::invalid_argument("nilpotent_base: dimension mismatch");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2 * p + 1, 2 * p + 1);
  x.block(0, 0, p, p) = z;
  x.block(0, p, p, 1) = v;
  x.block(0, p + 1, p, p) = -z;
  x.block(p, 0, 1, p) = -v.transpose();
  x.block(p, p + 1, 1, p) = v.transpose();
  x.block(p + 1, 0, p, p) = z;
  x.block(p + 1, p, p, 1) = v;
  x.block(p + 1, p + 1, p, p) = -z;
  return x;
}

Eigen::MatrixXd moment_matrix(const Eigen::MatrixXd& z, const Eigen::VectorXd& v) {
  const int p = static_cast<int>(z.rows());
  if (v.size() != p) throw std::invalid_argument("moment_matrix: dimension mismatch");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p + 1, p + 1);
  m.topLeftCorner(p, p) = z;
  m.block(0, p, p, 1) = 0.5 * v;
  m.block(p, 0, 1, p) = -0.5 * v.transpose();
  return m;
}

Eigen::MatrixXd exp_nilpotent(const Eigen::MatrixXd& x, int max_order) {
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  const double xnorm = std::max(1.0, x.norm());
  double scale = 1.0;
  for (int k = 1; k <= max_order + 1; ++k) {
    term = term * x / static_cast<double>(k);
    scale = std::max(1.0, scale * xnorm / k);
    if (term.cwiseAbs().maxCoeff() <= 1e-14 * scale) return result;
    if (k == max_order + 1)
      throw std::invalid_argument("exp_nilpotent: series did not terminate within the order bound");
    result += term;
  }
  return result;
}

Eigen::MatrixXd levi_embed(const Eigen::MatrixXd& h) {
  const int m = static_cast<int>(h.rows());
  const Eigen::MatrixXd hit = h.inverse().transpose();
  Eigen::MatrixXd e(2 * m, 2 * m);
  e << 0.5 * (h + hit), 0.5 * (h - hit), 0.5 * (h - hit), 0.5 * (h + hit);
  return e;
}

double factorization_residual(const Eigen::MatrixXd& z, const Eigen::VectorXd& v) {
  const int p = static_cast<int>(z.rows());
  const Eigen::MatrixXd lhs = embed_group(exp_nilpotent(nilpotent_base(z, v)));
  Eigen::MatrixXd uni = Eigen::MatrixXd::Identity(p + 1, p + 1);
  uni.block(0, p, p, 1) = v;
  const Eigen::MatrixXd rhs =
      levi_embed(uni) * exp_nilpotent(nilpotent_doubled(moment_matrix(z, v)));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

std::map<int, int> ad_generator_spectrum(int p) {
  const int n = 2 * p + 1;
  // xi = [[0, X], [X^T, 0]] with X = [I_p; 0]: symmetric, inside the algebra.
  Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < p; ++i) {
    xi(i, p + 1 + i) = 1.0;
    xi(p + 1 + i, i) = 1.0;
  }

  // Frobenius-orthonormal basis of the algebra: skew within the minus block,
  // skew within the plus block, symmetric mixed pairs.
  std::vector<Eigen::MatrixXd> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < p + 1; ++i)
    for (int j = i + 1; j < p + 1; ++j) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      b(i, j) = r;
      b(j, i) = -r;
      basis.push_back(b);
    }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      b(p + 1 + i, p + 1 + j) = r;
      b(p + 1 + j, p + 1 + i) = -r;
      basis.push_back(b);
    }
  for (int i = 0; i < p + 1; ++i)
    for (int j = 0; j < p; ++j) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      b(i, p + 1 + j) = r;
      b(p + 1 + j, i) = r;
      basis.push_back(b);
    }
  const int dim = static_cast<int>(basis.size());

  // ad(xi) is self-adjoint for the Frobenius pairing since xi is symmetric.
  Eigen::MatrixXd ad(dim, dim);
  for (int c = 0; c < dim; ++c) {
    const Eigen::MatrixXd img = xi * basis[c] - basis[c] * xi;
    for (int rr = 0; rr < dim; ++rr) ad(rr, c) = (basis[rr].array() * img.array()).sum();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ad);

  std::map<int, int> mult;
  for (int i = 0; i < dim; ++i) {
    const double lam = es.eigenvalues()(i);
    const double nearest = std::round(lam);
    if (std::abs(lam - nearest) > 1e-6)
      throw std::runtime_error("ad_generator_spectrum: non-integer eigenvalue");
    mult[static_cast<int>(nearest)] += 1;
  }
  return mult;
}

double character_doubled(double mu, const Eigen::MatrixXd& L, const GroupConstants& gc) {
  return std::pow(std::abs(L.determinant()), (mu + gc.rho_doubled) / (2.0 * gc.q));
}

double character_base(double nu, const Eigen::MatrixXd& h, const GroupConstants& gc) {
  return std::pow(std::abs(h.determinant()), (nu + gc.rho) / gc.p);
}

NuCompatFit solve_nu_compat(const GroupConstants& gc, int n_samples, unsigned long long seed) {
  numerics::CounterRng rng(seed, 17);
  const double mu0 = 0.7, mu1 = 1.7;
  std::vector<double> c0, c1;
  for (int s = 0; s < n_samples; ++s) {
    Eigen::MatrixXd h(gc.p, gc.p);
    double logdet = 0.0;
    do {
      for (int i = 0; i < gc.p; ++i)
        for (int j = 0; j < gc.p; ++j) h(i, j) = rng.normal();
      logdet = std::log(std::abs(h.determinant()));
    } while (!(std::abs(logdet) > 0.05));  // keep the exponent extraction conditioned
    Eigen::MatrixXd hext = Eigen::MatrixXd::Zero(gc.p + 1, gc.p + 1);
    hext.topLeftCorner(gc.p, gc.p) = h;
    hext(gc.p, gc.p) = h.determinant();
    // For nu with character_base(nu, h) == character_doubled(mu, hext):
    // (nu + rho)/p = log(chi_doubled) / log|det h|.
    for (double mu : {mu0, mu1}) {
      const double s_i = std::log(character_doubled(mu, hext, gc)) / logdet;
      (mu == mu0 ? c0 : c1).push_back(gc.p * s_i - gc.rho);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
  };
  NuCompatFit fit;
  const double nu0 = mean(c0), nu1 = mean(c1);
  fit.a = (nu1 - nu0) / (mu1 - mu0);
  fit.b = nu0 - fit.a * mu0;
  for (std::size_t i = 0; i < c0.size(); ++i) {
    fit.spread = std::max(fit.spread, std::abs(c0[i] - nu0));
    fit.spread = std::max(fit.spread, std::abs(c1[i] - nu1));
  }
  fit.deviation_a = fit.a - static_cast<double>(gc.p) / (gc.p + 1.0);
  fit.deviation_b = fit.b;
  return fit;
}

}  // namespace skewharmonic::liegroups
