#include "skewharmonic/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace skewharmonic::numerics {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid1D::Grid1D(int n_, double half_width_) : n(n_), half_width(half_width_) {
  if (!is_pow2(n) || n < 4) throw std::invalid_argument("Grid1D: n must be a power of two, n >= 4");
  if (!(half_width > 0.0)) throw std::invalid_argument("Grid1D: half_width must be positive");
  h = 2.0 * half_width / n;
  dtau = 1.0 / (2.0 * half_width);
}

void fft_pow2(std::vector<cplx>& a, int sign) {
  const int n = static_cast<int>(a.size());
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / len;
    const cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Centered transform via the half-shift identity
//   exp(2 pi i x_j tau_k) = (-1)^{j+k} exp(2 pi i jk / N)   (N divisible by 4),
// so F_k = h (-1)^k FFT_+[(-1)^j f_j]_k and the inverse mirrors it with
// dtau in place of h. h * dtau * N == 1 makes the round trip exact.
std::vector<cplx> dft_forward(const Grid1D& g, const std::vector<cplx>& f) {
  if (static_cast<int>(f.size()) != g.n) throw std::invalid_argument("dft_forward: size mismatch");
  std::vector<cplx> a(f);
  for (int j = 1; j < g.n; j += 2) a[j] = -a[j];
  fft_pow2(a, +1);
  for (int k = 0; k < g.n; ++k) a[k] *= (k & 1) ? -g.h : g.h;
  return a;
}

std::vector<cplx> dft_inverse(const Grid1D& g, const std::vector<cplx>& F) {
  if (static_cast<int>(F.size()) != g.n) throw std::invalid_argument("dft_inverse: size mismatch");
  std::vector<cplx> a(F);
  for (int k = 1; k < g.n; k += 2) a[k] = -a[k];
  fft_pow2(a, -1);
  for (int j = 0; j < g.n; ++j) a[j] *= (j & 1) ? -g.dtau : g.dtau;
  return a;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  key_ = mix64(seed + 0x9E3779B97F4A7C15ull) ^ mix64(stream ^ 0xD1B54A32D192ED03ull);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
}

double CounterRng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * M_PI * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

double CounterRng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 * (first eigenvector component)^2.
void golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta,
                  double mu0, std::vector<double>& nodes, std::vector<double>& weights) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = alpha[i];
    if (i + 1 < n) {
      const double b = std::sqrt(beta[i + 1]);
      J(i, i + 1) = b;
      J(i + 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_power01(int n, double s, std::vector<double>& nodes, std::vector<double>& weights) {
  if (!(s > -1.0)) throw std::domain_error("gauss_power01: weight exponent must exceed -1");
  // Jacobi weight (1+x)^s on [-1,1]; recurrence coefficients for monic polys.
  std::vector<double> alpha(n), beta(n);
  for (int k = 0; k < n; ++k) {
    const double tk = 2.0 * k + s;
    alpha[k] = (k == 0) ? s / (s + 2.0) : s * s / (tk * (tk + 2.0));
    if (k > 0)
      beta[k] = 4.0 * k * k * (k + s) * (k + s) / (tk * tk * (tk + 1.0) * (tk - 1.0));
  }
  const double mu0 = std::pow(2.0, s + 1.0) / (s + 1.0);
  std::vector<double> xs, ws;
  golub_welsch(alpha, beta, mu0, xs, ws);
  // Map to [0,1] with weight t^s: t = (1+x)/2.
  nodes.resize(n);
  weights.resize(n);
  const double scale = std::pow(2.0, -s - 1.0);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (1.0 + xs[i]);
    weights[i] = scale * ws[i];
  }
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  std::vector<double> alpha(n, 0.0), beta(n, 0.0);
  for (int k = 1; k < n; ++k) beta[k] = k / 2.0;
  golub_welsch(alpha, beta, std::sqrt(M_PI), nodes, weights);
}

namespace {

// G7/K15 nodes and weights on [-1,1] (positive half; node 7 is the center).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = hw * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    resk += kWgk[i] * fsum;
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  kronrod = resk * hw;
  err = std::abs((resk - resg) * hw);
}

double quad_rec(const std::function<double(double)>& f, double a, double b,
                double tol, double rel_tol, int depth, int max_depth) {
  double k, e;
  gk15(f, a, b, k, e);
  if (e <= std::max(tol, rel_tol * std::abs(k)) || depth >= max_depth) return k;
  const double c = 0.5 * (a + b);
  return quad_rec(f, a, c, 0.5 * tol, rel_tol, depth + 1, max_depth) +
         quad_rec(f, c, b, 0.5 * tol, rel_tol, depth + 1, max_depth);
}

}  // namespace

double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  return quad_rec(f, a, b, abs_tol, rel_tol, 0, max_depth);
}

namespace {

// Integral of t^s f(t) over [0, X], X > 0, s > -1. The weight is folded into
// Gauss nodes near 0 so f itself is never evaluated against the raw
// singularity; the outer piece is regular.
double quad_power_half_line(const std::function<double(double)>& f, double s, double X) {
  const double delta = std::min(1.0, X);
  std::vector<double> nodes, weights;
  gauss_power01(48, s, nodes, weights);
  // t = delta * u:  int_0^delta t^s f(t) dt = delta^{s+1} int_0^1 u^s f(delta u) du.
  double inner = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) inner += weights[i] * f(delta * nodes[i]);
  inner *= std::pow(delta, s + 1.0);
  double outer = 0.0;
  if (X > delta) {
    outer = quad_adaptive([&](double t) { return std::pow(t, s) * f(t); }, delta, X);
  }
  return inner + outer;
}

}  // namespace

double quad_singular(const std::function<double(double)>& f, double s, double a, double b) {
  if (!(s > -1.0)) throw std::domain_error("quad_singular: exponent must exceed -1");
  if (a > b) return -quad_singular(f, s, b, a);
  if (a >= 0.0) {
    if (a == 0.0) return quad_power_half_line(f, s, b);
    return quad_adaptive([&](double t) { return std::pow(std::abs(t), s) * f(t); }, a, b);
  }
  if (b <= 0.0) {
    return quad_singular([&](double t) { return f(-t); }, s, -b, -a);
  }
  return quad_power_half_line([&](double t) { return f(-t); }, s, -a) +
         quad_power_half_line(f, s, b);
}

MonteCarloEstimate mc_integrate(const std::function<double(CounterRng&)>& sample,
                                std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double v = sample(rng);
    sum += v;
    sumsq += v * v;
  }
  MonteCarloEstimate est;
  est.n = n;
  est.seed = seed;
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sumsq - static_cast<double>(n) * est.mean * est.mean) /
                                         static_cast<double>(n - 1));
    est.stderr_ = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

}  // namespace skewharmonic::numerics
