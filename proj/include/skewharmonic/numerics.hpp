// Deterministic numerical kernels: centered FFT grids, counter-based RNG,
// weighted quadrature, Monte Carlo accumulation.
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace skewharmonic::numerics {

using cplx = std::complex<double>;

// Uniform symmetric grid: x_j = (j - N/2) h with h = 2L/N, j = 0..N-1.
// N must be a power of two, N >= 4. Dual grid: tau_k = (k - N/2) / (2L),
// so h * dtau * N == 1 exactly and the DFT below is unitary on the nose.
struct Grid1D {
  int n = 0;
  double half_width = 0.0;  // L
  double h = 0.0;           // spatial step
  double dtau = 0.0;        // frequency step

  Grid1D() = default;
  Grid1D(int n_, double half_width_);

  double x(int j) const { return (j - n / 2) * h; }
  double tau(int k) const { return (k - n / 2) * dtau; }
};

// Centered discrete Fourier transform with kernel e^{+2 pi i x tau} forward,
// normalized so that forward followed by inverse is the identity to roundoff
// and sum_j |f_j|^2 h == sum_k |F_k|^2 dtau exactly (grid Parseval).
std::vector<cplx> dft_forward(const Grid1D& g, const std::vector<cplx>& f);
std::vector<cplx> dft_inverse(const Grid1D& g, const std::vector<cplx>& F);

// In-place radix-2 FFT with kernel e^{sign * 2 pi i jk / N}; no normalization.
void fft_pow2(std::vector<cplx>& a, int sign);

// Counter-based RNG: output i of stream (seed, stream) is a pure function of
// (seed, stream, i). Streams never collide in practice and draws are
// reproducible regardless of call interleaving.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();             // (0, 1), never returns 0
  double normal();              // standard normal, Box-Muller
  double gamma(double shape);   // unit scale, shape > 0
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Gauss nodes/weights for the weight t^s dt on [0, 1], s > -1.
// (Jacobi weight (1+x)^s on [-1,1] mapped to [0,1]; Golub-Welsch.)
void gauss_power01(int n, double s, std::vector<double>& nodes, std::vector<double>& weights);

// Gauss-Hermite for weight e^{-t^2} dt on R.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval.
double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-11, int max_depth = 48);

// Integral of |t|^s f(t) over [a, b] where the weight may be singular at 0.
// Requires s > -1; throws std::domain_error otherwise (continuation of the
// parameter past the integrable range is handled by callers, never here).
double quad_singular(const std::function<double(double)>& f, double s, double a, double b);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

// Plain MC mean of `sample(rng)` over n draws.
MonteCarloEstimate mc_integrate(const std::function<double(CounterRng&)>& sample,
                                std::uint64_t n, std::uint64_t seed, std::uint64_t stream);

}  // namespace skewharmonic::numerics
