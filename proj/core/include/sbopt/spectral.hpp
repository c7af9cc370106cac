#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbopt/model.hpp"

// Extreme eigenvalues of the coupling matrix and the derived solver
// parameters: the coupling scale c = 1/lambda_max and the time step
// dt = D_t * sqrt(2 / (1 - lambda_min/lambda_max)).

namespace sbopt {

enum class SpectralMethod { power_iteration, wigner, exact_small };

struct SpectralEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  SpectralMethod method = SpectralMethod::power_iteration;
  double tolerance = 0.0;
  std::vector<double> v_max;  // unit eigenvector estimates; empty for wigner
  std::vector<double> v_min;
  std::size_t iterations = 0;
};

struct TuningResult {
  double c = 0.0;
  double dt = 0.0;
  double d_t_factor = 0.0;
  SpectralEstimate source;
};

// Iterative estimation failed to reach the residual target; the best
// estimate so far is attached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, SpectralEstimate last)
      : std::runtime_error(message), last_(std::move(last)) {}

  const SpectralEstimate& last_estimate() const noexcept { return last_; }

 private:
  SpectralEstimate last_;
};

// Power iteration with a Gershgorin shift on each end of the spectrum.
// Deterministic: all-ones start vector, fixed perturbation on stagnation.
// Exit residual: ||Jv - lambda v|| <= tol * beta with beta the max absolute
// row sum. max_iters == 0 means 10*n. n == 2 is solved in closed form.
SpectralEstimate extreme_eigenvalues(const IsingInstance& instance, double tol = 1e-6,
                                     std::size_t max_iters = 0);

// Wigner semicircle edge 2 sqrt(n) sigma.
double wigner_estimate(std::size_t n, double sigma);

// Root mean square of the off-diagonal couplings about zero (the coupling
// distribution is symmetric by construction, so no mean is subtracted;
// exactly 1 for +-1 matrices).
double offdiagonal_sigma(const IsingInstance& instance);

enum class TuneMode { wigner, numerical };

// c = 1/lambda_max, with lambda_max either 2 sqrt(n) sigma or numerical.
double tune_c(const IsingInstance& instance, TuneMode mode);

// dt = d_t_factor * sqrt(2 / (1 - lambda_min/lambda_max)). Warns on stderr
// (non-fatal) when d_t_factor >= sqrt(2), i.e. when dt breaks the strict
// harmonic stability bound.
double tune_dt(double lambda_min, double lambda_max, double d_t_factor);

// Strict stability ceiling 2 / sqrt(1 - lambda_min/lambda_max); reduces to
// sqrt(2) when lambda_min = -lambda_max.
double stability_limit(double lambda_min, double lambda_max);

// Full tuning bundle for a solver run.
TuningResult auto_tune(const IsingInstance& instance, TuneMode mode, double d_t_factor = 1.25,
                       double tol = 1e-6, std::size_t max_iters = 0);

}  // namespace sbopt
