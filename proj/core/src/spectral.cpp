#include "sbopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "kernels.hpp"
#include "sbopt/rng.hpp"

namespace sbopt {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Max absolute row sum; a bound on |lambda| for any eigenvalue, so shifting
// by it makes J + beta*I (and -J + beta*I) positive semidefinite.
double gershgorin_bound(const IsingInstance& instance) {
  double beta = 0.0;
  for (std::size_t i = 0; i < instance.n(); ++i) {
    double row_sum = 0.0;
    for (double v : instance.row(i)) row_sum += std::abs(v);
    beta = std::max(beta, row_sum);
  }
  return beta;
}

struct PowerOutcome {
  double lambda = 0.0;  // eigenvalue of J at the requested end
  std::vector<double> v;
  std::size_t iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Power iteration on sign*J + beta*I. The dominant eigenvalue of the shifted
// matrix sits at the requested end of J's spectrum; lambda is read off with
// the Rayleigh quotient on J itself.
PowerOutcome shifted_power_iteration(const IsingInstance& instance, double beta, double sign,
                                     double tol, std::size_t max_iters) {
  const std::size_t n = instance.n();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> jv(n, 0.0);

  Xoshiro256pp perturb_rng(0xB1F0CA7Eu);
  int perturbations = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t best_iteration = 0;
  const std::size_t stall_window = std::max<std::size_t>(64, n / 4);

  PowerOutcome out;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    detail::coupling_matvec(instance, v.data(), jv.data(), nullptr);
    // Rayleigh quotient and residual on J itself; the sign selects only
    // which end the iteration matrix amplifies.
    const double lambda = dot(v, jv);

    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = jv[i] - lambda * v[i];
      res += r * r;
    }
    res = std::sqrt(res);

    out.lambda = lambda;
    out.v = v;
    out.iterations = iter;
    out.residual = res;
    if (res <= tol * beta) {
      out.converged = true;
      return out;
    }

    if (res < best_residual * 0.999) {
      best_residual = res;
      best_iteration = iter;
    } else if (iter - best_iteration > stall_window && perturbations < 4) {
      // Stuck in an invariant subspace (e.g. the start vector was an
      // eigenvector of the wrong end); kick it deterministically.
      for (double& x : v) x += 0.05 * perturb_rng.uniform_symmetric();
      const double nv = norm2(v);
      for (double& x : v) x /= nv;
      ++perturbations;
      best_iteration = iter;
      best_residual = std::numeric_limits<double>::infinity();
      continue;
    }

    // w = (sign*J + beta*I) v
    double nw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      jv[i] = sign * jv[i] + beta * v[i];
      nw += jv[i] * jv[i];
    }
    nw = std::sqrt(nw);
    if (nw <= beta * 1e-14) {
      // v is (numerically) a null vector of the shifted matrix.
      for (double& x : v) x += 0.05 * perturb_rng.uniform_symmetric();
      const double nv = norm2(v);
      for (double& x : v) x /= nv;
      ++perturbations;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = jv[i] / nw;
  }
  return out;
}

SpectralEstimate exact_two_by_two(const IsingInstance& instance) {
  const double a = instance.coupling(0, 1);
  const double mag = std::abs(a);
  SpectralEstimate est;
  est.method = SpectralMethod::exact_small;
  est.lambda_max = mag;
  est.lambda_min = -mag;
  est.tolerance = 0.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // J = [[0, a], [a, 0]]: eigenvectors (1, +-1)/sqrt(2).
  if (a >= 0.0) {
    est.v_max = {inv_sqrt2, inv_sqrt2};
    est.v_min = {inv_sqrt2, -inv_sqrt2};
  } else {
    est.v_max = {inv_sqrt2, -inv_sqrt2};
    est.v_min = {inv_sqrt2, inv_sqrt2};
  }
  return est;
}

// Cyclic Jacobi diagonalization for small matrices: exact to machine
// precision and free of convergence knobs, which power iteration is not at
// sizes where spectral gaps can be tiny.
SpectralEstimate exact_small_eigenvalues(const IsingInstance& instance) {
  const std::size_t n = instance.n();
  std::vector<double> a(instance.couplings().begin(), instance.couplings().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cos_r = 1.0 / std::sqrt(t * t + 1.0);
        const double sin_r = t * cos_r;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = cos_r * akp - sin_r * akq;
          a[k * n + q] = sin_r * akp + cos_r * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = cos_r * apk - sin_r * aqk;
          a[q * n + k] = sin_r * apk + cos_r * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = cos_r * vkp - sin_r * vkq;
          v[k * n + q] = sin_r * vkp + cos_r * vkq;
        }
      }
    }
  }

  std::size_t i_max = 0, i_min = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (a[i * n + i] > a[i_max * n + i_max]) i_max = i;
    if (a[i * n + i] < a[i_min * n + i_min]) i_min = i;
  }
  SpectralEstimate est;
  est.method = SpectralMethod::exact_small;
  est.tolerance = 0.0;
  est.lambda_max = a[i_max * n + i_max];
  est.lambda_min = a[i_min * n + i_min];
  est.v_max.resize(n);
  est.v_min.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    est.v_max[k] = v[k * n + i_max];
    est.v_min[k] = v[k * n + i_min];
  }
  return est;
}

}  // namespace

SpectralEstimate extreme_eigenvalues(const IsingInstance& instance, double tol,
                                     std::size_t max_iters) {
  const std::size_t n = instance.n();
  if (n < 2) throw std::invalid_argument("extreme_eigenvalues needs n >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (instance.all_zero()) throw std::invalid_argument("degenerate instance: all couplings zero");
  if (max_iters == 0) max_iters = 10 * n;

  if (n == 2) return exact_two_by_two(instance);
  if (n <= 32) return exact_small_eigenvalues(instance);

  const double beta = gershgorin_bound(instance);
  SpectralEstimate est;
  est.method = SpectralMethod::power_iteration;
  est.tolerance = tol;

  const PowerOutcome hi = shifted_power_iteration(instance, beta, +1.0, tol, max_iters);
  est.lambda_max = hi.lambda;
  est.v_max = hi.v;
  est.iterations = hi.iterations;
  if (!hi.converged) {
    est.lambda_min = std::numeric_limits<double>::quiet_NaN();
    throw ConvergenceError("lambda_max estimation did not converge in " +
                               std::to_string(max_iters) + " iterations (residual " +
                               std::to_string(hi.residual) + ")",
                           est);
  }

  const PowerOutcome lo = shifted_power_iteration(instance, beta, -1.0, tol, max_iters);
  est.lambda_min = lo.lambda;
  est.v_min = lo.v;
  est.iterations += lo.iterations;
  if (!lo.converged) {
    throw ConvergenceError("lambda_min estimation did not converge in " +
                               std::to_string(max_iters) + " iterations (residual " +
                               std::to_string(lo.residual) + ")",
                           est);
  }
  return est;
}

double wigner_estimate(std::size_t n, double sigma) {
  if (n < 2) throw std::invalid_argument("wigner_estimate needs n >= 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return 2.0 * std::sqrt(static_cast<double>(n)) * sigma;
}

double offdiagonal_sigma(const IsingInstance& instance) {
  const std::size_t n = instance.n();
  if (n < 2) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = instance.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum_sq += row[j] * row[j];
    }
  }
  const auto count = static_cast<double>(n) * static_cast<double>(n - 1);
  return std::sqrt(sum_sq / count);
}

double tune_c(const IsingInstance& instance, TuneMode mode) {
  if (instance.all_zero()) throw std::invalid_argument("degenerate instance: all couplings zero");
  if (mode == TuneMode::wigner) {
    const double sigma = offdiagonal_sigma(instance);
    return 1.0 / wigner_estimate(instance.n(), sigma);
  }
  return 1.0 / extreme_eigenvalues(instance).lambda_max;
}

double tune_dt(double lambda_min, double lambda_max, double d_t_factor) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  if (!(lambda_min < 0.0)) throw std::invalid_argument("lambda_min must be negative");
  if (!(d_t_factor > 0.0)) throw std::invalid_argument("d_t_factor must be positive");
  if (d_t_factor >= std::sqrt(2.0)) {
    std::cerr << "sbopt: warning: D_t = " << d_t_factor
              << " >= sqrt(2); dt exceeds the harmonic stability bound\n";
  }
  return d_t_factor * std::sqrt(2.0 / (1.0 - lambda_min / lambda_max));
}

double stability_limit(double lambda_min, double lambda_max) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  if (!(lambda_min < 0.0)) throw std::invalid_argument("lambda_min must be negative");
  return 2.0 / std::sqrt(1.0 - lambda_min / lambda_max);
}

TuningResult auto_tune(const IsingInstance& instance, TuneMode mode, double d_t_factor,
                       double tol, std::size_t max_iters) {
  TuningResult result;
  result.d_t_factor = d_t_factor;
  if (mode == TuneMode::wigner) {
    const double sigma = offdiagonal_sigma(instance);
    if (sigma == 0.0) throw std::invalid_argument("degenerate instance: all couplings zero");
    const double edge = wigner_estimate(instance.n(), sigma);
    result.source.method = SpectralMethod::wigner;
    result.source.lambda_max = edge;
    result.source.lambda_min = -edge;
    result.source.tolerance = 0.0;
  } else {
    try {
      result.source = extreme_eigenvalues(instance, tol, max_iters);
    } catch (const ConvergenceError& e) {
      // c and dt only need the scale of the spectrum, and the Rayleigh
      // quotient is far more accurate than the residual suggests. Keep the
      // carried estimate unless an end is missing entirely.
      const auto& last = e.last_estimate();
      if (!std::isfinite(last.lambda_max) || !std::isfinite(last.lambda_min) ||
          !(last.lambda_max > 0.0) || !(last.lambda_min < 0.0)) {
        throw;
      }
      std::cerr << "sbopt: warning: eigenvalue estimation hit the iteration cap; "
                   "tuning from the last estimate (" << e.what() << ")\n";
      result.source = last;
    }
  }
  result.c = 1.0 / result.source.lambda_max;
  result.dt = tune_dt(result.source.lambda_min, result.source.lambda_max, d_t_factor);
  return result;
}

}  // namespace sbopt
