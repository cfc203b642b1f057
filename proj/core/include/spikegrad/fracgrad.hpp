#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "spikegrad/error.hpp"

// Fractional-calculus numerics: the gamma function, the exact Caputo series of
// a quadratic, and the single-term fractional gradient step used both by the
// scalar minimizer and by the network weight update.
namespace spikegrad::fracgrad {

struct FractionalStepParams {
  double alpha = 1.0;    // order, 0 < alpha < 2
  double mu = 0.02;      // learning rate, >= 0
  double epsilon = 1e-5; // keeps the power base away from zero

  // Throws DomainError when alpha is outside (0, 2), mu < 0 or epsilon <= 0.
  void validate() const;
};

struct TrajectoryPoint {
  std::size_t iteration;
  double x;
  double f;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;

  bool empty() const noexcept { return points.empty(); }
  const TrajectoryPoint& back() const { return points.back(); }
};

// Raised by minimize_convex when an iterate stops being finite. Carries the
// trajectory up to (excluding) the offending iterate.
class MinimizationDiverged : public DivergenceError {
 public:
  MinimizationDiverged(std::size_t iteration, Trajectory partial);
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

// Gamma function via the Lanczos approximation (g = 7, 9 terms), with the
// reflection formula below 0.5. Relative error is below 1e-13 on (0, 3].
double gamma_fn(double x);

// The two surviving terms of the Caputo series of f(t) = a t^2 + b t + c with
// lower terminal x0, evaluated at x, for the 0 < alpha < 1 branch.
struct CaputoTerms {
  double first;   // f'(x0) / Gamma(2 - alpha) * (x - x0)^(1 - alpha)
  double second;  // f''(x0) / Gamma(3 - alpha) * (x - x0)^(2 - alpha)
  double sum() const noexcept { return first + second; }
};

CaputoTerms caputo_quadratic_terms(double a, double b, double c, double x0, double x,
                                   double alpha);

// Exact order-alpha Caputo derivative of a quadratic. Requires x > x0 and
// 0 < alpha < 1.
double caputo_quadratic(double a, double b, double c, double x0, double x, double alpha);

// |delta + epsilon|^(1 - alpha) / Gamma(2 - alpha). Equals 1 at alpha = 1.
double fractional_coefficient(double delta, double alpha, double epsilon);

// fractional_coefficient with Gamma(2 - alpha) evaluated once, for use in
// per-synapse loops.
class FractionalCoefficient {
 public:
  FractionalCoefficient(double alpha, double epsilon);

  double operator()(double delta) const noexcept {
    if (unit_) return 1.0;
    return std::pow(std::abs(delta + epsilon_), exponent_) * inv_gamma_;
  }

 private:
  double epsilon_;
  double exponent_;
  double inv_gamma_;
  bool unit_;
};

// One short-memory fractional step:
//   x_k - mu * grad_km1 / Gamma(2 - alpha) * |x_k - x_km1 + epsilon|^(1 - alpha)
// where grad_km1 is the ordinary derivative at x_{k-1}.
double fractional_step(double x_k, double x_km1, double grad_km1,
                       const FractionalStepParams& params);

struct ScalarObjective {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

// Iterates fractional_step from x0. The first update is a plain step
// x1 = x0 - mu f'(x0); iteration stops once |x_{k+1} - x_k| < tol or after
// max_iters updates. Throws MinimizationDiverged on a non-finite iterate.
Trajectory minimize_convex(const ScalarObjective& objective, double x0,
                           const FractionalStepParams& params, std::size_t max_iters,
                           double tol);

}  // namespace spikegrad::fracgrad
