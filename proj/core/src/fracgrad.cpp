#include "spikegrad/fracgrad.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace spikegrad::fracgrad {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    a += kLanczosCoefficients[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

void require_caputo_branch(double x0, double x, double alpha) {
  if (!(x > x0)) {
    throw DomainError("caputo_quadratic: evaluation point must exceed the lower terminal");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("caputo_quadratic: alpha must lie in (0, 1)");
  }
}

}  // namespace

void FractionalStepParams::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("fractional order alpha must lie in (0, 2), got " + std::to_string(alpha));
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw DomainError("learning rate mu must be finite and non-negative");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("epsilon must be finite and positive");
  }
}

MinimizationDiverged::MinimizationDiverged(std::size_t iteration, Trajectory partial)
    : DivergenceError("fractional descent produced a non-finite iterate at iteration " +
                          std::to_string(iteration),
                      iteration),
      partial_(std::move(partial)) {}

double gamma_fn(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("gamma_fn: argument must be positive and finite");
  }
  return lanczos_gamma(x);
}

CaputoTerms caputo_quadratic_terms(double a, double b, double /*c*/, double x0, double x,
                                   double alpha) {
  require_caputo_branch(x0, x, alpha);
  const double h = x - x0;
  const double d1 = 2.0 * a * x0 + b;
  const double d2 = 2.0 * a;
  return {d1 / gamma_fn(2.0 - alpha) * std::pow(h, 1.0 - alpha),
          d2 / gamma_fn(3.0 - alpha) * std::pow(h, 2.0 - alpha)};
}

double caputo_quadratic(double a, double b, double c, double x0, double x, double alpha) {
  return caputo_quadratic_terms(a, b, c, x0, x, alpha).sum();
}

double fractional_coefficient(double delta, double alpha, double epsilon) {
  return FractionalCoefficient(alpha, epsilon)(delta);
}

FractionalCoefficient::FractionalCoefficient(double alpha, double epsilon)
    : epsilon_(epsilon),
      exponent_(1.0 - alpha),
      inv_gamma_(1.0 / gamma_fn(2.0 - alpha)),
      unit_(alpha == 1.0) {}

double fractional_step(double x_k, double x_km1, double grad_km1,
                       const FractionalStepParams& params) {
  params.validate();
  return x_k - params.mu * grad_km1 *
                   fractional_coefficient(x_k - x_km1, params.alpha, params.epsilon);
}

Trajectory minimize_convex(const ScalarObjective& objective, double x0,
                           const FractionalStepParams& params, std::size_t max_iters,
                           double tol) {
  params.validate();
  Trajectory traj;
  auto push = [&](std::size_t k, double x) {
    if (!std::isfinite(x)) throw MinimizationDiverged(k, traj);
    traj.points.push_back({k, x, objective.value(x)});
  };

  push(0, x0);
  if (max_iters == 0) return traj;

  double prev = x0;
  double cur = x0 - params.mu * objective.derivative(x0);
  push(1, cur);
  if (std::abs(cur - prev) < tol) return traj;

  for (std::size_t k = 2; k <= max_iters; ++k) {
    const double next = fractional_step(cur, prev, objective.derivative(prev), params);
    push(k, next);
    const double step = std::abs(next - cur);
    prev = cur;
    cur = next;
    if (step < tol) break;
  }
  return traj;
}

}  // namespace spikegrad::fracgrad
