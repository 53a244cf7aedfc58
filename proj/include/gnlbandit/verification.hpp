#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "gnlbandit/choice.hpp"
#include "gnlbandit/model.hpp"
#include "gnlbandit/rng.hpp"

namespace gnl {

// Smoothness estimate of the perspective surplus w.r.t. the sup norm:
// (2 / min_l mu_l - 1 / mu) / eta.  For a single-nest MNL this reduces to
// 1 / (mu * eta).
inline double smoothness_constant(const GnlModel& model, double eta) {
  if (!(eta > 0.0))
    throw InvalidParameterError("smoothness_constant: eta must be positive");
  return (2.0 / model.min_nest_mu() - 1.0 / model.mu()) / eta;
}

// Differential-consistency constant of the (unscaled) surplus:
// C = 1 / min_l mu_l.  The perspective at scale eta has constant C / eta.
inline double diff_consistency_constant(const GnlModel& model) {
  return 1.0 / model.min_nest_mu();
}

// D_Etilde(y, x) = Etilde(y) - Etilde(x) - <grad Etilde(x), y - x>.
inline double bregman_perspective(const GnlModel& model, double eta,
                                  std::span<const double> y,
                                  std::span<const double> x) {
  SimplexPoint grad = perspective_gradient(model, x, eta);
  double d = perspective_value(model, y, eta) - perspective_value(model, x, eta);
  for (int i = 0; i < model.num_arms(); ++i) d -= grad[i] * (y[i] - x[i]);
  return d;
}

// Outcome of one numerical certification: the worst margin (right side minus
// left side of the inequality, minimized over all samples) and whether it
// stayed above the check's tolerance.
struct CheckResult {
  std::string name;
  std::string model;
  std::string samples;
  double worst_margin = 0.0;
  bool passed = false;
  bool applicable = true;
};

struct VerificationReport {
  std::vector<CheckResult> entries;

  bool all_passed() const {
    for (const CheckResult& e : entries)
      if (e.applicable && !e.passed) return false;
    return true;
  }
};

namespace detail {

inline std::string sample_note(const char* what, int count, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s, %d samples, tolerance %g", what, count,
                tol);
  return buf;
}

}  // namespace detail

// Verifies D_Etilde(U + u, U) <= (L / 2) * ||u||_inf^2 on random samples with
// U in [-5, 5]^n and ||u||_inf <= 1, where L = smoothness_constant * scale.
// scale != 1 exists to make deliberately wrong constants fail.
inline CheckResult check_strong_smoothness(const GnlModel& model, double eta,
                                           int num_samples, RngStream& rng,
                                           double constant_scale = 1.0) {
  constexpr double kTol = 1e-10;
  const double level = constant_scale * smoothness_constant(model, eta);
  const int n = model.num_arms();
  std::vector<double> base(n), bumped(n);
  double worst = HUGE_VAL;
  for (int s = 0; s < num_samples; ++s) {
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      base[i] = -5.0 + 10.0 * rng.next_uniform();
      double step = -1.0 + 2.0 * rng.next_uniform();
      bumped[i] = base[i] + step;
      sup = std::max(sup, std::abs(step));
    }
    double divergence = bregman_perspective(model, eta, bumped, base);
    worst = std::min(worst, 0.5 * level * sup * sup - divergence);
  }
  return CheckResult{"strong-smoothness", model.describe(),
                     detail::sample_note("U in [-5,5]^n, |u|_inf <= 1",
                                         num_samples, kTol),
                     worst, worst >= -kTol, true};
}

// Verifies d2E/dU_i^2 <= C * dE/dU_i + 1e-8 on the negative orthant
// (coordinates log-uniform in [-50, -1e-3]), C = diff_consistency_constant *
// scale.  The second derivative is a central difference (h = 1e-4) of the
// closed-form gradient: differencing the surplus itself bottoms out at the
// ~1e-6 quantization floor of doubles, far above the 1e-8 tolerance, while
// the gradient route keeps the error proportional to the probability.
inline CheckResult check_diff_consistency(const GnlModel& model,
                                          int num_points, RngStream& rng,
                                          double constant_scale = 1.0) {
  constexpr double kTol = 1e-8;
  constexpr double kStep = 1e-4;
  const double level = constant_scale * diff_consistency_constant(model);
  const int n = model.num_arms();
  const double lo = std::log(1e-3), hi = std::log(50.0);
  std::vector<double> point(n), shifted(n);
  double worst = HUGE_VAL;
  for (int s = 0; s < num_points; ++s) {
    for (int i = 0; i < n; ++i)
      point[i] = -std::exp(lo + (hi - lo) * rng.next_uniform());
    SimplexPoint probs = choice_probabilities(model, point);
    for (int i = 0; i < n; ++i) {
      shifted = point;
      shifted[i] = point[i] + kStep;
      double up = choice_probabilities(model, shifted)[i];
      shifted[i] = point[i] - kStep;
      double down = choice_probabilities(model, shifted)[i];
      double second = (up - down) / (2.0 * kStep);
      worst = std::min(worst, level * probs[i] - second);
    }
  }
  return CheckResult{"differential-consistency", model.describe(),
                     detail::sample_note("U_i log-uniform in [-50,-1e-3]",
                                         num_points, kTol),
                     worst, worst >= -kTol, true};
}

// Verifies sum_i (d2G/dx_i^2) x_i^2 <= (Ctilde / mu) G(x) on the positive
// orthant (coordinates log-uniform in [0.25, 4]), Ctilde = (1/min mu_l - 1) *
// scale.  Partials are central differences of the generating function; the
// margin is normalized by max(1, G) so the tolerance absorbs the difference
// noise of the direct evaluation.
inline CheckResult check_proposition1(const GnlModel& model, int num_points,
                                      RngStream& rng,
                                      double constant_scale = 1.0) {
  constexpr double kTol = 1e-6;
  constexpr double kStep = 1e-4;
  const double level =
      constant_scale * (diff_consistency_constant(model) - 1.0) / model.mu();
  const int n = model.num_arms();
  const double lo = std::log(0.25), hi = std::log(4.0);
  std::vector<double> point(n), shifted(n);
  double worst = HUGE_VAL;
  for (int s = 0; s < num_points; ++s) {
    for (int i = 0; i < n; ++i)
      point[i] = std::exp(lo + (hi - lo) * rng.next_uniform());
    double g0 = generating_value(model, point);
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      shifted = point;
      shifted[i] = point[i] + kStep;
      double up = generating_value(model, shifted);
      shifted[i] = point[i] - kStep;
      double down = generating_value(model, shifted);
      lhs += (up - 2.0 * g0 + down) / (kStep * kStep) * point[i] * point[i];
    }
    worst = std::min(worst, (level * g0 - lhs) / std::max(1.0, g0));
  }
  return CheckResult{"curvature-condition", model.describe(),
                     detail::sample_note("x_i log-uniform in [0.25,4]",
                                         num_points, kTol),
                     worst, worst >= -kTol, true};
}

// MNL: E(0) must equal mu * ln n exactly (1e-10); partition NL: E(0) must lie
// in [min_l mu_l * ln n, ln n].  Other models are reported as not applicable.
inline CheckResult check_alpha_bounds(const GnlModel& model) {
  constexpr double kTol = 1e-10;
  const std::vector<double> zeros(model.num_arms(), 0.0);
  const double at_zero = surplus(model, zeros);
  const double log_n = std::log(static_cast<double>(model.num_arms()));
  CheckResult result;
  result.name = "surplus-at-zero-bounds";
  result.model = model.describe();
  if (model.is_mnl()) {
    result.samples = "exact identity mu*ln(n), tolerance 1e-10";
    result.worst_margin = kTol - std::abs(at_zero - model.mu() * log_n);
    result.passed = result.worst_margin >= 0.0;
  } else if (model.is_partition_nl()) {
    result.samples = "bracket [min mu_l * ln(n), ln(n)], tolerance 1e-10";
    result.worst_margin = std::min(at_zero - model.min_nest_mu() * log_n,
                                   log_n - at_zero);
    result.passed = result.worst_margin >= -kTol;
  } else {
    result.samples = "not applicable (neither MNL nor partition NL)";
    result.applicable = false;
  }
  return result;
}

// Runs every applicable check on one model with the standard sample counts.
inline VerificationReport run_model_verification(const GnlModel& model,
                                                 double eta,
                                                 std::uint64_t seed) {
  VerificationReport report;
  RngStream rng_smooth(seed, 0, 100);
  report.entries.push_back(
      check_strong_smoothness(model, eta, 10000, rng_smooth));
  RngStream rng_diff(seed, 0, 101);
  report.entries.push_back(check_diff_consistency(model, 100, rng_diff));
  RngStream rng_prop(seed, 0, 102);
  report.entries.push_back(check_proposition1(model, 100, rng_prop));
  report.entries.push_back(check_alpha_bounds(model));
  return report;
}

}  // namespace gnl
