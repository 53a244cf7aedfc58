#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gnlbandit/errors.hpp"
#include "gnlbandit/model.hpp"

namespace gnl {

// A probability vector over the arms; the gradient of a GNL surplus always
// lies in the relative interior of the simplex, though entries may underflow
// to zero in double precision once utility gaps exceed roughly 700 * mu_l.
struct SimplexPoint {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }

  double sum() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }
};

namespace detail {

// Per-nest log statistics of G(e^u):
//   ln S_l = logsumexp_{i in N_l} (ln sigma_il + u_i) / mu_l
//   t_l    = (mu_l / mu) * ln S_l,   ln G = logsumexp_l t_l.
// Everything is max-shifted before exponentiation, so the evaluation stays
// finite for utility magnitudes up to ~1e6.
struct NestLogs {
  std::vector<double> ln_s;  // per nest
  std::vector<double> t;     // per nest
  double ln_g = 0.0;
};

inline NestLogs nest_logs(const GnlModel& model, std::span<const double> u) {
  const auto& nests = model.compiled();
  NestLogs out;
  out.ln_s.reserve(nests.size());
  out.t.reserve(nests.size());
  for (const auto& nest : nests) {
    double m = -HUGE_VAL;
    for (std::size_t k = 0; k < nest.arms.size(); ++k) {
      double a = (nest.log_shares[k] + u[nest.arms[k]]) / nest.mu;
      if (a > m) m = a;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < nest.arms.size(); ++k)
      s += std::exp((nest.log_shares[k] + u[nest.arms[k]]) / nest.mu - m);
    double ln_s = m + std::log(s);
    out.ln_s.push_back(ln_s);
    out.t.push_back(nest.mu_ratio * ln_s);
  }
  double tmax = out.t.front();
  for (double t : out.t)
    if (t > tmax) tmax = t;
  double g = 0.0;
  for (double t : out.t) g += std::exp(t - tmax);
  out.ln_g = tmax + std::log(g);
  return out;
}

}  // namespace detail

// G(x) = sum_l ( sum_i (sigma_il x_i)^(1/mu_l) )^(mu_l/mu), evaluated
// directly.  Intended for verification on moderate inputs; the learners use
// the log-domain surplus below instead.
inline double generating_value(const GnlModel& model,
                               std::span<const double> x) {
  bool all_zero = true;
  for (int i = 0; i < model.num_arms(); ++i) {
    if (x[i] < 0.0)
      throw InvalidParameterError("generating function needs x >= 0");
    if (x[i] > 0.0) all_zero = false;
  }
  if (all_zero)
    throw DegenerateInputError("generating function undefined at x = 0");

  double g = 0.0;
  for (const auto& nest : model.compiled()) {
    double s = 0.0;
    for (std::size_t k = 0; k < nest.arms.size(); ++k) {
      double xi = x[nest.arms[k]];
      if (xi > 0.0)
        s += std::pow(std::exp(nest.log_shares[k]) * xi, 1.0 / nest.mu);
    }
    if (s > 0.0) g += std::pow(s, nest.mu_ratio);
  }
  return g;
}

// Surplus E(u) = mu * ln G(e^u), log-domain.
inline double surplus(const GnlModel& model, std::span<const double> u) {
  return model.mu() * detail::nest_logs(model, u).ln_g;
}

// Choice probabilities P_i = dE/du_i, via the nest decomposition
//   P_i = sum_l [nest prob q_l] * [within-nest weight w_il],
//   q_l = exp(t_l - ln G),  w_il = exp((ln sigma_il + u_i)/mu_l - ln S_l),
// which coincides with mu * (dG/dx_i) * e^{u_i} / G(e^u).
inline SimplexPoint choice_probabilities(const GnlModel& model,
                                         std::span<const double> u) {
  const auto& nests = model.compiled();
  detail::NestLogs logs = detail::nest_logs(model, u);

  SimplexPoint point;
  point.probs.assign(model.num_arms(), 0.0);
  for (std::size_t l = 0; l < nests.size(); ++l) {
    const auto& nest = nests[l];
    double q = std::exp(logs.t[l] - logs.ln_g);
    for (std::size_t k = 0; k < nest.arms.size(); ++k) {
      double a = (nest.log_shares[k] + u[nest.arms[k]]) / nest.mu;
      point.probs[nest.arms[k]] += q * std::exp(a - logs.ln_s[l]);
    }
  }
  double total = point.sum();
  for (double& p : point.probs) p /= total;
  return point;
}

// Gradient of the perspective Etilde(U; eta) = eta * E(U / eta), which equals
// the choice probabilities evaluated at U / eta.
inline SimplexPoint perspective_gradient(const GnlModel& model,
                                         std::span<const double> utilities,
                                         double eta) {
  if (!(eta > 0.0))
    throw InvalidParameterError("perspective scale eta must be positive");
  std::vector<double> scaled(utilities.begin(), utilities.end());
  for (double& v : scaled) v /= eta;
  return choice_probabilities(model, scaled);
}

// Etilde(U; eta) = eta * E(U / eta).
inline double perspective_value(const GnlModel& model,
                                std::span<const double> utilities, double eta) {
  if (!(eta > 0.0))
    throw InvalidParameterError("perspective scale eta must be positive");
  std::vector<double> scaled(utilities.begin(), utilities.end());
  for (double& v : scaled) v /= eta;
  return eta * surplus(model, scaled);
}

}  // namespace gnl
