#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "gnlbandit/errors.hpp"

namespace gnl {

// One nest of a generalized nested logit model: a scale mu_l and the strictly
// positive allocation shares of the arms attached to it.  Arms not listed
// carry share zero in this nest.
struct Nest {
  double mu = 1.0;
  std::vector<std::pair<int, double>> shares;  // (arm index, sigma_il)
};

// Spec of one nest in a partition model: member arms plus the nest scale.
struct NestSpec {
  std::vector<int> arms;
  double mu = 1.0;
};

// Two-level generalized nested logit model: top scale mu, nests with scales
// mu_l <= mu, and arm shares that sum to one per arm.  The single-nest model
// with unit shares and mu_l = mu is the multinomial logit; a partition with
// 0/1 shares and mu = 1 is the nested logit.
//
// Construction validates every structural invariant; all evaluation routines
// assume a valid model and are pure, so a model is safe to share across
// threads once built.
class GnlModel {
 public:
  // Per-nest view with precomputed log shares, used by the evaluators.
  struct CompiledNest {
    double mu = 1.0;
    double mu_ratio = 1.0;  // mu_l / mu
    std::vector<int> arms;
    std::vector<double> log_shares;
  };

  GnlModel(double mu, int num_arms, std::vector<Nest> nests)
      : mu_(mu), num_arms_(num_arms), nests_(std::move(nests)) {
    validate();
    compile();
  }

  int num_arms() const { return num_arms_; }
  double mu() const { return mu_; }
  const std::vector<Nest>& nests() const { return nests_; }
  const std::vector<CompiledNest>& compiled() const { return compiled_; }
  double min_nest_mu() const { return min_nest_mu_; }

  // Single nest containing every arm with full share and mu_l = mu.
  bool is_mnl() const {
    if (nests_.size() != 1) return false;
    const Nest& nest = nests_.front();
    if (nest.mu != mu_ || static_cast<int>(nest.shares.size()) != num_arms_)
      return false;
    for (const auto& [arm, sigma] : nest.shares)
      if (sigma != 1.0) return false;
    return true;
  }

  // mu = 1, every arm in exactly one nest with share 1.
  bool is_partition_nl() const {
    if (mu_ != 1.0) return false;
    std::vector<int> hits(num_arms_, 0);
    for (const Nest& nest : nests_)
      for (const auto& [arm, sigma] : nest.shares) {
        if (sigma != 1.0) return false;
        ++hits[arm];
      }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  }

  std::string describe() const {
    char buf[64];
    if (is_mnl()) {
      std::snprintf(buf, sizeof(buf), "mnl(n=%d,mu=%g)", num_arms_, mu_);
      return buf;
    }
    std::string out = is_partition_nl() ? "nl(" : "gnl(";
    std::snprintf(buf, sizeof(buf), "n=%d,mu=%g,nests=[", num_arms_, mu_);
    out += buf;
    for (std::size_t l = 0; l < nests_.size(); ++l) {
      if (l > 0) out += ",";
      std::snprintf(buf, sizeof(buf), "%g:", nests_[l].mu);
      out += buf;
      out += "{";
      for (std::size_t k = 0; k < nests_[l].shares.size(); ++k) {
        if (k > 0) out += ",";
        // arms are displayed 1-based, matching config files and CSV output
        std::snprintf(buf, sizeof(buf), "%d", nests_[l].shares[k].first + 1);
        out += buf;
      }
      out += "}";
    }
    out += "])";
    return out;
  }

 private:
  static constexpr double kShareSumTol = 1e-12;

  void validate() {
    if (num_arms_ < 1)
      throw InvalidParameterError("model needs at least one arm");
    if (!(mu_ > 0.0) || !std::isfinite(mu_))
      throw InvalidParameterError("top-level scale mu must be positive");
    if (nests_.empty())
      throw InvalidParameterError("model needs at least one nest");

    std::vector<double> share_sum(num_arms_, 0.0);
    for (Nest& nest : nests_) {
      if (!(nest.mu > 0.0) || !std::isfinite(nest.mu))
        throw InvalidParameterError("nest scale mu_l must be positive");
      if (nest.mu > mu_)
        throw InvalidParameterError(
            "nest scale must satisfy mu_l <= mu (got mu_l=" +
            std::to_string(nest.mu) + ", mu=" + std::to_string(mu_) + ")");
      if (nest.shares.empty())
        throw InvalidParameterError("nest must contain at least one arm");
      std::sort(nest.shares.begin(), nest.shares.end());
      int prev = -1;
      for (const auto& [arm, sigma] : nest.shares) {
        if (arm < 0 || arm >= num_arms_)
          throw InvalidParameterError("share references arm " +
                                      std::to_string(arm + 1) +
                                      " outside 1.." +
                                      std::to_string(num_arms_));
        if (arm == prev)
          throw InvalidParameterError("duplicate share for arm " +
                                      std::to_string(arm + 1) +
                                      " within one nest");
        prev = arm;
        if (!(sigma > 0.0) || !std::isfinite(sigma))
          throw InvalidParameterError(
              "stored shares must be strictly positive");
        share_sum[arm] += sigma;
      }
    }
    for (int i = 0; i < num_arms_; ++i) {
      if (share_sum[i] == 0.0)
        throw InvalidParameterError("arm " + std::to_string(i + 1) +
                                    " belongs to no nest");
      if (std::abs(share_sum[i] - 1.0) > kShareSumTol)
        throw InvalidParameterError(
            "shares of arm " + std::to_string(i + 1) +
            " must sum to one (got " + std::to_string(share_sum[i]) + ")");
    }
  }

  void compile() {
    min_nest_mu_ = nests_.front().mu;
    compiled_.reserve(nests_.size());
    for (const Nest& nest : nests_) {
      min_nest_mu_ = std::min(min_nest_mu_, nest.mu);
      CompiledNest c;
      c.mu = nest.mu;
      c.mu_ratio = nest.mu / mu_;
      c.arms.reserve(nest.shares.size());
      c.log_shares.reserve(nest.shares.size());
      for (const auto& [arm, sigma] : nest.shares) {
        c.arms.push_back(arm);
        c.log_shares.push_back(std::log(sigma));
      }
      compiled_.push_back(std::move(c));
    }
  }

  double mu_;
  int num_arms_;
  std::vector<Nest> nests_;
  std::vector<CompiledNest> compiled_;
  double min_nest_mu_ = 1.0;
};

// Multinomial logit: one nest holding every arm with share one.  Choice
// probabilities reduce to the softmax of u / mu.
inline GnlModel make_mnl(int num_arms, double mu) {
  if (num_arms < 1)
    throw InvalidParameterError("make_mnl: need at least one arm");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw InvalidParameterError("make_mnl: mu must be positive");
  Nest nest;
  nest.mu = mu;
  nest.shares.reserve(num_arms);
  for (int i = 0; i < num_arms; ++i) nest.shares.emplace_back(i, 1.0);
  return GnlModel(mu, num_arms, {std::move(nest)});
}

// Nested logit: the given nests must partition 1..n, each with scale in
// (0, 1]; the top-level scale is fixed to one and shares are 0/1.
inline GnlModel make_nested_logit(int num_arms,
                                  const std::vector<NestSpec>& specs) {
  if (num_arms < 1)
    throw InvalidParameterError("make_nested_logit: need at least one arm");
  std::vector<int> hits(num_arms, 0);
  std::vector<Nest> nests;
  nests.reserve(specs.size());
  for (const NestSpec& spec : specs) {
    if (!(spec.mu > 0.0) || spec.mu > 1.0)
      throw InvalidParameterError(
          "make_nested_logit: nest scale must lie in (0, 1], got " +
          std::to_string(spec.mu));
    Nest nest;
    nest.mu = spec.mu;
    for (int arm : spec.arms) {
      if (arm < 0 || arm >= num_arms)
        throw InvalidPartitionError("make_nested_logit: arm " +
                                    std::to_string(arm + 1) +
                                    " outside 1.." + std::to_string(num_arms));
      if (++hits[arm] > 1)
        throw InvalidPartitionError("make_nested_logit: arm " +
                                    std::to_string(arm + 1) +
                                    " appears in more than one nest");
      nest.shares.emplace_back(arm, 1.0);
    }
    if (nest.shares.empty())
      throw InvalidPartitionError("make_nested_logit: empty nest");
    nests.push_back(std::move(nest));
  }
  for (int i = 0; i < num_arms; ++i)
    if (hits[i] == 0)
      throw InvalidPartitionError("make_nested_logit: arm " +
                                  std::to_string(i + 1) +
                                  " is missing from the partition");
  return GnlModel(1.0, num_arms, std::move(nests));
}

}  // namespace gnl
