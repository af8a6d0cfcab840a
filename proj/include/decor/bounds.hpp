#pragma once

#include <cstddef>
#include <cstdint>

namespace decor {

class Rng;

struct MonteCarloEstimate {
  std::size_t trials = 0;
  std::size_t hits = 0;

  double value() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
  /// Binomial standard error at probability p.
  double sigma(double p) const;
  /// |value - p| <= k sigma(p).
  bool within(double p, double k = 3.0) const;
  /// value <= p + k sigma(p).
  bool at_most(double p, double k = 3.0) const;
};

/// Probability that t uniform picks from an n-key list all agree: 1 / n^(t-1).
double same_label_probability(std::size_t n, std::size_t t);

/// Monte-Carlo estimate of the above.
MonteCarloEstimate mc_same_label_given_feature(std::size_t n, std::size_t t, std::size_t trials, Rng& rng);

/// Exact probability that t independent key-set samplings with a shared
/// reported key produce the same set: sum over n of
/// (1/(N-1))^t / C(2^kappa - 1, n - 1)^(t-1).
double same_feature_probability(std::size_t kappa, std::size_t max_keys, std::size_t t);

/// Upper bound (1 / ((2^kappa - 1)(N - 1)))^(t-1).
double same_feature_bound(std::size_t kappa, std::size_t max_keys, std::size_t t);

/// Monte-Carlo estimate using the key-set sampler itself. kappa <= 16.
MonteCarloEstimate mc_same_feature_given_label(std::size_t kappa, std::size_t max_keys, std::size_t t,
                                               std::size_t trials, Rng& rng);

}  // namespace decor
