#include "decor/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "decor/enhance.hpp"
#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

double MonteCarloEstimate::sigma(double p) const {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

bool MonteCarloEstimate::within(double p, double k) const { return std::abs(value() - p) <= k * sigma(p); }

bool MonteCarloEstimate::at_most(double p, double k) const { return value() <= p + k * sigma(p); }

double same_label_probability(std::size_t n, std::size_t t) {
  if (n == 0 || t == 0) throw InvalidArgument("n and t must be positive");
  return std::pow(static_cast<double>(n), -static_cast<double>(t - 1));
}

MonteCarloEstimate mc_same_label_given_feature(std::size_t n, std::size_t t, std::size_t trials, Rng& rng) {
  if (n < 2) throw InvalidArgument("n must be at least 2");
  if (t < 1) throw InvalidArgument("t must be at least 1");
  MonteCarloEstimate est{trials, 0};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t first = rng.below(n);
    bool same = true;
    for (std::size_t j = 1; j < t; ++j) same &= rng.below(n) == first;
    est.hits += same;
  }
  return est;
}

namespace {

void check_feature_args(std::size_t kappa, std::size_t max_keys, std::size_t t) {
  if (t < 1) throw InvalidArgument("t must be at least 1");
  if (kappa < 1 || kappa > 16) throw InvalidArgument("key size " + std::to_string(kappa) + " outside 1..16");
  if (max_keys < 2 || max_keys > (std::size_t{1} << kappa))
    throw InvalidArgument("maximum number of correct keys outside 2..2^kappa");
}

double log_choose(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

}  // namespace

double same_feature_probability(std::size_t kappa, std::size_t max_keys, std::size_t t) {
  check_feature_args(kappa, max_keys, t);
  const double others = std::ldexp(1.0, static_cast<int>(kappa)) - 1.0;
  const double choices = static_cast<double>(max_keys - 1);
  double sum = 0.0;
  for (std::size_t n = 2; n <= max_keys; ++n) {
    const double log_term = -static_cast<double>(t) * std::log(choices) -
                            static_cast<double>(t - 1) * log_choose(others, static_cast<double>(n - 1));
    sum += std::exp(log_term);
  }
  return sum;
}

double same_feature_bound(std::size_t kappa, std::size_t max_keys, std::size_t t) {
  check_feature_args(kappa, max_keys, t);
  const double others = std::ldexp(1.0, static_cast<int>(kappa)) - 1.0;
  return std::pow(1.0 / (others * static_cast<double>(max_keys - 1)), static_cast<double>(t - 1));
}

MonteCarloEstimate mc_same_feature_given_label(std::size_t kappa, std::size_t max_keys, std::size_t t,
                                               std::size_t trials, Rng& rng) {
  check_feature_args(kappa, max_keys, t);
  MonteCarloEstimate est{trials, 0};
  std::vector<std::uint8_t> k_star(kappa);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (auto& b : k_star) b = rng.coin() ? 1 : 0;
    auto first = sample_key_bits(kappa, max_keys, k_star, rng);
    std::sort(first.begin() + 1, first.end());
    bool same = true;
    for (std::size_t j = 1; j < t && same; ++j) {
      auto next = sample_key_bits(kappa, max_keys, k_star, rng);
      std::sort(next.begin() + 1, next.end());
      same = next == first;
    }
    // Remaining runs of a failed trial are skipped; trials stay independent.
    est.hits += same;
  }
  return est;
}

}  // namespace decor
