#include "decor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

OverheadRecord gate_overhead(const Circuit& original, const Circuit& locked, Scheme scheme) {
  OverheadRecord r;
  r.circuit = original.name;
  r.scheme = scheme;
  r.gates_original = two_input_gate_count(original);
  r.gates_locked = two_input_gate_count(locked);
  if (r.gates_original > 0)
    r.overhead_percent = 100.0 * (static_cast<double>(r.gates_locked) - static_cast<double>(r.gates_original)) /
                         static_cast<double>(r.gates_original);
  return r;
}

OverheadRecord gate_overhead(const Circuit& original, const LockedCircuit& locked) {
  return gate_overhead(original, locked.circuit(), locked.scheme());
}

std::vector<double> one_hot(const std::vector<std::uint8_t>& feature) {
  std::vector<double> x(feature.size() * kFeatureCodeCount, 0.0);
  for (std::size_t p = 0; p < feature.size(); ++p)
    x[p * kFeatureCodeCount + std::min<std::size_t>(feature[p], kFeatureCodeCount - 1)] = 1.0;
  return x;
}

namespace {

constexpr double kTolerance = 1e-9;
constexpr std::size_t kMaxIterations = 10000;

using Matrix = std::vector<double>;  // row-major, dim x dim

void multiply(const Matrix& m, std::size_t dim, const std::vector<double>& v, std::vector<double>& out) {
  out.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double* row = m.data() + i * dim;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += row[j] * v[j];
    out[i] = s;
  }
}

double norm(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

void orient(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0)
    for (auto& x : v) x = -x;
}

// Dominant eigenpair of a symmetric PSD matrix, restricted to the orthogonal
// complement of `against`.
std::pair<double, std::vector<double>> power_iteration(const Matrix& m, std::size_t dim,
                                                       const std::vector<std::vector<double>>& against) {
  Rng rng(0x9ca0a11ULL + against.size());
  std::vector<double> v(dim), w;
  for (auto& x : v) x = rng.unit() + 0.5;
  auto project = [&](std::vector<double>& x) {
    for (const auto& a : against) {
      const double d = std::inner_product(x.begin(), x.end(), a.begin(), 0.0);
      for (std::size_t i = 0; i < dim; ++i) x[i] -= d * a[i];
    }
  };
  project(v);
  double n = norm(v);
  if (n == 0.0) return {0.0, std::vector<double>(dim, 0.0)};
  for (auto& x : v) x /= n;
  double lambda = 0.0;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    multiply(m, dim, v, w);
    project(w);
    n = norm(w);
    if (n < 1e-300) return {0.0, std::vector<double>(dim, 0.0)};
    for (auto& x : w) x /= n;
    double delta = 0.0;
    for (std::size_t i = 0; i < dim; ++i) delta = std::max(delta, std::abs(w[i] - v[i]));
    v.swap(w);
    lambda = n;
    if (delta < kTolerance) break;
  }
  return {lambda, v};
}

}  // namespace

PcaProjection pca_top2(const TrainingSet& ts) {
  const std::size_t n = ts.records.size();
  if (n < 3) throw InvalidArgument("principal components need at least 3 records");
  const std::size_t len = ts.records.front().feature.size();
  const std::size_t dim = len * kFeatureCodeCount;
  auto index = [&](const FeatureRecord& r, std::size_t p) {
    return p * kFeatureCodeCount + std::min<std::size_t>(r.feature[p], kFeatureCodeCount - 1);
  };

  // Sparse accumulation: every record has exactly `len` ones.
  std::vector<double> mean(dim, 0.0);
  Matrix cov(dim * dim, 0.0);
  std::vector<std::size_t> idx(len);
  for (const auto& r : ts.records) {
    if (r.feature.size() != len) throw InvalidArgument("records have different feature lengths");
    for (std::size_t p = 0; p < len; ++p) idx[p] = index(r, p);
    for (std::size_t a : idx) {
      mean[a] += 1.0;
      for (std::size_t b : idx) cov[a * dim + b] += 1.0;
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& m : mean) m *= inv;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) cov[a * dim + b] = cov[a * dim + b] * inv - mean[a] * mean[b];
  double trace = 0.0;
  for (std::size_t a = 0; a < dim; ++a) trace += cov[a * dim + a];

  PcaProjection out;
  const double floor = std::max(1e-12, 1e-12 * trace);
  auto [l1, v1] = power_iteration(cov, dim, {});
  if (l1 <= floor) {
    l1 = 0.0;
    v1.assign(dim, 0.0);
    out.degenerate = true;
  }
  // Deflate, then find the next component orthogonal to the first.
  Matrix deflated = cov;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) deflated[a * dim + b] -= l1 * v1[a] * v1[b];
  std::vector<std::vector<double>> against;
  if (l1 > 0.0) against.push_back(v1);
  auto [l2, v2] = power_iteration(deflated, dim, against);
  if (l2 <= floor || l1 == 0.0) {
    l2 = 0.0;
    v2.assign(dim, 0.0);
    out.degenerate = true;
  } else {
    const double d = std::inner_product(v2.begin(), v2.end(), v1.begin(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) v2[i] -= d * v1[i];
    const double nv = norm(v2);
    for (auto& x : v2) x /= nv;
  }
  orient(v1);
  orient(v2);
  if (trace > 0) {
    out.explained[0] = l1 / trace;
    out.explained[1] = l2 / trace;
  }

  for (const auto& r : ts.records) {
    PcaPoint pt;
    pt.label = r.label;
    for (std::size_t p = 0; p < len; ++p) {
      const std::size_t a = index(r, p);
      pt.pc1 += v1[a];
      pt.pc2 += v2[a];
    }
    for (std::size_t a = 0; a < dim; ++a) {
      pt.pc1 -= mean[a] * v1[a];
      pt.pc2 -= mean[a] * v2[a];
    }
    out.points.push_back(pt);
  }
  out.components[0] = std::move(v1);
  out.components[1] = std::move(v2);
  return out;
}

double best_threshold_accuracy(const std::vector<double>& values, const std::vector<std::uint8_t>& labels) {
  if (values.size() != labels.size()) throw InvalidArgument("values and labels differ in length");
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const std::size_t ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  // Threshold below position i: predict 1 above it.
  std::size_t ones_below = 0, zeros_below = 0;
  std::size_t best = std::max(ones, n - ones);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) {
      (labels[order[j]] ? ones_below : zeros_below) += 1;
      ++j;
    }
    const std::size_t correct = zeros_below + (ones - ones_below);
    best = std::max({best, correct, n - correct});
    i = j;
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

}  // namespace decor
