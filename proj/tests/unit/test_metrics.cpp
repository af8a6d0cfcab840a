#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "decor/error.hpp"
#include "decor/metrics.hpp"
#include "decor/random.hpp"
#include "helpers.hpp"

#if defined(DECOR_HAVE_EIGEN)
#include <Eigen/Dense>
#endif

using namespace decor;

namespace {

TrainingSet structured_set(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  TrainingSet ts;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t label = rng.coin();
    std::vector<std::uint8_t> f{static_cast<std::uint8_t>(label ? (rng.chance(0.9) ? 7 : 6) : (rng.chance(0.9) ? 6 : 7)),
                                static_cast<std::uint8_t>(rng.between(1, 5)),
                                static_cast<std::uint8_t>(rng.chance(0.7) ? 8 : rng.between(2, 11))};
    ts.records.push_back({i, "keyinput0", f, label});
  }
  return ts;
}

double brute_threshold(const std::vector<double>& v, const std::vector<std::uint8_t>& l) {
  std::vector<double> cuts{-INFINITY};
  for (double x : v) cuts.push_back(x);
  std::size_t best = 0;
  for (double t : cuts)
    for (int pol = 0; pol < 2; ++pol) {
      std::size_t ok = 0;
      for (std::size_t i = 0; i < v.size(); ++i) ok += ((v[i] > t) == (pol == 0)) == (l[i] == 1);
      best = std::max(best, ok);
    }
  return double(best) / double(v.size());
}

}  // namespace

TEST_CASE("PCA components are orthonormal and oriented") {
  PcaProjection p = pca_top2(structured_set(300, 1));
  CHECK(!p.degenerate);
  const auto& a = p.components[0];
  const auto& b = p.components[1];
  CHECK(std::inner_product(a.begin(), a.end(), a.begin(), 0.0) == doctest::Approx(1.0));
  CHECK(std::inner_product(b.begin(), b.end(), b.begin(), 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(std::inner_product(a.begin(), a.end(), b.begin(), 0.0)) < 1e-6);
  for (const auto* v : {&a, &b}) {
    auto m = std::max_element(v->begin(), v->end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    CHECK(*m > 0);
  }
  CHECK(p.explained[0] >= p.explained[1]);
  CHECK(p.explained[0] + p.explained[1] <= 1.0 + 1e-9);
  double mean1 = 0;
  for (const auto& pt : p.points) mean1 += pt.pc1;
  CHECK(std::abs(mean1 / p.points.size()) < 1e-9);
}

#if defined(DECOR_HAVE_EIGEN)
TEST_CASE("PCA agrees with a dense eigendecomposition") {
  for (std::uint64_t seed : {2u, 3u, 4u}) {
    TrainingSet ts = structured_set(400, seed);
    PcaProjection p = pca_top2(ts);
    const std::size_t dim = ts.records[0].feature.size() * kFeatureCodeCount;
    Eigen::MatrixXd x(ts.records.size(), dim);
    for (std::size_t i = 0; i < ts.records.size(); ++i) {
      auto oh = one_hot(ts.records[i].feature);
      for (std::size_t j = 0; j < dim; ++j) x(i, j) = oh[j];
    }
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / double(ts.records.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const auto& ev = es.eigenvalues();
    const double trace = cov.trace();
    CHECK(p.explained[0] == doctest::Approx(ev(dim - 1) / trace).epsilon(1e-6));
    CHECK(p.explained[1] == doctest::Approx(ev(dim - 2) / trace).epsilon(1e-6));
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd ref = es.eigenvectors().col(dim - 1 - k);
      double dot = 0;
      for (std::size_t j = 0; j < dim; ++j) dot += ref(j) * p.components[k][j];
      CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-5));
      Eigen::VectorXd proj = centered * ref;
      for (std::size_t i = 0; i < 20; ++i) {
        const double got = k == 0 ? p.points[i].pc1 : p.points[i].pc2;
        CHECK(std::abs(got) == doctest::Approx(std::abs(proj(i))).epsilon(1e-5));
      }
    }
  }
}
#endif

TEST_CASE("PCA degenerate inputs") {
  TrainingSet same;
  for (std::size_t i = 0; i < 5; ++i) same.records.push_back({i, "k", {6, 1, 8}, std::uint8_t(i % 2)});
  PcaProjection p = pca_top2(same);
  CHECK(p.degenerate);
  for (const auto& pt : p.points) CHECK(pt.pc1 == 0.0);
  TrainingSet tiny;
  tiny.records = {same.records[0], same.records[1]};
  CHECK_THROWS_AS(pca_top2(tiny), InvalidArgument);
}

TEST_CASE("threshold accuracy equals brute force") {
  CHECK(best_threshold_accuracy({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
  CHECK(best_threshold_accuracy({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == 1.0);
  CHECK(best_threshold_accuracy({1, 1, 1, 1}, {1, 0, 1, 1}) == 0.75);
  CHECK(best_threshold_accuracy({}, {}) == 0.0);
  CHECK_THROWS_AS(best_threshold_accuracy({1.0}, {}), InvalidArgument);
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(30);
    std::vector<double> v(n);
    std::vector<std::uint8_t> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = double(rng.below(8));
      l[i] = rng.coin();
    }
    CHECK(best_threshold_accuracy(v, l) == doctest::Approx(brute_threshold(v, l)));
  }
}

TEST_CASE("gate overhead") {
  Circuit a = test::random_circuit(8, 3, 100, 1);
  Circuit b = a;
  b.gates.push_back({"extra", GateKind::And, {a.inputs[0], a.inputs[1], a.inputs[2]}});
  OverheadRecord r = gate_overhead(a, b, Scheme::Xbi);
  CHECK(r.gates_original == two_input_gate_count(a));
  CHECK(r.gates_locked == r.gates_original + 2);
  CHECK(r.overhead_percent == doctest::Approx(200.0 / r.gates_original));
}
