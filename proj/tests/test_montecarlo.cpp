#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "frv/errors.hpp"
#include "frv/montecarlo.hpp"
#include "frv/polynomial.hpp"
#include "oracles.hpp"

using frv::ProcessSpec;
using frv::SimulationConfig;

TEST_CASE("gaussian stream moments and determinism") {
  frv::GaussianStream s1(42, 0), s2(42, 0), s3(42, 1);
  double m1 = 0.0, m2 = 0.0;
  const int n = 200000;
  bool identical = true, distinct = false;
  for (int i = 0; i < n; ++i) {
    const double x = s1.gaussian();
    if (x != s2.gaussian()) identical = false;
    if (x != s3.gaussian()) distinct = true;
    m1 += x;
    m2 += x * x;
  }
  CHECK(identical);
  CHECK(distinct);
  CHECK(std::abs(m1 / n) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(m2 / n - 1.0) < 5.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("config validation") {
  SimulationConfig bad(ProcessSpec::vma({1.0}), 1, 100);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  SimulationConfig reps(ProcessSpec::vma({1.0}), 4, 100);
  reps.replicas = 0;
  CHECK_THROWS_AS(reps.validate(), std::invalid_argument);
  SimulationConfig burn(ProcessSpec::varma({1.0, 0.3}, {0.2}), 4, 100);
  burn.burn_in = 1;
  CHECK_THROWS_AS(burn.validate(), std::invalid_argument);
  burn.burn_in = 2;
  CHECK_NOTHROW(burn.validate());
  CHECK(burn.ratio() == doctest::Approx(0.04));
}

TEST_CASE("auto burn-in") {
  SimulationConfig vma(ProcessSpec::vma({1.0, 0.3}), 4, 100);
  CHECK(vma.effective_burn_in() == 0);
  SimulationConfig var(ProcessSpec::var(1.0, {0.5}), 4, 100);
  CHECK(var.effective_burn_in() == 1000);  // max(1000, ceil(50 * 1.44))
  SimulationConfig slow(ProcessSpec::var(1.0, {0.999}), 4, 100);
  // T = -1/log(0.999) ~ 999.5 -> ceil(50 * T) ~ 49975
  CHECK(slow.effective_burn_in() > 40000);
}

TEST_CASE("panel sample autocovariances match theory") {
  SUBCASE("VMA(1) lag-1") {
    SimulationConfig config(ProcessSpec::vma({1.0, 0.3}), 2, 1'000'000);
    config.seed = 7;
    auto panel = frv::simulate_panel(config, 0);
    for (int i = 0; i < 2; ++i) {
      double acc = 0.0;
      for (int t = 0; t + 1 < panel.cols(); ++t)
        acc += panel(i, t) * panel(i, t + 1);
      acc /= double(panel.cols() - 1);
      const double se = 5.0 * std::sqrt(3.0 * 1.09 * 1.09 / panel.cols());
      CHECK(std::abs(acc - 0.3) < se);
    }
  }
  SUBCASE("VAR(1) variance") {
    SimulationConfig config(ProcessSpec::var(1.0, {0.5}), 2, 1'000'000);
    config.seed = 11;
    auto panel = frv::simulate_panel(config, 0);
    const double want = 4.0 / 3.0;
    for (int i = 0; i < 2; ++i) {
      double acc = 0.0;
      for (int t = 0; t < panel.cols(); ++t) acc += panel(i, t) * panel(i, t);
      acc /= double(panel.cols());
      // long-range dependence inflates the error of the mean; generous window
      const double se = 5.0 * std::sqrt(8.0 * want * want / panel.cols());
      CHECK(std::abs(acc - want) < se);
    }
  }
  SUBCASE("white noise cross-covariance vanishes") {
    SimulationConfig config(ProcessSpec::vma({1.0}), 2, 1'000'000);
    config.seed = 13;
    auto panel = frv::simulate_panel(config, 0);
    double acc = 0.0;
    for (int t = 0; t < panel.cols(); ++t) acc += panel(0, t) * panel(1, t);
    acc /= double(panel.cols());
    CHECK(std::abs(acc) < 5.0 / std::sqrt(double(panel.cols())));
  }
  SUBCASE("VARMA(1,1) lag 0 and 1") {
    SimulationConfig config(ProcessSpec::varma({1.0, 0.3}, {0.2}), 2, 1'000'000);
    config.seed = 17;
    auto panel = frv::simulate_panel(config, 0);
    double a0 = 0.0, a1 = 0.0;
    for (int t = 0; t + 1 < panel.cols(); ++t) {
      a0 += panel(0, t) * panel(0, t);
      a1 += panel(0, t) * panel(0, t + 1);
    }
    a0 /= double(panel.cols() - 1);
    a1 /= double(panel.cols() - 1);
    CHECK(std::abs(a0 - 1.2604166666666667) < 0.012);  // ~5 SE with dependence
    CHECK(std::abs(a1 - 0.5520833333333333) < 0.012);
  }
}

TEST_CASE("pearson estimator") {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(2, 4);
  Eigen::MatrixXd c = frv::pearson_estimator(ones);
  CHECK(c(0, 0) == doctest::Approx(1.0));
  CHECK(c(0, 1) == doctest::Approx(1.0));
  CHECK(c(1, 0) == doctest::Approx(1.0));
  CHECK(c(1, 1) == doctest::Approx(1.0));

  // 1 x T standard normal panel: c_11 estimates the unit variance
  SimulationConfig config(ProcessSpec::vma({1.0}), 2, 1'000'000);
  config.seed = 5;
  auto panel = frv::simulate_panel(config, 0);
  auto cc = frv::pearson_estimator(panel.topRows(1));
  CHECK(std::abs(cc(0, 0) - 1.0) < 5.0 * std::sqrt(2.0 / 1e6));
}

TEST_CASE("eigenvalues_symmetric") {
  Eigen::MatrixXd d = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  auto ev = frv::eigenvalues_symmetric(d);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(3.0));

  Eigen::MatrixXd m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  auto ev2 = frv::eigenvalues_symmetric(m);
  CHECK(ev2[0] == doctest::Approx(1.0));
  CHECK(ev2[1] == doctest::Approx(3.0));

  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(frv::eigenvalues_symmetric(asym), std::invalid_argument);
}

TEST_CASE("eigenvalues versus characteristic-polynomial roots") {
  // random symmetric 8x8; char poly by Faddeev-LeVerrier, roots by polyroots
  frv::GaussianStream g(99, 0);
  Eigen::MatrixXd a(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j <= i; ++j) {
      a(i, j) = g.gaussian();
      a(j, i) = a(i, j);
    }
  auto ev = frv::eigenvalues_symmetric(a);
  auto roots = frv::find_roots(frv::Polynomial::from_real(oracle::char_poly(a)));
  std::vector<double> real_roots;
  for (const auto& rr : roots) real_roots.push_back(rr.real());
  std::sort(real_roots.begin(), real_roots.end());
  REQUIRE(real_roots.size() == ev.size());
  for (size_t i = 0; i < ev.size(); ++i)
    CHECK(ev[i] == doctest::Approx(real_roots[i]).epsilon(1e-8));
}

TEST_CASE("QLambdaQ^T reconstruction on test matrices") {
  frv::GaussianStream g(123, 0);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 6 + 3 * trial;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        a(i, j) = g.gaussian();
        a(j, i) = a(i, j);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::MatrixXd rec = es.eigenvectors() *
                                es.eigenvalues().asDiagonal() *
                                es.eigenvectors().transpose();
    CHECK((rec - a).norm() / a.norm() < 1e-10);
  }
}

TEST_CASE("duality of the two estimators") {
  SUBCASE("small panel, brute force") {
    SimulationConfig config(ProcessSpec::vma({1.0, 0.3}), 3, 7);
    config.seed = 21;
    auto panel = frv::simulate_panel(config, 0);
    auto rep = frv::dual_estimator_spectrum_check(panel);
    CHECK(rep.applicable);
    CHECK(rep.passed);
    CHECK(rep.zero_modes_expected == 4);
    CHECK(rep.zero_modes_found == 4);
    CHECK(rep.max_rel_deviation < 1e-8);
  }
  SUBCASE("N = T skipped") {
    SimulationConfig config(ProcessSpec::vma({1.0}), 5, 5);
    config.seed = 22;
    auto panel = frv::simulate_panel(config, 0);
    auto rep = frv::dual_estimator_spectrum_check(panel);
    CHECK_FALSE(rep.applicable);
    CHECK(rep.passed);
  }
  SUBCASE("VARMA 50x200 panel: 150 zero modes") {
    SimulationConfig config(ProcessSpec::varma({1.0, 0.3}, {0.2}), 50, 200);
    config.seed = 23;
    auto panel = frv::simulate_panel(config, 0);
    auto rep = frv::dual_estimator_spectrum_check(panel);
    CHECK(rep.passed);
    CHECK(rep.zero_modes_found == 150);
  }
}

TEST_CASE("estimator is positive semi-definite") {
  SimulationConfig config(ProcessSpec::varma({1.0, 0.3}, {0.2}), 20, 50);
  config.seed = 31;
  config.replicas = 8;
  for (int k = 0; k < config.replicas; ++k) {
    auto ev =
        frv::eigenvalues_symmetric(frv::pearson_estimator(frv::simulate_panel(config, k)));
    CHECK(ev.front() >= -1e-10 * std::max(1.0, ev.back()));
  }
}

TEST_CASE("aggregate spectrum") {
  SimulationConfig config(ProcessSpec::vma({1.0}), 50, 200);
  config.seed = 42;
  config.replicas = 20;

  auto sample = frv::aggregate_spectrum(config);
  CHECK(sample.pooled_count() == 50u * 20u);
  // histogram normalized to unit area
  double area = 0.0;
  for (size_t i = 0; i < sample.histogram.density.size(); ++i)
    area += sample.histogram.density[i] *
            (sample.histogram.edges[i + 1] - sample.histogram.edges[i]);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  // auto bin count
  CHECK(sample.histogram.density.size() ==
        size_t(std::ceil(std::sqrt(1000.0))));

  // single white-noise replica roughly spans the MP support
  SimulationConfig one(ProcessSpec::vma({1.0}), 50, 200);
  one.seed = 43;
  auto s1 = frv::aggregate_spectrum(one);
  CHECK(s1.pooled_count() == 50u);
  const auto pooled = s1.pooled_sorted();
  CHECK(pooled.front() > 0.05);
  CHECK(pooled.front() < 0.5);
  CHECK(pooled.back() > 1.8);
  CHECK(pooled.back() < 3.2);
}

TEST_CASE("determinism across runs and worker counts") {
  SimulationConfig config(ProcessSpec::varma({1.0, 0.3}, {0.2}), 10, 40);
  config.seed = 99;
  config.replicas = 12;
  auto s1 = frv::aggregate_spectrum(config, std::nullopt, 1);
  auto s2 = frv::aggregate_spectrum(config, std::nullopt, 4);
  auto s3 = frv::aggregate_spectrum(config, std::nullopt, 3);
  REQUIRE(s1.eigenvalues.size() == s2.eigenvalues.size());
  for (size_t k = 0; k < s1.eigenvalues.size(); ++k) {
    REQUIRE(s1.eigenvalues[k] == s2.eigenvalues[k]);  // bitwise
    REQUIRE(s1.eigenvalues[k] == s3.eigenvalues[k]);
  }
  CHECK(s1.histogram.density == s2.histogram.density);
  CHECK(s1.histogram.edges == s3.histogram.edges);
}

TEST_CASE("mean eigenvalue approaches A(0)") {
  SimulationConfig config(ProcessSpec::varma({1.0, 0.3}, {0.2}), 30, 120);
  config.seed = 4242;
  config.replicas = 40;
  auto sample = frv::aggregate_spectrum(config);
  const auto pooled = sample.pooled_sorted();
  double mean = 0.0;
  for (double x : pooled) mean += x;
  mean /= double(pooled.size());
  // pooled SE over replica means
  double mu = 0.0;
  std::vector<double> rm;
  for (const auto& v : sample.eigenvalues) {
    double s = 0.0;
    for (double x : v) s += x;
    rm.push_back(s / double(v.size()));
    mu += rm.back();
  }
  mu /= double(rm.size());
  double var = 0.0;
  for (double v : rm) var += (v - mu) * (v - mu);
  var /= double(rm.size() - 1);
  const double se = std::sqrt(var / double(rm.size()));
  CHECK(std::abs(mean - 1.2604166666666667) < 5.0 * se);
}

TEST_CASE("burn-in sufficiency at the reference configuration") {
  SimulationConfig config(ProcessSpec::varma({1.0, 0.3}, {0.2}), 50, 200);
  config.seed = 2025;
  config.replicas = 1000;
  auto s1 = frv::aggregate_spectrum(config);
  config.burn_in = 2 * config.effective_burn_in();
  auto s2 = frv::aggregate_spectrum(config);
  // L1 distance between pooled histograms on shared bins
  const auto p1 = s1.pooled_sorted();
  const auto p2 = s2.pooled_sorted();
  const double lo = std::min(p1.front(), p2.front());
  const double hi = std::max(p1.back(), p2.back());
  const int nb = 100;
  double l1 = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double e0 = lo + (hi - lo) * b / nb;
    const double e1 = lo + (hi - lo) * (b + 1) / nb;
    auto frac = [&](const std::vector<double>& v) {
      return double(std::upper_bound(v.begin(), v.end(), e1) -
                    std::lower_bound(v.begin(), v.end(), e0)) /
             double(v.size());
    };
    l1 += std::abs(frac(p1) - frac(p2));
  }
  CHECK(l1 < 0.005);
}
