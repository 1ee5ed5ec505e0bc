#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "circuitforge/objectives.hpp"

using namespace circuitforge;

namespace {

SpectrumReport synthetic(std::vector<double> levels_ghz,
                         Eigen::MatrixXcd elements) {
  SpectrumReport r;
  r.levels = Eigen::VectorXd(levels_ghz.size());
  for (std::size_t i = 0; i < levels_ghz.size(); ++i) {
    r.levels(i) = levels_ghz[i] * 1e9;
  }
  r.matrix_elements["charge-edge-left"] = std::move(elements);
  return r;
}

Eigen::MatrixXcd element_table(double n01, double n12, double n02) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 1) = m(1, 0) = n01;
  m(1, 2) = m(2, 1) = n12;
  m(0, 2) = m(2, 0) = n02;
  return m;
}

}  // namespace

TEST_CASE("exact ladder target has zero cost") {
  CostSpec spec;
  spec.gamma = 1e9;
  spec.omega_max = 16e9;
  // w10 = w21 = 5, w32 detuned from both by exactly Gamma, w30 = 16
  auto r = synthetic({0.0, 5.0, 10.0, 16.0}, element_table(1.0, 1.0, 0.0));
  auto cost = ladder_cost(r, spec);
  CHECK(cost.total == doctest::Approx(0.0).epsilon(1e-15));
  for (double d : cost.distances) CHECK(std::abs(d) < 1e-12);
}

TEST_CASE("harmonic ladder pays the gamma floor") {
  CostSpec spec;
  spec.gamma = 1e9;
  spec.omega_max = 15e9;
  auto r = synthetic({0.0, 5.0, 10.0, 15.0}, element_table(1.0, 1.0, 0.0));
  auto cost = ladder_cost(r, spec);
  // d2 = d3 = -Gamma (in GHz units), contributing 2 Gamma^2 / 49
  CHECK(cost.distances[1] == doctest::Approx(-1.0));
  CHECK(cost.distances[2] == doctest::Approx(-1.0));
  CHECK(cost.total == doctest::Approx(2.0 / 49.0));

  CostSpec clamped = spec;
  clamped.clamp_detuning = true;
  auto r2 = synthetic({0.0, 5.0, 10.0, 18.0}, element_table(1.0, 1.0, 0.0));
  // detuning w32-w21 = 3 GHz exceeds Gamma: clamped variant forgives it
  auto c2 = ladder_cost(r2, clamped);
  CHECK(c2.distances[1] == doctest::Approx(0.0));
  auto c2_signed = ladder_cost(r2, spec);
  CHECK(c2_signed.distances[1] == doctest::Approx(2.0));
}

TEST_CASE("exact lambda target has zero cost") {
  CostSpec spec;
  spec.target = TargetKind::Lambda;
  spec.omega_max = 16e9;
  auto r = synthetic({0.0, 0.0, 8.0, 16.0}, element_table(0.0, 1.0, 1.0));
  auto cost = lambda_cost(r, spec);
  CHECK(cost.total == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("lambda cost punishes ground-state coupling") {
  CostSpec spec;
  spec.target = TargetKind::Lambda;
  auto weak = lambda_cost(
      synthetic({0.0, 0.0, 8.0, 16.0}, element_table(0.05, 1.0, 1.0)), spec);
  auto strong = lambda_cost(
      synthetic({0.0, 0.0, 8.0, 16.0}, element_table(0.8, 1.0, 1.0)), spec);
  CHECK(strong.total > weak.total);
  CHECK(strong.distances[3] > weak.distances[3]);
}

TEST_CASE("cost depends only on element magnitudes") {
  CostSpec spec;
  Eigen::MatrixXcd m = element_table(0.7, 0.9, 0.1);
  auto base = ladder_cost(synthetic({0.0, 5.0, 10.0, 16.0}, m), spec);
  Eigen::MatrixXcd rotated = m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rotated(i, j) *= std::exp(std::complex<double>(0.0, 0.3 * (i - j)));
  auto twisted = ladder_cost(synthetic({0.0, 5.0, 10.0, 16.0}, rotated), spec);
  CHECK(base.total == doctest::Approx(twisted.total).epsilon(1e-12));
}

TEST_CASE("element normalization makes unit targets reachable") {
  CostSpec spec;
  // Raw magnitudes far from 1 but with the right pattern: normalized mode
  // scores near-zero element distances.
  auto r = synthetic({0.0, 5.0, 10.0, 16.0}, element_table(3.7, 3.7, 0.0));
  auto cost = ladder_cost(r, spec);
  CHECK(cost.distances[4] == doctest::Approx(0.0));
  CHECK(cost.distances[5] == doctest::Approx(0.0));

  CostSpec raw = spec;
  raw.normalize_elements = false;
  auto cost_raw = ladder_cost(r, raw);
  CHECK(cost_raw.distances[4] == doctest::Approx(2.7));
}

TEST_CASE("costs are continuous in the report entries") {
  CostSpec spec;
  auto at = [&](double w21) {
    return ladder_cost(
               synthetic({0.0, 5.0, 5.0 + w21, 16.0}, element_table(1, 1, 0)),
               spec)
        .total;
  };
  const double f0 = at(5.0);
  CHECK(std::abs(at(5.0 + 1e-6) - f0) < 1e-4);
}

TEST_CASE("insufficient levels raise") {
  CostSpec spec;
  auto r = synthetic({0.0, 5.0, 10.0}, element_table(1, 1, 0));
  CHECK_THROWS_AS(ladder_cost(r, spec), InsufficientLevelsError);
  CHECK_THROWS_AS(lambda_cost(r, spec), InsufficientLevelsError);
}
