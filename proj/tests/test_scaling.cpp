#include <doctest.h>

#include <cmath>

#include "adlab/ising_ff.hpp"
#include "adlab/scaling.hpp"

using namespace adlab;
using scaling::ScalingSample;

namespace {

std::vector<ScalingSample> synthetic(double kappa, double a, bool log_factor, std::vector<double> sizes) {
  std::vector<ScalingSample> s;
  for (double l : sizes) s.push_back({l, kappa * std::pow(l, a) * (log_factor ? std::log(l) : 1.0)});
  return s;
}

std::vector<double> doubling(double from, double to) {
  std::vector<double> out;
  for (double l = from; l <= to; l *= 2) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("scaling") {

TEST_CASE("fit is exact on noiseless power laws") {
  const auto fit = scaling::fit_power_law(synthetic(2.0, 1.5, false, {4, 8, 16, 32, 64}));
  CHECK(fit.d_a == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(fit.kappa == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.residual_max < 1e-13);
  for (double s : fit.local_slopes) CHECK(s == doctest::Approx(1.5).epsilon(1e-13));
  CHECK_FALSE(fit.log_correction);
}

TEST_CASE("scale invariance: a constant factor changes kappa only") {
  const auto base = synthetic(1.0, 0.8, true, {10, 20, 50, 100, 300});
  auto scaled = base;
  for (auto& s : scaled) s.value *= 7.5;
  const auto a = scaling::fit_power_law(base);
  const auto b = scaling::fit_power_law(scaled);
  CHECK(b.d_a == doctest::Approx(a.d_a).epsilon(1e-13));
  CHECK(b.kappa / a.kappa == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("Ising chi_f scaling exponents") {
  std::vector<ScalingSample> crit, gapped;
  for (double n : doubling(64, 4096)) {
    crit.push_back({n, ising::chi_f(int(n), 1.0)});
    gapped.push_back({n, ising::chi_f(int(n), 2.0)});
  }
  CHECK(std::abs(scaling::fit_power_law(crit).d_a - 2.0) < 0.01);
  CHECK(std::abs(scaling::fit_power_law(gapped).d_a - 1.0) < 0.01);
  std::vector<ScalingSample> wide;
  for (double n : doubling(8, 8192)) wide.push_back({n, ising::chi_f(int(n), 1.0)});
  CHECK_FALSE(scaling::detect_log_correction(wide).log_correction);
}

TEST_CASE("windowed fit drops the crossover region") {
  // Pure power law plus a correction that dies out at large L.
  std::vector<ScalingSample> s;
  for (double l : doubling(4, 4096)) s.push_back({l, l * l * (1.0 + 3.0 / l)});
  const auto global = scaling::fit_power_law(s);
  const auto windowed = scaling::fit_power_law_windowed(s);
  CHECK(std::abs(windowed.d_a - 2.0) < std::abs(global.d_a - 2.0));
  CHECK(windowed.window_start > 4.0);
  CHECK(windowed.local_slopes.size() == s.size() - 1);
}

TEST_CASE("log-correction detector") {
  const auto sizes = doubling(8, 8192);
  const auto with_log = scaling::detect_log_correction(synthetic(0.3, 2.0, true, sizes));
  CHECK(with_log.log_correction);
  CHECK(with_log.d_a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(with_log.kappa == doctest::Approx(0.3).epsilon(1e-12));

  const auto pure = scaling::detect_log_correction(synthetic(0.3, 2.0, false, sizes));
  CHECK_FALSE(pure.log_correction);
  CHECK(pure.d_a == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(scaling::detect_log_correction(synthetic(1.0, 2.0, true, {10, 20, 30, 40, 50, 60})), TooFewSamples);
  CHECK_THROWS_AS(scaling::detect_log_correction(synthetic(1.0, 2.0, true, {10, 100, 1000, 10000})), TooFewSamples);
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(scaling::fit_power_law(synthetic(1.0, 1.0, false, {4, 8, 16})), TooFewSamples);
  auto zero = synthetic(1.0, 1.0, false, {4, 8, 16, 32});
  zero[2].value = 0.0;
  CHECK_THROWS_AS(scaling::fit_power_law(zero), NonPositive);
  CHECK_THROWS_AS(scaling::fit_power_law(synthetic(1.0, 1.0, false, {4, 8, 8, 32})), TooFewSamples);
}

TEST_CASE("d_a from critical exponents") {
  CHECK(scaling::d_a_from_exponents({1, 1.0, 1.0}) == doctest::Approx(2.0));
  for (int d : {1, 2, 3}) CHECK(scaling::d_a_from_exponents({d, 0.7, 0.7}) == doctest::Approx(2.0 * d));
  // Inverting for a d = 2 model with d_a = 5/2 gives zeta - Delta_V = -3/4.
  CHECK(scaling::d_a_from_exponents({2, 0.25, 1.0}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(scaling::d_a_from_exponents({0, 1.0, 1.0}), InvalidArgument);
}

}  // TEST_SUITE
