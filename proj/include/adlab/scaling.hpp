// scaling.hpp - finite-size scaling of chi_F (or tau0*) against system size.

#pragma once

#include <span>
#include <vector>

namespace adlab::scaling {

struct ScalingSample {
  double length = 0.0;  // L (= N for chains)
  double value = 0.0;   // chi_F or tau0*
};

struct ScalingFit {
  double d_a = 0.0;    // fitted exponent
  double kappa = 0.0;  // fitted prefactor
  double r2 = 0.0;
  bool log_correction = false;  // value ~ kappa L^d_a ln L preferred
  double residual_max = 0.0;    // max |log residual| of the reported model
  double window_start = 0.0;    // smallest L used in the fit
  std::vector<double> local_slopes;  // d ln(value) / d ln(L) between neighbours
};

struct CriticalExponents {
  int d = 1;            // spatial dimension
  double zeta = 1.0;    // dynamic exponent
  double delta_v = 1.0; // scaling dimension of the driving term
};

inline constexpr std::size_t kMinFitSamples = 4;
inline constexpr std::size_t kMinLogSamples = 6;

/// Least squares ln(value) = d_a ln(L) + ln(kappa) over all samples.
ScalingFit fit_power_law(std::span<const ScalingSample> samples);

/// Drops the smallest sizes one at a time until removing the next one moves
/// d_a by less than `stability`, keeping at least kMinFitSamples points.
ScalingFit fit_power_law_windowed(std::span<const ScalingSample> samples, double stability = 0.005);

struct LogCorrectionOptions {
  double decision_factor = 2.0;  // log model must cut the max residual by this factor
  double min_decades = 2.0;
};

/// Compares kappa L^a against kappa L^a ln L and reports the preferred one.
ScalingFit detect_log_correction(std::span<const ScalingSample> samples, const LogCorrectionOptions& options = {});

/// 2 d + 2 zeta - 2 Delta_V.
double d_a_from_exponents(const CriticalExponents& e);

/// ln(v2/v1) / ln(L2/L1) for consecutive samples sorted by L.
std::vector<double> local_slopes(std::span<const ScalingSample> samples);

}  // namespace adlab::scaling
