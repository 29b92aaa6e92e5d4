#include "adlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adlab/errors.hpp"

namespace adlab::scaling {
namespace {

std::vector<ScalingSample> sorted_checked(std::span<const ScalingSample> samples, std::size_t min_count) {
  if (samples.size() < min_count) {
    throw TooFewSamples("scaling fit needs at least " + std::to_string(min_count) + " samples, got " +
                        std::to_string(samples.size()));
  }
  std::vector<ScalingSample> s(samples.begin(), samples.end());
  for (const auto& x : s) {
    if (!(x.value > 0.0) || !std::isfinite(x.value)) throw NonPositive("scaling fit needs positive values");
    if (!(x.length > 1.0) || !std::isfinite(x.length)) throw NonPositive("scaling fit needs sizes L > 1");
  }
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.length < b.length; });
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].length == s[i - 1].length) throw TooFewSamples("scaling fit needs distinct sizes");
  }
  return s;
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double residual_max = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Line line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    ss_res += r * r;
    line.residual_max = std::max(line.residual_max, std::abs(r));
  }
  line.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return line;
}

ScalingFit fit_sorted(const std::vector<ScalingSample>& s) {
  std::vector<double> x, y;
  for (const auto& p : s) {
    x.push_back(std::log(p.length));
    y.push_back(std::log(p.value));
  }
  const auto line = least_squares(x, y);
  ScalingFit fit;
  fit.d_a = line.slope;
  fit.kappa = std::exp(line.intercept);
  fit.r2 = line.r2;
  fit.residual_max = line.residual_max;
  fit.window_start = s.front().length;
  fit.local_slopes = local_slopes(s);
  return fit;
}

}  // namespace

std::vector<double> local_slopes(std::span<const ScalingSample> samples) {
  std::vector<ScalingSample> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.length < b.length; });
  std::vector<double> out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    out.push_back(std::log(s[i].value / s[i - 1].value) / std::log(s[i].length / s[i - 1].length));
  }
  return out;
}

ScalingFit fit_power_law(std::span<const ScalingSample> samples) {
  return fit_sorted(sorted_checked(samples, kMinFitSamples));
}

ScalingFit fit_power_law_windowed(std::span<const ScalingSample> samples, double stability) {
  auto s = sorted_checked(samples, kMinFitSamples);
  auto current = fit_sorted(s);
  while (s.size() > kMinFitSamples) {
    std::vector<ScalingSample> trimmed(s.begin() + 1, s.end());
    auto candidate = fit_sorted(trimmed);
    if (std::abs(candidate.d_a - current.d_a) < stability) break;
    s = std::move(trimmed);
    current = std::move(candidate);
  }
  // Report crossover over the full data set, not only the window.
  current.local_slopes = local_slopes(samples);
  return current;
}

ScalingFit detect_log_correction(std::span<const ScalingSample> samples, const LogCorrectionOptions& options) {
  const auto s = sorted_checked(samples, kMinLogSamples);
  const double decades = std::log10(s.back().length / s.front().length);
  if (decades < options.min_decades) {
    throw TooFewSamples("log-correction detection needs sizes spanning " + std::to_string(options.min_decades) +
                        " decades, got " + std::to_string(decades));
  }
  auto pure = fit_sorted(s);

  std::vector<double> x, y;
  for (const auto& p : s) {
    x.push_back(std::log(p.length));
    y.push_back(std::log(p.value) - std::log(std::log(p.length)));
  }
  const auto line = least_squares(x, y);

  if (pure.residual_max > 0.0 && line.residual_max * options.decision_factor <= pure.residual_max) {
    ScalingFit fit = pure;
    fit.d_a = line.slope;
    fit.kappa = std::exp(line.intercept);
    fit.r2 = line.r2;
    fit.residual_max = line.residual_max;
    fit.log_correction = true;
    return fit;
  }
  return pure;
}

double d_a_from_exponents(const CriticalExponents& e) {
  if (e.d < 1) throw InvalidArgument("spatial dimension must be >= 1");
  return 2.0 * e.d + 2.0 * e.zeta - 2.0 * e.delta_v;
}

}  // namespace adlab::scaling
