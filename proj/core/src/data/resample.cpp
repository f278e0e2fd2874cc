#include "gaitlrp/data/resample.hpp"

#include <algorithm>

#include "gaitlrp/error.hpp"

namespace gaitlrp::data {

std::vector<double> resample_curve(std::span<const double> curve, std::size_t target) {
  if (curve.size() < 2) throw DegenerateCurve(curve.size());
  if (target < 2) throw DegenerateCurve(target);
  if (curve.size() == target) return {curve.begin(), curve.end()};

  const std::size_t last = curve.size() - 1;
  std::vector<double> out(target);
  out.front() = curve.front();
  out.back() = curve.back();
  for (std::size_t i = 1; i + 1 < target; ++i) {
    // Position on the source grid, computed as a ratio of integers to keep it exact
    // at coinciding grid points.
    const double pos = static_cast<double>(i * last) / static_cast<double>(target - 1);
    const std::size_t lo = std::min(static_cast<std::size_t>(pos), last - 1);
    const double frac = pos - static_cast<double>(lo);
    out[i] = curve[lo] + frac * (curve[lo + 1] - curve[lo]);
  }
  return out;
}

}  // namespace gaitlrp::data
