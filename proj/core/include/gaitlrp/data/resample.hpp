#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gaitlrp::data {

// Linear interpolation of `curve` onto `target` equidistant points spanning the
// same support. Endpoints are preserved exactly; resampling to the curve's own
// length returns it unchanged. Throws DegenerateCurve when either length < 2.
std::vector<double> resample_curve(std::span<const double> curve, std::size_t target);

}  // namespace gaitlrp::data
