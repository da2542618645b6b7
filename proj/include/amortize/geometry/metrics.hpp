#pragma once

#include "amortize/core/types.hpp"

namespace amortize::geometry {

/// Symmetric Chamfer distance: mean of the two directional mean nearest-point
/// distances, each normalised by its own point count.
double chamfer(const Points& g, const Points& u);

/// Sum over interior points of || (t_i - t_{i-1}) / mean(len_{i-1}, len_i) ||^2,
/// where t are unit segment directions. Throws on coincident neighbours.
double smooth_reg(const Points& path);

/// Exact gradient of `smooth_reg`, one row per point.
Points smooth_reg_grad(const Points& path);

/// Value and gradient in one pass.
double smooth_reg(const Points& path, Points* grad);

}  // namespace amortize::geometry
