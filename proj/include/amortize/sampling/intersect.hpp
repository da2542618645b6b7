#pragma once

#include "amortize/core/types.hpp"

namespace amortize::sampling {

inline constexpr double kCollinearTolerance = 1e-12;

/// True when segments [a, b] and [c, d] cross or touch.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// True iff two non-adjacent segments of the open polyline cross or touch.
/// Segments that share an endpoint are never compared.
bool self_intersects(const Points& path);
inline bool self_intersects(const Path2D& path) { return self_intersects(path.points()); }

}  // namespace amortize::sampling
