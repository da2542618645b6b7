#pragma once

#include "amortize/core/types.hpp"

#include <string>
#include <vector>

namespace amortize::cli {

/// Minimal SVG canvas in world coordinates (y up). The viewport is fitted to
/// everything drawn, plus a margin, when the document is rendered.
class SvgCanvas {
 public:
  void polyline(const Points& points, const std::string& stroke, double width = 0.02, bool dashed = false);
  void circle(const Vec2& center, double radius, const std::string& stroke, const std::string& fill = "none");
  void cross(const Vec2& at, double size, const std::string& stroke);
  void label(const Vec2& at, const std::string& text, const std::string& fill = "black");
  std::string render(double pixels_per_unit = 60.0) const;

 private:
  void extend(const Vec2& p);
  std::vector<std::string> items_;
  Vec2 lo_ = Vec2::Constant(1e300);
  Vec2 hi_ = Vec2::Constant(-1e300);
};

/// Goal, design and realisation overlaid.
std::string path_overlay_svg(const Points& goal, const Points& design, const Points& realization);

/// Arm mesh edges, obstacle circle and target cross.
std::string arm_pose_svg(const Points& vertices, const Vec2* obstacle_center, double obstacle_radius,
                         const Vec2* target);

}  // namespace amortize::cli
