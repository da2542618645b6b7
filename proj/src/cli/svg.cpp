#include "amortize/cli/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace amortize::cli {

namespace {

// World y grows upward; the transform flips it when rendering.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

std::string point_list(const Points& p) {
  std::string out;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (i) out += ' ';
    out += num(p(i, 0)) + "," + num(-p(i, 1));
  }
  return out;
}

}  // namespace

void SvgCanvas::extend(const Vec2& p) {
  lo_ = lo_.cwiseMin(p);
  hi_ = hi_.cwiseMax(p);
}

void SvgCanvas::polyline(const Points& points, const std::string& stroke, double width, bool dashed) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) extend(points.row(i).transpose());
  std::string item = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
                     "\" stroke-linejoin=\"round\"";
  if (dashed) item += " stroke-dasharray=\"" + num(4 * width) + "," + num(3 * width) + "\"";
  items_.push_back(item + " points=\"" + point_list(points) + "\"/>");
}

void SvgCanvas::circle(const Vec2& center, double radius, const std::string& stroke, const std::string& fill) {
  extend(center - Vec2::Constant(radius));
  extend(center + Vec2::Constant(radius));
  items_.push_back("<circle cx=\"" + num(center.x()) + "\" cy=\"" + num(-center.y()) + "\" r=\"" + num(radius) +
                   "\" stroke=\"" + stroke + "\" stroke-width=\"0.03\" fill=\"" + fill + "\" fill-opacity=\"0.3\"/>");
}

void SvgCanvas::cross(const Vec2& at, double size, const std::string& stroke) {
  Points a(2, 2);
  a << at.x() - size, at.y() - size, at.x() + size, at.y() + size;
  Points b(2, 2);
  b << at.x() - size, at.y() + size, at.x() + size, at.y() - size;
  polyline(a, stroke, 0.04);
  polyline(b, stroke, 0.04);
}

void SvgCanvas::label(const Vec2& at, const std::string& text, const std::string& fill) {
  extend(at);
  items_.push_back("<text x=\"" + num(at.x()) + "\" y=\"" + num(-at.y()) + "\" font-size=\"0.3\" fill=\"" + fill +
                   "\">" + text + "</text>");
}

std::string SvgCanvas::render(double pixels_per_unit) const {
  Vec2 lo = lo_;
  Vec2 hi = hi_;
  if (lo.x() > hi.x()) {
    lo.setZero();
    hi.setOnes();
  }
  const double margin = 0.05 * std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
  lo.array() -= margin;
  hi.array() += margin;
  const double w = hi.x() - lo.x();
  const double h = hi.y() - lo.y();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w * pixels_per_unit) << "\" height=\""
      << num(h * pixels_per_unit) << "\" viewBox=\"" << num(lo.x()) << ' ' << num(-hi.y()) << ' ' << num(w) << ' '
      << num(h) << "\">\n";
  out << "<rect x=\"" << num(lo.x()) << "\" y=\"" << num(-hi.y()) << "\" width=\"" << num(w) << "\" height=\""
      << num(h) << "\" fill=\"white\"/>\n";
  for (const auto& item : items_) out << item << '\n';
  out << "</svg>\n";
  return out.str();
}

std::string path_overlay_svg(const Points& goal, const Points& design, const Points& realization) {
  SvgCanvas svg;
  svg.polyline(design, "#1f77b4", 0.02, true);
  svg.polyline(goal, "black", 0.03);
  svg.polyline(realization, "#d62728", 0.02);
  return svg.render();
}

std::string arm_pose_svg(const Points& vertices, const Vec2* obstacle_center, double obstacle_radius,
                         const Vec2* target) {
  SvgCanvas svg;
  if (obstacle_center) svg.circle(*obstacle_center, obstacle_radius, "#d62728", "#d62728");
  const Eigen::Index levels = vertices.rows() / 3;
  for (int col = 0; col < 3; ++col) {
    Points line(levels, 2);
    for (Eigen::Index k = 0; k < levels; ++k) line.row(k) = vertices.row(3 * k + col);
    svg.polyline(line, col == 1 ? "#7f7f7f" : "#1f77b4", col == 1 ? 0.01 : 0.03);
  }
  for (Eigen::Index k = 0; k < levels; ++k) {
    Points rung(2, 2);
    rung.row(0) = vertices.row(3 * k);
    rung.row(1) = vertices.row(3 * k + 2);
    svg.polyline(rung, "#1f77b4", 0.01);
  }
  if (target) svg.cross(*target, 0.15, "#2ca02c");
  return svg.render();
}

}  // namespace amortize::cli
