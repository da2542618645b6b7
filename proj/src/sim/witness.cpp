#include "amortize/sim/witness.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace amortize::sim {

WitnessPair toothed_witness(int forward_steps, double spacing, double lag, int period, int depth) {
  if (forward_steps < 1 || period < 1 || depth < 1 || !(spacing > 0) || !(lag > 0)) {
    throw std::invalid_argument("toothed_witness: bad parameters");
  }
  // Tooth direction: 60 degrees up from straight back. Point k of the tooth
  // sits at distance^2 = (lag - k s/2)^2 + 3 (k s/2)^2 from the fiber end,
  // which stays below lag^2 while k s < lag.
  if (depth * spacing >= lag) throw std::invalid_argument("toothed_witness: tooth leaves the lag disk");
  const Vec2 back(-0.5, 0.5 * std::sqrt(3.0));

  std::vector<Vec2> straight;
  std::vector<Vec2> toothed;
  const int lead_in = static_cast<int>(std::ceil(lag / spacing)) + 1;  // past the start transient
  for (int i = 0; i <= forward_steps; ++i) {
    const Vec2 p(i * spacing, 0.0);
    straight.push_back(p);
    toothed.push_back(p);
    if (i >= lead_in && i < forward_steps && (i - lead_in) % period == 0) {
      for (int k = 1; k <= depth; ++k) toothed.push_back(p + k * spacing * back);
      for (int k = depth - 1; k >= 1; --k) toothed.push_back(p + k * spacing * back);
      toothed.push_back(p);
    }
  }
  auto pack = [](const std::vector<Vec2>& v) {
    Points m(static_cast<Eigen::Index>(v.size()), 2);
    for (std::size_t i = 0; i < v.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
    return m;
  };
  return {pack(straight), pack(toothed)};
}

}  // namespace amortize::sim
