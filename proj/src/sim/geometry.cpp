#include "ltlmcts/sim/geometry.hpp"

namespace ltlmcts::sim {

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 f{std::cos(heading), std::sin(heading)};
  const Vec2 l{-f.y, f.x};
  const Vec2 df = half_length * f;
  const Vec2 dl = half_width * l;
  return {center + df + dl, center + df - dl, center - df - dl, center - df + dl};
}

bool overlaps(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{Vec2{std::cos(a.heading), std::sin(a.heading)},
                                 Vec2{-std::sin(a.heading), std::cos(a.heading)},
                                 Vec2{std::cos(b.heading), std::sin(b.heading)},
                                 Vec2{-std::sin(b.heading), std::cos(b.heading)}};
  for (const Vec2& axis : axes) {
    double amin = dot(ca[0], axis), amax = amin;
    double bmin = dot(cb[0], axis), bmax = bmin;
    for (int i = 1; i < 4; ++i) {
      const double pa = dot(ca[i], axis);
      const double pb = dot(cb[i], axis);
      amin = std::min(amin, pa);
      amax = std::max(amax, pa);
      bmin = std::min(bmin, pb);
      bmax = std::max(bmax, pb);
    }
    if (amax <= bmin || bmax <= amin) return false;
  }
  return true;
}

}  // namespace ltlmcts::sim
