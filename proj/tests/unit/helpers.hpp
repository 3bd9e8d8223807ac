#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "knaster/pl_map.hpp"

namespace kt {

using knaster::Point;
using knaster::Rational;

inline Rational q(const char* text) { return Rational::parse(text); }

inline std::vector<Point> pts(std::initializer_list<std::pair<const char*, const char*>> list) {
  std::vector<Point> out;
  for (const auto& [x, y] : list) out.push_back({q(x), q(y)});
  return out;
}

inline knaster::PLHomeo bump() { return knaster::PLHomeo(pts({{"0", "0"}, {"1/2", "3/4"}, {"1", "1"}})); }

}  // namespace kt
