#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace aeromix {

// Quadrature on the reference triangle {l0+l1+l2=1, l>=0}.  Weights sum to
// the reference area 1/2, so physical integrals read
//   sum_q  w_q * 2*|K| * f(x_q).
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

struct QuadratureRule {
  int degree = 0;
  std::vector<QuadPoint> points;
};

namespace detail {

inline QuadratureRule make_triangle_rule(int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  switch (degree) {
    case 1: {
      rule.points = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.5}};
      break;
    }
    case 2: {
      const double a = 2.0 / 3.0, b = 1.0 / 6.0, w = 1.0 / 6.0;
      rule.points = {{{a, b, b}, w}, {{b, a, b}, w}, {{b, b, a}, w}};
      break;
    }
    case 4: {
      // Two three-point orbits (1-2a, a, a).  The orbit parameters solve the
      // degree-4 moment conditions; stated to full double precision so the
      // rule is exact to rounding.
      const double a1 = 0.44594849091596488632;
      const double w1 = 0.11169079483900573285;
      const double a2 = 0.09157621350977074346;
      const double w2 = 0.054975871827660933819;
      for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
        rule.points.push_back({{1.0 - 2.0 * a, a, a}, w});
        rule.points.push_back({{a, 1.0 - 2.0 * a, a}, w});
        rule.points.push_back({{a, a, 1.0 - 2.0 * a}, w});
      }
      break;
    }
    default:
      throw std::invalid_argument("triangle_quadrature: no rule of degree " +
                                  std::to_string(degree));
  }
  return rule;
}

}  // namespace detail

inline const QuadratureRule& triangle_quadrature(int degree) {
  static const QuadratureRule deg1 = detail::make_triangle_rule(1);
  static const QuadratureRule deg2 = detail::make_triangle_rule(2);
  static const QuadratureRule deg4 = detail::make_triangle_rule(4);
  switch (degree) {
    case 1: return deg1;
    case 2: return deg2;
    case 4: return deg4;
    default:
      throw std::invalid_argument("triangle_quadrature: no rule of degree " +
                                  std::to_string(degree));
  }
}

// Two-point Gauss rule on [0,1]; weights sum to 1, exact through degree 3.
struct EdgeQuadPoint {
  double t;
  double weight;
};

inline const std::array<EdgeQuadPoint, 2>& edge_gauss2() {
  static const double offset = 0.28867513459481288225;  // 1/(2*sqrt(3))
  static const std::array<EdgeQuadPoint, 2> rule = {
      EdgeQuadPoint{0.5 - offset, 0.5}, EdgeQuadPoint{0.5 + offset, 0.5}};
  return rule;
}

}  // namespace aeromix
