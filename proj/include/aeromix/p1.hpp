#pragma once

#include <array>
#include <cmath>
#include <string>

#include "aeromix/errors.hpp"
#include "aeromix/mesh.hpp"

namespace aeromix {

// Geometry of one linear triangle: vertex coordinates, area, and the
// (constant) gradients of its three nodal shape functions.
struct ElementGeometry {
  std::array<Vec2, 3> x;
  double area = 0.0;
  std::array<Vec2, 3> shape_grad;
};

inline ElementGeometry element_geometry(const Mesh& mesh, int e) {
  const auto& el = mesh.elements[static_cast<std::size_t>(e)];
  ElementGeometry g;
  for (int k = 0; k < 3; ++k)
    g.x[static_cast<std::size_t>(k)] =
        mesh.nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(k)])];
  const Vec2 a = g.x[0], b = g.x[1], c = g.x[2];
  const double det2 = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (!(det2 > 0.0))
    throw SingularElement("element " + std::to_string(e) +
                          " has non-positive area " + std::to_string(det2 / 2));
  g.area = 0.5 * det2;
  // grad(lambda_k) is the inward normal of the opposite edge over 2A.
  g.shape_grad[0] = {(b.y - c.y) / det2, (c.x - b.x) / det2};
  g.shape_grad[1] = {(c.y - a.y) / det2, (a.x - c.x) / det2};
  g.shape_grad[2] = {(a.y - b.y) / det2, (b.x - a.x) / det2};
  return g;
}

struct P1Basis {
  std::array<double, 3> value;
  std::array<Vec2, 3> grad;
};

// Shape functions at a barycentric point.  The point must lie in the closed
// reference triangle (small tolerance for roundoff).
inline P1Basis p1_basis(const ElementGeometry& g,
                        const std::array<double, 3>& bary) {
  const double tol = 1e-12;
  const double sum = bary[0] + bary[1] + bary[2];
  if (bary[0] < -tol || bary[1] < -tol || bary[2] < -tol ||
      std::abs(sum - 1.0) > 1e-10)
    throw std::invalid_argument(
        "p1_basis: barycentric point outside the reference triangle");
  return {bary, g.shape_grad};
}

inline Vec2 bary_to_xy(const ElementGeometry& g,
                       const std::array<double, 3>& bary) {
  return bary[0] * g.x[0] + bary[1] * g.x[1] + bary[2] * g.x[2];
}

}  // namespace aeromix
