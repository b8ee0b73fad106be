#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aeromix/errors.hpp"

namespace aeromix {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

// Sides of the axis-aligned rectangle [0,Lx] x [0,Ly].
enum class BoundaryTag { bottom, right, top, left };

inline constexpr std::array<BoundaryTag, 4> kBoundaryTags = {
    BoundaryTag::bottom, BoundaryTag::right, BoundaryTag::top,
    BoundaryTag::left};

inline const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::bottom: return "bottom";
    case BoundaryTag::right: return "right";
    case BoundaryTag::top: return "top";
    case BoundaryTag::left: return "left";
  }
  return "?";
}

// Counterclockwise vertex triple.
struct Element {
  std::array<int, 3> nodes;
};

// One boundary edge (a full element edge) with the side it lies on.
struct BoundaryFacet {
  std::array<int, 2> nodes;
  BoundaryTag tag;
};

struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<Element> elements;
  std::vector<BoundaryFacet> boundary_facets;
  double lx = 0.0;
  double ly = 0.0;
  // Grid subdivisions when the mesh came out of generate_rect_mesh,
  // zero for hand-built meshes.  Used for O(1) point location.
  int nx = 0;
  int ny = 0;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
};

inline double element_area(const Mesh& mesh, int e) {
  const auto& el = mesh.elements[static_cast<std::size_t>(e)];
  const Vec2 a = mesh.nodes[static_cast<std::size_t>(el.nodes[0])];
  const Vec2 b = mesh.nodes[static_cast<std::size_t>(el.nodes[1])];
  const Vec2 c = mesh.nodes[static_cast<std::size_t>(el.nodes[2])];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

namespace detail {

// Tags a boundary edge by which side both endpoints sit on.  The tolerance
// scales with the domain so the comparison survives generated coordinates
// like 11 * (0.012 / 24).
inline BoundaryTag classify_boundary_edge(const Mesh& mesh, int n0, int n1) {
  const double tol = 1e-12 * std::max(mesh.lx, mesh.ly);
  const Vec2 a = mesh.nodes[static_cast<std::size_t>(n0)];
  const Vec2 b = mesh.nodes[static_cast<std::size_t>(n1)];
  if (a.y <= tol && b.y <= tol) return BoundaryTag::bottom;
  if (a.y >= mesh.ly - tol && b.y >= mesh.ly - tol) return BoundaryTag::top;
  if (a.x <= tol && b.x <= tol) return BoundaryTag::left;
  if (a.x >= mesh.lx - tol && b.x >= mesh.lx - tol) return BoundaryTag::right;
  throw AssemblyError("boundary edge (" + std::to_string(n0) + "," +
                      std::to_string(n1) +
                      ") does not lie on a side of the rectangle");
}

}  // namespace detail

// Rebuilds boundary_facets from the element table: an edge owned by exactly
// one element is boundary.  Facets come out sorted by node pair, which keeps
// downstream assembly order deterministic.
inline void rebuild_boundary_facets(Mesh& mesh) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const Element& el : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      int a = el.nodes[static_cast<std::size_t>(k)];
      int b = el.nodes[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  mesh.boundary_facets.clear();
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) {
      mesh.boundary_facets.push_back(
          {{edge.first, edge.second},
           detail::classify_boundary_edge(mesh, edge.first, edge.second)});
    }
  }
}

// Structured triangulation of [0,lx] x [0,ly] into nx*ny cells, each split
// along the same diagonal into two counterclockwise triangles.  Node (i,j)
// gets index j*(nx+1)+i.
inline Mesh generate_rect_mesh(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("generate_rect_mesh: domain sides must be positive");
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("generate_rect_mesh: subdivision counts must be >= 1");

  Mesh mesh;
  mesh.lx = lx;
  mesh.ly = ly;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.push_back({lx * i / nx, ly * j / ny});

  mesh.elements.reserve(static_cast<std::size_t>(2 * nx * ny));
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j);
      const int v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      mesh.elements.push_back({{v00, v10, v11}});
      mesh.elements.push_back({{v00, v11, v01}});
    }
  }
  rebuild_boundary_facets(mesh);
  return mesh;
}

inline std::vector<BoundaryFacet> facets_with_tag(const Mesh& mesh,
                                                  BoundaryTag tag) {
  std::vector<BoundaryFacet> out;
  for (const BoundaryFacet& f : mesh.boundary_facets)
    if (f.tag == tag) out.push_back(f);
  return out;
}

// Sorted, deduplicated nodes appearing in facets with the given tag.
inline std::vector<int> boundary_nodes(const Mesh& mesh, BoundaryTag tag) {
  std::vector<int> out;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    if (f.tag != tag) continue;
    out.push_back(f.nodes[0]);
    out.push_back(f.nodes[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<int> all_boundary_nodes(const Mesh& mesh) {
  std::vector<int> out;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    out.push_back(f.nodes[0]);
    out.push_back(f.nodes[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct PointLocation {
  int element = -1;
  std::array<double, 3> bary = {0.0, 0.0, 0.0};
};

namespace detail {

inline bool bary_in_element(const Mesh& mesh, int e, double x, double y,
                            std::array<double, 3>& bary, double tol) {
  const auto& el = mesh.elements[static_cast<std::size_t>(e)];
  const Vec2 a = mesh.nodes[static_cast<std::size_t>(el.nodes[0])];
  const Vec2 b = mesh.nodes[static_cast<std::size_t>(el.nodes[1])];
  const Vec2 c = mesh.nodes[static_cast<std::size_t>(el.nodes[2])];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (det == 0.0) return false;
  const double l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
  const double l0 = 1.0 - l1 - l2;
  if (l0 < -tol || l1 < -tol || l2 < -tol) return false;
  bary = {l0, l1, l2};
  return true;
}

}  // namespace detail

// Finds the element containing (x,y) together with barycentric coordinates.
// Structured meshes get a direct cell lookup; hand-built meshes fall back to
// a scan.  Points outside the mesh raise InvalidProbe.
inline PointLocation locate_point(const Mesh& mesh, double x, double y) {
  const double tol = 1e-12;
  PointLocation loc;
  if (mesh.nx > 0 && mesh.ny > 0) {
    const double fx = x / mesh.lx * mesh.nx;
    const double fy = y / mesh.ly * mesh.ny;
    const int ci = std::min(std::max(static_cast<int>(std::floor(fx)), 0), mesh.nx - 1);
    const int cj = std::min(std::max(static_cast<int>(std::floor(fy)), 0), mesh.ny - 1);
    // The point may sit on a cell border; try the 3x3 neighborhood.
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int i = ci + di, j = cj + dj;
        if (i < 0 || i >= mesh.nx || j < 0 || j >= mesh.ny) continue;
        const int base = 2 * (j * mesh.nx + i);
        for (int k = 0; k < 2; ++k) {
          if (detail::bary_in_element(mesh, base + k, x, y, loc.bary, tol)) {
            loc.element = base + k;
            return loc;
          }
        }
      }
    }
  } else {
    for (int e = 0; e < mesh.n_elements(); ++e) {
      if (detail::bary_in_element(mesh, e, x, y, loc.bary, tol)) {
        loc.element = e;
        return loc;
      }
    }
  }
  throw InvalidProbe("point (" + std::to_string(x) + ", " + std::to_string(y) +
                     ") lies outside the mesh");
}

}  // namespace aeromix
