#include "aeromix/mesh.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace aeromix {
namespace {

TEST(Mesh, SingleCellCounts) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 1, 1);
  EXPECT_EQ(mesh.n_nodes(), 4);
  EXPECT_EQ(mesh.n_elements(), 2);
  EXPECT_EQ(mesh.boundary_facets.size(), 4u);
}

TEST(Mesh, TenByTenCounts) {
  const Mesh mesh = generate_rect_mesh(2.0, 1.0, 10, 10);
  EXPECT_EQ(mesh.n_nodes(), 121);
  EXPECT_EQ(mesh.n_elements(), 200);
  EXPECT_EQ(mesh.boundary_facets.size(), 40u);
}

TEST(Mesh, AreasArePositiveAndSumToDomain) {
  const Mesh mesh = generate_rect_mesh(0.012, 0.006, 24, 12);
  double total = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double area = element_area(mesh, e);
    EXPECT_GT(area, 0.0);
    total += area;
  }
  EXPECT_NEAR(total, 0.012 * 0.006, 1e-12 * 0.012 * 0.006);
}

TEST(Mesh, NodesStayInsideTheBox) {
  const Mesh mesh = generate_rect_mesh(3.0, 2.0, 7, 5);
  for (const Vec2& p : mesh.nodes) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 3.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 2.0);
  }
}

TEST(Mesh, BoundaryTagsPartitionTheBoundary) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 6, 4);
  EXPECT_EQ(facets_with_tag(mesh, BoundaryTag::bottom).size(), 6u);
  EXPECT_EQ(facets_with_tag(mesh, BoundaryTag::top).size(), 6u);
  EXPECT_EQ(facets_with_tag(mesh, BoundaryTag::left).size(), 4u);
  EXPECT_EQ(facets_with_tag(mesh, BoundaryTag::right).size(), 4u);
  EXPECT_EQ(mesh.boundary_facets.size(), 20u);

  for (const BoundaryFacet& f : facets_with_tag(mesh, BoundaryTag::top)) {
    EXPECT_NEAR(mesh.nodes[static_cast<std::size_t>(f.nodes[0])].y, 1.0, 1e-14);
    EXPECT_NEAR(mesh.nodes[static_cast<std::size_t>(f.nodes[1])].y, 1.0, 1e-14);
  }
}

TEST(Mesh, EveryBoundaryFacetIsAnElementEdgeOwnedOnce) {
  const Mesh mesh = generate_rect_mesh(1.0, 2.0, 5, 3);
  std::map<std::pair<int, int>, int> edges;
  for (const Element& el : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      int a = el.nodes[static_cast<std::size_t>(k)];
      int b = el.nodes[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++edges[{a, b}];
    }
  }
  std::set<std::pair<int, int>> boundary;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    int a = f.nodes[0], b = f.nodes[1];
    if (a > b) std::swap(a, b);
    const std::pair<int, int> edge{a, b};
    EXPECT_TRUE(boundary.insert(edge).second) << "facet listed twice";
    ASSERT_TRUE(edges.count(edge));
    EXPECT_EQ(edges[edge], 1) << "boundary facet shared by two elements";
  }
  for (const auto& [edge, count] : edges) {
    if (count == 1) EXPECT_TRUE(boundary.count(edge)) << "missing boundary edge";
    else EXPECT_EQ(count, 2);
  }
}

TEST(Mesh, GenerationIsDeterministic) {
  const Mesh a = generate_rect_mesh(1.5, 0.5, 9, 6);
  const Mesh b = generate_rect_mesh(1.5, 0.5, 9, 6);
  ASSERT_EQ(a.n_nodes(), b.n_nodes());
  for (int i = 0; i < a.n_nodes(); ++i) {
    EXPECT_EQ(a.nodes[static_cast<std::size_t>(i)].x,
              b.nodes[static_cast<std::size_t>(i)].x);
    EXPECT_EQ(a.nodes[static_cast<std::size_t>(i)].y,
              b.nodes[static_cast<std::size_t>(i)].y);
  }
  ASSERT_EQ(a.n_elements(), b.n_elements());
  for (int e = 0; e < a.n_elements(); ++e)
    EXPECT_EQ(a.elements[static_cast<std::size_t>(e)].nodes,
              b.elements[static_cast<std::size_t>(e)].nodes);
  ASSERT_EQ(a.boundary_facets.size(), b.boundary_facets.size());
  for (std::size_t i = 0; i < a.boundary_facets.size(); ++i) {
    EXPECT_EQ(a.boundary_facets[i].nodes, b.boundary_facets[i].nodes);
    EXPECT_EQ(a.boundary_facets[i].tag, b.boundary_facets[i].tag);
  }
}

TEST(Mesh, RejectsBadArguments) {
  EXPECT_THROW(generate_rect_mesh(0.0, 1.0, 2, 2), std::invalid_argument);
  EXPECT_THROW(generate_rect_mesh(1.0, -1.0, 2, 2), std::invalid_argument);
  EXPECT_THROW(generate_rect_mesh(1.0, 1.0, 0, 2), std::invalid_argument);
  EXPECT_THROW(generate_rect_mesh(1.0, 1.0, 2, -3), std::invalid_argument);
}

TEST(Mesh, LocatePointFindsInteriorAndBoundaryPoints) {
  const Mesh mesh = generate_rect_mesh(2.0, 1.0, 8, 4);
  const PointLocation inside = locate_point(mesh, 0.33, 0.71);
  ASSERT_GE(inside.element, 0);
  const auto& el = mesh.elements[static_cast<std::size_t>(inside.element)];
  double x = 0.0, y = 0.0;
  for (int k = 0; k < 3; ++k) {
    x += inside.bary[static_cast<std::size_t>(k)] *
         mesh.nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(k)])].x;
    y += inside.bary[static_cast<std::size_t>(k)] *
         mesh.nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(k)])].y;
  }
  EXPECT_NEAR(x, 0.33, 1e-12);
  EXPECT_NEAR(y, 0.71, 1e-12);

  EXPECT_NO_THROW(locate_point(mesh, 0.0, 0.0));
  EXPECT_NO_THROW(locate_point(mesh, 2.0, 1.0));
  EXPECT_THROW(locate_point(mesh, 2.1, 0.5), InvalidProbe);
  EXPECT_THROW(locate_point(mesh, -0.01, 0.5), InvalidProbe);
}

TEST(Mesh, BoundaryNodeListsAreSortedAndComplete) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 4, 4);
  const std::vector<int> top = boundary_nodes(mesh, BoundaryTag::top);
  EXPECT_EQ(top.size(), 5u);
  for (std::size_t i = 1; i < top.size(); ++i) EXPECT_LT(top[i - 1], top[i]);
  for (int n : top)
    EXPECT_NEAR(mesh.nodes[static_cast<std::size_t>(n)].y, 1.0, 1e-14);
  EXPECT_EQ(all_boundary_nodes(mesh).size(), 16u);
}

}  // namespace
}  // namespace aeromix
