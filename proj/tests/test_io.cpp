#include "aeromix/io.hpp"

#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aeromix/errors.hpp"
#include "aeromix/mesh.hpp"

namespace {

using namespace aeromix;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) {
  return ::testing::TempDir() + "aeromix_io_" + name;
}

VtkData sample_fields(const Mesh& mesh) {
  const int nn = mesh.n_nodes();
  const int ne = mesh.n_elements();
  VtkData data;
  Eigen::VectorXd p(nn), u(2 * nn);
  for (int i = 0; i < nn; ++i) {
    p[i] = 1.0 / 3.0 + i;
    u[2 * i] = mesh.nodes[i].x;
    u[2 * i + 1] = -mesh.nodes[i].y;
  }
  data.point_scalars["pressure"] = p;
  data.point_vectors["displacement"] = u;
  data.cell_scalars["chi"] = std::vector<double>(ne, 0.5);
  data.cell_vectors["flux"] =
      std::vector<Eigen::Vector2d>(ne, Eigen::Vector2d(1e-7, -2e-7));
  return data;
}

TEST(Vtk, WritesAWellFormedSnapshot) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 2, 1);
  const std::string path = tmp_path("snapshot.vtk");
  write_vtk(mesh, sample_fields(mesh), path);
  const std::string text = read_file(path);
  ASSERT_FALSE(text.empty());

  EXPECT_EQ(text.rfind("# vtk DataFile Version 2.0\n", 0), 0u);
  EXPECT_NE(text.find("ASCII\n"), std::string::npos);
  EXPECT_NE(text.find("DATASET UNSTRUCTURED_GRID\n"), std::string::npos);
  // 3x2 grid of nodes, 4 triangles, connectivity block of 4*(1+3) ints.
  EXPECT_NE(text.find("POINTS 6 double\n0 0 0\n"), std::string::npos);
  EXPECT_NE(text.find("CELLS 4 16\n3 "), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 4\n5\n5\n5\n5\n"), std::string::npos);
  EXPECT_NE(text.find("POINT_DATA 6\n"), std::string::npos);
  EXPECT_NE(text.find("SCALARS pressure double 1\nLOOKUP_TABLE default\n"),
            std::string::npos);
  EXPECT_NE(text.find("VECTORS displacement double\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_DATA 4\n"), std::string::npos);
  EXPECT_NE(text.find("SCALARS chi double 1"), std::string::npos);
  EXPECT_NE(text.find("VECTORS flux double\n"), std::string::npos);
  // 17-significant-digit values survive verbatim.
  EXPECT_NE(text.find("0.33333333333333331\n"), std::string::npos);
  EXPECT_NE(text.find("9.9999999999999995e-08 -1.9999999999999999e-07 0\n"),
            std::string::npos);
}

TEST(Vtk, RejectsWrongFieldSizes) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 2, 1);
  const std::string path = tmp_path("bad.vtk");

  VtkData short_scalar;
  short_scalar.point_scalars["p"] = Eigen::VectorXd::Zero(mesh.n_nodes() - 1);
  EXPECT_THROW(write_vtk(mesh, short_scalar, path), std::invalid_argument);

  VtkData flat_vector;
  flat_vector.point_vectors["u"] = Eigen::VectorXd::Zero(mesh.n_nodes());
  EXPECT_THROW(write_vtk(mesh, flat_vector, path), std::invalid_argument);

  VtkData long_cells;
  long_cells.cell_scalars["chi"] =
      std::vector<double>(mesh.n_elements() + 1, 0.0);
  EXPECT_THROW(write_vtk(mesh, long_cells, path), std::invalid_argument);
}

TEST(Vtk, OutputIsByteIdenticalAcrossWrites) {
  const Mesh mesh = generate_rect_mesh(0.012, 0.006, 4, 3);
  const VtkData data = sample_fields(mesh);
  const std::string a = tmp_path("repeat_a.vtk");
  const std::string b = tmp_path("repeat_b.vtk");
  write_vtk(mesh, data, a);
  write_vtk(mesh, data, b);
  const std::string ta = read_file(a);
  ASSERT_FALSE(ta.empty());
  EXPECT_EQ(ta, read_file(b));
}

TEST(Vtk, UnwritablePathThrows) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 2, 1);
  EXPECT_THROW(write_vtk(mesh, VtkData{}, "/nonexistent_dir/out.vtk"),
               IoError);
}

TEST(Csv, RoundTripsDoublesExactly) {
  CsvTable table;
  table.header = {"t", "value"};
  const std::vector<double> tricky = {
      0.0,       -0.0,          1.0 / 3.0, 0.1 + 0.2,        8.5e-9,
      -1e-13,    DBL_EPSILON,   DBL_MIN,   1e300,            -1e-300,
      123456.75, 2650.0,        3.141592653589793, 0.30000000000000004,
  };
  for (std::size_t i = 0; i < tricky.size(); ++i)
    table.add_row({0.05 * static_cast<double>(i + 1), tricky[i]});

  const std::string path = tmp_path("series.csv");
  write_csv_timeseries(table, path);
  const std::string text = read_file(path);
  ASSERT_FALSE(text.empty());

  std::istringstream in(text);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "t,value");
  for (std::size_t i = 0; i < tricky.size(); ++i) {
    ASSERT_TRUE(std::getline(in, line)) << "row " << i << " missing";
    const std::size_t comma = line.find(',');
    ASSERT_NE(comma, std::string::npos);
    const double t = std::strtod(line.substr(0, comma).c_str(), nullptr);
    const double v = std::strtod(line.substr(comma + 1).c_str(), nullptr);
    EXPECT_EQ(t, table.rows[i][0]) << "row " << i;
    EXPECT_EQ(v, tricky[i]) << "row " << i;
    if (tricky[i] == 0.0)
      EXPECT_EQ(std::signbit(v), std::signbit(tricky[i])) << "row " << i;
  }
  EXPECT_FALSE(std::getline(in, line)) << "unexpected trailing content";
}

TEST(Csv, RowWidthMustMatchHeader) {
  CsvTable table;
  table.header = {"t", "a", "b"};
  EXPECT_THROW(table.add_row({1.0, 2.0}), std::invalid_argument);
  EXPECT_NO_THROW(table.add_row({1.0, 2.0, 3.0}));
}

TEST(Csv, OutputIsByteIdenticalAcrossWrites) {
  CsvTable table;
  table.header = {"t", "p"};
  double p = 1000.0;
  for (int i = 0; i < 20; ++i) {
    table.add_row({0.05 * (i + 1), p});
    p *= 0.83;  // decaying values with full mantissas
  }
  const std::string a = tmp_path("repeat_a.csv");
  const std::string b = tmp_path("repeat_b.csv");
  write_csv_timeseries(table, a);
  write_csv_timeseries(table, b);
  const std::string ta = read_file(a);
  ASSERT_FALSE(ta.empty());
  EXPECT_EQ(ta, read_file(b));
}

TEST(Probes, SamplesAreExactForLinearFields) {
  const Mesh mesh = generate_rect_mesh(2.0, 1.5, 4, 3);
  const std::vector<Vec2> points = {{0.5, 0.5}, {1.23, 0.77}, {2.0, 1.5}};
  const ProbeSet probes(mesh, points);
  ASSERT_EQ(probes.size(), 3u);
  EXPECT_DOUBLE_EQ(probes.point(1).x, 1.23);

  const int nn = mesh.n_nodes();
  Eigen::VectorXd scalar(nn), vec(2 * nn);
  for (int i = 0; i < nn; ++i) {
    const Vec2& q = mesh.nodes[i];
    scalar[i] = 2.0 + 3.0 * q.x - q.y;
    vec[2 * i] = q.x + 2.0 * q.y;
    vec[2 * i + 1] = 5.0 - q.x;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec2& q = points[i];
    EXPECT_NEAR(probes.sample(scalar, i), 2.0 + 3.0 * q.x - q.y, 1e-12);
    const Eigen::Vector2d v = probes.sample_vector(vec, i);
    EXPECT_NEAR(v.x(), q.x + 2.0 * q.y, 1e-12);
    EXPECT_NEAR(v.y(), 5.0 - q.x, 1e-12);
  }
}

TEST(Probes, PointOutsideTheMeshIsRejected) {
  const Mesh mesh = generate_rect_mesh(2.0, 1.5, 4, 3);
  EXPECT_THROW((ProbeSet(mesh, {Vec2{3.0, 0.5}})), InvalidProbe);
  EXPECT_THROW((ProbeSet(mesh, {Vec2{1.0, -0.1}})), InvalidProbe);
}

TEST(EnsureDirectory, CreatesNestedPathsAndAcceptsExisting) {
  const std::string dir = tmp_path("nested/a/b");
  EXPECT_NO_THROW(ensure_directory(dir));
  EXPECT_NO_THROW(ensure_directory(dir));
  EXPECT_TRUE(std::filesystem::is_directory(dir));
}

TEST(EnsureDirectory, FileInTheWayIsAnError) {
  const std::string blocker = tmp_path("blocker");
  {
    io_detail::TextFile f(blocker);
    f.write("x");
    f.close();
  }
  EXPECT_THROW(ensure_directory(blocker + "/sub"), IoError);
}

}  // namespace
