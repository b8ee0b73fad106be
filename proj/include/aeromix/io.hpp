#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aeromix/errors.hpp"
#include "aeromix/mesh.hpp"

namespace aeromix {

namespace io_detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Buffered writer that only touches the filesystem explicitly, so output
// bytes are a pure function of the data written.
class TextFile {
 public:
  explicit TextFile(const std::string& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
  }
  ~TextFile() {
    if (file_) std::fclose(file_);
  }
  TextFile(const TextFile&) = delete;
  TextFile& operator=(const TextFile&) = delete;

  void write(const std::string& s) {
    if (std::fwrite(s.data(), 1, s.size(), file_) != s.size())
      throw IoError("short write to '" + path_ + "'");
  }
  void close() {
    if (file_ && std::fclose(file_) != 0) {
      file_ = nullptr;
      throw IoError("failed to flush '" + path_ + "'");
    }
    file_ = nullptr;
  }

 private:
  std::string path_;
  std::FILE* file_ = nullptr;
};

}  // namespace io_detail

// Field bundle for one VTK snapshot.  Point vectors are interleaved (x,y)
// per node; cell fields carry one entry per element.  std::map keys give a
// deterministic field order in the file.
struct VtkData {
  std::map<std::string, Eigen::VectorXd> point_scalars;
  std::map<std::string, Eigen::VectorXd> point_vectors;
  std::map<std::string, std::vector<double>> cell_scalars;
  std::map<std::string, std::vector<Eigen::Vector2d>> cell_vectors;
};

// Legacy ASCII VTK (version 2.0) unstructured grid with triangle cells.
inline void write_vtk(const Mesh& mesh, const VtkData& data,
                      const std::string& path) {
  using io_detail::fmt;
  const int nn = mesh.n_nodes();
  const int ne = mesh.n_elements();
  for (const auto& [name, field] : data.point_scalars)
    if (field.size() != nn)
      throw std::invalid_argument("write_vtk: point scalar '" + name +
                                  "' has wrong size");
  for (const auto& [name, field] : data.point_vectors)
    if (field.size() != 2 * nn)
      throw std::invalid_argument("write_vtk: point vector '" + name +
                                  "' has wrong size");
  for (const auto& [name, field] : data.cell_scalars)
    if (static_cast<int>(field.size()) != ne)
      throw std::invalid_argument("write_vtk: cell scalar '" + name +
                                  "' has wrong size");
  for (const auto& [name, field] : data.cell_vectors)
    if (static_cast<int>(field.size()) != ne)
      throw std::invalid_argument("write_vtk: cell vector '" + name +
                                  "' has wrong size");

  io_detail::TextFile f(path);
  f.write("# vtk DataFile Version 2.0\n");
  f.write("aeromix snapshot\n");
  f.write("ASCII\n");
  f.write("DATASET UNSTRUCTURED_GRID\n");
  f.write("POINTS " + std::to_string(nn) + " double\n");
  for (const Vec2& p : mesh.nodes)
    f.write(fmt(p.x) + " " + fmt(p.y) + " 0\n");

  f.write("CELLS " + std::to_string(ne) + " " + std::to_string(4 * ne) + "\n");
  for (const Element& el : mesh.elements)
    f.write("3 " + std::to_string(el.nodes[0]) + " " +
            std::to_string(el.nodes[1]) + " " + std::to_string(el.nodes[2]) +
            "\n");
  f.write("CELL_TYPES " + std::to_string(ne) + "\n");
  for (int e = 0; e < ne; ++e) f.write("5\n");

  if (!data.point_scalars.empty() || !data.point_vectors.empty()) {
    f.write("POINT_DATA " + std::to_string(nn) + "\n");
    for (const auto& [name, field] : data.point_scalars) {
      f.write("SCALARS " + name + " double 1\n");
      f.write("LOOKUP_TABLE default\n");
      for (int i = 0; i < nn; ++i) f.write(fmt(field[i]) + "\n");
    }
    for (const auto& [name, field] : data.point_vectors) {
      f.write("VECTORS " + name + " double\n");
      for (int i = 0; i < nn; ++i)
        f.write(fmt(field[2 * i]) + " " + fmt(field[2 * i + 1]) + " 0\n");
    }
  }
  if (!data.cell_scalars.empty() || !data.cell_vectors.empty()) {
    f.write("CELL_DATA " + std::to_string(ne) + "\n");
    for (const auto& [name, field] : data.cell_scalars) {
      f.write("SCALARS " + name + " double 1\n");
      f.write("LOOKUP_TABLE default\n");
      for (double v : field) f.write(fmt(v) + "\n");
    }
    for (const auto& [name, field] : data.cell_vectors) {
      f.write("VECTORS " + name + " double\n");
      for (const Eigen::Vector2d& v : field)
        f.write(fmt(v.x()) + " " + fmt(v.y()) + " 0\n");
    }
  }
  f.close();
}

// Column-oriented numeric table.  Values are printed with 17 significant
// digits, so reading them back reproduces the exact doubles.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(const std::vector<double>& row) {
    if (row.size() != header.size())
      throw std::invalid_argument("CsvTable: row width does not match header");
    rows.push_back(row);
  }
};

inline void write_csv_timeseries(const CsvTable& table,
                                 const std::string& path) {
  using io_detail::fmt;
  io_detail::TextFile f(path);
  std::string line;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) line += ",";
    line += table.header[i];
  }
  f.write(line + "\n");
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ",";
      line += fmt(row[i]);
    }
    f.write(line + "\n");
  }
  f.close();
}

// Fixed sample points with their element/barycentric locations resolved once
// up front.  Construction fails (InvalidProbe) for points outside the mesh.
class ProbeSet {
 public:
  ProbeSet(const Mesh& mesh, const std::vector<Vec2>& points) : mesh_(&mesh) {
    locations_.reserve(points.size());
    for (const Vec2& p : points) {
      locations_.push_back(locate_point(mesh, p.x, p.y));
      points_.push_back(p);
    }
  }

  std::size_t size() const { return locations_.size(); }
  const Vec2& point(std::size_t i) const { return points_.at(i); }

  double sample(const Eigen::VectorXd& nodal, std::size_t i) const {
    const PointLocation& loc = locations_.at(i);
    const auto& el = mesh_->elements[static_cast<std::size_t>(loc.element)];
    double v = 0.0;
    for (int k = 0; k < 3; ++k)
      v += loc.bary[static_cast<std::size_t>(k)] *
           nodal[el.nodes[static_cast<std::size_t>(k)]];
    return v;
  }

  Eigen::Vector2d sample_vector(const Eigen::VectorXd& interleaved,
                                std::size_t i) const {
    const PointLocation& loc = locations_.at(i);
    const auto& el = mesh_->elements[static_cast<std::size_t>(loc.element)];
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) {
      const int n = el.nodes[static_cast<std::size_t>(k)];
      v.x() += loc.bary[static_cast<std::size_t>(k)] * interleaved[2 * n];
      v.y() += loc.bary[static_cast<std::size_t>(k)] * interleaved[2 * n + 1];
    }
    return v;
  }

 private:
  const Mesh* mesh_;
  std::vector<Vec2> points_;
  std::vector<PointLocation> locations_;
};

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

}  // namespace aeromix
