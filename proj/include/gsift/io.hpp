#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gsift/common.hpp"
#include "gsift/graph.hpp"
#include "gsift/sifting.hpp"

namespace gsift {

namespace csv {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw invalid_input("cannot parse " + what + " from '" + text + "'");
  }
}

inline long parse_id(const std::string& text) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw invalid_input("cannot parse id from '" + text + "'");
  }
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_failure("cannot open " + path + " for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_failure("cannot open " + path + " for writing");
  return out;
}

}  // namespace csv

/// Vertex coordinates read from a `id,x[,y]` CSV, in file order.
struct PointsFile {
  std::vector<long> ids;
  Matrix coords;  // n x 1 (angles / 1D positions) or n x 2
  bool two_d = false;
};

inline PointsFile read_points_csv(const std::string& path) {
  auto in = csv::open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw invalid_input(path + ": empty file");
  const auto header = csv::split(line);
  if (header.size() < 2 || header.size() > 3 || header[0] != "id" ||
      header[1] != "x" || (header.size() == 3 && header[2] != "y"))
    throw invalid_input(path + ": expected header id,x[,y]");
  const bool two_d = header.size() == 3;

  std::vector<long> ids;
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != header.size())
      throw invalid_input(path + ": row has " + std::to_string(f.size()) +
                          " fields, expected " + std::to_string(header.size()));
    ids.push_back(csv::parse_id(f[0]));
    xs.push_back(csv::parse_double(f[1], "x"));
    if (two_d) ys.push_back(csv::parse_double(f[2], "y"));
  }
  PointsFile pf;
  pf.ids = std::move(ids);
  pf.two_d = two_d;
  pf.coords.resize(static_cast<Eigen::Index>(xs.size()), two_d ? 2 : 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pf.coords(static_cast<Eigen::Index>(i), 0) = xs[i];
    if (two_d) pf.coords(static_cast<Eigen::Index>(i), 1) = ys[i];
  }
  if (!pf.coords.allFinite())
    throw invalid_input(path + ": non-finite coordinates");
  return pf;
}

inline void write_points_csv(const std::string& path, const Matrix& coords) {
  auto out = csv::open_out(path);
  const bool two_d = coords.cols() == 2;
  out << (two_d ? "id,x,y\n" : "id,x\n");
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out << i << ',' << format_double(coords(i, 0));
    if (two_d) out << ',' << format_double(coords(i, 1));
    out << '\n';
  }
  if (!out) throw io_failure("failed writing " + path);
}

struct SignalFile {
  std::vector<long> ids;
  Vector values;
};

inline SignalFile read_signal_csv(const std::string& path) {
  auto in = csv::open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw invalid_input(path + ": empty file");
  const auto header = csv::split(line);
  if (header.size() != 2 || header[0] != "id" || header[1] != "value")
    throw invalid_input(path + ": expected header id,value");
  std::vector<long> ids;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 2)
      throw invalid_input(path + ": expected 2 fields per row");
    ids.push_back(csv::parse_id(f[0]));
    values.push_back(csv::parse_double(f[1], "value"));
  }
  SignalFile sf;
  sf.ids = std::move(ids);
  sf.values.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    sf.values[static_cast<Eigen::Index>(i)] = values[i];
  for (Eigen::Index i = 0; i < sf.values.size(); ++i)
    if (!std::isfinite(sf.values[i]))
      throw invalid_input(path + ": non-finite signal value at row " +
                          std::to_string(i));
  return sf;
}

inline void write_signal_csv(const std::string& path, const Vector& values) {
  auto out = csv::open_out(path);
  out << "id,value\n";
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out << i << ',' << format_double(values[i]) << '\n';
  if (!out) throw io_failure("failed writing " + path);
}

/// Edge list `i,j,weight` with header.
inline std::vector<Edge> read_edge_list_csv(const std::string& path) {
  auto in = csv::open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw invalid_input(path + ": empty file");
  const auto header = csv::split(line);
  if (header.size() != 3 || header[0] != "i" || header[1] != "j" ||
      header[2] != "weight")
    throw invalid_input(path + ": expected header i,j,weight");
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 3) throw invalid_input(path + ": expected 3 fields per row");
    edges.push_back({static_cast<int>(csv::parse_id(f[0])),
                     static_cast<int>(csv::parse_id(f[1])),
                     csv::parse_double(f[2], "weight")});
  }
  return edges;
}

inline void write_edge_list_csv(const std::string& path,
                                const std::vector<Edge>& edges) {
  auto out = csv::open_out(path);
  out << "i,j,weight\n";
  for (const auto& e : edges)
    out << e.i << ',' << e.j << ',' << format_double(e.weight) << '\n';
  if (!out) throw io_failure("failed writing " + path);
}

/// Decomposition matrix `vertex,imf_0,...,imf_{K-1},residual`.
inline void write_imfs_csv(const std::string& path,
                           const DecompositionResult& result) {
  auto out = csv::open_out(path);
  out << "vertex";
  for (std::size_t k = 0; k < result.imfs.size(); ++k) out << ",imf_" << k;
  out << ",residual\n";
  for (Eigen::Index v = 0; v < result.residual.size(); ++v) {
    out << v;
    for (const auto& imf : result.imfs) out << ',' << format_double(imf[v]);
    out << ',' << format_double(result.residual[v]) << '\n';
  }
  if (!out) throw io_failure("failed writing " + path);
}

/// Spectrum rows `index,eigenvalue,coefficient[,kernel]`.
inline void write_spectrum_csv(const std::string& path,
                               const Vector& eigenvalues,
                               const Vector& coefficients,
                               const Vector* kernel = nullptr) {
  auto out = csv::open_out(path);
  out << (kernel ? "index,eigenvalue,coefficient,kernel\n"
                 : "index,eigenvalue,coefficient\n");
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    out << i << ',' << format_double(eigenvalues[i]) << ','
        << format_double(coefficients[i]);
    if (kernel) out << ',' << format_double((*kernel)[i]);
    out << '\n';
  }
  if (!out) throw io_failure("failed writing " + path);
}

/// Per-component spectrum rows `index,eigenvalue,kernel_value,imf_coefficient`.
inline void write_imf_spectrum_csv(const std::string& path,
                                   const Vector& eigenvalues,
                                   const Vector& kernel,
                                   const Vector& imf_coefficients) {
  auto out = csv::open_out(path);
  out << "index,eigenvalue,kernel_value,imf_coefficient\n";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    out << i << ',' << format_double(eigenvalues[i]) << ','
        << format_double(kernel[i]) << ','
        << format_double(imf_coefficients[i]) << '\n';
  if (!out) throw io_failure("failed writing " + path);
}

/// Raw dense distance matrix: n lines of n comma-separated entries.
inline void write_distance_matrix_csv(const std::string& path,
                                      const Matrix& values) {
  auto out = csv::open_out(path);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << format_double(values(i, j));
    }
    out << '\n';
  }
  if (!out) throw io_failure("failed writing " + path);
}

inline Matrix read_distance_matrix_csv(const std::string& path) {
  auto in = csv::open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& field : f) row.push_back(csv::parse_double(field, "entry"));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw invalid_input(path + ": empty matrix");
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw invalid_input(path + ": matrix is not square");
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace gsift
