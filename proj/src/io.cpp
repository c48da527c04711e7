#include "wspline/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace wspline {

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty table in " + path);
  for (const auto& r : rows)
    if (r.size() != rows.front().size())
      throw IoError("ragged rows in " + path);
  return rows;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  const auto rows = read_rows(path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_csv_matrix(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << std::setprecision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

DiscreteMeasure read_density_csv(const std::string& path) {
  const Eigen::MatrixXd m = read_csv_matrix(path);
  Grid2 grid(static_cast<int>(m.cols()), static_cast<int>(m.rows()));
  Eigen::VectorXd raw(grid.cells());
  for (int iy = 0; iy < grid.height; ++iy)
    for (int ix = 0; ix < grid.width; ++ix) raw[grid.index(ix, iy)] = m(iy, ix);
  return measure_from_density_grid(grid, raw);
}

DiscreteMeasure read_density_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError(path + ": not a binary PGM (P5)");
  auto next_int = [&in, &path]() {
    int v;
    // skip comments
    in >> std::ws;
    while (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      in >> std::ws;
    }
    if (!(in >> v)) throw IoError(path + ": truncated PGM header");
    return v;
  };
  const int w = next_int(), h = next_int(), maxval = next_int();
  if (maxval <= 0 || maxval > 255) throw IoError(path + ": only 8-bit PGM supported");
  in.get();  // single whitespace after maxval
  std::vector<unsigned char> buf(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw IoError(path + ": truncated PGM payload");
  Grid2 grid(w, h);
  Eigen::VectorXd raw(grid.cells());
  for (int iy = 0; iy < h; ++iy)
    for (int ix = 0; ix < w; ++ix)
      raw[grid.index(ix, iy)] = static_cast<double>(buf[static_cast<size_t>(iy) * w + ix]);
  return measure_from_density_grid(grid, raw);
}

DiscreteMeasure read_density(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm")
    return read_density_pgm(path);
  return read_density_csv(path);
}

void write_density_csv(const DiscreteMeasure& mu, const std::string& path) {
  const Grid2& g = mu.grid();
  Eigen::MatrixXd m(g.height, g.width);
  for (int iy = 0; iy < g.height; ++iy)
    for (int ix = 0; ix < g.width; ++ix) m(iy, ix) = mu(ix, iy);
  write_csv_matrix(m, path);
}

void write_density_pgm(const DiscreteMeasure& mu, const std::string& path) {
  const Grid2& g = mu.grid();
  const double wmax = mu.weights().maxCoeff();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << g.width << ' ' << g.height << "\n255\n";
  for (int iy = 0; iy < g.height; ++iy)
    for (int ix = 0; ix < g.width; ++ix) {
      const int v = static_cast<int>(255.0 * mu(ix, iy) / wmax + 0.5);
      out.put(static_cast<char>(v < 0 ? 0 : (v > 255 ? 255 : v)));
    }
}

}  // namespace wspline
