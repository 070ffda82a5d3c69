#include "mptp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mptp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_path_csv(const Path& path, const std::string& filename) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + filename + "' for writing");
  out << "t";
  for (int c = 1; c <= path.dim(); ++c) out << ",psi_" << c;
  out << "\n";
  for (int i = 0; i <= path.n_steps(); ++i) {
    out << format_double(path.time(i));
    for (int c = 0; c < path.dim(); ++c) out << "," << format_double(path.values(i, c));
    out << "\n";
  }
  if (!out) throw ConfigError("failed writing '" + filename + "'");
}

Path read_path_csv(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + filename + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("'" + filename + "': empty file");
  int k = 0;
  for (char ch : line)
    if (ch == ',') ++k;
  if (k < 1) throw ConfigError("'" + filename + "': header must be t,psi_1,...");
  std::vector<double> times;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    int col = 0;
    while (std::getline(row, cell, ',')) {
      double v = std::stod(cell);
      if (col == 0)
        times.push_back(v);
      else
        flat.push_back(v);
      ++col;
    }
    if (col != k + 1) throw ConfigError("'" + filename + "': ragged row");
  }
  if (times.size() < 2) throw ConfigError("'" + filename + "': need at least two rows");
  Path path;
  path.t0 = times.front();
  path.dt = times[1] - times[0];
  path.values.resize(static_cast<Eigen::Index>(times.size()), k);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (int c = 0; c < k; ++c)
      path.values(static_cast<Eigen::Index>(i), c) = flat[i * static_cast<std::size_t>(k) + c];
  if (!path_is_finite(path)) throw SolverError("'" + filename + "': non-finite path values");
  return path;
}

void write_text_file(const std::string& filename, const std::string& content) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + filename + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed writing '" + filename + "'");
}

std::string read_text_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + filename + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mptp
