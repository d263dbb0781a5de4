#include "mplab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mplab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string grid_function_csv(const GridFunction& u) {
  std::string out;
  const int n = u.n();
  out.reserve(static_cast<std::size_t>(n) * n * 18);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out += format_number(u.at(i, j));
      out += (j + 1 < n) ? ',' : '\n';
    }
  }
  return out;
}

std::string grid_header_json(const Grid& g) {
  nlohmann::json j;
  j["bounds"] = {{"x_min", g.bounds().x_min},
                 {"x_max", g.bounds().x_max},
                 {"y_min", g.bounds().y_min},
                 {"y_max", g.bounds().y_max}};
  j["n"] = g.n();
  j["h"] = g.h();
  return j.dump(2) + "\n";
}

GridFunction read_grid_function_csv(const std::filesystem::path& csv, const Grid& g) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv.string());
  GridFunction u(g);
  std::string line;
  for (int i = 0; i < g.n(); ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("csv too short: " + csv.string());
    std::istringstream ls(line);
    std::string cell;
    for (int j = 0; j < g.n(); ++j) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("csv row too short: " + csv.string());
      u.at(i, j) = std::stod(cell);
    }
  }
  return u;
}

std::string measure_json(const Measure& m) {
  nlohmann::json j;
  bool nonzero = false;
  for (double v : m.density().values())
    if (v != 0.0) {
      nonzero = true;
      break;
    }
  if (nonzero) {
    nlohmann::json rows = nlohmann::json::array();
    const int n = m.grid().n();
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int jj = 0; jj < n; ++jj) row.push_back(m.density().at(i, jj));
      rows.push_back(row);
    }
    j["density"] = {{"kind", "grid"}, {"values", rows}};
  } else {
    j["density"] = {{"kind", "constant"}, {"value", 0.0}};
  }
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : m.atoms())
    atoms.push_back({{"x", a.x}, {"y", a.y}, {"mass", a.mass}});
  j["atoms"] = atoms;
  return j.dump(2) + "\n";
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace mplab
