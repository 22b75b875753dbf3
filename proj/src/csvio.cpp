#include "fraclab/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fraclab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

nlohmann::json exterior_to_json(const ExteriorExtension& e) {
  using Tag = ExteriorExtension::Tag;
  nlohmann::json j;
  switch (e.tag) {
    case Tag::zero:
      j["tag"] = "zero";
      break;
    case Tag::constant:
      j["tag"] = "constant";
      j["c"] = e.a;
      break;
    case Tag::affine:
      j["tag"] = "affine";
      j["a"] = e.a;
      j["b"] = e.b;
      break;
    case Tag::power:
      j["tag"] = "power";
      j["s"] = e.a;
      j["beta"] = e.b;
      break;
    case Tag::callable:
      throw std::invalid_argument("callable exterior does not serialize");
  }
  return j;
}

ExteriorExtension exterior_from_json(const nlohmann::json& j) {
  std::string tag = j.at("tag").get<std::string>();
  if (tag == "zero") return ExteriorExtension::zero();
  if (tag == "constant") return ExteriorExtension::constant(j.at("c").get<double>());
  if (tag == "affine")
    return ExteriorExtension::affine(j.at("a").get<double>(), j.at("b").get<double>());
  if (tag == "power")
    return ExteriorExtension::power(j.at("s").get<double>(), j.at("beta").get<double>());
  throw std::invalid_argument("unknown exterior tag '" + tag + "'");
}

}  // namespace

std::string grid_function_to_csv(const GridFunction& u, const std::string& config_comment) {
  if (!u.exterior.serializable())
    throw std::invalid_argument("grid_function_to_csv: callable exterior does not serialize");
  std::ostringstream out;
  out << "# config: " << config_comment << "\n";
  nlohmann::json sidecar;
  sidecar["R"] = u.grid.R;
  sidecar["h"] = u.grid.h;
  sidecar["exterior"] = exterior_to_json(u.exterior);
  out << "# grid: " << sidecar.dump() << "\n";
  out << "x,value\n";
  for (int i = 0; i < u.grid.size(); ++i) {
    out << format_double(u.grid.node(i)) << "," << format_double(u.at_node(i)) << "\n";
  }
  return out.str();
}

GridFunction grid_function_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string sidecar;
  std::vector<double> xs, vs;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("# grid: ", 0) == 0) {
      sidecar = line.substr(8);
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "x,value") throw std::invalid_argument("grid csv: missing x,value header");
      header_seen = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("grid csv: malformed row");
    xs.push_back(std::strtod(line.substr(0, comma).c_str(), nullptr));
    vs.push_back(std::strtod(line.substr(comma + 1).c_str(), nullptr));
  }
  if (sidecar.empty()) throw std::invalid_argument("grid csv: missing sidecar line");
  nlohmann::json j = nlohmann::json::parse(sidecar);
  Grid g = Grid::make(j.at("R").get<double>(), j.at("h").get<double>());
  if (static_cast<int>(vs.size()) != g.size())
    throw std::invalid_argument("grid csv: row count does not match the grid");
  GridFunction u;
  u.grid = g;
  u.values = std::move(vs);
  u.exterior = exterior_from_json(j.at("exterior"));
  return u;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string table_to_csv(const std::string& config_comment,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out << "# config: " << config_comment << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << (c + 1 < columns.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
  return out.str();
}

std::string report_block(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  return out.str();
}

}  // namespace fraclab
