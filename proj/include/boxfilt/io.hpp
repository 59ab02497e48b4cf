#pragma once

// File formats: point CSV, diagram JSON, distance-matrix CSV, label lists,
// mapper DOT/JSON, debug complex dumps and SVG diagram plots.

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "boxfilt/box.hpp"
#include "boxfilt/mapper.hpp"
#include "boxfilt/metrics.hpp"
#include "boxfilt/persistence.hpp"

namespace boxfilt {

namespace detail {

inline bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim spaces and a trailing CR
    std::size_t b = cell.find_first_not_of(" \t\r");
    std::size_t e = cell.find_last_not_of(" \t\r");
    if (b == std::string::npos) return false;
    try {
      std::size_t used = 0;
      const double v = std::stod(cell.substr(b, e - b + 1), &used);
      if (used != e - b + 1) return false;
      out.push_back(v);
    } catch (...) {
      return false;
    }
  }
  return !out.empty();
}

}  // namespace detail

// One point per row, comma-separated; a single non-numeric header row is
// skipped. LF and CRLF both accepted.
inline point_cloud read_points_csv(std::istream& in) {
  std::vector<point> pts;
  std::string line;
  std::vector<double> row;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (!detail::parse_row(line, row)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::runtime_error("points CSV: non-numeric row");
    }
    first = false;
    pts.push_back(row);
  }
  return point_cloud(std::move(pts));
}

inline point_cloud read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_points_csv(in);
}

inline void write_points_csv(std::ostream& out, const point_cloud& pcd) {
  out << std::setprecision(17);
  for (const auto& p : pcd.points) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
    out << "\n";
  }
}

inline void write_points_csv(const std::string& path, const point_cloud& pcd) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_points_csv(out, pcd);
}

inline nlohmann::json diagram_to_json(const persistence_diagram& dgm) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : dgm.pairs) {
    nlohmann::json j{{"dim", p.dim}, {"birth", p.birth}};
    if (p.essential())
      j["death"] = "inf";
    else
      j["death"] = p.death;
    pairs.push_back(std::move(j));
  }
  return nlohmann::json{{"scale", dgm.scale}, {"pairs", std::move(pairs)}};
}

inline persistence_diagram diagram_from_json(const nlohmann::json& j) {
  persistence_diagram dgm;
  dgm.scale = j.at("scale").get<double>();
  for (const auto& p : j.at("pairs")) {
    pd_pair pair;
    pair.dim = p.at("dim").get<int>();
    pair.birth = p.at("birth").get<double>();
    const auto& d = p.at("death");
    pair.death = d.is_string() ? std::numeric_limits<double>::infinity() : d.get<double>();
    dgm.pairs.push_back(pair);
  }
  return dgm;
}

inline void write_diagram(const std::string& path, const persistence_diagram& dgm) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << diagram_to_json(dgm).dump(2) << "\n";
}

inline persistence_diagram read_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return diagram_from_json(j);
}

// Square, headerless distance matrix.
inline void write_distance_csv(std::ostream& out, const distance_matrix& dm) {
  out << std::setprecision(17);
  for (int i = 0; i < dm.size; ++i) {
    for (int j = 0; j < dm.size; ++j) out << (j ? "," : "") << dm.at(i, j);
    out << "\n";
  }
}

inline distance_matrix read_distance_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (!detail::parse_row(line, row)) throw std::runtime_error("distance CSV: non-numeric row");
    rows.push_back(row);
  }
  distance_matrix dm(static_cast<int>(rows.size()));
  for (int i = 0; i < dm.size; ++i) {
    if (static_cast<int>(rows[i].size()) != dm.size)
      throw std::runtime_error("distance CSV: matrix is not square");
    for (int j = 0; j < dm.size; ++j) dm.at(i, j) = rows[i][j];
  }
  dm.validate();
  return dm;
}

// One integer label per line.
inline std::vector<int> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<int> labels;
  int v;
  while (in >> v) labels.push_back(v);
  return labels;
}

inline void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (int v : labels) out << v << "\n";
}

inline nlohmann::json mapper_to_json(const mapper_graph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    nodes.push_back(nlohmann::json{{"id", i},
                                   {"lower", g.nodes[i].b.lo},
                                   {"upper", g.nodes[i].b.hi},
                                   {"members", g.nodes[i].members}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) edges.push_back(nlohmann::json::array({a, b}));
  return nlohmann::json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline std::string mapper_to_dot(const mapper_graph& g) {
  std::ostringstream out;
  out << "graph mapper {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out << "  " << i << " [label=\"" << g.nodes[i].members.size() << "\"];\n";
  for (const auto& [a, b] : g.edges) out << "  " << a << " -- " << b << ";\n";
  out << "}\n";
  return out.str();
}

enum class mapper_format { json, dot };

inline std::string export_mapper(const mapper_graph& g, mapper_format format) {
  return format == mapper_format::json ? mapper_to_json(g).dump(2) + "\n" : mapper_to_dot(g);
}

// Debug dump: one simplex per line, "value: v0 v1 ...".
inline void dump_complex(std::ostream& out, const filtration_complex& c) {
  out << std::setprecision(17);
  for (const auto& s : c.simplices) {
    out << s.value << ":";
    for (int v : s.verts) out << " " << v;
    out << "\n";
  }
}

// Birth/death scatter plot: fixed 600x600 view, H0 circles, H1 squares,
// infinite deaths drawn at 1.05x the largest finite value with an arrow.
inline void write_diagram_svg(std::ostream& out, const persistence_diagram& dgm) {
  double top = 0.0;
  for (const auto& p : dgm.pairs) {
    top = std::max(top, p.birth);
    if (!p.essential()) top = std::max(top, p.death);
  }
  if (top <= 0.0) top = 1.0;
  const double inf_v = 1.05 * top;
  const double span = 1.1 * top;
  const double margin = 50.0, plot = 500.0;
  const auto sx = [&](double v) { return margin + plot * v / span; };
  const auto sy = [&](double v) { return margin + plot * (1.0 - v / span); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\">\n"
      << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"4\" refY=\"4\" "
         "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"#555\"/></marker></defs>\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot << "\" height=\""
      << plot << "\" fill=\"white\" stroke=\"black\"/>\n"
      << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(span) << "\" y2=\""
      << sy(span) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(inf_v) << "\" x2=\"" << sx(span) << "\" y2=\""
      << sy(inf_v) << "\" stroke=\"#ccc\" stroke-dasharray=\"2 4\"/>\n"
      << "<text x=\"" << sx(0) + 4 << "\" y=\"" << sy(inf_v) - 4
      << "\" font-size=\"12\" fill=\"#555\">inf</text>\n";
  for (const auto& p : dgm.pairs) {
    const double death = p.essential() ? inf_v : p.death;
    const char* color = p.dim == 0 ? "#1f77b4" : (p.dim == 1 ? "#d62728" : "#2ca02c");
    if (p.dim == 0) {
      out << "<circle cx=\"" << sx(p.birth) << "\" cy=\"" << sy(death)
          << "\" r=\"4\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    } else {
      out << "<rect x=\"" << sx(p.birth) - 3.5 << "\" y=\"" << sy(death) - 3.5
          << "\" width=\"7\" height=\"7\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    }
    if (p.essential())
      out << "<line x1=\"" << sx(p.birth) << "\" y1=\"" << sy(death) + 12 << "\" x2=\""
          << sx(p.birth) << "\" y2=\"" << sy(death) + 2
          << "\" stroke=\"#555\" marker-end=\"url(#arrow)\"/>\n";
  }
  out << "<text x=\"300\" y=\"590\" text-anchor=\"middle\" font-size=\"14\">birth</text>\n"
      << "<text x=\"15\" y=\"300\" text-anchor=\"middle\" font-size=\"14\" "
         "transform=\"rotate(-90 15 300)\">death</text>\n"
      << "</svg>\n";
}

inline void write_diagram_svg(const std::string& path, const persistence_diagram& dgm) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_diagram_svg(out, dgm);
}

}  // namespace boxfilt
