#pragma once

// Reader for the CPLEX LP subset written by the exporter; used for round-trip checks.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpread {

struct Row {
  std::string name;
  std::map<std::string, double> terms;
  std::string sense;
  double rhs = 0.0;
};

struct LpFile {
  bool minimize = true;
  double constant = 0.0;
  std::map<std::string, double> objective;
  std::vector<Row> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> binaries;
};

inline std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Parses "[name:] [+|-] coef var ..." into terms; trailing "sense rhs" when present.
inline void parse_expr(const std::vector<std::string>& tk, std::size_t k, std::map<std::string, double>& terms,
                       std::string* sense, double* rhs) {
  double sign = 1.0;
  while (k < tk.size()) {
    const auto& t = tk[k];
    if (t == "+") { sign = 1.0; ++k; continue; }
    if (t == "-") { sign = -1.0; ++k; continue; }
    if (t == "<=" || t == ">=" || t == "=") {
      if (!sense) throw std::runtime_error("unexpected sense");
      *sense = t;
      *rhs = std::stod(tk.at(k + 1));
      return;
    }
    const double coef = std::stod(t);
    terms[tk.at(k + 1)] += sign * coef;
    sign = 1.0;
    k += 2;
  }
}

inline LpFile parse(const std::string& text) {
  LpFile f;
  std::istringstream in(text);
  std::string line, section;
  std::string pending;
  std::vector<std::string> logical;
  // Join continuation lines (indented by three spaces) onto the previous statement.
  while (std::getline(in, line)) {
    if (line.rfind("\\ objective constant:", 0) == 0) {
      f.constant = std::stod(line.substr(21));
      continue;
    }
    if (line.rfind("   ", 0) == 0 && !logical.empty()) {
      logical.back() += " " + line;
      continue;
    }
    logical.push_back(line);
  }
  for (const auto& l : logical) {
    auto tk = tokens(l);
    if (tk.empty()) continue;
    if (tk[0] == "Minimize" || tk[0] == "Maximize") {
      f.minimize = tk[0] == "Minimize";
      section = "obj";
      continue;
    }
    if (l == "Subject To") { section = "st"; continue; }
    if (tk[0] == "Bounds" || tk[0] == "Binary" || tk[0] == "End") { section = tk[0]; continue; }
    if (section == "obj") {
      parse_expr(tk, 1, f.objective, nullptr, nullptr);
    } else if (section == "st") {
      Row r;
      r.name = tk[0].substr(0, tk[0].size() - 1);
      parse_expr(tk, 1, r.terms, &r.sense, &r.rhs);
      f.rows.push_back(r);
    } else if (section == "Bounds") {
      if (tk.size() == 3 && tk[1] == "=") f.bounds[tk[0]] = {std::stod(tk[2]), std::stod(tk[2])};
      else if (tk.size() == 5) f.bounds[tk[2]] = {std::stod(tk[0]), std::stod(tk[4])};
      else throw std::runtime_error("bad bound line: " + l);
    } else if (section == "Binary") {
      for (const auto& t : tk) f.binaries.push_back(t);
    }
  }
  return f;
}

}  // namespace lpread
