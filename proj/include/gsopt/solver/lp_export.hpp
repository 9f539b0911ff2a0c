#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "gsopt/formulation/model.hpp"

namespace gsopt::solver {

namespace detail {

inline std::string lp_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void lp_terms(std::string& out, const formulation::IpModel& m,
                     const std::vector<formulation::Term>& terms) {
  if (terms.empty()) {
    out += " 0 " + m.variables.front().tag;
    return;
  }
  int on_line = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& [j, a] = terms[k];
    out += (a < 0 ? " - " : (k == 0 ? " " : " + "));
    out += lp_number(std::abs(a)) + " " + m.variables[static_cast<std::size_t>(j)].tag;
    if (++on_line == 8 && k + 1 < terms.size()) {
      out += "\n   ";
      on_line = 0;
    }
  }
}

}  // namespace detail

/// CPLEX LP text for the model. LP files carry no objective constant, so it is written as a
/// comment line.
inline std::string to_lp_string(const formulation::IpModel& m) {
  using formulation::Sense;
  if (m.variables.empty()) throw std::invalid_argument("cannot export a model without variables");
  std::string out;
  out += "\\ objective constant: " + detail::lp_number(m.objective.constant) + "\n";
  out += m.objective.minimize ? "Minimize\n" : "Maximize\n";
  out += " obj:";
  detail::lp_terms(out, m, m.objective.terms);
  out += "\nSubject To\n";
  for (const auto& c : m.constraints) {
    out += " " + c.tag + ":";
    detail::lp_terms(out, m, c.terms);
    out += c.sense == Sense::Le ? " <= " : (c.sense == Sense::Ge ? " >= " : " = ");
    out += detail::lp_number(c.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& v : m.variables) {
    if (v.binary) {
      if (v.lo == v.hi) out += " " + v.tag + " = " + detail::lp_number(v.lo) + "\n";
      continue;
    }
    out += " " + detail::lp_number(v.lo) + " <= " + v.tag + " <= " + detail::lp_number(v.hi) + "\n";
  }
  std::string bin;
  int on_line = 0;
  for (const auto& v : m.variables) {
    if (!v.binary) continue;
    bin += " " + v.tag;
    if (++on_line == 10) {
      bin += "\n";
      on_line = 0;
    }
  }
  if (!bin.empty()) out += "Binary\n" + bin + (on_line ? "\n" : "");
  out += "End\n";
  return out;
}

inline void export_lp(const formulation::IpModel& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << to_lp_string(m);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace gsopt::solver
