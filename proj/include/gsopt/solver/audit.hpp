#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gsopt/formulation/model.hpp"

namespace gsopt::solver {

using formulation::IpModel;
using formulation::Sense;

enum class ViolationKind { Row, Bound, Integrality };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Row: return "row";
    case ViolationKind::Bound: return "bound";
    case ViolationKind::Integrality: return "integrality";
  }
  return "?";
}

struct Violation {
  ViolationKind kind = ViolationKind::Row;
  int index = 0;  // constraint or variable index
  std::string tag;
  std::string family;
  double amount = 0.0;
};

/// Independent feasibility check of a full assignment against every row, bound and
/// integrality condition, in extended precision.
inline std::vector<Violation> audit(const IpModel& m, const std::vector<double>& x, double tol = 1e-6) {
  std::vector<Violation> out;
  if (x.size() != m.variables.size()) {
    out.push_back({ViolationKind::Bound, -1, "assignment size", "", std::abs(static_cast<double>(x.size()) -
                                                                            static_cast<double>(m.variables.size()))});
    return out;
  }
  for (const auto& v : m.variables) {
    const double xv = x[static_cast<std::size_t>(v.index)];
    const double over = std::max(v.lo - xv, xv - v.hi);
    if (!std::isfinite(xv) || over > tol)
      out.push_back({ViolationKind::Bound, v.index, v.tag, "", std::isfinite(xv) ? over : INFINITY});
    if (v.binary) {
      const double frac = std::abs(xv - std::round(xv));
      if (frac > tol) out.push_back({ViolationKind::Integrality, v.index, v.tag, "", frac});
    }
  }
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    const auto& c = m.constraints[i];
    long double lhs = 0.0L;
    for (const auto& [j, a] : c.terms) lhs += static_cast<long double>(a) * static_cast<long double>(x[static_cast<std::size_t>(j)]);
    const long double diff = lhs - static_cast<long double>(c.rhs);
    double viol = 0.0;
    switch (c.sense) {
      case Sense::Le: viol = static_cast<double>(diff); break;
      case Sense::Ge: viol = static_cast<double>(-diff); break;
      case Sense::Eq: viol = static_cast<double>(diff < 0 ? -diff : diff); break;
    }
    if (viol > tol) out.push_back({ViolationKind::Row, static_cast<int>(i), c.tag, c.family, viol});
  }
  return out;
}

}  // namespace gsopt::solver
