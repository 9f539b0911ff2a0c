#pragma once

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gsopt::formulation {

enum class VarKind { Contact, Location, Provider, VehicleLicense, GapSuccessor, GapMax };

inline const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Contact: return "contact";
    case VarKind::Location: return "location";
    case VarKind::Provider: return "provider";
    case VarKind::VehicleLicense: return "vehicle_license";
    case VarKind::GapSuccessor: return "gap_successor";
    case VarKind::GapMax: return "gap_max";
  }
  return "?";
}

struct DecisionVar {
  int index = 0;
  VarKind kind = VarKind::Contact;
  bool binary = true;
  double lo = 0.0;
  double hi = 1.0;
  std::string tag;
  int ref = -1;   // contact / station / provider id
  int ref2 = -1;  // satellite id for license and successor variables
};

enum class Sense { Le, Eq, Ge };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::Le: return "<=";
    case Sense::Eq: return "=";
    case Sense::Ge: return ">=";
  }
  return "?";
}

using Term = std::pair<int, double>;

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::Le;
  double rhs = 0.0;
  std::string tag;
  std::string family;
};

struct ObjectiveFn {
  bool minimize = true;
  std::vector<Term> terms;
  double constant = 0.0;
};

/// Solver-independent integer program.
struct IpModel {
  std::vector<DecisionVar> variables;
  std::vector<LinearConstraint> constraints;
  ObjectiveFn objective;
  std::map<std::string, std::string> provenance;  // constraint family -> formulation role
  std::set<std::string> families;                 // families present
  bool successor_horizon_truncated = false;
  std::unordered_map<int, int> contact_var;   // contact id -> variable
  std::unordered_map<int, int> location_var;  // station id -> variable
  std::unordered_map<int, int> provider_var;  // provider id -> variable
  int gmax_var = -1;

  int add_variable(VarKind kind, std::string tag, double lo, double hi, bool binary, int ref = -1,
                   int ref2 = -1) {
    DecisionVar v;
    v.index = static_cast<int>(variables.size());
    v.kind = kind;
    v.binary = binary;
    v.lo = lo;
    v.hi = hi;
    v.tag = std::move(tag);
    v.ref = ref;
    v.ref2 = ref2;
    variables.push_back(std::move(v));
    return variables.back().index;
  }

  void add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string tag,
                      const std::string& family) {
    constraints.push_back({std::move(terms), sense, rhs, std::move(tag), family});
    families.insert(family);
  }

  [[nodiscard]] std::size_t binary_count() const {
    std::size_t n = 0;
    for (const auto& v : variables) n += v.binary ? 1 : 0;
    return n;
  }

  /// Objective value of a full assignment, evaluated in long double.
  [[nodiscard]] double evaluate_objective(const std::vector<double>& x) const {
    long double s = objective.constant;
    for (const auto& [j, a] : objective.terms) s += static_cast<long double>(a) * x.at(j);
    return static_cast<double>(s);
  }

  /// Structural checks: indices in range, no duplicate terms, finite coefficients.
  void check_well_formed() const {
    const int n = static_cast<int>(variables.size());
    auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
      std::set<int> seen;
      for (const auto& [j, a] : terms) {
        if (j < 0 || j >= n) throw std::logic_error(where + ": variable index out of range");
        if (!seen.insert(j).second) throw std::logic_error(where + ": duplicate variable");
        if (!std::isfinite(a)) throw std::logic_error(where + ": non-finite coefficient");
      }
    };
    for (const auto& c : constraints) check_terms(c.terms, c.tag);
    check_terms(objective.terms, "objective");
    for (const auto& v : variables) {
      if (!(v.lo <= v.hi) || !std::isfinite(v.lo) || !std::isfinite(v.hi))
        throw std::logic_error(v.tag + ": invalid bounds");
      if (v.binary && (v.lo < 0.0 || v.hi > 1.0)) throw std::logic_error(v.tag + ": binary bounds");
    }
  }
};

}  // namespace gsopt::formulation
