#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "gsopt/formulation/builders.hpp"
#include "gsopt/solver/branch_and_bound.hpp"
#include "gsopt/solver/lp_export.hpp"
#include "support/exhaustive_oracle.hpp"
#include "support/random_models.hpp"
#include "support/toy.hpp"

using namespace gsopt;
using namespace gsopt::formulation;
using model::Objective;

namespace {

constexpr double kDay = 86400.0;

std::size_t count_family(const IpModel& m, const std::string& family) {
  return static_cast<std::size_t>(std::count_if(m.constraints.begin(), m.constraints.end(),
                                                [&](const LinearConstraint& c) { return c.family == family; }));
}

double coef(const std::vector<Term>& terms, int var) {
  for (const auto& [j, a] : terms)
    if (j == var) return a;
  return 0.0;
}

const LinearConstraint& row(const IpModel& m, const std::string& tag) {
  for (const auto& c : m.constraints)
    if (c.tag == tag) return c;
  throw std::out_of_range(tag);
}

}  // namespace

TEST(ScaleFactors, YearOverWeek) {
  const auto f = scale_factors(7 * kDay, 365 * kDay);
  EXPECT_NEAR(f.mission_over_sim, 365.0 / 7.0, 1e-12);
  EXPECT_NEAR(f.mission_over_sim, 52.142857, 1e-6);
  EXPECT_NEAR(f.months_in_mission, 31536000.0 / 2629800.0, 1e-12);
  EXPECT_NEAR(f.months_in_mission, 11.99178, 1e-5);
  EXPECT_NEAR(f.per_month_from_sim, 2629800.0 / 604800.0, 1e-12);
  EXPECT_NEAR(f.per_month_from_sim, 4.348214, 1e-6);
}

TEST(MinCost, ZeroDownlinkFloorGivesZero) {
  auto s = toy::scenario({5000}, {{0, 1000, 100, 300, 20}}, 1, kDay, 365 * kDay);
  s.config.d_s_min = 0.0;
  const auto cs = toy::contacts(s, {{0, 0, 100, 400}, {0, 0, 5000, 5600}});
  const auto m = build_model(s, cs);
  EXPECT_EQ(m.evaluate_objective(std::vector<double>(m.variables.size(), 0.0)), 0.0);
  const auto sol = solver::solve(m);
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_EQ(*sol.certificate.objective, 0.0);
  for (double v : sol.assignment) EXPECT_EQ(v, 0.0);
}

TEST(MinCost, SmallFloorMatchesSubsetEnumeration) {
  // Per-minute station: the shorter contact is cheaper, and either alone meets the floor.
  auto s = toy::scenario({5000}, {{0, 1000, 100, 300, 0, 12}}, 1, kDay, 365 * kDay);
  s.config.d_s_min = 2e11;
  s.config.t_period = kDay;
  s.config.t_step = kDay;
  const std::vector<toy::Contact> list = {{0, 0, 100, 400}, {0, 0, 5000, 5600}};
  const auto cs = toy::contacts(s, list);
  const auto m = build_model(s, cs);
  const auto f = scale_factors(s);
  // Hand oracle over the four subsets of {c0, c1}.
  double best = 1e300;
  for (int mask = 1; mask < 4; ++mask) {
    double data = 0.0, usage = 0.0;
    for (int k = 0; k < 2; ++k) {
      if (!((mask >> k) & 1)) continue;
      const double dur = list[k].end - list[k].start;
      data += 1e9 * dur;
      usage += 12.0 * dur / 60.0;
    }
    if (data < 2e11) continue;
    best = std::min(best, 5000 + 1000 + f.months_in_mission * 100 + 300 + f.mission_over_sim * usage);
  }
  const auto sol = solver::solve(m);
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_NEAR(*sol.certificate.objective, best, 1e-6 * best);
  EXPECT_EQ(sol.selected_contacts, std::vector<int>{0});
}

TEST(MinCost, MonthlyCoefficient) {
  auto s = toy::scenario({0}, {{0, 0, 250}}, 1, 7 * kDay, 365 * kDay);
  const auto cs = toy::contacts(s, {{0, 0, 0, 300}});
  const auto m = build_min_cost(s, cs);
  EXPECT_NEAR(coef(m.objective.terms, m.location_var.at(0)), 250 * 31536000.0 / 2629800.0, 1e-9);
  EXPECT_NEAR(coef(m.objective.terms, m.location_var.at(0)) / 250, 11.99178, 1e-5);
}

TEST(MaxData, ObjectiveCoefficient) {
  auto s = toy::scenario({0}, {{0}}, 1, 7 * kDay, 365 * kDay);
  s.config.objective = Objective::MaxData;
  s.config.e_max = 1e6;
  const auto cs = toy::contacts(s, {{0, 0, 0, 600, 1.2e9}});
  const auto m = build_max_data(s, cs);
  EXPECT_FALSE(m.objective.minimize);
  EXPECT_NEAR(coef(m.objective.terms, m.contact_var.at(0)), 365.0 / 7.0 * 7.2e11, 1.0);
}

TEST(MaxData, RequiresCap) {
  auto s = toy::scenario({0}, {{0}}, 1, kDay, kDay);
  s.config.objective = Objective::MaxData;
  EXPECT_THROW(build_max_data(s, {}), model::ConfigError);
}

TEST(MaxData, ZeroCapSelectsNothing) {
  auto s = toy::scenario({0}, {{0, 0, 100, 0, 10}}, 1, kDay, kDay);
  s.config.objective = Objective::MaxData;
  s.config.e_max = 0.0;
  const auto cs = toy::contacts(s, {{0, 0, 0, 600}, {0, 0, 1000, 1500}});
  const auto sol = solver::solve(build_model(s, cs));
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_EQ(*sol.certificate.objective, 0.0);
  EXPECT_TRUE(sol.selected_locations.empty());
}

TEST(MaxData, CapAdmitsOneStation) {
  // Two stations whose contacts overlap; the cap pays one station's monthly fee.
  auto s = toy::scenario({0}, {{0, 0, 1000}, {0, 0, 1200}}, 1, kDay, kDay);
  s.config.objective = Objective::MaxData;
  s.config.e_max = 1300.0;
  const std::vector<toy::Contact> list = {{0, 0, 0, 500}, {0, 1, 100, 700}, {0, 0, 2000, 2300}, {0, 1, 2100, 2200}};
  const auto cs = toy::contacts(s, list);
  double at0 = 0, at1 = 0;
  for (const auto& c : list) (c.station == 0 ? at0 : at1) += 1e9 * (c.end - c.start);
  const auto sol = solver::solve(build_model(s, cs));
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_NEAR(*sol.certificate.objective, std::max(at0, at1), 1e-6 * at0);
  EXPECT_EQ(sol.selected_locations, std::vector<int>{at0 > at1 ? 0 : 1});
}

TEST(MinMaxGap, ThreeContactToy) {
  auto s = toy::scenario({0}, {{0}}, 1, 1000.0, 1000.0);
  s.config.objective = Objective::MinMaxGap;
  s.config.e_max = 1e9;
  s.config.d_s_min = 3e11;  // all three contacts needed
  s.config.t_period = 1000.0;
  s.config.t_step = 1000.0;
  const auto cs = toy::contacts(s, {{0, 0, 0, 100}, {0, 0, 200, 300}, {0, 0, 500, 600}});
  const auto m = build_model(s, cs);
  const auto sol = solver::solve(m);
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_NEAR(*sol.certificate.objective, 200.0, 1e-9);
  const auto ex = oracle::exhaustive(m);
  ASSERT_TRUE(ex);
  EXPECT_NEAR(ex->objective, 200.0, 1e-9);
}

TEST(MinMaxGap, SingleContactHasNoSuccessors) {
  auto s = toy::scenario({0}, {{0}}, 1, 1000.0, 1000.0);
  s.config.objective = Objective::MinMaxGap;
  s.config.e_max = 1e9;
  s.config.d_s_min = 0.0;
  s.config.t_period = 1000.0;
  s.config.t_step = 1000.0;
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 0, 100}}));
  EXPECT_EQ(std::count_if(m.variables.begin(), m.variables.end(),
                          [](const DecisionVar& v) { return v.kind == VarKind::GapSuccessor; }),
            0);
  const auto sol = solver::solve(m);
  EXPECT_EQ(*sol.certificate.objective, 0.0);
}

TEST(MinMaxGap, OverlapsGiveNegativeGapRows) {
  auto s = toy::scenario({0}, {{0}, {0}}, 1, 1000.0, 1000.0);
  s.config.objective = Objective::MinMaxGap;
  s.config.e_max = 1e9;
  s.config.d_s_min = 0.0;
  s.config.t_period = 1000.0;
  s.config.t_step = 1000.0;
  s.config.satellite_exclusion = false;
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 0, 300}, {0, 1, 100, 400}}));
  const auto& g = row(m, "gap_S0_0_1");
  bool negative = false;
  for (const auto& [j, a] : g.terms)
    if (j != m.gmax_var && a < 0) negative = true;
  EXPECT_TRUE(negative);
  const auto sol = solver::solve(m);
  EXPECT_EQ(*sol.certificate.objective, 0.0);
}

TEST(MinMaxGap, RejectsGapLimit) {
  auto s = toy::scenario({0}, {{0}}, 1, 1000.0, 1000.0);
  s.config.objective = Objective::MinMaxGap;
  s.config.e_max = 1.0;
  s.config.d_s_min = 0.0;
  s.config.t_period = 1000.0;
  s.config.g_max_limit = 100.0;
  EXPECT_THROW(build_model(s, {}), model::ConfigError);
}

TEST(MinMaxGap, HorizonTruncationFlag) {
  auto s = toy::scenario({0}, {{0}}, 1, 5000.0, 5000.0);
  s.config.objective = Objective::MinMaxGap;
  s.config.e_max = 1e9;
  s.config.d_s_min = 0.0;
  s.config.t_period = 5000.0;
  s.config.successor_horizon = 2;
  std::vector<toy::Contact> list;
  for (int k = 0; k < 5; ++k) list.push_back({0, 0, 1000.0 * k, 1000.0 * k + 100});
  EXPECT_TRUE(build_model(s, toy::contacts(s, list)).successor_horizon_truncated);
  s.config.successor_horizon = 4;
  EXPECT_FALSE(build_model(s, toy::contacts(s, list)).successor_horizon_truncated);
}

TEST(MinMaxGap, BoundaryEventsCountEdges) {
  auto s = toy::scenario({0}, {{0}}, 1, 1000.0, 1000.0);
  s.config.objective = Objective::MinMaxGap;
  s.config.e_max = 1e9;
  s.config.d_s_min = 0.0;
  s.config.t_period = 1000.0;
  s.config.count_boundary_gaps = true;
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 300, 400}, {0, 0, 500, 600}}));
  const auto sol = solver::solve(m);
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  // Both contacts: edges 300 s and 400 s, middle 100 s. Either one alone leaves a longer edge.
  EXPECT_NEAR(*sol.certificate.objective, 400.0, 1e-9);
  EXPECT_NEAR(oracle::exhaustive(m)->objective, 400.0, 1e-9);
}

TEST(SlidingWindows, WeekCount) {
  EXPECT_EQ(window_starts(0.0, 7 * kDay, kDay, 3600.0).size(), 145u);
  auto s = toy::scenario({0}, {{0}}, 2, 7 * kDay, 365 * kDay);
  s.config.d_s_min = 1.0;
  s.config.n_min = 1;
  s.config.d_min = 1.0;
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 0, 300}}));
  EXPECT_EQ(count_family(m, "satellite_downlink"), 2u * 145u);
  EXPECT_EQ(count_family(m, "contacts_per_period"), 2u * 145u);
  EXPECT_EQ(count_family(m, "constellation_downlink"), 145u);
}

TEST(SlidingWindows, ContactCountsFullyInEveryIntersectedWindow) {
  auto s = toy::scenario({0}, {{0}}, 1, 4 * 3600.0, 4 * 3600.0);
  s.config.d_s_min = 1.0;
  s.config.t_period = 3600.0;
  s.config.t_step = 3600.0;
  // Straddles the boundary between the first two periods.
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 3500, 3700, 1e9}}));
  EXPECT_DOUBLE_EQ(coef(row(m, "sat_dl_S0_0").terms, 0), 200e9);
  EXPECT_DOUBLE_EQ(coef(row(m, "sat_dl_S0_1").terms, 0), 200e9);
  EXPECT_TRUE(row(m, "sat_dl_S0_2").terms.empty());
}

TEST(Exclusion, OverlapTouchingDisjoint) {
  auto s = toy::scenario({0}, {{0}}, 2, kDay, kDay);
  auto build = [&](double a0, double a1, double b0, double b1) {
    return build_model(s, toy::contacts(s, {{0, 0, a0, a1}, {1, 0, b0, b1}}));
  };
  EXPECT_EQ(count_family(build(0, 100, 50, 150), "station_exclusion"), 1u);
  EXPECT_EQ(count_family(build(0, 100, 100, 200), "station_exclusion"), 1u);
  EXPECT_EQ(count_family(build(0, 100, 200, 300), "station_exclusion"), 0u);
}

TEST(Exclusion, SweepMatchesAllPairs) {
  std::mt19937_64 rng(3);
  auto s = toy::scenario({0}, {{0}, {0}, {0}}, 2, kDay, kDay);
  std::vector<toy::Contact> list;
  for (int k = 0; k < 60; ++k) {
    const double a = std::uniform_real_distribution<double>(0, 80000)(rng);
    list.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 3), a,
                    a + std::uniform_real_distribution<double>(100, 3000)(rng)});
  }
  const auto cs = toy::contacts(s, list);
  const auto m = build_model(s, cs);
  std::size_t st_pairs = 0, sat_pairs = 0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      const bool overlap = cs[i].start <= cs[j].end && cs[j].start <= cs[i].end;
      if (!overlap) continue;
      st_pairs += cs[i].station_id == cs[j].station_id;
      sat_pairs += cs[i].satellite_id == cs[j].satellite_id;
    }
  EXPECT_EQ(count_family(m, "station_exclusion"), st_pairs);
  EXPECT_EQ(count_family(m, "satellite_exclusion"), sat_pairs);
}

TEST(Linking, BigMCoefficientsAndLicensePairs) {
  auto s = toy::scenario({0, 0}, {{0}, {0}, {1}}, 2, kDay, kDay);
  const auto cs = toy::contacts(s, {{0, 0, 0, 100}, {0, 0, 1000, 1100}, {1, 0, 2000, 2100}, {1, 2, 5000, 5100}});
  const auto m = build_model(s, cs);
  const auto& l0 = row(m, "loc_link_P0_L0");
  EXPECT_EQ(coef(l0.terms, m.location_var.at(0)), -3.0);
  EXPECT_EQ(count_family(m, "location_link"), 2u);  // station L1 has no contacts
  EXPECT_EQ(coef(row(m, "prov_link_P0").terms, m.provider_var.at(0)), -2.0);
  EXPECT_EQ(count_family(m, "license_link"), 3u);
  const auto nv = std::count_if(m.variables.begin(), m.variables.end(),
                                [](const DecisionVar& v) { return v.kind == VarKind::VehicleLicense; });
  EXPECT_EQ(nv, 3);
}

TEST(Linking, SelectedContactForcesChain) {
  auto s = toy::scenario({700}, {{0, 50, 10, 20, 1}}, 1, kDay, 30 * kDay);
  s.config.d_s_min = 1e11;
  s.config.t_period = kDay;
  s.config.t_step = kDay;
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 0, 300}}));
  const auto sol = solver::solve(m);
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  for (const auto& v : m.variables) EXPECT_EQ(sol.assignment[v.index], 1.0) << v.tag;
}

TEST(Optional, ProviderCapAndFixings) {
  auto s = toy::scenario({100, 100}, {{0, 10}, {1, 10}}, 1, kDay, kDay);
  s.config.objective = Objective::MaxData;
  s.config.e_max = 1e9;
  s.config.p_max = 1;
  const auto cs = toy::contacts(s, {{0, 0, 0, 300}, {0, 1, 1000, 1600}});
  const auto sol = solver::solve(build_model(s, cs));
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_EQ(sol.selected_providers.size(), 1u);
  EXPECT_EQ(sol.selected_contacts, std::vector<int>{1});
}

TEST(Optional, RequiredLocationWithoutContacts) {
  auto s = toy::scenario({100}, {{0, 10}, {0, 20, 5}}, 1, kDay, 365 * kDay);
  s.config.d_s_min = 0.0;
  s.config.required_locations = {"P0/L1"};
  const auto sol = solver::solve(build_model(s, toy::contacts(s, {{0, 0, 0, 300}})));
  ASSERT_EQ(sol.certificate.status, solver::Status::Optimal);
  EXPECT_EQ(sol.selected_locations, std::vector<int>{1});
  EXPECT_TRUE(sol.selected_contacts.empty());
  EXPECT_NEAR(*sol.certificate.objective, 100 + 20 + 5 * 31536000.0 / 2629800.0, 1e-9);
  s.config.required_locations = {"Nowhere"};
  EXPECT_THROW(build_model(s, {}), model::ConfigError);
}

TEST(Optional, LocationCountBounds) {
  auto s = toy::scenario({0}, {{0}, {0}, {0}}, 1, kDay, kDay);
  s.config.m_min = 2;
  s.config.m_max = 2;
  const auto m = build_model(s, {});
  EXPECT_EQ(count_family(m, "location_count_min"), 1u);
  EXPECT_EQ(count_family(m, "location_count_max"), 1u);
  const auto sol = solver::solve(m);
  EXPECT_EQ(sol.selected_locations.size(), 2u);
}

TEST(TMin, ShortContactsFixedToZero) {
  auto s = toy::scenario({0}, {{0}}, 1, kDay, kDay);
  s.config.t_min = 180.0;
  const auto m = build_model(s, toy::contacts(s, {{0, 0, 0, 100}, {0, 0, 1000, 1300}}));
  EXPECT_EQ(m.variables[m.contact_var.at(0)].hi, 0.0);
  EXPECT_EQ(m.variables[m.contact_var.at(1)].hi, 1.0);
}

TEST(Properties, DeterministicAndEveryBinaryUsed) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = randmodel::draw(rng, 40);
    const auto again = build_model(inst.scenario, inst.contacts);
    EXPECT_EQ(solver::to_lp_string(inst.model), solver::to_lp_string(again));
    std::set<int> used;
    for (const auto& c : inst.model.constraints)
      for (const auto& [j, a] : c.terms) used.insert(j);
    for (const auto& [j, a] : inst.model.objective.terms) used.insert(j);
    for (const auto& v : inst.model.variables) {
      if (v.binary) {
        EXPECT_TRUE(used.count(v.index)) << v.tag;
      }
    }
    EXPECT_NO_THROW(inst.model.check_well_formed());
  }
}

TEST(Properties, DeselectionKeepsDownMonotoneFamilies) {
  std::mt19937_64 rng(5);
  const std::set<std::string> families = {"location_link", "provider_link", "license_link",
                                          "station_exclusion", "satellite_exclusion"};
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 20; ++trial) {
    auto inst = randmodel::draw(rng);
    const auto sol = solver::solve(inst.model);
    if (!sol.has_incumbent()) continue;
    auto x = sol.assignment;
    for (const auto& [id, var] : inst.model.contact_var) {
      if (x[var] < 0.5 || rng() % 2) continue;
      x[var] = 0.0;
    }
    for (const auto& v : solver::audit(inst.model, x))
      EXPECT_FALSE(families.count(v.family)) << v.tag;
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}
