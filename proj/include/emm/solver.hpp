#pragma once

#include "emm/catalog.hpp"
#include "emm/positivity.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <string>
#include <vector>

namespace emm {

enum class Verdict { Feasible, Infeasible, Undetermined };
const char* to_string(Verdict v);

struct FeasibilityOutcome {
  Verdict verdict = Verdict::Undetermined;
  Real energy;
  Vector witness;             // feasible: a point passing every form
  std::vector<Cut> cuts;      // every cut added, including the a-priori ones
  std::size_t prior_cuts = 0;  // leading entries of `cuts` added before the loop
  LpCertificate certificate;  // infeasible through the LP
  std::optional<ChainResult> chain;  // problems without free missing moments
  // Signed closeness to feasibility, positive when feasible: the final LP
  // slack, or the determinant chain's merit. Guides the search for runs
  // narrower than the scan grid.
  Real margin;
  int iterations = 0;         // cutting rounds
  int lp_pivots = 0;
};

struct SolverOptions {
  int iteration_cap_factor = 50;  // rounds = factor * (m_s + 1)
};

// Is the order-I positivity set at energy E nonempty?
FeasibilityOutcome check_feasibility(const ProblemSpec& spec, const Real& energy,
                                     const Order& order, const PrecisionConfig& cfg,
                                     const SolverOptions& options = {});

struct ScanOptions {
  double e_min = 0.0;
  double e_max = 0.0;
  int scan_points = 12;
  double bisect_tol = 1e-8;
  // When positive, the bisection tolerance grows to this fraction of the
  // bracket around the feasible run (ladders use it on intermediate orders).
  double relative_bisect_tol = 0.0;
  bool geometric = false;
  // With no feasible scan point, the search first bisects between neighbours
  // whose determinant chains fail at different minors, then zooms in on the
  // point of largest margin (each level rescans its two neighbouring gaps),
  // then doubles the grid density until it would exceed max_scan_points.
  int max_zoom_levels = 60;
  int max_scan_points = 6145;
  // Endpoints already known to be infeasible (e.g. bounds from a lower order).
  bool lo_known_infeasible = false;
  bool hi_known_infeasible = false;
  SolverOptions solver;
};

struct ScanSample {
  Real energy;
  Verdict verdict = Verdict::Undetermined;
  int iterations = 0;
  Real margin;
  // First failing (sigma, minor) of the determinant chain, when it ran and failed.
  std::optional<std::pair<std::size_t, std::size_t>> failed_minor;
};

struct EnergyInterval {
  Real lower;  // certified infeasible unless lower_certified is false
  Real upper;
  Order order;
  bool lower_certified = false;  // false: the run reached the window edge
  bool upper_certified = false;
  Real inner_lower;  // innermost feasible energies found by bisection
  Real inner_upper;
  Real lower_residual;  // inner_lower - lower
  Real upper_residual;  // upper - inner_upper
  std::vector<ScanSample> scan;
  int checks = 0;
  int cut_rounds = 0;
  int undetermined = 0;
};

EnergyInterval energy_bounds(const ProblemSpec& spec, const Order& order,
                             const ScanOptions& scan, const PrecisionConfig& cfg);

// Runs energy_bounds for successive orders, each in the previous interval.
// Valid because the order-(I+1) constraints contain the order-I ones, so the
// feasible sets are nested. Returns every rung; the last is the requested
// order.
std::vector<EnergyInterval> energy_bounds_ladder(const ProblemSpec& spec, const Order& order,
                                                 const ScanOptions& scan,
                                                 const PrecisionConfig& cfg);

// The orders a ladder visits on the way to `order`.
std::vector<Order> ladder_orders(const ProblemSpec& spec, const Order& order);

}  // namespace emm
