#pragma once

#include "emm/family.hpp"
#include "emm/moments.hpp"

#include <string>
#include <utility>
#include <vector>

namespace emm {

struct SexticParams {
  double epsilon = 1.0;
  double mass = 1.0;
  double coupling = 1.0;

  friend bool operator==(const SexticParams&, const SexticParams&) = default;
};

struct SquareWellParams {
  double half_width = 1.0;

  friend bool operator==(const SquareWellParams&, const SquareWellParams&) = default;
};

struct LensParams {
  double b_over_a = 1.0;

  friend bool operator==(const LensParams&, const LensParams&) = default;
};

struct EnergyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// One complete EMM instance: the moment recurrence, the positivity family,
// how the missing moments are normalised, and the box the free missing
// moments live in.
struct ProblemSpec {
  std::string label;
  std::string description;
  RecurrenceSpec recurrence;
  ConstraintFamily family;
  NormalizationKind normalization = NormalizationKind::Simplex;
  std::vector<double> box_lower;  // one entry per free variable
  std::vector<double> box_upper;
  // Energies must exceed this value (the recurrences divide by E or
  // presuppose a positive spectrum).
  double energy_floor = 0.0;
  EnergyWindow default_window;
  bool geometric_scan = false;
  // Smallest order that constrains the energy at all; order ladders start here.
  int first_useful_order = 0;
  std::vector<std::string> notes;

  std::size_t free_count() const { return box_lower.size(); }
  const ParameterSet& params() const { return recurrence.params; }
  // Weight coefficient of a family term at this spec's parameters.
  Real weight(const WeightTerm& term) const;
  void validate() const;
};

ProblemSpec sextic_hamburger(const SexticParams& p);
ProblemSpec sextic_stieltjes(const SexticParams& p);
ProblemSpec sextic_stieltjes_shifted(const SexticParams& p);
ProblemSpec sextic_excited(const SexticParams& p);
ProblemSpec sextic_degenerate_control(const SexticParams& p);
ProblemSpec square_well_boundary(const SquareWellParams& p);
ProblemSpec square_well_no_boundary(const SquareWellParams& p);
ProblemSpec lens_m0(const LensParams& p);

// Specialises a spec to a truncation order. Only the lens needs this: its
// missing basis grows with I. Other specs are returned unchanged.
ProblemSpec for_order(const ProblemSpec& spec, const Order& order);

// Default lens scan window; the ground state scales like (a/b)^2 for thin
// lenses and tends to the hemisphere value ~20.19 at b = a.
EnergyWindow lens_default_window(double b_over_a);

const std::vector<std::string>& problem_labels();

// Builds a spec by label, taking whichever parameters the problem uses.
struct ProblemParams {
  SexticParams sextic;
  SquareWellParams well;
  LensParams lens;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};
ProblemSpec make_problem(const std::string& label, const ProblemParams& params);

}  // namespace emm
