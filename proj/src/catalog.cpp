#include "emm/catalog.hpp"

#include "emm/error.hpp"

#include <cmath>

namespace emm {

namespace {

using P = IndexPoly;

MomentKey k1(int p) { return {p, 0}; }

std::vector<MomentKey> first_keys(int count) {
  std::vector<MomentKey> keys;
  for (int i = 0; i < count; ++i) keys.push_back(k1(i));
  return keys;
}

void require_sextic(const SexticParams& p) {
  if (!(p.coupling > 0.0) || !std::isfinite(p.coupling))
    throw Error(ErrorKind::Config, "sextic coupling g must be > 0");
  if (!std::isfinite(p.epsilon) || !std::isfinite(p.mass))
    throw Error(ErrorKind::Config, "sextic parameters must be finite");
}

ParameterSet sextic_set(const SexticParams& p) {
  ParameterSet s;
  s.epsilon = p.epsilon;
  s.mass = p.mass;
  s.coupling = p.coupling;
  return s;
}

void unit_box(ProblemSpec& spec) {
  const std::size_t n = spec.recurrence.basis_size() - 1;
  spec.box_lower.assign(n, 0.0);
  spec.box_upper.assign(n, 1.0);
}

const P eps = P::param(Param::Epsilon);
const P mass = P::param(Param::Mass);
const P g = P::param(Param::Coupling);
const P E = P::energy();
const P rho = P::p();

}  // namespace

Real ProblemSpec::weight(const WeightTerm& term) const {
  Real w(term.coeff);
  if (term.l2_power != 0) w *= pow(recurrence.params.value(Param::LSquared), term.l2_power);
  return w;
}

void ProblemSpec::validate() const {
  family.validate();
  if (family.dimension != recurrence.dimension)
    throw Error(ErrorKind::Structural, label + ": family and recurrence dimensions differ");
  if (box_lower.size() != box_upper.size())
    throw Error(ErrorKind::Structural, label + ": box bounds differ in length");
  const std::size_t basis = recurrence.basis_size();
  const std::size_t expected =
      normalization == NormalizationKind::Simplex ? (basis == 0 ? 0 : basis - 1) : 0;
  if (normalization == NormalizationKind::FixedConstant && basis != 1)
    throw Error(ErrorKind::Structural, label + ": fixed-constant normalization needs one basis element");
  if (box_lower.size() != expected)
    throw Error(ErrorKind::Structural, label + ": box does not match the free missing moments");
  for (std::size_t i = 0; i < box_lower.size(); ++i)
    if (!(box_lower[i] < box_upper[i]))
      throw Error(ErrorKind::Structural, label + ": empty box in coordinate " + std::to_string(i));
}

// g mu(p+6) = -m mu(p+2) + E mu(p) + eps p(p-1) mu(p-2)
ProblemSpec sextic_hamburger(const SexticParams& p) {
  require_sextic(p);
  ProblemSpec spec;
  spec.label = "sextic-hamburger";
  spec.description = "sextic oscillator, Hamburger moments mu(p) on the real line";
  RecurrenceSpec& r = spec.recurrence;
  r.params = sextic_set(p);
  r.missing_keys = first_keys(6);
  r.target_offset = k1(6);
  r.anchor_min = k1(0);
  r.divisor = g;
  r.sources = {{k1(2), -mass}, {k1(0), E}, {k1(-2), eps * rho * (rho - 1)}};
  spec.family = ConstraintFamily::hamburger();
  spec.box_lower.assign(5, -10.0);
  spec.box_upper.assign(5, 10.0);
  spec.energy_floor = -1e300;
  spec.default_window = {0.5, 5.0};
  spec.notes.push_back("signed missing moments searched in the box |chi| <= 10");
  return spec;
}

// g u(r+3) = -m u(r+1) + E u(r) + eps 2r(2r-1) u(r-1)
ProblemSpec sextic_stieltjes(const SexticParams& p) {
  require_sextic(p);
  ProblemSpec spec;
  spec.label = "sextic-stieltjes";
  spec.description = "sextic oscillator ground state, Stieltjes moments u(r) = mu(2r)";
  RecurrenceSpec& r = spec.recurrence;
  r.params = sextic_set(p);
  r.missing_keys = first_keys(3);
  r.target_offset = k1(3);
  r.anchor_min = k1(0);
  r.divisor = g;
  r.sources = {{k1(1), -mass}, {k1(0), E}, {k1(-1), eps * 2.0 * rho * (2.0 * rho - 1)}};
  spec.family = ConstraintFamily::stieltjes();
  unit_box(spec);
  spec.energy_floor = -1e300;
  spec.default_window = {0.5, 5.0};
  spec.first_useful_order = 1;
  return spec;
}

// g u(r+4) = -g u(r+3) - m u(r+2) + (E - m) u(r+1)
//            + [E + eps 2(r+1)(2r+1)] u(r) + eps 2r(2r-1) u(r-1)
ProblemSpec sextic_stieltjes_shifted(const SexticParams& p) {
  require_sextic(p);
  ProblemSpec spec;
  spec.label = "sextic-shifted";
  spec.description = "sextic oscillator ground state, multiplier 1+x^2";
  RecurrenceSpec& r = spec.recurrence;
  r.params = sextic_set(p);
  r.missing_keys = first_keys(4);
  r.target_offset = k1(4);
  r.anchor_min = k1(0);
  r.divisor = g;
  r.sources = {{k1(3), -g},
               {k1(2), -mass},
               {k1(1), E - mass},
               {k1(0), E + eps * 2.0 * (rho + 1) * (2.0 * rho + 1)},
               {k1(-1), eps * 2.0 * rho * (2.0 * rho - 1)}};
  spec.family = ConstraintFamily::stieltjes();
  unit_box(spec);
  spec.energy_floor = -1e300;
  spec.default_window = {0.5, 5.0};
  spec.first_useful_order = 1;
  return spec;
}

// g w(r+3) = E w(r) - m w(r+1) + eps 2r(2r+1) w(r-1),  w(r) = mu(2r+1)
ProblemSpec sextic_excited(const SexticParams& p) {
  require_sextic(p);
  ProblemSpec spec;
  spec.label = "sextic-excited";
  spec.description = "sextic oscillator first excited state, w(r) = mu(2r+1)";
  RecurrenceSpec& r = spec.recurrence;
  r.params = sextic_set(p);
  r.missing_keys = first_keys(3);
  r.target_offset = k1(3);
  r.anchor_min = k1(0);
  r.divisor = g;
  r.sources = {{k1(0), E}, {k1(1), -mass}, {k1(-1), eps * 2.0 * rho * (2.0 * rho + 1)}};
  spec.family = ConstraintFamily::stieltjes();
  unit_box(spec);
  spec.energy_floor = -1e300;
  spec.default_window = {2.0, 10.0};
  spec.first_useful_order = 1;
  return spec;
}

// g w(r+2) = -m w(r) + E w(r-1) + eps 2r(2r-1) w(r-2),  r >= 2
ProblemSpec sextic_degenerate_control(const SexticParams& p) {
  require_sextic(p);
  ProblemSpec spec;
  spec.label = "sextic-degenerate";
  spec.description = "sextic oscillator with multiplier x^4 (admits no discrete bounds)";
  RecurrenceSpec& r = spec.recurrence;
  r.params = sextic_set(p);
  r.missing_keys = first_keys(4);
  r.target_offset = k1(2);
  r.anchor_min = k1(2);
  r.divisor = g;
  r.sources = {{k1(0), -mass}, {k1(-1), E}, {k1(-2), eps * 2.0 * rho * (2.0 * rho - 1)}};
  spec.family = ConstraintFamily::stieltjes();
  unit_box(spec);
  spec.energy_floor = -1e300;
  spec.default_window = {1.0, 50.0};
  spec.first_useful_order = 1;
  spec.notes.push_back("negative control: the x^4 multiplier vanishes where the ground state does not");
  return spec;
}

// E u(r) = -2r(2r-1) u(r-1) - A L^(2r), with A = -1
ProblemSpec square_well_boundary(const SquareWellParams& p) {
  if (!(p.half_width > 0.0) || !std::isfinite(p.half_width))
    throw Error(ErrorKind::Config, "square well half-width L must be > 0");
  ProblemSpec spec;
  spec.label = "well-boundary";
  spec.description = "infinite square well, moment equation with boundary term A = -1";
  RecurrenceSpec& r = spec.recurrence;
  r.params.half_width = p.half_width;
  r.params.epsilon = 1.0;
  r.inhomogeneous = true;
  r.target_offset = k1(0);
  r.anchor_min = k1(0);
  r.divisor = E;
  r.sources = {{k1(-1), -2.0 * rho * (2.0 * rho - 1)}};
  r.inhomogeneity = P::param_to_index(Param::LSquared);
  spec.family = ConstraintFamily::hausdorff();
  spec.normalization = NormalizationKind::FixedConstant;
  // Negative energies stay admissible: the moments are then fixed only up to
  // sign and the positivity tests refute them (E = 0 is a divisor zero).
  spec.energy_floor = -1e300;
  const double scale = 1.0 / (p.half_width * p.half_width);
  spec.default_window = {1.0 * scale, 10.0 * scale};
  spec.notes.push_back("A = -1 fixes the moment scale; the sign is chosen so that u(0) > 0");
  return spec;
}

// E u(r+1) = [E - (2r+2)(2r+1)] u(r) + 2r(2r-1) u(r-1),  u(0) = 1
ProblemSpec square_well_no_boundary(const SquareWellParams& p) {
  if (p.half_width != 1.0)
    throw Error(ErrorKind::Config, "the boundary-free square well form is defined for L = 1");
  ProblemSpec spec;
  spec.label = "well-nobdry";
  spec.description = "infinite square well, multiplier 1-x^2 (no boundary terms)";
  RecurrenceSpec& r = spec.recurrence;
  r.params.half_width = 1.0;
  r.missing_keys = {k1(0)};
  r.target_offset = k1(1);
  r.anchor_min = k1(0);
  r.divisor = E;
  r.sources = {{k1(0), E - (2.0 * rho + 2) * (2.0 * rho + 1)},
               {k1(-1), 2.0 * rho * (2.0 * rho - 1)}};
  spec.family = ConstraintFamily::hausdorff();
  spec.normalization = NormalizationKind::FixedConstant;
  spec.energy_floor = -1e300;
  spec.default_window = {1.0, 10.0};
  return spec;
}

// -(E/4) u(p,q) = R2^2 p(p-1) u(p-2,q) - [p^2 + 3p/2 + 2pq] u(p-1,q)
//                 - 2 R1^2 pq u(p-1,q-1) + [q^2 + q/2] u(p,q-1) + R1^2 q(q-1) u(p,q-2)
ProblemSpec lens_m0(const LensParams& p) {
  if (!(p.b_over_a > 0.0 && p.b_over_a <= 1.0))
    throw Error(ErrorKind::Config, "lens thickness ratio b/a must lie in (0, 1]");
  ProblemSpec spec;
  spec.label = "lens-m0";
  spec.description = "infinite quantum lens, axially symmetric (m = 0) states, a = 1";
  RecurrenceSpec& r = spec.recurrence;
  r.dimension = 2;
  r.params.b_over_a = p.b_over_a;
  r.target_offset = {0, 0};
  r.anchor_min = {1, 1};
  r.divisor = -0.25 * E;
  const P pp = P::p();
  const P qq = P::q();
  const P r1 = P::param(Param::R1Squared);
  const P r2 = P::param(Param::R2Squared);
  r.sources = {{{-2, 0}, r2 * pp * (pp - 1)},
               {{-1, 0}, -(pp * pp + 1.5 * pp + 2.0 * pp * qq)},
               {{-1, -1}, -2.0 * r1 * pp * qq},
               {{0, -1}, qq * qq + 0.5 * qq},
               {{0, -2}, r1 * qq * (qq - 1)}};
  spec.family = ConstraintFamily::lens();
  spec.energy_floor = 0.0;
  spec.default_window = lens_default_window(p.b_over_a);
  spec.geometric_scan = true;
  spec.first_useful_order = 1;
  return for_order(spec, Order::uniform(0));
}

ProblemSpec for_order(const ProblemSpec& spec, const Order& order) {
  if (spec.family.dimension != 2) return spec;
  if (order.kind != Order::Kind::Uniform)
    throw Error(ErrorKind::Config, spec.label + " takes a uniform order I, not a moment budget");
  if (order.value < 0) throw Error(ErrorKind::Config, "order must be >= 0");
  // u(p,0) for p = 0..N and u(0,q) for q = 1..N span the [0,N]^2 grid, N = 2I+1
  ProblemSpec out = spec;
  const int n = 2 * order.value + 1;
  std::vector<MomentKey>& keys = out.recurrence.missing_keys;
  keys.clear();
  for (int i = 0; i <= n; ++i) keys.push_back({i, 0});
  for (int j = 1; j <= n; ++j) keys.push_back({0, j});
  unit_box(out);
  return out;
}

EnergyWindow lens_default_window(double b_over_a) {
  const double slab = (M_PI / b_over_a) * (M_PI / b_over_a);
  return {0.8 * slab, 3.0 * slab + 20.0};
}

const std::vector<std::string>& problem_labels() {
  static const std::vector<std::string> labels = {
      "sextic-hamburger", "sextic-stieltjes", "sextic-shifted", "sextic-excited",
      "sextic-degenerate", "well-boundary",   "well-nobdry",    "lens-m0"};
  return labels;
}

ProblemSpec make_problem(const std::string& label, const ProblemParams& params) {
  if (label == "sextic-hamburger") return sextic_hamburger(params.sextic);
  if (label == "sextic-stieltjes") return sextic_stieltjes(params.sextic);
  if (label == "sextic-shifted") return sextic_stieltjes_shifted(params.sextic);
  if (label == "sextic-excited") return sextic_excited(params.sextic);
  if (label == "sextic-degenerate") return sextic_degenerate_control(params.sextic);
  if (label == "well-boundary") return square_well_boundary(params.well);
  if (label == "well-nobdry") return square_well_no_boundary(params.well);
  if (label == "lens-m0") return lens_m0(params.lens);
  std::string valid;
  for (const std::string& l : problem_labels()) valid += (valid.empty() ? "" : ", ") + l;
  throw Error(ErrorKind::Config, "unknown problem '" + label + "'; valid labels: " + valid);
}

}  // namespace emm
