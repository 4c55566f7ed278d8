#include "emm/solver.hpp"

#include "emm/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace emm {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

FeasibilityOutcome check_fixed(const ProblemSpec& spec, const CoefficientTable& table,
                               const Order& order, const PrecisionConfig& cfg) {
  FeasibilityOutcome out;
  out.energy = table.energy;
  out.margin = 0;
  MomentMap moments = evaluate_moments(normalize(table, NormalizationKind::FixedConstant), {});
  // The recurrence fixes the moments only up to a common factor; take the
  // sign that makes the lowest moment positive.
  if (!moments.empty() && moments.begin()->second < 0)
    for (auto& [key, value] : moments) value = -value;
  ChainResult chain = determinant_chain(moments, spec, order, cfg);
  out.verdict = chain.pass ? Verdict::Feasible : Verdict::Infeasible;
  out.margin = chain.merit();
  out.chain = std::move(chain);
  return out;
}

}  // namespace

FeasibilityOutcome check_feasibility(const ProblemSpec& base, const Real& energy,
                                     const Order& order, const PrecisionConfig& cfg,
                                     const SolverOptions& options) {
  cfg.validate();
  PrecisionScope scope(cfg);
  const ProblemSpec spec = for_order(base, order);
  spec.validate();
  const Real e = at_precision(energy);
  if (!(e > spec.energy_floor))
    throw Error(ErrorKind::Domain, spec.label + ": energy " + to_decimal(e, 10) +
                                       " is outside the valid window");

  const CoefficientTable table =
      build_table(spec.recurrence, e, required_grid(spec.family, order), cfg);
  if (spec.normalization == NormalizationKind::FixedConstant)
    return check_fixed(spec, table, order, cfg);

  const NormalizedTable nt = normalize(table, NormalizationKind::Simplex);
  const std::vector<AffineForm> forms = assemble_forms(spec, nt, order);
  const std::size_t m = nt.free_count;

  FeasibilityOutcome out;
  out.energy = e;
  Vector lower, upper;
  for (std::size_t i = 0; i < m; ++i) {
    lower.emplace_back(spec.box_lower[i]);
    upper.emplace_back(spec.box_upper[i]);
  }
  ChebyshevLp lp(lower, upper, cfg);

  // Diagonal positivity of every form holds for any admissible chi.
  for (const AffineForm& form : forms) {
    for (std::size_t i = 0; i < form.size(); ++i) {
      Vector axis(form.size(), Real(0));
      axis[i] = 1;
      Cut cut = cut_from_vector(form, axis, e);
      lp.add_cut(cut.linear());
      out.cuts.push_back(std::move(cut));
    }
  }
  out.prior_cuts = out.cuts.size();

  const int cap = options.iteration_cap_factor * static_cast<int>(m + 1);
  for (int round = 0; round < cap; ++round) {
    LpResult lpr = lp.solve();
    out.lp_pivots += lpr.pivots;
    out.iterations = round;
    out.margin = lpr.slack;
    if (lpr.status == LpStatus::Infeasible) {
      out.verdict = Verdict::Infeasible;
      out.certificate = std::move(lpr.certificate);
      return out;
    }
    if (lpr.status == LpStatus::Undetermined) {
      out.verdict = Verdict::Undetermined;
      out.margin = 0;
      return out;
    }

    std::optional<std::size_t> worst;
    PsdResult worst_result;
    for (std::size_t f = 0; f < forms.size(); ++f) {
      PsdResult r = psd_test_equilibrated(evaluate_form(forms[f], lpr.point), cfg);
      if (r.pass) continue;
      if (!worst || r.min_eigenvalue < worst_result.min_eigenvalue) {
        worst = f;
        worst_result = std::move(r);
      }
    }
    if (!worst) {
      out.verdict = Verdict::Feasible;
      out.witness = std::move(lpr.point);
      return out;
    }
    Cut cut = cut_from_vector(forms[*worst], worst_result.witness, e);
    lp.add_cut(cut.linear());
    out.cuts.push_back(std::move(cut));
  }
  out.iterations = cap;
  out.verdict = Verdict::Undetermined;
  out.margin = 0;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class Scanner {
 public:
  Scanner(const ProblemSpec& spec, const Order& order, const ScanOptions& opt,
          const PrecisionConfig& cfg, EnergyInterval& result)
      : spec_(spec), order_(order), opt_(opt), cfg_(cfg), result_(result), tol_(opt.bisect_tol) {}

  void set_tolerance(Real tol) { tol_ = std::move(tol); }

  bool feasible(const Real& e) {
    const FeasibilityOutcome o = check_feasibility(spec_, e, order_, cfg_, opt_.solver);
    ++result_.checks;
    result_.cut_rounds += o.iterations;
    if (o.verdict == Verdict::Undetermined) ++result_.undetermined;
    last_ = {e, o.verdict, o.iterations, o.margin, std::nullopt};
    if (o.chain && !o.chain->pass)
      last_.failed_minor = std::make_pair(o.chain->failed_sigma, o.chain->failed_index);
    return o.verdict != Verdict::Infeasible;
  }

  const ScanSample& last() const { return last_; }

  // Shrinks [infeasible, feasible] (in either orientation) to the tolerance.
  void bisect(Real& infeasible, Real& feasible) {
    while (abs(feasible - infeasible) > tol_) {
      Real mid = (feasible + infeasible) / 2;
      if (mid == feasible || mid == infeasible) break;
      if (feasible_at(mid))
        feasible = std::move(mid);
      else
        infeasible = std::move(mid);
    }
  }

 private:
  bool feasible_at(const Real& e) { return feasible(e); }

  const ProblemSpec& spec_;
  const Order& order_;
  const ScanOptions& opt_;
  const PrecisionConfig& cfg_;
  EnergyInterval& result_;
  Real tol_;
  ScanSample last_;
};

Vector scan_grid(const ScanOptions& opt, int points) {
  Vector grid;
  const Real lo(opt.e_min), hi(opt.e_max);
  for (int k = 0; k < points; ++k) {
    if (k == 0) {
      grid.push_back(lo);
    } else if (k == points - 1) {
      grid.push_back(hi);
    } else if (opt.geometric) {
      grid.push_back(lo * pow(hi / lo, Real(k) / (points - 1)));
    } else {
      grid.push_back(lo + (hi - lo) * k / (points - 1));
    }
  }
  return grid;
}

void validate_scan(const ProblemSpec& spec, const ScanOptions& opt) {
  if (!(std::isfinite(opt.e_min) && std::isfinite(opt.e_max) && opt.e_min < opt.e_max))
    throw Error(ErrorKind::Config, "energy window needs finite e_min < e_max");
  if (!(opt.e_min > spec.energy_floor))
    throw Error(ErrorKind::Domain, spec.label + ": energy window must lie above " +
                                       std::to_string(spec.energy_floor));
  if (opt.scan_points < 3) throw Error(ErrorKind::Config, "scan_points must be >= 3");
  if (!(opt.bisect_tol > 0.0)) throw Error(ErrorKind::Config, "bisection tolerance must be > 0");
  if (opt.geometric && !(opt.e_min > 0.0))
    throw Error(ErrorKind::Config, "a geometric scan needs e_min > 0");
  if (opt.max_scan_points < opt.scan_points)
    throw Error(ErrorKind::Config, "max_scan_points must be >= scan_points");
}

}  // namespace

EnergyInterval energy_bounds(const ProblemSpec& spec, const Order& order, const ScanOptions& opt,
                             const PrecisionConfig& cfg) {
  cfg.validate();
  validate_scan(spec, opt);
  PrecisionScope scope(cfg);
  EnergyInterval result;
  result.order = order;
  Scanner scanner(spec, order, opt, cfg, result);

  auto evaluate = [&](const Real& e, bool known_infeasible) {
    if (known_infeasible) return ScanSample{e, Verdict::Infeasible, 0, Real(-1), std::nullopt};
    scanner.feasible(e);
    return scanner.last();
  };
  auto by_energy = [](const ScanSample& a, const ScanSample& b) { return a.energy < b.energy; };
  auto any_feasible = [](const std::vector<ScanSample>& v) {
    return std::any_of(v.begin(), v.end(),
                       [](const ScanSample& s) { return s.verdict != Verdict::Infeasible; });
  };

  // Coarse grid; grid[k] stays aligned with the current density.
  int points = opt.scan_points;
  std::vector<ScanSample> grid;
  {
    const Vector energies = scan_grid(opt, points);
    for (std::size_t k = 0; k < energies.size(); ++k)
      grid.push_back(evaluate(energies[k], (k == 0 && opt.lo_known_infeasible) ||
                                               (k + 1 == energies.size() && opt.hi_known_infeasible)));
  }
  std::vector<ScanSample> extra;

  // A feasible run narrower than the grid sits where the failing minor of the
  // determinant chain changes, so bisect every such change.
  if (!any_feasible(grid)) {
    const Real floor_width = Real(opt.bisect_tol) / 1000;
    // Edges skipped as known infeasible carry no failing minor of their own.
    const bool chained = std::any_of(grid.begin(), grid.end(),
                                     [](const ScanSample& s) { return s.failed_minor.has_value(); });
    for (ScanSample* edge : {&grid.front(), &grid.back()})
      if (chained && !edge->failed_minor) *edge = evaluate(edge->energy, false);
    std::vector<std::pair<ScanSample, ScanSample>> pending;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)
      if (grid[k].failed_minor && grid[k + 1].failed_minor &&
          grid[k].failed_minor != grid[k + 1].failed_minor)
        pending.emplace_back(grid[k], grid[k + 1]);
    bool found = false;
    while (!pending.empty() && !found) {
      auto [a, b] = std::move(pending.back());
      pending.pop_back();
      while (b.energy - a.energy > floor_width) {
        ScanSample mid = evaluate((a.energy + b.energy) / 2, false);
        extra.push_back(mid);
        if (mid.verdict != Verdict::Infeasible) {
          found = true;
          break;
        }
        if (mid.failed_minor == a.failed_minor) {
          a = std::move(mid);
        } else if (mid.failed_minor == b.failed_minor) {
          b = std::move(mid);
        } else {
          pending.emplace_back(mid, b);
          b = std::move(mid);
        }
      }
    }
  }

  // Zoom towards the largest margin: a feasible run narrower than the grid
  // spacing sits next to the point that came closest to feasibility.
  if (!any_feasible(grid) && !any_feasible(extra)) {
    std::vector<ScanSample> all = grid;
    for (const ScanSample& s : extra)
      all.insert(std::upper_bound(all.begin(), all.end(), s, by_energy), s);
    const Real floor_width = Real(opt.bisect_tol) / 1000;
    for (int level = 0; level < opt.max_zoom_levels; ++level) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < all.size(); ++k)
        if (all[k].margin > all[best].margin) best = k;
      const Real lo = all[best == 0 ? 0 : best - 1].energy;
      const Real hi = all[std::min(best + 1, all.size() - 1)].energy;
      if (hi - lo <= floor_width) break;
      const int inner = std::max(opt.scan_points - 2, 2);
      bool found = false;
      for (int k = 1; k <= inner; ++k) {
        ScanSample s = evaluate(lo + (hi - lo) * k / (inner + 1), false);
        found = found || s.verdict != Verdict::Infeasible;
        extra.push_back(s);
        all.insert(std::upper_bound(all.begin(), all.end(), s, by_energy), std::move(s));
      }
      if (found) break;
    }
  }

  // Fallback: uniform refinement of the coarse grid.
  while (!any_feasible(grid) && !any_feasible(extra)) {
    const int denser = 2 * (points - 1) + 1;
    if (denser > opt.max_scan_points) break;
    points = denser;
    const Vector energies = scan_grid(opt, points);
    std::vector<ScanSample> next;
    for (std::size_t k = 0; k < energies.size(); ++k)
      next.push_back(k % 2 == 0 ? std::move(grid[k / 2]) : evaluate(energies[k], false));
    grid = std::move(next);
  }

  result.scan = std::move(grid);
  for (ScanSample& s : extra) result.scan.push_back(std::move(s));
  std::stable_sort(result.scan.begin(), result.scan.end(), by_energy);

  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t k = 0; k < result.scan.size(); ++k) {
    if (result.scan[k].verdict == Verdict::Infeasible) continue;
    if (!runs.empty() && runs.back().second + 1 == k)
      runs.back().second = k;
    else
      runs.emplace_back(k, k);
  }

  if (runs.empty())
    throw Error(ErrorKind::NoFeasible,
                spec.label + " " + order.describe() + ": no feasible energy among " +
                    std::to_string(result.scan.size()) + " scan points in [" +
                    to_decimal(Real(opt.e_min), 8) + ", " + to_decimal(Real(opt.e_max), 8) +
                    "]; widen the window or lower the order");
  if (runs.size() > 1) {
    std::string detail;
    for (const auto& [a, b] : runs)
      detail += " [" + to_decimal(result.scan[a].energy, 10) + ", " +
                to_decimal(result.scan[b].energy, 10) + "]";
    throw Error(ErrorKind::MultiInterval,
                spec.label + " " + order.describe() + ": " + std::to_string(runs.size()) +
                    " disjoint feasible runs:" + detail);
  }

  const auto [first, last] = runs.front();
  const std::size_t n = result.scan.size();
  if (opt.relative_bisect_tol > 0) {
    const Real bracket = result.scan[std::min(last + 1, n - 1)].energy -
                         result.scan[first == 0 ? 0 : first - 1].energy;
    scanner.set_tolerance(max(Real(opt.bisect_tol), opt.relative_bisect_tol * bracket));
  }
  if (first == 0) {
    result.lower = result.scan[0].energy;
    result.inner_lower = result.lower;
    result.lower_certified = false;
  } else {
    Real bad = result.scan[first - 1].energy;
    Real good = result.scan[first].energy;
    scanner.bisect(bad, good);
    result.lower = std::move(bad);
    result.inner_lower = std::move(good);
    result.lower_certified = true;
  }
  if (last + 1 == n) {
    result.upper = result.scan[n - 1].energy;
    result.inner_upper = result.upper;
    result.upper_certified = false;
  } else {
    Real bad = result.scan[last + 1].energy;
    Real good = result.scan[last].energy;
    scanner.bisect(bad, good);
    result.upper = std::move(bad);
    result.inner_upper = std::move(good);
    result.upper_certified = true;
  }
  result.lower_residual = result.inner_lower - result.lower;
  result.upper_residual = result.upper - result.inner_upper;
  return result;
}

std::vector<Order> ladder_orders(const ProblemSpec& spec, const Order& order) {
  std::vector<Order> orders;
  const int start = spec.first_useful_order;
  if (order.kind == Order::Kind::Uniform) {
    for (int i = std::min(start, order.value); i <= order.value; ++i)
      orders.push_back(Order::uniform(i));
    return orders;
  }
  int max_shift = 0;
  for (const SigmaEntry& s : spec.family.sigmas) max_shift = std::max(max_shift, s.max_shift());
  const int k0 = 2 * start + max_shift;
  if (order.value <= k0) return {order};
  // Without free missing moments a check is a handful of determinants, so
  // single-moment steps cost little and keep each rung's zoom modest.
  const int step = spec.normalization == NormalizationKind::FixedConstant ? 1 : 2;
  for (int k = k0; k < order.value; k += step) orders.push_back(Order::budget(k));
  orders.push_back(order);
  return orders;
}

std::vector<EnergyInterval> energy_bounds_ladder(const ProblemSpec& spec, const Order& order,
                                                 const ScanOptions& scan,
                                                 const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  std::vector<EnergyInterval> rungs;
  ScanOptions opt = scan;
  const std::vector<Order> orders = ladder_orders(spec, order);
  for (std::size_t r = 0; r < orders.size(); ++r) {
    const bool final_rung = r + 1 == orders.size();
    // Intermediate rungs only need to shrink the window for the next one.
    opt.relative_bisect_tol = final_rung ? scan.relative_bisect_tol : 0.01;
    EnergyInterval interval = energy_bounds(spec, orders[r], opt, cfg);
    if (!final_rung) {
      // Outward-rounded doubles keep the next window containing this one.
      opt.e_min = std::nextafter(interval.lower.convert_to<double>(), -HUGE_VAL);
      opt.e_max = std::nextafter(interval.upper.convert_to<double>(), HUGE_VAL);
      if (!(opt.e_min > spec.energy_floor)) opt.e_min = scan.e_min;
      opt.lo_known_infeasible = interval.lower_certified && opt.e_min <= interval.lower;
      opt.hi_known_infeasible = interval.upper_certified && opt.e_max >= interval.upper;
    }
    rungs.push_back(std::move(interval));
  }
  return rungs;
}

}  // namespace emm
