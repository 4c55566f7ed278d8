#include "emm/moments.hpp"

#include "emm/error.hpp"

#include <functional>

namespace emm {

std::string to_string(const MomentKey& key, int dimension) {
  if (dimension == 1) return "u(" + std::to_string(key.p) + ")";
  return "u(" + std::to_string(key.p) + "," + std::to_string(key.q) + ")";
}

Real ParameterSet::value(Param p) const {
  switch (p) {
    case Param::Epsilon: return Real(epsilon);
    case Param::Mass: return Real(mass);
    case Param::Coupling: return Real(coupling);
    case Param::LSquared: return Real(half_width) * Real(half_width);
    case Param::R1Squared: {
      // R1 = (a^2 - b^2) / 2b with a = 1
      const Real b(b_over_a);
      const Real r1 = (1 - b * b) / (2 * b);
      return r1 * r1;
    }
    case Param::R2Squared: {
      const Real b(b_over_a);
      const Real r2 = (1 + b * b) / (2 * b);
      return r2 * r2;
    }
  }
  return Real(0);
}

// ---------------------------------------------------------------------------

IndexPoly::IndexPoly(double c) {
  if (c != 0.0) {
    PolyTerm t;
    t.coeff = c;
    terms_.push_back(t);
  }
}

IndexPoly IndexPoly::p() {
  IndexPoly r;
  PolyTerm t;
  t.coeff = 1;
  t.p_power = 1;
  r.terms_.push_back(t);
  return r;
}

IndexPoly IndexPoly::q() {
  IndexPoly r;
  PolyTerm t;
  t.coeff = 1;
  t.q_power = 1;
  r.terms_.push_back(t);
  return r;
}

IndexPoly IndexPoly::energy() {
  IndexPoly r;
  PolyTerm t;
  t.coeff = 1;
  t.e_power = 1;
  r.terms_.push_back(t);
  return r;
}

IndexPoly IndexPoly::param(Param which) {
  IndexPoly r;
  PolyTerm t;
  t.coeff = 1;
  t.param_power[static_cast<int>(which)] = 1;
  r.terms_.push_back(t);
  return r;
}

IndexPoly IndexPoly::param_to_index(Param which) {
  IndexPoly r;
  PolyTerm t;
  t.coeff = 1;
  t.param_power_per_p[static_cast<int>(which)] = 1;
  r.terms_.push_back(t);
  return r;
}

namespace {

bool same_monomial(const PolyTerm& a, const PolyTerm& b) {
  return a.param_power == b.param_power && a.param_power_per_p == b.param_power_per_p &&
         a.p_power == b.p_power && a.q_power == b.q_power && a.e_power == b.e_power;
}

}  // namespace

void IndexPoly::add_term(const PolyTerm& t) {
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (same_monomial(*it, t)) {
      it->coeff += t.coeff;
      if (it->coeff == 0.0) terms_.erase(it);
      return;
    }
  }
  if (t.coeff != 0.0) terms_.push_back(t);
}

IndexPoly operator+(const IndexPoly& a, const IndexPoly& b) {
  IndexPoly r = a;
  for (const PolyTerm& t : b.terms_) r.add_term(t);
  return r;
}

IndexPoly IndexPoly::operator-() const {
  IndexPoly r = *this;
  for (PolyTerm& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

IndexPoly operator-(const IndexPoly& a, const IndexPoly& b) { return a + (-b); }

IndexPoly operator*(const IndexPoly& a, const IndexPoly& b) {
  IndexPoly r;
  for (const PolyTerm& x : a.terms_) {
    for (const PolyTerm& y : b.terms_) {
      PolyTerm t;
      t.coeff = x.coeff * y.coeff;
      for (std::size_t k = 0; k < kParamCount; ++k) {
        t.param_power[k] = x.param_power[k] + y.param_power[k];
        t.param_power_per_p[k] = x.param_power_per_p[k] + y.param_power_per_p[k];
      }
      t.p_power = x.p_power + y.p_power;
      t.q_power = x.q_power + y.q_power;
      t.e_power = x.e_power + y.e_power;
      r.add_term(t);
    }
  }
  return r;
}

Real IndexPoly::evaluate(const MomentKey& anchor, const Real& energy,
                         const ParameterSet& params) const {
  Real sum = 0;
  for (const PolyTerm& t : terms_) {
    Real term(t.coeff);
    for (std::size_t k = 0; k < kParamCount; ++k) {
      const int power = t.param_power[k] + t.param_power_per_p[k] * anchor.p;
      if (power != 0) term *= pow(params.value(static_cast<Param>(k)), power);
    }
    if (t.p_power) term *= pow(Real(anchor.p), t.p_power);
    if (t.q_power) term *= pow(Real(anchor.q), t.q_power);
    if (t.e_power) term *= pow(energy, t.e_power);
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> RecurrenceSpec::basis_index(const MomentKey& key) const {
  const std::size_t shift = inhomogeneous ? 1 : 0;
  for (std::size_t i = 0; i < missing_keys.size(); ++i)
    if (missing_keys[i] == key) return i + shift;
  return std::nullopt;
}

std::optional<MomentKey> RecurrenceSpec::anchor_for(const MomentKey& key) const {
  const MomentKey anchor = key - target_offset;
  if (anchor.p < anchor_min.p || anchor.q < anchor_min.q) return std::nullopt;
  return anchor;
}

const Vector& CoefficientTable::row(const MomentKey& key) const {
  auto it = rows.find(key);
  if (it == rows.end())
    throw Error(ErrorKind::Structural,
                "coefficient table has no row for " + to_string(key, key.q ? 2 : 1));
  return it->second;
}

const NormalizedRow& NormalizedTable::row(const MomentKey& key) const {
  auto it = rows.find(key);
  if (it == rows.end())
    throw Error(ErrorKind::Structural,
                "normalized table has no row for " + to_string(key, key.q ? 2 : 1));
  return it->second;
}

CoefficientTable build_table(const RecurrenceSpec& spec, const Real& energy, const KeySet& keys,
                             const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  CoefficientTable table;
  table.energy = at_precision(energy);
  table.basis_size = spec.basis_size();
  table.inhomogeneous = spec.inhomogeneous;
  const std::size_t width = table.basis_size;

  for (const MomentKey& key : spec.missing_keys) {
    Vector row(width, Real(0));
    row[*spec.basis_index(key)] = 1;
    table.rows.emplace(key, std::move(row));
  }

  // Depth-first generation with memoisation; the stencil only reaches keys
  // that precede the target in generation order, so recursion terminates.
  std::function<const Vector&(const MomentKey&, int)> generate =
      [&](const MomentKey& key, int depth) -> const Vector& {
    if (auto it = table.rows.find(key); it != table.rows.end()) return it->second;
    const std::string name = to_string(key, spec.dimension);
    if (!key.nonnegative() || depth > 100000)
      throw Error(ErrorKind::Structural, name + " is outside the moment lattice");
    const std::optional<MomentKey> anchor = spec.anchor_for(key);
    if (!anchor)
      throw Error(ErrorKind::Structural,
                  name + " is neither a missing moment nor generated by the recurrence");

    const Real divisor = spec.divisor.evaluate(*anchor, table.energy, spec.params);
    if (divisor == 0)
      throw Error(ErrorKind::Domain, "recurrence divisor vanishes at E = " +
                                         to_decimal(table.energy, 17) + " generating " + name);

    Vector row(width, Real(0));
    for (const SourceTerm& src : spec.sources) {
      const Real c = src.coefficient.evaluate(*anchor, table.energy, spec.params);
      if (c == 0) continue;
      const MomentKey from = *anchor + src.offset;
      if (!GenerationOrder{}(from, key))
        throw Error(ErrorKind::Structural, "recurrence source for " + name +
                                               " does not precede it in generation order");
      const Vector& source_row = generate(from, depth + 1);
      for (std::size_t l = 0; l < width; ++l)
        if (source_row[l] != 0) row[l] += c * source_row[l];
    }
    if (spec.inhomogeneous && !spec.inhomogeneity.is_zero())
      row[0] += spec.inhomogeneity.evaluate(*anchor, table.energy, spec.params);
    for (Real& x : row) x /= divisor;
    return table.rows.emplace(key, std::move(row)).first->second;
  };

  for (const MomentKey& key : keys) generate(key, 0);
  return table;
}

NormalizedTable normalize(const CoefficientTable& table, NormalizationKind kind) {
  NormalizedTable out;
  out.energy = table.energy;
  if (kind == NormalizationKind::FixedConstant) {
    if (table.basis_size != 1)
      throw Error(ErrorKind::Structural,
                  "fixed-constant normalization needs a single basis element");
    out.free_count = 0;
    for (const auto& [key, row] : table.rows) out.rows.emplace(key, NormalizedRow{row[0], {}});
    return out;
  }
  if (table.inhomogeneous)
    throw Error(ErrorKind::Structural, "simplex normalization of an inhomogeneous recurrence");
  if (table.basis_size < 2)
    throw Error(ErrorKind::Structural,
                "simplex normalization needs m_s >= 1; use the determinant chain for m_s = 0");
  out.free_count = table.basis_size - 1;
  for (const auto& [key, row] : table.rows) {
    NormalizedRow r{row[0], Vector(out.free_count)};
    for (std::size_t l = 1; l < table.basis_size; ++l) r.coeffs[l - 1] = row[l] - row[0];
    out.rows.emplace(key, std::move(r));
  }
  return out;
}

MomentMap evaluate_moments(const NormalizedTable& table, const Vector& chi) {
  if (chi.size() != table.free_count)
    throw Error(ErrorKind::Config, "chi has " + std::to_string(chi.size()) +
                                       " entries, expected " + std::to_string(table.free_count));
  MomentMap out;
  for (const auto& [key, row] : table.rows) {
    Real v = row.constant;
    for (std::size_t l = 0; l < chi.size(); ++l) v += row.coeffs[l] * chi[l];
    out.emplace(key, std::move(v));
  }
  return out;
}

}  // namespace emm
