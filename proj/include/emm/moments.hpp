#pragma once

#include "emm/real.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace emm {

// Lattice index of a power moment: (p) for 1-D problems, (p, q) for 2-D.
// Offsets inside recurrence stencils reuse the type with signed entries.
struct MomentKey {
  int p = 0;
  int q = 0;

  friend auto operator<=>(const MomentKey&, const MomentKey&) = default;
  MomentKey operator+(const MomentKey& o) const { return {p + o.p, q + o.q}; }
  MomentKey operator-(const MomentKey& o) const { return {p - o.p, q - o.q}; }
  bool nonnegative() const { return p >= 0 && q >= 0; }
};

std::string to_string(const MomentKey& key, int dimension);

// Generation order: by total degree, then by the first index. For 1-D keys
// this is plain increasing index.
struct GenerationOrder {
  bool operator()(const MomentKey& a, const MomentKey& b) const {
    if (a.p + a.q != b.p + b.q) return a.p + a.q < b.p + b.q;
    return a.p < b.p;
  }
};

using KeySet = std::set<MomentKey, GenerationOrder>;

// Physical parameters a coefficient may reference.
enum class Param : int {
  Epsilon = 0,  // kinetic prefactor
  Mass,         // quadratic coupling m
  Coupling,     // sextic coupling g
  LSquared,     // square-well half-width squared
  R1Squared,    // lens plane radius squared
  R2Squared,    // lens sphere radius squared
};
inline constexpr std::size_t kParamCount = 6;

// Raw inputs; derived quantities are evaluated at the working precision on
// demand, so a specification can be rebuilt at any precision.
struct ParameterSet {
  double epsilon = 1.0;
  double mass = 1.0;
  double coupling = 1.0;
  double half_width = 1.0;
  double b_over_a = 1.0;

  Real value(Param p) const;
};

// One monomial c * prod(param^k) * prod(param^(k' * p)) * p^i * q^j * E^e of
// an index polynomial. Index-dependent parameter powers express boundary
// factors such as L^(2 rho).
struct PolyTerm {
  double coeff = 0.0;
  std::array<int, kParamCount> param_power{};
  std::array<int, kParamCount> param_power_per_p{};
  int p_power = 0;
  int q_power = 0;
  int e_power = 0;
};

// Closed-form polynomial in the stencil anchor (p, q), the energy E, and the
// problem parameters.
class IndexPoly {
 public:
  IndexPoly() = default;
  IndexPoly(double c);  // NOLINT: constants convert implicitly

  static IndexPoly p();
  static IndexPoly q();
  static IndexPoly energy();
  static IndexPoly param(Param which);
  // param^(p) with p the anchor's first index.
  static IndexPoly param_to_index(Param which);

  friend IndexPoly operator+(const IndexPoly& a, const IndexPoly& b);
  friend IndexPoly operator-(const IndexPoly& a, const IndexPoly& b);
  friend IndexPoly operator*(const IndexPoly& a, const IndexPoly& b);
  IndexPoly operator-() const;

  Real evaluate(const MomentKey& anchor, const Real& energy, const ParameterSet& params) const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<PolyTerm>& terms() const { return terms_; }

 private:
  void add_term(const PolyTerm& t);
  std::vector<PolyTerm> terms_;
};

struct SourceTerm {
  MomentKey offset;  // relative to the anchor
  IndexPoly coefficient;
};

// A linear moment recurrence
//   divisor(a, E) * u(a + target_offset) = sum_j c_j(a, E) u(a + offset_j)
//                                          [+ inhomogeneity(a, E) * 1]
// valid for anchors a >= anchor_min componentwise.
//
// The missing-moment basis spans the recurrence's initial data. When the
// recurrence is inhomogeneous the basis gains a leading unit column
// (index 0) that carries the constant source.
struct RecurrenceSpec {
  int dimension = 1;
  std::vector<MomentKey> missing_keys;
  bool inhomogeneous = false;
  MomentKey target_offset;
  MomentKey anchor_min;
  IndexPoly divisor;
  std::vector<SourceTerm> sources;
  IndexPoly inhomogeneity;
  ParameterSet params;

  std::size_t basis_size() const { return missing_keys.size() + (inhomogeneous ? 1 : 0); }
  // Basis column of a missing key, if it is one.
  std::optional<std::size_t> basis_index(const MomentKey& key) const;
  // Anchor generating `key`, or nothing if the key is not generated.
  std::optional<MomentKey> anchor_for(const MomentKey& key) const;
};

// M_E(key, l): every tabulated moment as a linear combination of the basis.
struct CoefficientTable {
  Real energy;
  std::size_t basis_size = 0;
  bool inhomogeneous = false;
  std::map<MomentKey, Vector, GenerationOrder> rows;

  const Vector& row(const MomentKey& key) const;
};

enum class NormalizationKind {
  Simplex,        // missing moments sum to one; chi_0 eliminated
  FixedConstant,  // the single basis element is fixed to one
};

struct NormalizedRow {
  Real constant;  // M^(key, 0)
  Vector coeffs;  // M^(key, l), l = 1..m_s
};

// Moments as affine functions of the free variables chi_1..chi_ms.
struct NormalizedTable {
  Real energy;
  std::size_t free_count = 0;
  std::map<MomentKey, NormalizedRow, GenerationOrder> rows;

  const NormalizedRow& row(const MomentKey& key) const;
};

using MomentMap = std::map<MomentKey, Real, GenerationOrder>;

// Tabulates every key in `keys` (and the missing basis) at energy E.
// Throws Domain when the divisor vanishes and Structural when a key cannot be
// generated from the basis.
CoefficientTable build_table(const RecurrenceSpec& spec, const Real& energy, const KeySet& keys,
                             const PrecisionConfig& cfg);

NormalizedTable normalize(const CoefficientTable& table,
                          NormalizationKind kind = NormalizationKind::Simplex);

MomentMap evaluate_moments(const NormalizedTable& table, const Vector& chi);

}  // namespace emm
