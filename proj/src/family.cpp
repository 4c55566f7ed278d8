#include "emm/family.hpp"

#include "emm/error.hpp"

#include <algorithm>

namespace emm {

std::string Order::describe() const {
  return kind == Kind::Uniform ? "I=" + std::to_string(value)
                               : "u(<=" + std::to_string(value) + ")";
}

int SigmaEntry::max_shift() const {
  int m = 0;
  for (const WeightTerm& t : terms) m = std::max(m, t.shift.p + t.shift.q);
  return m;
}

ConstraintFamily ConstraintFamily::hamburger() {
  ConstraintFamily f;
  f.sigmas.push_back({"1", {{1.0, 0, {0, 0}}}});
  return f;
}

ConstraintFamily ConstraintFamily::stieltjes() {
  ConstraintFamily f = hamburger();
  f.sigmas.push_back({"x", {{1.0, 0, {1, 0}}}});
  return f;
}

ConstraintFamily ConstraintFamily::hausdorff() {
  ConstraintFamily f = stieltjes();
  f.sigmas.push_back({"L^2-x", {{1.0, 1, {0, 0}}, {-1.0, 0, {1, 0}}}});
  return f;
}

ConstraintFamily ConstraintFamily::lens() {
  ConstraintFamily f;
  f.dimension = 2;
  f.sigmas.push_back({"1", {{1.0, 0, {0, 0}}}});
  f.sigmas.push_back({"omega", {{1.0, 0, {1, 0}}}});
  f.sigmas.push_back({"nu", {{1.0, 0, {0, 1}}}});
  f.sigmas.push_back({"1-omega-nu", {{1.0, 0, {0, 0}}, {-1.0, 0, {1, 0}}, {-1.0, 0, {0, 1}}}});
  return f;
}

void ConstraintFamily::validate() const {
  if (dimension != 1 && dimension != 2)
    throw Error(ErrorKind::Structural, "constraint family dimension must be 1 or 2");
  if (sigmas.empty()) throw Error(ErrorKind::Structural, "constraint family has no entries");
  for (const SigmaEntry& s : sigmas) {
    if (s.terms.empty())
      throw Error(ErrorKind::Structural, "weight '" + s.label + "' has no terms");
    for (const WeightTerm& t : s.terms) {
      if (!t.shift.nonnegative() || (dimension == 1 && t.shift.q != 0))
        throw Error(ErrorKind::Structural, "weight '" + s.label + "' has an invalid shift");
    }
  }
}

std::size_t ConstraintFamily::axis_size(std::size_t sigma, const Order& order) const {
  if (order.value < 0) throw Error(ErrorKind::Config, "order must be >= 0");
  if (order.kind == Order::Kind::Uniform) return static_cast<std::size_t>(order.value) + 1;
  if (dimension != 1)
    throw Error(ErrorKind::Config, "moment budgets apply only to one-dimensional families");
  // largest d with 2(d-1) + shift <= K
  const int room = order.value - sigmas.at(sigma).max_shift();
  return room < 0 ? 0 : static_cast<std::size_t>(room / 2) + 1;
}

std::vector<MomentKey> ConstraintFamily::row_keys(std::size_t sigma, const Order& order) const {
  const int n = static_cast<int>(axis_size(sigma, order));
  std::vector<MomentKey> keys;
  if (dimension == 1) {
    for (int i = 0; i < n; ++i) keys.push_back({i, 0});
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) keys.push_back({i, j});
  }
  return keys;
}

int ConstraintFamily::max_moment(const Order& order) const {
  int m = 0;
  for (const MomentKey& k : required_grid(*this, order)) m = std::max({m, k.p, k.q});
  return m;
}

KeySet required_grid(const ConstraintFamily& family, const Order& order) {
  family.validate();
  KeySet keys;
  for (std::size_t s = 0; s < family.sigmas.size(); ++s) {
    const std::vector<MomentKey> rows = family.row_keys(s, order);
    for (const MomentKey& r : rows)
      for (const MomentKey& c : rows)
        for (const WeightTerm& t : family.sigmas[s].terms) keys.insert(r + c + t.shift);
  }
  return keys;
}

}  // namespace emm
