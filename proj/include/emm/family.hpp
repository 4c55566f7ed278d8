#pragma once

#include "emm/moments.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace emm {

// Truncation order. Uniform(I) gives every sigma-form dimension I+1 along
// each axis. Budget(K) instead caps the highest moment used: each 1-D form
// takes the largest dimension whose entries stay within u(<= K), so forms
// with larger weight shifts get fewer rows.
struct Order {
  enum class Kind { Uniform, Budget } kind = Kind::Uniform;
  int value = 0;

  static Order uniform(int I) { return {Kind::Uniform, I}; }
  static Order budget(int K) { return {Kind::Budget, K}; }
  std::string describe() const;
  friend bool operator==(const Order&, const Order&) = default;
};

// One term f * Omega-shift of a weight polynomial. The coefficient is
// coeff * (L^2)^l2_power so the Hausdorff interval length stays symbolic.
struct WeightTerm {
  double coeff = 1.0;
  int l2_power = 0;
  MomentKey shift;
};

struct SigmaEntry {
  std::string label;
  std::vector<WeightTerm> terms;

  int max_shift() const;  // largest total shift among the terms
};

struct ConstraintFamily {
  int dimension = 1;  // 1 for power moments u(p), 2 for u(p, q)
  std::vector<SigmaEntry> sigmas;

  static ConstraintFamily hamburger();
  static ConstraintFamily stieltjes();
  static ConstraintFamily hausdorff();
  static ConstraintFamily lens();

  void validate() const;

  // Number of rows of the sigma-th form (per axis for 2-D families).
  std::size_t axis_size(std::size_t sigma, const Order& order) const;
  // Index keys of the form rows; row-major over (i, j) for 2-D.
  std::vector<MomentKey> row_keys(std::size_t sigma, const Order& order) const;
  // Highest power moment index any form reaches (per axis).
  int max_moment(const Order& order) const;
};

// Exactly the keys row + col + shift over every sigma and weight term.
KeySet required_grid(const ConstraintFamily& family, const Order& order);

}  // namespace emm
