#pragma once

#include "emm/catalog.hpp"
#include "emm/numerics.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace emm {

// M(chi) = M0 + sum_l chi_l M_l for one weight sigma.
struct AffineForm {
  std::size_t sigma = 0;
  std::string label;
  std::vector<MomentKey> row_keys;
  SymMatrix constant;
  std::vector<SymMatrix> coeffs;

  std::size_t size() const { return constant.size(); }
};

std::vector<AffineForm> assemble_forms(const ProblemSpec& spec, const NormalizedTable& table,
                                       const Order& order);

SymMatrix evaluate_form(const AffineForm& form, const Vector& chi);

// C^T M(chi) C > 0 written as  coeffs . chi < bound.
struct Cut {
  Vector coeffs;  // -C^T M_l C
  Real bound;     //  C^T M_0 C
  std::size_t sigma = 0;
  Vector direction;
  Real energy;

  LinearCut linear() const { return {coeffs, bound}; }
  // bound - coeffs . chi, i.e. C^T M(chi) C
  Real margin(const Vector& chi) const;
};

Cut cut_from_vector(const AffineForm& form, const Vector& c, const Real& energy);

// Leading principal minors of one sigma matrix.
struct SigmaChain {
  std::string label;
  std::vector<Real> determinants;  // determinants[i] = det of the (i+1) leading block
  std::vector<Real> normalized;    // determinants[i] / prod_{j <= i} |diagonal_j|
  std::vector<bool> passed;
};

struct ChainResult {
  bool pass = true;
  std::vector<SigmaChain> sigmas;
  // First failing (sigma, leading size - 1), when !pass.
  std::size_t failed_sigma = 0;
  std::size_t failed_index = 0;

  // Signed closeness to passing, positive iff pass. For a failure it is
  // (minors passed before the first failure, taken by block size then sigma)
  // minus the number of minors, plus the squashed normalized value of the
  // failing minor, so it rises as the energy approaches a feasible run.
  Real merit() const;
};

// Hankel-Hadamard determinants of exact moments (no free variables). A minor
// passes iff det > psd_tolerance * prod |pivot|; 1-D families only.
ChainResult determinant_chain(const MomentMap& moments, const ProblemSpec& spec,
                              const Order& order, const PrecisionConfig& cfg);

// The sigma matrices with every entry evaluated from `moments`.
std::vector<SymMatrix> moment_matrices(const MomentMap& moments, const ProblemSpec& spec,
                                       const Order& order);

}  // namespace emm
