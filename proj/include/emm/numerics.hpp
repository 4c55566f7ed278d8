#pragma once

#include "emm/error.hpp"
#include "emm/real.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace emm {

// Symmetric matrix in packed lower-triangular storage, so entry(i, j) and
// entry(j, i) are the same object.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, Real(0)) {}

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(const Vector& d);

  std::size_t size() const { return n_; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

  Real norm_inf() const;
  Vector multiply(const Vector& v) const;
  // v^T M v
  Real quadratic_form(const Vector& v) const;

  // this += s * other
  void add_scaled(const SymMatrix& other, const Real& s);

 private:
  static std::size_t index(std::size_t i, std::size_t j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }

  std::size_t n_ = 0;
  std::vector<Real> data_;
};

struct EigenPair {
  Real value;
  Vector vector;  // unit Euclidean norm
};

struct EigenDecomposition {
  Vector values;                // ascending
  std::vector<Vector> vectors;  // vectors[k] pairs with values[k]
  int sweeps = 0;
};

// Thrown when cyclic Jacobi fails to converge; carries the best iterate.
class EigenNonConvergence : public Error {
 public:
  EigenNonConvergence(const std::string& what, EigenPair best)
      : Error(ErrorKind::Numerical, what), best_(std::move(best)) {}
  const EigenPair& best() const noexcept { return best_; }

 private:
  EigenPair best_;
};

// Full decomposition by cyclic Jacobi rotations.
EigenDecomposition symmetric_eigen(const SymMatrix& m, const PrecisionConfig& cfg);

EigenPair symmetric_min_eigpair(const SymMatrix& m, const PrecisionConfig& cfg);

struct PsdResult {
  bool pass = false;
  Real min_eigenvalue;
  Vector witness;  // min eigenvector when !pass
};

// pass iff lambda_min >= -psd_tolerance * (1 + ||M||_inf).
PsdResult psd_test(const SymMatrix& m, const PrecisionConfig& cfg);

// psd_test applied to D M D with D = diag(M_ii^-1/2). Congruence preserves
// inertia, and the witness is mapped back (C = D v) so it violates M itself.
// A nonpositive diagonal entry fails immediately with the coordinate axis as
// witness.
PsdResult psd_test_equilibrated(const SymMatrix& m, const PrecisionConfig& cfg);

// ---------------------------------------------------------------------------
// Linear feasibility.

// coeffs . x < bound
struct LinearCut {
  Vector coeffs;
  Real bound;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<LinearCut> cuts;
  Vector lower;
  Vector upper;

  void validate() const;
};

enum class LpStatus { Feasible, Infeasible, Undetermined };

// Nonnegative multipliers over the normalised rows (cut_k / ||cut_k||, and
// the unit box faces), summing to one. The weighted row combination
// vanishes in x and the weighted bounds sum to `value`, so no point can have
// every normalised slack above `value`.
struct LpCertificate {
  Vector cut_weights;
  Vector lower_weights;
  Vector upper_weights;
  Real value;
};

struct LpResult {
  LpStatus status = LpStatus::Undetermined;
  Vector point;  // Chebyshev centre (the optimum even when infeasible)
  Real slack;    // minimum normalised slack at `point`
  LpCertificate certificate;
  int pivots = 0;
};

// Chebyshev centre of {x : cuts, lower <= x <= upper}: maximises the minimum
// normalised slack over cuts and box faces. Feasible iff that slack exceeds
// lp_tolerance; otherwise Infeasible with a certificate.
LpResult lp_feasible_point(const LinearProgram& lp, const PrecisionConfig& cfg);

// Checks a certificate against the program: multipliers nonnegative, row
// combination ~ 0, and value <= lp_tolerance.
bool certificate_is_valid(const LinearProgram& lp, const LpCertificate& cert,
                          const PrecisionConfig& cfg);

// Incremental Chebyshev-centre solver. Cuts are appended between solves and
// the previous optimal basis is reused, so a cutting-plane loop pays only
// for the pivots its new cut causes.
//
// Internally it runs a two-phase revised simplex on the dual
//   min sum_k y_k b_k  s.t.  sum_k y_k a_k = 0, sum_k y_k = 1, y >= 0
// whose columns are the normalised rows (a_k, b_k). The equality duals of
// the optimum are the primal centre (x, t).
class ChebyshevLp {
 public:
  ChebyshevLp(Vector lower, Vector upper, const PrecisionConfig& cfg);

  std::size_t num_vars() const { return n_; }
  std::size_t num_cuts() const { return num_cuts_; }

  // Adds coeffs . x < bound. A constant cut (zero coefficients) is dropped
  // when its bound is positive and otherwise makes the program infeasible.
  void add_cut(const LinearCut& cut);

  LpResult solve();

 private:
  struct Column {
    Vector a;  // normalised row, length n
    Real cost;
    Real norm;
    enum class Origin { Cut, Lower, Upper } origin;
    std::size_t index;
  };

  void add_column(Column col);
  void pivot(std::size_t row, std::size_t col, const Vector& direction);
  Vector basis_times(std::size_t col) const;  // B^-1 [a; 1]
  void reinvert();
  bool phase_one();
  bool phase_two(int pivot_cap, int& pivots);
  LpResult extract(LpStatus status, int pivots) const;

  std::size_t n_;
  PrecisionConfig cfg_;
  std::vector<Column> columns_;
  std::size_t num_cuts_ = 0;
  std::optional<std::size_t> contradiction_;
  // Basis over n+1 rows. Entries >= columns_.size() denote artificials.
  std::vector<std::size_t> basis_;
  std::vector<Vector> binv_;  // (n+1) x (n+1), row-major
  Vector xb_;
  bool have_basis_ = false;
  int pivots_since_reinvert_ = 0;
  Real tiny_;
};

}  // namespace emm
