#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace emm {

// Variable-precision MPFR scalar. Every number created inside a
// PrecisionScope carries that scope's precision.
using Real = boost::multiprecision::mpfr_float;
using Vector = std::vector<Real>;

struct PrecisionConfig {
  unsigned significand_bits = 256;
  // Relative tolerance for positive semidefiniteness decisions.
  double psd_tolerance = 1e-30;
  // Minimum Chebyshev slack for an LP point to count as strictly feasible.
  double lp_tolerance = 1e-40;

  // Tolerances scaled with the precision (1e-30 / 1e-40 at 256 bits).
  static PrecisionConfig for_bits(unsigned bits);

  void validate() const;
  // Working epsilon, 2^(1-bits).
  Real epsilon() const;
};

// Sets the MPFR default precision for the lifetime of the object. The
// precision is process-global, so scopes must not be interleaved across
// threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned significand_bits);
  explicit PrecisionScope(const PrecisionConfig& cfg)
      : PrecisionScope(cfg.significand_bits) {}
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

// Significand bits actually used by MPFR for a requested bit count.
unsigned effective_bits(unsigned requested_bits);

// Copy of x rounded to the current default precision.
Real at_precision(const Real& x);

enum class Rounding { Nearest, Down, Up };

// Decimal scientific notation with an explicit sign, e.g. "+2.4674e+00".
// Directed rounding is honoured exactly, so Down never exceeds x.
std::string to_decimal(const Real& x, int significant_digits,
                       Rounding mode = Rounding::Nearest);

// Parses a decimal literal at the current default precision.
Real parse_real(std::string_view text);

}  // namespace emm
