#include "emm/real.hpp"

#include "emm/error.hpp"

#include <mpfr.h>

#include <cmath>
#include <memory>

namespace emm {

namespace {

unsigned digits10_for_bits(unsigned bits) {
  // Boost converts digits10 back to bits as d*1000/301 + 1 or 2; pick the
  // smallest digits10 whose conversion reaches the requested bit count.
  unsigned d = bits * 301u / 1000u;
  while (boost::multiprecision::detail::digits10_2_2(d) < bits) ++d;
  return d;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Structural: return "structural error";
    case ErrorKind::Numerical: return "numerical failure";
    case ErrorKind::NoFeasible: return "no feasible energy";
    case ErrorKind::MultiInterval: return "multiple feasible intervals";
  }
  return "error";
}

PrecisionConfig PrecisionConfig::for_bits(unsigned bits) {
  PrecisionConfig cfg;
  cfg.significand_bits = bits;
  const double scale = static_cast<double>(bits) / 256.0;
  cfg.psd_tolerance = std::pow(10.0, -30.0 * scale);
  cfg.lp_tolerance = std::pow(10.0, -40.0 * scale);
  return cfg;
}

void PrecisionConfig::validate() const {
  if (significand_bits < 64)
    throw Error(ErrorKind::Config, "significand_bits must be >= 64");
  if (!(psd_tolerance > 0.0 && psd_tolerance < 1.0))
    throw Error(ErrorKind::Config, "psd_tolerance must lie in (0, 1)");
  if (!(lp_tolerance > 0.0 && lp_tolerance < 1.0))
    throw Error(ErrorKind::Config, "lp_tolerance must lie in (0, 1)");
}

Real PrecisionConfig::epsilon() const {
  Real e = 1;
  return ldexp(e, 1 - static_cast<int>(significand_bits));
}

PrecisionScope::PrecisionScope(unsigned significand_bits)
    : saved_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(significand_bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned effective_bits(unsigned requested_bits) {
  return static_cast<unsigned>(
      boost::multiprecision::detail::digits10_2_2(digits10_for_bits(requested_bits)));
}

Real at_precision(const Real& x) {
  Real y(x);
  y.precision(Real::default_precision());
  return y;
}

std::string to_decimal(const Real& x, int significant_digits, Rounding mode) {
  const mpfr_srcptr v = x.backend().data();
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_signbit(v) ? "-inf" : "+inf";
  if (significant_digits < 1) significant_digits = 1;

  mpfr_rnd_t rnd = MPFR_RNDN;
  if (mode == Rounding::Down) rnd = MPFR_RNDD;
  if (mode == Rounding::Up) rnd = MPFR_RNDU;

  if (mpfr_zero_p(v)) {
    std::string out = "+0.";
    out.append(static_cast<std::size_t>(significant_digits - 1), '0');
    if (significant_digits == 1) out.pop_back();
    return out + "e+00";
  }

  mpfr_exp_t exp10 = 0;
  std::unique_ptr<char, void (*)(char*)> digits(
      mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(significant_digits), v, rnd),
      mpfr_free_str);
  std::string s(digits.get());
  std::string sign = "+";
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  // mpfr_get_str returns 0.DDDD * 10^exp10; rewrite as D.DDD * 10^(exp10-1).
  const long e = static_cast<long>(exp10) - 1;
  std::string out = sign + s.substr(0, 1);
  if (s.size() > 1) out += "." + s.substr(1);
  char buf[32];
  std::snprintf(buf, sizeof buf, "e%c%02ld", e < 0 ? '-' : '+', e < 0 ? -e : e);
  return out + buf;
}

Real parse_real(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
  s = s.substr(start);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  Real r;
  if (s.empty() || mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0)
    throw Error(ErrorKind::Config, "not a decimal number: '" + std::string(text) + "'");
  return r;
}

}  // namespace emm
