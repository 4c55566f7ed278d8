#include "emm/oracles.hpp"

#include "emm/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <sstream>

namespace emm {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_100;

Real to_real(const Quad& x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<Quad>::max_digits10) << std::scientific << x;
  return parse_real(os.str());
}

}  // namespace

std::vector<Real> square_well_oracle_moments(int rho_max, const PrecisionConfig& cfg) {
  if (rho_max < 0) throw Error(ErrorKind::Config, "rho_max must be >= 0");
  cfg.validate();
  PrecisionScope scope(cfg);
  const Quad pi = boost::math::constants::pi<Quad>();
  const Quad tol = std::numeric_limits<Quad>::epsilon() * 1000;
  boost::math::quadrature::tanh_sinh<Quad> quad;
  std::vector<Real> out;
  for (int rho = 0; rho <= rho_max; ++rho) {
    Quad error = 0;
    Quad l1 = 0;
    const Quad v = quad.integrate(
        [&](const Quad& x) { return Quad(pow(x, 2 * rho) * cos(pi * x / 2)); }, Quad(0), Quad(1),
        tol, &error, &l1);
    if (!(error <= tol * (1 + l1) * 100))
      throw Error(ErrorKind::Numerical,
                  "square-well oracle quadrature did not converge at rho = " + std::to_string(rho));
    out.push_back(to_real(2 * v / pi));
  }
  return out;
}

Real hemisphere_oracle_root(const PrecisionConfig& cfg) {
  cfg.validate();
  PrecisionScope scope(cfg);
  auto j1 = [](const Real& k) { return Real(sin(k) / (k * k) - cos(k) / k); };
  Real lo = 4, hi = 5;
  const bool lo_negative = j1(lo) < 0;
  for (;;) {
    Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    if ((j1(mid) < 0) == lo_negative)
      lo = std::move(mid);
    else
      hi = std::move(mid);
  }
  return abs(j1(lo)) < abs(j1(hi)) ? lo : hi;
}

Real hemisphere_oracle_energy(const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  const Real k = hemisphere_oracle_root(cfg);
  return k * k;
}

}  // namespace emm
