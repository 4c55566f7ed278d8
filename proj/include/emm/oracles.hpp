#pragma once

#include "emm/real.hpp"

#include <vector>

namespace emm {

// Moments u(rho), rho = 0..rho_max, of the square-well ground state
// cos(pi x / 2) on [0, 1] scaled so that u(0) = 4 / pi^2:
//   u(rho) = (2 / pi) int_0^1 x^(2 rho) cos(pi x / 2) dx.
// Computed by tanh-sinh quadrature at 100 decimal digits.
std::vector<Real> square_well_oracle_moments(int rho_max, const PrecisionConfig& cfg);

// First positive root of j1(k) = sin k / k^2 - cos k / k, by bisection on [4, 5].
Real hemisphere_oracle_root(const PrecisionConfig& cfg);

// k^2: the Dirichlet ground state of the unit hemisphere.
Real hemisphere_oracle_energy(const PrecisionConfig& cfg);

}  // namespace emm
