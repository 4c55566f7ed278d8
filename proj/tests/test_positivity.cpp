#include "emm/catalog.hpp"
#include "emm/positivity.hpp"
#include "emm/solver.hpp"

#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <random>

using namespace emm;

namespace {

const PrecisionConfig kCfg = PrecisionConfig::for_bits(256);

MomentKey k1(int p) { return {p, 0}; }

NormalizedTable normalized(const ProblemSpec& spec, const Real& e, const Order& order) {
  const ProblemSpec s = for_order(spec, order);
  return normalize(build_table(s.recurrence, e, required_grid(s.family, order), kCfg),
                   s.normalization);
}

MomentMap well_moments(const Real& e, const Order& order) {
  return evaluate_moments(normalized(square_well_boundary({}), e, order), {});
}

}  // namespace

TEST_SUITE("positivity") {
  TEST_CASE("Stieltjes I = 0 forms are [u(0)] and [u(1)]") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = sextic_stieltjes({});
    const NormalizedTable nt = normalized(spec, Real("1.4"), Order::uniform(0));
    const std::vector<AffineForm> forms = assemble_forms(spec, nt, Order::uniform(0));
    REQUIRE(forms.size() == 2);
    CHECK(forms[0].size() == 1);
    CHECK(forms[0].constant(0, 0) == 1);
    CHECK(forms[0].coeffs[0](0, 0) == -1);
    CHECK(forms[0].coeffs[1](0, 0) == -1);
    CHECK(forms[1].constant(0, 0) == 0);
    CHECK(forms[1].coeffs[0](0, 0) == 1);
    CHECK(forms[1].coeffs[1](0, 0) == 0);

    // C = e0 on sigma = 0: coeffs . chi < bound reads chi_1 + chi_2 < 1, i.e. u(0) > 0.
    const Cut cut = cut_from_vector(forms[0], {Real(1)}, Real("1.4"));
    CHECK(cut.coeffs[0] == 1);
    CHECK(cut.coeffs[1] == 1);
    CHECK(cut.bound == 1);
  }

  TEST_CASE("lens I = 0 forms") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = for_order(lens_m0({0.5}), Order::uniform(0));
    const Real e("60");
    const NormalizedTable nt = normalized(spec, e, Order::uniform(0));
    const std::vector<AffineForm> forms = assemble_forms(spec, nt, Order::uniform(0));
    REQUIRE(forms.size() == 4);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0, 0.3);
    Vector chi(nt.free_count);
    for (Real& c : chi) c = unif(rng);
    const MomentMap m = evaluate_moments(nt, chi);
    const Real u00 = m.at({0, 0}), u10 = m.at({1, 0}), u01 = m.at({0, 1});
    CHECK(abs(evaluate_form(forms[0], chi)(0, 0) - u00) < 1e-60);
    CHECK(abs(evaluate_form(forms[1], chi)(0, 0) - u10) < 1e-60);
    CHECK(abs(evaluate_form(forms[2], chi)(0, 0) - u01) < 1e-60);
    CHECK(abs(evaluate_form(forms[3], chi)(0, 0) - (u00 - u10 - u01)) < 1e-60);
  }

  TEST_CASE("evaluate_form is affine") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = sextic_stieltjes({});
    const NormalizedTable nt = normalized(spec, Real("1.43"), Order::uniform(3));
    const std::vector<AffineForm> forms = assemble_forms(spec, nt, Order::uniform(3));
    const Vector zero(2, Real(0)), a{Real("0.2"), Real("0.3")}, b{Real("0.1"), Real("-0.4")};
    const Vector ab{a[0] + b[0], a[1] + b[1]};
    for (const AffineForm& f : forms) {
      const SymMatrix m0 = evaluate_form(f, zero), ma = evaluate_form(f, a),
                      mb = evaluate_form(f, b), mab = evaluate_form(f, ab);
      for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          CHECK(m0(i, j) == f.constant(i, j));
          CHECK(abs(mab(i, j) - (ma(i, j) + mb(i, j) - m0(i, j))) <= 1e-60 * (1 + abs(m0(i, j))));
        }
    }
  }

  TEST_CASE("a cut from a failing witness is violated at the failing point") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = sextic_stieltjes({});
    const Real e("2.5");
    const NormalizedTable nt = normalized(spec, e, Order::uniform(3));
    const std::vector<AffineForm> forms = assemble_forms(spec, nt, Order::uniform(3));
    const Vector chi{Real("0.3"), Real("0.3")};
    int violated = 0;
    for (const AffineForm& f : forms) {
      const PsdResult r = psd_test(evaluate_form(f, chi), kCfg);
      if (r.pass) continue;
      const Cut cut = cut_from_vector(f, r.witness, e);
      CHECK(cut.margin(chi) <= 0);
      CHECK(abs(cut.margin(chi) - evaluate_form(f, chi).quadratic_form(r.witness)) < 1e-50);
      ++violated;
    }
    CHECK(violated > 0);
  }

  TEST_CASE("cuts rebuilt at doubled precision agree") {
    const Vector c{Real("0.6"), Real("-0.8"), Real("0.1")};
    std::vector<Cut> cuts;
    for (unsigned bits : {256u, 512u}) {
      const PrecisionConfig cfg = PrecisionConfig::for_bits(bits);
      PrecisionScope scope(cfg);
      const ProblemSpec spec = sextic_stieltjes({});
      const ProblemSpec s = for_order(spec, Order::uniform(2));
      const NormalizedTable nt = normalize(
          build_table(s.recurrence, Real("1.43"), required_grid(s.family, Order::uniform(2)), cfg));
      const std::vector<AffineForm> forms = assemble_forms(s, nt, Order::uniform(2));
      Vector cc;
      for (const Real& x : c) cc.push_back(Real(x));
      cuts.push_back(cut_from_vector(forms[1], cc, Real("1.43")));
    }
    PrecisionScope scope(kCfg);
    CHECK(abs(cuts[0].bound - cuts[1].bound) < 1e-60);
    for (std::size_t l = 0; l < cuts[0].coeffs.size(); ++l)
      CHECK(abs(cuts[0].coeffs[l] - cuts[1].coeffs[l]) < 1e-60);
  }

  TEST_CASE("square-well chain: E = 1.5 fails u(1) > 0 at I = 0") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = square_well_boundary({});
    const ChainResult r = determinant_chain(well_moments(Real("1.5"), Order::uniform(0)), spec,
                                            Order::uniform(0), kCfg);
    CHECK_FALSE(r.pass);
    CHECK(r.failed_sigma == 1);
    CHECK(r.failed_index == 0);
    CHECK(r.sigmas[0].passed[0]);
    CHECK(r.sigmas[2].passed[0]);
    CHECK(r.merit() < 0);
  }

  TEST_CASE("square-well chain passes inside the bounds and fails at E = 3") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = square_well_boundary({});
    const ChainResult in = determinant_chain(well_moments(Real("2.4674011"), Order::budget(6)),
                                             spec, Order::budget(6), kCfg);
    CHECK(in.pass);
    CHECK(in.merit() > 0);
    const ChainResult out = determinant_chain(well_moments(Real(3), Order::uniform(3)), spec,
                                              Order::uniform(3), kCfg);
    CHECK_FALSE(out.pass);
    CHECK(out.failed_sigma <= 2);
    CHECK(out.failed_index <= 3);
  }

  TEST_CASE("determinant chain agrees with the eigenvalue test on 200 energies") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = square_well_boundary({});
    const Real pi = boost::math::constants::pi<Real>();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> wide(0.5, 40.0), near(-1e-6, 1e-6);
    int passes = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Order order = Order::uniform(trial % 4);
      // A quarter of the energies sit close to the ground state so both
      // outcomes occur at every order.
      const Real e = trial % 4 == 0 ? Real(pi * pi / 4 + near(rng)) : Real(wide(rng));
      const MomentMap m = well_moments(e, order);
      const ChainResult chain = determinant_chain(m, spec, order, kCfg);
      bool eigen_pass = true;
      for (const SymMatrix& mat : moment_matrices(m, spec, order))
        eigen_pass = eigen_pass && psd_test_equilibrated(mat, kCfg).pass;
      CHECK(chain.pass == eigen_pass);
      passes += chain.pass;
    }
    CHECK(passes > 0);
    CHECK(passes < 200);
  }

  TEST_CASE("Hausdorff witnesses keep L^2 u(i) > u(i+1)") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = square_well_boundary({});
    const MomentMap m = well_moments(Real("2.4674011"), Order::budget(6));
    for (int i = 0; i < 6; ++i) CHECK(m.at(k1(i)) > m.at(k1(i + 1)));
  }
}
