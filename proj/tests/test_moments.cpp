#include "emm/catalog.hpp"
#include "emm/error.hpp"
#include "emm/oracles.hpp"

#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <random>

using namespace emm;

namespace {

const PrecisionConfig kCfg = PrecisionConfig::for_bits(256);

MomentKey k1(int p) { return {p, 0}; }

CoefficientTable table_for(const ProblemSpec& spec, const Real& e, const Order& order) {
  const ProblemSpec s = for_order(spec, order);
  return build_table(s.recurrence, e, required_grid(s.family, order), kCfg);
}

// divisor * u(a + target) - sum_j c_j u(a + offset_j) - inhomogeneity, per
// basis column, for every anchor whose target lies in the table.
void check_recurrence(const RecurrenceSpec& r, const CoefficientTable& t) {
  for (const auto& [key, row] : t.rows) {
    const std::optional<MomentKey> anchor = r.anchor_for(key);
    if (!anchor) continue;
    const Real d = r.divisor.evaluate(*anchor, t.energy, r.params);
    for (std::size_t l = 0; l < t.basis_size; ++l) {
      Real residual = d * row[l];
      Real scale = abs(residual);
      for (const SourceTerm& s : r.sources) {
        const MomentKey src = *anchor + s.offset;
        if (!src.nonnegative()) continue;
        const Real c = s.coefficient.evaluate(*anchor, t.energy, r.params);
        if (c == 0) continue;
        residual -= c * t.row(src)[l];
        scale += abs(c * t.row(src)[l]);
      }
      if (r.inhomogeneous && l == 0)
        residual -= r.inhomogeneity.evaluate(*anchor, t.energy, r.params);
      CHECK(abs(residual) <= Real("1e-60") * (1 + scale));
    }
  }
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("Stieltjes sextic: identity rows and the rho = 0 recurrence row") {
    PrecisionScope scope(kCfg);
    const ProblemSpec spec = sextic_stieltjes({});
    const Real e("1.7");
    const CoefficientTable t = table_for(spec, e, Order::uniform(2));
    REQUIRE(t.basis_size == 3);
    const Vector& r1 = t.row(k1(1));
    CHECK(r1[0] == 0);
    CHECK(r1[1] == 1);
    CHECK(r1[2] == 0);
    const Vector& r3 = t.row(k1(3));
    CHECK(abs(r3[0] - e) < 1e-70);
    CHECK(r3[1] == -1);
    CHECK(r3[2] == 0);
  }

  TEST_CASE("lens p = q = 1 row") {
    PrecisionScope scope(kCfg);
    const double b = 0.5;
    const ProblemSpec spec = for_order(lens_m0({b}), Order::uniform(1));
    const Real e("60");
    const CoefficientTable t = table_for(spec, e, Order::uniform(1));
    const Real r1sq = pow((1 - Real(b) * b) / (2 * Real(b)), 2);
    Vector expected(t.basis_size, Real(0));
    const auto col = [&](int p, int q) { return *spec.recurrence.basis_index({p, q}); };
    expected[col(0, 1)] += Real(-4) / e * Real("-4.5");
    expected[col(0, 0)] += Real(-4) / e * (-2 * r1sq);
    expected[col(1, 0)] += Real(-4) / e * Real("1.5");
    const Vector& row = t.row({1, 1});
    for (std::size_t l = 0; l < t.basis_size; ++l) CHECK(abs(row[l] - expected[l]) < 1e-60);
  }

  TEST_CASE("every catalog recurrence holds on its generated table") {
    PrecisionScope scope(kCfg);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.7, 40.0);
    for (const std::string& label : problem_labels()) {
      const ProblemSpec spec = make_problem(label, {});
      const Order order = spec.family.dimension == 2 ? Order::uniform(2) : Order::uniform(4);
      for (int trial = 0; trial < 3; ++trial) {
        const Real e(unif(rng));
        const ProblemSpec s = for_order(spec, order);
        check_recurrence(s.recurrence, table_for(spec, e, order));
      }
    }
  }

  TEST_CASE("normalize: simplex elimination of chi_0") {
    PrecisionScope scope(kCfg);
    CoefficientTable t;
    t.energy = 1;
    t.basis_size = 3;
    t.rows[k1(0)] = {Real(1), Real(0), Real(0)};
    t.rows[k1(5)] = {Real(2), Real(7), Real(-3)};
    const NormalizedTable nt = normalize(t);
    REQUIRE(nt.free_count == 2);
    CHECK(nt.row(k1(5)).constant == 2);
    CHECK(nt.row(k1(5)).coeffs[0] == 5);
    CHECK(nt.row(k1(5)).coeffs[1] == -5);
    CHECK(nt.row(k1(0)).constant == 1);
    CHECK(nt.row(k1(0)).coeffs[0] == -1);
    CHECK(nt.row(k1(0)).coeffs[1] == -1);
  }

  TEST_CASE("normalized evaluation agrees with direct evaluation on the simplex") {
    PrecisionScope scope(kCfg);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0, 1);
    const ProblemSpec spec = sextic_stieltjes({});
    const CoefficientTable t = table_for(spec, Real("1.4"), Order::uniform(4));
    const NormalizedTable nt = normalize(t);
    for (int trial = 0; trial < 20; ++trial) {
      Vector x(t.basis_size);
      Real sum = 0;
      for (Real& v : x) sum += (v = unif(rng));
      for (Real& v : x) v /= sum;
      const MomentMap m = evaluate_moments(nt, Vector(x.begin() + 1, x.end()));
      for (const auto& [key, row] : t.rows) {
        Real direct = 0;
        for (std::size_t l = 0; l < row.size(); ++l) direct += row[l] * x[l];
        CHECK(abs(m.at(key) - direct) <= Real("1e-60") * (1 + abs(direct)));
      }
    }
    const MomentMap zero = evaluate_moments(nt, Vector(nt.free_count, Real(0)));
    for (const auto& [key, row] : nt.rows) CHECK(zero.at(key) == row.constant);
  }

  TEST_CASE("boundary-free square well at pi^2/4 reproduces the oracle ratio") {
    PrecisionScope scope(kCfg);
    const Real pi = boost::math::constants::pi<Real>();
    const ProblemSpec spec = square_well_no_boundary({});
    const CoefficientTable t = table_for(spec, pi * pi / 4, Order::uniform(3));
    const NormalizedTable nt = normalize(t, NormalizationKind::FixedConstant);
    CHECK(nt.free_count == 0);
    const std::vector<Real> u = square_well_oracle_moments(6, kCfg);
    for (int rho = 1; rho <= 6; ++rho) {
      const Real ratio = nt.row(k1(rho)).constant / nt.row(k1(0)).constant;
      CHECK(abs(ratio - u[rho] / u[0]) < 1e-20);
    }
  }

  TEST_CASE("errors: zero divisor and ungenerable keys") {
    PrecisionScope scope(kCfg);
    const ProblemSpec nb = square_well_no_boundary({});
    try {
      table_for(nb, Real(0), Order::uniform(1));
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
    const ProblemSpec st = sextic_stieltjes({});
    KeySet keys{k1(0), k1(-2)};
    try {
      build_table(st.recurrence, Real(1), keys, kCfg);
      FAIL("expected a structural error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Structural);
    }
  }

  TEST_CASE("required_grid") {
    const KeySet st = required_grid(ConstraintFamily::stieltjes(), Order::uniform(1));
    CHECK(st == KeySet{k1(0), k1(1), k1(2), k1(3)});

    const KeySet l0 = required_grid(ConstraintFamily::lens(), Order::uniform(0));
    CHECK(l0 == KeySet{{0, 0}, {1, 0}, {0, 1}});

    const KeySet l2 = required_grid(ConstraintFamily::lens(), Order::uniform(2));
    KeySet expected;
    for (int p = 0; p <= 5; ++p)
      for (int q = 0; q <= 5; ++q)
        if (p + q <= 9) expected.insert({p, q});
    CHECK(l2 == expected);

    const KeySet hd = required_grid(ConstraintFamily::hausdorff(), Order::budget(6));
    CHECK(hd.size() == 7);
    CHECK(*hd.rbegin() == k1(6));
  }

  TEST_CASE("every catalog spec generates its required grid") {
    PrecisionScope scope(kCfg);
    for (const std::string& label : problem_labels()) {
      const ProblemSpec spec = make_problem(label, {});
      const int top = spec.family.dimension == 2 ? 3 : 8;
      for (int i = 0; i <= top; ++i) {
        const ProblemSpec s = for_order(spec, Order::uniform(i));
        const KeySet keys = required_grid(s.family, Order::uniform(i));
        const CoefficientTable t = build_table(s.recurrence, Real("3.3"), keys, kCfg);
        for (const MomentKey& k : keys) CHECK(t.rows.count(k) == 1);
      }
    }
  }
}
