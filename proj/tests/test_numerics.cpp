#include "emm/numerics.hpp"

#include <doctest.h>

#include <random>

using namespace emm;

namespace {

const PrecisionConfig kCfg = PrecisionConfig::for_bits(256);

SymMatrix hilbert(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = Real(1) / Real(i + j + 1);
  return m;
}

// Q diag(values) Q^T with Q from Gram-Schmidt on random vectors.
SymMatrix with_spectrum(const Vector& values, std::mt19937_64& rng) {
  const std::size_t n = values.size();
  std::normal_distribution<double> normal;
  std::vector<Vector> q;
  while (q.size() < n) {
    Vector v(n);
    for (Real& x : v) x = normal(rng);
    for (const Vector& u : q) {
      Real d = 0;
      for (std::size_t i = 0; i < n; ++i) d += u[i] * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * u[i];
    }
    Real norm = 0;
    for (const Real& x : v) norm += x * x;
    norm = sqrt(norm);
    if (norm < 1e-3) continue;
    for (Real& x : v) x /= norm;
    q.push_back(std::move(v));
  }
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      Real s = 0;
      for (std::size_t k = 0; k < n; ++k) s += q[k][i] * values[k] * q[k][j];
      m(i, j) = s;
    }
  return m;
}

// LDL^T with symmetric diagonal pivoting; PSD iff no pivot drops below
// -tol * (1 + ||M||_inf) and a nonpositive pivot leaves a zero column.
bool cholesky_psd(const SymMatrix& m, const Real& tol) {
  const std::size_t n = m.size();
  std::vector<Vector> a(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  const Real slack = tol * (1 + m.norm_inf());
  std::vector<bool> used(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i] && (piv == n || a[i][i] > a[piv][piv])) piv = i;
    const Real d = a[piv][piv];
    if (d < -slack) return false;
    used[piv] = true;
    if (d <= slack) {
      for (std::size_t i = 0; i < n; ++i)
        if (!used[i] && abs(a[i][piv]) > sqrt(slack)) return false;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!used[j]) a[i][j] -= a[i][piv] * a[piv][j] / d;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("3x3 Hilbert matrix smallest eigenvalue") {
    PrecisionScope scope(kCfg);
    const EigenPair p = symmetric_min_eigpair(hilbert(3), kCfg);
    CHECK(abs(p.value - Real("2.6873403557735292e-3")) < 1e-17);
  }

  TEST_CASE("identity and diagonal spectra") {
    PrecisionScope scope(kCfg);
    const EigenDecomposition d = symmetric_eigen(SymMatrix::diagonal({3, -1, 2}), kCfg);
    REQUIRE(d.values.size() == 3);
    CHECK(d.values[0] == -1);
    CHECK(d.values[1] == 2);
    CHECK(d.values[2] == 3);
    CHECK(psd_test(SymMatrix::identity(4), kCfg).pass);
  }

  TEST_CASE("eigen residual bound on random matrices") {
    PrecisionScope scope(kCfg);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + trial % 8;
      SymMatrix m(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = unif(rng);
      const EigenDecomposition d = symmetric_eigen(m, kCfg);
      const Real bound = Real(kCfg.psd_tolerance) * (1 + m.norm_inf());
      for (std::size_t k = 0; k < n; ++k) {
        const Vector mv = m.multiply(d.vectors[k]);
        for (std::size_t i = 0; i < n; ++i)
          CHECK(abs(mv[i] - d.values[k] * d.vectors[k][i]) <= bound);
        if (k > 0) CHECK(d.values[k - 1] <= d.values[k]);
      }
    }
  }

  TEST_CASE("psd_test agrees with pivoted Cholesky on 1000 matrices") {
    PrecisionScope scope(kCfg);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.05, 3.0);
    std::uniform_int_distribution<int> dim(1, 8), kind(0, 2);
    int psd = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = dim(rng);
      Vector values(n);
      for (Real& v : values) v = unif(rng);
      const int k = kind(rng);
      if (k == 1) values[0] = -unif(rng) / 10;  // indefinite
      if (k == 2) values[0] = 0;                // singular PSD
      const SymMatrix m = with_spectrum(values, rng);
      const bool expected = cholesky_psd(m, Real(kCfg.psd_tolerance));
      const PsdResult r = psd_test(m, kCfg);
      CHECK(r.pass == expected);
      CHECK(r.pass == (k != 1));
      psd += r.pass;
      if (!r.pass) CHECK(m.quadratic_form(r.witness) < 0);
    }
    CHECK(psd > 500);
  }

  TEST_CASE("equilibrated test keeps the inertia and maps the witness back") {
    PrecisionScope scope(kCfg);
    SymMatrix m(2);
    m(0, 0) = Real("1e40");
    m(1, 1) = Real("1e-40");
    m(1, 0) = Real("2");  // det = 1 - 4 < 0
    const PsdResult r = psd_test_equilibrated(m, kCfg);
    CHECK_FALSE(r.pass);
    CHECK(m.quadratic_form(r.witness) < 0);
    m(1, 0) = Real("0.5");
    CHECK(psd_test_equilibrated(m, kCfg).pass);

    SymMatrix neg = SymMatrix::identity(3);
    neg(1, 1) = -1;
    const PsdResult axis = psd_test_equilibrated(neg, kCfg);
    CHECK_FALSE(axis.pass);
    CHECK(neg.quadratic_form(axis.witness) < 0);
  }

  TEST_CASE("LP: no cuts gives the box centre") {
    PrecisionScope scope(kCfg);
    LinearProgram lp{2, {}, {0, 0}, {1, 1}};
    const LpResult r = lp_feasible_point(lp, kCfg);
    REQUIRE(r.status == LpStatus::Feasible);
    CHECK(abs(r.point[0] - Real("0.5")) < 1e-60);
    CHECK(abs(r.point[1] - Real("0.5")) < 1e-60);
  }

  TEST_CASE("LP: x0 + x1 < 0 on the unit box is infeasible with a certificate") {
    PrecisionScope scope(kCfg);
    LinearProgram lp{2, {{{1, 1}, 0}}, {0, 0}, {1, 1}};
    const LpResult r = lp_feasible_point(lp, kCfg);
    REQUIRE(r.status == LpStatus::Infeasible);
    CHECK(certificate_is_valid(lp, r.certificate, kCfg));
  }

  TEST_CASE("LP: x0 < 0.2 on [0,1] gives 0.1") {
    PrecisionScope scope(kCfg);
    LinearProgram lp{1, {{{1}, Real("0.2")}}, {0}, {1}};
    const LpResult r = lp_feasible_point(lp, kCfg);
    REQUIRE(r.status == LpStatus::Feasible);
    CHECK(abs(r.point[0] - Real("0.1")) < 1e-60);
  }

  TEST_CASE("LP: returned points satisfy every cut; certificates refute") {
    PrecisionScope scope(kCfg);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1, 1);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 5;
      LinearProgram lp{n, {}, Vector(n, Real(0)), Vector(n, Real(1))};
      const int cuts = 1 + trial % 12;
      for (int c = 0; c < cuts; ++c) {
        Vector a(n);
        for (Real& x : a) x = unif(rng);
        lp.cuts.push_back({a, Real(unif(rng))});
      }
      const LpResult r = lp_feasible_point(lp, kCfg);
      if (r.status == LpStatus::Feasible) {
        ++feasible;
        for (const LinearCut& c : lp.cuts) {
          Real s = c.bound;
          for (std::size_t i = 0; i < n; ++i) s -= c.coeffs[i] * r.point[i];
          CHECK(s > 0);
        }
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(r.point[i] > 0);
          CHECK(r.point[i] < 1);
        }
      } else if (r.status == LpStatus::Infeasible) {
        ++infeasible;
        CHECK(certificate_is_valid(lp, r.certificate, kCfg));
      }
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
  }

  TEST_CASE("incremental LP matches a fresh solve") {
    PrecisionScope scope(kCfg);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-1, 1);
    const std::size_t n = 3;
    ChebyshevLp inc(Vector(n, Real(0)), Vector(n, Real(1)), kCfg);
    LinearProgram lp{n, {}, Vector(n, Real(0)), Vector(n, Real(1))};
    for (int c = 0; c < 8; ++c) {
      Vector a(n);
      for (Real& x : a) x = unif(rng);
      const LinearCut cut{a, Real(0.3 + unif(rng) / 4)};
      inc.add_cut(cut);
      lp.cuts.push_back(cut);
      const LpResult a1 = inc.solve();
      const LpResult a2 = lp_feasible_point(lp, kCfg);
      CHECK(a1.status == a2.status);
      CHECK(abs(a1.slack - a2.slack) < 1e-50);
    }
  }

  TEST_CASE("precision scope and directed decimal rounding") {
    {
      PrecisionScope scope(256);
      const Real third = Real(1) / 3;
      CHECK(to_decimal(third, 5, Rounding::Down) == "+3.3333e-01");
      CHECK(to_decimal(third, 5, Rounding::Up) == "+3.3334e-01");
      CHECK(parse_real("-2.5e3") == -2500);
      CHECK(effective_bits(256) >= 256);
    }
    PrecisionConfig bad;
    bad.significand_bits = 32;
    CHECK_THROWS_AS(bad.validate(), Error);
  }
}
