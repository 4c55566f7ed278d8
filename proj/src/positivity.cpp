#include "emm/positivity.hpp"

#include "emm/error.hpp"

#include <algorithm>
#include <utility>

namespace emm {

std::vector<AffineForm> assemble_forms(const ProblemSpec& spec, const NormalizedTable& table,
                                       const Order& order) {
  const ConstraintFamily& family = spec.family;
  family.validate();
  const std::size_t m = table.free_count;
  std::vector<AffineForm> forms;
  for (std::size_t s = 0; s < family.sigmas.size(); ++s) {
    const SigmaEntry& entry = family.sigmas[s];
    AffineForm form;
    form.sigma = s;
    form.label = entry.label;
    form.row_keys = family.row_keys(s, order);
    const std::size_t n = form.row_keys.size();
    form.constant = SymMatrix(n);
    form.coeffs.assign(m, SymMatrix(n));

    std::vector<Real> weights;
    for (const WeightTerm& t : entry.terms) weights.push_back(spec.weight(t));

    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c <= r; ++c) {
        Real k0 = 0;
        Vector kl(m, Real(0));
        for (std::size_t t = 0; t < entry.terms.size(); ++t) {
          const MomentKey key = form.row_keys[r] + form.row_keys[c] + entry.terms[t].shift;
          const NormalizedRow& row = table.row(key);
          k0 += weights[t] * row.constant;
          for (std::size_t l = 0; l < m; ++l) kl[l] += weights[t] * row.coeffs[l];
        }
        form.constant(r, c) = std::move(k0);
        for (std::size_t l = 0; l < m; ++l) form.coeffs[l](r, c) = std::move(kl[l]);
      }
    }
    forms.push_back(std::move(form));
  }
  return forms;
}

SymMatrix evaluate_form(const AffineForm& form, const Vector& chi) {
  if (chi.size() != form.coeffs.size())
    throw Error(ErrorKind::Config, "chi length does not match the form");
  SymMatrix out = form.constant;
  for (std::size_t l = 0; l < chi.size(); ++l)
    if (chi[l] != 0) out.add_scaled(form.coeffs[l], chi[l]);
  return out;
}

Real Cut::margin(const Vector& chi) const {
  Real v = bound;
  for (std::size_t l = 0; l < coeffs.size(); ++l) v -= coeffs[l] * chi[l];
  return v;
}

Cut cut_from_vector(const AffineForm& form, const Vector& c, const Real& energy) {
  if (c.size() != form.size())
    throw Error(ErrorKind::Config, "cut direction length does not match the form");
  Cut cut;
  cut.sigma = form.sigma;
  cut.direction = c;
  cut.energy = energy;
  cut.bound = form.constant.quadratic_form(c);
  cut.coeffs.reserve(form.coeffs.size());
  for (const SymMatrix& ml : form.coeffs) cut.coeffs.push_back(-ml.quadratic_form(c));
  return cut;
}

std::vector<SymMatrix> moment_matrices(const MomentMap& moments, const ProblemSpec& spec,
                                       const Order& order) {
  const ConstraintFamily& family = spec.family;
  std::vector<SymMatrix> out;
  for (std::size_t s = 0; s < family.sigmas.size(); ++s) {
    const SigmaEntry& entry = family.sigmas[s];
    const std::vector<MomentKey> keys = family.row_keys(s, order);
    SymMatrix m(keys.size());
    for (std::size_t r = 0; r < keys.size(); ++r) {
      for (std::size_t c = 0; c <= r; ++c) {
        Real v = 0;
        for (const WeightTerm& t : entry.terms) {
          const MomentKey key = keys[r] + keys[c] + t.shift;
          auto it = moments.find(key);
          if (it == moments.end())
            throw Error(ErrorKind::Structural,
                        "missing moment " + to_string(key, family.dimension));
          v += spec.weight(t) * it->second;
        }
        m(r, c) = std::move(v);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Determinant of the leading k x k block by partial-pivot elimination.
Real leading_determinant(const SymMatrix& m, std::size_t k) {
  std::vector<Vector> a(k, Vector(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = m(i, j);
  Real det = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0) return Real(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const Real f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (std::size_t j = col + 1; j < k; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

}  // namespace

ChainResult determinant_chain(const MomentMap& moments, const ProblemSpec& spec,
                              const Order& order, const PrecisionConfig& cfg) {
  if (spec.family.dimension != 1)
    throw Error(ErrorKind::Config, "the determinant chain applies to one-dimensional families");
  PrecisionScope scope(cfg);
  const Real tol(cfg.psd_tolerance);
  ChainResult result;
  const std::vector<SymMatrix> mats = moment_matrices(moments, spec, order);
  for (std::size_t s = 0; s < mats.size(); ++s) {
    SigmaChain chain;
    chain.label = spec.family.sigmas[s].label;
    Real scale = 1;
    bool diagonal_ok = true;
    for (std::size_t k = 1; k <= mats[s].size(); ++k) {
      const Real& d = mats[s](k - 1, k - 1);
      diagonal_ok = diagonal_ok && d > 0;
      scale *= abs(d);
      Real det = leading_determinant(mats[s], k);
      const bool ok = diagonal_ok && det > tol * scale;
      if (!ok && result.pass) {
        result.pass = false;
        result.failed_sigma = s;
        result.failed_index = k - 1;
      }
      chain.normalized.push_back(scale > 0 ? Real(det / scale) : Real(-1));
      chain.determinants.push_back(std::move(det));
      chain.passed.push_back(ok);
    }
    result.sigmas.push_back(std::move(chain));
  }
  return result;
}

Real ChainResult::merit() const {
  std::size_t total = 0, longest = 0;
  for (const SigmaChain& c : sigmas) {
    total += c.passed.size();
    longest = std::max(longest, c.passed.size());
  }
  auto squash = [](const Real& r) { return Real(r / (1 + abs(r))); };
  if (pass) {
    Real least = 1;
    for (const SigmaChain& c : sigmas)
      for (const Real& r : c.normalized) least = min(least, r);
    return squash(least);
  }
  std::size_t depth = 0;
  for (std::size_t k = 0; k < longest; ++k) {
    for (const SigmaChain& c : sigmas) {
      if (k >= c.passed.size()) continue;
      if (!c.passed[k]) {
        return Real(static_cast<double>(depth) - static_cast<double>(total)) +
               squash(min(c.normalized[k], Real(0)));
      }
      ++depth;
    }
  }
  return Real(0);
}

}  // namespace emm
