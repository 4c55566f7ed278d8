#include "emm/numerics.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace emm {

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Real SymMatrix::norm_inf() const {
  Real best = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    Real row = 0;
    for (std::size_t j = 0; j < n_; ++j) row += abs((*this)(i, j));
    if (row > best) best = row;
  }
  return best;
}

Vector SymMatrix::multiply(const Vector& v) const {
  Vector out(n_, Real(0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

Real SymMatrix::quadratic_form(const Vector& v) const {
  Real sum = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    sum += (*this)(i, i) * v[i] * v[i];
    for (std::size_t j = 0; j < i; ++j) sum += 2 * (*this)(i, j) * v[i] * v[j];
  }
  return sum;
}

void SymMatrix::add_scaled(const SymMatrix& other, const Real& s) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi.

namespace {

constexpr int kMaxSweeps = 60;

EigenDecomposition sorted_decomposition(std::size_t n, const std::vector<Real>& a,
                                        const std::vector<Real>& v, int sweeps) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  EigenDecomposition out;
  out.sweeps = sweeps;
  for (std::size_t k : order) {
    out.values.push_back(a[k * n + k]);
    Vector col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

}  // namespace

EigenDecomposition symmetric_eigen(const SymMatrix& m, const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::Config, "eigen-solve of an empty matrix");

  std::vector<Real> a(n * n), v(n * n, Real(0));
  Real fro = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i * n + i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = at_precision(m(i, j));
      fro += a[i * n + j] * a[i * n + j];
    }
  }
  fro = sqrt(fro);
  const Real eps = cfg.epsilon();
  const Real threshold = eps * fro;

  Real g, h, theta, t, c, s, tau;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Real off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (sqrt(off) <= threshold) return sorted_decomposition(n, a, v, sweep);

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = a[p * n + q];
        if (apq == 0) continue;
        const Real& app = a[p * n + p];
        const Real& aqq = a[q * n + q];
        if (abs(apq) <= eps * (abs(app) + abs(aqq)) / 4) {
          a[p * n + q] = 0;
          a[q * n + p] = 0;
          continue;
        }
        theta = (aqq - app) / (2 * apq);
        t = 1 / (abs(theta) + sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        c = 1 / sqrt(t * t + 1);
        s = t * c;
        tau = s / (1 + c);

        a[p * n + p] -= t * apq;
        a[q * n + q] += t * apq;
        a[p * n + q] = 0;
        a[q * n + p] = 0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          g = a[r * n + p];
          h = a[r * n + q];
          a[r * n + p] = g - s * (h + g * tau);
          a[r * n + q] = h + s * (g - h * tau);
          a[p * n + r] = a[r * n + p];
          a[q * n + r] = a[r * n + q];
        }
        for (std::size_t r = 0; r < n; ++r) {
          g = v[r * n + p];
          h = v[r * n + q];
          v[r * n + p] = g - s * (h + g * tau);
          v[r * n + q] = h + s * (g - h * tau);
        }
      }
    }
  }

  EigenDecomposition partial = sorted_decomposition(n, a, v, kMaxSweeps);
  throw EigenNonConvergence(
      "Jacobi eigen-solve did not converge after " + std::to_string(kMaxSweeps) + " sweeps",
      EigenPair{partial.values.front(), partial.vectors.front()});
}

EigenPair symmetric_min_eigpair(const SymMatrix& m, const PrecisionConfig& cfg) {
  EigenDecomposition d = symmetric_eigen(m, cfg);
  return EigenPair{std::move(d.values.front()), std::move(d.vectors.front())};
}

PsdResult psd_test(const SymMatrix& m, const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  EigenPair pair = symmetric_min_eigpair(m, cfg);
  const Real limit = -Real(cfg.psd_tolerance) * (1 + m.norm_inf());
  PsdResult r;
  r.pass = pair.value >= limit;
  r.min_eigenvalue = std::move(pair.value);
  if (!r.pass) r.witness = std::move(pair.vector);
  return r;
}

PsdResult psd_test_equilibrated(const SymMatrix& m, const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  const std::size_t n = m.size();
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) <= 0) {
      PsdResult r;
      r.pass = false;
      r.min_eigenvalue = m(i, i);
      r.witness.assign(n, Real(0));
      r.witness[i] = 1;
      return r;
    }
    d[i] = 1 / sqrt(m(i, i));
  }
  SymMatrix scaled(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) scaled(i, j) = d[i] * m(i, j) * d[j];
  PsdResult r = psd_test(scaled, cfg);
  if (!r.pass)
    for (std::size_t i = 0; i < n; ++i) r.witness[i] *= d[i];
  return r;
}

// ---------------------------------------------------------------------------
// Linear feasibility.

void LinearProgram::validate() const {
  if (lower.size() != num_vars || upper.size() != num_vars)
    throw Error(ErrorKind::Config, "LP box size does not match variable count");
  for (std::size_t i = 0; i < num_vars; ++i)
    if (!(lower[i] < upper[i]))
      throw Error(ErrorKind::Config, "LP box lower bound must be below upper bound");
  for (const LinearCut& c : cuts)
    if (c.coeffs.size() != num_vars)
      throw Error(ErrorKind::Config, "LP cut length does not match variable count");
}

namespace {

constexpr std::size_t kArtificial = std::size_t{1} << 62;
constexpr int kReinvertEvery = 40;
constexpr int kBlandAfterDegenerate = 30;

bool is_artificial(std::size_t id) { return id >= kArtificial; }

}  // namespace

ChebyshevLp::ChebyshevLp(Vector lower, Vector upper, const PrecisionConfig& cfg)
    : n_(lower.size()), cfg_(cfg) {
  cfg_.validate();
  PrecisionScope scope(cfg_);
  if (upper.size() != n_) throw Error(ErrorKind::Config, "LP box bounds differ in length");
  // Working-precision noise floor for pivots and reduced costs.
  tiny_ = pow(cfg_.epsilon(), Real(3) / 4);
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(lower[i] < upper[i]))
      throw Error(ErrorKind::Config, "LP box lower bound must be below upper bound");
    Column up{Vector(n_, Real(0)), at_precision(upper[i]), Real(1), Column::Origin::Upper, i};
    up.a[i] = 1;
    add_column(std::move(up));
    Column lo{Vector(n_, Real(0)), -at_precision(lower[i]), Real(1), Column::Origin::Lower, i};
    lo.a[i] = -1;
    add_column(std::move(lo));
  }
}

void ChebyshevLp::add_cut(const LinearCut& cut) {
  PrecisionScope scope(cfg_);
  if (cut.coeffs.size() != n_)
    throw Error(ErrorKind::Config, "LP cut length does not match variable count");
  const std::size_t index = num_cuts_++;
  Real norm = 0;
  for (const Real& x : cut.coeffs) norm += x * x;
  norm = sqrt(norm);
  const Real bound = at_precision(cut.bound);
  if (norm <= tiny_ * (1 + abs(bound))) {
    // 0 < bound: vacuous when positive, a contradiction otherwise.
    if (bound <= Real(cfg_.lp_tolerance) && !contradiction_) contradiction_ = index;
    return;
  }
  Column col{Vector(n_), bound / norm, norm, Column::Origin::Cut, index};
  for (std::size_t i = 0; i < n_; ++i) col.a[i] = cut.coeffs[i] / norm;
  add_column(std::move(col));
}

void ChebyshevLp::add_column(Column col) { columns_.push_back(std::move(col)); }

Vector ChebyshevLp::basis_times(std::size_t id) const {
  const std::size_t m = n_ + 1;
  Vector w(m, Real(0));
  if (is_artificial(id)) {
    const std::size_t r = id - kArtificial;
    for (std::size_t i = 0; i < m; ++i) w[i] = binv_[i][r];
    return w;
  }
  const Column& col = columns_[id];
  for (std::size_t i = 0; i < m; ++i) {
    Real s = binv_[i][n_];
    for (std::size_t k = 0; k < n_; ++k)
      if (col.a[k] != 0) s += binv_[i][k] * col.a[k];
    w[i] = std::move(s);
  }
  return w;
}

void ChebyshevLp::pivot(std::size_t row, std::size_t id, const Vector& w) {
  const std::size_t m = n_ + 1;
  const Real piv = w[row];
  for (std::size_t k = 0; k < m; ++k) binv_[row][k] /= piv;
  xb_[row] /= piv;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == row || w[i] == 0) continue;
    const Real f = w[i];
    for (std::size_t k = 0; k < m; ++k) binv_[i][k] -= f * binv_[row][k];
    xb_[i] -= f * xb_[row];
  }
  basis_[row] = id;
  if (++pivots_since_reinvert_ >= kReinvertEvery) reinvert();
}

void ChebyshevLp::reinvert() {
  pivots_since_reinvert_ = 0;
  const std::size_t m = n_ + 1;
  // Gauss-Jordan on [B | I].
  std::vector<Vector> b(m, Vector(2 * m, Real(0)));
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t id = basis_[j];
    if (is_artificial(id)) {
      b[id - kArtificial][j] = 1;
    } else {
      for (std::size_t k = 0; k < n_; ++k) b[k][j] = columns_[id].a[k];
      b[n_][j] = 1;
    }
  }
  for (std::size_t i = 0; i < m; ++i) b[i][m + i] = 1;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (abs(b[r][c]) > abs(b[best][c])) best = r;
    if (b[best][c] == 0) return;  // keep the product-form inverse
    std::swap(b[best], b[c]);
    const Real piv = b[c][c];
    for (std::size_t k = 0; k < 2 * m; ++k) b[c][k] /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || b[r][c] == 0) continue;
      const Real f = b[r][c];
      for (std::size_t k = 0; k < 2 * m; ++k) b[r][k] -= f * b[c][k];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) binv_[i][k] = b[i][m + k];
    xb_[i] = binv_[i][n_];
  }
}

namespace {

// Entering-column rule shared by both phases: Dantzig by default, Bland
// (lowest index) once degenerate pivots start to repeat.
template <class ReducedCost>
std::size_t choose_entering(std::size_t count, const std::vector<bool>& in_basis,
                            const Real& tol, bool bland, ReducedCost&& reduced) {
  std::size_t best = count;
  Real best_value = -tol;
  for (std::size_t j = 0; j < count; ++j) {
    if (in_basis[j]) continue;
    Real d = reduced(j);
    if (d < best_value) {
      best = j;
      if (bland) break;
      best_value = std::move(d);
    }
  }
  return best;
}

}  // namespace

bool ChebyshevLp::phase_one() {
  const std::size_t m = n_ + 1;
  basis_.assign(m, 0);
  binv_.assign(m, Vector(m, Real(0)));
  xb_.assign(m, Real(0));
  for (std::size_t i = 0; i < m; ++i) {
    basis_[i] = kArtificial + i;
    binv_[i][i] = 1;
  }
  xb_[n_] = 1;
  pivots_since_reinvert_ = 0;

  int degenerate = 0;
  for (int iter = 0; iter < 50 * static_cast<int>(columns_.size() + m) + 100; ++iter) {
    // Phase-one duals: cost 1 on artificials.
    Vector pi(m, Real(0));
    for (std::size_t i = 0; i < m; ++i)
      if (is_artificial(basis_[i]))
        for (std::size_t k = 0; k < m; ++k) pi[k] += binv_[i][k];
    std::vector<bool> in_basis(columns_.size(), false);
    for (std::size_t id : basis_)
      if (!is_artificial(id)) in_basis[id] = true;
    const std::size_t enter = choose_entering(
        columns_.size(), in_basis, tiny_, degenerate > kBlandAfterDegenerate,
        [&](std::size_t j) {
          Real d = -pi[n_];
          for (std::size_t k = 0; k < n_; ++k) d -= pi[k] * columns_[j].a[k];
          return d;
        });
    if (enter == columns_.size()) break;
    const Vector w = basis_times(enter);
    std::size_t leave = m;
    Real ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (w[i] <= tiny_) continue;
      Real r = xb_[i] / w[i];
      if (leave == m || r < ratio || (r == ratio && basis_[i] < basis_[leave])) {
        leave = i;
        ratio = std::move(r);
      }
    }
    if (leave == m) return false;
    degenerate = (ratio == 0) ? degenerate + 1 : 0;
    pivot(leave, enter, w);
  }

  Real infeasibility = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (is_artificial(basis_[i])) infeasibility += xb_[i];
  if (infeasibility > tiny_) return false;

  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_artificial(basis_[i])) continue;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
      const Vector w = basis_times(j);
      if (abs(w[i]) > tiny_) {
        pivot(i, j, w);
        break;
      }
    }
  }
  return true;
}

bool ChebyshevLp::phase_two(int pivot_cap, int& pivots) {
  const std::size_t m = n_ + 1;
  int degenerate = 0;
  while (pivots < pivot_cap) {
    Vector pi(m, Real(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (is_artificial(basis_[i])) continue;
      const Real& c = columns_[basis_[i]].cost;
      for (std::size_t k = 0; k < m; ++k) pi[k] += c * binv_[i][k];
    }
    std::vector<bool> in_basis(columns_.size(), false);
    for (std::size_t id : basis_)
      if (!is_artificial(id)) in_basis[id] = true;
    const std::size_t enter = choose_entering(
        columns_.size(), in_basis, tiny_, degenerate > kBlandAfterDegenerate,
        [&](std::size_t j) {
          Real d = columns_[j].cost - pi[n_];
          for (std::size_t k = 0; k < n_; ++k) d -= pi[k] * columns_[j].a[k];
          return d;
        });
    if (enter == columns_.size()) return true;
    const Vector w = basis_times(enter);
    std::size_t leave = m;
    Real ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (w[i] <= tiny_) continue;
      Real r = xb_[i] / w[i];
      if (r < 0) r = 0;
      if (leave == m || r < ratio || (r == ratio && basis_[i] < basis_[leave])) {
        leave = i;
        ratio = std::move(r);
      }
    }
    if (leave == m) return false;  // dual unbounded: cannot happen with a box
    degenerate = (ratio == 0) ? degenerate + 1 : 0;
    pivot(leave, enter, w);
    ++pivots;
  }
  return false;
}

LpResult ChebyshevLp::extract(LpStatus status, int pivots) const {
  const std::size_t m = n_ + 1;
  LpResult r;
  r.status = status;
  r.pivots = pivots;
  Vector pi(m, Real(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (is_artificial(basis_[i])) continue;
    const Real& c = columns_[basis_[i]].cost;
    for (std::size_t k = 0; k < m; ++k) pi[k] += c * binv_[i][k];
  }
  r.point.assign(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(n_));
  r.slack = pi[n_];

  LpCertificate& cert = r.certificate;
  cert.cut_weights.assign(num_cuts_, Real(0));
  cert.lower_weights.assign(n_, Real(0));
  cert.upper_weights.assign(n_, Real(0));
  Real total = 0, value = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (is_artificial(basis_[i]) || xb_[i] <= 0) continue;
    const Column& col = columns_[basis_[i]];
    total += xb_[i];
    value += xb_[i] * col.cost;
    switch (col.origin) {
      case Column::Origin::Cut: cert.cut_weights[col.index] += xb_[i]; break;
      case Column::Origin::Lower: cert.lower_weights[col.index] += xb_[i]; break;
      case Column::Origin::Upper: cert.upper_weights[col.index] += xb_[i]; break;
    }
  }
  if (total > 0) {
    for (Real& x : cert.cut_weights) x /= total;
    for (Real& x : cert.lower_weights) x /= total;
    for (Real& x : cert.upper_weights) x /= total;
    value /= total;
  }
  cert.value = value;
  return r;
}

LpResult ChebyshevLp::solve() {
  PrecisionScope scope(cfg_);
  if (contradiction_) {
    LpResult r;
    r.status = LpStatus::Infeasible;
    r.point.assign(n_, Real(0));
    r.slack = 0;
    r.certificate.cut_weights.assign(num_cuts_, Real(0));
    r.certificate.cut_weights[*contradiction_] = 1;
    r.certificate.lower_weights.assign(n_, Real(0));
    r.certificate.upper_weights.assign(n_, Real(0));
    r.certificate.value = 0;
    return r;
  }
  if (columns_.empty()) {
    // No variables and no constraints: the empty point, unboundedly central.
    LpResult r;
    r.status = LpStatus::Feasible;
    r.slack = std::numeric_limits<Real>::infinity();
    r.certificate.cut_weights.assign(num_cuts_, Real(0));
    return r;
  }

  int pivots = 0;
  if (!have_basis_) {
    if (!phase_one()) {
      LpResult r;
      r.status = LpStatus::Undetermined;
      r.point.assign(n_, Real(0));
      r.slack = 0;
      return r;
    }
    have_basis_ = true;
  }
  const int cap = 50 * static_cast<int>(columns_.size() + n_ + 1) + 200;
  if (!phase_two(cap, pivots)) {
    have_basis_ = false;
    return extract(LpStatus::Undetermined, pivots);
  }
  LpResult r = extract(LpStatus::Undetermined, pivots);
  r.status = r.slack > Real(cfg_.lp_tolerance) ? LpStatus::Feasible : LpStatus::Infeasible;
  return r;
}

LpResult lp_feasible_point(const LinearProgram& lp, const PrecisionConfig& cfg) {
  lp.validate();
  ChebyshevLp solver(lp.lower, lp.upper, cfg);
  for (const LinearCut& c : lp.cuts) solver.add_cut(c);
  return solver.solve();
}

bool certificate_is_valid(const LinearProgram& lp, const LpCertificate& cert,
                          const PrecisionConfig& cfg) {
  PrecisionScope scope(cfg);
  const std::size_t n = lp.num_vars;
  if (cert.cut_weights.size() != lp.cuts.size() || cert.lower_weights.size() != n ||
      cert.upper_weights.size() != n)
    return false;
  const Real tol = pow(cfg.epsilon(), Real(1) / 2);
  Vector combo(n, Real(0));
  Real weight = 0, value = 0;
  for (std::size_t k = 0; k < lp.cuts.size(); ++k) {
    const Real& w = cert.cut_weights[k];
    if (w < 0) return false;
    if (w == 0) continue;
    Real norm = 0;
    for (const Real& x : lp.cuts[k].coeffs) norm += x * x;
    norm = sqrt(norm);
    if (norm == 0) norm = 1;
    for (std::size_t i = 0; i < n; ++i) combo[i] += w * lp.cuts[k].coeffs[i] / norm;
    value += w * lp.cuts[k].bound / norm;
    weight += w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cert.lower_weights[i] < 0 || cert.upper_weights[i] < 0) return false;
    combo[i] += cert.upper_weights[i] - cert.lower_weights[i];
    value += cert.upper_weights[i] * lp.upper[i] - cert.lower_weights[i] * lp.lower[i];
    weight += cert.upper_weights[i] + cert.lower_weights[i];
  }
  if (abs(weight - 1) > tol) return false;
  for (const Real& x : combo)
    if (abs(x) > tol) return false;
  return value <= Real(cfg.lp_tolerance) + pow(cfg.epsilon(), Real(3) / 4);
}

}  // namespace emm
