#include "uolab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uolab {

SequenceFamily make_sequence(ModelPtr model, std::vector<Element> terms) {
  if (terms.size() < 2) throw std::invalid_argument("SequenceFamily: horizon must be >= 2");
  for (const Element& t : terms)
    if (!(t.model() == *model)) throw std::invalid_argument("SequenceFamily: model mismatch");
  return {std::move(model), std::move(terms)};
}

std::string to_string(ProfileMode m) {
  switch (m) {
    case ProfileMode::Order: return "order";
    case ProfileMode::Uo: return "uo";
    case ProfileMode::Un: return "un";
    case ProfileMode::UoCauchy: return "uo_cauchy";
    case ProfileMode::OrderCauchy: return "order_cauchy";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Diverged: return "diverged";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

Verdict decide(const std::vector<double>& c, double tol) {
  const size_t n = c.size();
  double c_first = c.front(), c_last = c.back();
  if (c_last <= tol && (c_last < c_first || c_first <= tol)) return Verdict::Converged;
  // Locate the start of the terminal plateau (c is non-increasing).
  size_t plateau_start = n;
  while (plateau_start > 0 && c[plateau_start - 1] <= c_last + 1e-15) --plateau_start;
  // A plateau that only begins in the last quarter may be a truncation
  // artifact rather than genuine divergence.
  if (plateau_start + 1 > 3 * n / 4) return Verdict::Inconclusive;
  return Verdict::Diverged;
}

ConvergenceProfile finalize(ProfileMode mode, std::vector<double> c,
                            std::optional<Element> witness, double tol) {
  ConvergenceProfile p;
  p.mode = mode;
  p.c = std::move(c);
  p.witness = std::move(witness);
  p.tolerance = tol;
  p.verdict = decide(p.c, tol);
  return p;
}

// c_k = ||sup_{n >= k} term_n||_sup, computed as a running coordinate
// max from the tail. terms here are already the nonnegative
// coordinatewise quantities being profiled.
std::vector<double> tail_sup_profile(const std::vector<std::vector<double>>& terms) {
  const size_t H = terms.size();
  std::vector<double> running(terms.back());
  std::vector<double> c(H - 1, 0.0);
  for (size_t k = H - 1; k >= 1; --k) {
    const std::vector<double>& t = terms[k - 1];
    for (size_t i = 0; i < running.size(); ++i) running[i] = std::max(running[i], t[i]);
    c[k - 1] = sup_norm(running);
  }
  return c;
}

void check_horizon(const SequenceFamily& seq) {
  if (seq.horizon() < 2) throw std::invalid_argument("profile: horizon must be >= 2");
}

}  // namespace

ConvergenceProfile order_profile(const SequenceFamily& seq, const Element& limit,
                                 double tolerance) {
  check_horizon(seq);
  require_same_model(seq.terms.front(), limit);
  std::vector<std::vector<double>> diffs;
  diffs.reserve(seq.terms.size());
  for (const Element& x : seq.terms) diffs.push_back(abs(x - limit).coords());
  return finalize(ProfileMode::Order, tail_sup_profile(diffs), limit, tolerance);
}

ConvergenceProfile uo_profile(const SequenceFamily& seq, const Element& limit,
                              const Element& unit, double tolerance) {
  check_horizon(seq);
  require_same_model(seq.terms.front(), limit);
  if (!is_weak_unit(unit))
    throw std::invalid_argument("uo_profile: unit is not a weak unit");
  std::vector<std::vector<double>> diffs;
  diffs.reserve(seq.terms.size());
  for (const Element& x : seq.terms) diffs.push_back(meet(abs(x - limit), unit).coords());
  return finalize(ProfileMode::Uo, tail_sup_profile(diffs), unit, tolerance);
}

ConvergenceProfile uo_cauchy_profile(const SequenceFamily& seq, const Element& unit,
                                     double tolerance) {
  check_horizon(seq);
  if (!is_weak_unit(unit))
    throw std::invalid_argument("uo_cauchy_profile: unit is not a weak unit");
  const int H = seq.horizon();
  // c_k = max over pairs n, m >= k of ||  |x_n - x_m| ^ unit ||_sup.
  // Pair maxima accumulate from the tail so the whole grid costs
  // O(H^2 dim) once.
  std::vector<double> c(static_cast<size_t>(H - 1), 0.0);
  double running = 0.0;
  for (int k = H - 1; k >= 1; --k) {
    for (int m = k + 1; m <= H; ++m) {
      Element d = meet(abs(seq.terms[static_cast<size_t>(k - 1)] -
                           seq.terms[static_cast<size_t>(m - 1)]),
                       unit);
      running = std::max(running, sup_norm(d.coords()));
    }
    c[static_cast<size_t>(k - 1)] = running;
  }
  return finalize(ProfileMode::UoCauchy, std::move(c), unit, tolerance);
}

ConvergenceProfile un_profile(const SequenceFamily& seq, const Element& limit,
                              const std::vector<Element>& battery, double tolerance) {
  check_horizon(seq);
  require_same_model(seq.terms.front(), limit);
  if (battery.empty()) throw std::invalid_argument("un_profile: empty battery");
  for (const Element& y : battery)
    if (!y.nonnegative())
      throw std::invalid_argument("un_profile: battery element not positive");
  const int H = seq.horizon();
  std::vector<double> c(static_cast<size_t>(H - 1), 0.0);
  double running = 0.0;
  auto absorb = [&](int n) {
    for (const Element& y : battery)
      running = std::max(running, norm(meet(abs(seq.terms[static_cast<size_t>(n - 1)] - limit), y)));
  };
  absorb(H);
  for (int k = H - 1; k >= 1; --k) {
    absorb(k);
    c[static_cast<size_t>(k - 1)] = running;
  }
  return finalize(ProfileMode::Un, std::move(c), limit, tolerance);
}

AobResult almost_order_bounded(const std::vector<Element>& A, const Element& u, double eps) {
  if (!u.nonnegative()) throw std::invalid_argument("almost_order_bounded: u must be >= 0");
  if (eps < 0.0) throw std::invalid_argument("almost_order_bounded: eps must be >= 0");
  double r = 0.0;
  for (const Element& x : A) r = std::max(r, norm(pos(abs(x) - u)));
  return {r <= eps, r};
}

std::optional<Element> aob_search(const std::vector<Element>& A, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("aob_search: eps must be > 0");
  if (A.empty()) return std::nullopt;
  Element sup_abs = abs(A.front());
  for (size_t i = 1; i < A.size(); ++i) sup_abs = join(sup_abs, abs(A[i]));
  const ModelPtr& m = A.front().model_ptr();
  for (int K = 1; K <= m->dim; ++K) {
    std::vector<double> c(sup_abs.coords());
    for (int i = K; i < m->dim; ++i) c[static_cast<size_t>(i)] = 0.0;
    Element u(m, std::move(c));
    if (!admits_limit(u)) continue;
    if (almost_order_bounded(A, u, eps).bounded) return u;
  }
  return std::nullopt;
}

FatouResult fatou_check(const SequenceFamily& seq, const Element& limit, double tolerance) {
  ConvergenceProfile p = uo_profile(seq, limit, default_unit(seq.model), tolerance);
  if (p.verdict != Verdict::Converged)
    throw std::invalid_argument("fatou_check: uo_profile with the default unit is " +
                                to_string(p.verdict) + ", not converged");
  const int H = seq.horizon();
  int start = H - std::max(1, H / 4);
  double liminf = norm(seq.terms[static_cast<size_t>(start)]);
  for (int n = start; n < H; ++n)
    liminf = std::min(liminf, norm(seq.terms[static_cast<size_t>(n)]));
  double lhs = norm(limit);
  return {lhs, liminf, lhs <= liminf + tolerance};
}

}  // namespace uolab
