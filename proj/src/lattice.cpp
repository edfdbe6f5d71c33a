#include "uolab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uolab {

void LatticeModel::validate() const {
  if (dim < 1) throw std::invalid_argument("LatticeModel: dim must be >= 1");
  if (static_cast<int>(weights.size()) != dim)
    throw std::invalid_argument("LatticeModel: weights length != dim");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("LatticeModel: weights must be > 0");
  if (tag == SpaceTag::C0Truncation && norm_kind != NormKind::C0TaggedSup)
    throw std::invalid_argument("LatticeModel: c0 truncation requires the sup norm");
  if (norm_kind == NormKind::Lp && !(p > 1.0 && std::isfinite(p)))
    throw std::invalid_argument("LatticeModel: Lp norm requires p in (1, inf)");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("LatticeModel: tolerance must be >= 0");
}

LatticeModel LatticeModel::l1(std::vector<double> w) {
  LatticeModel m;
  m.dim = static_cast<int>(w.size());
  m.weights = std::move(w);
  m.norm_kind = NormKind::L1Weighted;
  m.tag = SpaceTag::L1;
  m.validate();
  return m;
}

LatticeModel LatticeModel::lp(int dim, double p) {
  LatticeModel m;
  m.dim = dim;
  m.weights.assign(static_cast<size_t>(dim), 1.0);
  m.norm_kind = NormKind::Lp;
  m.p = p;
  m.tag = SpaceTag::Lp;
  m.validate();
  return m;
}

LatticeModel LatticeModel::sup(int dim) {
  LatticeModel m;
  m.dim = dim;
  m.weights.assign(static_cast<size_t>(dim), 1.0);
  m.norm_kind = NormKind::Sup;
  m.tag = SpaceTag::EllInfinity;
  m.validate();
  return m;
}

LatticeModel LatticeModel::c0(int dim, double decay_threshold) {
  LatticeModel m;
  m.dim = dim;
  m.weights.assign(static_cast<size_t>(dim), 1.0);
  m.norm_kind = NormKind::C0TaggedSup;
  m.tag = SpaceTag::C0Truncation;
  m.decay_threshold = decay_threshold;
  m.validate();
  return m;
}

bool operator==(const LatticeModel& a, const LatticeModel& b) {
  return a.dim == b.dim && a.weights == b.weights && a.norm_kind == b.norm_kind &&
         a.p == b.p && a.tag == b.tag;
}

ModelPtr make_model(LatticeModel m) {
  m.validate();
  return std::make_shared<const LatticeModel>(std::move(m));
}

Element::Element(ModelPtr model, std::vector<double> coords)
    : model_(std::move(model)), coords_(std::move(coords)) {
  if (!model_) throw std::invalid_argument("Element: null model");
  if (static_cast<int>(coords_.size()) != model_->dim)
    throw std::invalid_argument("Element: coordinate length != model dim");
}

bool Element::nonnegative() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return v >= 0.0; });
}

void require_same_model(const Element& x, const Element& y) {
  if (x.model_ptr() == y.model_ptr()) return;
  if (!(x.model() == y.model()))
    throw std::invalid_argument("model mismatch between elements");
}

namespace {

template <class F>
Element zip(const Element& x, const Element& y, F f) {
  require_same_model(x, y);
  std::vector<double> c(x.coords().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = f(x.coords()[i], y.coords()[i]);
  return Element(x.model_ptr(), std::move(c));
}

template <class F>
Element map(const Element& x, F f) {
  std::vector<double> c(x.coords().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = f(x.coords()[i]);
  return Element(x.model_ptr(), std::move(c));
}

}  // namespace

Element operator+(const Element& x, const Element& y) {
  return zip(x, y, [](double a, double b) { return a + b; });
}
Element operator-(const Element& x, const Element& y) {
  return zip(x, y, [](double a, double b) { return a - b; });
}
Element operator*(double a, const Element& x) {
  return map(x, [a](double v) { return a * v; });
}

Element abs(const Element& x) {
  return map(x, [](double v) { return std::fabs(v); });
}
Element meet(const Element& x, const Element& y) {
  return zip(x, y, [](double a, double b) { return std::min(a, b); });
}
Element join(const Element& x, const Element& y) {
  return zip(x, y, [](double a, double b) { return std::max(a, b); });
}
Element pos(const Element& x) {
  return map(x, [](double v) { return std::max(v, 0.0); });
}
Element neg(const Element& x) {
  return map(x, [](double v) { return std::max(-v, 0.0); });
}

Element zero_element(const ModelPtr& m) {
  return Element(m, std::vector<double>(static_cast<size_t>(m->dim), 0.0));
}

Element ones_element(const ModelPtr& m) {
  return Element(m, std::vector<double>(static_cast<size_t>(m->dim), 1.0));
}

Element basis_element(const ModelPtr& m, int i) {
  if (i < 0 || i >= m->dim) throw std::out_of_range("basis_element: index");
  std::vector<double> c(static_cast<size_t>(m->dim), 0.0);
  c[static_cast<size_t>(i)] = 1.0;
  return Element(m, std::move(c));
}

double norm(const Element& x) {
  const LatticeModel& m = x.model();
  switch (m.norm_kind) {
    case NormKind::L1Weighted: {
      double s = 0.0;
      for (int i = 0; i < m.dim; ++i) s += m.weights[static_cast<size_t>(i)] * std::fabs(x[i]);
      return s;
    }
    case NormKind::Lp: {
      double s = 0.0;
      for (int i = 0; i < m.dim; ++i)
        s += m.weights[static_cast<size_t>(i)] * std::pow(std::fabs(x[i]), m.p);
      return std::pow(s, 1.0 / m.p);
    }
    case NormKind::Sup:
    case NormKind::C0TaggedSup: {
      double s = 0.0;
      for (int i = 0; i < m.dim; ++i) s = std::max(s, std::fabs(x[i]));
      return s;
    }
  }
  return 0.0;
}

Functional::Functional(std::vector<double> weights) : weights_(std::move(weights)) {
  strict_ = !weights_.empty();
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("Functional: weights must be >= 0");
    if (w == 0.0) strict_ = false;
  }
}

double Functional::apply(const Element& x) const {
  if (static_cast<int>(weights_.size()) != x.dim())
    throw std::invalid_argument("Functional: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x.coords()[i];
  return s;
}

BandDescriptor BandDescriptor::from_generator(const Element& gen) {
  BandDescriptor b;
  for (int i = 0; i < gen.dim(); ++i)
    if (gen[i] != 0.0) b.support.insert(i);
  b.generator = gen;
  return b;
}

bool BandDescriptor::contains(const Element& x) const {
  for (int i = 0; i < x.dim(); ++i)
    if (x[i] != 0.0 && !support.count(i)) return false;
  return true;
}

Element band_projection(const Element& gen, const Element& x) {
  require_same_model(gen, x);
  std::vector<double> c(x.coords());
  for (size_t i = 0; i < c.size(); ++i)
    if (gen.coords()[i] == 0.0) c[i] = 0.0;
  return Element(x.model_ptr(), std::move(c));
}

bool is_weak_unit(const Element& x0) {
  if (!x0.nonnegative())
    throw std::invalid_argument("is_weak_unit: candidate has a negative coordinate");
  for (int i = 0; i < x0.dim(); ++i)
    if (x0[i] == 0.0) return false;
  return true;
}

bool is_quasi_interior(const Element& x0) {
  // Agrees with is_weak_unit in every finite-coordinate model.
  return is_weak_unit(x0);
}

BandDecomposition band_decompose(const Functional& xstar, const Element& x) {
  if (static_cast<int>(xstar.weights().size()) != x.dim())
    throw std::invalid_argument("band_decompose: dimension mismatch");
  std::vector<double> n(x.coords().size(), 0.0), c(x.coords().size(), 0.0);
  for (size_t i = 0; i < n.size(); ++i) {
    if (xstar.weights()[i] == 0.0)
      n[i] = x.coords()[i];
    else
      c[i] = x.coords()[i];
  }
  return {Element(x.model_ptr(), std::move(n)), Element(x.model_ptr(), std::move(c))};
}

bool admits_limit(const Element& x) {
  const LatticeModel& m = x.model();
  if (m.tag != SpaceTag::C0Truncation) return true;
  // Tail-decay test: the final quarter of the coordinate profile must
  // already sit below the threshold.
  int start = m.dim - std::max(1, m.dim / 4);
  for (int i = start; i < m.dim; ++i)
    if (std::fabs(x[i]) > m.decay_threshold) return false;
  return true;
}

Element default_unit(const ModelPtr& m) {
  std::vector<double> c(static_cast<size_t>(m->dim));
  if (m->tag == SpaceTag::C0Truncation || m->tag == SpaceTag::Lp) {
    for (int i = 0; i < m->dim; ++i) c[static_cast<size_t>(i)] = 1.0 / static_cast<double>(i + 1);
  } else {
    std::fill(c.begin(), c.end(), 1.0);
  }
  return Element(m, std::move(c));
}

}  // namespace uolab
