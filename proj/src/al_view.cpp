#include "uolab/al_view.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace uolab {

ALView make_al_view(ModelPtr base, Functional x0star, Element x0) {
  if (!(x0.model() == *base)) throw std::invalid_argument("ALView: x0 not in base model");
  if (static_cast<int>(x0star.weights().size()) != base->dim)
    throw std::invalid_argument("ALView: functional dimension mismatch");
  if (!x0star.strict()) throw std::invalid_argument("ALView: x0star must be strictly positive");
  if (!is_weak_unit(x0)) throw std::invalid_argument("ALView: x0 must be a weak unit");
  ALView v{std::move(base), std::move(x0star), std::move(x0), false};
  v.normalized = std::fabs(v.x0star.apply(v.x0) - 1.0) <= v.base->tolerance;
  return v;
}

double al_norm(const ALView& v, const Element& x) {
  if (!(x.model() == *v.base)) throw std::invalid_argument("al_norm: x not in base model");
  return v.x0star.apply(abs(x));
}

Element ProbabilityModel::map(const Element& x) const {
  std::vector<double> c(x.coords());
  for (size_t i = 0; i < c.size(); ++i) c[i] /= x0_coords[i];
  return Element(model, std::move(c));
}

ProbabilityModel to_probability_model(const ALView& v) {
  if (!v.normalized)
    throw std::invalid_argument(
        "to_probability_model: view not normalized; rescale x0star so that x0star(x0) = 1");
  const int n = v.base->dim;
  std::vector<double> mu(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    mu[static_cast<size_t>(i)] = v.x0star.weights()[static_cast<size_t>(i)] * v.x0[i];
  return {make_model(LatticeModel::l1(mu)), v.x0.coords()};
}

ExtensionCheck contractive_extension_check(const ALView& v, const Matrix& T, int probes,
                                           unsigned long long seed) {
  if (!T.square() || T.rows() != v.base->dim)
    throw std::invalid_argument("contractive_extension_check: operator shape mismatch");
  if (!T.nonnegative())
    throw std::invalid_argument("contractive_extension_check: operator has a negative entry");

  // T^T w == w with relative tolerance 1e-10.
  std::vector<double> w = v.x0star.weights();
  std::vector<double> tw = T.transpose().apply(w);
  bool preserves = true;
  for (size_t i = 0; i < w.size(); ++i) {
    double scale = std::max(std::fabs(w[i]), 1.0);
    if (std::fabs(tw[i] - w[i]) > 1e-10 * scale) preserves = false;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double ratio = 0.0;
  for (int k = 0; k < probes; ++k) {
    std::vector<double> x(static_cast<size_t>(v.base->dim));
    for (double& c : x) c = dist(rng);
    Element ex(v.base, x);
    double nx = al_norm(v, ex);
    if (nx == 0.0) continue;
    Element tx(v.base, T.apply(x));
    ratio = std::max(ratio, al_norm(v, tx) / nx);
  }
  return {preserves, ratio};
}

}  // namespace uolab
