#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uolab/al_view.hpp"
#include "uolab/filtration.hpp"

using namespace uolab;

namespace {

ALView unit_view(int dim) {
  ModelPtr m = make_model(LatticeModel::sup(dim));
  std::vector<double> w(static_cast<size_t>(dim), 1.0 / dim);
  return make_al_view(m, Functional(std::move(w)), ones_element(m));
}

}  // namespace

TEST_CASE("view construction guards") {
  ModelPtr m = make_model(LatticeModel::sup(3));
  Functional strict({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(make_al_view(m, Functional({1.0, 0.0, 1.0}), ones_element(m)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_al_view(m, strict, Element(m, {1.0, 0.0, 1.0})), std::invalid_argument);
  CHECK_THROWS_AS(make_al_view(m, Functional({1.0, 1.0}), ones_element(m)),
                  std::invalid_argument);

  ALView v = make_al_view(m, strict, ones_element(m));
  CHECK_FALSE(v.normalized);  // x0star(x0) = 3
  CHECK(unit_view(3).normalized);
}

TEST_CASE("al norm is additive on the positive cone and monotone") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  ALView v = unit_view(6);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> a(6), b(6);
    for (double& c : a) c = dist(rng);
    for (double& c : b) c = dist(rng);
    Element x(v.base, a), y(v.base, b);
    CHECK(al_norm(v, x + y) == doctest::Approx(al_norm(v, x) + al_norm(v, y)));
    CHECK(al_norm(v, meet(x, y)) <= al_norm(v, x) + 1e-12);
    CHECK(al_norm(v, -1.0 * x) == al_norm(v, x));
  }
}

TEST_CASE("probability picture") {
  ModelPtr m = make_model(LatticeModel::sup(4));
  Element x0(m, {2.0, 1.0, 0.5, 4.0});
  // normalize x0star against x0
  std::vector<double> w = {0.1, 0.2, 0.4, 0.1};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += w[static_cast<size_t>(i)] * x0[i];
  for (double& c : w) c /= s;
  ALView v = make_al_view(m, Functional(w), x0);
  REQUIRE(v.normalized);

  ProbabilityModel p = to_probability_model(v);
  double total = 0.0;
  for (double mu : p.model->weights) total += mu;
  CHECK(total == doctest::Approx(1.0));

  // x0 maps to the constant-one vector; al_norm becomes the weighted L1 norm
  CHECK(p.map(x0).coords() == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  Element x(m, {1.0, -2.0, 3.0, 0.5});
  CHECK(norm(p.map(x)) == doctest::Approx(al_norm(v, x)));

  ALView raw = make_al_view(m, Functional({1.0, 1.0, 1.0, 1.0}), x0);
  CHECK_THROWS_WITH_AS(to_probability_model(raw), doctest::Contains("rescale"),
                       std::invalid_argument);
}

TEST_CASE("functional-preserving positive operators contract the al norm") {
  PartitionChain chain = dyadic_chain(3);
  Filtration f = chain_to_filtration(chain);
  ALView v = make_al_view(f.model, f.witness->x0star, f.witness->x0);

  for (const Projection& stage : f.stages) {
    ExtensionCheck c = contractive_extension_check(v, stage.matrix);
    CHECK(c.preserves);
    CHECK(c.contraction_ratio <= 1.0 + 1e-9);
  }

  // doubling the operator breaks both the fixed functional and the bound
  Matrix doubled = f.stages[1].matrix;
  for (double& e : doubled.data()) e *= 2.0;
  ExtensionCheck c = contractive_extension_check(v, doubled);
  CHECK_FALSE(c.preserves);
  CHECK(c.contraction_ratio > 1.5);

  Matrix negative = f.stages[1].matrix;
  negative.at(0, 0) = -0.5;
  CHECK_THROWS_AS(contractive_extension_check(v, negative), std::invalid_argument);
}

TEST_CASE("deterministic probes") {
  ALView v = unit_view(5);
  Matrix t = Matrix::identity(5);
  ExtensionCheck a = contractive_extension_check(v, t, 50, 99);
  ExtensionCheck b = contractive_extension_check(v, t, 50, 99);
  CHECK(a.contraction_ratio == b.contraction_ratio);
  CHECK(a.preserves);
  CHECK(a.contraction_ratio == doctest::Approx(1.0));
}
