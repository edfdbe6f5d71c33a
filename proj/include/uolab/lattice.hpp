#ifndef UOLAB_LATTICE_HPP_
#define UOLAB_LATTICE_HPP_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace uolab {

enum class NormKind { L1Weighted, Lp, Sup, C0TaggedSup };
enum class SpaceTag { L1, Lp, EllInfinity, C0Truncation, Product };

// A finite-coordinate vector lattice with coordinatewise order.
// Infinite-dimensional spaces are modeled by truncation at `dim`; the
// space tag changes which candidate limits the model admits (the
// c0 tag runs a tail-decay test instead of accepting everything).
struct LatticeModel {
  int dim = 0;
  std::vector<double> weights;  // the measure; strictly positive
  NormKind norm_kind = NormKind::L1Weighted;
  double p = 2.0;  // only read when norm_kind == Lp
  SpaceTag tag = SpaceTag::L1;
  double tolerance = 1e-12;        // comparisons of derived reals
  double decay_threshold = 0.1;    // c0 tail test, user-settable

  void validate() const;

  static LatticeModel l1(std::vector<double> w);
  static LatticeModel lp(int dim, double p);
  static LatticeModel sup(int dim);
  static LatticeModel c0(int dim, double decay_threshold = 0.1);
};

bool operator==(const LatticeModel& a, const LatticeModel& b);

using ModelPtr = std::shared_ptr<const LatticeModel>;

ModelPtr make_model(LatticeModel m);

// Coordinate vector bound to a model.
class Element {
 public:
  Element(ModelPtr model, std::vector<double> coords);

  const LatticeModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const std::vector<double>& coords() const { return coords_; }
  double operator[](int i) const { return coords_[static_cast<size_t>(i)]; }
  int dim() const { return static_cast<int>(coords_.size()); }

  bool nonnegative() const;

 private:
  ModelPtr model_;
  std::vector<double> coords_;
};

// Throws std::invalid_argument unless x and y live in the same model.
void require_same_model(const Element& x, const Element& y);

Element operator+(const Element& x, const Element& y);
Element operator-(const Element& x, const Element& y);
Element operator*(double a, const Element& x);

Element abs(const Element& x);
Element meet(const Element& x, const Element& y);
Element join(const Element& x, const Element& y);
Element pos(const Element& x);
Element neg(const Element& x);

Element zero_element(const ModelPtr& m);
Element ones_element(const ModelPtr& m);
Element basis_element(const ModelPtr& m, int i);

// Model norm: weighted L1, weighted Lp, or sup depending on norm_kind.
double norm(const Element& x);

// Positive linear functional given by a nonnegative weight vector.
class Functional {
 public:
  explicit Functional(std::vector<double> weights);

  const std::vector<double>& weights() const { return weights_; }
  bool strict() const { return strict_; }
  double apply(const Element& x) const;

 private:
  std::vector<double> weights_;
  bool strict_ = false;
};

// Coordinate-support description of a band.
struct BandDescriptor {
  std::set<int> support;
  std::optional<Element> generator;

  static BandDescriptor from_generator(const Element& gen);
  bool contains(const Element& x) const;
};

// Projection onto the band generated by |gen|: zeroes every coordinate
// where gen vanishes.
Element band_projection(const Element& gen, const Element& x);

// Both predicates reduce to strict positivity of every coordinate in a
// finite-coordinate model; they agree by order continuity.
bool is_weak_unit(const Element& x0);
bool is_quasi_interior(const Element& x0);

// Splits x into the null part of xstar (coordinates with zero weight)
// and its complementary band part.
struct BandDecomposition {
  Element n_part;
  Element c_part;
};
BandDecomposition band_decompose(const Functional& xstar, const Element& x);

// Whether the tagged space accepts x as a member / limit candidate.
// c0 truncations require the final-quarter coordinate profile to stay
// below the model's decay threshold; other tags accept every vector.
bool admits_limit(const Element& x);

// Canonical weak unit: (1/i) for c0 and lp truncations, all-ones
// otherwise.
Element default_unit(const ModelPtr& m);

}  // namespace uolab

#endif  // UOLAB_LATTICE_HPP_
