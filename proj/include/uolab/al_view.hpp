#ifndef UOLAB_AL_VIEW_HPP_
#define UOLAB_AL_VIEW_HPP_

#include "uolab/lattice.hpp"
#include "uolab/matrix.hpp"

namespace uolab {

// The representation toolkit: a strictly positive functional turns the
// base model into a weighted-L1 (AL) space. In finite dimension the
// completion coincides with the space itself, so the view only exposes
// the norm and the isometry.
struct ALView {
  ModelPtr base;
  Functional x0star;
  Element x0;
  bool normalized = false;  // x0star(x0) == 1 within tolerance
};

ALView make_al_view(ModelPtr base, Functional x0star, Element x0);

// ||x||_L = x0star(|x|); additive on positives.
double al_norm(const ALView& v, const Element& x);

// The finite probability-space picture: weights mu_i = x0star_i * x0_i
// and the coordinate map x -> x_i / x0_i, under which x0 becomes the
// all-ones vector and al_norm becomes the plain weighted L1 norm.
struct ProbabilityModel {
  ModelPtr model;                 // L1-weighted, weights sum to 1
  std::vector<double> x0_coords;  // divisors of the coordinate map

  Element map(const Element& x) const;  // x0 maps to all-ones
};

// Requires v.normalized; throws with a rescale hint otherwise.
ProbabilityModel to_probability_model(const ALView& v);

struct ExtensionCheck {
  bool preserves = false;       // T^T x0star == x0star within tolerance
  double contraction_ratio = 0.0;  // max al_norm(Tx)/al_norm(x) over probes
};

// Functional-preservation and contraction probe for a positive matrix
// operator. Relative tolerance 1e-10 on the functional equality.
ExtensionCheck contractive_extension_check(const ALView& v, const Matrix& T,
                                           int probes = 100, unsigned long long seed = 20210901ULL);

}  // namespace uolab

#endif  // UOLAB_AL_VIEW_HPP_
