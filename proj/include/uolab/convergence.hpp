#ifndef UOLAB_CONVERGENCE_HPP_
#define UOLAB_CONVERGENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "uolab/lattice.hpp"

namespace uolab {

// An ordered finite-horizon sequence x_1..x_H in one model.
struct SequenceFamily {
  ModelPtr model;
  std::vector<Element> terms;

  int horizon() const { return static_cast<int>(terms.size()); }
};

SequenceFamily make_sequence(ModelPtr model, std::vector<Element> terms);

enum class ProfileMode { Order, Uo, Un, UoCauchy, OrderCauchy };
enum class Verdict { Converged, Diverged, Inconclusive };

std::string to_string(ProfileMode m);
std::string to_string(Verdict v);

// Monotone tail-sup diagnostics c_1..c_{H-1} with a three-valued
// verdict. "Inconclusive" flags plateaus that begin within the last
// quarter of the horizon: a finite window cannot separate a slow
// convergent from a divergent there.
struct ConvergenceProfile {
  ProfileMode mode = ProfileMode::Order;
  std::vector<double> c;
  std::optional<Element> witness;
  Verdict verdict = Verdict::Inconclusive;
  double tolerance = 0.0;
};

inline constexpr double kDefaultProfileTol = 1e-6;

ConvergenceProfile order_profile(const SequenceFamily& seq, const Element& limit,
                                 double tolerance = kDefaultProfileTol);

// Lemma-style reduction: uo-convergence against a weak unit. Throws if
// the unit fails is_weak_unit.
ConvergenceProfile uo_profile(const SequenceFamily& seq, const Element& limit,
                              const Element& unit,
                              double tolerance = kDefaultProfileTol);

ConvergenceProfile uo_cauchy_profile(const SequenceFamily& seq, const Element& unit,
                                     double tolerance = kDefaultProfileTol);

ConvergenceProfile un_profile(const SequenceFamily& seq, const Element& limit,
                              const std::vector<Element>& battery,
                              double tolerance = kDefaultProfileTol);

struct AobResult {
  bool bounded = false;
  double sup_residual = 0.0;  // max_{x in A} ||(|x| - u)^+||
};

AobResult almost_order_bounded(const std::vector<Element>& A, const Element& u, double eps);

// Scans truncations of sup_{x in A} |x| for a witness u with
// almost_order_bounded(A, u, eps); for c0-tagged models the witness must
// itself pass the decay test.
std::optional<Element> aob_search(const std::vector<Element>& A, double eps);

struct FatouResult {
  double limit_norm = 0.0;
  double liminf = 0.0;  // min over the final quarter of ||x_n||
  bool ok = false;
};

// Requires uo_profile(seq, limit, default unit) to have converged;
// throws a diagnostic naming the profile otherwise.
FatouResult fatou_check(const SequenceFamily& seq, const Element& limit,
                        double tolerance = kDefaultProfileTol);

}  // namespace uolab

#endif  // UOLAB_CONVERGENCE_HPP_
