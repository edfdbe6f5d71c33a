#ifndef UOLAB_FILTRATION_HPP_
#define UOLAB_FILTRATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "uolab/lattice.hpp"
#include "uolab/matrix.hpp"
#include "uolab/rational.hpp"

namespace uolab {

enum class ProjectionKind { GeneralPositive, Band, ConditionalExpectation };

// A positive idempotent matrix operator.
struct Projection {
  Matrix matrix;
  ProjectionKind kind = ProjectionKind::GeneralPositive;
};

// Throws on non-square or negative-entry matrices; reports idempotence
// deviation against the given tolerance.
void check_projection(const Projection& p, double tolerance = 1e-10);

struct FiltrationWitness {
  Element x0;
  Functional x0star;
};

// Commuting positive projections E_1..E_T with E_n E_m = E_{m^n}.
struct Filtration {
  ModelPtr model;
  std::vector<Projection> stages;
  std::optional<FiltrationWitness> witness;
};

struct FiltrationReport {
  bool compatible = false;
  bool bistochastic = false;
  double bounded_const = 0.0;  // sup of stage operator norms in the model norm
  std::vector<std::string> notes;
};

inline constexpr double kCompatTol = 1e-10;  // entrywise, matrix products

FiltrationReport validate_filtration(const Filtration& f);

// Operator norm induced by the model norm: exact column/row sums for
// L1/sup, random power-probe for Lp.
double operator_norm(const Matrix& m, const LatticeModel& model);

// A refining chain of set partitions of {0..dim-1} together with an
// exact probability vector over the atoms. Partition t+1 refines t.
struct PartitionChain {
  std::vector<Rat> mu;
  std::vector<std::vector<std::vector<int>>> partitions;

  int dim() const { return static_cast<int>(mu.size()); }
  int stages() const { return static_cast<int>(partitions.size()); }
  std::vector<double> mu_doubles() const;
};

PartitionChain make_partition_chain(std::vector<Rat> mu,
                                    std::vector<std::vector<std::vector<int>>> partitions);

// Block-averaging conditional expectation for stage t (0-based):
// entry (i,j) = mu_j / mu(B) when i and j share block B, else 0.
Projection conditional_expectation(const PartitionChain& chain, int t);
RatMatrix conditional_expectation_exact(const PartitionChain& chain, int t);

// Stages from successive partitions, witness (all-ones, mu functional).
Filtration chain_to_filtration(const PartitionChain& chain);

struct DoubleConditionReport {
  bool strictly_positive = false;          // Ex = 0, x >= 0  =>  x = 0
  bool adjoint_strictly_positive = false;  // E* x* = 0, x* >= 0  =>  x* = 0
  bool has_fixed_weak_unit = false;        // strictly positive x with Ex = x
  bool has_fixed_strict_functional = false;
  bool equivalence_holds = false;  // (a)&(b) <=> (c)&(d)
  std::optional<Element> fixed_weak_unit;
  std::optional<Functional> fixed_strict_functional;
  std::vector<std::string> notes;
};

// Structural strict-positivity tests (zero column / zero row of the
// matrix) cross-checked against a fixed-point search over the image of
// the simplex. Order continuity is vacuous in finite dimension and
// noted, not tested.
DoubleConditionReport double_condition_diagnostics(const Projection& e, const ModelPtr& model);

// Recovers the partition of a conditional-expectation matrix from its
// sparsity pattern; nullopt when the pattern is not a disjoint union of
// fully-supported blocks.
std::optional<std::vector<std::vector<int>>> recover_partition(const Matrix& m);

// Uniform dyadic chain: 2^depth atoms, block sizes halving each stage
// down to singletons (depth+1 stages).
PartitionChain dyadic_chain(int depth);

}  // namespace uolab

#endif  // UOLAB_FILTRATION_HPP_
