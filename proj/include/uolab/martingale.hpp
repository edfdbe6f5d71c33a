#ifndef UOLAB_MARTINGALE_HPP_
#define UOLAB_MARTINGALE_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "uolab/al_view.hpp"
#include "uolab/convergence.hpp"
#include "uolab/filtration.hpp"

namespace uolab {

enum class ProcessKind { Martingale, Submartingale, None };

// A process z_1..z_T aligned with the stages of a filtration, each term
// living in the range of its stage.
struct ProcessTrace {
  Filtration filtration;
  SequenceFamily values;
  ProcessKind kind_claim = ProcessKind::None;
};

ProcessTrace make_trace(Filtration f, std::vector<Element> values,
                        ProcessKind claim = ProcessKind::None, double tolerance = 1e-9);

struct ProcessCheck {
  bool is_martingale = false;
  bool is_submartingale = false;
  double max_violation = 0.0;
};

ProcessCheck verify_process(const ProcessTrace& p, double tolerance = 1e-9);

// z_n = E_n x.
ProcessTrace closed_martingale(const Filtration& f, const Element& x);

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, ConvergenceProfile>> profiles;
  std::map<std::string, double> scalar_stats;
  std::map<std::string, bool> verdicts;
  std::vector<std::string> notes;
};

// Doob-style experiment: bounded positive part of a submartingale
// forces a converged uo-Cauchy profile with the witness unit. Refuses
// when the filtration fails the double condition for the view's pair.
ExperimentReport doob_experiment(const ProcessTrace& p, const ALView& view,
                                 double profile_tolerance = 0.15, double tolerance = 1e-9);

// Partial sums of the coordinate basis run in an L1-tagged and a
// c0-tagged model of the same dimension, plus a norm bounded monotone
// family in the L1 model whose limit is accepted.
ExperimentReport kb_vs_c0_experiment(int horizon, double profile_tolerance = 0.15);

// z_n <= E_n x for all n (equality for martingale claims). x is the
// norm limit of a subsequence, standing in for weak convergence: the
// two coincide in finite dimension, and reports carry the flag.
bool weaksub_check(const ProcessTrace& p, const Element& x, double tolerance = 1e-9);

// Positive parts converge to x^+: order profile, norm residuals, and
// the exact decomposition identities from the positive-part argument.
ExperimentReport positive_part_convergence(const ProcessTrace& p, const Element& x,
                                           double profile_tolerance = 0.15,
                                           double tolerance = 1e-9);

// ---- product (vector-valued) setting ----------------------------------

// Product model: atoms of the chain times fiber coordinates, weights
// mu_omega * fiber_weight_i. Stage projections act as E tensor I.
struct ProductSpace {
  ModelPtr model;  // dim = atoms * fiber.dim
  int atoms = 0;
  int fiber_dim = 0;
};

ProductSpace product_space(const PartitionChain& chain, const LatticeModel& fiber);
Filtration product_filtration(const PartitionChain& chain, const LatticeModel& fiber);

// Runs the Doob experiment on the product, then per atom checks the
// fiber-level uo-Cauchy profile; the verdict requires failure measure 0.
ExperimentReport bochner_experiment(const PartitionChain& chain, const LatticeModel& fiber,
                                    const ProcessTrace& paths,
                                    double profile_tolerance = 0.15, double tolerance = 1e-9);

// ---- Polya urn fixture ------------------------------------------------

// Exact path-space enumeration of the two-color urn starting from one
// ball of each color: 2^depth atoms, level-n partitions by the first n
// draws, z_n the drawn-color fraction. Everything is computed in
// rational arithmetic before any experiment consumes it.
struct PolyaUrn {
  PartitionChain chain;
  std::vector<std::vector<Rat>> z_exact;  // z_exact[n][atom], n = 0..depth-1 for stages 1..depth
};

PolyaUrn build_polya_urn(int depth);

// The urn's closed-form z_n against the brute-force conditional
// expectations, then the Doob experiment on the resulting trace.
ExperimentReport polya_urn_experiment(int depth, double profile_tolerance = 0.15);

// ---- block-average counterexample fixture -----------------------------

// Pairwise-averaging filtration on c0-tagged coordinates with the
// alternating-sign martingale: uo-Cauchy, bounded positive part, but
// the coordinatewise limit fails the c0 tail test.
struct BlockAverageFixture {
  Filtration filtration;  // on a c0-tagged model of dimension dim
  std::vector<Element> trace;
  ALView view;
};

BlockAverageFixture build_block_average_fixture(int dim = 8);
ExperimentReport block_average_experiment(int dim = 8, double profile_tolerance = 0.15);

}  // namespace uolab

#endif  // UOLAB_MARTINGALE_HPP_
