#include "uolab/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uolab {

namespace {

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

void merge_report(ExperimentReport& into, const ExperimentReport& from, const std::string& prefix) {
  for (const auto& [name, prof] : from.profiles) into.profiles.emplace_back(prefix + name, prof);
  for (const auto& [name, v] : from.scalar_stats) into.scalar_stats[prefix + name] = v;
  for (const auto& [name, v] : from.verdicts) into.verdicts[prefix + name] = v;
  for (const auto& n : from.notes) into.notes.push_back(n);
}

}  // namespace

ProcessTrace make_trace(Filtration f, std::vector<Element> values, ProcessKind claim,
                        double tolerance) {
  if (values.size() != f.stages.size())
    throw std::invalid_argument("ProcessTrace: values/stages misalignment");
  for (size_t n = 0; n < values.size(); ++n) {
    std::vector<double> ez = f.stages[n].matrix.apply(values[n].coords());
    for (size_t i = 0; i < ez.size(); ++i)
      if (std::fabs(ez[i] - values[n].coords()[i]) > tolerance)
        throw std::invalid_argument("ProcessTrace: z_" + std::to_string(n + 1) +
                                    " not in Range(E_" + std::to_string(n + 1) + ")");
  }
  ModelPtr model = f.model;
  return {std::move(f), make_sequence(model, std::move(values)), claim};
}

ProcessCheck verify_process(const ProcessTrace& p, double tolerance) {
  const auto& stages = p.filtration.stages;
  const auto& z = p.values.terms;
  if (z.size() != stages.size())
    throw std::invalid_argument("verify_process: stage/value misalignment");
  const int T = static_cast<int>(z.size());
  double mart_dev = 0.0;
  double sub_dev = 0.0;
  for (int n = 0; n < T; ++n) {
    for (int m = n; m < T; ++m) {
      std::vector<double> d =
          stages[static_cast<size_t>(n)].matrix.apply(z[static_cast<size_t>(m)].coords());
      for (size_t i = 0; i < d.size(); ++i) d[i] -= z[static_cast<size_t>(n)].coords()[i];
      mart_dev = std::max(mart_dev, sup_abs(d));
      double worst_neg = 0.0;
      for (double v : d) worst_neg = std::max(worst_neg, -v);
      sub_dev = std::max(sub_dev, worst_neg);
    }
  }
  ProcessCheck c;
  c.is_martingale = mart_dev <= tolerance;
  c.is_submartingale = sub_dev <= tolerance;
  c.max_violation = mart_dev;
  return c;
}

ProcessTrace closed_martingale(const Filtration& f, const Element& x) {
  if (!(x.model() == *f.model)) throw std::invalid_argument("closed_martingale: model mismatch");
  std::vector<Element> values;
  values.reserve(f.stages.size());
  for (const Projection& e : f.stages)
    values.emplace_back(f.model, e.matrix.apply(x.coords()));
  return make_trace(f, std::move(values), ProcessKind::Martingale);
}

ExperimentReport doob_experiment(const ProcessTrace& p, const ALView& view,
                                 double profile_tolerance, double tolerance) {
  ExperimentReport r;
  r.name = "doob";

  ProcessCheck check = verify_process(p, tolerance);
  if (!check.is_submartingale)
    throw std::invalid_argument("doob_experiment: trace is not a verified submartingale");
  r.verdicts["is_martingale"] = check.is_martingale;
  r.verdicts["is_submartingale"] = true;

  // The double condition for the view's pair must hold on every stage.
  const std::vector<double>& w = view.x0star.weights();
  for (size_t t = 0; t < p.filtration.stages.size(); ++t) {
    const Matrix& e = p.filtration.stages[t].matrix;
    std::vector<double> ex0 = e.apply(view.x0.coords());
    std::vector<double> etw = e.transpose().apply(w);
    for (size_t i = 0; i < w.size(); ++i)
      if (std::fabs(ex0[i] - view.x0.coords()[i]) > tolerance ||
          std::fabs(etw[i] - w[i]) > tolerance)
        throw std::invalid_argument(
            "doob_experiment: filtration is not bistochastic for the view's pair (stage " +
            std::to_string(t + 1) + ")");
  }

  const auto& z = p.values.terms;
  double sup_pos = 0.0;
  bool monotone = true;
  double prev = view.x0star.apply(z.front());
  for (size_t n = 0; n < z.size(); ++n) {
    sup_pos = std::max(sup_pos, view.x0star.apply(pos(z[n])));
    double cur = view.x0star.apply(z[n]);
    if (cur + tolerance < prev) monotone = false;
    prev = cur;
  }
  r.scalar_stats["sup_positive_part"] = sup_pos;
  r.scalar_stats["functional_first"] = view.x0star.apply(z.front());
  r.scalar_stats["functional_last"] = view.x0star.apply(z.back());
  r.verdicts["bounded_positive_part"] = std::isfinite(sup_pos);
  r.verdicts["monotone_functional_chain"] = monotone;

  ConvergenceProfile prof = uo_cauchy_profile(p.values, view.x0, profile_tolerance);
  r.verdicts["uo_cauchy_converged"] = prof.verdict == Verdict::Converged;
  r.profiles.emplace_back("uo_cauchy", prof);

  const Element& candidate = z.back();
  bool admissible = admits_limit(candidate);
  r.verdicts["limit_candidate_admissible"] = admissible;
  if (!admissible)
    r.notes.push_back("uo-Cauchy, but the coordinatewise limit candidate fails the tagged-space "
                      "membership test");
  return r;
}

ExperimentReport kb_vs_c0_experiment(int horizon, double profile_tolerance) {
  if (horizon < 4) throw std::invalid_argument("kb_vs_c0_experiment: horizon must be >= 4");
  ExperimentReport r;
  r.name = "kb_vs_c0";
  const int dim = horizon;
  ModelPtr c0m = make_model(LatticeModel::c0(dim));
  ModelPtr l1m = make_model(LatticeModel::l1(std::vector<double>(static_cast<size_t>(dim), 1.0)));

  auto partial_sums = [dim](const ModelPtr& m) {
    std::vector<Element> terms;
    std::vector<double> c(static_cast<size_t>(dim), 0.0);
    for (int n = 0; n < dim; ++n) {
      c[static_cast<size_t>(n)] = 1.0;
      terms.emplace_back(m, c);
    }
    return terms;
  };

  // The same harmonic unit works in both tags.
  auto harmonic = [dim](const ModelPtr& m) {
    std::vector<double> u(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) u[static_cast<size_t>(i)] = 1.0 / static_cast<double>(i + 1);
    return Element(m, std::move(u));
  };

  SequenceFamily c0seq = make_sequence(c0m, partial_sums(c0m));
  SequenceFamily l1seq = make_sequence(l1m, partial_sums(l1m));

  ConvergenceProfile pc0 = uo_cauchy_profile(c0seq, harmonic(c0m), profile_tolerance);
  ConvergenceProfile pl1 = uo_cauchy_profile(l1seq, harmonic(l1m), profile_tolerance);
  r.profiles.emplace_back("uo_cauchy_c0", pc0);
  r.profiles.emplace_back("uo_cauchy_l1", pl1);
  r.verdicts["uo_cauchy_c0"] = pc0.verdict == Verdict::Converged;
  r.verdicts["uo_cauchy_l1"] = pl1.verdict == Verdict::Converged;

  r.verdicts["limit_accepted_c0"] = admits_limit(ones_element(c0m));
  r.verdicts["limit_accepted_l1"] = admits_limit(ones_element(l1m));

  double sup_norm_l1 = 0.0;
  for (const Element& x : l1seq.terms) sup_norm_l1 = std::max(sup_norm_l1, norm(x));
  r.scalar_stats["partial_sums_sup_norm_l1"] = sup_norm_l1;
  r.verdicts["partial_sums_norm_bounded_l1"] = false;
  r.notes.push_back("partial sums are not norm bounded in the L1 tag; the KB hypothesis is not "
                    "met by this family");

  // A norm bounded uo-Cauchy family in the L1 tag with an accepted limit.
  Element u = ones_element(l1m);
  std::vector<Element> bounded;
  for (int n = 1; n <= horizon; ++n) bounded.push_back((1.0 - std::pow(2.0, -n)) * u);
  SequenceFamily bseq = make_sequence(l1m, std::move(bounded));
  ConvergenceProfile pb = uo_profile(bseq, u, ones_element(l1m), profile_tolerance);
  r.profiles.emplace_back("bounded_family_uo", pb);
  r.verdicts["bounded_family_uo_converged"] = pb.verdict == Verdict::Converged;
  r.verdicts["bounded_family_limit_accepted"] = admits_limit(u);
  return r;
}

bool weaksub_check(const ProcessTrace& p, const Element& x, double tolerance) {
  const auto& z = p.values.terms;
  bool equality = p.kind_claim == ProcessKind::Martingale;
  for (size_t n = 0; n < z.size(); ++n) {
    std::vector<double> ex = p.filtration.stages[n].matrix.apply(x.coords());
    for (size_t i = 0; i < ex.size(); ++i) {
      double d = ex[i] - z[n].coords()[i];
      if (equality ? std::fabs(d) > tolerance : d < -tolerance) return false;
    }
  }
  return true;
}

ExperimentReport positive_part_convergence(const ProcessTrace& p, const Element& x,
                                           double profile_tolerance, double tolerance) {
  if (!weaksub_check(p, x, tolerance))
    throw std::invalid_argument("positive_part_convergence: weaksub_check failed for the limit");
  FiltrationReport fr = validate_filtration(p.filtration);
  if (!fr.compatible || !fr.bistochastic || !std::isfinite(fr.bounded_const))
    throw std::invalid_argument(
        "positive_part_convergence: filtration must be compatible, bistochastic and bounded");

  ExperimentReport r;
  r.name = "positive_part_convergence";
  r.notes.push_back("subsequence limit is a finite-dim surrogate for weak convergence");

  Element xp = pos(x);
  std::vector<Element> zp;
  for (const Element& z : p.values.terms) zp.push_back(pos(z));
  SequenceFamily fam = make_sequence(p.values.model, zp);
  ConvergenceProfile prof = order_profile(fam, xp, profile_tolerance);
  r.profiles.emplace_back("positive_part_order", prof);
  double final_residual = norm(zp.back() - xp);
  r.scalar_stats["final_norm_residual"] = final_residual;
  // at a finite horizon the profile only collapses at the last stage,
  // so the convergence claim rides on the terminal residual
  r.verdicts["positive_part_converged"] =
      prof.verdict != Verdict::Diverged && final_residual <= profile_tolerance;

  // z_n^+ v x^+ - z_n^+ ^ x^+ = |z_n^+ - x^+|  and
  // z_n^+ v x^+ = (z_n^+ - x^+)^+ + x^+.
  bool identities = true;
  for (const Element& z : zp) {
    Element lhs1 = join(z, xp) - meet(z, xp);
    Element rhs1 = abs(z - xp);
    Element lhs2 = join(z, xp);
    Element rhs2 = pos(z - xp) + xp;
    for (int i = 0; i < z.dim(); ++i)
      if (std::fabs(lhs1[i] - rhs1[i]) > tolerance || std::fabs(lhs2[i] - rhs2[i]) > tolerance)
        identities = false;
  }
  r.verdicts["decomposition_identities"] = identities;
  return r;
}

ProductSpace product_space(const PartitionChain& chain, const LatticeModel& fiber) {
  fiber.validate();
  const int atoms = chain.dim();
  const int fd = fiber.dim;
  std::vector<double> mu = chain.mu_doubles();
  std::vector<double> w(static_cast<size_t>(atoms) * fd);
  for (int o = 0; o < atoms; ++o)
    for (int i = 0; i < fd; ++i)
      w[static_cast<size_t>(o) * fd + i] = mu[static_cast<size_t>(o)] * fiber.weights[static_cast<size_t>(i)];
  return {make_model(LatticeModel::l1(std::move(w))), atoms, fd};
}

Filtration product_filtration(const PartitionChain& chain, const LatticeModel& fiber) {
  ProductSpace ps = product_space(chain, fiber);
  const int fd = ps.fiber_dim;
  Filtration f{ps.model, {}, std::nullopt};
  for (int t = 0; t < chain.stages(); ++t) {
    Matrix base = conditional_expectation(chain, t).matrix;
    Matrix lifted(ps.model->dim, ps.model->dim);
    for (int o = 0; o < ps.atoms; ++o)
      for (int q = 0; q < ps.atoms; ++q) {
        double v = base.at(o, q);
        if (v == 0.0) continue;
        for (int i = 0; i < fd; ++i) lifted.at(o * fd + i, q * fd + i) = v;
      }
    f.stages.push_back({std::move(lifted), ProjectionKind::ConditionalExpectation});
  }
  // constant-fiber weak unit and functional
  ModelPtr fiber_model = make_model(fiber);
  Element fx0 = default_unit(fiber_model);
  std::vector<double> mu = chain.mu_doubles();
  std::vector<double> f0(static_cast<size_t>(ps.model->dim)), g0(static_cast<size_t>(ps.model->dim));
  for (int o = 0; o < ps.atoms; ++o)
    for (int i = 0; i < fd; ++i) {
      f0[static_cast<size_t>(o) * fd + i] = fx0[i];
      g0[static_cast<size_t>(o) * fd + i] =
          mu[static_cast<size_t>(o)] * fiber.weights[static_cast<size_t>(i)];
    }
  f.witness = FiltrationWitness{Element(ps.model, std::move(f0)), Functional(std::move(g0))};
  return f;
}

ExperimentReport bochner_experiment(const PartitionChain& chain, const LatticeModel& fiber,
                                    const ProcessTrace& paths, double profile_tolerance,
                                    double tolerance) {
  ProductSpace ps = product_space(chain, fiber);
  if (!(paths.values.model->dim == ps.model->dim))
    throw std::invalid_argument("bochner_experiment: trace does not live on the product model");
  if (!paths.filtration.witness)
    throw std::invalid_argument("bochner_experiment: product filtration lacks its weak unit witness");

  ExperimentReport r;
  r.name = "bochner";
  ALView view = make_al_view(paths.values.model, paths.filtration.witness->x0star,
                             paths.filtration.witness->x0);
  merge_report(r, doob_experiment(paths, view, profile_tolerance, tolerance), "product_");

  // Per-atom fiber diagnostics.
  ModelPtr fiber_model = make_model(fiber);
  Element fiber_unit = default_unit(fiber_model);
  std::vector<double> mu = chain.mu_doubles();
  double failure_measure = 0.0;
  double rejected_measure = 0.0;
  for (int o = 0; o < ps.atoms; ++o) {
    std::vector<Element> slice;
    for (const Element& z : paths.values.terms) {
      std::vector<double> c(static_cast<size_t>(ps.fiber_dim));
      for (int i = 0; i < ps.fiber_dim; ++i)
        c[static_cast<size_t>(i)] = z[o * ps.fiber_dim + i];
      slice.emplace_back(fiber_model, std::move(c));
    }
    SequenceFamily fam = make_sequence(fiber_model, std::move(slice));
    ConvergenceProfile prof = uo_cauchy_profile(fam, fiber_unit, profile_tolerance);
    if (prof.verdict != Verdict::Converged) failure_measure += mu[static_cast<size_t>(o)];
    if (!admits_limit(fam.terms.back())) rejected_measure += mu[static_cast<size_t>(o)];
  }
  r.scalar_stats["fiber_failure_measure"] = failure_measure;
  r.scalar_stats["fiber_limit_rejected_measure"] = rejected_measure;
  r.verdicts["almost_sure_uo_cauchy"] = failure_measure <= tolerance;
  if (rejected_measure > 0.0)
    r.notes.push_back("per-atom limit candidates rejected by the fiber tag on measure " +
                      std::to_string(rejected_measure));
  return r;
}

PolyaUrn build_polya_urn(int depth) {
  if (depth < 1 || depth > 12) throw std::invalid_argument("build_polya_urn: depth must be in 1..12");
  const int atoms = 1 << depth;
  std::vector<Rat> mu(static_cast<size_t>(atoms));
  std::vector<std::vector<Rat>> z(static_cast<size_t>(depth),
                                  std::vector<Rat>(static_cast<size_t>(atoms)));
  for (int a = 0; a < atoms; ++a) {
    long long red = 1, blue = 1;
    Rat prob(1);
    for (int k = 1; k <= depth; ++k) {
      bool drew_red = ((a >> (depth - k)) & 1) != 0;
      if (drew_red) {
        prob = prob * Rat(red, red + blue);
        ++red;
      } else {
        prob = prob * Rat(blue, red + blue);
        ++blue;
      }
      z[static_cast<size_t>(k - 1)][static_cast<size_t>(a)] = Rat(red, red + blue);
    }
    mu[static_cast<size_t>(a)] = prob;
  }
  std::vector<std::vector<std::vector<int>>> parts;
  for (int t = 1; t <= depth; ++t) {
    int bs = 1 << (depth - t);
    std::vector<std::vector<int>> part;
    for (int start = 0; start < atoms; start += bs) {
      std::vector<int> block(static_cast<size_t>(bs));
      std::iota(block.begin(), block.end(), start);
      part.push_back(std::move(block));
    }
    parts.push_back(std::move(part));
  }
  return {make_partition_chain(std::move(mu), std::move(parts)), std::move(z)};
}

ExperimentReport polya_urn_experiment(int depth, double profile_tolerance) {
  PolyaUrn urn = build_polya_urn(depth);
  ExperimentReport r;
  r.name = "polya_urn";

  // Oracle: exact tower identity over every block of every level, and
  // the exact positive-part bound, before any floating-point run.
  bool tower_exact = true;
  Rat sup_pos(0);
  for (int n = 0; n < depth && tower_exact; ++n) {
    Rat level_mean(0);
    for (const auto& block : urn.chain.partitions[static_cast<size_t>(n)]) {
      Rat pb(0), zn = urn.z_exact[static_cast<size_t>(n)][static_cast<size_t>(block.front())];
      for (int a : block) {
        pb += urn.chain.mu[static_cast<size_t>(a)];
        if (urn.z_exact[static_cast<size_t>(n)][static_cast<size_t>(a)] != zn) tower_exact = false;
      }
      for (int m = n; m < depth && tower_exact; ++m) {
        Rat s(0);
        for (int a : block)
          s += urn.chain.mu[static_cast<size_t>(a)] *
               urn.z_exact[static_cast<size_t>(m)][static_cast<size_t>(a)];
        if (s != pb * zn) tower_exact = false;
      }
    }
    for (int a = 0; a < urn.chain.dim(); ++a)
      level_mean += urn.chain.mu[static_cast<size_t>(a)] *
                    urn.z_exact[static_cast<size_t>(n)][static_cast<size_t>(a)];
    if (sup_pos < level_mean) sup_pos = level_mean;
  }
  r.verdicts["oracle_exact_martingale"] = tower_exact;
  r.verdicts["positive_part_leq_one_exact"] = sup_pos <= Rat(1);
  r.scalar_stats["oracle_sup_positive_part"] = sup_pos.to_double();

  // Experiment side: matrix filtration and double trace.
  Filtration f = chain_to_filtration(urn.chain);
  std::vector<Element> values;
  for (int n = 0; n < depth; ++n) {
    std::vector<double> c(static_cast<size_t>(urn.chain.dim()));
    for (int a = 0; a < urn.chain.dim(); ++a)
      c[static_cast<size_t>(a)] = urn.z_exact[static_cast<size_t>(n)][static_cast<size_t>(a)].to_double();
    values.emplace_back(f.model, std::move(c));
  }
  ProcessTrace trace = make_trace(f, values, ProcessKind::Martingale);

  // Closed-martingale reconstruction agrees with the oracle values.
  ProcessTrace closed = closed_martingale(f, values.back());
  double worst = 0.0;
  for (size_t n = 0; n < values.size(); ++n)
    for (int i = 0; i < f.model->dim; ++i)
      worst = std::max(worst, std::fabs(closed.values.terms[n][i] - values[n][i]));
  r.scalar_stats["oracle_max_deviation"] = worst;
  r.verdicts["oracle_agreement"] = worst <= 1e-12;

  ALView view = make_al_view(f.model, f.witness->x0star, f.witness->x0);
  merge_report(r, doob_experiment(trace, view, profile_tolerance), "");
  return r;
}

BlockAverageFixture build_block_average_fixture(int dim) {
  if (dim < 4 || dim % 2 != 0)
    throw std::invalid_argument("build_block_average_fixture: dim must be even and >= 4");
  ModelPtr model = make_model(LatticeModel::c0(dim));
  const int T = dim / 2 + 1;
  Filtration f{model, {}, std::nullopt};
  for (int n = 1; n <= T; ++n) {
    Matrix e(dim, dim);
    int id_cols = 2 * (n - 1);
    for (int i = 0; i < id_cols; ++i) e.at(i, i) = 1.0;
    for (int b = id_cols; b < dim; b += 2) {
      e.at(b, b) = 0.5;
      e.at(b, b + 1) = 0.5;
      e.at(b + 1, b) = 0.5;
      e.at(b + 1, b + 1) = 0.5;
    }
    f.stages.push_back({std::move(e), ProjectionKind::ConditionalExpectation});
  }
  // pairwise-constant dyadic-decay weak unit, fixed by every stage
  std::vector<double> x0(static_cast<size_t>(dim));
  for (int k = 0; k < dim / 2; ++k) x0[static_cast<size_t>(2 * k)] = x0[static_cast<size_t>(2 * k + 1)] = std::pow(2.0, -k);
  Element unit(model, std::move(x0));
  Functional uniform(std::vector<double>(static_cast<size_t>(dim), 1.0 / dim));
  f.witness = FiltrationWitness{unit, uniform};

  std::vector<Element> trace;
  for (int n = 1; n <= T; ++n) {
    std::vector<double> c(static_cast<size_t>(dim), 0.0);
    for (int i = 0; i < 2 * (n - 1); ++i) c[static_cast<size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
    trace.emplace_back(model, std::move(c));
  }
  ALView view = make_al_view(model, uniform, unit);
  return {std::move(f), std::move(trace), std::move(view)};
}

ExperimentReport block_average_experiment(int dim, double profile_tolerance) {
  BlockAverageFixture fx = build_block_average_fixture(dim);
  ExperimentReport r;
  r.name = "block_average_martingale";

  FiltrationReport fr = validate_filtration(fx.filtration);
  r.verdicts["filtration_compatible"] = fr.compatible;
  r.verdicts["filtration_bistochastic"] = fr.bistochastic;
  r.scalar_stats["bounded_const"] = fr.bounded_const;

  // Rational re-run of every matrix identity: entries are halves, so
  // the products must come out exact.
  const int T = static_cast<int>(fx.filtration.stages.size());
  std::vector<RatMatrix> exact;
  for (const Projection& p : fx.filtration.stages) {
    RatMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double v = p.matrix.at(i, j);
        m.at(i, j) = v == 0.5 ? Rat(1, 2) : Rat(static_cast<long long>(v));
      }
    exact.push_back(std::move(m));
  }
  bool exact_ok = true;
  for (int a = 0; a < T; ++a)
    for (int b = 0; b < T; ++b)
      if (!(exact[static_cast<size_t>(a)] * exact[static_cast<size_t>(b)] ==
            exact[static_cast<size_t>(std::min(a, b))]))
        exact_ok = false;
  for (int n = 0; n < T && exact_ok; ++n)
    for (int m = n; m < T; ++m) {
      std::vector<Rat> zm(static_cast<size_t>(dim));
      for (int i = 0; i < dim; ++i)
        zm[static_cast<size_t>(i)] = Rat(static_cast<long long>(fx.trace[static_cast<size_t>(m)][i]));
      std::vector<Rat> ez = exact[static_cast<size_t>(n)].apply(zm);
      for (int i = 0; i < dim; ++i)
        if (ez[static_cast<size_t>(i)] != Rat(static_cast<long long>(fx.trace[static_cast<size_t>(n)][i])))
          exact_ok = false;
    }
  r.verdicts["exact_rational_identities"] = exact_ok;

  ProcessTrace trace = make_trace(fx.filtration, fx.trace, ProcessKind::Martingale);
  merge_report(r, doob_experiment(trace, fx.view, profile_tolerance), "");
  return r;
}

}  // namespace uolab
