#include "uolab/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace uolab {

void check_projection(const Projection& p, double tolerance) {
  if (!p.matrix.square()) throw std::invalid_argument("Projection: matrix not square");
  if (!p.matrix.nonnegative()) throw std::invalid_argument("Projection: negative entry");
  double dev = max_abs_diff(p.matrix * p.matrix, p.matrix);
  if (dev > tolerance)
    throw std::invalid_argument("Projection: not idempotent (deviation " + std::to_string(dev) + ")");
}

double operator_norm(const Matrix& m, const LatticeModel& model) {
  switch (model.norm_kind) {
    case NormKind::L1Weighted: {
      // ||E||_{L1(w)} = max_j sum_i w_i |E_ij| / w_j
      double best = 0.0;
      for (int j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows(); ++i)
          s += model.weights[static_cast<size_t>(i)] * std::fabs(m.at(i, j));
        best = std::max(best, s / model.weights[static_cast<size_t>(j)]);
      }
      return best;
    }
    case NormKind::Sup:
    case NormKind::C0TaggedSup: {
      double best = 0.0;
      for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += std::fabs(m.at(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Lp: {
      // Power probe: random directions plus a few ascent passes.
      std::mt19937_64 rng(777);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      ModelPtr mp = make_model(model);
      double best = 0.0;
      for (int k = 0; k < 64; ++k) {
        std::vector<double> x(static_cast<size_t>(model.dim));
        for (double& v : x) v = dist(rng);
        for (int it = 0; it < 4; ++it) {
          Element ex(mp, x);
          double nx = norm(ex);
          if (nx == 0.0) break;
          std::vector<double> y = m.apply(x);
          best = std::max(best, norm(Element(mp, y)) / nx);
          double ny = norm(Element(mp, y));
          if (ny == 0.0) break;
          for (double& v : y) v /= ny;
          x = std::move(y);
        }
      }
      return best;
    }
  }
  return 0.0;
}

FiltrationReport validate_filtration(const Filtration& f) {
  if (f.stages.empty()) throw std::invalid_argument("Filtration: no stages");
  FiltrationReport r;
  const int n = f.model->dim;
  bool structural = true;
  for (const Projection& p : f.stages) {
    if (!p.matrix.square() || p.matrix.rows() != n)
      throw std::invalid_argument("Filtration: stage matrix shape mismatch");
    if (!p.matrix.nonnegative()) throw std::invalid_argument("Filtration: negative entry in stage");
    if (max_abs_diff(p.matrix * p.matrix, p.matrix) > kCompatTol) {
      structural = false;
      r.notes.push_back("stage not idempotent");
    }
  }

  r.compatible = structural;
  const int T = static_cast<int>(f.stages.size());
  for (int a = 0; a < T && r.compatible; ++a)
    for (int b = 0; b < T && r.compatible; ++b) {
      const Matrix& low = f.stages[static_cast<size_t>(std::min(a, b))].matrix;
      if (max_abs_diff(f.stages[static_cast<size_t>(a)].matrix *
                           f.stages[static_cast<size_t>(b)].matrix,
                       low) > kCompatTol) {
        r.compatible = false;
        r.notes.push_back("compatibility E_n E_m = E_{m^n} fails at pair (" +
                          std::to_string(a + 1) + "," + std::to_string(b + 1) + ")");
      }
    }

  if (f.witness) {
    r.bistochastic = true;
    const Element& x0 = f.witness->x0;
    const std::vector<double>& w = f.witness->x0star.weights();
    if (!is_weak_unit(x0) || !f.witness->x0star.strict()) {
      r.bistochastic = false;
      r.notes.push_back("witness pair is not (weak unit, strict functional)");
    }
    for (int t = 0; t < T && r.bistochastic; ++t) {
      const Matrix& e = f.stages[static_cast<size_t>(t)].matrix;
      std::vector<double> ex = e.apply(x0.coords());
      std::vector<double> etw = e.transpose().apply(w);
      for (int i = 0; i < n; ++i) {
        if (std::fabs(ex[static_cast<size_t>(i)] - x0[i]) > kCompatTol ||
            std::fabs(etw[static_cast<size_t>(i)] - w[static_cast<size_t>(i)]) > kCompatTol) {
          r.bistochastic = false;
          r.notes.push_back("double condition fails at stage " + std::to_string(t + 1));
          break;
        }
      }
    }
  }

  r.bounded_const = 0.0;
  for (const Projection& p : f.stages)
    r.bounded_const = std::max(r.bounded_const, operator_norm(p.matrix, *f.model));
  return r;
}

std::vector<double> PartitionChain::mu_doubles() const {
  std::vector<double> v(mu.size());
  for (size_t i = 0; i < mu.size(); ++i) v[i] = mu[i].to_double();
  return v;
}

namespace {

void check_partition(const std::vector<std::vector<int>>& part, int dim) {
  std::vector<bool> seen(static_cast<size_t>(dim), false);
  for (const auto& block : part) {
    if (block.empty()) throw std::invalid_argument("PartitionChain: empty block");
    for (int a : block) {
      if (a < 0 || a >= dim) throw std::invalid_argument("PartitionChain: atom out of range");
      if (seen[static_cast<size_t>(a)]) throw std::invalid_argument("PartitionChain: atom repeated");
      seen[static_cast<size_t>(a)] = true;
    }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw std::invalid_argument("PartitionChain: atoms not covered");
}

std::vector<int> block_index_of(const std::vector<std::vector<int>>& part, int dim) {
  std::vector<int> idx(static_cast<size_t>(dim), -1);
  for (size_t b = 0; b < part.size(); ++b)
    for (int a : part[b]) idx[static_cast<size_t>(a)] = static_cast<int>(b);
  return idx;
}

}  // namespace

PartitionChain make_partition_chain(std::vector<Rat> mu,
                                    std::vector<std::vector<std::vector<int>>> partitions) {
  const int dim = static_cast<int>(mu.size());
  if (dim < 1) throw std::invalid_argument("PartitionChain: empty measure");
  for (const Rat& m : mu)
    if (!(Rat(0) < m)) throw std::invalid_argument("PartitionChain: mu must be strictly positive");
  if (partitions.empty()) throw std::invalid_argument("PartitionChain: no partitions");
  for (const auto& part : partitions) check_partition(part, dim);
  // Each coarse block must be a union of next-stage blocks.
  for (size_t t = 0; t + 1 < partitions.size(); ++t) {
    std::vector<int> coarse = block_index_of(partitions[t], dim);
    for (const auto& fine_block : partitions[t + 1]) {
      int owner = coarse[static_cast<size_t>(fine_block.front())];
      for (int a : fine_block)
        if (coarse[static_cast<size_t>(a)] != owner)
          throw std::invalid_argument("PartitionChain: stage " + std::to_string(t + 2) +
                                      " does not refine stage " + std::to_string(t + 1));
    }
  }
  return {std::move(mu), std::move(partitions)};
}

RatMatrix conditional_expectation_exact(const PartitionChain& chain, int t) {
  if (t < 0 || t >= chain.stages()) throw std::out_of_range("conditional_expectation: stage");
  const int n = chain.dim();
  RatMatrix m(n, n);
  for (const auto& block : chain.partitions[static_cast<size_t>(t)]) {
    Rat total;
    for (int a : block) total += chain.mu[static_cast<size_t>(a)];
    if (total.num() == 0)
      throw std::invalid_argument("conditional_expectation: zero-probability block");
    for (int i : block)
      for (int j : block) m.at(i, j) = chain.mu[static_cast<size_t>(j)] / total;
  }
  return m;
}

Projection conditional_expectation(const PartitionChain& chain, int t) {
  RatMatrix e = conditional_expectation_exact(chain, t);
  Matrix m(e.rows(), e.cols());
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m.at(i, j) = e.at(i, j).to_double();
  return {std::move(m), ProjectionKind::ConditionalExpectation};
}

Filtration chain_to_filtration(const PartitionChain& chain) {
  std::vector<double> mu = chain.mu_doubles();
  ModelPtr model = make_model(LatticeModel::l1(mu));
  Filtration f{model, {}, std::nullopt};
  for (int t = 0; t < chain.stages(); ++t) f.stages.push_back(conditional_expectation(chain, t));
  f.witness = FiltrationWitness{ones_element(model), Functional(mu)};
  return f;
}

namespace {

// Best achievable minimum coordinate of E a over the simplex, probed by
// a coarse start plus greedy refinement. The positive fixed vectors of
// a positive projection are exactly the images of positive vectors, so
// the simplex image parametrizes the search space.
double fixed_point_max_min(const Matrix& e) {
  const int n = e.rows();
  std::vector<double> a(static_cast<size_t>(n), 1.0 / n);
  double best = -1.0;
  for (int it = 0; it < 25; ++it) {
    std::vector<double> x = e.apply(a);
    double sum = std::accumulate(x.begin(), x.end(), 0.0);
    if (sum <= 0.0) break;
    for (double& v : x) v /= sum;
    int imin = 0;
    for (int i = 1; i < n; ++i)
      if (x[static_cast<size_t>(i)] < x[static_cast<size_t>(imin)]) imin = i;
    best = std::max(best, x[static_cast<size_t>(imin)]);
    // steer mass toward whichever column feeds the starved row
    int jbest = 0;
    for (int j = 1; j < n; ++j)
      if (e.at(imin, j) > e.at(imin, jbest)) jbest = j;
    if (e.at(imin, jbest) <= 0.0) break;
    for (double& v : a) v *= 0.5;
    a[static_cast<size_t>(jbest)] += 0.5;
  }
  return best;
}

bool has_zero_column(const Matrix& m) {
  for (int j = 0; j < m.cols(); ++j) {
    bool zero = true;
    for (int i = 0; i < m.rows(); ++i)
      if (m.at(i, j) != 0.0) { zero = false; break; }
    if (zero) return true;
  }
  return false;
}

}  // namespace

DoubleConditionReport double_condition_diagnostics(const Projection& e, const ModelPtr& model) {
  check_projection(e);
  if (e.matrix.rows() != model->dim)
    throw std::invalid_argument("double_condition_diagnostics: dimension mismatch");
  DoubleConditionReport r;
  Matrix et = e.matrix.transpose();

  // (a) E strictly positive <=> no zero column; (b) adjoint likewise.
  r.strictly_positive = !has_zero_column(e.matrix);
  r.adjoint_strictly_positive = !has_zero_column(et);

  // (c)/(d): fixed-point searches over the simplex image.
  constexpr double kAbsent = 1e-9;
  double mm = fixed_point_max_min(e.matrix);
  r.has_fixed_weak_unit = mm > kAbsent;
  if (r.has_fixed_weak_unit) {
    std::vector<double> a(static_cast<size_t>(model->dim), 1.0 / model->dim);
    r.fixed_weak_unit = Element(model, e.matrix.apply(a));
  }
  double mmt = fixed_point_max_min(et);
  r.has_fixed_strict_functional = mmt > kAbsent;
  if (r.has_fixed_strict_functional) {
    std::vector<double> a(static_cast<size_t>(model->dim), 1.0 / model->dim);
    r.fixed_strict_functional = Functional(et.apply(a));
  }

  r.equivalence_holds = (r.strictly_positive && r.adjoint_strictly_positive) ==
                        (r.has_fixed_weak_unit && r.has_fixed_strict_functional);
  r.notes.push_back("order continuity of the stage is vacuous in finite dimension");
  return r;
}

std::optional<std::vector<std::vector<int>>> recover_partition(const Matrix& m) {
  if (!m.square()) return std::nullopt;
  const int n = m.rows();
  std::vector<std::vector<int>> blocks;
  std::vector<bool> placed(static_cast<size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (placed[static_cast<size_t>(i)]) continue;
    std::vector<int> support;
    for (int j = 0; j < n; ++j)
      if (m.at(i, j) != 0.0) support.push_back(j);
    if (support.empty()) return std::nullopt;
    if (!std::binary_search(support.begin(), support.end(), i)) return std::nullopt;
    // every row in the support must carry the identical support
    for (int k : support) {
      if (placed[static_cast<size_t>(k)]) return std::nullopt;
      std::vector<int> other;
      for (int j = 0; j < n; ++j)
        if (m.at(k, j) != 0.0) other.push_back(j);
      if (other != support) return std::nullopt;
    }
    for (int k : support) placed[static_cast<size_t>(k)] = true;
    blocks.push_back(std::move(support));
  }
  return blocks;
}

PartitionChain dyadic_chain(int depth) {
  if (depth < 0 || depth > 20) throw std::invalid_argument("dyadic_chain: depth out of range");
  const int dim = 1 << depth;
  std::vector<Rat> mu(static_cast<size_t>(dim), Rat(1, dim));
  std::vector<std::vector<std::vector<int>>> parts;
  for (int s = 0; s <= depth; ++s) {
    int bs = 1 << (depth - s);
    std::vector<std::vector<int>> part;
    for (int start = 0; start < dim; start += bs) {
      std::vector<int> block(static_cast<size_t>(bs));
      std::iota(block.begin(), block.end(), start);
      part.push_back(std::move(block));
    }
    parts.push_back(std::move(part));
  }
  return make_partition_chain(std::move(mu), std::move(parts));
}

}  // namespace uolab
