// Acceptance harness: one line per criterion, PASS/FAIL, nonzero exit
// when anything fails. Each criterion is self-contained and pins its
// own tolerances.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uolab/json_io.hpp"

using namespace uolab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> random_coords(std::mt19937_64& rng, int dim, bool integral) {
  std::vector<double> c(static_cast<size_t>(dim));
  if (integral) {
    std::uniform_int_distribution<int> d(-6, 6);
    for (double& v : c) v = d(rng);
  } else {
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (double& v : c) v = d(rng);
  }
  return c;
}

ModelPtr model_kind(int which, int dim) {
  switch (which) {
    case 0: return make_model(LatticeModel::l1(std::vector<double>(static_cast<size_t>(dim), 1.0)));
    case 1: return make_model(LatticeModel::lp(dim, 2.5));
    case 2: return make_model(LatticeModel::sup(dim));
    default: return make_model(LatticeModel::c0(dim));
  }
}

// ---- 1: lattice law suite --------------------------------------------

Outcome lattice_laws() {
  Outcome o;
  std::mt19937_64 rng(1001);
  auto t0 = std::chrono::steady_clock::now();
  for (int kind = 0; kind < 4; ++kind) {
    for (int iter = 0; iter < 10000; ++iter) {
      int dim = 1 + static_cast<int>(rng() % 10);
      ModelPtr m = model_kind(kind, dim);
      bool integral = iter % 2 == 0;
      double tol = integral ? 0.0 : 1e-12;
      Element x(m, random_coords(rng, dim, integral));
      Element y(m, random_coords(rng, dim, integral));
      Element z(m, random_coords(rng, dim, integral));

      auto close = [&](const Element& a, const Element& b) {
        for (int i = 0; i < dim; ++i)
          if (std::fabs(a[i] - b[i]) > tol) return false;
        return true;
      };

      o.require(close(meet(x, y), meet(y, x)), "meet commutativity");
      o.require(close(join(x, y), join(y, x)), "join commutativity");
      o.require(close(meet(x, meet(y, z)), meet(meet(x, y), z)), "meet associativity");
      o.require(close(join(x, join(y, z)), join(join(x, y), z)), "join associativity");
      o.require(close(meet(x, join(x, y)), x), "absorption");
      o.require(close(join(x, meet(x, y)), x), "absorption dual");
      o.require(close(meet(x, y) + join(x, y), x + y), "modular identity");
      o.require(close(x, pos(x) - neg(x)), "x = x+ - x-");
      o.require(close(abs(x), pos(x) + neg(x)), "|x| = x+ + x-");
      o.require(close(meet(pos(x), neg(x)), zero_element(m)), "x+ ^ x- = 0");

      Element d = abs(x - y);
      Element dj = abs(join(x, z) - join(y, z));
      Element dm = abs(meet(x, z) - meet(y, z));
      for (int i = 0; i < dim; ++i) {
        o.require(dj[i] <= d[i] + 1e-12, "join is a lattice contraction");
        o.require(dm[i] <= d[i] + 1e-12, "meet is a lattice contraction");
      }
      o.require(norm(x + y) <= norm(x) + norm(y) + 1e-9, "norm triangle inequality");
      o.require(norm(meet(abs(x), abs(y))) <= norm(x) + 1e-9, "norm monotone");
      if (!o.ok) return o;
    }
  }
  double t = seconds_since(t0);
  o.require(t < 10.0, "runtime " + std::to_string(t) + "s exceeds 10s");
  return o;
}

// ---- 2: band projection laws -----------------------------------------

Outcome band_laws() {
  Outcome o;
  std::mt19937_64 rng(1002);
  for (int iter = 0; iter < 1000; ++iter) {
    int dim = 1 + static_cast<int>(rng() % 12);
    ModelPtr m = model_kind(static_cast<int>(rng() % 4), dim);
    Element gen(m, random_coords(rng, dim, true));
    Element x(m, random_coords(rng, dim, false));
    Element y(m, random_coords(rng, dim, false));

    Element px = band_projection(gen, x);
    o.require(band_projection(gen, px).coords() == px.coords(), "idempotence not exact");

    Element xp = abs(x);
    Element pxp = band_projection(gen, xp);
    for (int i = 0; i < dim; ++i) {
      o.require(pxp[i] >= 0.0 && pxp[i] <= xp[i], "0 <= Px <= x violated");
    }

    Element lhs = band_projection(gen, meet(abs(x), y));
    Element rhs = meet(abs(band_projection(gen, x)), band_projection(gen, y));
    BandDescriptor band = BandDescriptor::from_generator(gen);
    for (int i = 0; i < dim; ++i)
      if (band.support.count(i))
        o.require(lhs[i] == rhs[i], "P(|x| ^ y) != |Px| ^ Py on the band");
    if (!o.ok) return o;
  }
  return o;
}

// ---- 3: partial sums in the c0 tag -----------------------------------

Outcome partial_sum_profile() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  ModelPtr m = make_model(LatticeModel::c0(50));
  std::vector<Element> terms;
  std::vector<double> c(50, 0.0);
  for (int n = 0; n < 50; ++n) {
    c[static_cast<size_t>(n)] = 1.0;
    terms.emplace_back(m, c);
  }
  SequenceFamily seq = make_sequence(m, std::move(terms));
  ConvergenceProfile p = uo_cauchy_profile(seq, default_unit(m), 0.15);
  for (int k = 1; k <= 45; ++k)
    o.require(p.c[static_cast<size_t>(k - 1)] == 1.0 / (k + 1),
              "c_" + std::to_string(k) + " != 1/(k+1) exactly");
  o.require(p.verdict == Verdict::Converged, "profile not converged");
  o.require(!admits_limit(ones_element(m)), "all-ones limit not rejected");
  double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + std::to_string(t) + "s exceeds 1s");
  return o;
}

// ---- 4: block-average fixture ----------------------------------------

Outcome block_average() {
  Outcome o;
  BlockAverageFixture fx = build_block_average_fixture(8);
  FiltrationReport fr = validate_filtration(fx.filtration);
  o.require(fr.compatible, "filtration not compatible");
  o.require(fr.bistochastic, "filtration not bistochastic");
  o.require(fr.bounded_const == 1.0, "bounded_const != 1");

  ProcessTrace trace = make_trace(fx.filtration, fx.trace, ProcessKind::Martingale);
  ProcessCheck check = verify_process(trace, 0.0);
  o.require(check.is_martingale && check.max_violation == 0.0, "martingale not exact");

  ExperimentReport r = block_average_experiment(8, 0.15);
  o.require(r.verdicts.at("exact_rational_identities"), "rational identities not exact");
  o.require(r.verdicts.at("bounded_positive_part"), "positive part unbounded");
  o.require(r.verdicts.at("uo_cauchy_converged"), "uo-Cauchy profile not converged");
  o.require(!r.verdicts.at("limit_candidate_admissible"), "c0 tag failed to reject the limit");
  return o;
}

// ---- 5: conditional-expectation laws ---------------------------------

PartitionChain random_chain(std::mt19937_64& rng, int max_dim) {
  int dim = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_dim - 1));
  std::vector<long long> w(static_cast<size_t>(dim));
  long long total = 0;
  for (auto& v : w) {
    v = 1 + static_cast<long long>(rng() % 9);
    total += v;
  }
  std::vector<Rat> mu;
  for (long long v : w) mu.emplace_back(v, total);

  std::vector<std::vector<std::vector<int>>> parts;
  std::vector<std::vector<int>> current(1);
  current[0].resize(static_cast<size_t>(dim));
  std::iota(current[0].begin(), current[0].end(), 0);
  parts.push_back(current);
  int levels = 1 + static_cast<int>(rng() % 4);
  for (int t = 0; t < levels; ++t) {
    std::vector<std::vector<int>> next;
    for (const auto& block : current) {
      if (block.size() == 1 || rng() % 4 == 0) {
        next.push_back(block);
        continue;
      }
      size_t cut = 1 + rng() % (block.size() - 1);
      next.emplace_back(block.begin(), block.begin() + static_cast<long>(cut));
      next.emplace_back(block.begin() + static_cast<long>(cut), block.end());
    }
    parts.push_back(next);
    current = std::move(next);
  }
  return make_partition_chain(std::move(mu), std::move(parts));
}

Outcome conditional_expectation_laws() {
  Outcome o;
  std::mt19937_64 rng(1005);
  for (int iter = 0; iter < 500; ++iter) {
    PartitionChain chain = random_chain(rng, 64);
    const int n = chain.dim();
    std::vector<RatMatrix> exact;
    for (int t = 0; t < chain.stages(); ++t)
      exact.push_back(conditional_expectation_exact(chain, t));

    std::vector<Rat> ones(static_cast<size_t>(n), Rat(1));
    for (const RatMatrix& e : exact) {
      o.require(e.apply(ones) == ones, "E 1 != 1 exactly");
      for (int j = 0; j < n && o.ok; ++j) {
        Rat col;
        for (int i = 0; i < n; ++i) col += chain.mu[static_cast<size_t>(i)] * e.at(i, j);
        o.require(col == chain.mu[static_cast<size_t>(j)], "E* mu != mu exactly");
      }
    }
    for (size_t a = 0; a < exact.size() && o.ok; ++a)
      for (size_t b = 0; b < exact.size() && o.ok; ++b)
        o.require(exact[a] * exact[b] == exact[std::min(a, b)], "E_s E_t != E_min exactly");
    if (!o.ok) return o;
  }
  return o;
}

// ---- 6: witness-existence vs strict-positivity cross-check -----------

Matrix rank_one(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  std::vector<double> u(static_cast<size_t>(dim)), v(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    u[static_cast<size_t>(i)] = (i == 0 || rng() % 3) ? mag(rng) : 0.0;
    v[static_cast<size_t>(i)] = (i == 0 || rng() % 3) ? mag(rng) : 0.0;
  }
  double dot = 0.0;
  for (int i = 0; i < dim; ++i) dot += u[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      m.at(i, j) = u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)] / dot;
  return m;
}

Matrix random_projection(std::mt19937_64& rng, int dim) {
  if (dim < 2) {
    Matrix m(1, 1);
    m.at(0, 0) = rng() % 4 ? 1.0 : 0.0;
    return m;
  }
  switch (rng() % 4) {
    case 0: {  // conditional expectation of a random chain of this size
      PartitionChain chain = random_chain(rng, dim);
      int t = static_cast<int>(rng() % static_cast<unsigned>(chain.stages()));
      Matrix e = conditional_expectation(chain, t).matrix;
      if (e.rows() == dim) return e;
      Matrix padded = Matrix::identity(dim);
      for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.rows(); ++j) padded.at(i, j) = e.at(i, j);
      return padded;
    }
    case 1: {  // band projection, possibly with dead coordinates
      Matrix m(dim, dim);
      for (int i = 0; i < dim; ++i) m.at(i, i) = rng() % 4 ? 1.0 : 0.0;
      return m;
    }
    case 2:
      return rank_one(rng, dim);
    default: {  // block diagonal mixture
      int split = 1 + static_cast<int>(rng() % static_cast<unsigned>(dim - 1));
      Matrix a = random_projection(rng, split);
      Matrix b = random_projection(rng, dim - split);
      Matrix m(dim, dim);
      for (int i = 0; i < split; ++i)
        for (int j = 0; j < split; ++j) m.at(i, j) = a.at(i, j);
      for (int i = 0; i < dim - split; ++i)
        for (int j = 0; j < dim - split; ++j) m.at(split + i, split + j) = b.at(i, j);
      return m;
    }
  }
}

Outcome witness_cross_check() {
  Outcome o;
  std::mt19937_64 rng(1006);
  int seen_negative = 0, seen_positive = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    int dim = 2 + static_cast<int>(rng() % 15);
    Matrix e = random_projection(rng, dim);
    ModelPtr model = make_model(LatticeModel::l1(std::vector<double>(static_cast<size_t>(dim), 1.0)));
    DoubleConditionReport r =
        double_condition_diagnostics({e, ProjectionKind::GeneralPositive}, model);
    o.require(r.equivalence_holds,
              "disagreement between witness and strict-positivity routes at iter " +
                  std::to_string(iter));
    if (r.strictly_positive && r.adjoint_strictly_positive)
      ++seen_positive;
    else
      ++seen_negative;
    if (!o.ok) return o;
  }
  o.require(seen_positive > 50 && seen_negative > 50, "generator not exercising both outcomes");
  return o;
}

// ---- 7: urn at depth 10 ----------------------------------------------

Outcome urn_desk_scale() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport r = polya_urn_experiment(10, 0.15);
  o.require(r.verdicts.at("positive_part_leq_one_exact"), "sup x0star(z+) > 1");
  o.require(r.verdicts.at("oracle_exact_martingale"), "exact tower identity fails");
  o.require(r.scalar_stats.at("oracle_max_deviation") <= 1e-12,
            "oracle and experiment disagree beyond 1e-12");

  const ConvergenceProfile* prof = nullptr;
  for (const auto& [name, p] : r.profiles)
    if (name == "uo_cauchy") prof = &p;
  o.require(prof != nullptr, "no uo_cauchy profile");
  if (prof) {
    for (size_t k = 1; k < prof->c.size(); ++k)
      o.require(prof->c[k] <= prof->c[k - 1], "profile not decreasing");
    o.require(prof->c.back() <= 0.15, "c_{T-1} > 0.15");
    o.require(prof->verdict == Verdict::Converged, "profile not converged");
  }
  double t = seconds_since(t0);
  o.require(t < 30.0, "runtime " + std::to_string(t) + "s exceeds 30s");
  return o;
}

// ---- 8: closed martingales on the depth-6 dyadic chain ---------------

Outcome dyadic_closed_martingales() {
  Outcome o;
  PartitionChain chain = dyadic_chain(6);
  Filtration f = chain_to_filtration(chain);

  // first stage whose blocks have all shrunk to size <= 4
  int stab = 0;
  for (int t = 0; t < chain.stages(); ++t) {
    bool small = true;
    for (const auto& b : chain.partitions[static_cast<size_t>(t)])
      if (b.size() > 4) small = false;
    if (small) { stab = t; break; }
  }

  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<int> d(-64, 64);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> xc(static_cast<size_t>(chain.dim()));
    for (double& v : xc) v = d(rng) / 8.0;  // dyadic grid keeps averages exact
    Element x(f.model, xc);
    ProcessTrace trace = closed_martingale(f, x);

    std::vector<double> res;
    for (const Element& z : trace.values.terms) res.push_back(norm(x - z));
    o.require(res.back() == 0.0, "final-stage residual not exactly 0");
    for (size_t n = static_cast<size_t>(stab); n + 1 < res.size(); ++n)
      o.require(res[n + 1] <= res[n], "residual not monotone after support stabilization");

    std::optional<Element> u = aob_search(trace.values.terms, 0.5);
    o.require(u.has_value(), "no almost-order-boundedness witness found");
    if (u) o.require(almost_order_bounded(trace.values.terms, *u, 0.5).bounded,
                     "witness fails certification");
    if (!o.ok) return o;
  }
  return o;
}

// ---- 9: norm lower semicontinuity suite ------------------------------

Outcome fatou_suite() {
  Outcome o;
  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int iter = 0; iter < 1000; ++iter) {
    int dim = 5 + static_cast<int>(rng() % 26);
    ModelPtr m = model_kind(static_cast<int>(rng() % 3), dim);  // l1 / lp / sup
    std::vector<double> xc(static_cast<size_t>(dim));
    for (double& v : xc) v = dist(rng);
    Element x(m, xc);
    std::vector<Element> terms;
    for (int n = 1; n <= 60; ++n) {
      std::vector<double> w(static_cast<size_t>(dim));
      for (double& v : w) v = dist(rng);
      w[0] = 1.0;
      terms.push_back(x + std::pow(2.0, -n) * Element(m, std::move(w)));
    }
    SequenceFamily seq = make_sequence(m, std::move(terms));
    FatouResult fr = fatou_check(seq, x);
    o.require(fr.ok, "||limit|| > liminf + 1e-9 at iter " + std::to_string(iter));
    o.require(fr.limit_norm <= fr.liminf + 1e-9, "bound violated");
    if (!o.ok) return o;
  }
  return o;
}

// ---- 10: CLI determinism ---------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  Outcome o;
  const std::string cli = UOLAB_CLI_PATH;
  const std::string cfg = std::string(UOLAB_FIXTURES_DIR) + "/dyadic_closed_martingale.json";
  fs::path a = fs::temp_directory_path() / "uolab_acc_det_a";
  fs::path b = fs::temp_directory_path() / "uolab_acc_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  for (const fs::path& dir : {a, b}) {
    std::string cmd = cli + " run --config " + cfg + " --seed 7 --out " + dir.string() +
                      " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    o.require(WEXITSTATUS(rc) == 0, "CLI run failed");
  }
  if (!o.ok) return o;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    fs::path twin = b / entry.path().filename();
    o.require(fs::exists(twin), "missing artifact " + twin.string());
    if (fs::exists(twin)) {
      o.require(slurp(entry.path()) == slurp(twin),
                "artifact differs: " + entry.path().filename().string());
      ++compared;
    }
  }
  o.require(compared >= 2, "no artifacts compared");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"lattice-law-suite", lattice_laws},
      {"band-projection-laws", band_laws},
      {"c0-partial-sum-profile", partial_sum_profile},
      {"block-average-fixture", block_average},
      {"conditional-expectation-laws", conditional_expectation_laws},
      {"witness-existence-cross-check", witness_cross_check},
      {"urn-desk-scale", urn_desk_scale},
      {"dyadic-closed-martingales", dyadic_closed_martingales},
      {"norm-lower-semicontinuity", fatou_suite},
      {"cli-determinism", cli_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double t = seconds_since(t0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2fs", t);
    if (o.ok) {
      std::cout << "PASS " << c.name << " (" << buf << ")\n";
    } else {
      std::cout << "FAIL " << c.name << " (" << buf << "): " << o.detail << "\n";
      ++failures;
    }
  }
  return failures;
}
