#include "uolab/json_io.hpp"

#include <charconv>
#include <cmath>

namespace uolab {

namespace {

std::string tag_name(SpaceTag t) {
  switch (t) {
    case SpaceTag::L1: return "l1";
    case SpaceTag::Lp: return "lp";
    case SpaceTag::EllInfinity: return "ell_infinity";
    case SpaceTag::C0Truncation: return "c0";
    case SpaceTag::Product: return "product";
  }
  return "l1";
}

SpaceTag tag_from_name(const std::string& s, const std::string& path) {
  if (s == "l1") return SpaceTag::L1;
  if (s == "lp") return SpaceTag::Lp;
  if (s == "ell_infinity") return SpaceTag::EllInfinity;
  if (s == "c0") return SpaceTag::C0Truncation;
  if (s == "product") return SpaceTag::Product;
  throw SchemaError(path, "unknown tag '" + s + "'");
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing");
  return *it;
}

Rat rat_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(s));
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw SchemaError(path, "not a rational: '" + s + "'");
    }
  }
  throw SchemaError(path, "expected a rational (number or \"p/q\")");
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Json to_json(const LatticeModel& m) {
  Json j;
  j["dim"] = m.dim;
  j["weights"] = m.weights;
  switch (m.norm_kind) {
    case NormKind::L1Weighted: j["norm"] = "l1"; break;
    case NormKind::Lp: j["norm"] = "lp:" + format_double(m.p); break;
    case NormKind::Sup:
    case NormKind::C0TaggedSup: j["norm"] = "sup"; break;
  }
  j["tag"] = tag_name(m.tag);
  if (m.tag == SpaceTag::C0Truncation) j["decay_threshold"] = m.decay_threshold;
  return j;
}

LatticeModel model_from_json(const Json& j, const std::string& path) {
  LatticeModel m;
  const Json& dim = field(j, "dim", path);
  if (!dim.is_number_integer()) throw SchemaError(path + ".dim", "expected an integer");
  m.dim = dim.get<int>();

  m.weights = doubles_from_json(field(j, "weights", path), path + ".weights");

  const Json& norm = field(j, "norm", path);
  if (!norm.is_string()) throw SchemaError(path + ".norm", "expected a string");
  std::string n = norm.get<std::string>();
  if (n == "l1") {
    m.norm_kind = NormKind::L1Weighted;
  } else if (n == "sup") {
    m.norm_kind = NormKind::Sup;
  } else if (n.rfind("lp:", 0) == 0) {
    m.norm_kind = NormKind::Lp;
    try {
      m.p = std::stod(n.substr(3));
    } catch (const std::exception&) {
      throw SchemaError(path + ".norm", "bad exponent in '" + n + "'");
    }
  } else {
    throw SchemaError(path + ".norm", "expected l1, lp:<p> or sup, got '" + n + "'");
  }

  const Json& tag = field(j, "tag", path);
  if (!tag.is_string()) throw SchemaError(path + ".tag", "expected a string");
  m.tag = tag_from_name(tag.get<std::string>(), path + ".tag");
  if (m.tag == SpaceTag::C0Truncation && m.norm_kind == NormKind::Sup)
    m.norm_kind = NormKind::C0TaggedSup;

  if (auto it = j.find("decay_threshold"); it != j.end()) {
    if (!it->is_number()) throw SchemaError(path + ".decay_threshold", "expected a number");
    m.decay_threshold = it->get<double>();
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw SchemaError(path, e.what());
  }
  return m;
}

Json to_json(const Element& x) {
  Json j;
  j["coords"] = x.coords();
  return j;
}

std::vector<double> doubles_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

Json to_json(const Filtration& f) {
  Json j;
  Json stages = Json::array();
  for (const Projection& p : f.stages) {
    Json rows = Json::array();
    for (int i = 0; i < p.matrix.rows(); ++i)
      for (int k = 0; k < p.matrix.cols(); ++k) rows.push_back(p.matrix.at(i, k));
    stages.push_back(std::move(rows));
  }
  j["stages"] = std::move(stages);
  if (f.witness) {
    Json w;
    w["x0"] = f.witness->x0.coords();
    w["x0star"] = f.witness->x0star.weights();
    j["witness"] = std::move(w);
  }
  return j;
}

Filtration filtration_from_json(const Json& j, ModelPtr model, const std::string& path) {
  const Json& stages = field(j, "stages", path);
  if (!stages.is_array()) throw SchemaError(path + ".stages", "expected an array");
  if (stages.empty()) throw SchemaError(path + ".stages", "must not be empty");
  Filtration f{std::move(model), {}, std::nullopt};
  const int n = f.model->dim;
  for (size_t t = 0; t < stages.size(); ++t) {
    std::string spath = path + ".stages[" + std::to_string(t) + "]";
    std::vector<double> flat = doubles_from_json(stages[t], spath);
    if (static_cast<int>(flat.size()) != n * n)
      throw SchemaError(spath, "expected " + std::to_string(n * n) + " entries (row-major)");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) m.at(i, k) = flat[static_cast<size_t>(i * n + k)];
    Projection p{std::move(m), ProjectionKind::GeneralPositive};
    try {
      check_projection(p);
    } catch (const std::exception& e) {
      throw SchemaError(spath, e.what());
    }
    f.stages.push_back(std::move(p));
  }
  if (auto it = j.find("witness"); it != j.end()) {
    std::string wpath = path + ".witness";
    std::vector<double> x0 = doubles_from_json(field(*it, "x0", wpath), wpath + ".x0");
    std::vector<double> w = doubles_from_json(field(*it, "x0star", wpath), wpath + ".x0star");
    if (static_cast<int>(x0.size()) != n) throw SchemaError(wpath + ".x0", "dimension mismatch");
    if (static_cast<int>(w.size()) != n)
      throw SchemaError(wpath + ".x0star", "dimension mismatch");
    f.witness = FiltrationWitness{Element(f.model, std::move(x0)), Functional(std::move(w))};
  }
  return f;
}

Json to_json(const PartitionChain& c) {
  Json j;
  Json mu = Json::array();
  for (const Rat& r : c.mu) mu.push_back(r.str());
  j["mu"] = std::move(mu);
  j["partitions"] = c.partitions;
  return j;
}

PartitionChain chain_from_json(const Json& j, const std::string& path) {
  const Json& mu = field(j, "mu", path);
  if (!mu.is_array()) throw SchemaError(path + ".mu", "expected an array");
  std::vector<Rat> weights;
  for (size_t i = 0; i < mu.size(); ++i)
    weights.push_back(rat_from_json(mu[i], path + ".mu[" + std::to_string(i) + "]"));

  const Json& parts = field(j, "partitions", path);
  if (!parts.is_array()) throw SchemaError(path + ".partitions", "expected an array");
  std::vector<std::vector<std::vector<int>>> partitions;
  for (size_t t = 0; t < parts.size(); ++t) {
    std::string tpath = path + ".partitions[" + std::to_string(t) + "]";
    if (!parts[t].is_array()) throw SchemaError(tpath, "expected an array of blocks");
    std::vector<std::vector<int>> level;
    for (size_t b = 0; b < parts[t].size(); ++b) {
      std::string bpath = tpath + "[" + std::to_string(b) + "]";
      if (!parts[t][b].is_array()) throw SchemaError(bpath, "expected an array of atom indices");
      std::vector<int> block;
      for (size_t a = 0; a < parts[t][b].size(); ++a) {
        const Json& atom = parts[t][b][a];
        if (!atom.is_number_integer())
          throw SchemaError(bpath + "[" + std::to_string(a) + "]", "expected an integer");
        block.push_back(atom.get<int>());
      }
      level.push_back(std::move(block));
    }
    partitions.push_back(std::move(level));
  }
  try {
    return make_partition_chain(std::move(weights), std::move(partitions));
  } catch (const std::exception& e) {
    throw SchemaError(path, e.what());
  }
}

Json al_view_to_json(const ALView& v) {
  Json j;
  j["x0"] = v.x0.coords();
  j["x0star"] = v.x0star.weights();
  return j;
}

Json to_json(const ConvergenceProfile& p) {
  Json j;
  j["mode"] = to_string(p.mode);
  j["verdict"] = to_string(p.verdict);
  j["tolerance"] = p.tolerance;
  j["c"] = p.c;
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["name"] = r.name;
  Json profiles = Json::array();
  for (const auto& [name, prof] : r.profiles) {
    Json p = to_json(prof);
    p["name"] = name;
    profiles.push_back(std::move(p));
  }
  j["profiles"] = std::move(profiles);
  j["scalar_stats"] = r.scalar_stats;
  j["verdicts"] = r.verdicts;
  j["notes"] = r.notes;
  return j;
}

std::string profile_csv(const ConvergenceProfile& p) {
  std::string out = "k,c_k\n";
  for (size_t k = 0; k < p.c.size(); ++k)
    out += std::to_string(k + 1) + "," + format_double(p.c[k]) + "\n";
  return out;
}

std::string report_csv(const ExperimentReport& r) {
  std::string out = "experiment,metric,value\n";
  for (const auto& [name, v] : r.scalar_stats)
    out += r.name + "," + name + "," + format_double(v) + "\n";
  for (const auto& [name, v] : r.verdicts)
    out += r.name + "," + name + "," + (v ? "true" : "false") + "\n";
  return out;
}

}  // namespace uolab
