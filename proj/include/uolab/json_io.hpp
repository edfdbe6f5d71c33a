#ifndef UOLAB_JSON_IO_HPP_
#define UOLAB_JSON_IO_HPP_

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "uolab/al_view.hpp"
#include "uolab/convergence.hpp"
#include "uolab/filtration.hpp"
#include "uolab/martingale.hpp"

namespace uolab {

// Insertion-ordered documents so that identical inputs dump to
// identical bytes.
using Json = nlohmann::ordered_json;

// Parse/validation failure with the offending field path ("model.weights[3]").
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

Json to_json(const LatticeModel& m);
LatticeModel model_from_json(const Json& j, const std::string& path = "model");

Json to_json(const Element& x);  // {"coords": [...]}
std::vector<double> doubles_from_json(const Json& j, const std::string& path);

Json to_json(const Filtration& f);
Filtration filtration_from_json(const Json& j, ModelPtr model, const std::string& path = "filtration");

Json to_json(const PartitionChain& c);  // rationals as "p/q" strings
PartitionChain chain_from_json(const Json& j, const std::string& path = "chain");

Json al_view_to_json(const ALView& v);  // {"x0": [...], "x0star": [...]}

Json to_json(const ConvergenceProfile& p);
Json to_json(const ExperimentReport& r);

// CSV with header "k,c_k", one row per tail index.
std::string profile_csv(const ConvergenceProfile& p);
// Flat CSV (experiment, metric, value); every row also appears in the
// JSON report.
std::string report_csv(const ExperimentReport& r);

// Shortest round-trip decimal form, identical across runs.
std::string format_double(double v);

}  // namespace uolab

#endif  // UOLAB_JSON_IO_HPP_
