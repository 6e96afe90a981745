#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cekm/distributions.hpp"
#include "cekm/estimators.hpp"
#include "cekm/random.hpp"

namespace cekm {

enum class Metric { mse, bias, classification, coverage, sd_gap };

// Estimators the experiment engine evaluates per (replication, k).
//   ekm_m1..3   : normalized product-limit log-moments m^r
//   km_m1..3    : r! (normalized product-limit Hill)^r plug-ins
//   bench_m1..3 : r! (benchmark Hill)^r plug-ins
//   hill, moment, bench_hill, bench_moment : extreme value index estimators
enum class SimEstimator {
  ekm_m1, ekm_m2, ekm_m3,
  km_m1, km_m2, km_m3,
  bench_m1, bench_m2, bench_m3,
  hill, bench_hill, moment, bench_moment,
};

std::string to_string(Metric metric);
std::string to_string(SimEstimator est);
Metric parse_metric(const std::string& text);
SimEstimator parse_sim_estimator(const std::string& text);

// Declarative Monte-Carlo study. A result is a pure function of the spec:
// replication r draws from the stream (master_seed, r), so reruns and any
// worker count produce identical output.
struct ExperimentSpec {
  std::string name = "custom";
  Distribution f = Distribution::pareto(2.0);
  Distribution g = Distribution::pareto(2.0 / 3.0);
  std::size_t n = 1000;
  std::size_t reps = 200;
  std::vector<std::size_t> k_grid;
  std::vector<SimEstimator> estimators;
  std::vector<Metric> metrics;
  bool normalized = true;
  double ci_level = 0.95;
  double classification_radius = 0.2;
  std::uint64_t master_seed = 42;

  void validate() const;
};

struct MetricRow {
  std::string estimator;
  std::size_t k = 0;
  std::string metric;
  double value = 0.0;
  std::size_t reps_effective = 0;
};

struct ExperimentResult {
  std::string name;
  std::uint64_t seed = 0;
  std::string spec_digest;
  std::vector<MetricRow> rows;
};

// Deterministic replication stream: pure function of (master_seed, rep index).
RandomStream replicate_stream(std::uint64_t master_seed, std::uint64_t rep_index);

// General engine: runs every requested estimator/metric combination.
// Degenerate replications are excluded from means and surface as `failures`
// metric rows; aggregation uses pairwise summation in replication order, so
// the outcome does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

// Study-shaped wrappers with the matching metric checks.
ExperimentResult run_mse_experiment(const ExperimentSpec& spec, unsigned threads = 1);
ExperimentResult run_classification_experiment(const ExperimentSpec& spec, unsigned threads = 1);
ExperimentResult run_coverage_experiment(const ExperimentSpec& spec, unsigned threads = 1);

// CSV with columns estimator,k,metric,value,reps_effective after two comment
// lines carrying the spec digest and master seed.
std::string to_csv(const ExperimentResult& result);

// JSON document mirroring ExperimentSpec (distribution literals, k_grid as an
// array or {"from","to","step"}).
ExperimentSpec parse_experiment_spec(const std::string& json_text);
std::string spec_to_json(const ExperimentSpec& spec);

// Named study presets; desk_scale shrinks repetition counts and grids.
std::vector<ExperimentSpec> preset_experiments(const std::string& preset, bool desk_scale,
                                               std::uint64_t master_seed);

}  // namespace cekm
