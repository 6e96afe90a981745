#include "cekm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <span>
#include <thread>

#include <json.hpp>

#include "cekm/asymptotics.hpp"
#include "cekm/errors.hpp"
#include "cekm/format.hpp"

namespace cekm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<SimEstimator, const char*>>& estimator_names() {
  static const std::vector<std::pair<SimEstimator, const char*>> names = {
      {SimEstimator::ekm_m1, "ekm-m1"},       {SimEstimator::ekm_m2, "ekm-m2"},
      {SimEstimator::ekm_m3, "ekm-m3"},       {SimEstimator::km_m1, "km-m1"},
      {SimEstimator::km_m2, "km-m2"},         {SimEstimator::km_m3, "km-m3"},
      {SimEstimator::bench_m1, "bench-m1"},   {SimEstimator::bench_m2, "bench-m2"},
      {SimEstimator::bench_m3, "bench-m3"},   {SimEstimator::hill, "hill"},
      {SimEstimator::bench_hill, "bench-hill"}, {SimEstimator::moment, "moment"},
      {SimEstimator::bench_moment, "bench-moment"},
  };
  return names;
}

bool is_evi_estimator(SimEstimator e) {
  return e == SimEstimator::hill || e == SimEstimator::bench_hill ||
         e == SimEstimator::moment || e == SimEstimator::bench_moment;
}

bool has_plugin_ci(SimEstimator e) {
  return e == SimEstimator::hill || e == SimEstimator::moment;
}

int log_moment_order(SimEstimator e) {
  switch (e) {
    case SimEstimator::ekm_m1:
    case SimEstimator::km_m1:
    case SimEstimator::bench_m1: return 1;
    case SimEstimator::ekm_m2:
    case SimEstimator::km_m2:
    case SimEstimator::bench_m2: return 2;
    case SimEstimator::ekm_m3:
    case SimEstimator::km_m3:
    case SimEstimator::bench_m3: return 3;
    default: return 0;
  }
}

double factorial(int r) { return r == 3 ? 6.0 : (r == 2 ? 2.0 : 1.0); }

// Pairwise sum in fixed order; keeps aggregation independent of scheduling.
double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

struct TrueTargets {
  double gamma_f = 0.0;
  MdaLabel label = MdaLabel::gumbel;
  // Per-estimator asymptotic variance of sqrt(k)(est - target); NaN if the
  // guard region excludes the scenario.
  double hill_variance = kNaN;
  double moment_variance = kNaN;
};

TrueTargets derive_targets(const ExperimentSpec& spec) {
  TrueTargets t;
  const TailProfile pf = spec.f.tail_profile();
  const TailProfile pg = spec.g.tail_profile();
  t.gamma_f = pf.gamma;
  // The true label follows the sign of gamma_F; the radius only widens the
  // estimator's Gumbel bucket.
  t.label = pf.gamma > 0.0 ? MdaLabel::frechet
                           : (pf.gamma < 0.0 ? MdaLabel::weibull : MdaLabel::gumbel);
  try {
    t.hill_variance = hill_asymptotics(pf.gamma, pg.gamma, {}).variance;
  } catch (const DomainError&) {
  }
  try {
    if (pf.gamma > 0.0) {
      t.moment_variance = moment_asymptotics_pos(pf.gamma, pg.gamma, {}).variance;
    } else if (pf.gamma < 0.0) {
      t.moment_variance = moment_asymptotics_neg(pf.gamma, pg.gamma, {}).variance;
    } else {
      t.moment_variance = moment_asymptotics_zero(pf.alpha_pair(pg), {}).variance;
    }
  } catch (const DomainError&) {
  }
  return t;
}

double target_of(SimEstimator e, double gamma_f) {
  const int r = log_moment_order(e);
  if (r == 0) return gamma_f;
  return factorial(r) * std::pow(gamma_f, r);
}

double true_variance_of(SimEstimator e, const TrueTargets& t) {
  if (e == SimEstimator::hill) return t.hill_variance;
  if (e == SimEstimator::moment) return t.moment_variance;
  return kNaN;
}

struct RepOutcome {
  double value = kNaN;
  double covered = kNaN;  // 1/0 when a plug-in CI was formed
};

RepOutcome evaluate(SimEstimator e, const TailView& view, const ExperimentSpec& spec,
                    bool want_coverage, double gamma_true) {
  RepOutcome out;
  try {
    EviEstimate est;
    bool have_est = false;
    switch (e) {
      case SimEstimator::ekm_m1:
      case SimEstimator::ekm_m2:
      case SimEstimator::ekm_m3:
        out.value = log_moment(view, log_moment_order(e), spec.normalized);
        break;
      case SimEstimator::km_m1:
      case SimEstimator::km_m2:
      case SimEstimator::km_m3: {
        const int r = log_moment_order(e);
        out.value = factorial(r) * std::pow(hill_censored(view, true).gamma_hat, r);
        break;
      }
      case SimEstimator::bench_m1:
      case SimEstimator::bench_m2:
      case SimEstimator::bench_m3: {
        const int r = log_moment_order(e);
        out.value = factorial(r) * std::pow(benchmark_hill(view).gamma_hat, r);
        break;
      }
      case SimEstimator::hill:
        est = hill_censored(view, spec.normalized);
        have_est = true;
        break;
      case SimEstimator::bench_hill:
        out.value = benchmark_hill(view).gamma_hat;
        break;
      case SimEstimator::moment:
        est = moment_censored(view, spec.normalized);
        have_est = true;
        break;
      case SimEstimator::bench_moment:
        out.value = benchmark_moment(view).gamma_hat;
        break;
    }
    if (have_est) {
      out.value = est.gamma_hat;
      if (want_coverage && has_plugin_ci(e)) {
        try {
          const double var = plugin_variance(view, est);
          const auto [lo, hi] = confidence_interval(est.gamma_hat, view.k, var, spec.ci_level);
          out.covered = (lo <= gamma_true && gamma_true <= hi) ? 1.0 : 0.0;
        } catch (const DomainError&) {
          // CI guard failed for this replication; counted, not averaged.
        }
      }
    }
  } catch (const DomainError&) {
    // Degenerate replication (all-censored view, singular moments, ...).
  }
  return out;
}

}  // namespace

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::mse: return "mse";
    case Metric::bias: return "bias";
    case Metric::classification: return "classification";
    case Metric::coverage: return "coverage";
    case Metric::sd_gap: return "sd_gap";
  }
  return "";  // unreachable
}

Metric parse_metric(const std::string& text) {
  for (Metric m : {Metric::mse, Metric::bias, Metric::classification, Metric::coverage,
                   Metric::sd_gap}) {
    if (to_string(m) == text) return m;
  }
  throw ParseError("unknown metric '" + text + "'");
}

std::string to_string(SimEstimator est) {
  for (const auto& [e, name] : estimator_names()) {
    if (e == est) return name;
  }
  return "";  // unreachable
}

SimEstimator parse_sim_estimator(const std::string& text) {
  for (const auto& [e, name] : estimator_names()) {
    if (text == name) return e;
  }
  throw ParseError("unknown estimator '" + text + "'");
}

void ExperimentSpec::validate() const {
  if (reps < 1) throw ParseError("experiment: reps must be >= 1");
  if (n < 2) throw ParseError("experiment: n must be >= 2");
  if (k_grid.empty()) throw ParseError("experiment: k_grid must be nonempty");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (k_grid[i] < 1 || k_grid[i] > n - 1) {
      throw ParseError("experiment: k_grid entries must lie in [1, n-1]");
    }
    if (i > 0 && k_grid[i] <= k_grid[i - 1]) {
      throw ParseError("experiment: k_grid must be strictly increasing");
    }
  }
  if (estimators.empty()) throw ParseError("experiment: estimators must be nonempty");
  if (metrics.empty()) throw ParseError("experiment: metrics must be nonempty");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ParseError("experiment: ci_level in (0,1)");
  if (!(classification_radius > 0.0)) throw ParseError("experiment: radius must be > 0");
}

RandomStream replicate_stream(std::uint64_t master_seed, std::uint64_t rep_index) {
  return RandomStream(master_seed, rep_index);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  const TrueTargets targets = derive_targets(spec);
  const bool want_coverage =
      std::find(spec.metrics.begin(), spec.metrics.end(), Metric::coverage) != spec.metrics.end();

  const std::size_t R = spec.reps, E = spec.estimators.size(), K = spec.k_grid.size();
  std::vector<double> values(R * E * K, kNaN);
  std::vector<double> covered(R * E * K, kNaN);
  const auto cell = [&](std::size_t r, std::size_t e, std::size_t k) {
    return (r * E + e) * K + k;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(R)));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned tid) {
    try {
      for (std::size_t r = tid; r < R; r += workers) {
        RandomStream stream = replicate_stream(spec.master_seed, r);
        const CensoredSample sample = generate_censored(spec.f, spec.g, spec.n, stream);
        const SortedCensoredSample sorted = sort_with_concomitants(sample);
        for (std::size_t ki = 0; ki < K; ++ki) {
          const TailView view = top_k_view(sorted, spec.k_grid[ki]);
          for (std::size_t ei = 0; ei < E; ++ei) {
            const RepOutcome o = evaluate(spec.estimators[ei], view, spec, want_coverage,
                                          targets.gamma_f);
            values[cell(r, ei, ki)] = o.value;
            covered[cell(r, ei, ki)] = o.covered;
          }
        }
      }
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  ExperimentResult result;
  result.name = spec.name;
  result.seed = spec.master_seed;
  result.spec_digest = [&] {
    // FNV-1a over the canonical JSON form.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : spec_to_json(spec)) h = (h ^ c) * 1099511628211ULL;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
  }();

  std::vector<double> vals, sq, covs;
  for (std::size_t ei = 0; ei < E; ++ei) {
    const SimEstimator est = spec.estimators[ei];
    const double target = target_of(est, targets.gamma_f);
    const double true_var = true_variance_of(est, targets);
    for (std::size_t ki = 0; ki < K; ++ki) {
      vals.clear();
      covs.clear();
      for (std::size_t r = 0; r < R; ++r) {
        const double v = values[cell(r, ei, ki)];
        if (!std::isnan(v)) vals.push_back(v);
        const double c = covered[cell(r, ei, ki)];
        if (!std::isnan(c)) covs.push_back(c);
      }
      const std::size_t eff = vals.size();
      const double mean = eff ? pairwise_sum(vals) / static_cast<double>(eff) : kNaN;
      for (Metric metric : spec.metrics) {
        MetricRow row;
        row.estimator = to_string(est);
        row.k = spec.k_grid[ki];
        row.metric = to_string(metric);
        row.reps_effective = eff;
        switch (metric) {
          case Metric::mse: {
            sq.clear();
            for (double v : vals) sq.push_back((v - target) * (v - target));
            row.value = eff ? pairwise_sum(sq) / static_cast<double>(eff) : kNaN;
            break;
          }
          case Metric::bias:
            row.value = eff ? mean - target : kNaN;
            break;
          case Metric::classification: {
            if (!is_evi_estimator(est)) {
              row.value = kNaN;
              break;
            }
            sq.clear();
            for (double v : vals) {
              sq.push_back(classify_mda(v, spec.classification_radius) != targets.label ? 1.0
                                                                                        : 0.0);
            }
            row.value = eff ? pairwise_sum(sq) / static_cast<double>(eff) : kNaN;
            break;
          }
          case Metric::coverage:
            row.reps_effective = covs.size();
            row.value = covs.empty() ? kNaN
                                     : pairwise_sum(covs) / static_cast<double>(covs.size());
            break;
          case Metric::sd_gap: {
            if (eff < 2 || std::isnan(true_var)) {
              row.value = kNaN;
              break;
            }
            sq.clear();
            for (double v : vals) sq.push_back((v - mean) * (v - mean));
            const double sd =
                std::sqrt(pairwise_sum(sq) / static_cast<double>(eff - 1));
            row.value = sd - std::sqrt(true_var / static_cast<double>(spec.k_grid[ki]));
            break;
          }
        }
        result.rows.push_back(std::move(row));
      }
      MetricRow failures;
      failures.estimator = to_string(est);
      failures.k = spec.k_grid[ki];
      failures.metric = "failures";
      failures.value = static_cast<double>(R - eff);
      failures.reps_effective = R;
      result.rows.push_back(std::move(failures));
    }
  }
  return result;
}

namespace {

void require_metrics(const ExperimentSpec& spec, std::initializer_list<Metric> allowed,
                     const char* what) {
  for (Metric m : spec.metrics) {
    if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
      throw ParseError(std::string(what) + ": metric '" + to_string(m) + "' not supported");
    }
  }
}

}  // namespace

ExperimentResult run_mse_experiment(const ExperimentSpec& spec, unsigned threads) {
  require_metrics(spec, {Metric::mse, Metric::bias}, "mse experiment");
  return run_experiment(spec, threads);
}

ExperimentResult run_classification_experiment(const ExperimentSpec& spec, unsigned threads) {
  require_metrics(spec, {Metric::classification, Metric::mse, Metric::bias},
                  "classification experiment");
  for (SimEstimator e : spec.estimators) {
    if (!is_evi_estimator(e)) {
      throw ParseError("classification experiment: estimator '" + to_string(e) +
                       "' has no max-domain label");
    }
  }
  return run_experiment(spec, threads);
}

ExperimentResult run_coverage_experiment(const ExperimentSpec& spec, unsigned threads) {
  require_metrics(spec, {Metric::coverage, Metric::sd_gap, Metric::mse, Metric::bias},
                  "coverage experiment");
  bool any_ci = false;
  for (SimEstimator e : spec.estimators) any_ci = any_ci || has_plugin_ci(e);
  if (!any_ci) {
    throw ParseError("coverage experiment: needs an estimator with a plug-in law");
  }
  return run_experiment(spec, threads);
}

std::string to_csv(const ExperimentResult& result) {
  std::string out;
  out += "# spec_digest=" + result.spec_digest + "\n";
  out += "# seed=" + std::to_string(result.seed) + "\n";
  out += "estimator,k,metric,value,reps_effective\n";
  for (const MetricRow& row : result.rows) {
    out += row.estimator;
    out += ',';
    out += std::to_string(row.k);
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += std::to_string(row.reps_effective);
    out += '\n';
  }
  return out;
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
  try {
    ExperimentSpec spec;
    spec.name = j.value("name", std::string("custom"));
    spec.f = Distribution::parse(j.at("f").get<std::string>());
    spec.g = Distribution::parse(j.at("g").get<std::string>());
    spec.n = j.at("n").get<std::size_t>();
    spec.reps = j.at("reps").get<std::size_t>();
    const auto& grid = j.at("k_grid");
    if (grid.is_array()) {
      for (const auto& v : grid) spec.k_grid.push_back(v.get<std::size_t>());
    } else {
      const auto from = grid.at("from").get<std::size_t>();
      const auto to = grid.at("to").get<std::size_t>();
      const auto step = grid.value("step", std::size_t{1});
      if (step == 0) throw ParseError("experiment: k_grid step must be >= 1");
      for (std::size_t k = from; k <= to; k += step) spec.k_grid.push_back(k);
    }
    for (const auto& e : j.at("estimators")) {
      spec.estimators.push_back(parse_sim_estimator(e.get<std::string>()));
    }
    for (const auto& m : j.at("metrics")) {
      spec.metrics.push_back(parse_metric(m.get<std::string>()));
    }
    spec.normalized = j.value("normalized", true);
    spec.ci_level = j.value("ci_level", 0.95);
    spec.classification_radius = j.value("classification_radius", 0.2);
    spec.master_seed = j.value("seed", std::uint64_t{42});
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
}

std::string spec_to_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["f"] = spec.f.to_literal();
  j["g"] = spec.g.to_literal();
  j["n"] = spec.n;
  j["reps"] = spec.reps;
  j["k_grid"] = spec.k_grid;
  std::vector<std::string> ests, mets;
  for (SimEstimator e : spec.estimators) ests.push_back(to_string(e));
  for (Metric m : spec.metrics) mets.push_back(to_string(m));
  j["estimators"] = ests;
  j["metrics"] = mets;
  j["normalized"] = spec.normalized;
  j["ci_level"] = spec.ci_level;
  j["classification_radius"] = spec.classification_radius;
  j["seed"] = spec.master_seed;
  return j.dump();
}

namespace {

std::vector<std::size_t> k_range(std::size_t from, std::size_t to, std::size_t step) {
  std::vector<std::size_t> grid;
  for (std::size_t k = from; k <= to; k += step) grid.push_back(k);
  return grid;
}

ExperimentSpec base_spec(std::string name, Distribution f, Distribution g, std::size_t n,
                         std::size_t reps, std::vector<std::size_t> grid,
                         std::uint64_t master_seed) {
  ExperimentSpec spec;
  spec.name = std::move(name);
  spec.f = std::move(f);
  spec.g = std::move(g);
  spec.n = n;
  spec.reps = reps;
  spec.k_grid = std::move(grid);
  spec.master_seed = master_seed;
  return spec;
}

}  // namespace

std::vector<ExperimentSpec> preset_experiments(const std::string& preset, bool desk_scale,
                                               std::uint64_t master_seed) {
  const std::size_t reps = desk_scale ? 200 : 1000;
  std::vector<ExperimentSpec> out;
  if (preset == "fig1") {
    // gamma_F fixed at 1/2; censoring index solved from the target
    // non-censoring proportion p via gamma_G = p gamma_F / (1 - p).
    const double gamma_f = 0.5;
    const std::size_t n = 1000;
    const auto grid = desk_scale ? k_range(5, 500, 15) : k_range(5, 500, 5);
    for (double p : {0.6, 0.75, 0.9}) {
      const double gamma_g = p * gamma_f / (1.0 - p);
      const int pct = static_cast<int>(p * 100 + 0.5);
      auto frechet = base_spec("frechet-p" + std::to_string(pct), Distribution::frechet(2.0),
                               Distribution::frechet(1.0 / gamma_g), n, reps, grid, master_seed);
      const double c = 1.0 / std::sqrt(gamma_g);
      auto burr = base_spec("burr-p" + std::to_string(pct),
                            Distribution::burr(std::sqrt(2.0), std::sqrt(2.0)),
                            Distribution::burr(c, c), n, reps, grid, master_seed);
      for (auto* spec : {&frechet, &burr}) {
        spec->estimators = {SimEstimator::ekm_m1, SimEstimator::ekm_m2, SimEstimator::ekm_m3,
                            SimEstimator::km_m1,  SimEstimator::km_m2,  SimEstimator::km_m3,
                            SimEstimator::bench_m1, SimEstimator::bench_m2,
                            SimEstimator::bench_m3};
        spec->metrics = {Metric::mse, Metric::bias};
      }
      out.push_back(std::move(frechet));
      out.push_back(std::move(burr));
    }
    return out;
  }
  const auto scenario_sizes = [&]() -> std::vector<std::size_t> {
    if (desk_scale) return {1000};
    return {1000, 10000};
  }();
  if (preset == "fig2") {
    for (std::size_t n : scenario_sizes) {
      const auto grid = desk_scale ? k_range(25, n / 2, n / 20) : k_range(5, n / 2, n / 100);
      const std::string suffix = "-n" + std::to_string(n);
      auto a = base_spec("beta" + suffix, Distribution::beta(1.0, 2.0),
                         Distribution::beta(1.0, 2.0), n, reps, grid, master_seed);
      auto b = base_spec("burr" + suffix, Distribution::burr(std::sqrt(2.0), std::sqrt(2.0)),
                         Distribution::burr(1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)), n, reps,
                         grid, master_seed);
      auto c = base_spec("weibull" + suffix, Distribution::weibull(1.0, 1.0),
                         Distribution::weibull(0.5, 1.0), n, reps, grid, master_seed);
      for (auto* spec : {&a, &b, &c}) {
        spec->estimators = {SimEstimator::moment, SimEstimator::bench_moment};
        spec->metrics = {Metric::mse, Metric::classification};
        out.push_back(std::move(*spec));
      }
    }
    return out;
  }
  if (preset == "fig3") {
    for (std::size_t n : scenario_sizes) {
      const auto grid = desk_scale ? k_range(25, n / 2, n / 20) : k_range(5, n / 2, n / 100);
      const std::string suffix = "-n" + std::to_string(n);
      auto a = base_spec("beta" + suffix, Distribution::beta(1.0, 2.0),
                         Distribution::beta(1.0, 2.0), n, reps, grid, master_seed);
      auto b = base_spec("pareto" + suffix, Distribution::pareto(2.0),
                         Distribution::pareto(2.0 / 3.0), n, reps, grid, master_seed);
      auto c = base_spec("exp" + suffix, Distribution::exponential(6.0),
                         Distribution::exponential(1.0), n, reps, grid, master_seed);
      for (auto* spec : {&a, &b, &c}) {
        spec->estimators = {SimEstimator::moment};
        spec->metrics = {Metric::coverage, Metric::sd_gap};
        out.push_back(std::move(*spec));
      }
    }
    return out;
  }
  throw ParseError("unknown preset '" + preset + "' (expected fig1, fig2 or fig3)");
}

}  // namespace cekm
