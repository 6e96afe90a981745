#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cekm/asymptotics.hpp"
#include "cekm/censored_data.hpp"
#include "cekm/ekm.hpp"
#include "cekm/errors.hpp"
#include "cekm/estimators.hpp"
#include "cekm/format.hpp"
#include "cekm/kaplan_meier.hpp"
#include "cekm/phi.hpp"
#include "cekm/simulation.hpp"

namespace cekm {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write '" + out_path + "'");
  out << text;
}

std::vector<std::size_t> parse_k_grid(const std::string& text) {
  std::vector<std::size_t> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(tok, &pos);
      if (pos != tok.size() || v < 1) throw std::invalid_argument(tok);
      parts.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad k-grid '" + text + "' (expected a:b[:step])");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw UsageError("bad k-grid '" + text + "' (expected a:b[:step])");
  }
  const std::size_t from = parts[0], to = parts[1], step = parts.size() == 3 ? parts[2] : 1;
  if (to < from) throw UsageError("bad k-grid: upper bound below lower bound");
  std::vector<std::size_t> grid;
  for (std::size_t k = from; k <= to; k += step) grid.push_back(k);
  return grid;
}

EstimatorId parse_estimator_id(const std::string& name) {
  for (EstimatorId id : {EstimatorId::hill_censored, EstimatorId::moment_censored,
                         EstimatorId::hill_benchmark, EstimatorId::moment_benchmark,
                         EstimatorId::moment_uncensored}) {
    if (to_string(id) == name) return id;
  }
  throw UsageError("unknown estimator '" + name + "'");
}

std::string sanitize_note(std::string note) {
  for (char& c : note) {
    if (c == ',' || c == '\n') c = ';';
  }
  return note;
}

// ---- estimate ----------------------------------------------------------

struct EstimateOptions {
  std::string input;
  std::string estimator;
  std::string k_grid;
  bool normalized = false;
  double ci_level = -1.0;
  std::string out;
};

std::string estimate_table(const SortedCensoredSample& sorted, EstimatorId id,
                           const std::vector<std::size_t>& grid, bool normalized,
                           std::optional<double> ci_level) {
  std::string csv = "k,threshold,gamma_hat,p_hat";
  if (ci_level) csv += ",var_hat,ci_lo,ci_hi";
  csv += ",note\n";
  for (std::size_t k : grid) {
    std::string note;
    std::string fields;
    try {
      const TailView view = top_k_view(sorted, k);
      const double p_hat = uncensored_fraction(view);
      EviEstimate est;
      switch (id) {
        case EstimatorId::hill_censored: est = hill_censored(view, normalized); break;
        case EstimatorId::moment_censored: est = moment_censored(view, normalized); break;
        case EstimatorId::hill_benchmark: est = benchmark_hill(view); break;
        case EstimatorId::moment_benchmark: est = benchmark_moment(view); break;
        case EstimatorId::moment_uncensored: {
          est.gamma_hat = moment_uncensored(view.ratios);
          est.k = k;
          est.id = EstimatorId::moment_uncensored;
          break;
        }
      }
      fields = format_double(view.threshold) + "," + format_double(est.gamma_hat) + "," +
               format_double(p_hat);
      if (ci_level) {
        try {
          const double var = plugin_variance(view, est);
          const auto [lo, hi] = confidence_interval(est.gamma_hat, k, var, *ci_level);
          fields += "," + format_double(var) + "," + format_double(lo) + "," + format_double(hi);
        } catch (const DomainError& e) {
          fields += ",,,";
          note = e.what();
        }
      }
    } catch (const DomainError& e) {
      fields = ci_level ? ",,,,," : ",,";
      note = e.what();
    } catch (const std::out_of_range& e) {
      fields = ci_level ? ",,,,," : ",,";
      note = e.what();
    }
    csv += std::to_string(k) + "," + fields + "," + sanitize_note(note) + "\n";
  }
  return csv;
}

int cmd_estimate(const EstimateOptions& opt) {
  const CensoredSample sample = read_survival_csv(opt.input);
  const SortedCensoredSample sorted = sort_with_concomitants(sample);
  const auto grid = parse_k_grid(opt.k_grid);
  if (grid.back() > sample.size() - 1) {
    throw UsageError("k-grid upper bound " + std::to_string(grid.back()) +
                     " exceeds n-1 = " + std::to_string(sample.size() - 1));
  }
  const EstimatorId id = parse_estimator_id(opt.estimator);
  std::optional<double> ci;
  if (opt.ci_level > 0.0) ci = opt.ci_level;
  emit(estimate_table(sorted, id, grid, opt.normalized, ci), opt.out);
  return 0;
}

// ---- km / ekm ----------------------------------------------------------

int cmd_km(const std::string& input, const std::string& out) {
  const CensoredSample sample = read_survival_csv(input);
  const StepCdf cdf = km_estimate(sort_with_concomitants(sample));
  std::string csv = "x,cdf\n";
  for (std::size_t i = 0; i < cdf.knots().size(); ++i) {
    csv += format_double(cdf.knots()[i]) + "," + format_double(cdf.values()[i]) + "\n";
  }
  emit(csv, out);
  return 0;
}

int cmd_ekm(const std::string& input, std::size_t k, const std::string& out) {
  const CensoredSample sample = read_survival_csv(input);
  const SortedCensoredSample sorted = sort_with_concomitants(sample);
  const TailView view = top_k_view(sorted, k);
  const EkmWeights weights = ekm_weights(view);
  std::string csv = "ratio,delta,omega,cum_mass\n";
  double cum = 0.0;
  for (std::size_t idx = view.k; idx-- > 0;) {  // ascending ratios
    cum += weights.omega[idx];
    csv += format_double(view.ratios[idx]) + "," + std::to_string(int(view.delta_top[idx])) +
           "," + format_double(weights.omega[idx]) + "," + format_double(cum) + "\n";
  }
  emit(csv, out);
  return 0;
}

// ---- simulate ----------------------------------------------------------

struct SimulateOptions {
  std::string spec_path;
  std::string preset;
  bool desk_scale = false;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::string out;
};

int cmd_simulate(const SimulateOptions& opt) {
  if (opt.spec_path.empty() == opt.preset.empty()) {
    throw UsageError("simulate: exactly one of --spec and --preset is required");
  }
  if (!opt.spec_path.empty()) {
    std::ifstream in(opt.spec_path);
    if (!in) throw ParseError("cannot open '" + opt.spec_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ExperimentSpec spec = parse_experiment_spec(buffer.str());
    if (opt.seed_given) spec.master_seed = opt.seed;
    emit(to_csv(run_experiment(spec, opt.threads)), opt.out);
    return 0;
  }
  auto specs = preset_experiments(opt.preset, opt.desk_scale, opt.seed);
  std::string csv = "# preset=" + opt.preset + (opt.desk_scale ? " desk-scale" : " full-scale") +
                    " seed=" + std::to_string(opt.seed) + "\n";
  csv += "scenario,estimator,k,metric,value,reps_effective\n";
  for (const ExperimentSpec& spec : specs) {
    ExperimentResult result;
    if (opt.preset == "fig1") {
      result = run_mse_experiment(spec, opt.threads);
    } else if (opt.preset == "fig2") {
      result = run_classification_experiment(spec, opt.threads);
    } else {
      result = run_coverage_experiment(spec, opt.threads);
    }
    for (const MetricRow& row : result.rows) {
      csv += spec.name + "," + row.estimator + "," + std::to_string(row.k) + "," + row.metric +
             "," + format_double(row.value) + "," + std::to_string(row.reps_effective) + "\n";
    }
  }
  emit(csv, opt.out);
  return 0;
}

// ---- variance ----------------------------------------------------------

struct VarianceOptions {
  std::string law;
  double gf = 0.0, gg = 0.0, alpha_f = 0.0, x0 = 2.0;
  double rho = 0.0, lambda = 0.0, lambda_hat = 0.0, rho_tilde = 0.0;
  std::string phi = "log";
  std::uint64_t mc_draws = 0;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_variance(const VarianceOptions& opt) {
  SecondOrderParams so;
  so.rho = opt.rho;
  so.lambda = opt.lambda;
  so.lambda_hat = opt.lambda_hat;
  so.rho_tilde = opt.rho_tilde;
  std::string report;
  const auto law_lines = [&](const AsymptoticLaw& law) {
    report += "bias = " + format_double(law.bias) + "\n";
    report += "variance = " + format_double(law.variance) + "\n";
  };
  if (opt.law == "hill") {
    law_lines(hill_asymptotics(opt.gf, opt.gg, so));
  } else if (opt.law == "moment-pos") {
    law_lines(moment_asymptotics_pos(opt.gf, opt.gg, so));
  } else if (opt.law == "moment-zero") {
    law_lines(moment_asymptotics_zero(opt.alpha_f, so));
  } else if (opt.law == "moment-neg") {
    law_lines(moment_asymptotics_neg(opt.gf, opt.gg, so));
  } else if (opt.law == "ekm-cdf") {
    law_lines(ekm_cdf_asymptotics(opt.x0, opt.gf, opt.gg, so));
  } else if (opt.law == "quadrature") {
    const NamedPhi phi = NamedPhi::parse(opt.phi);
    report += "phi = " + phi.name() + "\n";
    std::optional<double> closed;
    switch (phi.kind()) {
      case NamedPhi::Kind::one: closed = 0.0; break;
      case NamedPhi::Kind::log: closed = hill_asymptotics(opt.gf, opt.gg, {}).variance; break;
      case NamedPhi::Kind::log_sq:
        closed = moment_pair_asymptotics(opt.gf, opt.gg, {}).cov22;
        break;
      case NamedPhi::Kind::indicator:
        closed = ekm_cdf_asymptotics(phi.param(), opt.gf, opt.gg, {}).variance;
        break;
      case NamedPhi::Kind::power: break;
    }
    if (closed) report += "closed_form = " + format_double(*closed) + "\n";
    report += "quadrature = " + format_double(limit_variance_quadrature(phi, opt.gf, opt.gg)) +
              "\n";
    if (opt.mc_draws > 0) {
      RandomStream rng(opt.seed);
      const McVariance mc = limit_variance_mc(phi, opt.gf, opt.gg, opt.mc_draws, rng);
      report += "mc = " + format_double(mc.variance) + "\n";
      report += "mc_std_error = " + format_double(mc.std_error) + "\n";
    }
  } else {
    throw UsageError("unknown law '" + opt.law +
                     "' (hill, moment-pos, moment-zero, moment-neg, ekm-cdf, quadrature)");
  }
  emit(report, opt.out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Extreme value estimation under random right-censoring"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimator-vs-k table from a survival CSV");
  estimate->add_option("--input", est.input, "survival CSV with time,status columns")->required();
  estimate->add_option("--estimator", est.estimator,
                       "hill-censored, moment-censored, benchmark-hill, benchmark-moment or "
                       "moment-uncensored")
      ->required();
  estimate->add_option("--k-grid", est.k_grid, "a:b[:step]")->required();
  estimate->add_flag("--normalized", est.normalized, "divide by the estimator total mass");
  estimate->add_option("--ci", est.ci_level, "confidence level for plug-in intervals");
  estimate->add_option("--out", est.out, "output path (default stdout)");

  std::string km_input, km_out;
  auto* km = app.add_subcommand("km", "Product-limit cdf of a survival CSV");
  km->add_option("--input", km_input)->required();
  km->add_option("--out", km_out);

  std::string ekm_input, ekm_out;
  std::size_t ekm_k = 0;
  auto* ekm = app.add_subcommand("ekm", "Top-k product-limit weights and cdf");
  ekm->add_option("--input", ekm_input)->required();
  ekm->add_option("--k", ekm_k, "number of top order statistics")->required();
  ekm->add_option("--out", ekm_out);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo studies from a JSON spec or preset");
  simulate->add_option("--spec", sim.spec_path, "experiment spec JSON");
  simulate->add_option("--preset", sim.preset, "fig1, fig2 or fig3");
  simulate->add_flag("--desk-scale", sim.desk_scale, "reduced repetitions and grids");
  simulate->add_option("--threads", sim.threads, "worker count (default 1)");
  auto* sim_seed = simulate->add_option("--seed", sim.seed, "master seed (default 42)");
  simulate->add_option("--out", sim.out);

  VarianceOptions var;
  auto* variance = app.add_subcommand("variance", "Closed-form and oracle asymptotic variances");
  variance->add_option("--law", var.law,
                       "hill, moment-pos, moment-zero, moment-neg, ekm-cdf or quadrature")
      ->required();
  variance->add_option("--gf", var.gf, "gamma_F");
  variance->add_option("--gg", var.gg, "gamma_G");
  variance->add_option("--alpha-f", var.alpha_f, "alpha_F (moment-zero)");
  variance->add_option("--x0", var.x0, "evaluation point (ekm-cdf)");
  variance->add_option("--rho", var.rho, "second-order parameter");
  variance->add_option("--lambda", var.lambda, "bias scale");
  variance->add_option("--lambda-hat", var.lambda_hat, "second bias channel");
  variance->add_option("--rho-tilde", var.rho_tilde, "second-order parameter (moment-zero)");
  variance->add_option("--phi", var.phi, "integrand for --law quadrature");
  variance->add_option("--mc-draws", var.mc_draws, "Monte-Carlo cross-check draws");
  variance->add_option("--seed", var.seed, "Monte-Carlo seed (default 42)");
  variance->add_option("--out", var.out);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(est);
    if (km->parsed()) return cmd_km(km_input, km_out);
    if (ekm->parsed()) return cmd_ekm(ekm_input, ekm_k, ekm_out);
    if (simulate->parsed()) {
      sim.seed_given = sim_seed->count() > 0;
      return cmd_simulate(sim);
    }
    if (variance->parsed()) return cmd_variance(var);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "guard violated: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace cekm
