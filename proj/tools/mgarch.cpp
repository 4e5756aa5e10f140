// Command-line front end: simulate, estimate, aggregate, montecarlo.
//
// Exit codes: 0 ok, 1 usage or input error, 2 simulation positivity violation,
// 3 singular matrix / numerical failure, 4 unimodular eigenvalues.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mgarch/aggregation.hpp"
#include "mgarch/asymptotics.hpp"
#include "mgarch/io.hpp"
#include "mgarch/montecarlo.hpp"
#include "mgarch/simulate.hpp"

namespace {

using namespace mgarch;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::PositivityViolation:
      return 2;
    case ErrorCode::SingularMatrix:
    case ErrorCode::SingularLyapunov:
    case ErrorCode::IllConditionedEigenvectors:
    case ErrorCode::NumericalFailure:
    case ErrorCode::NotPositiveDefinite:
      return 3;
    case ErrorCode::UnimodularEigenvalues:
    case ErrorCode::SelectionCountMismatch:
      return 4;
    default:
      return 1;
  }
}

struct Flags {
  std::string params, data, out, sigma, sigma_w;
  std::string kind = "stock";
  std::string phi_method = "lag1";
  long long n = 0;
  std::vector<long long> ns;
  int m = 1;
  int lags = 1;
  long long reps = 1;
  long long burn_in = 1000;
  long long bandwidth = -1;
  std::uint64_t seed = 0;
  bool with_se = false;
  bool project_stationary = false;
};

void print_warnings(const Diagnostics& d) {
  for (const auto& w : d.warnings) std::cerr << "warning [" << w.code << "]: " << w.message << '\n';
}

std::optional<Index> bandwidth_opt(const Flags& f) {
  return f.bandwidth >= 0 ? std::optional<Index>(f.bandwidth) : std::nullopt;
}

EstimateOptions estimate_options(const Flags& f) {
  EstimateOptions opts;
  opts.phi_method = phi_method_from_string(f.phi_method);
  if (f.lags < 1) throw Error(ErrorCode::InvalidInput, "--lags must be >= 1");
  opts.lags = f.lags;
  opts.project_stationary = f.project_stationary;
  return opts;
}

void emit(const std::string& path, const io::json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_json_file(path, j);
  }
}

int cmd_simulate(const Flags& f) {
  if (f.params.empty()) throw Error(ErrorCode::InvalidInput, "--params is required");
  if (f.n <= 0) throw Error(ErrorCode::InvalidInput, "n must be positive");
  if (f.burn_in < 0) throw Error(ErrorCode::InvalidInput, "--burn-in must be non-negative");
  const GarchSpec spec = io::spec_from_json(io::read_json_file(f.params));
  SimulateOptions so;
  so.burn_in = static_cast<std::size_t>(f.burn_in);
  so.keep_h_path = false;
  const SimulationResult sim = simulate(spec, static_cast<std::size_t>(f.n), f.seed, so);
  if (f.out.empty() || f.out == "-") {
    io::write_returns_csv(std::cout, sim.y);
  } else {
    io::write_returns_csv(f.out, sim.y);
    io::json echo = io::spec_to_json(spec);
    echo["n"] = f.n;
    echo["seed"] = f.seed;
    echo["burn_in"] = f.burn_in;
    echo["rng_version"] = NormalStream::kVersion;
    std::cout << echo.dump(2) << '\n';
  }
  return 0;
}

int cmd_estimate(const Flags& f) {
  if (f.data.empty()) throw Error(ErrorCode::InvalidInput, "--data is required");
  const EstimateOptions opts = estimate_options(f);
  const bool moments_input = f.data.size() > 5 && f.data.substr(f.data.size() - 5) == ".json";

  Matrix x;
  EstimateReport rep;
  if (moments_input) {
    rep = estimate(io::moments_from_json(io::read_json_file(f.data)), opts);
  } else {
    x = to_x(io::read_returns_csv(f.data));
    rep = estimate(x, opts);
  }
  print_warnings(rep.warnings);
  io::json out = io::report_to_json(rep);

  if (f.with_se) {
    if (moments_input) throw Error(ErrorCode::InvalidInput, "--with-se needs return data, not a moment file");
    if (opts.phi_method != PhiMethod::Lag1) {
      std::cerr << "warning [se_lag1]: standard errors use the lag-1 Phi derivative\n";
    }
    const PsiEstimate psi = hac_psi(x, bandwidth_opt(f));
    if (psi.clipped) std::cerr << "warning [psi_clipped]: negative eigenvalues of Psi clipped at zero\n";
    const AsymptoticReport ar = xi(jacobian_matrix(jacobian_state(rep.moments, opts.tol), opts.tol), psi, x.rows());
    out["asymptotics"] = io::asymptotics_to_json(ar);
    out["asymptotics"]["bandwidth"] = psi.bandwidth;
  }
  emit(f.out, out);
  return 0;
}

int cmd_aggregate(const Flags& f) {
  if (f.params.empty()) throw Error(ErrorCode::InvalidInput, "--params is required");
  if (f.sigma.empty()) throw Error(ErrorCode::InvalidInput, "--sigma is required");
  AggregationInput in;
  in.spec = io::spec_from_json(io::read_json_file(f.params));
  in.sigma = io::read_matrix_file(f.sigma, "sigma");
  in.m = f.m;
  in.kind = aggregation_kind_from_string(f.kind);
  if (!f.sigma_w.empty()) in.sigma_w = io::read_matrix_file(f.sigma_w, "sigma_w");
  if (in.kind == AggregationKind::Flow && in.m > 1 && !in.sigma_w) {
    throw Error(ErrorCode::MissingSigmaW, "flow aggregation with m > 1 requires --sigma-w");
  }
  const AggregatedSpec agg = aggregate_params(in);
  print_warnings(agg.report.warnings);
  emit(f.out, io::aggregated_to_json(agg));
  return 0;
}

int cmd_montecarlo(const Flags& f) {
  if (f.params.empty()) throw Error(ErrorCode::InvalidInput, "--params is required");
  if (f.reps < 1) throw Error(ErrorCode::InvalidInput, "--reps must be positive");
  MonteCarloConfig cfg;
  cfg.spec = io::spec_from_json(io::read_json_file(f.params));
  for (long long n : f.ns) {
    if (n <= 0) throw Error(ErrorCode::InvalidInput, "n must be positive");
    cfg.ns.push_back(static_cast<std::size_t>(n));
  }
  if (cfg.ns.empty()) throw Error(ErrorCode::InvalidInput, "--n is required");
  cfg.reps = static_cast<std::size_t>(f.reps);
  cfg.seed = f.seed;
  cfg.burn_in = static_cast<std::size_t>(std::max(0LL, f.burn_in));
  cfg.with_se = f.with_se;
  cfg.bandwidth = bandwidth_opt(f);
  cfg.estimate = estimate_options(f);

  const MonteCarloResult res = run_montecarlo(cfg);
  if (f.out.empty() || f.out == "-") {
    write_montecarlo_csv(std::cout, res);
  } else {
    std::ofstream os(f.out);
    if (!os) throw Error(ErrorCode::InvalidInput, "cannot write '" + f.out + "'");
    write_montecarlo_csv(os, res);
    std::ostringstream summary;
    for (const auto& s : res.summary) {
      summary << "n=" << s.n << " runs=" << s.runs << " failures=" << s.failures
              << " median_max_abs_error=" << s.median_max_abs_error << '\n';
    }
    std::cout << summary.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form method-of-moments estimation of multivariate GARCH(1,1)"};
  app.require_subcommand(1);
  Flags f;

  auto* sim = app.add_subcommand("simulate", "Simulate a GARCH(1,1) path and write returns as CSV");
  sim->add_option("--params", f.params, "GarchSpec JSON file")->required();
  sim->add_option("--n", f.n, "Number of observations")->required();
  sim->add_option("--seed", f.seed, "RNG seed");
  sim->add_option("--burn-in", f.burn_in, "Discarded initial steps");
  sim->add_option("--out", f.out, "Output CSV path ('-' for stdout)");

  auto* est = app.add_subcommand("estimate", "Closed-form estimate from a returns CSV or a moment JSON");
  est->add_option("--data", f.data, "Returns CSV (header y1..yd) or moments JSON")->required();
  est->add_option("--out", f.out, "Output report JSON ('-' for stdout)");
  est->add_option("--phi-method", f.phi_method, "lag1 | weighted | lstsq")
      ->check(CLI::IsMember({"lag1", "weighted", "lstsq"}));
  est->add_option("--lags", f.lags, "Autocovariance ratios used by weighted / lstsq");
  est->add_flag("--with-se", f.with_se, "Compute delta-method standard errors");
  est->add_option("--bandwidth", f.bandwidth, "HAC bandwidth (default floor(4 (n/100)^(2/9)))");
  est->add_flag("--project-stationary", f.project_stationary, "Pull Phi inside the unit circle if needed");

  auto* agg = app.add_subcommand("aggregate", "Parameters of the temporally aggregated GARCH(1,1)");
  agg->add_option("--params", f.params, "GarchSpec JSON file")->required();
  agg->add_option("--sigma", f.sigma, "Sigma JSON (nested array or {\"sigma\": ...})")->required();
  agg->add_option("--sigma-w", f.sigma_w, "Sigma_w JSON for flow aggregation");
  agg->add_option("--m", f.m, "Aggregation period")->check(CLI::PositiveNumber);
  agg->add_option("--kind", f.kind, "stock | flow")->check(CLI::IsMember({"stock", "flow"}));
  agg->add_option("--out", f.out, "Output JSON ('-' for stdout)");

  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo study of the estimator");
  mc->add_option("--params", f.params, "GarchSpec JSON file")->required();
  mc->add_option("--n", f.ns, "Sample sizes (comma separated)")->delimiter(',')->required();
  mc->add_option("--reps", f.reps, "Replications per sample size");
  mc->add_option("--seed", f.seed, "Base seed");
  mc->add_option("--burn-in", f.burn_in, "Discarded initial steps");
  mc->add_option("--out", f.out, "Output CSV path ('-' for stdout)");
  mc->add_flag("--with-se", f.with_se, "Record standard errors and CI coverage");
  mc->add_option("--bandwidth", f.bandwidth, "HAC bandwidth");
  mc->add_option("--phi-method", f.phi_method, "lag1 | weighted | lstsq")
      ->check(CLI::IsMember({"lag1", "weighted", "lstsq"}));
  mc->add_option("--lags", f.lags, "Autocovariance ratios used by weighted / lstsq");
  mc->add_flag("--project-stationary", f.project_stationary, "Pull Phi inside the unit circle if needed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(f);
    if (*est) return cmd_estimate(f);
    if (*agg) return cmd_aggregate(f);
    if (*mc) return cmd_montecarlo(f);
  } catch (const PositivityViolation& e) {
    std::cerr << "error: " << e.what() << " (step " << e.step() << ")\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
