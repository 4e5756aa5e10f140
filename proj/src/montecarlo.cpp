#include "mgarch/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

namespace mgarch {

namespace {

constexpr double kZ975 = 1.959963984540054;

MonteCarloRow run_one(const MonteCarloConfig& cfg, const Vector& truth, std::size_t rep, std::size_t ni) {
  MonteCarloRow row;
  row.rep = rep;
  row.n = cfg.ns[ni];
  row.seed = derive_seed(cfg.seed, rep * cfg.ns.size() + ni);
  try {
    SimulateOptions so;
    so.burn_in = cfg.burn_in;
    so.keep_h_path = false;
    const SimulationResult sim = simulate(cfg.spec, row.n, row.seed, so);
    const Matrix x = to_x(sim.y);
    const EstimateReport rep_est = estimate(x, cfg.estimate);
    row.estimate = parameter_vector(rep_est.spec);
    row.error = row.estimate - truth;
    row.max_abs_error = row.error.cwiseAbs().maxCoeff();
    if (cfg.with_se) {
      const PsiEstimate psi = hac_psi(x, cfg.bandwidth);
      const JacobianState js = jacobian_state(rep_est.moments, cfg.estimate.tol);
      const AsymptoticReport ar = xi(jacobian_matrix(js, cfg.estimate.tol), psi, x.rows());
      row.std_errors = ar.std_errors;
      row.covered.resize(static_cast<std::size_t>(truth.size()));
      for (Index i = 0; i < truth.size(); ++i) {
        row.covered[static_cast<std::size_t>(i)] = std::abs(row.error(i)) <= kZ975 * ar.std_errors(i) ? 1 : 0;
      }
    }
  } catch (const Error& e) {
    row.status = std::string(to_string(e.code()));
    row.message = e.what();
  }
  return row;
}

}  // namespace

MonteCarloResult run_montecarlo(const MonteCarloConfig& cfg) {
  cfg.spec.validate();
  if (cfg.ns.empty()) throw Error(ErrorCode::InvalidInput, "montecarlo: at least one sample size is required");
  MonteCarloResult out;
  out.dbar = cfg.spec.dbar();
  out.with_se = cfg.with_se;
  const Vector truth = parameter_vector(cfg.spec);

  const std::size_t tasks = cfg.reps * cfg.ns.size();
  out.rows.resize(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks; k = next++) {
      out.rows[k] = run_one(cfg, truth, k / cfg.ns.size(), k % cfg.ns.size());
    }
  };
  unsigned nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, std::max<std::size_t>(tasks, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    MonteCarloSummary s;
    s.n = cfg.ns[ni];
    std::vector<double> errs;
    std::vector<double> cover(static_cast<std::size_t>(truth.size()), 0.0);
    for (std::size_t k = ni; k < tasks; k += cfg.ns.size()) {
      const MonteCarloRow& row = out.rows[k];
      ++s.runs;
      if (row.status != "ok") {
        ++s.failures;
        continue;
      }
      errs.push_back(row.max_abs_error);
      for (std::size_t i = 0; i < row.covered.size(); ++i) cover[i] += row.covered[i];
    }
    if (errs.empty()) {
      s.median_max_abs_error = std::numeric_limits<double>::quiet_NaN();
    } else {
      std::sort(errs.begin(), errs.end());
      const std::size_t mid = errs.size() / 2;
      s.median_max_abs_error = errs.size() % 2 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
    }
    if (cfg.with_se) {
      for (auto& c : cover) c = errs.empty() ? std::numeric_limits<double>::quiet_NaN() : c / static_cast<double>(errs.size());
      s.coverage = std::move(cover);
    }
    out.summary.push_back(std::move(s));
  }
  return out;
}

void write_montecarlo_csv(std::ostream& os, const MonteCarloResult& result) {
  const auto names = parameter_names(result.dbar);
  os << "rep,n,seed,status,max_abs_error";
  for (const auto& nm : names) os << ",err_" << nm;
  if (result.with_se) {
    for (const auto& nm : names) os << ",se_" << nm;
    for (const auto& nm : names) os << ",cover_" << nm;
  }
  os << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : result.rows) {
    const bool ok = row.status == "ok";
    os << row.rep << ',' << row.n << ',' << row.seed << ',' << row.status << ',';
    if (ok) os << row.max_abs_error;
    for (std::size_t i = 0; i < names.size(); ++i) {
      os << ',';
      if (ok) os << row.error(static_cast<Index>(i));
    }
    if (result.with_se) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        os << ',';
        if (ok) os << row.std_errors(static_cast<Index>(i));
      }
      for (std::size_t i = 0; i < names.size(); ++i) {
        os << ',';
        if (ok) os << row.covered[i];
      }
    }
    os << '\n';
  }
  for (const auto& s : result.summary) {
    const double rate = s.runs ? static_cast<double>(s.failures) / static_cast<double>(s.runs) : 0.0;
    os << "# summary n=" << s.n << " runs=" << s.runs << " failures=" << s.failures
       << " failure_rate=" << rate << " median_max_abs_error=" << s.median_max_abs_error;
    for (std::size_t i = 0; i < s.coverage.size(); ++i) os << " coverage_" << names[i] << '=' << s.coverage[i];
    os << '\n';
  }
}

}  // namespace mgarch
