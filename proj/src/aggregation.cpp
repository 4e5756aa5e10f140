#include "mgarch/aggregation.hpp"

namespace mgarch {

std::string_view to_string(AggregationKind k) { return k == AggregationKind::Stock ? "stock" : "flow"; }

AggregationKind aggregation_kind_from_string(std::string_view s) {
  if (s == "stock") return AggregationKind::Stock;
  if (s == "flow") return AggregationKind::Flow;
  throw Error(ErrorCode::InvalidInput, "unknown aggregation kind '" + std::string(s) + "'");
}

namespace {

void check_inputs(const GarchSpec& spec, const Matrix& sigma, int m) {
  spec.validate();
  if (m < 1) throw Error(ErrorCode::InvalidInput, "aggregation: m must be >= 1");
  if (sigma.rows() != spec.dbar() || sigma.cols() != spec.dbar()) {
    throw Error(ErrorCode::InvalidInput, "aggregation: Sigma must be dbar x dbar");
  }
  const double rho = spectral_radius(phi(spec));
  if (rho >= 1.0) {
    throw Error(ErrorCode::NonStationary, "aggregation: spectral radius of A+B is " + std::to_string(rho));
  }
}

// powers[k] = Phi^k for k = 0..max
std::vector<Matrix> phi_powers(const Matrix& p, int max) {
  std::vector<Matrix> out{Matrix::Identity(p.rows(), p.cols())};
  for (int k = 1; k <= max; ++k) out.push_back(p * out.back());
  return out;
}

Matrix sandwich_sum(const std::vector<Matrix>& ladder, const Matrix& sigma) {
  Matrix acc = Matrix::Zero(sigma.rows(), sigma.cols());
  for (const auto& j : ladder) acc.noalias() += j * sigma * j.transpose();
  return acc;
}

}  // namespace

std::vector<Matrix> stock_ladder(const GarchSpec& spec, int m) {
  const Matrix p = phi(spec);
  const auto pw = phi_powers(p, m);
  std::vector<Matrix> j{Matrix::Identity(p.rows(), p.cols())};
  for (int i = 1; i < m; ++i) j.push_back(pw[static_cast<std::size_t>(i - 1)] * spec.A);
  j.push_back(-pw[static_cast<std::size_t>(m - 1)] * spec.B);
  return j;
}

std::vector<Matrix> flow_ladder(const GarchSpec& spec, int m) {
  if (m < 2) throw Error(ErrorCode::InvalidInput, "flow_ladder: m must be >= 2");
  const Matrix p = phi(spec);
  const Index n = p.rows();
  const auto pw = phi_powers(p, m);
  const Matrix I = Matrix::Identity(n, n);
  const Matrix tail_b = pw[static_cast<std::size_t>(m - 1)] * spec.B;

  std::vector<Matrix> j{I};
  // J_i = I + (I + Phi + ... + Phi^{i-1}) A, for 1 <= i <= m-1
  Matrix partial = Matrix::Zero(n, n);
  for (int i = 1; i < m; ++i) {
    partial += pw[static_cast<std::size_t>(i - 1)];
    j.push_back(I + partial * spec.A);
  }
  // J_i = (Phi^{i-m} + ... + Phi^{m-2}) A - Phi^{m-1} B, for m <= i <= 2m-2
  for (int i = m; i <= 2 * m - 2; ++i) {
    Matrix s = Matrix::Zero(n, n);
    for (int k = i - m; k <= m - 2; ++k) s += pw[static_cast<std::size_t>(k)];
    j.push_back(s * spec.A - tail_b);
  }
  j.push_back(-tail_b);
  return j;
}

std::pair<Matrix, Matrix> stock_gammas(const GarchSpec& spec, const Matrix& sigma, int m) {
  check_inputs(spec, sigma, m);
  const auto j = stock_ladder(spec, m);
  return {sandwich_sum(j, sigma), j.back() * sigma};
}

std::pair<Matrix, Matrix> flow_gammas(const GarchSpec& spec, const Matrix& sigma, int m,
                                      const std::optional<Matrix>& sigma_w) {
  check_inputs(spec, sigma, m);
  if (m == 1) return stock_gammas(spec, sigma, m);
  if (!sigma_w) throw Error(ErrorCode::MissingSigmaW, "flow aggregation with m > 1 requires Sigma_w");
  const Index n = spec.dbar();
  if (sigma_w->rows() != n || sigma_w->cols() != n) {
    throw Error(ErrorCode::InvalidInput, "flow aggregation: Sigma_w must be dbar x dbar");
  }
  const auto j = flow_ladder(spec, m);
  const auto pw = phi_powers(phi(spec), m);
  const Matrix& pm = pw.back();
  Matrix g0 = sandwich_sum(j, sigma) + *sigma_w + pm * (*sigma_w) * pm.transpose();
  Matrix g1 = -pm * (*sigma_w);
  for (int i = 0; i < m; ++i) {
    g1.noalias() += j[static_cast<std::size_t>(i + m)] * sigma * j[static_cast<std::size_t>(i)].transpose();
  }
  return {symmetrize(g0), g1};
}

AggregatedSpec aggregate_params(const AggregationInput& input, const ToleranceConfig& tol) {
  const GarchSpec& spec = input.spec;
  check_inputs(spec, input.sigma, input.m);
  const Index n = spec.dbar();
  const int m = input.m;

  AggregatedSpec out;
  out.m = m;
  out.kind = input.kind;
  std::tie(out.gamma0_m, out.gamma1_m) = input.kind == AggregationKind::Stock
                                            ? stock_gammas(spec, input.sigma, m)
                                            : flow_gammas(spec, input.sigma, m, input.sigma_w);

  Matrix phi_m = Matrix::Identity(n, n);
  const Matrix p = phi(spec);
  for (int k = 0; k < m; ++k) phi_m = p * phi_m;

  GammaState gs;
  gs.phi = phi_m;
  gs.gamma0 = symmetrize(out.gamma0_m);
  gs.gamma1 = out.gamma1_m;

  const SolventResult sb = solve_b(gs, tol);
  const SigmaResult sr = recover_sigma(sb.B, gs, tol);

  Vector h = uncond_h(spec, tol);
  if (input.kind == AggregationKind::Flow && m > 1) h *= static_cast<double>(m);

  out.spec_m.d = spec.d;
  out.spec_m.B = sb.B;
  out.spec_m.A = phi_m - sb.B;
  out.spec_m.c = (Matrix::Identity(n, n) - phi_m) * h;
  out.sigma_m = sr.sigma;

  EstimateReport& rep = out.report;
  rep.spec = out.spec_m;
  rep.sigma = sr.sigma;
  rep.phi = phi_m;
  rep.gammas = gs;
  rep.p_eigenvalues = sb.p_eigenvalues;
  rep.b_eigenvalues = sb.selected_eigenvalues;
  rep.residual_pme = pme_residual(sb.B, gs);
  rep.residual_nme = sr.residual_nme;
  rep.sigma_symmetry_gap = sr.symmetry_gap;
  rep.sigma_positive = is_positive_definite(sr.sigma);
  rep.moments.h = h;
  rep.warnings = diagnostics(out.spec_m, tol);
  if (input.kind == AggregationKind::Flow && m > 1) {
    rep.warnings.warn("flow_mean_assumption", "aggregated mean taken as m * h; the w term is assumed mean-neutral");
  }
  if (!rep.sigma_positive) rep.warnings.warn("sigma_not_positive", "aggregated Sigma is not positive definite");
  return out;
}

AggregatedData aggregate_data(const Matrix& y, int m, AggregationKind kind) {
  if (m < 1) throw Error(ErrorCode::InvalidInput, "aggregate_data: m must be >= 1");
  if (y.rows() < m) throw Error(ErrorCode::InvalidInput, "aggregate_data: fewer rows than m");
  const Index blocks = y.rows() / m;
  AggregatedData out;
  out.dropped = y.rows() - blocks * m;
  out.y.resize(blocks, y.cols());
  for (Index b = 0; b < blocks; ++b) {
    if (kind == AggregationKind::Stock) {
      out.y.row(b) = y.row(b * m + m - 1);
    } else {
      out.y.row(b) = y.middleRows(b * m, m).colwise().sum();
    }
  }
  return out;
}

}  // namespace mgarch
