#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "mgarch/solver.hpp"

namespace mgarch {

enum class AggregationKind { Stock, Flow };

std::string_view to_string(AggregationKind k);
AggregationKind aggregation_kind_from_string(std::string_view s);

struct AggregationInput {
  GarchSpec spec;
  Matrix sigma;                    // Sigma of the high-frequency innovations
  int m = 1;
  AggregationKind kind = AggregationKind::Stock;
  std::optional<Matrix> sigma_w;   // flow only, required for m > 1
};

struct AggregatedSpec {
  GarchSpec spec_m;
  Matrix sigma_m;
  Matrix gamma0_m;
  Matrix gamma1_m;
  int m = 1;
  AggregationKind kind = AggregationKind::Stock;
  EstimateReport report;  // diagnostics of the B^(m) solve
};

/// The MA coefficient ladder J_0 .. J_m of the stock-sampled process:
/// J_0 = I, J_i = Phi^{i-1} A for 0 < i < m, J_m = -Phi^{m-1} B.
std::vector<Matrix> stock_ladder(const GarchSpec& spec, int m);

/// The flow ladder J_0 .. J_{2m-1} (m >= 2).
std::vector<Matrix> flow_ladder(const GarchSpec& spec, int m);

/// (Gamma0^(m), Gamma1^(m)) for stock sampling.
std::pair<Matrix, Matrix> stock_gammas(const GarchSpec& spec, const Matrix& sigma, int m);

/// (Gamma0^(m), Gamma1^(m)) for flow aggregation; m = 1 falls back to stock.
std::pair<Matrix, Matrix> flow_gammas(const GarchSpec& spec, const Matrix& sigma, int m,
                                      const std::optional<Matrix>& sigma_w);

/// Closed-form parameters of the m-period aggregated GARCH(1,1).
AggregatedSpec aggregate_params(const AggregationInput& input, const ToleranceConfig& tol = default_tolerances());

struct AggregatedData {
  Matrix y;
  Index dropped = 0;  // rows of the trailing partial block
};

/// Stock: rows m, 2m, ... (1-based). Flow: sums of consecutive blocks of m rows.
AggregatedData aggregate_data(const Matrix& y, int m, AggregationKind kind);

}  // namespace mgarch
