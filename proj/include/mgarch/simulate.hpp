#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "mgarch/model.hpp"

namespace mgarch {

/// Reproducible standard-normal source.
///
/// Algorithm version 1: std::mt19937_64 seeded with the 64-bit seed (its output
/// sequence is fixed by the C++ standard), 53-bit uniforms u = (x >> 11) * 2^-53,
/// and the Marsaglia polar method, both deviates of each accepted pair used in
/// order. Changing any of this requires bumping kVersion.
class NormalStream {
 public:
  static constexpr int kVersion = 1;

  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();
  void fill(Eigen::Ref<Vector> out);

 private:
  double uniform();

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Derives an independent stream seed for replication `index` from `base`
/// (SplitMix64 finalizer over base + golden-ratio * (index + 1)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct SimulationResult {
  Matrix y;                      // n x d returns
  std::optional<Matrix> h_path;  // n x dbar, row t is vech(H_t)
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
};

struct SimulateOptions {
  std::size_t burn_in = 1000;
  bool keep_h_path = true;
};

/// Simulates y_t = L_t eps_t with L_t the lower Cholesky factor of H_t and
/// eps_t iid N(0, I). The recursion starts at vech(H_1) = uncond_h(spec) and the
/// first burn_in steps are discarded. Throws PositivityViolation carrying the
/// (0-based, burn-in included) step index when some H_t is not positive definite.
SimulationResult simulate(const GarchSpec& spec, std::size_t n, std::uint64_t seed,
                          const SimulateOptions& options = {});

/// Rows x_t = vech(y_t y_t^T).
Matrix to_x(const Matrix& y);

}  // namespace mgarch
