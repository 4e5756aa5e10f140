#include "mgarch/simulate.hpp"

#include <cmath>

namespace mgarch {

double NormalStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalStream::next() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  return u * f;
}

void NormalStream::fill(Eigen::Ref<Vector> out) {
  for (Index i = 0; i < out.size(); ++i) out(i) = next();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SimulationResult simulate(const GarchSpec& spec, std::size_t n, std::uint64_t seed, const SimulateOptions& options) {
  spec.validate();
  if (n < 1) throw Error(ErrorCode::InvalidInput, "simulate: n must be positive");
  const Index d = spec.d;
  const Index dbar = spec.dbar();

  SimulationResult out;
  out.seed = seed;
  out.burn_in = options.burn_in;
  out.y.resize(static_cast<Index>(n), d);
  if (options.keep_h_path) out.h_path = Matrix(static_cast<Index>(n), dbar);

  NormalStream rng(seed);
  Vector h = uncond_h(spec);
  Vector eps(d), y(d), x(dbar);
  Matrix big_h(d, d);
  const std::size_t total = n + options.burn_in;
  for (std::size_t t = 0; t < total; ++t) {
    big_h = unvech(h);
    Eigen::LLT<Matrix> llt(big_h);
    if (llt.info() != Eigen::Success || !h.allFinite()) {
      throw PositivityViolation(t, "simulate: H_t not positive definite at step " + std::to_string(t));
    }
    rng.fill(eps);
    y.noalias() = llt.matrixL() * eps;
    if (t >= options.burn_in) {
      const auto row = static_cast<Index>(t - options.burn_in);
      out.y.row(row) = y.transpose();
      if (out.h_path) out.h_path->row(row) = h.transpose();
    }
    x = vech(y * y.transpose());
    h = spec.c + spec.A * x + spec.B * h;
  }
  return out;
}

Matrix to_x(const Matrix& y) {
  const Index d = y.cols();
  Matrix x(y.rows(), vech_size(d));
  for (Index t = 0; t < y.rows(); ++t) {
    Index k = 0;
    for (Index j = 0; j < d; ++j)
      for (Index i = j; i < d; ++i) x(t, k++) = y(t, i) * y(t, j);
  }
  return x;
}

}  // namespace mgarch
