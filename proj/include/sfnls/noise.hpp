#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Wiener path generation, the stationary Ornstein-Uhlenbeck process z and
// the measure-preserving shift. Increments and OU samples are pure functions
// of (seed, dt, absolute step index), so shifting or extending a path
// backward reproduces shared windows bit-identically.

namespace sfnls {

namespace rng {
/// Stateless counter-based standard normal draw. `stream` separates
/// independent noise channels, `index` may be negative (pullback windows).
double normal(std::uint64_t seed, std::uint64_t stream, std::int64_t index);
}  // namespace rng

/// Discretized Wiener path W together with the stationary OU samples
/// z(theta_t omega) of dy = -y dt + dW, sampled at the same grid points.
/// The per-step OU integral is coupled to the driving increment by the
/// exact joint Gaussian law, so (W, z) has the exact law at grid points.
struct NoisePath {
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::int64_t steps = 0;
  std::int64_t base_index = 0;            // t0 = base_index * dt
  std::vector<double> w_increments;       // size steps
  std::vector<double> z_samples;          // size steps + 1

  double t0() const { return static_cast<double>(base_index) * dt; }
};

/// Samples the coupled (W, z) path on [t0, t0 + steps*dt]; t0 must be an
/// integer multiple of dt. z_samples[0] follows the stationary law
/// Normal(0, 1/2) and subsequent samples the exact OU transition.
NoisePath sample_path(std::uint64_t seed, double t0, double dt, std::int64_t steps);

/// The path viewed from t0 + m_steps*dt (theta shift); shared entries are
/// bit-identical with the original and shifts compose exactly.
NoisePath shift_path(const NoisePath& path, std::int64_t m_steps);

/// Prepends extra_steps increments so the path starts earlier; the
/// restriction to the original window is bit-identical.
NoisePath extend_path_backward(const NoisePath& path, std::int64_t extra_steps);

/// Views the same underlying trajectory at twice the step: pairs of W
/// increments are summed and every other z sample kept. Requires even
/// steps and base_index. Note the result differs from sampling afresh at
/// 2*dt -- it is the refinement-consistent coarse path used by pathwise
/// convergence studies.
NoisePath coarsen_path(const NoisePath& path);

/// Binary sidecar (header: seed, t0, dt, steps; payload: little-endian
/// 64-bit floats) for experiment reproducibility.
void save_path(const NoisePath& path, const std::string& filename);
NoisePath load_path(const std::string& filename);

}  // namespace sfnls
