#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sfnls/dynamics.hpp"
#include "sfnls/grid.hpp"
#include "sfnls/model.hpp"
#include "sfnls/noise.hpp"

// Random-dynamical-systems layer: the cocycle, pullback experiments,
// absorbing-set inequality and tail-uniformity diagnostics.

namespace sfnls {

/// Bundles everything the two-parameter solution operator needs; applying
/// it is deterministic in (t, tau, path, initial).
struct CocycleHandle {
  GridPtr grid;
  ModelParams params;
  ForcingSpec forcing;
  IntegratorConfig config;
};

/// Phi(t, tau, omega, v_tau): evolves the transformed (v-form) state over
/// [tau, tau + t], which the path must cover. Identity at t = 0; composes
/// exactly on aligned grids.
Field cocycle_apply(const CocycleHandle& handle, double t, double tau,
                    const NoisePath& path, const Field& initial);

/// Random bounded family D(theta_{-t} omega): an L^2 ball whose radius at
/// time -t is radius * e^{growth_rate * t} (sub-exponential temperedness
/// when growth_rate is below every tested epsilon).
struct TemperedSetSpec {
  enum class Kind { ball, ball_scaled };
  Kind kind = Kind::ball;
  double radius = 1.0;
  double growth_rate = 0.0;

  double radius_at(double t_back) const;
};

/// Deterministic draw of a smooth random field with L^2 norm strictly
/// inside the set's radius at time -t_back (low-pass Gaussian spectrum;
/// counter-based, so sample i is the same across experiments).
Field sample_tempered_ic(const GridPtr& grid, const TemperedSetSpec& spec, double t_back,
                         std::uint64_t seed, std::int64_t sample_index);

/// Endpoints Phi(t, -t, omega, v_i) for n_samples draws from D(theta_{-t}).
/// Samples run concurrently (SFNLS_THREADS overrides the pool size).
std::vector<Field> pullback_cloud(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                  double t, int n_samples, const NoisePath& path,
                                  std::uint64_t sample_seed);

/// Max pairwise H^alpha distance of a finite cloud.
double cloud_diameter(const std::vector<Field>& cloud);

/// Symmetric Hausdorff distance between finite clouds in H^alpha.
double cloud_hausdorff(const std::vector<Field>& a, const std::vector<Field>& b);

struct PullbackReport {
  std::vector<double> t_values;
  std::vector<double> image_diameters;            // H^alpha cloud diameter at time 0
  std::vector<double> absorbing_radius_estimates; // max ||v(0)||^2 over the cloud
  std::vector<double> hausdorff_to_largest;       // distance to the largest-t cloud
  std::vector<double> hhalf_max;                  // sup ||(-D)^{a/2+1/4} v(0)||^2
  std::vector<std::vector<Field>> per_path_endpoints;
  bool diverged = false;
};

/// For each t in the increasing schedule, evolves a cloud from -t to 0 under
/// one fixed path and records its diameter and distance to the largest-t
/// cloud. Initial draws reuse the same sample indices across t, so diameter
/// decay is a contraction measurement, not Monte Carlo noise.
PullbackReport pullback_experiment(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                   const std::vector<double>& t_schedule, int n_samples,
                                   const NoisePath& path, std::uint64_t sample_seed = 1);

struct AbsorbingReport {
  double measured = 0.0;  // max over samples of the inequality's left side
  double bound = 0.0;     // analytic right side with the set radius at -t
  double margin = 0.0;    // min over samples of (right - left)
};

/// Evaluates the dissipation inequality
///   ||v(s0)||^2 + (3/4 g + 2 b_eff) int_{-t}^{s0} e^{(5/4) g (s - s0)} ||v||^2 ds
///     <= e^{(5/4) g (-t - s0)} r(-t)^2
///        + 2 ||psi1||_{L^1} (1 - e^{(5/4) g (-t - s0)}) / ((5/4) g)
/// over pullback samples (trapezoidal time integral). sigma0 in [-1, 0].
AbsorbingReport absorbing_radius(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                 double t, double sigma0, const NoisePath& path,
                                 int n_samples, std::uint64_t sample_seed = 1);

struct TailReport {
  std::vector<double> k_values;
  std::vector<double> tail_l2_max;    // max over samples of tail_mass
  std::vector<double> tail_hdot_max;  // empty unless with_hdot
  double mass_min = 0.0;              // smallest endpoint mass (denominator witness)
  bool monotone_in_k = false;
};

/// Tails of pullback-evolved states versus the cutoff radius schedule.
TailReport tail_uniformity_experiment(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                      const std::vector<double>& k_schedule, double t,
                                      const NoisePath& path, int n_samples,
                                      std::uint64_t sample_seed = 1, bool with_hdot = false);

/// Static work pool over [0, n); honors the SFNLS_THREADS environment
/// variable. Results must be written to disjoint slots (order-independent).
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace sfnls
