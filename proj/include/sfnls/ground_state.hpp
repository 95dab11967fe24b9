#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfnls/grid.hpp"
#include "sfnls/model.hpp"

// Ground state R of (-Delta)^alpha R + R - R^{2 sigma + 1} = 0 via the
// Petviashvili normalized fixed point, and the sharp Gagliardo-Nirenberg
// constant c_opt = (sigma + 1) / ||R||_{L^2}^{2 sigma}.

namespace sfnls {

struct GroundState {
  Field profile;          // real, positive, even-symmetric numerically
  double residual_l2 = 0.0;  // ||(-Delta)^a R + R - R^{2s+1}|| / ||R||
  double c_opt = 0.0;
  int iterations = 0;
  std::vector<double> quotient_history;  // Petviashvili quotient S_m per iteration
  bool converged = false;
};

/// Petviashvili iteration R_{m+1} = S_m^nu ((-Delta)^alpha + 1)^{-1} R_m^{2s+1}
/// with the stabilizing exponent nu = (2 sigma + 1) / (2 sigma) (the choice
/// neutralizing the quotient's linearized growth; the midpoint of the
/// convergence interval for power 2 sigma + 1). Iterates are symmetrized
/// under x -> -x each sweep. Starts from a unit-mass Gaussian when `init`
/// is absent. Stops when the relative equation residual drops below `tol`
/// (the quotient alone is quadratically insensitive to profile error).
/// Throws on divergence of the quotient; returns with converged = false
/// when max_iter is hit above tol.
GroundState solve_ground_state(const GridPtr& grid, const ModelParams& params,
                               const std::optional<Field>& init = std::nullopt,
                               int max_iter = 2000, double tol = 1e-10);

/// ||R||_{L^2}^2, the critical mass of the coercivity bound in the
/// mass-critical regime sigma * n = 2 * alpha. Throws outside that regime
/// or on a non-converged input.
double mass_critical_threshold(const GroundState& ground, const ModelParams& params);

/// Binary cache keyed by (n, alpha, sigma, L, N): load returns nullopt on a
/// missing or mismatched entry.
void save_ground_state(const GroundState& gs, const ModelParams& params,
                       const std::string& filename);
std::optional<GroundState> load_ground_state(const GridPtr& grid, const ModelParams& params,
                                             const std::string& filename);

}  // namespace sfnls
