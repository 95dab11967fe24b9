#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfnls/grid.hpp"

// Model parameters, forcing presets with their analytic witness functions,
// and the admissible-pair arithmetic.

namespace sfnls {

struct ModelParams {
  double alpha = 0.5;
  double sigma = 1.0;
  double gamma = 0.5;
  double beta = 0.0;
  int dim = 1;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool theorem_scope = true;   // the sharp alpha interval applies for dim >= 2
  bool mass_critical = false;  // sigma * dim == 2 * alpha
  bool ok() const { return violations.empty(); }
};

/// Checks the parameter regime: alpha in (n/(2n-1), 1), sigma in
/// (0, 2 alpha/(n-2 alpha)) when n > 2 alpha, and flags the mass-critical
/// (global) regime sigma*n = 2*alpha. Returns a report, never throws.
ValidationReport validate_params(const ModelParams& params);

struct AdmissiblePair {
  double p = 0.0;
  double q = 0.0;
};

/// Space-time exponents p = 4 alpha (sigma+2) / (sigma (n - 2 alpha)),
/// q = n (sigma+2) / (n + sigma alpha); asserts 2 alpha/p + n/q = n/2.
AdmissiblePair theorem_pair(const ModelParams& params);

/// Admissibility residual |2 alpha/p + n/q - n/2|.
double admissibility_residual(double alpha, int dim, const AdmissiblePair& pair);

/// True for the excluded endpoint pair (2, (4n-2)/(2n-3)).
bool is_forbidden_pair(int dim, double p, double q);

enum class ForcingKind { zero, linear_damping, damped_forced };

/// Forcing presets f(t,x,u):
///   zero           -> 0
///   linear_damping -> -i beta u
///   damped_forced  -> -i beta u + g(x), g a fixed profile
/// Each preset carries its dissipation witness: an effective decay rate
/// beta_eff and a bound psi1 with Im(f ubar) <= -beta_eff |u|^2 + psi1.
struct ForcingSpec {
  ForcingKind kind = ForcingKind::zero;
  double beta = 0.0;
  std::optional<Field> g_profile;

  /// Effective beta in the dissipation witness. For damped_forced the
  /// additive part is split by Young's inequality with epsilon = beta,
  /// halving the effective rate.
  double beta_eff() const;
  /// Pointwise psi1 witness (|g|^2 / (2 beta) for damped_forced, else 0).
  double psi1_at(std::size_t idx) const;
  /// L^1 norm of psi1 over the torus.
  double psi1_l1() const;
};

ForcingSpec zero_forcing();
ForcingSpec linear_damping_forcing(double beta);
ForcingSpec damped_forced_forcing(double beta, Field g);

/// Evaluates f(t, x, u) pointwise.
Field apply_forcing(const ForcingSpec& spec, double t, const Field& field);

struct AuditReport {
  double max_violation = 0.0;  // max over samples/points of Im(f ubar) + beta_eff|u|^2 - psi1
};

/// Numerically audits the dissipation inequality over sample fields.
AuditReport assumption_audit(const ForcingSpec& spec, const std::vector<Field>& samples);

}  // namespace sfnls
