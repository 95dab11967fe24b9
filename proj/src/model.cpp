#include "sfnls/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sfnls {

ValidationReport validate_params(const ModelParams& p) {
  ValidationReport r;
  auto add = [&](const std::string& s) { r.violations.push_back(s); };

  if (p.dim != 1 && p.dim != 2) add("dim must be 1 or 2");
  if (!(p.sigma > 0.0)) add("sigma must be positive");
  if (!(p.gamma > 0.0)) add("gamma must be positive");
  if (p.beta < 0.0) add("beta must be nonnegative");
  if (!(p.alpha > 0.0) || !(p.alpha < 1.0)) add("alpha must lie in (0, 1)");

  // The sharp interval (n/(2n-1), 1) comes from the radial theory, which
  // assumes n >= 2; for n = 1 it degenerates and is reported as out of scope.
  r.theorem_scope = p.dim >= 2;
  if (r.theorem_scope && p.alpha > 0.0 && p.alpha < 1.0) {
    double lo = static_cast<double>(p.dim) / (2.0 * p.dim - 1.0);
    if (!(p.alpha > lo)) {
      std::ostringstream os;
      os << "alpha = " << p.alpha << " outside the interval (" << p.dim << "/"
         << 2 * p.dim - 1 << ", 1)";
      add(os.str());
    }
  }
  if (p.sigma > 0.0 && p.dim > 2.0 * p.alpha) {
    double hi = 2.0 * p.alpha / (p.dim - 2.0 * p.alpha);
    if (!(p.sigma < hi)) {
      std::ostringstream os;
      os << "sigma = " << p.sigma << " must be below 2*alpha/(n-2*alpha) = " << hi;
      add(os.str());
    }
  }
  r.mass_critical = std::abs(p.sigma * p.dim - 2.0 * p.alpha) < 1e-12;
  return r;
}

AdmissiblePair theorem_pair(const ModelParams& p) {
  double denom = p.sigma * (p.dim - 2.0 * p.alpha);
  if (std::abs(p.dim - 2.0 * p.alpha) < 1e-14)
    throw std::domain_error("theorem_pair: n = 2*alpha, pair undefined");
  AdmissiblePair pair;
  pair.p = 4.0 * p.alpha * (p.sigma + 2.0) / denom;
  pair.q = p.dim * (p.sigma + 2.0) / (p.dim + p.sigma * p.alpha);
  if (admissibility_residual(p.alpha, p.dim, pair) > 1e-10)
    throw std::logic_error("theorem_pair: admissibility identity violated");
  return pair;
}

double admissibility_residual(double alpha, int dim, const AdmissiblePair& pair) {
  return std::abs(2.0 * alpha / pair.p + dim / pair.q - dim / 2.0);
}

bool is_forbidden_pair(int dim, double p, double q) {
  if (2 * dim - 3 <= 0) return false;
  double q_forbidden = (4.0 * dim - 2.0) / (2.0 * dim - 3.0);
  return std::abs(p - 2.0) < 1e-12 && std::abs(q - q_forbidden) < 1e-12;
}

double ForcingSpec::beta_eff() const {
  switch (kind) {
    case ForcingKind::zero: return 0.0;
    case ForcingKind::linear_damping: return beta;
    case ForcingKind::damped_forced: return beta / 2.0;
  }
  return 0.0;
}

double ForcingSpec::psi1_at(std::size_t idx) const {
  if (kind != ForcingKind::damped_forced) return 0.0;
  return std::norm(g_profile->values[idx]) / (2.0 * beta);
}

double ForcingSpec::psi1_l1() const {
  if (kind != ForcingKind::damped_forced) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < g_profile->values.size(); ++i) s += psi1_at(i);
  return s * g_profile->grid->cell();
}

ForcingSpec zero_forcing() { return ForcingSpec{}; }

ForcingSpec linear_damping_forcing(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("linear_damping: beta must be positive");
  ForcingSpec s;
  s.kind = ForcingKind::linear_damping;
  s.beta = beta;
  return s;
}

ForcingSpec damped_forced_forcing(double beta, Field g) {
  if (!(beta > 0.0)) throw std::invalid_argument("damped_forced: beta must be positive");
  ForcingSpec s;
  s.kind = ForcingKind::damped_forced;
  s.beta = beta;
  s.g_profile = std::move(g);
  return s;
}

Field apply_forcing(const ForcingSpec& spec, double /*t*/, const Field& field) {
  Field out(field.grid);
  switch (spec.kind) {
    case ForcingKind::zero:
      break;
    case ForcingKind::linear_damping:
      for (std::size_t i = 0; i < field.values.size(); ++i)
        out.values[i] = cplx(0.0, -spec.beta) * field.values[i];
      break;
    case ForcingKind::damped_forced:
      for (std::size_t i = 0; i < field.values.size(); ++i)
        out.values[i] =
            cplx(0.0, -spec.beta) * field.values[i] + spec.g_profile->values[i];
      break;
  }
  return out;
}

AuditReport assumption_audit(const ForcingSpec& spec, const std::vector<Field>& samples) {
  if (samples.empty()) throw std::invalid_argument("assumption_audit: no samples");
  AuditReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  const double beff = spec.beta_eff();
  for (const auto& u : samples) {
    Field f = apply_forcing(spec, 0.0, u);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      double im = std::imag(f.values[i] * std::conj(u.values[i]));
      double v = im + beff * std::norm(u.values[i]) - spec.psi1_at(i);
      if (v > rep.max_violation) rep.max_violation = v;
    }
  }
  return rep;
}

}  // namespace sfnls
