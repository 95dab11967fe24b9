#include "sfnls/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace sfnls {

namespace {

void phase_nonlinear(Field& u, double h, double sigma) {
  for (auto& v : u.values) {
    double amp2 = std::norm(v);
    double theta = std::pow(amp2, sigma) * h;
    v *= cplx(std::cos(theta), std::sin(theta));
  }
}

// Exact flow of du = -beta u - i g_eff over h (g_eff constant in time).
// Returns the mass change, which equals int 2 Im (f, u) ds along the
// sub-flow in closed form (d/ds ||u||^2 = 2 Im (f, u) pointwise).
double forcing_substep(Field& u, const ForcingSpec& forcing, double h, cplx g_phase) {
  if (forcing.kind == ForcingKind::zero) return 0.0;
  const double cell = u.grid->cell();
  double before = 0.0;
  for (const auto& v : u.values) before += std::norm(v);
  switch (forcing.kind) {
    case ForcingKind::zero:
      break;
    case ForcingKind::linear_damping: {
      double decay = std::exp(-forcing.beta * h);
      for (auto& v : u.values) v *= decay;
      break;
    }
    case ForcingKind::damped_forced: {
      double decay = std::exp(-forcing.beta * h);
      cplx gc = cplx(0.0, -1.0) * g_phase * ((1.0 - decay) / forcing.beta);
      const auto& g = forcing.g_profile->values;
      for (std::size_t i = 0; i < u.values.size(); ++i)
        u.values[i] = decay * u.values[i] + gc * g[i];
      break;
    }
  }
  double after = 0.0;
  for (const auto& v : u.values) after += std::norm(v);
  return (after - before) * cell;
}

void global_phase(Field& u, double theta) {
  cplx ph(std::cos(theta), std::sin(theta));
  for (auto& v : u.values) v *= ph;
}

// Dispersion + damping multiplier; returns the H^alpha norm squared of the
// result (free: the spectrum is already in hand) for the divergence guard.
double linear_substep(Field& u, double h, double gamma, const IntegratorConfig& cfg) {
  const Grid& g = *u.grid;
  auto spec = g.forward(u.values);
  const double damp = std::exp(-gamma * h);
  double l2 = 0.0, hdot = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    cplx m = damp;
    if (!cfg.disable_dispersion) {
      double th = -g.symbol(i) * h;
      m *= cplx(std::cos(th), std::sin(th));
    }
    spec[i] *= m;
    double a2 = std::norm(spec[i]);
    l2 += a2;
    hdot += g.symbol(i) * a2;
  }
  u.values = g.inverse(spec);
  const double w = g.cell() / static_cast<double>(g.size());
  const double c = frac_laplacian_constant(g.dim(), g.alpha());
  return l2 * w + 2.0 * (hdot * w) / c;
}

TrajectoryState do_step(const TrajectoryState& state, const ModelParams& params,
                        const ForcingSpec& forcing, const NoisePath& path,
                        const IntegratorConfig& cfg, bool v_form) {
  if (state.path_cursor < 0 || state.path_cursor >= path.steps)
    throw std::out_of_range("step: path cursor outside noise window");
  if (std::abs(cfg.dt - path.dt) > 1e-14 * std::max(1.0, path.dt))
    throw std::invalid_argument("step: config dt must match path dt");
  if (state.diverged) return state;

  const double h = cfg.dt;
  const std::int64_t k = state.path_cursor;

  double theta;  // phase accumulated by the noise (or z drift) sub-flow
  double z_pre = 0.0, z_post = 0.0;
  if (v_form) {
    double zk = cfg.disable_noise ? 0.0 : path.z_samples[k];
    double zk1 = cfg.disable_noise ? 0.0 : path.z_samples[k + 1];
    theta = cfg.v_form_variant == VForm::paper ? h * zk : h * 0.5 * (zk + zk1);
    z_pre = zk;
    z_post = zk1;
  } else {
    theta = cfg.disable_noise ? 0.0 : path.w_increments[k];
  }
  // transformed additive forcing e^{-iz} g at the sub-step times
  cplx gp_pre = cplx(std::cos(z_pre), -std::sin(z_pre));
  cplx gp_post = cplx(std::cos(z_post), -std::sin(z_post));

  TrajectoryState out = state;
  Field& u = out.field;
  double h_alpha_sq = 0.0;

  if (cfg.scheme == Scheme::strang) {
    if (!cfg.disable_nonlinearity) phase_nonlinear(u, h / 2.0, params.sigma);
    out.forcing_mass_integral += forcing_substep(u, forcing, h / 2.0, gp_pre);
    global_phase(u, theta);
    h_alpha_sq = linear_substep(u, h, params.gamma, cfg);
    out.forcing_mass_integral += forcing_substep(u, forcing, h / 2.0, gp_post);
    if (!cfg.disable_nonlinearity) phase_nonlinear(u, h / 2.0, params.sigma);
  } else {
    if (!cfg.disable_nonlinearity) phase_nonlinear(u, h, params.sigma);
    out.forcing_mass_integral += forcing_substep(u, forcing, h, gp_pre);
    global_phase(u, theta);
    h_alpha_sq = linear_substep(u, h, params.gamma, cfg);
  }

  out.time = state.time + h;
  out.path_cursor = k + 1;
  if (!(h_alpha_sq < cfg.overflow_guard * cfg.overflow_guard)) out.diverged = true;
  return out;
}

}  // namespace

TrajectoryState step_u(const TrajectoryState& state, const ModelParams& params,
                       const ForcingSpec& forcing, const NoisePath& path,
                       const IntegratorConfig& config) {
  return do_step(state, params, forcing, path, config, false);
}

TrajectoryState step_v(const TrajectoryState& state, const ModelParams& params,
                       const ForcingSpec& forcing, const NoisePath& path,
                       const IntegratorConfig& config) {
  return do_step(state, params, forcing, path, config, true);
}

TrajectoryState evolve(const Field& initial, double t_start, double t_end,
                       const ModelParams& params, const ForcingSpec& forcing,
                       const NoisePath& path, const IntegratorConfig& config,
                       StepFn step, const Observer& observer,
                       std::int64_t observer_stride) {
  const double h = config.dt;
  std::int64_t n_steps = std::llround((t_end - t_start) / h);
  if (std::abs(t_start + n_steps * h - t_end) > 1e-9)
    throw std::invalid_argument("evolve: window not aligned to dt");
  std::int64_t cursor0 = std::llround(t_start / h) - path.base_index;
  if (cursor0 < 0 || cursor0 + n_steps > path.steps)
    throw std::out_of_range("evolve: window not covered by noise path");

  TrajectoryState st;
  st.time = t_start;
  st.field = initial;
  st.path_cursor = cursor0;
  if (observer) observer(st);
  for (std::int64_t k = 0; k < n_steps; ++k) {
    st = step(st, params, forcing, path, config);
    if (st.diverged) break;
    if (observer && ((k + 1) % observer_stride == 0 || k + 1 == n_steps)) observer(st);
  }
  return st;
}

Field free_propagator(const Field& field, double t, const ModelParams& /*params*/) {
  const Grid& g = *field.grid;
  auto spec = g.forward(field.values);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double th = -g.symbol(i) * t;
    spec[i] *= cplx(std::cos(th), std::sin(th));
  }
  return Field{field.grid, g.inverse(spec)};
}

}  // namespace sfnls
