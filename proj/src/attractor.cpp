#include "sfnls/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sfnls/observables.hpp"

namespace sfnls {

namespace {

constexpr std::uint64_t kStreamInit = 2;  // IC draws, disjoint from W/z streams

double h_alpha_dist(const Field& a, const Field& b) {
  return std::sqrt(norms(a - b).h_alpha_sq);
}

}  // namespace

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SFNLS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) threads = v;
  }
  threads = std::max<int>(1, std::min<std::int64_t>(threads, n));
  if (threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < n; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

Field cocycle_apply(const CocycleHandle& handle, double t, double tau,
                    const NoisePath& path, const Field& initial) {
  if (t < 0.0) throw std::invalid_argument("cocycle: t must be nonnegative");
  if (t == 0.0) return initial;
  return evolve(initial, tau, tau + t, handle.params, handle.forcing, path,
                handle.config, step_v)
      .field;
}

double TemperedSetSpec::radius_at(double t_back) const {
  if (kind == Kind::ball) return radius;
  return radius * std::exp(growth_rate * t_back);
}

Field sample_tempered_ic(const GridPtr& grid, const TemperedSetSpec& spec, double t_back,
                         std::uint64_t seed, std::int64_t sample_index) {
  const Grid& g = *grid;
  const std::size_t n = g.size();
  const std::int64_t base = sample_index * static_cast<std::int64_t>(2 * n + 1);
  std::vector<cplx> spectrum(n);
  const double kc = 2.0;  // low-pass scale keeping draws smooth
  for (std::size_t i = 0; i < n; ++i) {
    double w = std::exp(-g.xi_sq(i) / (2.0 * kc * kc));
    double re = rng::normal(seed, kStreamInit, base + static_cast<std::int64_t>(2 * i));
    double im = rng::normal(seed, kStreamInit, base + static_cast<std::int64_t>(2 * i) + 1);
    spectrum[i] = w * cplx(re, im);
  }
  Field u{grid, g.inverse(spectrum)};
  // Gaussian envelope localizes the draw (decay ~e^{-18} at the torus edge),
  // so functional-inequality audits on these fields are meaningful
  const double w_env = g.extent() / 12.0;
  const int N = g.points();
  for (std::size_t i = 0; i < n; ++i) {
    double x, y = 0.0;
    if (g.dim() == 1) {
      x = g.coord(static_cast<int>(i));
    } else {
      x = g.coord(static_cast<int>(i / static_cast<std::size_t>(N)));
      y = g.coord(static_cast<int>(i % static_cast<std::size_t>(N)));
    }
    u.values[i] *= std::exp(-(x * x + y * y) / (2.0 * w_env * w_env));
  }
  // place the draw strictly inside the ball: fraction in (0.5, 0.95)
  double gdraw = rng::normal(seed, kStreamInit, base + static_cast<std::int64_t>(2 * n));
  double unif = 0.5 * (1.0 + std::erf(gdraw / std::sqrt(2.0)));
  double frac = 0.5 + 0.45 * unif;
  double m = 0.0;
  for (const auto& v : u.values) m += std::norm(v);
  m *= g.cell();
  double scale = frac * spec.radius_at(t_back) / std::sqrt(m);
  for (auto& v : u.values) v *= scale;
  return u;
}

std::vector<Field> pullback_cloud(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                  double t, int n_samples, const NoisePath& path,
                                  std::uint64_t sample_seed) {
  std::vector<Field> out(n_samples);
  parallel_for(n_samples, [&](std::int64_t i) {
    Field ic = sample_tempered_ic(handle.grid, spec, t, sample_seed, i);
    out[i] = cocycle_apply(handle, t, -t, path, ic);
  });
  return out;
}

double cloud_diameter(const std::vector<Field>& cloud) {
  double d = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j)
      d = std::max(d, h_alpha_dist(cloud[i], cloud[j]));
  return d;
}

double cloud_hausdorff(const std::vector<Field>& a, const std::vector<Field>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty cloud");
  double h = 0.0;
  auto one_sided = [&](const std::vector<Field>& from, const std::vector<Field>& to) {
    double sup = 0.0;
    for (const auto& x : from) {
      double inf = std::numeric_limits<double>::infinity();
      for (const auto& y : to) inf = std::min(inf, h_alpha_dist(x, y));
      sup = std::max(sup, inf);
    }
    return sup;
  };
  h = std::max(one_sided(a, b), one_sided(b, a));
  return h;
}

PullbackReport pullback_experiment(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                   const std::vector<double>& t_schedule, int n_samples,
                                   const NoisePath& path, std::uint64_t sample_seed) {
  if (!std::is_sorted(t_schedule.begin(), t_schedule.end()))
    throw std::invalid_argument("pullback: t_schedule must be increasing");
  PullbackReport rep;
  for (double t : t_schedule) {
    auto cloud = pullback_cloud(handle, spec, t, n_samples, path, sample_seed);
    rep.t_values.push_back(t);
    rep.image_diameters.push_back(cloud_diameter(cloud));
    double max_mass = 0.0, max_hhalf = 0.0;
    for (const auto& u : cloud) {
      max_mass = std::max(max_mass, mass(u));
      Field half = frac_laplacian(u, u.grid->alpha() / 2.0 + 0.25);
      max_hhalf = std::max(max_hhalf, mass(half));
    }
    rep.absorbing_radius_estimates.push_back(max_mass);
    rep.hhalf_max.push_back(max_hhalf);
    rep.per_path_endpoints.push_back(std::move(cloud));
  }
  const auto& largest = rep.per_path_endpoints.back();
  for (const auto& cloud : rep.per_path_endpoints)
    rep.hausdorff_to_largest.push_back(cloud_hausdorff(cloud, largest));
  return rep;
}

AbsorbingReport absorbing_radius(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                 double t, double sigma0, const NoisePath& path,
                                 int n_samples, std::uint64_t sample_seed) {
  if (sigma0 < -1.0 || sigma0 > 0.0)
    throw std::invalid_argument("absorbing: sigma0 must lie in [-1, 0]");
  const double gamma = handle.params.gamma;
  const double mu = 1.25 * gamma;
  const double coeff = 0.75 * gamma + 2.0 * handle.forcing.beta_eff();
  const double decay = std::exp(mu * (-t - sigma0));
  const double r2 = spec.radius_at(t) * spec.radius_at(t);
  const double forcing_term =
      2.0 * handle.forcing.psi1_l1() * (1.0 - decay) / mu;
  const double rhs = decay * r2 + forcing_term;

  std::vector<double> lhs(n_samples);
  parallel_for(n_samples, [&](std::int64_t i) {
    Field ic = sample_tempered_ic(handle.grid, spec, t, sample_seed, i);
    double integral = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    double end_mass = 0.0;
    Observer acc = [&](const TrajectoryState& st) {
      double w = std::exp(mu * (st.time - sigma0)) * mass(st.field);
      if (have_prev) integral += 0.5 * handle.config.dt * (prev + w);
      prev = w;
      have_prev = true;
      end_mass = mass(st.field);
    };
    evolve(ic, -t, sigma0, handle.params, handle.forcing, path, handle.config,
           step_v, acc, 1);
    lhs[i] = end_mass + coeff * integral;
  });

  AbsorbingReport rep;
  rep.bound = rhs;
  rep.measured = *std::max_element(lhs.begin(), lhs.end());
  rep.margin = rhs - rep.measured;
  return rep;
}

TailReport tail_uniformity_experiment(const CocycleHandle& handle, const TemperedSetSpec& spec,
                                      const std::vector<double>& k_schedule, double t,
                                      const NoisePath& path, int n_samples,
                                      std::uint64_t sample_seed, bool with_hdot) {
  auto cloud = pullback_cloud(handle, spec, t, n_samples, path, sample_seed);
  TailReport rep;
  rep.mass_min = std::numeric_limits<double>::infinity();
  for (const auto& u : cloud) rep.mass_min = std::min(rep.mass_min, mass(u));
  for (double k : k_schedule) {
    CutoffSpec cutoff{k};
    double tl2 = 0.0, thd = 0.0;
    for (const auto& u : cloud) {
      tl2 = std::max(tl2, tail_mass(u, cutoff));
      if (with_hdot) thd = std::max(thd, tail_hdot(u, cutoff));
    }
    rep.k_values.push_back(k);
    rep.tail_l2_max.push_back(tl2);
    if (with_hdot) rep.tail_hdot_max.push_back(thd);
  }
  rep.monotone_in_k = true;
  for (std::size_t i = 1; i < rep.tail_l2_max.size(); ++i)
    if (rep.tail_l2_max[i] > rep.tail_l2_max[i - 1]) rep.monotone_in_k = false;
  return rep;
}

}  // namespace sfnls
