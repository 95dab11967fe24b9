#include "sfnls/observables.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace sfnls {

double mass(const Field& field) {
  double s = 0.0;
  for (const auto& v : field.values) s += std::norm(v);
  return s * field.grid->cell();
}

double energy(const Field& field, const ModelParams& params) {
  auto r = norms(field, {2.0 * params.sigma + 2.0});
  return 0.5 * r.hdot_alpha_sq - r.lp.at(2.0 * params.sigma + 2.0) / (2.0 * params.sigma + 2.0);
}

DiagnosticsCollector::DiagnosticsCollector(ModelParams params, ForcingSpec forcing,
                                           const NoisePath& path, double c_opt,
                                           std::vector<double> tail_radii, bool track_hhalf)
    : params_(std::move(params)), forcing_(std::move(forcing)), path_(&path),
      c_opt_(c_opt), tail_radii_(std::move(tail_radii)), track_hhalf_(track_hhalf) {}

DiagnosticsCollector::Integrands DiagnosticsCollector::integrands(
    const TrajectoryState& st) const {
  const Field& u = st.field;
  const double cell = u.grid->cell();
  Field f = apply_forcing(forcing_, st.time, u);
  Field lap = frac_laplacian(u, u.grid->alpha());

  Integrands I;
  const double two_sigma = 2.0 * params_.sigma;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const cplx ui = u.values[i];
    const cplx fi = f.values[i];
    const cplx li = lap.values[i];
    const double a2 = std::norm(ui);
    I.im_f_u += std::imag(fi * std::conj(ui));
    I.mass += a2;
    I.kinetic2 += std::real(std::conj(li) * ui);
    I.potential += std::pow(a2, params_.sigma + 1.0);
    cplx weight = std::conj(li) - std::pow(a2, params_.sigma) * std::conj(ui);
    I.f_energy += std::imag(weight * fi);
    I.dw_integrand += std::imag(std::conj(li) * ui);
  }
  I.im_f_u *= 2.0 * cell;
  I.mass *= cell;
  I.kinetic2 *= cell;
  I.potential *= cell;
  I.f_energy *= cell;
  I.dw_integrand *= cell;
  (void)two_sigma;
  return I;
}

void DiagnosticsCollector::snapshot(const TrajectoryState& st) {
  Integrands cur = integrands(st);
  if (have_prev_) {
    const double h = st.time - prev_time_;
    acc_mass_ += 0.5 * h * (prev_.mass + cur.mass);
    acc_kin2_ += 0.5 * h * (prev_.kinetic2 + cur.kinetic2);
    acc_pot_ += 0.5 * h * (prev_.potential + cur.potential);
    // the forcing-work integrand is the one term the noise phase reaches, so
    // it is rough in time; accumulate it (and the dW integral) by the
    // left-point rule, the convention the stochastic integral is stated with
    acc_f_energy_ += h * prev_.f_energy;
    double dw = 0.0;
    for (std::int64_t k = prev_cursor_; k < st.path_cursor; ++k)
      if (k >= 0 && k < path_->steps) dw += path_->w_increments[k];
    acc_dw_ += prev_.dw_integrand * dw;
  }
  prev_ = cur;
  prev_time_ = st.time;
  prev_cursor_ = st.path_cursor;
  have_prev_ = true;
  const Field& u = st.field;
  auto nr = norms(u, {2.0 * params_.sigma + 2.0});
  record_.times.push_back(st.time);
  record_.mass.push_back(nr.l2_sq);
  record_.energy.push_back(0.5 * nr.hdot_alpha_sq -
                           nr.lp.at(2.0 * params_.sigma + 2.0) / (2.0 * params_.sigma + 2.0));
  record_.h_alpha_sq.push_back(nr.h_alpha_sq);
  if (track_hhalf_) {
    Field half = frac_laplacian(u, u.grid->alpha() / 2.0 + 0.25);
    record_.hhalf_sq.push_back(mass(half));
  }
  if (c_opt_ > 0.0 && nr.l2_sq > 0.0)
    record_.gn_ratio.push_back(gn_ratio(u, params_, c_opt_));
  for (double k : tail_radii_) {
    CutoffSpec c{k};
    record_.tail_l2[k].push_back(tail_mass(u, c));
  }
  // exact along the forcing sub-flows (see TrajectoryState), so the mass
  // residual stays quadrature-limited under rough noise phases
  record_.int_im_f_u.push_back(st.forcing_mass_integral);
  record_.int_mass.push_back(acc_mass_);
  record_.int_kinetic2.push_back(acc_kin2_);
  record_.int_potential.push_back(acc_pot_);
  record_.int_f_energy.push_back(acc_f_energy_);
  record_.int_dw.push_back(acc_dw_);
  if (st.diverged) record_.diverged = true;
}

Observer DiagnosticsCollector::record() {
  return [this](const TrajectoryState& st) { snapshot(st); };
}

std::vector<double> mass_identity_residual(const DiagnosticsRecord& r, double gamma) {
  std::vector<double> res(r.times.size());
  for (std::size_t i = 0; i < res.size(); ++i)
    res[i] = r.mass[i] - r.mass[0] - r.int_im_f_u[i] + 2.0 * gamma * r.int_mass[i];
  return res;
}

std::vector<double> energy_identity_residual(const DiagnosticsRecord& r, double gamma) {
  std::vector<double> res(r.times.size());
  for (std::size_t i = 0; i < res.size(); ++i)
    res[i] = r.energy[i] - r.energy[0] + r.int_dw[i] + gamma * r.int_kinetic2[i] -
             gamma * r.int_potential[i] - r.int_f_energy[i];
  return res;
}

double gn_ratio(const Field& field, const ModelParams& params, double c_opt) {
  auto nr = norms(field, {2.0 * params.sigma + 2.0});
  if (!(nr.l2_sq > 0.0)) throw std::invalid_argument("gn_ratio: zero field");
  const double s = params.sigma;
  const double kexp = params.dim * s / params.alpha;  // power of the Hdot norm
  double lhs = nr.lp.at(2.0 * s + 2.0);
  double rhs = c_opt * std::pow(nr.hdot_alpha_sq, kexp / 2.0) *
               std::pow(nr.l2_sq, (2.0 * s + 2.0 - kexp) / 2.0);
  return lhs / rhs;
}

double CutoffSpec::rho(double s) const {
  if (s <= 0.5) return 0.0;
  if (s >= 1.0) return 1.0;
  double t = 2.0 * s - 1.0;
  return ((6.0 * t - 15.0) * t + 10.0) * t * t * t;
}

namespace {

double radius_at(const Grid& g, std::size_t idx) {
  if (g.dim() == 1) return std::abs(g.coord(static_cast<int>(idx)));
  int N = g.points();
  double x = g.coord(static_cast<int>(idx / N));
  double y = g.coord(static_cast<int>(idx % N));
  return std::hypot(x, y);
}

void check_cutoff(const Field& field, const CutoffSpec& cutoff) {
  if (!(cutoff.k > 0.0) || cutoff.k >= field.grid->extent() / 2.0)
    throw std::invalid_argument("cutoff radius must lie inside the torus");
}

}  // namespace

double tail_mass(const Field& field, const CutoffSpec& cutoff) {
  check_cutoff(field, cutoff);
  const Grid& g = *field.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < field.values.size(); ++i)
    s += cutoff.rho_at(radius_at(g, i)) * std::norm(field.values[i]);
  return s * g.cell();
}

double tail_hdot(const Field& field, const CutoffSpec& cutoff) {
  check_cutoff(field, cutoff);
  const Grid& g = *field.grid;
  if (g.size() > 262144) throw std::invalid_argument("tail_hdot: grid too large");
  const int N = g.points();
  const double expo = (g.dim() + 2.0 * g.alpha()) / 2.0;
  double sum = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i < N; ++i) {
      double w = cutoff.rho_at(std::abs(g.coord(i)));
      if (w == 0.0) continue;
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        double dx = g.coord(i) - g.coord(j);
        sum += w * std::norm(field.values[i] - field.values[j]) / std::pow(dx * dx, expo);
      }
    }
  } else {
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1) {
        std::size_t a = static_cast<std::size_t>(i0) * N + i1;
        double w = cutoff.rho_at(std::hypot(g.coord(i0), g.coord(i1)));
        if (w == 0.0) continue;
        for (int j0 = 0; j0 < N; ++j0)
          for (int j1 = 0; j1 < N; ++j1) {
            if (i0 == j0 && i1 == j1) continue;
            std::size_t b = static_cast<std::size_t>(j0) * N + j1;
            double dx = g.coord(i0) - g.coord(j0);
            double dy = g.coord(i1) - g.coord(j1);
            sum += w * std::norm(field.values[a] - field.values[b]) /
                   std::pow(dx * dx + dy * dy, expo);
          }
      }
  }
  return sum * g.cell() * g.cell();
}

double cutoff_constant_probe(const GridPtr& grid, const CutoffSpec& cutoff) {
  if (grid->dim() != 1) throw std::invalid_argument("cutoff probe: 1-d grids only");
  const Grid& g = *grid;
  const int N = g.points();
  const double expo = (1.0 + 2.0 * g.alpha()) / 2.0;
  double sup = 0.0;
  for (int j = 0; j < N; ++j) {
    double ry = cutoff.rho_at(std::abs(g.coord(j)));
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      if (i == j) continue;
      double d = g.coord(i) - g.coord(j);
      double diff = cutoff.rho_at(std::abs(g.coord(i))) - ry;
      s += diff * diff / std::pow(d * d, expo);
    }
    s *= g.cell();
    if (s > sup) sup = s;
  }
  return sup * std::pow(cutoff.k, 2.0 * g.alpha());
}

double cutoff_symbol_probe(const GridPtr& grid, const CutoffSpec& cutoff) {
  const Grid& g = *grid;
  Field rho_field(grid);
  for (std::size_t i = 0; i < rho_field.values.size(); ++i)
    rho_field.values[i] = cutoff.rho_at(radius_at(g, i));
  Field lap = frac_laplacian(rho_field, g.alpha());
  double sup = 0.0;
  for (const auto& v : lap.values) sup = std::max(sup, std::abs(v));
  return sup * std::pow(cutoff.k, 2.0 * g.alpha());
}

double strichartz_ratio_probe(const std::vector<double>& widths, const AdmissiblePair& pair,
                              const GridPtr& grid, double t_window, int nt,
                              const ModelParams& params) {
  const Grid& g = *grid;
  double best = 0.0;
  for (double w : widths) {
    Field psi(grid);
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      double r = radius_at(g, i);
      psi.values[i] = std::exp(-r * r / (2.0 * w * w));
    }
    double l2 = std::sqrt(mass(psi));
    double dtq = t_window / nt;
    double acc = 0.0, maxq = 0.0;
    for (int m = 0; m <= nt; ++m) {
      Field ut = free_propagator(psi, m * dtq, params);
      double s = 0.0;
      for (const auto& v : ut.values) s += std::pow(std::norm(v), pair.q / 2.0);
      double lq = std::pow(s * g.cell(), 1.0 / pair.q);
      maxq = std::max(maxq, lq);
      double wgt = (m == 0 || m == nt) ? 0.5 : 1.0;
      acc += wgt * std::pow(lq, pair.p) * dtq;
    }
    double spacetime = pair.p > 1e6 ? maxq : std::pow(acc, 1.0 / pair.p);
    best = std::max(best, spacetime / l2);
  }
  return best;
}

void write_csv(const DiagnosticsRecord& r, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("write_csv: cannot open " + filename);
  out << std::setprecision(17);
  out << "time,mass,energy,h_alpha_sq";
  if (!r.hhalf_sq.empty()) out << ",hhalf_sq";
  if (!r.gn_ratio.empty()) out << ",gn_ratio";
  out << ",int_im_f_u,int_mass,int_kinetic2,int_potential,int_f_energy,int_dw";
  for (const auto& [k, _] : r.tail_l2) out << ",tail_l2_k" << k;
  out << "\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << r.times[i] << ',' << r.mass[i] << ',' << r.energy[i] << ',' << r.h_alpha_sq[i];
    if (!r.hhalf_sq.empty()) out << ',' << r.hhalf_sq[i];
    if (!r.gn_ratio.empty()) out << ',' << r.gn_ratio[i];
    out << ',' << r.int_im_f_u[i] << ',' << r.int_mass[i] << ',' << r.int_kinetic2[i] << ','
        << r.int_potential[i] << ',' << r.int_f_energy[i] << ',' << r.int_dw[i];
    for (const auto& [k, series] : r.tail_l2) out << ',' << series[i];
    out << "\n";
  }
}

}  // namespace sfnls
