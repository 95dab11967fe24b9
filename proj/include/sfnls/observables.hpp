#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfnls/dynamics.hpp"
#include "sfnls/grid.hpp"
#include "sfnls/model.hpp"

// Functionals of the state and the identity residuals they enter:
// mass, energy, Gagliardo-Nirenberg ratio, cutoff tails, Strichartz probe.

namespace sfnls {

/// M[u] = ||u||_{L^2}^2.
double mass(const Field& field);

/// H[u] = 1/2 ||(-Delta)^{alpha/2} u||^2 - 1/(2 sigma + 2) ||u||_{2s+2}^{2s+2}.
double energy(const Field& field, const ModelParams& params);

/// Time series of functionals plus the running integrals entering the mass
/// and energy balance identities.
struct DiagnosticsRecord {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> h_alpha_sq;
  std::vector<double> hhalf_sq;  // ||(-Delta)^{alpha/2+1/4} v||^2 (Lemma-7 diagnostic)
  std::vector<double> gn_ratio;
  std::map<double, std::vector<double>> tail_l2;
  std::map<double, std::vector<double>> tail_hdot;

  // cumulative identity integrals at the recorded times
  std::vector<double> int_im_f_u;      // int 2 Im (f, u) ds
  std::vector<double> int_mass;        // int M(u) ds
  std::vector<double> int_kinetic2;    // int Re int (-Delta)^alpha ubar u dx ds
  std::vector<double> int_potential;   // int int |u|^{2s+2} dx ds
  std::vector<double> int_f_energy;    // int Im int [(-Delta)^a ubar - |u|^{2s} ubar] f dx ds
  std::vector<double> int_dw;          // int Im int (-Delta)^a ubar u dx dW (midpoint)

  bool diverged = false;
};

/// Observer that fills a DiagnosticsRecord while evolve() runs: attach
/// record() at the observation stride. Identity integrals are accumulated
/// over the observation grid, so their quadrature step is stride * dt: the
/// residuals diagnose the recorded time series itself, the way a consumer of
/// the CSV output would recompute them. Smooth phase-invariant integrands use
/// the trapezoid rule; the noise-coupled forcing-work and dW integrals use
/// the left-point rule of the stochastic integral.
class DiagnosticsCollector {
 public:
  DiagnosticsCollector(ModelParams params, ForcingSpec forcing, const NoisePath& path,
                       double c_opt = 0.0, std::vector<double> tail_radii = {},
                       bool track_hhalf = false);

  Observer record();
  const DiagnosticsRecord& result() const { return record_; }

 private:
  struct Integrands {
    double im_f_u = 0.0, mass = 0.0, kinetic2 = 0.0, potential = 0.0,
           f_energy = 0.0, dw_integrand = 0.0;
  };
  Integrands integrands(const TrajectoryState& st) const;
  void snapshot(const TrajectoryState& st);

  ModelParams params_;
  ForcingSpec forcing_;
  const NoisePath* path_;
  double c_opt_;
  std::vector<double> tail_radii_;
  bool track_hhalf_;

  bool have_prev_ = false;
  Integrands prev_;
  double prev_time_ = 0.0;
  std::int64_t prev_cursor_ = 0;
  double acc_mass_ = 0.0, acc_kin2_ = 0.0, acc_pot_ = 0.0,
         acc_f_energy_ = 0.0, acc_dw_ = 0.0;
  DiagnosticsRecord record_;
};

/// Residual r(t) = M(t) - M(0) - int 2 Im (f,u) + 2 gamma int M.
std::vector<double> mass_identity_residual(const DiagnosticsRecord& record, double gamma);

/// Residual of the energy balance (all right-hand-side integrals moved over).
std::vector<double> energy_identity_residual(const DiagnosticsRecord& record, double gamma);

/// LHS/RHS of the Gagliardo-Nirenberg inequality with constant c_opt.
/// Throws on the zero field.
double gn_ratio(const Field& field, const ModelParams& params, double c_opt);

/// Smooth radial cutoff rho(|x|/k): 0 inside radius k/2, 1 outside radius k,
/// quintic smoothstep in between. |rho'| <= c0 = 3.75.
struct CutoffSpec {
  double k = 1.0;
  static constexpr double c0 = 3.75;
  double rho(double s) const;          // s = |x| / k
  double rho_at(double abs_x) const { return rho(abs_x / k); }
};

/// Mass outside radius ~k: int rho(|x|/k) |v|^2 dx. Requires k < L/2.
double tail_mass(const Field& field, const CutoffSpec& cutoff);

/// Gagliardo tail: double sum of rho(|x|/k) |v(x)-v(y)|^2 / |x-y|^{n+2a},
/// x the cutoff variable; same cost guard as the seminorm oracle.
double tail_hdot(const Field& field, const CutoffSpec& cutoff);

/// sup over y of k^{2 alpha} * int |rho(|x|/k)-rho(|y|/k)|^2 / |x-y|^{n+2a} dx
/// (1-d grids only). Bounded uniformly in k when the cutoff bound holds.
double cutoff_constant_probe(const GridPtr& grid, const CutoffSpec& cutoff);

/// sup_x k^{2 alpha} |(-Delta)^alpha rho_k(x)| via the spectral multiplier.
double cutoff_symbol_probe(const GridPtr& grid, const CutoffSpec& cutoff);

/// Max over a family of Gaussians of widths `widths` of
/// ||S(t) psi||_{L^p([0,T], L^q)} / ||psi||_{L^2} (tensor quadrature,
/// nt time samples). Reported, never asserted against an unknown constant.
double strichartz_ratio_probe(const std::vector<double>& widths, const AdmissiblePair& pair,
                              const GridPtr& grid, double t_window, int nt,
                              const ModelParams& params);

// --- serialization ---

/// CSV, one row per observation time; column order documented in the header line.
void write_csv(const DiagnosticsRecord& record, const std::string& filename);

}  // namespace sfnls
