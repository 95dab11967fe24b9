#pragma once

#include <complex>
#include <map>
#include <memory>
#include <vector>

// Periodic-torus spectral discretization: frequency tables, FFT contract,
// fractional Laplacian multiplier and norm computations.

namespace sfnls {

using cplx = std::complex<double>;

/// Periodic torus [-L/2, L/2)^n with N points per axis and fractional
/// exponent alpha. Frequencies are 2*pi*wrap(j)/L with the Nyquist mode
/// assigned to +N/2 so that |xi| symbols stay real and unambiguous.
/// Read-only after construction; safe to share across threads.
class Grid {
 public:
  Grid(int dim, double extent, int points, double alpha);
  ~Grid();

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int dim() const { return dim_; }
  double extent() const { return extent_; }
  int points() const { return points_; }
  double alpha() const { return alpha_; }

  /// Total number of grid points N^n.
  std::size_t size() const { return values_size_; }
  /// Quadrature weight (L/N)^n.
  double cell() const { return cell_; }
  double volume() const { return volume_; }

  /// Physical coordinate of index j along one axis, in [-L/2, L/2).
  double coord(int j) const { return coords_[j]; }
  /// Angular frequency of mode j along one axis.
  double freq(int j) const { return freqs_[j]; }
  /// |xi|^2 at flattened spectral index.
  double xi_sq(std::size_t idx) const { return xi_sq_[idx]; }
  /// Fractional symbol |xi|^(2 alpha) at flattened spectral index.
  double symbol(std::size_t idx) const { return symbol_[idx]; }

  /// Unnormalized forward DFT (e^{-i xi x} convention).
  std::vector<cplx> forward(const std::vector<cplx>& u) const;
  /// Inverse DFT, normalized by 1/N^n; forward-then-inverse is identity.
  std::vector<cplx> inverse(const std::vector<cplx>& spec) const;

 private:
  int dim_;
  double extent_;
  int points_;
  double alpha_;
  std::size_t values_size_;
  double cell_, volume_;
  std::vector<double> coords_, freqs_;
  std::vector<double> xi_sq_, symbol_;
  void* plan_fwd_;
  void* plan_bwd_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a grid, rejecting non-power-of-two point counts and
/// alpha outside (0, 1]. alpha = 1 is the documented local-limit hook
/// used only by ground-state sanity checks.
GridPtr make_grid(int dim, double extent, int points, double alpha);

/// Complex-valued state on a grid (physical space).
struct Field {
  GridPtr grid;
  std::vector<cplx> values;

  Field() = default;
  Field(GridPtr g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {}
  explicit Field(GridPtr g) : grid(std::move(g)), values(grid ? grid->size() : 0, cplx{}) {}
};

struct NormReport {
  double l2_sq = 0.0;
  double hdot_alpha_sq = 0.0;  // ||(-Delta)^{alpha/2} u||_{L^2}^2, spectral
  double h_alpha_sq = 0.0;     // l2_sq + Gagliardo-normalized seminorm
  std::map<double, double> lp; // ||u||_{L^p}^p for requested exponents
};

/// Normalization constant of the pointwise fractional Laplacian,
/// C(n,alpha) = alpha 4^alpha Gamma((n+2 alpha)/2) / (pi^{n/2} Gamma(1-alpha)).
double frac_laplacian_constant(int dim, double alpha);

/// Spectral fractional power: Fourier coefficients multiplied by
/// |xi|^{2 beta_exp}. Annihilates the mean mode.
Field frac_laplacian(const Field& field, double beta_exp);

/// L^2, homogeneous and full H^alpha norms plus requested L^p norms.
NormReport norms(const Field& field, const std::vector<double>& lp_exponents = {});

/// Direct double-sum quadrature of the Gagliardo seminorm
/// integral of |u(x)-u(y)|^2 / |x-y|^{n+2 alpha}, diagonal excluded.
/// O(N^{2n}); rejects grids with more than 262144 points.
double gagliardo_seminorm_oracle(const Field& field);

// small helpers shared across modules
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx c, const Field& a);

}  // namespace sfnls
