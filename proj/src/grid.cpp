#include "sfnls/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sfnls {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, double extent, int points, double alpha)
    : dim_(dim), extent_(extent), points_(points), alpha_(alpha) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (extent <= 0.0) throw std::invalid_argument("grid: extent must be positive");
  if (points < 8 || !is_pow2(points))
    throw std::invalid_argument("grid: points must be a power of two >= 8");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("grid: alpha must lie in (0, 1]");

  const int N = points;
  values_size_ = 1;
  for (int d = 0; d < dim; ++d) values_size_ *= static_cast<std::size_t>(N);
  const double h = extent / N;
  cell_ = std::pow(h, dim);
  volume_ = std::pow(extent, dim);

  coords_.resize(N);
  freqs_.resize(N);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < N; ++j) {
    coords_[j] = -extent / 2.0 + j * h;
    // wrap to (-N/2, N/2], Nyquist at +N/2
    int w = (j <= N / 2) ? j : j - N;
    freqs_[j] = two_pi * w / extent;
  }

  xi_sq_.resize(values_size_);
  symbol_.resize(values_size_);
  if (dim == 1) {
    for (int j = 0; j < N; ++j) {
      double r2 = freqs_[j] * freqs_[j];
      xi_sq_[j] = r2;
      symbol_[j] = r2 > 0.0 ? std::pow(r2, alpha) : 0.0;
    }
  } else {
    for (int j0 = 0; j0 < N; ++j0) {
      for (int j1 = 0; j1 < N; ++j1) {
        double r2 = freqs_[j0] * freqs_[j0] + freqs_[j1] * freqs_[j1];
        std::size_t idx = static_cast<std::size_t>(j0) * N + j1;
        xi_sq_[idx] = r2;
        symbol_[idx] = r2 > 0.0 ? std::pow(r2, alpha) : 0.0;
      }
    }
  }

  std::vector<cplx> a(values_size_), b(values_size_);
  auto* ap = reinterpret_cast<fftw_complex*>(a.data());
  auto* bp = reinterpret_cast<fftw_complex*>(b.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (dim == 1) {
    plan_fwd_ = fftw_plan_dft_1d(N, ap, bp, FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_1d(N, ap, bp, FFTW_BACKWARD, flags);
  } else {
    plan_fwd_ = fftw_plan_dft_2d(N, N, ap, bp, FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_2d(N, N, ap, bp, FFTW_BACKWARD, flags);
  }
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

std::vector<cplx> Grid::forward(const std::vector<cplx>& u) const {
  if (u.size() != values_size_) throw std::invalid_argument("forward: size mismatch");
  std::vector<cplx> out(values_size_);
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(u.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<cplx> Grid::inverse(const std::vector<cplx>& spec) const {
  if (spec.size() != values_size_) throw std::invalid_argument("inverse: size mismatch");
  std::vector<cplx> out(values_size_);
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(spec.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double inv = 1.0 / static_cast<double>(values_size_);
  for (auto& v : out) v *= inv;
  return out;
}

GridPtr make_grid(int dim, double extent, int points, double alpha) {
  return std::make_shared<const Grid>(dim, extent, points, alpha);
}

double frac_laplacian_constant(int dim, double alpha) {
  const double pi = std::numbers::pi;
  return alpha * std::pow(4.0, alpha) * std::tgamma((dim + 2.0 * alpha) / 2.0) /
         (std::pow(pi, dim / 2.0) * std::tgamma(1.0 - alpha));
}

Field frac_laplacian(const Field& field, double beta_exp) {
  if (!field.grid) throw std::invalid_argument("frac_laplacian: null grid");
  const Grid& g = *field.grid;
  auto spec = g.forward(field.values);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double r2 = g.xi_sq(i);
    spec[i] *= r2 > 0.0 ? std::pow(r2, beta_exp) : 0.0;
  }
  return Field{field.grid, g.inverse(spec)};
}

NormReport norms(const Field& field, const std::vector<double>& lp_exponents) {
  const Grid& g = *field.grid;
  NormReport r;
  for (const auto& v : field.values) r.l2_sq += std::norm(v);
  r.l2_sq *= g.cell();

  auto spec = g.forward(field.values);
  double hdot = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) hdot += g.symbol(i) * std::norm(spec[i]);
  r.hdot_alpha_sq = hdot * g.cell() / static_cast<double>(g.size());

  const double c = frac_laplacian_constant(g.dim(), g.alpha());
  r.h_alpha_sq = r.l2_sq + 2.0 * r.hdot_alpha_sq / c;

  for (double p : lp_exponents) {
    double s = 0.0;
    for (const auto& v : field.values) s += std::pow(std::abs(v), p);
    r.lp[p] = s * g.cell();
  }
  return r;
}

double gagliardo_seminorm_oracle(const Field& field) {
  // On the torus the seminorm kernel is the periodization of |x-y|^{-(n+2a)}:
  // the algebraic tails make the periodic images a percent-level contribution,
  // so the double sum includes them out to a fixed window.
  const Grid& g = *field.grid;
  if (g.size() > 262144) throw std::invalid_argument("gagliardo oracle: grid too large");
  const int N = g.points();
  const double L = g.extent();
  const double expo = (g.dim() + 2.0 * g.alpha()) / 2.0;  // applied to |x-y|^2
  double sum = 0.0;
  if (g.dim() == 1) {
    const int images = 16;
    std::vector<double> kernel(N, 0.0);  // periodized kernel vs index offset
    for (int d = 0; d < N; ++d) {
      double dx = g.coord(d) - g.coord(0);
      for (int m = -images; m <= images; ++m) {
        double s = dx + m * L;
        if (d == 0 && m == 0) continue;  // diagonal excluded
        kernel[d] += 1.0 / std::pow(s * s, expo);
      }
    }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        sum += std::norm(field.values[i] - field.values[j]) * kernel[(i - j + N) % N];
      }
  } else {
    const int images = 2;
    const auto& v = field.values;
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1) {
        std::size_t a = static_cast<std::size_t>(i0) * N + i1;
        for (int j0 = 0; j0 < N; ++j0)
          for (int j1 = 0; j1 < N; ++j1) {
            if (i0 == j0 && i1 == j1) continue;
            std::size_t b = static_cast<std::size_t>(j0) * N + j1;
            double dx = g.coord(i0) - g.coord(j0);
            double dy = g.coord(i1) - g.coord(j1);
            double k = 0.0;
            for (int mx = -images; mx <= images; ++mx)
              for (int my = -images; my <= images; ++my) {
                double sx = dx + mx * L, sy = dy + my * L;
                k += 1.0 / std::pow(sx * sx + sy * sy, expo);
              }
            sum += std::norm(v[a] - v[b]) * k;
          }
      }
  }
  return sum * g.cell() * g.cell();
}

Field operator+(const Field& a, const Field& b) {
  Field out{a.grid, a.values};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  Field out{a.grid, a.values};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

Field operator*(cplx c, const Field& a) {
  Field out{a.grid, a.values};
  for (auto& v : out.values) v *= c;
  return out;
}

}  // namespace sfnls
