#include "sfnls/ground_state.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace sfnls {

namespace {

// Average under x -> -x (n = 1) resp. the dihedral group of the square
// (n = 2); keeps the iterate in the radial/even class and real.
void symmetrize(Field& u) {
  const Grid& g = *u.grid;
  const int N = g.points();
  auto& v = u.values;
  if (g.dim() == 1) {
    for (int j = 1; j < N / 2; ++j) {
      double avg = 0.5 * (v[j].real() + v[N - j].real());
      v[j] = avg;
      v[N - j] = avg;
    }
    v[0] = v[0].real();
    v[N / 2] = v[N / 2].real();
  } else {
    auto at = [&](int a, int b) -> cplx& {
      return v[static_cast<std::size_t>(((a % N) + N) % N) * N + (((b % N) + N) % N)];
    };
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) {
        double s = (at(a, b).real() + at(-a, b).real() + at(a, -b).real() +
                    at(-a, -b).real() + at(b, a).real() + at(-b, a).real() +
                    at(b, -a).real() + at(-b, -a).real()) /
                   8.0;
        at(a, b) = s;
        at(-a, b) = s;
        at(a, -b) = s;
        at(-a, -b) = s;
        at(b, a) = s;
        at(-b, a) = s;
        at(b, -a) = s;
        at(-b, -a) = s;
      }
  }
}

Field gaussian_unit_mass(const GridPtr& grid) {
  Field u(grid);
  const Grid& g = *grid;
  const int N = g.points();
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    double r2;
    if (g.dim() == 1) {
      double x = g.coord(static_cast<int>(i));
      r2 = x * x;
    } else {
      double x = g.coord(static_cast<int>(i / N));
      double y = g.coord(static_cast<int>(i % N));
      r2 = x * x + y * y;
    }
    u.values[i] = std::exp(-r2 / 2.0);
  }
  double m = 0.0;
  for (const auto& v : u.values) m += std::norm(v);
  m *= g.cell();
  double scale = 1.0 / std::sqrt(m);
  for (auto& v : u.values) v *= scale;
  return u;
}

}  // namespace

GroundState solve_ground_state(const GridPtr& grid, const ModelParams& params,
                               const std::optional<Field>& init, int max_iter,
                               double tol) {
  if (!(params.sigma > 0.0)) throw std::invalid_argument("ground state: sigma > 0 required");
  const Grid& g = *grid;
  const double s = params.sigma;
  const double nu = (2.0 * s + 1.0) / (2.0 * s);

  Field R = init ? *init : gaussian_unit_mass(grid);
  if (R.values.size() != g.size())
    throw std::invalid_argument("ground state: init does not match grid");

  GroundState out;
  double quotient = 0.0;
  for (int m = 0; m < max_iter; ++m) {
    symmetrize(R);
    Field nonlin(grid);
    for (std::size_t i = 0; i < R.values.size(); ++i) {
      double x = R.values[i].real();
      nonlin.values[i] = std::pow(std::abs(x), 2.0 * s) * x;
    }
    auto spec_r = g.forward(R.values);
    auto spec_n = g.forward(nonlin.values);
    double num = 0.0, den = 0.0, res = 0.0, l2s = 0.0;
    for (std::size_t i = 0; i < spec_r.size(); ++i) {
      double lin = g.symbol(i) + 1.0;
      num += lin * std::norm(spec_r[i]);
      den += std::real(std::conj(spec_n[i]) * spec_r[i]);
      res += std::norm(lin * spec_r[i] - spec_n[i]);
      l2s += std::norm(spec_r[i]);
    }
    if (!(den > 0.0)) throw std::runtime_error("ground state: degenerate quotient");
    quotient = num / den;
    out.quotient_history.push_back(quotient);
    if (quotient < 1e-6 || quotient > 1e6)
      throw std::runtime_error("ground state: Petviashvili quotient diverged");
    // relative residual of the current iterate (Parseval); the quotient
    // alone is quadratically insensitive to the profile error and would
    // stop far too early
    double res_rel = std::sqrt(res / l2s);
    if (res_rel < tol) {
      out.converged = true;
      out.iterations = m;
      break;
    }
    const double gain = std::pow(quotient, nu);
    for (std::size_t i = 0; i < spec_n.size(); ++i)
      spec_n[i] *= gain / (g.symbol(i) + 1.0);
    R.values = g.inverse(spec_n);
    out.iterations = m + 1;
  }
  symmetrize(R);

  // self-certifying residual: ||(-Delta)^a R + R - R^{2s+1}|| / ||R||
  auto spec_r = g.forward(R.values);
  for (std::size_t i = 0; i < spec_r.size(); ++i) spec_r[i] *= g.symbol(i) + 1.0;
  auto lin = g.inverse(spec_r);
  double res = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < R.values.size(); ++i) {
    double x = R.values[i].real();
    res += std::norm(lin[i] - std::pow(std::abs(x), 2.0 * s) * x);
    l2 += x * x;
  }
  out.residual_l2 = std::sqrt(res / l2);
  out.c_opt = (s + 1.0) / std::pow(l2 * g.cell(), s);
  out.profile = std::move(R);
  return out;
}

double mass_critical_threshold(const GroundState& ground, const ModelParams& params) {
  if (std::abs(params.sigma * params.dim - 2.0 * params.alpha) > 1e-12)
    throw std::domain_error("mass_critical_threshold: requires sigma * n = 2 * alpha");
  if (!ground.converged)
    throw std::domain_error("mass_critical_threshold: ground state not converged");
  double m = 0.0;
  for (const auto& v : ground.profile.values) m += std::norm(v);
  return m * ground.profile.grid->cell();
}

namespace {
constexpr char kMagic[8] = {'S', 'F', 'G', 'S', 'T', 'A', 'T', '1'};
}

void save_ground_state(const GroundState& gs, const ModelParams& params,
                       const std::string& filename) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw std::runtime_error("ground state cache: cannot open " + filename);
  const Grid& g = *gs.profile.grid;
  out.write(kMagic, 8);
  std::int32_t dim = g.dim(), points = g.points(), iters = gs.iterations,
               conv = gs.converged ? 1 : 0;
  double alpha = g.alpha(), sigma = params.sigma, extent = g.extent();
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&points), 4);
  out.write(reinterpret_cast<const char*>(&alpha), 8);
  out.write(reinterpret_cast<const char*>(&sigma), 8);
  out.write(reinterpret_cast<const char*>(&extent), 8);
  out.write(reinterpret_cast<const char*>(&gs.residual_l2), 8);
  out.write(reinterpret_cast<const char*>(&gs.c_opt), 8);
  out.write(reinterpret_cast<const char*>(&iters), 4);
  out.write(reinterpret_cast<const char*>(&conv), 4);
  out.write(reinterpret_cast<const char*>(gs.profile.values.data()),
            static_cast<std::streamsize>(gs.profile.values.size() * sizeof(cplx)));
}

std::optional<GroundState> load_ground_state(const GridPtr& grid, const ModelParams& params,
                                             const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != std::string(kMagic, 8)) return std::nullopt;
  std::int32_t dim, points, iters, conv;
  double alpha, sigma, extent, residual, c_opt;
  in.read(reinterpret_cast<char*>(&dim), 4);
  in.read(reinterpret_cast<char*>(&points), 4);
  in.read(reinterpret_cast<char*>(&alpha), 8);
  in.read(reinterpret_cast<char*>(&sigma), 8);
  in.read(reinterpret_cast<char*>(&extent), 8);
  in.read(reinterpret_cast<char*>(&residual), 8);
  in.read(reinterpret_cast<char*>(&c_opt), 8);
  in.read(reinterpret_cast<char*>(&iters), 4);
  in.read(reinterpret_cast<char*>(&conv), 4);
  if (!in) return std::nullopt;
  if (dim != grid->dim() || points != grid->points() || alpha != grid->alpha() ||
      sigma != params.sigma || extent != grid->extent())
    return std::nullopt;  // keyed by (n, alpha, sigma, L, N)
  GroundState gs;
  gs.profile = Field(grid);
  in.read(reinterpret_cast<char*>(gs.profile.values.data()),
          static_cast<std::streamsize>(gs.profile.values.size() * sizeof(cplx)));
  if (!in) return std::nullopt;
  gs.residual_l2 = residual;
  gs.c_opt = c_opt;
  gs.iterations = iters;
  gs.converged = conv != 0;
  return gs;
}

}  // namespace sfnls
