#include "sfnls/noise.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sfnls {

namespace rng {
namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
  std::uint64_t h = mix64(seed ^ mix64(stream ^ mix64(ctr)));
  // strictly inside (0, 1)
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t zigzag(std::int64_t i) {
  return (static_cast<std::uint64_t>(i) << 1) ^ static_cast<std::uint64_t>(i >> 63);
}

}  // namespace

double normal(std::uint64_t seed, std::uint64_t stream, std::int64_t index) {
  std::uint64_t c = zigzag(index);
  double u1 = uniform01(seed, stream, 2 * c);
  double u2 = uniform01(seed, stream, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng

namespace {

constexpr std::uint64_t kStreamW = 0;
constexpr std::uint64_t kStreamOU = 1;
constexpr double kOuHorizon = 36.0;  // e^{-2*36} is below double precision

struct OuCoeffs {
  double q;   // e^{-dt}
  double cm;  // conditional mean factor of the OU integral given dW
  double cs;  // conditional standard deviation
};

OuCoeffs ou_coeffs(double dt) {
  OuCoeffs c;
  c.q = std::exp(-dt);
  double var = (1.0 - std::exp(-2.0 * dt)) / 2.0;
  double cov = 1.0 - c.q;  // Cov(dW, int e^{-(t-s)} dW)
  c.cm = cov / dt;
  double resid = var - cov * cov / dt;
  c.cs = resid > 0.0 ? std::sqrt(resid) : 0.0;
  return c;
}

double w_increment(std::uint64_t seed, double dt, std::int64_t index) {
  return std::sqrt(dt) * rng::normal(seed, kStreamW, index);
}

double ou_step(std::uint64_t seed, double dt, const OuCoeffs& c, std::int64_t index) {
  return c.cm * w_increment(seed, dt, index) + c.cs * rng::normal(seed, kStreamOU, index);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// z at absolute index i is the Horner sum of per-step OU integrals over a
// fixed trailing window anchored at block boundaries, so the value is a pure
// function of (seed, dt, i): shared path windows reproduce bit-identically.
class OuEvaluator {
 public:
  OuEvaluator(std::uint64_t seed, double dt)
      : seed_(seed), dt_(dt), c_(ou_coeffs(dt)),
        block_(static_cast<std::int64_t>(std::ceil(kOuHorizon / dt))) {}

  double at(std::int64_t i) {
    std::int64_t b = floor_div(i, block_);
    if (!valid_ || b != cur_block_ || i < cur_index_) {
      restart(b, i);
    } else {
      while (cur_index_ < i) advance();
    }
    return z_;
  }

 private:
  void restart(std::int64_t b, std::int64_t i) {
    cur_block_ = b;
    std::int64_t start = (b - 2) * block_;
    z_ = 0.0;
    for (std::int64_t j = start; j < i; ++j) z_ = z_ * c_.q + ou_step(seed_, dt_, c_, j);
    cur_index_ = i;
    valid_ = true;
  }

  void advance() {
    std::int64_t next = cur_index_ + 1;
    if (floor_div(next, block_) != cur_block_) {
      restart(floor_div(next, block_), next);
    } else {
      z_ = z_ * c_.q + ou_step(seed_, dt_, c_, cur_index_);
      cur_index_ = next;
    }
  }

  std::uint64_t seed_;
  double dt_;
  OuCoeffs c_;
  std::int64_t block_;
  std::int64_t cur_block_ = 0, cur_index_ = 0;
  double z_ = 0.0;
  bool valid_ = false;
};

NoisePath build_path(std::uint64_t seed, double dt, std::int64_t base, std::int64_t steps) {
  NoisePath p;
  p.seed = seed;
  p.dt = dt;
  p.steps = steps;
  p.base_index = base;
  p.w_increments.resize(steps);
  for (std::int64_t k = 0; k < steps; ++k)
    p.w_increments[k] = w_increment(seed, dt, base + k);
  p.z_samples.resize(steps + 1);
  OuEvaluator ou(seed, dt);
  for (std::int64_t k = 0; k <= steps; ++k) p.z_samples[k] = ou.at(base + k);
  return p;
}

}  // namespace

NoisePath sample_path(std::uint64_t seed, double t0, double dt, std::int64_t steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_path: dt must be positive");
  if (steps < 1) throw std::invalid_argument("sample_path: steps must be >= 1");
  std::int64_t base = std::llround(t0 / dt);
  if (std::abs(base * dt - t0) > 1e-9 * std::max(1.0, std::abs(t0)))
    throw std::invalid_argument("sample_path: t0 must be a multiple of dt");
  return build_path(seed, dt, base, steps);
}

NoisePath shift_path(const NoisePath& path, std::int64_t m_steps) {
  if (m_steps < 0 || m_steps > path.steps)
    throw std::out_of_range("shift_path: shift outside path window");
  NoisePath p;
  p.seed = path.seed;
  p.dt = path.dt;
  p.steps = path.steps - m_steps;
  p.base_index = path.base_index + m_steps;
  p.w_increments.assign(path.w_increments.begin() + m_steps, path.w_increments.end());
  p.z_samples.assign(path.z_samples.begin() + m_steps, path.z_samples.end());
  return p;
}

NoisePath extend_path_backward(const NoisePath& path, std::int64_t extra_steps) {
  if (extra_steps < 0) throw std::invalid_argument("extend_path_backward: negative extension");
  if (extra_steps == 0) return path;
  return build_path(path.seed, path.dt, path.base_index - extra_steps,
                    path.steps + extra_steps);
}

NoisePath coarsen_path(const NoisePath& path) {
  if (path.steps % 2 != 0 || path.base_index % 2 != 0)
    throw std::invalid_argument("coarsen_path: steps and base_index must be even");
  NoisePath p;
  p.seed = path.seed;
  p.dt = 2.0 * path.dt;
  p.steps = path.steps / 2;
  p.base_index = path.base_index / 2;
  p.w_increments.resize(p.steps);
  for (std::int64_t k = 0; k < p.steps; ++k)
    p.w_increments[k] = path.w_increments[2 * k] + path.w_increments[2 * k + 1];
  p.z_samples.resize(p.steps + 1);
  for (std::int64_t k = 0; k <= p.steps; ++k) p.z_samples[k] = path.z_samples[2 * k];
  return p;
}

void save_path(const NoisePath& path, const std::string& filename) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw std::runtime_error("save_path: cannot open " + filename);
  const char magic[8] = {'S', 'F', 'N', 'L', 'S', 'W', 'P', '1'};
  out.write(magic, 8);
  auto put64 = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 8);
  };
  auto putf = [&](double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put64(v);
  };
  put64(path.seed);
  put64(static_cast<std::uint64_t>(path.base_index));
  putf(path.dt);
  put64(static_cast<std::uint64_t>(path.steps));
  for (double w : path.w_increments) putf(w);
  for (double z : path.z_samples) putf(z);
}

NoisePath load_path(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw std::runtime_error("load_path: cannot open " + filename);
  char magic[8];
  in.read(magic, 8);
  if (std::string(magic, 8) != "SFNLSWP1") throw std::runtime_error("load_path: bad magic");
  auto get64 = [&]() {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  };
  auto getf = [&]() {
    std::uint64_t v = get64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  };
  NoisePath p;
  p.seed = get64();
  p.base_index = static_cast<std::int64_t>(get64());
  p.dt = getf();
  p.steps = static_cast<std::int64_t>(get64());
  p.w_increments.resize(p.steps);
  for (auto& w : p.w_increments) w = getf();
  p.z_samples.resize(p.steps + 1);
  for (auto& z : p.z_samples) z = getf();
  if (!in) throw std::runtime_error("load_path: truncated file");
  return p;
}

}  // namespace sfnls
