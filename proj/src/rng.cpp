#include "penlmc/rng.hpp"

#include <cmath>

namespace penlmc {

namespace philox {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round(std::array<std::uint32_t, 4>& x, std::uint32_t k0,
                  std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> block(std::uint64_t key,
                                   const std::array<std::uint32_t, 4>& ctr) {
  std::array<std::uint32_t, 4> x = ctr;
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int r = 0; r < 10; ++r) {
    round(x, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return x;
}

}  // namespace philox

namespace {

inline double u64_to_unit(std::uint64_t v) {
  // 53 significant bits -> [0, 1)
  return static_cast<double>(v >> 11) * 0x1.0p-53;
}

inline double u64_to_open_unit(std::uint64_t v) {
  // (0, 1]; safe under log()
  return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint32_t chain_id,
                           StreamPurpose purpose)
    : key_(seed), chain_(chain_id),
      purpose_(static_cast<std::uint32_t>(purpose)) {}

std::array<std::uint32_t, 4> RandomStream::counter() const {
  return {chain_, step_, draw_, purpose_};
}

void RandomStream::seek(std::uint32_t step) {
  step_ = step;
  draw_ = 0;
  have_spare_ = false;
}

double RandomStream::uniform() {
  const auto b = philox::block(key_, counter());
  ++draw_;
  const std::uint64_t v =
      (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  return u64_to_unit(v);
}

double RandomStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const auto b = philox::block(key_, counter());
  ++draw_;
  const std::uint64_t v0 =
      (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  const std::uint64_t v1 =
      (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
  const double u1 = u64_to_open_unit(v0);
  const double u2 = u64_to_unit(v1);
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = rad * std::sin(ang);
  have_spare_ = true;
  return rad * std::cos(ang);
}

Eigen::VectorXd RandomStream::normal_vector(Eigen::Index p) {
  Eigen::VectorXd z(p);
  for (Eigen::Index i = 0; i < p; ++i) z[i] = normal();
  return z;
}

// ---------------------------------------------------------------------------
// FastRng: xoshiro256++ with a 256-layer ziggurat.
// ---------------------------------------------------------------------------

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr int kZigLayers = 256;
constexpr double kZigR = 3.6541528853610088;
constexpr double kZigV = 0.00492867323399257;  // area of each layer

struct ZigTables {
  // x[i] is the right edge of rectangle layer i (i = 1..255, decreasing);
  // x[0] is the effective width of the base layer, x[256] = 0.
  double x[kZigLayers + 1];
  double f[kZigLayers + 1];  // exp(-x^2/2) at the edges

  ZigTables() {
    x[1] = kZigR;
    f[1] = std::exp(-0.5 * kZigR * kZigR);
    x[0] = kZigV / f[1];  // base layer: rectangle [0, R] of height f(R) + tail
    f[0] = 1.0;
    for (int i = 2; i <= kZigLayers - 1; ++i) {
      const double arg = std::min(kZigV / x[i - 1] + f[i - 1], 1.0);
      x[i] = std::sqrt(-2.0 * std::log(arg));
      f[i] = std::exp(-0.5 * x[i] * x[i]);
    }
    x[kZigLayers] = 0.0;
    f[kZigLayers] = 1.0;
  }
};

const ZigTables& zig() {
  static const ZigTables tables;
  return tables;
}

}  // namespace

FastRng::FastRng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
  (void)zig();
}

std::uint64_t FastRng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double FastRng::uniform() { return u64_to_open_unit(next_u64()); }

double FastRng::normal_tail(double r, bool negative) {
  // Marsaglia tail method beyond |x| > r.
  double x, y;
  do {
    x = -std::log(uniform()) / r;
    y = -std::log(uniform());
  } while (y + y < x * x);
  return negative ? -(r + x) : (r + x);
}

double FastRng::normal() {
  const ZigTables& t = zig();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int i = static_cast<int>(bits & 0xFF);
    const bool neg = (bits >> 8) & 1;
    // 52-bit uniform in [0, 1)
    const double u = static_cast<double>(bits >> 12) * 0x1.0p-52;
    const double xr = (i == 0) ? t.x[0] : t.x[i];
    const double cand = u * xr;
    if (i >= 1) {
      if (cand < t.x[i + 1]) return neg ? -cand : cand;
      const double y = t.f[i] + uniform() * (t.f[i + 1] - t.f[i]);
      if (y < std::exp(-0.5 * cand * cand)) return neg ? -cand : cand;
      continue;
    }
    // Base layer: rectangle part up to R, else tail.
    if (cand < kZigR) return neg ? -cand : cand;
    return normal_tail(kZigR, neg);
  }
}

void FastRng::fill_normal(double* dst, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) dst[k] = normal();
}

}  // namespace penlmc
