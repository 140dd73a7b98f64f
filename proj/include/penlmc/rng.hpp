#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace penlmc {

// Philox4x32-10 counter-based generator (Salmon et al. keyed-block cipher).
// One block maps a (key, counter) pair to 128 random bits; there is no
// sequential state, so a draw is addressable as
//   (master seed, chain id, step index, draw index, purpose).
namespace philox {

std::array<std::uint32_t, 4> block(std::uint64_t key,
                                   const std::array<std::uint32_t, 4>& ctr);

}  // namespace philox

// Stream purposes; kept disjoint so chain noise, initial velocities and
// ground-truth draws never overlap.
enum class StreamPurpose : std::uint32_t {
  ChainNoise = 0,
  InitialVelocity = 1,
  GroundTruth = 2,
  Projections = 3,
  Generic = 4,
};

// A deterministic random stream addressed by (seed, chain_id, purpose).
// Within the stream, draws are addressed by (step, draw); seek(step) rewinds
// the draw counter so that the k-th draw of step n is identical no matter
// what happened at other steps.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t chain_id,
               StreamPurpose purpose = StreamPurpose::ChainNoise);

  void seek(std::uint32_t step);
  std::uint32_t step() const { return step_; }

  // Uniform draw in [0, 1); consumes one counter slot.
  double uniform();
  // Standard normal draws; a Box-Muller pair consumes one counter slot.
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index p);

 private:
  std::array<std::uint32_t, 4> counter() const;

  std::uint64_t key_;
  std::uint32_t chain_;
  std::uint32_t purpose_;
  std::uint32_t step_ = 0;
  std::uint32_t draw_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Sequential generator for Monte Carlo oracles where addressability is not
// needed: xoshiro256++ seeded through splitmix64, plus a 256-layer ziggurat
// for normal deviates (the oracle loops draw ~1e10 of them).
class FastRng {
 public:
  explicit FastRng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();  // in (0, 1)
  double normal();
  void fill_normal(double* dst, std::size_t n);

 private:
  double normal_tail(double r, bool negative);
  std::array<std::uint64_t, 4> s_;
};

}  // namespace penlmc
