#pragma once

#include <array>
#include <cstdint>

// Counter-based pseudo-randomness (Philox 4x32-10). Every draw is a pure
// function of (seed, counter, tag), so values are independent of evaluation
// order and thread count: a sample drawn for (client c, sample i, coord j)
// is the same whether clients are generated serially or in parallel.

namespace fedsim::rng {

// One application of the Philox 4x32 block cipher with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Domain-separation tags. Draw families with different tags never collide,
// even at the same (seed, index) triple. Keep values stable: regenerating a
// dataset from a stored seed must reproduce it bit for bit.
enum class Tag : std::uint32_t {
  kReferenceOptimum = 1,  // synthetic w_ref coordinates
  kInputScale = 2,        // per-client input-scale draw
  kInputs = 3,            // raw input matrix entries
  kLabelNoise = 4,        // label noise
  kGradientNoise = 5,     // stochastic-gradient noise / minibatch picks
  kClientSampling = 6,    // partial-participation shuffles
  kEstimator = 7,         // Monte Carlo estimators (iterate bias, ...)
  kTesting = 8,           // reserved for test fixtures
};

// Keyed draws addressed by three 64-bit indices. High halves of the indices
// are folded into the fourth counter word, so indices above 2^32 stay
// collision-free for practical ranges.
double keyed_uniform01(std::uint64_t seed, Tag tag, std::uint64_t i0,
                       std::uint64_t i1, std::uint64_t i2);
double keyed_normal(std::uint64_t seed, Tag tag, std::uint64_t i0,
                    std::uint64_t i1, std::uint64_t i2);

// Sequential view of one counter stream: (seed, tag, stream_id) fix the key
// and the upper counter words, successive draws advance the lower 64 bits.
// Cheap to construct; fork one per (round, client) for stochastic updates.
class Stream {
 public:
  Stream(std::uint64_t seed, Tag tag, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform01();                        // [0, 1)
  double normal();                           // N(0, 1)
  std::uint64_t uniform_below(std::uint64_t n);  // {0, ..., n-1}, n >= 1

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_words_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffer_pos_ = 2;
  double pending_normal_ = 0.0;
  bool has_pending_normal_ = false;
};

}  // namespace fedsim::rng
