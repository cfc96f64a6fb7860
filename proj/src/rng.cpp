#include "fedsim/rng.hpp"

#include <cmath>

namespace fedsim::rng {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * c[2];
  c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
       static_cast<std::uint32_t>(p1),
       static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
       static_cast<std::uint32_t>(p0)};
}

inline std::array<std::uint32_t, 2> make_key(std::uint64_t seed, Tag tag) {
  const auto t = static_cast<std::uint32_t>(tag);
  return {static_cast<std::uint32_t>(seed) ^ (t * 0x9E3779B9u),
          static_cast<std::uint32_t>(seed >> 32) ^ (t * 0x85EBCA6Bu)};
}

inline std::uint64_t to_u64(const std::array<std::uint32_t, 4>& w, int half) {
  return static_cast<std::uint64_t>(w[2 * half]) |
         (static_cast<std::uint64_t>(w[2 * half + 1]) << 32);
}

// 53-bit mantissa in [0, 1).
inline double unit_from_bits(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// (0, 1]: safe as a log argument.
inline double open_unit_from_bits(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

inline std::array<std::uint32_t, 4> keyed_block(std::uint64_t seed, Tag tag,
                                                std::uint64_t i0,
                                                std::uint64_t i1,
                                                std::uint64_t i2) {
  const std::uint32_t fold = static_cast<std::uint32_t>(i0 >> 32) ^
                             (static_cast<std::uint32_t>(i1 >> 32) * 0xC2B2AE35u) ^
                             (static_cast<std::uint32_t>(i2 >> 32) * 0x27D4EB2Fu);
  return philox4x32({static_cast<std::uint32_t>(i0),
                     static_cast<std::uint32_t>(i1),
                     static_cast<std::uint32_t>(i2), fold},
                    make_key(seed, tag));
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    philox_round(counter, key);
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

double keyed_uniform01(std::uint64_t seed, Tag tag, std::uint64_t i0,
                       std::uint64_t i1, std::uint64_t i2) {
  return unit_from_bits(to_u64(keyed_block(seed, tag, i0, i1, i2), 0));
}

double keyed_normal(std::uint64_t seed, Tag tag, std::uint64_t i0,
                    std::uint64_t i1, std::uint64_t i2) {
  const auto block = keyed_block(seed, tag, i0, i1, i2);
  const double u1 = open_unit_from_bits(to_u64(block, 0));
  const double u2 = unit_from_bits(to_u64(block, 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

Stream::Stream(std::uint64_t seed, Tag tag, std::uint64_t stream_id)
    : key_(make_key(seed, tag)),
      stream_words_{static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)} {}

void Stream::refill() {
  const auto block = philox4x32({static_cast<std::uint32_t>(counter_),
                                 static_cast<std::uint32_t>(counter_ >> 32),
                                 stream_words_[0], stream_words_[1]},
                                key_);
  ++counter_;
  buffer_ = {to_u64(block, 0), to_u64(block, 1)};
  buffer_pos_ = 0;
}

std::uint64_t Stream::next_u64() {
  if (buffer_pos_ >= 2) refill();
  return buffer_[buffer_pos_++];
}

double Stream::uniform01() { return unit_from_bits(next_u64()); }

double Stream::normal() {
  if (has_pending_normal_) {
    has_pending_normal_ = false;
    return pending_normal_;
  }
  const double u1 = open_unit_from_bits(next_u64());
  const double u2 = unit_from_bits(next_u64());
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  pending_normal_ = radius * std::sin(angle);
  has_pending_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Stream::uniform_below(std::uint64_t n) {
  return next_u64() % n;
}

}  // namespace fedsim::rng
