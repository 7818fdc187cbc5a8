#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mafe/zq.hpp"

namespace mafe {

// Identifier of the extendable-output function baked into artifact headers.
inline constexpr std::uint8_t xof_id_shake256 = 1;

// SHAKE256 of `input`, squeezed to fill `out`.
void shake256(std::span<const std::uint8_t> input, std::span<std::uint8_t> out);
std::vector<std::uint8_t> shake256(std::span<const std::uint8_t> input, std::size_t out_len);

using Seed = std::array<std::uint8_t, 32>;

// Deterministic byte stream keyed by a 32-byte seed: block k of the stream is
// SHAKE256("MAFE/rng/v1" || seed || le64(k)) truncated to block_size bytes.
// Identical (seed, position) always yields identical output.
class RngState
{
public:
  static constexpr std::size_t block_size = 512;

  explicit RngState(const Seed& seed);

  // Seed is le64(value) zero-padded to 32 bytes. Intended for tests and reproducible tooling.
  static RngState from_u64(std::uint64_t value);
  // Seed drawn from the operating system.
  static RngState from_os_entropy();

  const Seed& seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  u128 next_u128();

  // Uniform in [0, bound), bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform double in (0, 1), 53 bits.
  double uniform_open01();
  // Standard normal via Box-Muller; consumes 128 bits per call.
  double standard_normal();

  // Child stream: seed = SHAKE256(label || next 32 bytes of this stream). Advances this stream.
  RngState derive(std::string_view label);

private:
  void refill();

  Seed seed_;
  std::uint64_t position_ = 0;
  std::array<std::uint8_t, block_size> block_{};
  std::uint64_t block_index_ = 0;
  bool block_valid_ = false;
};

ZqVector uniform_vector(const Modulus& q, std::size_t len, RngState& rng);
ZqMatrix uniform_matrix(const Modulus& q, std::size_t rows, std::size_t cols, RngState& rng);

} // namespace mafe
