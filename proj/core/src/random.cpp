#include "mafe/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <openssl/evp.h>
#include <openssl/rand.h>

#include "mafe/errors.hpp"

namespace mafe {

namespace {

struct MdCtxDeleter
{
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

constexpr std::string_view rng_domain = "MAFE/rng/v1";

} // namespace

void shake256(std::span<const std::uint8_t> input, std::span<std::uint8_t> out)
{
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), input.data(), input.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw Error("SHAKE256 evaluation failed");
  }
}

std::vector<std::uint8_t> shake256(std::span<const std::uint8_t> input, std::size_t out_len)
{
  std::vector<std::uint8_t> out(out_len);
  shake256(input, out);
  return out;
}

RngState::RngState(const Seed& seed)
  : seed_(seed)
{
}

RngState RngState::from_u64(std::uint64_t value)
{
  Seed seed{};
  for (int i = 0; i < 8; ++i) {
    seed[i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
  return RngState(seed);
}

RngState RngState::from_os_entropy()
{
  Seed seed{};
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw Error("operating system entropy source unavailable");
  }
  return RngState(seed);
}

void RngState::refill()
{
  std::vector<std::uint8_t> input;
  input.reserve(rng_domain.size() + seed_.size() + 8);
  input.insert(input.end(), rng_domain.begin(), rng_domain.end());
  input.insert(input.end(), seed_.begin(), seed_.end());
  for (int i = 0; i < 8; ++i) {
    input.push_back(static_cast<std::uint8_t>(block_index_ >> (8 * i)));
  }
  shake256(input, block_);
  block_valid_ = true;
}

void RngState::fill(std::span<std::uint8_t> out)
{
  std::size_t written = 0;
  while (written < out.size()) {
    const std::uint64_t want_block = position_ / block_size;
    if (!block_valid_ || want_block != block_index_) {
      block_index_ = want_block;
      refill();
    }
    const std::size_t offset = position_ % block_size;
    const std::size_t take = std::min(out.size() - written, block_size - offset);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(offset), take, out.begin() + static_cast<std::ptrdiff_t>(written));
    written += take;
    position_ += take;
  }
}

std::uint64_t RngState::next_u64()
{
  std::array<std::uint8_t, 8> buf{};
  fill(buf);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | buf[i];
  }
  return v;
}

u128 RngState::next_u128()
{
  const u128 lo = next_u64();
  const u128 hi = next_u64();
  return (hi << 64) | lo;
}

std::uint64_t RngState::uniform_below(std::uint64_t bound)
{
  if (bound == 0) {
    throw ValidationError("uniform_below: bound must be positive");
  }
  if ((bound & (bound - 1)) == 0) {
    return next_u64() & (bound - 1);
  }
  // Reject the top partial interval so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) {
      return x % bound;
    }
  }
}

double RngState::uniform_open01()
{
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngState::standard_normal()
{
  const double u1 = uniform_open01();
  const double u2 = uniform_open01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngState RngState::derive(std::string_view label)
{
  std::array<std::uint8_t, 32> fresh{};
  fill(fresh);
  std::vector<std::uint8_t> input(label.begin(), label.end());
  input.insert(input.end(), fresh.begin(), fresh.end());
  Seed child{};
  shake256(input, child);
  return RngState(child);
}

ZqVector uniform_vector(const Modulus& q, std::size_t len, RngState& rng)
{
  std::vector<std::uint64_t> out(len);
  for (auto& e : out) {
    e = rng.uniform_below(q.value());
  }
  return ZqVector(q, std::move(out));
}

ZqMatrix uniform_matrix(const Modulus& q, std::size_t rows, std::size_t cols, RngState& rng)
{
  std::vector<std::uint64_t> out(rows * cols);
  for (auto& e : out) {
    e = rng.uniform_below(q.value());
  }
  return ZqMatrix(q, rows, cols, std::move(out));
}

} // namespace mafe
