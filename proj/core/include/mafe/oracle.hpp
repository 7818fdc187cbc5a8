#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mafe/gauss.hpp"
#include "mafe/zq.hpp"

namespace mafe {

// Global user identifier, fixed at 32 bytes.
class GlobalId
{
public:
  static constexpr std::size_t size = 32;
  using Bytes = std::array<std::uint8_t, size>;

  GlobalId() = default;
  explicit GlobalId(const Bytes& bytes)
    : bytes_(bytes)
  {
  }

  // SHAKE256("MAFE-gid-v1" || label), truncated to 32 bytes.
  static GlobalId from_label(std::string_view label);
  // Exactly 64 hex digits.
  static GlobalId from_hex(std::string_view hex);

  const Bytes& bytes() const { return bytes_; }
  std::string to_hex() const;

  auto operator<=>(const GlobalId&) const = default;

private:
  Bytes bytes_{};
};

inline constexpr std::string_view default_oracle_tag = "MAFE-H-v1";

struct OracleConfig
{
  GaussParam chi_prime;
  std::size_t m_prime;
  std::string domain_tag = std::string(default_oracle_tag);

  void validate() const;
  bool operator==(const OracleConfig&) const = default;
};

// domain_tag || le64(|gid|) || gid || le64(n) || le64(v_0) || ... || le64(v_{n-1})
std::vector<std::uint8_t> encode_oracle_input(std::string_view domain_tag, const GlobalId& gid, const ZqVector& v);

// H(gid, v): SHAKE256 of the encoding, squeezed to 16 * m' bytes; each 16-byte chunk (little-endian
// u128) is inverted through the D_{Z,chi'} table.
class Oracle
{
public:
  explicit Oracle(OracleConfig cfg);

  const OracleConfig& config() const { return cfg_; }
  SignedVector operator()(const GlobalId& gid, const ZqVector& v) const;

private:
  OracleConfig cfg_;
  CdtSampler table_;
};

SignedVector hash_to_gaussian(const OracleConfig& cfg, const GlobalId& gid, const ZqVector& v);

} // namespace mafe
