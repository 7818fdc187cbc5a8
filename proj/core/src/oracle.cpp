#include "mafe/oracle.hpp"

#include <cctype>
#include <string>

#include "mafe/errors.hpp"
#include "mafe/random.hpp"

namespace mafe {

namespace {

constexpr std::string_view gid_label_domain = "MAFE-gid-v1";

void put_le64(std::vector<std::uint8_t>& out, std::uint64_t x)
{
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
}

int hex_value(char c)
{
  if (c >= '0' && c <= '9') {
    return c - '0';
  }
  const int lower = std::tolower(static_cast<unsigned char>(c));
  if (lower >= 'a' && lower <= 'f') {
    return lower - 'a' + 10;
  }
  return -1;
}

} // namespace

GlobalId GlobalId::from_label(std::string_view label)
{
  std::vector<std::uint8_t> input(gid_label_domain.begin(), gid_label_domain.end());
  input.insert(input.end(), label.begin(), label.end());
  Bytes out{};
  shake256(input, out);
  return GlobalId(out);
}

GlobalId GlobalId::from_hex(std::string_view hex)
{
  if (hex.size() != 2 * size) {
    throw ValidationError("gid hex string must have 64 digits, got " + std::to_string(hex.size()));
  }
  Bytes out{};
  for (std::size_t i = 0; i < size; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ValidationError("gid hex string contains a non-hex character");
    }
    out[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return GlobalId(out);
}

std::string GlobalId::to_hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * size);
  for (const auto b : bytes_) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

void OracleConfig::validate() const
{
  if (chi_prime.s() < 4.0) {
    throw ValidationError("oracle width chi' must be at least 4");
  }
  if (m_prime == 0) {
    throw ValidationError("oracle output length m' must be positive");
  }
}

std::vector<std::uint8_t> encode_oracle_input(std::string_view domain_tag, const GlobalId& gid, const ZqVector& v)
{
  std::vector<std::uint8_t> out(domain_tag.begin(), domain_tag.end());
  out.reserve(out.size() + 16 + GlobalId::size + 8 * v.size());
  put_le64(out, GlobalId::size);
  out.insert(out.end(), gid.bytes().begin(), gid.bytes().end());
  put_le64(out, v.size());
  for (const auto e : v.entries()) {
    put_le64(out, e);
  }
  return out;
}

Oracle::Oracle(OracleConfig cfg)
  : cfg_(std::move(cfg))
  , table_(cfg_.chi_prime)
{
  cfg_.validate();
}

SignedVector Oracle::operator()(const GlobalId& gid, const ZqVector& v) const
{
  const auto stream = shake256(encode_oracle_input(cfg_.domain_tag, gid, v), 16 * cfg_.m_prime);
  SignedVector out(cfg_.m_prime);
  for (std::size_t i = 0; i < cfg_.m_prime; ++i) {
    u128 x = 0;
    for (int b = 15; b >= 0; --b) {
      x = (x << 8) | stream[16 * i + static_cast<std::size_t>(b)];
    }
    out[i] = table_.from_uniform(x);
  }
  return out;
}

SignedVector hash_to_gaussian(const OracleConfig& cfg, const GlobalId& gid, const ZqVector& v)
{
  return Oracle(cfg)(gid, v);
}

} // namespace mafe
