#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mafe/random.hpp"
#include "mafe/zq.hpp"

namespace mafe {

// Width of a discrete Gaussian in the parameter convention rho_s(x) = exp(-pi x^2 / s^2).
// The standard deviation is about s / sqrt(2 pi). Samples are hard-truncated to [-tail, tail].
class GaussParam
{
public:
  // Tail cut tau = ceil(13.3 s), which leaves truncated mass below 2^-128.
  explicit GaussParam(double s);
  GaussParam(double s, std::int64_t tail);

  double s() const { return s_; }
  std::int64_t tail() const { return tail_; }
  double variance() const;

  bool operator==(const GaussParam&) const = default;

private:
  double s_;
  std::int64_t tail_;
};

std::int64_t default_tail(double s);

// Inversion sampler over a 128-bit fixed-point cumulative table.
//
// The support is {x : |x| <= tail, x = residue (mod stride)} with weights rho_s(x); stride 1 is
// D_{Z,s}, stride 2 gives the two cosets of 2Z used by the gadget sampler. cumulative()[i] is
// floor(2^128 * P(X <= support_value(i))), saturated at 2^128 - 1. Every draw consumes 128 bits.
class CdtSampler
{
public:
  static constexpr std::size_t max_entries = std::size_t{ 1 } << 20;

  explicit CdtSampler(GaussParam param, std::int64_t residue = 0, std::int64_t stride = 1);

  const GaussParam& param() const { return param_; }
  std::span<const u128> cumulative() const { return cdf_; }
  std::size_t size() const { return cdf_.size(); }
  std::int64_t support_value(std::size_t i) const { return first_ + static_cast<std::int64_t>(i) * stride_; }

  std::int64_t from_uniform(u128 r) const;
  std::int64_t sample(RngState& rng) const { return from_uniform(rng.next_u128()); }

private:
  GaussParam param_;
  std::int64_t first_;
  std::int64_t stride_;
  std::vector<u128> cdf_;
};

inline CdtSampler build_cdt(GaussParam param) { return CdtSampler(param); }

inline std::int64_t sample_z(const CdtSampler& table, RngState& rng) { return table.sample(rng); }
SignedVector sample_z_vector(const CdtSampler& table, std::size_t len, RngState& rng);

// D_{Z,r,center} by inversion over a double-precision CDF on [center - 13.3r, center + 13.3r].
// Used for randomized rounding, where the center changes on every draw.
std::int64_t sample_z_centered(double r, double center, RngState& rng);

// D_{Z,s} for widths beyond the table budget: a continuous Gaussian of parameter sqrt(s^2 - r^2)
// followed by randomized rounding at width r = 4.5. Requires s > 4.5.
std::int64_t sample_z_wide(double s, RngState& rng);

} // namespace mafe
