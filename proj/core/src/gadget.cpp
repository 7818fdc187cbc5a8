#include "mafe/gadget.hpp"

#include <string>

#include "mafe/errors.hpp"

namespace mafe {

SignedVector gadget_decompose(const ZqVector& x)
{
  const unsigned k = x.modulus().bits();
  SignedVector out(x.size() * k);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::uint64_t value = x[i];
    for (unsigned j = 0; j < k; ++j) {
      out[i * k + j] = static_cast<std::int64_t>((value >> j) & 1U);
    }
  }
  return out;
}

ZqVector gadget_apply(std::span<const std::int64_t> y, std::size_t n, const Modulus& q)
{
  const unsigned k = q.bits();
  if (y.size() != n * k) {
    throw DimensionError("gadget_apply: expected length " + std::to_string(n * k) + ", got " +
                         std::to_string(y.size()));
  }
  ZqVector out(q, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t acc = 0;
    for (unsigned j = 0; j < k; ++j) {
      acc = q.add(acc, q.mul(q.from_signed(y[i * k + j]), q.reduce(std::uint64_t{ 1 } << j)));
    }
    out.set(i, acc);
  }
  return out;
}

GadgetSampler::GadgetSampler(const Modulus& q, GaussParam width)
  : q_(q)
  , even_(width, 0, 2)
  , odd_(width, 1, 2)
{
  if (!q.is_power_of_two()) {
    throw ModulusError("Gaussian gadget preimages need a power-of-two modulus, got " + std::to_string(q.value()));
  }
  if (width.s() < 4.0) {
    throw ValidationError("gadget sampler width must be at least 4");
  }
}

SignedVector GadgetSampler::preimage(const ZqVector& target, RngState& rng) const
{
  if (!(target.modulus() == q_)) {
    throw ModulusError("gadget preimage target uses a different modulus");
  }
  const unsigned k = q_.bits();
  SignedVector out(target.size() * k);
  for (std::size_t i = 0; i < target.size(); ++i) {
    // residue is tracked exactly in Z; only its parity and the final wrap mod 2^k matter.
    std::int64_t residue = static_cast<std::int64_t>(target[i]);
    for (unsigned j = 0; j < k; ++j) {
      const CdtSampler& coset = (residue & 1) ? odd_ : even_;
      const std::int64_t digit = coset.sample(rng);
      out[i * k + j] = digit;
      residue = (residue - digit) / 2;
    }
  }
  return out;
}

SignedVector gadget_gaussian_preimage(const ZqVector& target, GaussParam s, RngState& rng)
{
  return GadgetSampler(target.modulus(), s).preimage(target, rng);
}

std::uint64_t mod_switch_up(std::uint64_t u, std::uint64_t p, const Modulus& q)
{
  if (p == 0 || u >= p) {
    throw ValidationError("mod_switch_up: value " + std::to_string(u) + " is not in [0, " + std::to_string(p) + ")");
  }
  // floor(q u / p + 1/2) = floor((2 q u + p) / (2 p))
  const u128 num = 2 * static_cast<u128>(q.value()) * u + p;
  const u128 rounded = num / (2 * static_cast<u128>(p));
  return q.reduce_wide(rounded);
}

ZqVector mod_switch_up(std::span<const std::uint64_t> u, std::uint64_t p, const Modulus& q)
{
  ZqVector out(q, u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.set(i, mod_switch_up(u[i], p, q));
  }
  return out;
}

std::uint64_t mod_switch_down(std::uint64_t x, const Modulus& q, std::uint64_t p)
{
  if (x >= q.value()) {
    throw ValidationError("mod_switch_down: value " + std::to_string(x) + " is not a residue mod " +
                          std::to_string(q.value()));
  }
  if (p == 0) {
    throw ValidationError("mod_switch_down: p must be positive");
  }
  const u128 num = 2 * static_cast<u128>(p) * x + q.value();
  const u128 rounded = num / (2 * static_cast<u128>(q.value()));
  return static_cast<std::uint64_t>(rounded % p);
}

} // namespace mafe
