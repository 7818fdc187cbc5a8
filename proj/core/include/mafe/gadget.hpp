#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "mafe/gauss.hpp"
#include "mafe/random.hpp"
#include "mafe/zq.hpp"

namespace mafe {

// Shape of G = I_n (x) (1, 2, ..., 2^{logq - 1}). G itself is never materialized.
struct GadgetShape
{
  std::size_t n;
  unsigned logq;

  GadgetShape(std::size_t n, const Modulus& q)
    : n(n)
    , logq(q.bits())
  {
  }

  std::size_t width() const { return n * logq; }
};

// G^{-1}: little-endian binary expansion of each canonical entry, block i holding x[i].
SignedVector gadget_decompose(const ZqVector& x);

// G y mod q; block i is sum_j 2^j y[i*logq + j].
ZqVector gadget_apply(std::span<const std::int64_t> y, std::size_t n, const Modulus& q);

// Randomized short preimage of G for q = 2^k: digit by digit, x_j is drawn from the coset of 2Z
// holding the current residue, which is then shifted down by one bit.
class GadgetSampler
{
public:
  GadgetSampler(const Modulus& q, GaussParam width);

  const Modulus& modulus() const { return q_; }
  const GaussParam& width() const { return even_.param(); }

  SignedVector preimage(const ZqVector& target, RngState& rng) const;

private:
  Modulus q_;
  CdtSampler even_;
  CdtSampler odd_;
};

SignedVector gadget_gaussian_preimage(const ZqVector& target, GaussParam s, RngState& rng);

// round(q u / p) mod q with ties rounded up, per entry; entries of u must lie in [0, p).
std::uint64_t mod_switch_up(std::uint64_t u, std::uint64_t p, const Modulus& q);
ZqVector mod_switch_up(std::span<const std::uint64_t> u, std::uint64_t p, const Modulus& q);

// round(p x / q) mod p with ties rounded up; x must lie in [0, q).
std::uint64_t mod_switch_down(std::uint64_t x, const Modulus& q, std::uint64_t p);

} // namespace mafe
