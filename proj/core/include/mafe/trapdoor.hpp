#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "mafe/gadget.hpp"
#include "mafe/gauss.hpp"
#include "mafe/random.hpp"
#include "mafe/zq.hpp"

namespace mafe {

// Width of the gadget sampler used inside SamplePre.
inline constexpr double gadget_sampler_width = 8.0;
// Safety factor between the smallest admissible preimage width and s_g * s1(T).
inline constexpr double preimage_width_slack = 1.2;

// Dense row-major integer matrix.
struct SignedMatrix
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> entries;

  std::int64_t operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  bool operator==(const SignedMatrix&) const = default;
};

// A = [A_bar | G - A_bar R] of shape n x (m_bar + w).
struct TrapMatrix
{
  ZqMatrix a;
  std::size_t m_bar;
  std::size_t w;

  std::size_t n() const { return a.rows(); }
  std::size_t width() const { return m_bar + w; }
  bool operator==(const TrapMatrix&) const = default;
};

// G-trapdoor R (m_bar x w) with A [R; I] = G, plus s1 = largest singular value of [R; I].
struct Trapdoor
{
  SignedMatrix r;
  double s1 = 0.0;

  bool operator==(const Trapdoor&) const = default;
};

std::pair<TrapMatrix, Trapdoor> trap_gen(std::size_t n, const Modulus& q, GaussParam s_td, RngState& rng);

// Largest singular value of [R; I], computed in floating point.
double trapdoor_singular_value(const SignedMatrix& r);

// Exact check of A [R; I] = G (mod q).
bool check_trapdoor_relation(const TrapMatrix& tm, const Trapdoor& td);

// Smallest width accepted by SamplePre for this trapdoor: 1.2 * s_g * s1(T).
double min_preimage_width(const Trapdoor& td, double gadget_width = gadget_sampler_width);

// SamplePre with precomputed perturbation factorization.
//
// A perturbation p with covariance s^2 I - s_g^2 T T^T is drawn as a continuous Gaussian
// (Cholesky factor) followed by randomized rounding; then z <- G-preimage(y - A p) at width s_g
// and the output is p + T z, so A x = y holds exactly.
class PreimageSampler
{
public:
  PreimageSampler(const TrapMatrix& tm, const Trapdoor& td, GaussParam width,
                  GaussParam gadget_width = GaussParam(gadget_sampler_width));

  const GaussParam& width() const { return width_; }

  SignedVector sample(const ZqVector& target, RngState& rng) const;

private:
  struct Factor;

  TrapMatrix tm_;
  SignedMatrix r_;
  GaussParam width_;
  GadgetSampler gadget_;
  std::shared_ptr<const Factor> factor_;
};

SignedVector sample_pre(const TrapMatrix& tm, const Trapdoor& td, const ZqVector& target, GaussParam s,
                        RngState& rng);

} // namespace mafe
