#include "mafe/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <mpfr.h>

#include "mafe/errors.hpp"

namespace mafe {

namespace {

constexpr double tail_factor = 13.3;
constexpr double rounding_width = 4.5;
constexpr mpfr_prec_t cdt_precision = 256;

// RAII holder for an mpfr_t.
class BigFloat
{
public:
  BigFloat() { mpfr_init2(v_, cdt_precision); }
  ~BigFloat() { mpfr_clear(v_); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;

  mpfr_ptr get() { return v_; }

private:
  mpfr_t v_;
};

// rho_s(x) = exp(-pi x^2 / s^2) into `out`.
void gaussian_weight(mpfr_ptr out, std::int64_t x, mpfr_ptr pi_over_s2)
{
  mpfr_set_si(out, x, MPFR_RNDN);
  mpfr_sqr(out, out, MPFR_RNDN);
  mpfr_mul(out, out, pi_over_s2, MPFR_RNDN);
  mpfr_neg(out, out, MPFR_RNDN);
  mpfr_exp(out, out, MPFR_RNDN);
}

// floor(2^128 * p) for p in [0, 1], saturating at 2^128 - 1.
u128 to_fixed128(mpfr_ptr p, mpfr_ptr scratch)
{
  if (mpfr_cmp_ui(p, 1) >= 0) {
    return ~u128{ 0 };
  }
  mpfr_mul_2ui(scratch, p, 64, MPFR_RNDZ);
  const std::uint64_t hi = mpfr_get_uj(scratch, MPFR_RNDZ);
  mpfr_frac(scratch, scratch, MPFR_RNDZ);
  mpfr_mul_2ui(scratch, scratch, 64, MPFR_RNDZ);
  const std::uint64_t lo = mpfr_get_uj(scratch, MPFR_RNDZ);
  return (static_cast<u128>(hi) << 64) | lo;
}

} // namespace

std::int64_t default_tail(double s)
{
  return static_cast<std::int64_t>(std::ceil(tail_factor * s));
}

GaussParam::GaussParam(double s)
  : GaussParam(s, default_tail(s))
{
}

GaussParam::GaussParam(double s, std::int64_t tail)
  : s_(s)
  , tail_(tail)
{
  if (!(s >= 1.0) || !std::isfinite(s)) {
    throw ValidationError("Gaussian parameter must satisfy s >= 1, got " + std::to_string(s));
  }
  if (tail < default_tail(s)) {
    throw ValidationError("tail cut " + std::to_string(tail) + " is below ceil(13.3 s) = " +
                          std::to_string(default_tail(s)));
  }
}

double GaussParam::variance() const
{
  return s_ * s_ / (2.0 * std::numbers::pi);
}

CdtSampler::CdtSampler(GaussParam param, std::int64_t residue, std::int64_t stride)
  : param_(param)
  , first_(0)
  , stride_(stride)
{
  if (stride < 1) {
    throw ValidationError("CDT stride must be positive");
  }
  const std::int64_t tail = param.tail();
  const auto span = static_cast<double>(2 * tail + 1) / static_cast<double>(stride);
  if (span > static_cast<double>(max_entries)) {
    throw ValidationError("CDT for s = " + std::to_string(param.s()) + " needs more than 2^20 entries");
  }
  // Smallest x >= -tail with x = residue (mod stride).
  const std::int64_t r = ((residue % stride) + stride) % stride;
  first_ = -tail + (r + tail % stride) % stride;
  std::vector<std::int64_t> support;
  for (std::int64_t x = first_; x <= tail; x += stride) {
    support.push_back(x);
  }
  if (support.empty()) {
    throw ValidationError("CDT support is empty");
  }

  BigFloat pi_over_s2, total, cum, scratch, ratio;
  mpfr_const_pi(pi_over_s2.get(), MPFR_RNDN);
  mpfr_div_d(pi_over_s2.get(), pi_over_s2.get(), param.s() * param.s(), MPFR_RNDN);

  std::vector<BigFloat> weights(support.size());
  mpfr_set_zero(total.get(), 1);
  for (std::size_t i = 0; i < support.size(); ++i) {
    gaussian_weight(weights[i].get(), support[i], pi_over_s2.get());
    mpfr_add(total.get(), total.get(), weights[i].get(), MPFR_RNDN);
  }

  cdf_.resize(support.size());
  mpfr_set_zero(cum.get(), 1);
  for (std::size_t i = 0; i < support.size(); ++i) {
    mpfr_add(cum.get(), cum.get(), weights[i].get(), MPFR_RNDN);
    mpfr_div(ratio.get(), cum.get(), total.get(), MPFR_RNDN);
    cdf_[i] = to_fixed128(ratio.get(), scratch.get());
  }
  cdf_.back() = ~u128{ 0 };
}

std::int64_t CdtSampler::from_uniform(u128 r) const
{
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), r);
  const auto idx = it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
  return support_value(idx);
}

SignedVector sample_z_vector(const CdtSampler& table, std::size_t len, RngState& rng)
{
  SignedVector out(len);
  for (auto& x : out) {
    x = table.sample(rng);
  }
  return out;
}

std::int64_t sample_z_centered(double r, double center, RngState& rng)
{
  const auto reach = static_cast<std::int64_t>(std::ceil(tail_factor * r));
  const auto base = static_cast<std::int64_t>(std::floor(center));
  const std::int64_t lo = base - reach;
  const std::int64_t hi = base + reach + 1;
  const double scale = std::numbers::pi / (r * r);

  thread_local std::vector<double> weights;
  weights.resize(static_cast<std::size_t>(hi - lo + 1));
  double total = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    const double d = static_cast<double>(x) - center;
    const double w = std::exp(-scale * d * d);
    weights[static_cast<std::size_t>(x - lo)] = w;
    total += w;
  }
  double target = rng.uniform_open01() * total;
  for (std::int64_t x = lo; x <= hi; ++x) {
    target -= weights[static_cast<std::size_t>(x - lo)];
    if (target < 0.0) {
      return x;
    }
  }
  return hi;
}

std::int64_t sample_z_wide(double s, RngState& rng)
{
  if (!(s > rounding_width)) {
    throw ValidationError("sample_z_wide needs s > 4.5");
  }
  const double cont = std::sqrt((s * s - rounding_width * rounding_width) / (2.0 * std::numbers::pi));
  const double y = cont * rng.standard_normal();
  return sample_z_centered(rounding_width, y, rng);
}

} // namespace mafe
