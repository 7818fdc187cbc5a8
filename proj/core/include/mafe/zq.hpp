#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mafe {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

// Integer vector over Z (centered Gaussian samples, key shares, gadget digits).
using SignedVector = std::vector<std::int64_t>;

// The modulus q of Z_q, with 2 < q <= 2^62.
class Modulus
{
public:
  static constexpr std::uint64_t max_value = std::uint64_t{ 1 } << 62;

  explicit Modulus(std::uint64_t q);

  std::uint64_t value() const { return q_; }
  // Smallest k with 2^k >= q.
  unsigned bits() const { return bits_; }
  bool is_power_of_two() const { return pow2_; }

  std::uint64_t reduce(std::uint64_t x) const { return pow2_ ? (x & (q_ - 1)) : (x % q_); }
  std::uint64_t reduce_wide(u128 x) const
  {
    return pow2_ ? (static_cast<std::uint64_t>(x) & (q_ - 1)) : static_cast<std::uint64_t>(x % q_);
  }
  std::uint64_t from_signed(std::int64_t x) const;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const
  {
    const std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + q_ - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const
  {
    return reduce_wide(static_cast<u128>(a) * b);
  }

  // Unique representative in (-q/2, q/2]; for even q the tie q/2 stays positive.
  std::int64_t center(std::uint64_t x) const
  {
    return x > q_ / 2 ? static_cast<std::int64_t>(x) - static_cast<std::int64_t>(q_) : static_cast<std::int64_t>(x);
  }

  bool operator==(const Modulus&) const = default;

private:
  std::uint64_t q_;
  unsigned bits_;
  bool pow2_;
};

// Free-function form of Modulus::center.
inline std::int64_t center(std::uint64_t x, const Modulus& q) { return q.center(x); }

// Dense vector over Z_q holding canonical representatives in [0, q).
class ZqVector
{
public:
  ZqVector(Modulus q, std::size_t len);
  ZqVector(Modulus q, std::vector<std::uint64_t> entries);

  static ZqVector from_signed(Modulus q, std::span<const std::int64_t> values);

  const Modulus& modulus() const { return q_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::uint64_t operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, std::uint64_t value) { entries_[i] = q_.reduce(value); }
  std::span<const std::uint64_t> entries() const { return entries_; }

  bool operator==(const ZqVector&) const = default;

private:
  Modulus q_;
  std::vector<std::uint64_t> entries_;
};

// Dense row-major matrix over Z_q.
class ZqMatrix
{
public:
  ZqMatrix(Modulus q, std::size_t rows, std::size_t cols);
  ZqMatrix(Modulus q, std::size_t rows, std::size_t cols, std::vector<std::uint64_t> entries);

  static ZqMatrix identity(Modulus q, std::size_t dim);

  const Modulus& modulus() const { return q_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint64_t value) { entries_[r * cols_ + c] = q_.reduce(value); }
  std::span<const std::uint64_t> row(std::size_t r) const
  {
    return std::span<const std::uint64_t>(entries_).subspan(r * cols_, cols_);
  }
  std::span<const std::uint64_t> entries() const { return entries_; }

  bool operator==(const ZqMatrix&) const = default;

private:
  Modulus q_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> entries_;
};

ZqMatrix mat_mul(const ZqMatrix& a, const ZqMatrix& b);

// Row vector times matrix: s^T A.
ZqVector vec_mat_mul(const ZqVector& s, const ZqMatrix& a);

// Matrix times column vector: A x.
ZqVector mat_vec_mul(const ZqMatrix& a, const ZqVector& x);
ZqVector mat_vec_mul(const ZqMatrix& a, std::span<const std::int64_t> x);

std::uint64_t inner_product(const ZqVector& u, const ZqVector& v);
std::uint64_t inner_product(const ZqVector& u, std::span<const std::int64_t> v);

ZqVector add(const ZqVector& a, const ZqVector& b);
ZqVector sub(const ZqVector& a, const ZqVector& b);

} // namespace mafe
