#include "mafe/zq.hpp"

#include <string>

#include "mafe/errors.hpp"

namespace mafe {

namespace {

void require_same_modulus(const Modulus& a, const Modulus& b)
{
  if (!(a == b)) {
    throw ModulusError("operands use different moduli (" + std::to_string(a.value()) + " vs " +
                       std::to_string(b.value()) + ")");
  }
}

// Accumulates sum a_i * b_i over Z_q. For q = 2^k the products wrap mod 2^64 and are masked once.
class DotAccumulator
{
public:
  explicit DotAccumulator(const Modulus& q)
    : q_(q)
  {
  }

  void add(std::uint64_t a, std::uint64_t b)
  {
    if (q_.is_power_of_two()) {
      low_ += a * b;
    } else {
      wide_ += q_.mul(a, b);
    }
  }

  std::uint64_t value() const { return q_.is_power_of_two() ? q_.reduce(low_) : q_.reduce_wide(wide_); }

private:
  const Modulus& q_;
  std::uint64_t low_ = 0;
  u128 wide_ = 0;
};

} // namespace

Modulus::Modulus(std::uint64_t q)
  : q_(q)
  , bits_(0)
  , pow2_(false)
{
  if (q <= 2 || q > max_value) {
    throw ModulusError("modulus must satisfy 2 < q <= 2^62, got " + std::to_string(q));
  }
  while ((std::uint64_t{ 1 } << bits_) < q) {
    ++bits_;
  }
  pow2_ = (q & (q - 1)) == 0;
}

std::uint64_t Modulus::from_signed(std::int64_t x) const
{
  if (pow2_) {
    return static_cast<std::uint64_t>(x) & (q_ - 1);
  }
  const std::int64_t r = x % static_cast<std::int64_t>(q_);
  return r < 0 ? static_cast<std::uint64_t>(r + static_cast<std::int64_t>(q_)) : static_cast<std::uint64_t>(r);
}

ZqVector::ZqVector(Modulus q, std::size_t len)
  : q_(q)
  , entries_(len, 0)
{
}

ZqVector::ZqVector(Modulus q, std::vector<std::uint64_t> entries)
  : q_(q)
  , entries_(std::move(entries))
{
  for (const auto e : entries_) {
    if (e >= q_.value()) {
      throw ValidationError("vector entry " + std::to_string(e) + " is not a canonical residue mod " +
                            std::to_string(q_.value()));
    }
  }
}

ZqVector ZqVector::from_signed(Modulus q, std::span<const std::int64_t> values)
{
  ZqVector out(q, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.entries_[i] = q.from_signed(values[i]);
  }
  return out;
}

ZqMatrix::ZqMatrix(Modulus q, std::size_t rows, std::size_t cols)
  : q_(q)
  , rows_(rows)
  , cols_(cols)
  , entries_(rows * cols, 0)
{
}

ZqMatrix::ZqMatrix(Modulus q, std::size_t rows, std::size_t cols, std::vector<std::uint64_t> entries)
  : q_(q)
  , rows_(rows)
  , cols_(cols)
  , entries_(std::move(entries))
{
  if (entries_.size() != rows * cols) {
    throw DimensionError("matrix buffer holds " + std::to_string(entries_.size()) + " entries, expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (const auto e : entries_) {
    if (e >= q_.value()) {
      throw ValidationError("matrix entry " + std::to_string(e) + " is not a canonical residue mod " +
                            std::to_string(q_.value()));
    }
  }
}

ZqMatrix ZqMatrix::identity(Modulus q, std::size_t dim)
{
  ZqMatrix out(q, dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out.entries_[i * dim + i] = 1;
  }
  return out;
}

ZqMatrix mat_mul(const ZqMatrix& a, const ZqMatrix& b)
{
  require_same_modulus(a.modulus(), b.modulus());
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const Modulus& q = a.modulus();
  std::vector<std::uint64_t> out(a.rows() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      DotAccumulator acc(q);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc.add(a(i, k), b(k, j));
      }
      out[i * b.cols() + j] = acc.value();
    }
  }
  return ZqMatrix(q, a.rows(), b.cols(), std::move(out));
}

ZqVector vec_mat_mul(const ZqVector& s, const ZqMatrix& a)
{
  require_same_modulus(s.modulus(), a.modulus());
  if (s.size() != a.rows()) {
    throw DimensionError("vec_mat_mul: vector of length " + std::to_string(s.size()) + " against " +
                         std::to_string(a.rows()) + " rows");
  }
  const Modulus& q = a.modulus();
  std::vector<std::uint64_t> out(a.cols(), 0);
  if (q.is_power_of_two()) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const std::uint64_t si = s[i];
      const auto row = a.row(i);
      for (std::size_t j = 0; j < a.cols(); ++j) {
        out[j] += si * row[j];
      }
    }
    for (auto& e : out) {
      e = q.reduce(e);
    }
  } else {
    std::vector<u128> wide(a.cols(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const auto row = a.row(i);
      for (std::size_t j = 0; j < a.cols(); ++j) {
        wide[j] += q.mul(s[i], row[j]);
      }
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out[j] = q.reduce_wide(wide[j]);
    }
  }
  return ZqVector(q, std::move(out));
}

ZqVector mat_vec_mul(const ZqMatrix& a, const ZqVector& x)
{
  require_same_modulus(a.modulus(), x.modulus());
  if (a.cols() != x.size()) {
    throw DimensionError("mat_vec_mul: " + std::to_string(a.cols()) + " columns against vector of length " +
                         std::to_string(x.size()));
  }
  const Modulus& q = a.modulus();
  std::vector<std::uint64_t> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    DotAccumulator acc(q);
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      acc.add(row[j], x[j]);
    }
    out[i] = acc.value();
  }
  return ZqVector(q, std::move(out));
}

ZqVector mat_vec_mul(const ZqMatrix& a, std::span<const std::int64_t> x)
{
  return mat_vec_mul(a, ZqVector::from_signed(a.modulus(), x));
}

std::uint64_t inner_product(const ZqVector& u, const ZqVector& v)
{
  require_same_modulus(u.modulus(), v.modulus());
  if (u.size() != v.size()) {
    throw DimensionError("inner_product: lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  DotAccumulator acc(u.modulus());
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc.add(u[i], v[i]);
  }
  return acc.value();
}

std::uint64_t inner_product(const ZqVector& u, std::span<const std::int64_t> v)
{
  return inner_product(u, ZqVector::from_signed(u.modulus(), v));
}

ZqVector add(const ZqVector& a, const ZqVector& b)
{
  require_same_modulus(a.modulus(), b.modulus());
  if (a.size() != b.size()) {
    throw DimensionError("add: lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a.modulus().add(a[i], b[i]);
  }
  return ZqVector(a.modulus(), std::move(out));
}

ZqVector sub(const ZqVector& a, const ZqVector& b)
{
  require_same_modulus(a.modulus(), b.modulus());
  if (a.size() != b.size()) {
    throw DimensionError("sub: lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a.modulus().sub(a[i], b[i]);
  }
  return ZqVector(a.modulus(), std::move(out));
}

} // namespace mafe
