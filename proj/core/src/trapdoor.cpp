#include "mafe/trapdoor.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "mafe/errors.hpp"

namespace mafe {

namespace {

constexpr double rounding_width = 4.5;

} // namespace

struct PreimageSampler::Factor
{
  Eigen::MatrixXd lower;
};

std::pair<TrapMatrix, Trapdoor> trap_gen(std::size_t n, const Modulus& q, GaussParam s_td, RngState& rng)
{
  if (!q.is_power_of_two()) {
    throw ModulusError("trap_gen needs a power-of-two modulus, got " + std::to_string(q.value()));
  }
  if (s_td.s() < 4.0) {
    throw ValidationError("trapdoor width must be at least 4");
  }
  const unsigned k = q.bits();
  const std::size_t w = n * k;
  const std::size_t m_bar = w;

  const ZqMatrix a_bar = uniform_matrix(q, n, m_bar, rng);
  const CdtSampler table(s_td);
  SignedMatrix r{ m_bar, w, sample_z_vector(table, m_bar * w, rng) };

  // Right block: G - A_bar R.
  std::vector<std::uint64_t> entries(n * (m_bar + w));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m_bar; ++j) {
      entries[i * (m_bar + w) + j] = a_bar(i, j);
    }
    for (std::size_t c = 0; c < w; ++c) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < m_bar; ++j) {
        acc = q.add(acc, q.mul(a_bar(i, j), q.from_signed(r(j, c))));
      }
      const std::uint64_t g = (c / k == i) ? q.reduce(std::uint64_t{ 1 } << (c % k)) : 0;
      entries[i * (m_bar + w) + m_bar + c] = q.sub(g, acc);
    }
  }

  Trapdoor td{ std::move(r), 0.0 };
  td.s1 = trapdoor_singular_value(td.r);
  return { TrapMatrix{ ZqMatrix(q, n, m_bar + w, std::move(entries)), m_bar, w }, std::move(td) };
}

double trapdoor_singular_value(const SignedMatrix& r)
{
  Eigen::MatrixXd rm(static_cast<Eigen::Index>(r.rows), static_cast<Eigen::Index>(r.cols));
  for (std::size_t i = 0; i < r.rows; ++i) {
    for (std::size_t j = 0; j < r.cols; ++j) {
      rm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(r(i, j));
    }
  }
  // T^T T = R^T R + I
  const Eigen::MatrixXd gram = rm.transpose() * rm;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(1.0 + solver.eigenvalues().maxCoeff());
}

bool check_trapdoor_relation(const TrapMatrix& tm, const Trapdoor& td)
{
  const Modulus& q = tm.a.modulus();
  const unsigned k = q.bits();
  if (td.r.rows != tm.m_bar || td.r.cols != tm.w || tm.w != tm.n() * k) {
    return false;
  }
  for (std::size_t i = 0; i < tm.n(); ++i) {
    for (std::size_t c = 0; c < tm.w; ++c) {
      // (A [R; I])_{i,c} = sum_j A_bar[i,j] R[j,c] + A[i, m_bar + c]
      std::uint64_t acc = tm.a(i, tm.m_bar + c);
      for (std::size_t j = 0; j < tm.m_bar; ++j) {
        acc = q.add(acc, q.mul(tm.a(i, j), q.from_signed(td.r(j, c))));
      }
      const std::uint64_t g = (c / k == i) ? q.reduce(std::uint64_t{ 1 } << (c % k)) : 0;
      if (acc != g) {
        return false;
      }
    }
  }
  return true;
}

double min_preimage_width(const Trapdoor& td, double gadget_width)
{
  return preimage_width_slack * gadget_width * td.s1;
}

PreimageSampler::PreimageSampler(const TrapMatrix& tm, const Trapdoor& td, GaussParam width, GaussParam gadget_width)
  : tm_(tm)
  , r_(td.r)
  , width_(width)
  , gadget_(tm.a.modulus(), gadget_width)
{
  const double floor_width = min_preimage_width(td, gadget_width.s());
  if (width.s() < floor_width) {
    throw ValidationError("preimage width " + std::to_string(width.s()) + " is below 1.2 * s_g * s1(T) = " +
                          std::to_string(floor_width));
  }
  if (td.r.rows != tm.m_bar || td.r.cols != tm.w) {
    throw DimensionError("trapdoor shape does not match the trapdoor matrix");
  }

  const auto m_bar = static_cast<Eigen::Index>(tm.m_bar);
  const auto w = static_cast<Eigen::Index>(tm.w);
  const Eigen::Index dim = m_bar + w;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, w);
  for (Eigen::Index i = 0; i < m_bar; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      t(i, j) = static_cast<double>(td.r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
  }
  for (Eigen::Index j = 0; j < w; ++j) {
    t(m_bar + j, j) = 1.0;
  }

  // Covariance of the continuous part, in standard-deviation units: ((s^2 - r^2) I - s_g^2 T T^T) / 2 pi.
  const double sg2 = gadget_width.s() * gadget_width.s();
  const double diag = width.s() * width.s() - rounding_width * rounding_width;
  Eigen::MatrixXd cov = -sg2 * (t * t.transpose());
  cov.diagonal().array() += diag;
  cov /= 2.0 * std::numbers::pi;

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("preimage width " + std::to_string(width.s()) +
                          " leaves the perturbation covariance indefinite");
  }
  factor_ = std::make_shared<const Factor>(Factor{ llt.matrixL() });
}

SignedVector PreimageSampler::sample(const ZqVector& target, RngState& rng) const
{
  const Modulus& q = tm_.a.modulus();
  if (target.size() != tm_.n()) {
    throw DimensionError("SamplePre target has length " + std::to_string(target.size()) + ", expected " +
                         std::to_string(tm_.n()));
  }
  if (!(target.modulus() == q)) {
    throw ModulusError("SamplePre target uses a different modulus");
  }

  const auto dim = static_cast<Eigen::Index>(tm_.width());
  Eigen::VectorXd g(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    g(i) = rng.standard_normal();
  }
  const Eigen::VectorXd cont = factor_->lower.triangularView<Eigen::Lower>() * g;

  SignedVector x(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    x[static_cast<std::size_t>(i)] = sample_z_centered(rounding_width, cont(i), rng);
  }

  const ZqVector shifted = sub(target, mat_vec_mul(tm_.a, x));
  const SignedVector z = gadget_.preimage(shifted, rng);

  // x += T z = [R z; z]
  for (std::size_t i = 0; i < tm_.m_bar; ++i) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < tm_.w; ++j) {
      acc += r_(i, j) * z[j];
    }
    x[i] += acc;
  }
  for (std::size_t j = 0; j < tm_.w; ++j) {
    x[tm_.m_bar + j] += z[j];
  }
  return x;
}

SignedVector sample_pre(const TrapMatrix& tm, const Trapdoor& td, const ZqVector& target, GaussParam s, RngState& rng)
{
  return PreimageSampler(tm, td, s).sample(target, rng);
}

} // namespace mafe
