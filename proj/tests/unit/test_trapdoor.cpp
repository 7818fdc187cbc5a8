#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include "mafe/errors.hpp"
#include "mafe/trapdoor.hpp"
#include "oracles.hpp"

using namespace mafe;
using mafe::testing::zqv;

namespace {

const Modulus q32(std::uint64_t{ 1 } << 32);

double safe_width(const Trapdoor& td)
{
  return min_preimage_width(td) + 1.0;
}

} // namespace

TEST_SUITE("trapdoor")
{
  TEST_CASE("shape and trapdoor relation")
  {
    auto rng = RngState::from_u64(30);
    for (int t = 0; t < 10; ++t) {
      const auto [tm, td] = trap_gen(8, q32, GaussParam(4.0), rng);
      CHECK(tm.m_bar == 256);
      CHECK(tm.w == 256);
      CHECK(tm.a.rows() == 8);
      CHECK(tm.a.cols() == 512);
      CHECK(check_trapdoor_relation(tm, td));
      CHECK(td.s1 > 1.0);
    }
  }

  TEST_CASE("relation check catches a corrupted trapdoor")
  {
    auto rng = RngState::from_u64(31);
    auto [tm, td] = trap_gen(2, Modulus(1 << 10), GaussParam(4.0), rng);
    td.r.entries[3] += 1;
    CHECK_FALSE(check_trapdoor_relation(tm, td));
  }

  TEST_CASE("s1 matches the spectral norm of [R; I] from power iteration")
  {
    auto rng = RngState::from_u64(32);
    const auto [tm, td] = trap_gen(2, Modulus(1 << 12), GaussParam(4.0), rng);
    const std::size_t rows = td.r.rows;
    const std::size_t cols = td.r.cols;
    std::vector<double> x(cols, 1.0);
    double norm = 0;
    for (int it = 0; it < 2000; ++it) {
      // y = (R^T R + I) x
      std::vector<double> rx(rows, 0.0);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          rx[i] += static_cast<double>(td.r(i, j)) * x[j];
        }
      }
      std::vector<double> y(x);
      for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
          y[j] += static_cast<double>(td.r(i, j)) * rx[i];
        }
      }
      norm = 0;
      for (const auto v : y) {
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (std::size_t j = 0; j < cols; ++j) {
        x[j] = y[j] / norm;
      }
    }
    CHECK(td.s1 == doctest::Approx(std::sqrt(norm)).epsilon(1e-6));
  }

  TEST_CASE("fixed seed reproduces the pair")
  {
    auto a = RngState::from_u64(33);
    auto b = RngState::from_u64(33);
    const auto x = trap_gen(4, Modulus(1 << 16), GaussParam(4.0), a);
    const auto y = trap_gen(4, Modulus(1 << 16), GaussParam(4.0), b);
    CHECK(x.first == y.first);
    CHECK(x.second == y.second);
  }

  TEST_CASE("uniform block passes a chi-square test")
  {
    auto rng = RngState::from_u64(34);
    constexpr int bins = 256;
    std::vector<double> counts(bins, 0);
    std::size_t total = 0;
    while (total < 100'000) {
      const auto [tm, td] = trap_gen(16, q32, GaussParam(4.0), rng);
      for (std::size_t i = 0; i < tm.n(); ++i) {
        for (std::size_t j = 0; j < tm.m_bar; ++j) {
          counts[tm.a(i, j) >> 24] += 1;
          ++total;
        }
      }
    }
    const double expected = static_cast<double>(total) / bins;
    double stat = 0;
    for (const auto c : counts) {
      stat += (c - expected) * (c - expected) / expected;
    }
    const boost::math::chi_squared dist(bins - 1);
    CHECK(stat < boost::math::quantile(boost::math::complement(dist, 0.01)));
  }

  TEST_CASE("preconditions")
  {
    auto rng = RngState::from_u64(35);
    CHECK_THROWS_AS(trap_gen(4, Modulus(1000), GaussParam(4.0), rng), ModulusError);
    CHECK_THROWS_AS(trap_gen(4, Modulus(1 << 10), GaussParam(3.0), rng), ValidationError);
    const auto [tm, td] = trap_gen(4, Modulus(1 << 10), GaussParam(4.0), rng);
    CHECK(min_preimage_width(td) == doctest::Approx(1.2 * 8.0 * td.s1));
    CHECK_THROWS_AS(PreimageSampler(tm, td, GaussParam(min_preimage_width(td) * 0.9)), ValidationError);
  }

  TEST_CASE("preimages are exact")
  {
    auto rng = RngState::from_u64(36);
    const auto [tm, td] = trap_gen(8, q32, GaussParam(4.0), rng);
    const PreimageSampler sampler(tm, td, GaussParam(safe_width(td)));
    for (int t = 0; t < 100; ++t) {
      const auto y = uniform_vector(q32, 8, rng);
      const auto x = sampler.sample(y, rng);
      REQUIRE(x.size() == 512);
      REQUIRE(mat_vec_mul(tm.a, x) == y);
    }
    const ZqVector zero(q32, 8);
    const auto k = sample_pre(tm, td, zero, GaussParam(safe_width(td)), rng);
    CHECK(mat_vec_mul(tm.a, k) == zero);
    CHECK(std::any_of(k.begin(), k.end(), [](std::int64_t x) { return x != 0; }));
  }

  TEST_CASE("preimage norm and first moment over 10^4 samples")
  {
    auto rng = RngState::from_u64(37);
    const auto [tm, td] = trap_gen(8, q32, GaussParam(4.0), rng);
    const double s = safe_width(td);
    const PreimageSampler sampler(tm, td, GaussParam(s));
    const int trials = 10'000;
    int within = 0;
    std::vector<long double> sums(tm.width(), 0);
    for (int t = 0; t < trials; ++t) {
      const auto x = sampler.sample(uniform_vector(q32, 8, rng), rng);
      std::int64_t inf = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        inf = std::max(inf, std::abs(x[i]));
        sums[i] += x[i];
      }
      within += static_cast<double>(inf) <= 4.0 * s ? 1 : 0;
    }
    CHECK(within >= 9900);
    for (const auto sum : sums) {
      CHECK(std::abs(static_cast<double>(sum / trials)) <= 0.1 * s);
    }
  }
}
