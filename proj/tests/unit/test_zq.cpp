#include <doctest.h>

#include "mafe/errors.hpp"
#include "mafe/random.hpp"
#include "mafe/zq.hpp"
#include "oracles.hpp"

using namespace mafe;
using mafe::testing::zqv;
using mafe::testing::schoolbook_dot;
using mafe::testing::schoolbook_mat_mul;

TEST_SUITE("zq")
{
  TEST_CASE("modulus bookkeeping")
  {
    CHECK(Modulus(17).bits() == 5);
    CHECK(Modulus(16).bits() == 4);
    CHECK(Modulus(16).is_power_of_two());
    CHECK_FALSE(Modulus(13).is_power_of_two());
    CHECK(Modulus(std::uint64_t{ 1 } << 62).bits() == 62);
    CHECK_THROWS_AS(Modulus(2), ModulusError);
    CHECK_THROWS_AS(Modulus((std::uint64_t{ 1 } << 62) + 1), ModulusError);
    CHECK(Modulus(13).from_signed(-1) == 12);
    CHECK(Modulus(16).from_signed(-17) == 15);
  }

  TEST_CASE("identity times M is M")
  {
    const Modulus q(17);
    const ZqMatrix m(q, 2, 2, { 3, 16, 0, 9 });
    CHECK(mat_mul(ZqMatrix::identity(q, 2), m) == m);
  }

  TEST_CASE("1x1 product")
  {
    const Modulus q(13);
    CHECK(mat_mul(ZqMatrix(q, 1, 1, { 5 }), ZqMatrix(q, 1, 1, { 7 }))(0, 0) == 9);
  }

  TEST_CASE("mat_mul matches a big-integer schoolbook product")
  {
    auto rng = RngState::from_u64(11);
    for (const std::uint64_t qv : { std::uint64_t{ 1 } << 16, std::uint64_t{ 1 } << 62, (std::uint64_t{ 1 } << 61) - 1 }) {
      const Modulus q(qv);
      for (const std::size_t d : { 1, 2, 4, 8, 16 }) {
        for (int t = 0; t < 100; ++t) {
          const auto a = uniform_matrix(q, d, d, rng);
          const auto b = uniform_matrix(q, d, d, rng);
          const auto c = mat_mul(a, b);
          const auto want = schoolbook_mat_mul(a.entries(), b.entries(), d, d, d, qv);
          REQUIRE(std::equal(want.begin(), want.end(), c.entries().begin()));
        }
      }
    }
  }

  TEST_CASE("mat_mul is associative")
  {
    auto rng = RngState::from_u64(12);
    const Modulus q((std::uint64_t{ 1 } << 61) - 1);
    for (int t = 0; t < 20; ++t) {
      const auto a = uniform_matrix(q, 3, 5, rng);
      const auto b = uniform_matrix(q, 5, 4, rng);
      const auto c = uniform_matrix(q, 4, 2, rng);
      CHECK(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
    }
  }

  TEST_CASE("mat_mul rejects mismatched operands")
  {
    CHECK_THROWS_AS(mat_mul(ZqMatrix(Modulus(17), 2, 3), ZqMatrix(Modulus(17), 2, 3)), DimensionError);
    CHECK_THROWS_AS(mat_mul(ZqMatrix(Modulus(17), 2, 2), ZqMatrix(Modulus(19), 2, 2)), ModulusError);
  }

  TEST_CASE("vec_mat_mul")
  {
    auto rng = RngState::from_u64(13);
    const Modulus q(std::uint64_t{ 1 } << 32);
    const auto a = uniform_matrix(q, 4, 6, rng);
    CHECK(vec_mat_mul(ZqVector(q, 4), a) == ZqVector(q, 6));

    ZqVector e1(q, 4);
    e1.set(0, 1);
    const auto row = vec_mat_mul(e1, a);
    CHECK(std::equal(row.entries().begin(), row.entries().end(), a.row(0).begin()));

    for (int t = 0; t < 50; ++t) {
      const auto s = uniform_vector(q, 4, rng);
      const auto got = vec_mat_mul(s, a);
      const auto want = schoolbook_mat_mul(s.entries(), a.entries(), 1, 4, 6, q.value());
      CHECK(std::equal(want.begin(), want.end(), got.entries().begin()));
    }
    CHECK_THROWS_AS(vec_mat_mul(ZqVector(q, 3), a), DimensionError);
  }

  TEST_CASE("mat_vec_mul with signed vectors")
  {
    auto rng = RngState::from_u64(14);
    const Modulus q(std::uint64_t{ 1 } << 20);
    const auto a = uniform_matrix(q, 3, 7, rng);
    const SignedVector x = { -5, 3, 0, 1000, -1, 7, -100000 };
    const auto got = mat_vec_mul(a, x);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(got[i] == schoolbook_dot(a.row(i), x, q.value()));
    }
  }

  TEST_CASE("center")
  {
    CHECK(center(3, Modulus(17)) == 3);
    CHECK(center(16, Modulus(17)) == -1);
    CHECK(center(8, Modulus(16)) == 8);
    CHECK(center(9, Modulus(16)) == -7);
    for (const std::uint64_t qv : { std::uint64_t{ 17 }, std::uint64_t{ 16 }, std::uint64_t{ 1 } << 32 }) {
      const Modulus q(qv);
      auto rng = RngState::from_u64(qv);
      for (int t = 0; t < 1000; ++t) {
        const std::uint64_t x = rng.uniform_below(qv);
        const std::int64_t c = center(x, q);
        CHECK(q.from_signed(c) == x);
        CHECK(2 * (c < 0 ? -c : c) <= static_cast<std::int64_t>(qv));
      }
    }
  }

  TEST_CASE("inner_product")
  {
    const Modulus q(101);
    CHECK(inner_product(zqv(q, { 1, 2 }), zqv(q, { 3, 4 })) == 11);
    CHECK(inner_product(zqv(q, { 1, 2 }), ZqVector(q, 2)) == 0);
    CHECK_THROWS_AS(inner_product(ZqVector(q, 2), ZqVector(q, 3)), DimensionError);

    auto rng = RngState::from_u64(15);
    const Modulus big((std::uint64_t{ 1 } << 62) - 57);
    for (int t = 0; t < 100; ++t) {
      const auto u = uniform_vector(big, 32, rng);
      const auto v = uniform_vector(big, 32, rng);
      CHECK(inner_product(u, v) == schoolbook_dot(u.entries(), v.entries(), big.value()));
    }
  }

  TEST_CASE("vectors reject non-canonical entries")
  {
    CHECK_THROWS_AS(ZqVector(Modulus(17), { 1, 17 }), ValidationError);
    CHECK_THROWS_AS(ZqMatrix(Modulus(17), 1, 2, { 1 }), DimensionError);
  }
}
