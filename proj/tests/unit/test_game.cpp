#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "mafe/errors.hpp"
#include "mafe/game.hpp"
#include "oracles.hpp"

using namespace mafe;
using namespace mafe::testing;

namespace {

constexpr int universe = 8;

AuthoritySet from_mask(unsigned mask)
{
  AuthoritySet out;
  for (int i = 0; i < universe; ++i) {
    if ((mask >> i) & 1U) {
      out.insert("x" + std::to_string(i));
    }
  }
  return out;
}

// Plain bitmask restatement of the query classification.
QueryType reference_class(unsigned corrupt, unsigned challenge, unsigned attrs, const std::vector<std::uint64_t>& u0,
                          const std::vector<std::uint64_t>& u1, const std::vector<std::uint64_t>& v, std::uint64_t b1,
                          std::uint64_t q)
{
  if (((attrs | corrupt) & challenge) != challenge) {
    return QueryType::type_i;
  }
  mpz_class gap = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    gap += (to_mpz(u0[i]) - to_mpz(u1[i])) * to_mpz(v[i]);
  }
  mpz_class r = gap % to_mpz(q);
  if (r < 0) {
    r += to_mpz(q);
  }
  if (2 * r > to_mpz(q)) {
    r -= to_mpz(q);
  }
  return abs(r) <= to_mpz(b1) ? QueryType::type_ii : QueryType::inadmissible;
}

const GlobalParams& noisy_gp()
{
  static const GlobalParams gp = global_setup(Profile{});
  return gp;
}

std::vector<std::uint64_t> unit_except(std::size_t n, std::size_t i, std::uint64_t x)
{
  std::vector<std::uint64_t> v(n, 0);
  v[i] = x;
  return v;
}

} // namespace

TEST_SUITE("game")
{
  TEST_CASE("classification agrees with a bitmask reference on 10^4 random instances")
  {
    const Modulus q(1 << 16);
    auto rng = RngState::from_u64(70);
    int seen[4] = { 0, 0, 0, 0 };
    for (int t = 0; t < 10'000; ++t) {
      const auto full = (1U << universe) - 1;
      const auto corrupt = static_cast<unsigned>(rng.uniform_below(1U << universe));
      const unsigned honest = full & ~corrupt;
      const auto attrs = static_cast<unsigned>(rng.uniform_below(1U << universe)) & honest;
      const auto challenge = static_cast<unsigned>(rng.uniform_below(1U << universe));
      std::vector<std::uint64_t> u0(4);
      std::vector<std::uint64_t> u1(4);
      std::vector<std::uint64_t> v(4);
      for (std::size_t i = 0; i < 4; ++i) {
        u0[i] = rng.uniform_below(q.value());
        // Small differences make Type II reachable.
        u1[i] = q.add(u0[i], q.from_signed(static_cast<std::int64_t>(rng.uniform_below(5)) - 2));
        v[i] = rng.uniform_below(4) == 0 ? rng.uniform_below(q.value()) : rng.uniform_below(3);
      }
      const std::uint64_t b1 = rng.uniform_below(8);
      const GameSetup setup{ from_mask(corrupt), from_mask(honest), from_mask(challenge), ZqVector(q, u0),
                             ZqVector(q, u1),    b1 };
      const Query query{ GlobalId{}, from_mask(attrs), ZqVector(q, v) };
      const auto got = classify_query(setup, query);
      REQUIRE(got == reference_class(corrupt, challenge, attrs, u0, u1, v, b1, q.value()));
      ++seen[static_cast<int>(got)];
    }
    CHECK(seen[1] > 100);
    CHECK(seen[2] > 100);
    CHECK(seen[3] > 100);
  }

  TEST_CASE("queries must come from honest authorities")
  {
    const auto setup = small_game(noisy_gp());
    const Query q{ GlobalId{}, { "c1" }, ZqVector(noisy_gp().q(), 8) };
    CHECK_THROWS_AS(classify_query(setup, q), ValidationError);
    const auto report = check_admissible(setup, std::vector<Query>{ q });
    CHECK_FALSE(report.admissible);
    CHECK(report.query_index == 0);
  }

  TEST_CASE("setup violations")
  {
    auto s = small_game(noisy_gp());
    CHECK(setup_violation(s).empty());
    s.honest.insert("c1");
    CHECK_FALSE(setup_violation(s).empty());
    s = small_game(noisy_gp());
    s.challenge_attrs = { "c1" };
    CHECK_FALSE(setup_violation(s).empty());
    s = small_game(noisy_gp());
    s.challenge_attrs.insert("zz");
    CHECK_FALSE(setup_violation(s).empty());
    CHECK_FALSE(check_admissible(s, {}).admissible);
    CHECK_FALSE(check_admissible(s, {}).query_index.has_value());
  }

  TEST_CASE("admissibility reports the first offending query")
  {
    const auto& gp = noisy_gp();
    const auto setup = small_game(gp);
    const auto gid = GlobalId::from_label("g");
    const Query type_i{ gid, { "h2" }, ZqVector(gp.q(), unit_except(8, 0, 7)) };
    const Query type_ii{ gid, { "h1" }, ZqVector(gp.q(), unit_except(8, 1, 7)) };
    const Query bad{ gid, { "h1", "h2" }, ZqVector(gp.q(), unit_except(8, 0, 1)) };
    CHECK(classify_query(setup, type_i) == QueryType::type_i);
    CHECK(classify_query(setup, type_ii) == QueryType::type_ii);
    CHECK(classify_query(setup, bad) == QueryType::inadmissible);
    CHECK(record_query(setup, bad).classification == QueryType::inadmissible);
    CHECK(check_admissible(setup, std::vector<Query>{ type_i, type_ii }).admissible);
    const auto r = check_admissible(setup, std::vector<Query>{ type_i, type_ii, bad });
    CHECK_FALSE(r.admissible);
    CHECK(r.query_index == 2);
    const auto dup = check_admissible(setup, std::vector<Query>{ type_ii, type_i, Query{ gid, { "h2" }, type_ii.v } });
    CHECK_FALSE(dup.admissible);
    CHECK(dup.query_index == 2);
    CHECK(std::string(query_type_name(QueryType::type_ii)) == "TypeII");
  }

  TEST_CASE("honest challenger transcripts")
  {
    const auto& gp = noisy_gp();
    const auto setup = small_game(gp);
    const auto gid = GlobalId::from_label("q");
    const std::vector<Query> queries = { Query{ gid, { "h1" }, ZqVector(gp.q(), unit_except(8, 1, 3)) },
                                         Query{ gid, { "h1", "h2" }, ZqVector(gp.q(), unit_except(8, 2, 9)) } };
    auto r0 = RngState::from_u64(71);
    auto r1 = RngState::from_u64(71);
    auto r2 = RngState::from_u64(71);
    const auto t0 = run_honest_game(gp, setup, queries, 0, r0);
    const auto t1 = run_honest_game(gp, setup, queries, 1, r1);
    CHECK(t1 == run_honest_game(gp, setup, queries, 1, r2));

    CHECK(t0.pks.size() == 3);
    REQUIRE(t0.corrupt_msks.size() == 1);
    CHECK(t0.corrupt_msks[0].aid == "c1");
    CHECK(t0.shares.size() == 3);
    for (const auto& share : t0.shares) {
      const auto pk = std::find_if(t0.pks.begin(), t0.pks.end(), [&](const auto& p) { return p.aid == share.aid; });
      REQUIRE(pk != t0.pks.end());
      CHECK(verify_share(gp, *pk, share));
    }
    REQUIRE(t0.oracle_table.size() == 2);
    for (const auto& e : t0.oracle_table) {
      CHECK(e.r == gp.oracle()(e.gid, e.v));
    }
    CHECK(t0.challenge.attr_set == std::vector<AuthorityId>{ "c1", "h1" });

    // Only the plaintext differs between the two worlds, and only through c3.
    CHECK(t0.pks == t1.pks);
    CHECK(t0.shares == t1.shares);
    CHECK(t0.oracle_table == t1.oracle_table);
    CHECK(t0.challenge.c1 == t1.challenge.c1);
    CHECK(t0.challenge.c2 == t1.challenge.c2);
    const std::uint64_t q = gp.q().value();
    std::vector<std::uint64_t> expected(256, 0);
    for (unsigned j = 0; j < 32; ++j) {
      // (u0 - u1)[0] = -1
      expected[j] = mod_reduce(-(mpz_class(1) << j), q);
    }
    std::vector<std::uint64_t> diff(256);
    for (std::size_t i = 0; i < 256; ++i) {
      diff[i] = mod_reduce(to_mpz(t0.challenge.c3[i]) - to_mpz(t1.challenge.c3[i]), q);
    }
    CHECK(diff == expected);

    CHECK_THROWS_AS(run_honest_game(gp, setup, queries, 2, r0), ValidationError);
    auto bad = queries;
    bad.push_back(Query{ gid, { "h1" }, ZqVector(gp.q(), unit_except(8, 0, 1)) });
    CHECK_THROWS_AS(run_honest_game(gp, setup, bad, 0, r0), ValidationError);
  }

  TEST_CASE("Type II decryptions differ by at most B1 + 2 B0 across worlds")
  {
    const auto& gp = noisy_gp();
    auto setup = small_game(gp);
    setup.b1 = 5;
    const std::uint64_t q = gp.q().value();
    auto public_rng = RngState::from_u64(72);
    const VectorGenerator gen = [&](RngState& r) {
      std::vector<std::uint64_t> v(8);
      for (auto& x : v) {
        x = r.uniform_below(q);
      }
      v[0] = r.uniform_below(11);
      return ZqVector(gp.q(), v);
    };
    const auto gid = GlobalId::from_label("adv");
    const auto queries = generate_type_ii_queries(setup, gid, { "h1" }, gen, 8, public_rng);
    REQUIRE_FALSE(queries.empty());
    for (const auto& qr : queries) {
      CHECK(classify_query(setup, qr) == QueryType::type_ii);
    }
    std::vector<std::uint64_t> gammas[2];
    for (std::uint8_t beta = 0; beta < 2; ++beta) {
      auto rng = RngState::from_u64(73);
      const auto t = run_honest_game(gp, setup, queries, beta, rng);
      auto adv = RngState::from_u64(74);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        const std::vector<std::uint64_t> v(queries[i].v.entries().begin(), queries[i].v.entries().end());
        const auto& c1_pk = *std::find_if(t.pks.begin(), t.pks.end(), [](const auto& p) { return p.aid == "c1"; });
        std::vector<FunctionalKeyShare> shares = { t.shares[i], keygen(gp, c1_pk, t.corrupt_msks[0], gid, v, adv) };
        gammas[beta].push_back(decrypt(gp, shares, gid, v, t.challenge));
      }
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
      CHECK(centered_distance(gammas[0][i], gammas[1][i], q) <= setup.b1 + 2 * gp.b0());
    }
  }
}
