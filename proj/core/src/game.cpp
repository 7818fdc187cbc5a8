#include "mafe/game.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <string>
#include <utility>

#include "mafe/errors.hpp"

namespace mafe {

namespace {

AuthoritySet set_union(const AuthoritySet& a, const AuthoritySet& b)
{
  AuthoritySet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

AuthoritySet set_intersection(const AuthoritySet& a, const AuthoritySet& b)
{
  AuthoritySet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool is_subset(const AuthoritySet& a, const AuthoritySet& b)
{
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string describe(const AuthoritySet& s)
{
  std::string out = "{";
  for (const auto& aid : s) {
    out += (out.size() > 1 ? ", " : "") + aid;
  }
  return out + "}";
}

std::vector<AuthorityPublicKey> select_pks(const std::vector<AuthorityPublicKey>& pks, const AuthoritySet& attrs)
{
  std::vector<AuthorityPublicKey> out;
  for (const auto& pk : pks) {
    if (attrs.contains(pk.aid)) {
      out.push_back(pk);
    }
  }
  return out;
}

} // namespace

const char* query_type_name(QueryType t)
{
  switch (t) {
    case QueryType::type_i:
      return "TypeI";
    case QueryType::type_ii:
      return "TypeII";
    case QueryType::inadmissible:
      return "Inadmissible";
  }
  return "unknown";
}

QueryType classify_query(const GameSetup& setup, const Query& query)
{
  if (!is_subset(query.attrs, setup.honest)) {
    throw ValidationError("query authorities " + describe(query.attrs) + " are not all honest");
  }
  const AuthoritySet covered = set_intersection(set_union(query.attrs, setup.corrupt), setup.challenge_attrs);
  if (covered != setup.challenge_attrs) {
    return QueryType::type_i;
  }
  const ZqVector diff = sub(setup.u0, setup.u1);
  const std::int64_t gap = diff.modulus().center(inner_product(diff, query.v));
  const auto magnitude = static_cast<std::uint64_t>(gap < 0 ? -gap : gap);
  return magnitude <= setup.b1 ? QueryType::type_ii : QueryType::inadmissible;
}

QueryRecord record_query(const GameSetup& setup, const Query& query)
{
  return QueryRecord{ query, classify_query(setup, query) };
}

std::string setup_violation(const GameSetup& setup)
{
  if (!set_intersection(setup.corrupt, setup.honest).empty()) {
    return "corrupt and honest authority sets intersect";
  }
  if (!is_subset(setup.challenge_attrs, set_union(setup.corrupt, setup.honest))) {
    return "challenge attribute set is not contained in C u N";
  }
  if (set_intersection(setup.challenge_attrs, setup.corrupt) == setup.challenge_attrs) {
    return "challenge attribute set is authorized by the corrupt authorities alone";
  }
  if (setup.u0.size() != setup.u1.size() || !(setup.u0.modulus() == setup.u1.modulus())) {
    return "challenge plaintexts differ in length or modulus";
  }
  return {};
}

AdmissibilityReport check_admissible(const GameSetup& setup, std::span<const Query> queries)
{
  if (auto v = setup_violation(setup); !v.empty()) {
    return AdmissibilityReport{ false, std::nullopt, std::move(v) };
  }
  std::set<std::pair<GlobalId, std::vector<std::uint64_t>>> seen;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Query& q = queries[i];
    if (!is_subset(q.attrs, setup.honest)) {
      return AdmissibilityReport{ false, i, "query authorities " + describe(q.attrs) + " are not all honest" };
    }
    if (q.v.size() != setup.u0.size()) {
      return AdmissibilityReport{ false, i, "key vector length does not match the challenge plaintexts" };
    }
    if (classify_query(setup, q) == QueryType::inadmissible) {
      return AdmissibilityReport{ false, i, "authorized query with |center((u0 - u1)^T v)| > B1" };
    }
    std::vector<std::uint64_t> v(q.v.entries().begin(), q.v.entries().end());
    if (!seen.emplace(q.gid, std::move(v)).second) {
      return AdmissibilityReport{ false, i, "duplicate (gid, v) pair" };
    }
  }
  return {};
}

Transcript run_honest_game(const GlobalParams& gp, const GameSetup& setup, std::span<const Query> queries,
                           std::uint8_t beta, RngState& rng, const GameOptions& options)
{
  if (beta > 1) {
    throw ValidationError("beta must be 0 or 1");
  }
  if (const auto report = check_admissible(setup, queries); !report.admissible) {
    throw ValidationError("inadmissible game: " + report.violation);
  }
  if (setup.u0.size() != gp.n() || !(setup.u0.modulus() == gp.q())) {
    throw DimensionError("challenge plaintexts do not match the parameters");
  }

  RngState key_rng = rng.derive("MAFE/game/authorities");
  RngState share_rng = rng.derive("MAFE/game/shares");
  RngState enc_rng = rng.derive("MAFE/game/challenge");

  std::vector<AuthorityPublicKey> pks;
  std::vector<AuthoritySecretKey> corrupt_msks;
  std::vector<FunctionalKeyShare> shares;
  std::vector<OracleEntry> oracle_table;
  std::map<AuthorityId, AuthoritySecretKey> msks;
  for (const auto& aid : set_union(setup.corrupt, setup.honest)) {
    AuthorityKeyPair kp = auth_setup(gp, aid, key_rng);
    pks.push_back(std::move(kp.pk));
    msks.emplace(aid, std::move(kp.msk));
  }
  for (const auto& aid : setup.corrupt) {
    corrupt_msks.push_back(msks.at(aid));
  }

  std::set<std::pair<GlobalId, std::vector<std::uint64_t>>> tabled;
  for (const auto& q : queries) {
    std::vector<std::uint64_t> v(q.v.entries().begin(), q.v.entries().end());
    if (tabled.emplace(q.gid, v).second) {
      oracle_table.push_back(OracleEntry{ q.gid, q.v, gp.oracle()(q.gid, q.v) });
    }
    for (const auto& pk : pks) {
      if (q.attrs.contains(pk.aid)) {
        shares.push_back(keygen(gp, pk, msks.at(pk.aid), q.gid, v, share_rng));
      }
    }
  }

  const ZqVector& u = beta == 0 ? setup.u0 : setup.u1;
  const std::vector<std::uint64_t> plain(u.entries().begin(), u.entries().end());
  Ciphertext challenge =
    encrypt(gp, select_pks(pks, setup.challenge_attrs), plain, gp.mode(), enc_rng, options.encrypt);
  return Transcript{ beta,
                     std::move(pks),
                     std::move(corrupt_msks),
                     std::move(shares),
                     std::move(challenge),
                     std::move(oracle_table) };
}

std::vector<Query> generate_type_ii_queries(const GameSetup& setup, const GlobalId& gid, const AuthoritySet& attrs,
                                            const VectorGenerator& gen, std::size_t attempts, RngState& public_rng)
{
  std::vector<Query> out;
  for (std::size_t i = 0; i < attempts; ++i) {
    Query q{ gid, attrs, gen(public_rng) };
    if (classify_query(setup, q) == QueryType::type_ii) {
      out.push_back(std::move(q));
    }
  }
  return out;
}

} // namespace mafe
