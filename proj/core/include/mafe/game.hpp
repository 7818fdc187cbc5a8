#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mafe/oracle.hpp"
#include "mafe/random.hpp"
#include "mafe/scheme.hpp"
#include "mafe/zq.hpp"

namespace mafe {

using AuthoritySet = std::set<AuthorityId>;

struct GameSetup
{
  AuthoritySet corrupt;
  AuthoritySet honest;
  AuthoritySet challenge_attrs;
  ZqVector u0;
  ZqVector u1;
  std::uint64_t b1 = 0;

  bool operator==(const GameSetup&) const = default;
};

enum class QueryType : std::uint8_t
{
  type_i = 1,
  type_ii = 2,
  inadmissible = 3,
};

const char* query_type_name(QueryType t);

struct Query
{
  GlobalId gid;
  AuthoritySet attrs;
  ZqVector v;

  bool operator==(const Query&) const = default;
};

struct QueryRecord
{
  Query query;
  QueryType classification;
};

// Type I iff (A u C) n A* is a proper subset of A*; Type II iff it equals A* and
// |center((u0 - u1)^T v)| <= B1; inadmissible otherwise. Throws if A is not inside the honest set.
QueryType classify_query(const GameSetup& setup, const Query& query);

QueryRecord record_query(const GameSetup& setup, const Query& query);

// Empty string when the setup is well formed, otherwise the violated condition.
std::string setup_violation(const GameSetup& setup);

struct AdmissibilityReport
{
  bool admissible = true;
  // Index of the offending query; absent for setup-level violations.
  std::optional<std::size_t> query_index;
  std::string violation;
};

AdmissibilityReport check_admissible(const GameSetup& setup, std::span<const Query> queries);

struct OracleEntry
{
  GlobalId gid;
  ZqVector v;
  SignedVector r;

  bool operator==(const OracleEntry&) const = default;
};

struct Transcript
{
  std::uint8_t beta = 0;
  // Public keys of every authority in C u N, sorted by aid.
  std::vector<AuthorityPublicKey> pks;
  // Secrets of the corrupt authorities, exposed to the adversary.
  std::vector<AuthoritySecretKey> corrupt_msks;
  std::vector<FunctionalKeyShare> shares;
  Ciphertext challenge;
  // One entry per distinct (gid, v), in first-query order.
  std::vector<OracleEntry> oracle_table;

  bool operator==(const Transcript&) const = default;
};

struct GameOptions
{
  EncryptOptions encrypt;
};

// Honest challenger: key pairs for C u N, one keygen per (query, authority), challenge encryption of
// u_beta under A*. Sub-streams are derived per phase, so transcripts for beta = 0 and beta = 1 under the
// same seed share every key and all encryption randomness.
Transcript run_honest_game(const GlobalParams& gp, const GameSetup& setup, std::span<const Query> queries,
                           std::uint8_t beta, RngState& rng, const GameOptions& options = {});

// Caller-supplied source of key vectors, seeded from public randomness.
using VectorGenerator = std::function<ZqVector(RngState&)>;

// Draws up to `attempts` vectors from gen, keeping those that make (gid, attrs, v) a Type II query.
std::vector<Query> generate_type_ii_queries(const GameSetup& setup, const GlobalId& gid, const AuthoritySet& attrs,
                                            const VectorGenerator& gen, std::size_t attempts, RngState& public_rng);

} // namespace mafe
