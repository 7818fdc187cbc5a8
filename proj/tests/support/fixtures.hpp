#pragma once

// Deterministic desk-profile artifacts shared by the serialization tests and the acceptance suite.

#include <cstdint>
#include <string>
#include <vector>

#include "mafe/game.hpp"
#include "mafe/scheme.hpp"
#include "mafe/serialize.hpp"

namespace mafe::testing {

struct DeskArtifacts
{
  GlobalParams gp;
  std::vector<AuthorityKeyPair> authorities;
  FunctionalKeyShare share;
  Ciphertext ct;
  Transcript transcript;
};

inline Profile exact_desk_profile()
{
  Profile p;
  p.p = 16;
  return p;
}

inline GameSetup small_game(const GlobalParams& gp)
{
  std::vector<std::uint64_t> u0(gp.n(), 1);
  std::vector<std::uint64_t> u1(gp.n(), 1);
  u1[0] = 2;
  return GameSetup{ { "c1" }, { "h1", "h2" }, { "c1", "h1" }, ZqVector(gp.q(), u0), ZqVector(gp.q(), u1), 0 };
}

inline DeskArtifacts make_desk_artifacts(std::uint64_t seed)
{
  const GlobalParams gp = global_setup(exact_desk_profile());
  auto rng = RngState::from_u64(seed);
  std::vector<AuthorityKeyPair> kps;
  std::vector<AuthorityPublicKey> pks;
  for (const char* aid : { "auth-1", "auth-2", "auth-3" }) {
    kps.push_back(auth_setup(gp, aid, rng));
    pks.push_back(kps.back().pk);
  }
  const std::vector<std::uint64_t> v = { 1, 2, 3, 4, 5, 6, 7, 8 };
  const std::vector<std::uint64_t> u = { 8, 7, 6, 5, 4, 3, 2, 1 };
  FunctionalKeyShare share = keygen(gp, kps[0].pk, kps[0].msk, GlobalId::from_label("alice"), v, rng);
  Ciphertext ct = encrypt(gp, pks, u, Mode::exact, rng);

  const GameSetup setup = small_game(gp);
  std::vector<std::uint64_t> qv(gp.n(), 0);
  qv[1] = 3;
  const std::vector<Query> queries = { Query{ GlobalId::from_label("bob"), { "h1" }, ZqVector(gp.q(), qv) },
                                       Query{ GlobalId::from_label("carol"), { "h2" }, ZqVector(gp.q(), qv) } };
  Transcript t = run_honest_game(gp, setup, queries, 1, rng);
  return DeskArtifacts{ gp, std::move(kps), std::move(share), std::move(ct), std::move(t) };
}

struct NamedArtifact
{
  std::string name;
  Bytes bytes;
};

inline std::vector<NamedArtifact> serialize_all(const DeskArtifacts& a)
{
  return {
    { "gp", serialize(a.gp) },
    { "pk", serialize(a.gp, a.authorities[0].pk) },
    { "msk", serialize(a.gp, a.authorities[0].msk) },
    { "sk", serialize(a.gp, a.share) },
    { "ct", serialize(a.gp, a.ct) },
    { "transcript", serialize(a.gp, a.transcript) },
  };
}

} // namespace mafe::testing
