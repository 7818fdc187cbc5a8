#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mafe/gauss.hpp"
#include "mafe/oracle.hpp"
#include "mafe/random.hpp"
#include "mafe/trapdoor.hpp"
#include "mafe/zq.hpp"

namespace mafe {

// Parameter choices fed to global_setup. The defaults are the desk profile.
struct Profile
{
  std::uint64_t lambda = 16;
  std::size_t n = 8;
  unsigned log_q = 32;
  std::size_t m_prime = 2048;
  double chi = 20.0;
  double chi_prime = 20.0;
  double s_td = 4.0;
  // Plaintext modulus; present selects the noiseless (mod-switched) scheme.
  std::optional<std::uint64_t> p;
  // Bound on |attribute set| used for B0 and the exactness check.
  std::size_t max_authorities = 3;
  std::string oracle_tag = std::string(default_oracle_tag);

  bool operator==(const Profile&) const = default;
};

enum class Mode : std::uint8_t
{
  noisy = 0,
  exact = 1,
};

const char* mode_name(Mode mode);

// Public parameters, validated on construction.
//
// m = n log q is the gadget width (P, G, c3); m_A = 2m is the trapdoor width (A, c1, k).
// key_width is the SamplePre width used by keygen: max(chi, 1.2 * s_g * s1_bound), with
// s1_bound an upper estimate of s1([R; I]) for R ~ D_{Z, s_td}^{m x m}.
class GlobalParams
{
public:
  static GlobalParams setup(const Profile& profile);

  const Profile& profile() const { return profile_; }
  std::uint64_t lambda() const { return profile_.lambda; }
  std::size_t n() const { return profile_.n; }
  const Modulus& q() const { return q_; }
  std::size_t m() const { return m_; }
  std::size_t m_a() const { return 2 * m_; }
  std::size_t m_prime() const { return profile_.m_prime; }
  const GaussParam& chi() const { return chi_; }
  const GaussParam& chi_prime() const { return chi_prime_; }
  const GaussParam& s_td() const { return s_td_; }
  double s1_bound() const { return s1_bound_; }
  const GaussParam& key_width() const { return key_width_; }
  std::optional<std::uint64_t> p() const { return profile_.p; }
  Mode mode() const { return profile_.p ? Mode::exact : Mode::noisy; }
  std::size_t max_authorities() const { return profile_.max_authorities; }
  // B0 at L = max_authorities.
  std::uint64_t b0() const { return b0_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  const OracleConfig& oracle_config() const { return oracle_->config(); }
  const Oracle& oracle() const { return *oracle_; }
  const CdtSampler& chi_table() const { return *chi_table_; }

  bool operator==(const GlobalParams& other) const { return profile_ == other.profile_; }

private:
  explicit GlobalParams(const Profile& profile);

  Profile profile_;
  Modulus q_;
  std::size_t m_;
  GaussParam chi_;
  GaussParam chi_prime_;
  GaussParam s_td_;
  double s1_bound_;
  GaussParam key_width_;
  std::uint64_t b0_ = 0;
  std::vector<std::string> warnings_;
  std::shared_ptr<const Oracle> oracle_;
  std::shared_ptr<const CdtSampler> chi_table_;
};

inline GlobalParams global_setup(const Profile& profile) { return GlobalParams::setup(profile); }

// ceil(sqrt(lambda)) chi m + lambda chi chi' m' + lambda chi^2 m_A L, rounded up.
std::uint64_t compute_b0(std::uint64_t lambda, double chi, std::size_t m, double chi_prime, std::size_t m_prime,
                         std::size_t m_a, std::size_t l);
std::uint64_t compute_b0(const GlobalParams& gp, std::size_t l);

using AuthorityId = std::string;

struct AuthorityPublicKey
{
  AuthorityId aid;
  TrapMatrix a;
  ZqMatrix b;
  ZqMatrix p;

  bool operator==(const AuthorityPublicKey&) const = default;
};

struct AuthoritySecretKey
{
  AuthorityId aid;
  Trapdoor td;
  // Cached SamplePre factorization; rebuilt on demand when absent.
  std::shared_ptr<const PreimageSampler> sampler;

  bool operator==(const AuthoritySecretKey& other) const { return aid == other.aid && td == other.td; }
};

struct AuthorityKeyPair
{
  AuthorityPublicKey pk;
  AuthoritySecretKey msk;
};

AuthorityKeyPair auth_setup(const GlobalParams& gp, const AuthorityId& aid, RngState& rng);

// Attach a SamplePre cache to msk for use with pk.
void prepare_secret_key(const GlobalParams& gp, const AuthorityPublicKey& pk, AuthoritySecretKey& msk);

struct FunctionalKeyShare
{
  AuthorityId aid;
  GlobalId gid;
  ZqVector v;
  SignedVector k;

  bool operator==(const FunctionalKeyShare&) const = default;
};

// Key vector as an element of Z_q^n; in exact mode every entry must be below p.
ZqVector key_vector(const GlobalParams& gp, std::span<const std::uint64_t> v);

// P G^{-1}(v) + B H(gid, v), the SamplePre target of keygen.
ZqVector keygen_target(const GlobalParams& gp, const AuthorityPublicKey& pk, const GlobalId& gid, const ZqVector& v);

FunctionalKeyShare keygen(const GlobalParams& gp, const AuthorityPublicKey& pk, const AuthoritySecretKey& msk,
                          const GlobalId& gid, std::span<const std::uint64_t> v, RngState& rng);

bool verify_share(const GlobalParams& gp, const AuthorityPublicKey& pk, const FunctionalKeyShare& share);

struct Ciphertext
{
  Mode mode = Mode::noisy;
  // Sorted, duplicate free; c1 has exactly these keys.
  std::vector<AuthorityId> attr_set;
  std::map<AuthorityId, ZqVector> c1;
  ZqVector c2;
  ZqVector c3;

  bool operator==(const Ciphertext&) const = default;
};

struct EncryptOptions
{
  // Sets e1, e2, e3 to zero. Breaks security; exists for structural tests only.
  bool zero_noise_unsafe = false;
};

// Noisy mode: u in Z_q^n. Exact mode: u in Z_p^n. The mode must match gp.
Ciphertext encrypt(const GlobalParams& gp, std::span<const AuthorityPublicKey> pks, std::span<const std::uint64_t> u,
                   Mode mode, RngState& rng, const EncryptOptions& options = {});

// c3^T G^{-1}(v) + c2^T H(gid, v) - sum_{aid in attr_set} c1_aid^T k_aid over Z_q.
std::uint64_t decrypt_raw(const GlobalParams& gp, const Ciphertext& ct, const GlobalId& gid, const ZqVector& v,
                          const std::map<AuthorityId, const SignedVector*>& keys);

// Gamma in Z_q (noisy) or Z_p (exact). Throws PolicyError when a ciphertext authority has no share.
std::uint64_t decrypt(const GlobalParams& gp, std::span<const FunctionalKeyShare> shares, const GlobalId& gid,
                      std::span<const std::uint64_t> v, const Ciphertext& ct);

} // namespace mafe
