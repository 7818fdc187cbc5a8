#include "mafe/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "mafe/errors.hpp"
#include "mafe/gadget.hpp"

namespace mafe {

namespace {

constexpr int trap_gen_attempts = 8;

std::size_t checked_m(const Profile& profile)
{
  if (profile.n == 0) {
    throw ValidationError("n must be positive");
  }
  if (profile.log_q < 2 || profile.log_q > 62) {
    throw ValidationError("log q must lie in [2, 62], got " + std::to_string(profile.log_q));
  }
  return profile.n * profile.log_q;
}

// High-probability upper estimate of s1([R; I]) for an m_bar x w matrix R with entries of
// standard deviation sigma: 1 + sigma^2 (sqrt(m_bar) + sqrt(w) + 6)^2 bounds the top eigenvalue of T^T T.
double estimate_s1(double s_td, std::size_t m_bar, std::size_t w)
{
  const double sigma = s_td / std::sqrt(2.0 * std::numbers::pi);
  const double spread = sigma * (std::sqrt(static_cast<double>(m_bar)) + std::sqrt(static_cast<double>(w)) + 6.0);
  return std::sqrt(1.0 + spread * spread);
}

std::string to_decimal(u128 x)
{
  if (x == 0) {
    return "0";
  }
  std::string out;
  while (x > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void check_matrix(const ZqMatrix& x, const GlobalParams& gp, std::size_t rows, std::size_t cols, const char* name)
{
  if (!(x.modulus() == gp.q())) {
    throw ModulusError(std::string(name) + " uses a different modulus");
  }
  if (x.rows() != rows || x.cols() != cols) {
    throw DimensionError(std::string(name) + " has shape " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void check_public_key(const GlobalParams& gp, const AuthorityPublicKey& pk)
{
  check_matrix(pk.a.a, gp, gp.n(), gp.m_a(), "A");
  check_matrix(pk.b, gp, gp.n(), gp.m_prime(), "B");
  check_matrix(pk.p, gp, gp.n(), gp.m(), "P");
  if (pk.a.m_bar != gp.m() || pk.a.w != gp.m()) {
    throw DimensionError("A for authority '" + pk.aid + "' has an unexpected block split");
  }
}

ZqVector with_noise(const ZqVector& x, const GlobalParams& gp, bool zero_noise, RngState& rng)
{
  if (zero_noise) {
    return x;
  }
  const SignedVector e = sample_z_vector(gp.chi_table(), x.size(), rng);
  return add(x, ZqVector::from_signed(gp.q(), e));
}

} // namespace

const char* mode_name(Mode mode)
{
  return mode == Mode::exact ? "exact" : "noisy";
}

GlobalParams::GlobalParams(const Profile& profile)
  : profile_(profile)
  , q_(std::uint64_t{ 1 } << (checked_m(profile) / profile.n))
  , m_(profile.n * profile.log_q)
  , chi_(profile.chi)
  , chi_prime_(profile.chi_prime)
  , s_td_(profile.s_td)
  , s1_bound_(estimate_s1(profile.s_td, m_, m_))
  , key_width_(std::max(profile.chi, preimage_width_slack * gadget_sampler_width * s1_bound_))
{
}

GlobalParams GlobalParams::setup(const Profile& profile)
{
  if (profile.lambda == 0) {
    throw ValidationError("lambda must be positive");
  }
  if (profile.max_authorities == 0) {
    throw ValidationError("max_authorities must be positive");
  }
  GlobalParams gp(profile);

  const double chi0 = std::sqrt(static_cast<double>(gp.m_));
  if (profile.chi < chi0) {
    throw ValidationError("chi >= chi0(n, q) = sqrt(n log q) violated: chi = " + std::to_string(profile.chi) +
                          ", sqrt(n log q) = " + std::to_string(chi0));
  }
  if (profile.s_td < 4.0) {
    throw ValidationError("trapdoor width s_td must be at least 4");
  }
  if (profile.m_prime <= 6 * gp.m_) {
    gp.warnings_.push_back("m' > 6 n log q does not hold (m' = " + std::to_string(profile.m_prime) +
                           ", 6 n log q = " + std::to_string(6 * gp.m_) + ")");
  }

  gp.oracle_ = std::make_shared<const Oracle>(OracleConfig{ gp.chi_prime_, profile.m_prime, profile.oracle_tag });
  gp.chi_table_ = std::make_shared<const CdtSampler>(gp.chi_);
  gp.b0_ = compute_b0(gp, profile.max_authorities);

  if (profile.p) {
    const std::uint64_t p = *profile.p;
    if (p < 2 || p >= gp.q_.value()) {
      throw ValidationError("plaintext modulus p must satisfy 2 <= p < q, got " + std::to_string(p));
    }
    const u128 rhs = static_cast<u128>(profile.n) * p * p + static_cast<u128>(2) * p * gp.b0_;
    if (!(static_cast<u128>(gp.q_.value()) > rhs)) {
      throw ValidationError("exactness condition q > n p^2 + 2 p B0 violated: q = " + std::to_string(gp.q_.value()) +
                            ", n p^2 + 2 p B0 = " + to_decimal(rhs));
    }
  }
  return gp;
}

std::uint64_t compute_b0(std::uint64_t lambda, double chi, std::size_t m, double chi_prime, std::size_t m_prime,
                         std::size_t m_a, std::size_t l)
{
  const auto root = static_cast<long double>(std::ceil(std::sqrt(static_cast<long double>(lambda))));
  const long double lam = static_cast<long double>(lambda);
  const long double x = static_cast<long double>(chi);
  const long double xp = static_cast<long double>(chi_prime);
  const long double b0 = root * x * static_cast<long double>(m) + lam * x * xp * static_cast<long double>(m_prime) +
                         lam * x * x * static_cast<long double>(m_a) * static_cast<long double>(l);
  const long double rounded = std::ceil(b0);
  if (!(rounded < 0x1.0p63L)) {
    throw ValidationError("B0 does not fit in 63 bits");
  }
  return static_cast<std::uint64_t>(rounded);
}

std::uint64_t compute_b0(const GlobalParams& gp, std::size_t l)
{
  return compute_b0(gp.lambda(), gp.chi().s(), gp.m(), gp.chi_prime().s(), gp.m_prime(), gp.m_a(), l);
}

AuthorityKeyPair auth_setup(const GlobalParams& gp, const AuthorityId& aid, RngState& rng)
{
  if (aid.empty()) {
    throw ValidationError("authority id must be nonempty");
  }
  for (int attempt = 0; attempt < trap_gen_attempts; ++attempt) {
    auto [tm, td] = trap_gen(gp.n(), gp.q(), gp.s_td(), rng);
    if (min_preimage_width(td) > gp.key_width().s()) {
      continue;
    }
    std::shared_ptr<const PreimageSampler> sampler;
    try {
      sampler = std::make_shared<const PreimageSampler>(tm, td, gp.key_width());
    } catch (const ValidationError&) {
      continue;
    }
    ZqMatrix b = uniform_matrix(gp.q(), gp.n(), gp.m_prime(), rng);
    ZqMatrix p = uniform_matrix(gp.q(), gp.n(), gp.m(), rng);
    return AuthorityKeyPair{ AuthorityPublicKey{ aid, std::move(tm), std::move(b), std::move(p) },
                             AuthoritySecretKey{ aid, std::move(td), std::move(sampler) } };
  }
  throw ValidationError("trapdoor generation exceeded the key width " + std::to_string(gp.key_width().s()) + " in " +
                        std::to_string(trap_gen_attempts) + " attempts");
}

void prepare_secret_key(const GlobalParams& gp, const AuthorityPublicKey& pk, AuthoritySecretKey& msk)
{
  if (pk.aid != msk.aid) {
    throw ValidationError("secret key of '" + msk.aid + "' paired with public key of '" + pk.aid + "'");
  }
  check_public_key(gp, pk);
  msk.sampler = std::make_shared<const PreimageSampler>(pk.a, msk.td, gp.key_width());
}

ZqVector key_vector(const GlobalParams& gp, std::span<const std::uint64_t> v)
{
  if (v.size() != gp.n()) {
    throw DimensionError("key vector has length " + std::to_string(v.size()) + ", expected " + std::to_string(gp.n()));
  }
  const std::uint64_t bound = gp.p().value_or(gp.q().value());
  for (const auto x : v) {
    if (x >= bound) {
      throw ValidationError("key vector entry " + std::to_string(x) + " is not below " + std::to_string(bound));
    }
  }
  // Exact mode: Z_p entries lifted canonically into Z_q.
  return ZqVector(gp.q(), std::vector<std::uint64_t>(v.begin(), v.end()));
}

ZqVector keygen_target(const GlobalParams& gp, const AuthorityPublicKey& pk, const GlobalId& gid, const ZqVector& v)
{
  const SignedVector bits = gadget_decompose(v);
  const SignedVector r = gp.oracle()(gid, v);
  return add(mat_vec_mul(pk.p, bits), mat_vec_mul(pk.b, r));
}

FunctionalKeyShare keygen(const GlobalParams& gp, const AuthorityPublicKey& pk, const AuthoritySecretKey& msk,
                          const GlobalId& gid, std::span<const std::uint64_t> v, RngState& rng)
{
  if (pk.aid != msk.aid) {
    throw ValidationError("secret key of '" + msk.aid + "' paired with public key of '" + pk.aid + "'");
  }
  check_public_key(gp, pk);
  ZqVector vq = key_vector(gp, v);
  const ZqVector target = keygen_target(gp, pk, gid, vq);

  std::shared_ptr<const PreimageSampler> sampler = msk.sampler;
  if (!sampler || !(sampler->width() == gp.key_width())) {
    sampler = std::make_shared<const PreimageSampler>(pk.a, msk.td, gp.key_width());
  }
  return FunctionalKeyShare{ pk.aid, gid, std::move(vq), sampler->sample(target, rng) };
}

bool verify_share(const GlobalParams& gp, const AuthorityPublicKey& pk, const FunctionalKeyShare& share)
{
  if (share.aid != pk.aid || share.k.size() != gp.m_a() || share.v.size() != gp.n() ||
      !(share.v.modulus() == gp.q())) {
    return false;
  }
  try {
    check_public_key(gp, pk);
  } catch (const Error&) {
    return false;
  }
  return mat_vec_mul(pk.a.a, share.k) == keygen_target(gp, pk, share.gid, share.v);
}

Ciphertext encrypt(const GlobalParams& gp, std::span<const AuthorityPublicKey> pks, std::span<const std::uint64_t> u,
                   Mode mode, RngState& rng, const EncryptOptions& options)
{
  if (mode != gp.mode()) {
    throw ValidationError(std::string("encryption mode '") + mode_name(mode) + "' does not match the parameters ('" +
                          mode_name(gp.mode()) + "')");
  }
  if (pks.empty()) {
    throw ValidationError("attribute set must be nonempty");
  }
  if (u.size() != gp.n()) {
    throw DimensionError("plaintext has length " + std::to_string(u.size()) + ", expected " + std::to_string(gp.n()));
  }
  const Modulus& q = gp.q();

  std::vector<const AuthorityPublicKey*> ordered;
  for (const auto& pk : pks) {
    check_public_key(gp, pk);
    ordered.push_back(&pk);
  }
  std::sort(ordered.begin(), ordered.end(), [](const auto* x, const auto* y) { return x->aid < y->aid; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->aid == ordered[i - 1]->aid) {
      throw ValidationError("duplicate authority '" + ordered[i]->aid + "' in the attribute set");
    }
  }

  // u~ = u (noisy) or round(q u / p) (exact); c3 carries u~^T G.
  std::vector<std::uint64_t> embedded(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mode == Mode::exact) {
      embedded[i] = mod_switch_up(u[i], *gp.p(), q);
    } else {
      if (u[i] >= q.value()) {
        throw ValidationError("plaintext entry " + std::to_string(u[i]) + " is not below q");
      }
      embedded[i] = u[i];
    }
  }

  std::vector<AuthorityId> attr_set;
  std::map<AuthorityId, ZqVector> c1;
  ZqVector c2(q, gp.m_prime());
  ZqVector c3(q, gp.m());
  for (const auto* pk : ordered) {
    const ZqVector s = uniform_vector(q, gp.n(), rng);
    attr_set.push_back(pk->aid);
    c1.emplace(pk->aid, with_noise(vec_mat_mul(s, pk->a.a), gp, options.zero_noise_unsafe, rng));
    c2 = add(c2, vec_mat_mul(s, pk->b));
    c3 = add(c3, vec_mat_mul(s, pk->p));
  }
  c2 = with_noise(c2, gp, options.zero_noise_unsafe, rng);
  c3 = with_noise(c3, gp, options.zero_noise_unsafe, rng);

  const unsigned k = q.bits();
  ZqVector ug(q, gp.m());
  for (std::size_t i = 0; i < gp.n(); ++i) {
    for (unsigned j = 0; j < k; ++j) {
      ug.set(i * k + j, q.mul(embedded[i], std::uint64_t{ 1 } << j));
    }
  }
  return Ciphertext{ mode, std::move(attr_set), std::move(c1), std::move(c2), add(c3, ug) };
}

std::uint64_t decrypt_raw(const GlobalParams& gp, const Ciphertext& ct, const GlobalId& gid, const ZqVector& v,
                          const std::map<AuthorityId, const SignedVector*>& keys)
{
  const Modulus& q = gp.q();
  if (ct.c2.size() != gp.m_prime() || ct.c3.size() != gp.m() || ct.c1.size() != ct.attr_set.size()) {
    throw DimensionError("ciphertext shape does not match the parameters");
  }
  std::vector<AuthorityId> missing;
  for (const auto& aid : ct.attr_set) {
    if (!keys.contains(aid)) {
      missing.push_back(aid);
    }
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& aid : missing) {
      names += (names.empty() ? "'" : ", '") + aid + "'";
    }
    throw PolicyError("policy not satisfied: no key share for " + names);
  }

  std::uint64_t gamma = inner_product(ct.c3, gadget_decompose(v));
  gamma = q.add(gamma, inner_product(ct.c2, gp.oracle()(gid, v)));
  for (const auto& aid : ct.attr_set) {
    const auto c1 = ct.c1.find(aid);
    if (c1 == ct.c1.end()) {
      throw DimensionError("ciphertext lacks the c1 component of '" + aid + "'");
    }
    const SignedVector& k = *keys.at(aid);
    if (k.size() != gp.m_a() || c1->second.size() != gp.m_a()) {
      throw DimensionError("key share or c1 of '" + aid + "' has the wrong length");
    }
    gamma = q.sub(gamma, inner_product(c1->second, k));
  }
  return gamma;
}

std::uint64_t decrypt(const GlobalParams& gp, std::span<const FunctionalKeyShare> shares, const GlobalId& gid,
                      std::span<const std::uint64_t> v, const Ciphertext& ct)
{
  if (ct.mode != gp.mode()) {
    throw ValidationError(std::string("ciphertext mode '") + mode_name(ct.mode) + "' does not match the parameters");
  }
  const ZqVector vq = key_vector(gp, v);
  std::map<AuthorityId, const SignedVector*> keys;
  for (const auto& share : shares) {
    if (share.gid != gid || !(share.v == vq)) {
      throw ValidationError("key share of '" + share.aid + "' was issued for a different (gid, v)");
    }
    if (!keys.emplace(share.aid, &share.k).second) {
      throw ValidationError("more than one key share for authority '" + share.aid + "'");
    }
  }
  const std::uint64_t gamma = decrypt_raw(gp, ct, gid, vq, keys);
  return ct.mode == Mode::exact ? mod_switch_down(gamma, gp.q(), *gp.p()) : gamma;
}

} // namespace mafe
