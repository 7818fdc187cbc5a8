#include "mafe/serialize.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

#include <unistd.h>

#include "mafe/errors.hpp"
#include "mafe/random.hpp"

namespace mafe {

namespace {

constexpr std::array<std::uint8_t, 4> magic = { 'M', 'A', 'F', 'E' };
constexpr std::size_t header_size = 8;

class Writer
{
public:
  void u8(std::uint8_t x) { out_.push_back(x); }
  void u64(std::uint64_t x)
  {
    for (int i = 0; i < 8; ++i) {
      out_.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    }
  }
  void i64(std::int64_t x) { u64((static_cast<std::uint64_t>(x) << 1) ^ static_cast<std::uint64_t>(x >> 63)); }
  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }
  void raw(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void str(const std::string& s)
  {
    u64(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void zq(const ZqVector& v)
  {
    u64(v.size());
    for (const auto e : v.entries()) {
      u64(e);
    }
  }
  void matrix(const ZqMatrix& m)
  {
    u64(m.rows());
    u64(m.cols());
    for (const auto e : m.entries()) {
      u64(e);
    }
  }
  void signed_vec(std::span<const std::int64_t> v)
  {
    u64(v.size());
    for (const auto e : v) {
      i64(e);
    }
  }

  Bytes take() { return std::move(out_); }

private:
  Bytes out_;
};

class Reader
{
public:
  explicit Reader(std::span<const std::uint8_t> in)
    : in_(in)
  {
  }

  std::span<const std::uint8_t> raw(std::size_t n, const char* what)
  {
    if (in_.size() - pos_ < n) {
      throw FormatError(std::string("truncated input while reading ") + what);
    }
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8(const char* what) { return raw(1, what)[0]; }
  std::uint64_t u64(const char* what)
  {
    const auto b = raw(8, what);
    std::uint64_t x = 0;
    for (int i = 7; i >= 0; --i) {
      x = (x << 8) | b[static_cast<std::size_t>(i)];
    }
    return x;
  }
  std::int64_t i64(const char* what)
  {
    const std::uint64_t z = u64(what);
    return static_cast<std::int64_t>(z >> 1) ^ -static_cast<std::int64_t>(z & 1);
  }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
  std::size_t count(const char* what, std::size_t min_item_bytes)
  {
    const std::uint64_t n = u64(what);
    if (min_item_bytes > 0 && n > (in_.size() - pos_) / min_item_bytes) {
      throw FormatError(std::string("length of ") + what + " exceeds the remaining input");
    }
    return static_cast<std::size_t>(n);
  }
  std::string str(const char* what)
  {
    const auto b = raw(count(what, 1), what);
    return std::string(b.begin(), b.end());
  }
  ZqVector zq(const Modulus& q, std::size_t expected, const char* what)
  {
    const std::size_t n = count(what, 8);
    if (n != expected) {
      throw FormatError(std::string(what) + " has length " + std::to_string(n) + ", expected " +
                        std::to_string(expected));
    }
    std::vector<std::uint64_t> e(n);
    for (auto& x : e) {
      x = u64(what);
      if (x >= q.value()) {
        throw FormatError(std::string(what) + " holds an entry outside [0, q)");
      }
    }
    return ZqVector(q, std::move(e));
  }
  ZqMatrix matrix(const Modulus& q, std::size_t rows, std::size_t cols, const char* what)
  {
    const std::uint64_t r = u64(what);
    const std::uint64_t c = u64(what);
    if (r != rows || c != cols) {
      throw FormatError(std::string(what) + " has shape " + std::to_string(r) + "x" + std::to_string(c) +
                        ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (rows * cols > (in_.size() - pos_) / 8) {
      throw FormatError(std::string("truncated input while reading ") + what);
    }
    std::vector<std::uint64_t> e(rows * cols);
    for (auto& x : e) {
      x = u64(what);
      if (x >= q.value()) {
        throw FormatError(std::string(what) + " holds an entry outside [0, q)");
      }
    }
    return ZqMatrix(q, rows, cols, std::move(e));
  }
  SignedVector signed_vec(std::size_t expected, const char* what)
  {
    const std::size_t n = count(what, 8);
    if (n != expected) {
      throw FormatError(std::string(what) + " has length " + std::to_string(n) + ", expected " +
                        std::to_string(expected));
    }
    SignedVector out(n);
    for (auto& x : out) {
      x = i64(what);
    }
    return out;
  }

  void finish() const
  {
    if (pos_ != in_.size()) {
      throw FormatError("trailing bytes after the artifact body");
    }
  }

private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, ArtifactKind kind)
{
  w.raw(magic);
  w.u8(format_version);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u8(xof_id_shake256);
  w.u8(0);
}

Bytes gp_body(const GlobalParams& gp)
{
  const Profile& pr = gp.profile();
  Writer w;
  w.u64(pr.lambda);
  w.u64(pr.n);
  w.u64(pr.log_q);
  w.u64(pr.m_prime);
  w.f64(pr.chi);
  w.f64(pr.chi_prime);
  w.f64(pr.s_td);
  w.u8(pr.p ? 1 : 0);
  w.u64(pr.p.value_or(0));
  w.u64(pr.max_authorities);
  w.str(pr.oracle_tag);
  // Derived values, checked on read.
  w.u64(gp.q().value());
  w.u64(gp.m());
  w.u64(gp.m_a());
  w.f64(gp.key_width().s());
  w.u64(gp.b0());
  return w.take();
}

Writer start(const GlobalParams& gp, ArtifactKind kind)
{
  Writer w;
  write_header(w, kind);
  w.raw(gp_digest(gp));
  return w;
}

Reader open(std::span<const std::uint8_t> bytes, ArtifactKind kind, const GlobalParams* gp)
{
  const ArtifactKind found = peek_kind(bytes);
  if (found != kind) {
    throw FormatError(std::string("expected a ") + artifact_kind_name(kind) + " artifact, found " +
                      artifact_kind_name(found));
  }
  Reader r(bytes);
  r.raw(header_size, "header");
  if (gp != nullptr) {
    const auto d = r.raw(32, "parameter digest");
    const GpDigest expected = gp_digest(*gp);
    if (!std::equal(d.begin(), d.end(), expected.begin())) {
      throw FormatError(std::string(artifact_kind_name(kind)) +
                        " artifact was produced under different global parameters");
    }
  }
  return r;
}

void put_pk(Writer& w, const AuthorityPublicKey& pk)
{
  w.str(pk.aid);
  w.u64(pk.a.m_bar);
  w.u64(pk.a.w);
  w.matrix(pk.a.a);
  w.matrix(pk.b);
  w.matrix(pk.p);
}

AuthorityPublicKey get_pk(Reader& r, const GlobalParams& gp)
{
  AuthorityId aid = r.str("authority id");
  const std::uint64_t m_bar = r.u64("m_bar");
  const std::uint64_t w = r.u64("w");
  if (m_bar != gp.m() || w != gp.m()) {
    throw FormatError("public key block split does not match the parameters");
  }
  ZqMatrix a = r.matrix(gp.q(), gp.n(), gp.m_a(), "A");
  ZqMatrix b = r.matrix(gp.q(), gp.n(), gp.m_prime(), "B");
  ZqMatrix p = r.matrix(gp.q(), gp.n(), gp.m(), "P");
  return AuthorityPublicKey{ std::move(aid), TrapMatrix{ std::move(a), gp.m(), gp.m() }, std::move(b), std::move(p) };
}

void put_msk(Writer& w, const AuthoritySecretKey& msk)
{
  w.str(msk.aid);
  w.u64(msk.td.r.rows);
  w.u64(msk.td.r.cols);
  for (const auto e : msk.td.r.entries) {
    w.i64(e);
  }
  w.f64(msk.td.s1);
}

AuthoritySecretKey get_msk(Reader& r, const GlobalParams& gp)
{
  AuthorityId aid = r.str("authority id");
  const std::uint64_t rows = r.u64("R rows");
  const std::uint64_t cols = r.u64("R cols");
  if (rows != gp.m() || cols != gp.m()) {
    throw FormatError("trapdoor shape does not match the parameters");
  }
  SignedMatrix rm{ gp.m(), gp.m(), std::vector<std::int64_t>(gp.m() * gp.m()) };
  for (auto& e : rm.entries) {
    e = r.i64("R");
  }
  const double s1 = r.f64("s1");
  return AuthoritySecretKey{ std::move(aid), Trapdoor{ std::move(rm), s1 }, nullptr };
}

void put_share(Writer& w, const FunctionalKeyShare& sk)
{
  w.str(sk.aid);
  w.raw(sk.gid.bytes());
  w.zq(sk.v);
  w.signed_vec(sk.k);
}

FunctionalKeyShare get_share(Reader& r, const GlobalParams& gp)
{
  AuthorityId aid = r.str("authority id");
  const auto g = r.raw(GlobalId::size, "gid");
  GlobalId::Bytes gid{};
  std::copy(g.begin(), g.end(), gid.begin());
  ZqVector v = r.zq(gp.q(), gp.n(), "key vector");
  SignedVector k = r.signed_vec(gp.m_a(), "key share");
  return FunctionalKeyShare{ std::move(aid), GlobalId(gid), std::move(v), std::move(k) };
}

void put_ct(Writer& w, const Ciphertext& ct)
{
  w.u8(static_cast<std::uint8_t>(ct.mode));
  w.u64(ct.attr_set.size());
  for (const auto& aid : ct.attr_set) {
    w.str(aid);
    w.zq(ct.c1.at(aid));
  }
  w.zq(ct.c2);
  w.zq(ct.c3);
}

Ciphertext get_ct(Reader& r, const GlobalParams& gp)
{
  const std::uint8_t mode_byte = r.u8("mode");
  if (mode_byte > 1) {
    throw FormatError("unknown ciphertext mode " + std::to_string(mode_byte));
  }
  const auto mode = static_cast<Mode>(mode_byte);
  const std::size_t count = r.count("attribute set", 16);
  std::vector<AuthorityId> attrs;
  std::map<AuthorityId, ZqVector> c1;
  for (std::size_t i = 0; i < count; ++i) {
    AuthorityId aid = r.str("authority id");
    if (!attrs.empty() && !(attrs.back() < aid)) {
      throw FormatError("attribute set is not sorted and duplicate free");
    }
    c1.emplace(aid, r.zq(gp.q(), gp.m_a(), "c1"));
    attrs.push_back(std::move(aid));
  }
  ZqVector c2 = r.zq(gp.q(), gp.m_prime(), "c2");
  ZqVector c3 = r.zq(gp.q(), gp.m(), "c3");
  return Ciphertext{ mode, std::move(attrs), std::move(c1), std::move(c2), std::move(c3) };
}

} // namespace

const char* artifact_kind_name(ArtifactKind kind)
{
  switch (kind) {
    case ArtifactKind::gp:
      return "gp";
    case ArtifactKind::pk:
      return "pk";
    case ArtifactKind::msk:
      return "msk";
    case ArtifactKind::sk:
      return "sk";
    case ArtifactKind::ct:
      return "ct";
    case ArtifactKind::transcript:
      return "transcript";
  }
  return "unknown";
}

GpDigest gp_digest(const GlobalParams& gp)
{
  GpDigest out{};
  shake256(gp_body(gp), out);
  return out;
}

ArtifactKind peek_kind(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < header_size) {
    throw FormatError("truncated input while reading header");
  }
  if (!std::equal(magic.begin(), magic.end(), bytes.begin())) {
    throw FormatError("bad magic: not a MAFE artifact");
  }
  if (bytes[4] != format_version) {
    throw FormatError("unsupported format version " + std::to_string(bytes[4]));
  }
  if (bytes[5] < 1 || bytes[5] > 6) {
    throw FormatError("unknown artifact kind " + std::to_string(bytes[5]));
  }
  if (bytes[6] != xof_id_shake256) {
    throw FormatError("unknown XOF id " + std::to_string(bytes[6]));
  }
  if (bytes[7] != 0) {
    throw FormatError("reserved header byte is not zero");
  }
  return static_cast<ArtifactKind>(bytes[5]);
}

Bytes serialize(const GlobalParams& gp)
{
  Writer w;
  write_header(w, ArtifactKind::gp);
  w.raw(gp_body(gp));
  return w.take();
}

Bytes serialize(const GlobalParams& gp, const AuthorityPublicKey& pk)
{
  Writer w = start(gp, ArtifactKind::pk);
  put_pk(w, pk);
  return w.take();
}

Bytes serialize(const GlobalParams& gp, const AuthoritySecretKey& msk)
{
  Writer w = start(gp, ArtifactKind::msk);
  put_msk(w, msk);
  return w.take();
}

Bytes serialize(const GlobalParams& gp, const FunctionalKeyShare& sk)
{
  Writer w = start(gp, ArtifactKind::sk);
  put_share(w, sk);
  return w.take();
}

Bytes serialize(const GlobalParams& gp, const Ciphertext& ct)
{
  Writer w = start(gp, ArtifactKind::ct);
  put_ct(w, ct);
  return w.take();
}

Bytes serialize(const GlobalParams& gp, const Transcript& t)
{
  Writer w = start(gp, ArtifactKind::transcript);
  w.u8(t.beta);
  w.u64(t.pks.size());
  for (const auto& pk : t.pks) {
    put_pk(w, pk);
  }
  w.u64(t.corrupt_msks.size());
  for (const auto& msk : t.corrupt_msks) {
    put_msk(w, msk);
  }
  w.u64(t.shares.size());
  for (const auto& sk : t.shares) {
    put_share(w, sk);
  }
  put_ct(w, t.challenge);
  w.u64(t.oracle_table.size());
  for (const auto& e : t.oracle_table) {
    w.raw(e.gid.bytes());
    w.zq(e.v);
    w.signed_vec(e.r);
  }
  return w.take();
}

GlobalParams deserialize_gp(std::span<const std::uint8_t> bytes)
{
  Reader r = open(bytes, ArtifactKind::gp, nullptr);
  Profile pr;
  pr.lambda = r.u64("lambda");
  pr.n = r.u64("n");
  const std::uint64_t log_q = r.u64("log q");
  if (log_q > 62) {
    throw FormatError("log q out of range");
  }
  pr.log_q = static_cast<unsigned>(log_q);
  pr.m_prime = r.u64("m'");
  pr.chi = r.f64("chi");
  pr.chi_prime = r.f64("chi'");
  pr.s_td = r.f64("s_td");
  const std::uint8_t has_p = r.u8("p flag");
  const std::uint64_t p = r.u64("p");
  if (has_p > 1) {
    throw FormatError("invalid p flag");
  }
  if (has_p == 1) {
    pr.p = p;
  }
  pr.max_authorities = r.u64("max authorities");
  pr.oracle_tag = r.str("oracle tag");
  const std::uint64_t q = r.u64("q");
  const std::uint64_t m = r.u64("m");
  const std::uint64_t m_a = r.u64("m_A");
  const double key_width = r.f64("key width");
  const std::uint64_t b0 = r.u64("B0");
  r.finish();

  std::optional<GlobalParams> gp;
  try {
    gp.emplace(global_setup(pr));
  } catch (const ValidationError& e) {
    throw FormatError(std::string("stored parameters are invalid: ") + e.what());
  }
  if (gp->q().value() != q || gp->m() != m || gp->m_a() != m_a || gp->key_width().s() != key_width || gp->b0() != b0) {
    throw FormatError("stored derived parameters are inconsistent with the profile");
  }
  return std::move(*gp);
}

AuthorityPublicKey deserialize_pk(std::span<const std::uint8_t> bytes, const GlobalParams& gp)
{
  Reader r = open(bytes, ArtifactKind::pk, &gp);
  AuthorityPublicKey pk = get_pk(r, gp);
  r.finish();
  return pk;
}

AuthoritySecretKey deserialize_msk(std::span<const std::uint8_t> bytes, const GlobalParams& gp)
{
  Reader r = open(bytes, ArtifactKind::msk, &gp);
  AuthoritySecretKey msk = get_msk(r, gp);
  r.finish();
  return msk;
}

FunctionalKeyShare deserialize_sk(std::span<const std::uint8_t> bytes, const GlobalParams& gp)
{
  Reader r = open(bytes, ArtifactKind::sk, &gp);
  FunctionalKeyShare sk = get_share(r, gp);
  r.finish();
  return sk;
}

Ciphertext deserialize_ct(std::span<const std::uint8_t> bytes, const GlobalParams& gp)
{
  Reader r = open(bytes, ArtifactKind::ct, &gp);
  Ciphertext ct = get_ct(r, gp);
  r.finish();
  return ct;
}

Transcript deserialize_transcript(std::span<const std::uint8_t> bytes, const GlobalParams& gp)
{
  Reader r = open(bytes, ArtifactKind::transcript, &gp);
  const std::uint8_t beta = r.u8("beta");
  if (beta > 1) {
    throw FormatError("beta must be 0 or 1");
  }
  std::vector<AuthorityPublicKey> pks;
  const std::size_t n_pks = r.count("public keys", 24);
  for (std::size_t i = 0; i < n_pks; ++i) {
    pks.push_back(get_pk(r, gp));
  }
  std::vector<AuthoritySecretKey> msks;
  const std::size_t n_msks = r.count("secret keys", 24);
  for (std::size_t i = 0; i < n_msks; ++i) {
    msks.push_back(get_msk(r, gp));
  }
  std::vector<FunctionalKeyShare> shares;
  const std::size_t n_shares = r.count("key shares", 48);
  for (std::size_t i = 0; i < n_shares; ++i) {
    shares.push_back(get_share(r, gp));
  }
  Ciphertext challenge = get_ct(r, gp);
  std::vector<OracleEntry> table;
  const std::size_t n_entries = r.count("oracle table", 48);
  for (std::size_t i = 0; i < n_entries; ++i) {
    const auto g = r.raw(GlobalId::size, "gid");
    GlobalId::Bytes gid{};
    std::copy(g.begin(), g.end(), gid.begin());
    ZqVector v = r.zq(gp.q(), gp.n(), "oracle input");
    SignedVector out = r.signed_vec(gp.m_prime(), "oracle output");
    table.push_back(OracleEntry{ GlobalId(gid), std::move(v), std::move(out) });
  }
  r.finish();
  return Transcript{ beta, std::move(pks), std::move(msks), std::move(shares), std::move(challenge), std::move(table) };
}

Bytes read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read error on '" + path.string() + "'");
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write error on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

} // namespace mafe
