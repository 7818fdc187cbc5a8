#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <unistd.h>

#include <doctest.h>

#include "fixtures.hpp"
#include "mafe/errors.hpp"
#include "mafe/random.hpp"
#include "mafe/serialize.hpp"
#include "oracles.hpp"

using namespace mafe;
using namespace mafe::testing;

namespace {

const DeskArtifacts& desk()
{
  static const DeskArtifacts a = make_desk_artifacts(1);
  return a;
}

std::string digest_hex(const Bytes& b)
{
  std::array<std::uint8_t, 32> d{};
  shake256(b, d);
  return to_hex(d);
}

// Runs the reader matching the header kind.
void parse_any(const Bytes& b, const GlobalParams& gp)
{
  switch (peek_kind(b)) {
    case ArtifactKind::gp:
      deserialize_gp(b);
      break;
    case ArtifactKind::pk:
      deserialize_pk(b, gp);
      break;
    case ArtifactKind::msk:
      deserialize_msk(b, gp);
      break;
    case ArtifactKind::sk:
      deserialize_sk(b, gp);
      break;
    case ArtifactKind::ct:
      deserialize_ct(b, gp);
      break;
    case ArtifactKind::transcript:
      deserialize_transcript(b, gp);
      break;
  }
}

std::filesystem::path scratch_dir()
{
  auto dir = std::filesystem::temp_directory_path() / ("mafe-serialize-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST_SUITE("serialize")
{
  TEST_CASE("round trips")
  {
    const auto& a = desk();
    const auto gp = deserialize_gp(serialize(a.gp));
    CHECK(gp == a.gp);
    CHECK(gp.b0() == a.gp.b0());
    CHECK(gp_digest(gp) == gp_digest(a.gp));
    CHECK(deserialize_pk(serialize(a.gp, a.authorities[1].pk), a.gp) == a.authorities[1].pk);
    auto msk = deserialize_msk(serialize(a.gp, a.authorities[1].msk), a.gp);
    CHECK(msk == a.authorities[1].msk);
    CHECK(msk.sampler == nullptr);
    CHECK(deserialize_sk(serialize(a.gp, a.share), a.gp) == a.share);
    CHECK(deserialize_ct(serialize(a.gp, a.ct), a.gp) == a.ct);
    CHECK(deserialize_transcript(serialize(a.gp, a.transcript), a.gp) == a.transcript);

    // A reloaded master key still issues valid shares.
    prepare_secret_key(a.gp, a.authorities[1].pk, msk);
    auto rng = RngState::from_u64(80);
    const std::vector<std::uint64_t> v(8, 2);
    const auto share = keygen(a.gp, a.authorities[1].pk, msk, GlobalId::from_label("r"), v, rng);
    CHECK(verify_share(a.gp, a.authorities[1].pk, share));
  }

  TEST_CASE("noisy parameters round trip too")
  {
    const auto gp = global_setup(Profile{});
    const auto back = deserialize_gp(serialize(gp));
    CHECK(back == gp);
    CHECK_FALSE(back.p().has_value());
    CHECK(gp_digest(gp) != gp_digest(desk().gp));
  }

  TEST_CASE("header fields are validated")
  {
    for (const auto& [name, bytes] : serialize_all(desk())) {
      CAPTURE(name);
      for (std::size_t i = 0; i < 8; ++i) {
        Bytes bad = bytes;
        bad[i] ^= 0x40;
        CHECK_THROWS_AS(parse_any(bad, desk().gp), FormatError);
      }
      Bytes wrong_kind = bytes;
      wrong_kind[5] = wrong_kind[5] == 2 ? 3 : 2;
      CHECK_THROWS_AS(parse_any(wrong_kind, desk().gp), FormatError);
    }
    CHECK_THROWS_WITH_AS(peek_kind(Bytes{ 'M', 'A', 'F' }), doctest::Contains("truncated"), FormatError);
  }

  TEST_CASE("truncation and trailing bytes are rejected")
  {
    for (const auto& [name, bytes] : serialize_all(desk())) {
      CAPTURE(name);
      for (const std::size_t cut : { std::size_t{ 0 }, std::size_t{ 7 }, std::size_t{ 8 }, std::size_t{ 40 },
                                     bytes.size() / 2, bytes.size() - 1 }) {
        const Bytes head(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        CHECK_THROWS_AS(parse_any(head, desk().gp), FormatError);
      }
      Bytes longer = bytes;
      longer.push_back(0);
      CHECK_THROWS_AS(parse_any(longer, desk().gp), FormatError);
    }
  }

  TEST_CASE("artifacts are bound to their global parameters")
  {
    Profile other = exact_desk_profile();
    other.p = 8;
    const auto gp2 = global_setup(other);
    for (const auto& [name, bytes] : serialize_all(desk())) {
      if (name == "gp") {
        continue;
      }
      CAPTURE(name);
      CHECK_THROWS_WITH_AS(parse_any(bytes, gp2), doctest::Contains("different global parameters"), FormatError);
    }
  }

  TEST_CASE("out-of-range entries are rejected")
  {
    Bytes ct = serialize(desk().gp, desk().ct);
    // Last c3 entry: set its high word so the value exceeds q = 2^32.
    ct[ct.size() - 1] = 0xff;
    CHECK_THROWS_AS(deserialize_ct(ct, desk().gp), FormatError);
  }

  TEST_CASE("fixed seed artifacts match the stored digests")
  {
    std::ifstream in(std::filesystem::path(MAFE_GOLDEN_DIR) / "desk-seed-1.txt");
    REQUIRE(in.good());
    std::map<std::string, std::string> golden;
    std::string name;
    std::string hex;
    while (in >> name >> hex) {
      golden[name] = hex;
    }
    const auto all = serialize_all(desk());
    REQUIRE(golden.size() == all.size());
    for (const auto& [n, bytes] : all) {
      CAPTURE(n);
      CHECK(digest_hex(bytes) == golden.at(n));
    }
  }

  TEST_CASE("file round trip")
  {
    const auto dir = scratch_dir();
    const auto path = dir / "ct.bin";
    const Bytes bytes = serialize(desk().gp, desk().ct);
    write_file_atomic(path, bytes);
    write_file_atomic(path, bytes);
    CHECK(read_file(path) == bytes);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) {
      ++files;
    }
    CHECK(files == 1);
    CHECK_THROWS_AS(read_file(dir / "missing.bin"), IoError);
    CHECK_THROWS_AS(write_file_atomic(dir / "no" / "such" / "dir" / "x", bytes), IoError);
    std::filesystem::remove_all(dir);
  }
}
