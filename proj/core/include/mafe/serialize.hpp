#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mafe/game.hpp"
#include "mafe/scheme.hpp"

namespace mafe {

// Binary artifact format, version 1.
//
// Header (8 bytes): "MAFE" | version | kind | xof_id | reserved (0).
// Every artifact other than gp continues with the 32-byte SHAKE256 digest of the gp body, then its own
// body. Integers are little-endian u64; Z_q entries are canonical u64; signed vectors are zig-zag
// encoded; doubles are stored as their IEEE-754 bit pattern; strings and lists are u64-length prefixed.
inline constexpr std::uint8_t format_version = 1;

enum class ArtifactKind : std::uint8_t
{
  gp = 1,
  pk = 2,
  msk = 3,
  sk = 4,
  ct = 5,
  transcript = 6,
};

const char* artifact_kind_name(ArtifactKind kind);

using Bytes = std::vector<std::uint8_t>;
using GpDigest = std::array<std::uint8_t, 32>;

GpDigest gp_digest(const GlobalParams& gp);

// Validates the header and returns the kind byte.
ArtifactKind peek_kind(std::span<const std::uint8_t> bytes);

Bytes serialize(const GlobalParams& gp);
Bytes serialize(const GlobalParams& gp, const AuthorityPublicKey& pk);
Bytes serialize(const GlobalParams& gp, const AuthoritySecretKey& msk);
Bytes serialize(const GlobalParams& gp, const FunctionalKeyShare& sk);
Bytes serialize(const GlobalParams& gp, const Ciphertext& ct);
Bytes serialize(const GlobalParams& gp, const Transcript& transcript);

GlobalParams deserialize_gp(std::span<const std::uint8_t> bytes);
AuthorityPublicKey deserialize_pk(std::span<const std::uint8_t> bytes, const GlobalParams& gp);
// The returned key has no SamplePre cache; see prepare_secret_key.
AuthoritySecretKey deserialize_msk(std::span<const std::uint8_t> bytes, const GlobalParams& gp);
FunctionalKeyShare deserialize_sk(std::span<const std::uint8_t> bytes, const GlobalParams& gp);
Ciphertext deserialize_ct(std::span<const std::uint8_t> bytes, const GlobalParams& gp);
Transcript deserialize_transcript(std::span<const std::uint8_t> bytes, const GlobalParams& gp);

Bytes read_file(const std::filesystem::path& path);
// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace mafe
