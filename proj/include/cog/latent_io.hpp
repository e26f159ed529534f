#pragma once

// COGL latent files.
//
//   offset  size  field
//        0     4  magic "COGL"
//        4     2  version, u16 LE = 1
//        6     1  dtype, u8: 1 = f64 LE, 2 = f32 LE
//        7     1  flags, u8 = 0
//        8     8  dim, u64 LE
//       16     8  count, u64 LE
//       24     4  reserved, must be zero
//       28        payload: count * dim values, latent-major
//
// The file must end exactly after the payload. f32 payloads are widened to
// f64 on load.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cog/latent.hpp"
#include "cog/subspace.hpp"

namespace cog {

enum class Dtype : std::uint8_t { Float64 = 1, Float32 = 2 };

inline constexpr std::size_t kLatentHeaderSize = 28;
inline constexpr std::uint16_t kLatentFormatVersion = 1;

std::string encode_latents(std::span<const Latent> latents, Dtype dtype = Dtype::Float64);
std::vector<Latent> decode_latents(std::span<const std::byte> bytes);
std::vector<Latent> decode_latents(const std::string& bytes);

/// Throws DimensionMismatch for ragged input, IoError on write failure.
void write_latents(const std::filesystem::path& path, std::span<const Latent> latents,
                   Dtype dtype = Dtype::Float64);
/// Throws a FormatError subclass for malformed files.
std::vector<Latent> read_latents(const std::filesystem::path& path);

/// A basis file is a COGL file of the spanning latents; loading rebuilds the
/// factorization, which is deterministic.
void write_basis(const std::filesystem::path& path, const SubspaceBasis& basis);
SubspaceBasis read_basis(const std::filesystem::path& path);

}  // namespace cog
