#include "cog/latent_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "cog/error.hpp"

namespace cog {

namespace {

static_assert(std::endian::native == std::endian::little,
              "COGL encoding assumes a little-endian host");

constexpr std::array<char, 4> kMagic = {'C', 'O', 'G', 'L'};

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::span<const std::byte> bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

}  // namespace

std::string encode_latents(std::span<const Latent> latents, Dtype dtype) {
  if (dtype != Dtype::Float64 && dtype != Dtype::Float32) {
    throw BadDtype("write: unsupported dtype " + std::to_string(static_cast<int>(dtype)));
  }
  const std::uint64_t dim = latents.empty() ? 0 : latents.front().dim();
  for (const auto& x : latents) require_dim(x, dim, "latent");
  const std::size_t width = dtype == Dtype::Float64 ? 8 : 4;

  std::string out;
  out.reserve(kLatentHeaderSize + latents.size() * dim * width);
  out.append(kMagic.data(), kMagic.size());
  put<std::uint16_t>(out, kLatentFormatVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
  put<std::uint8_t>(out, 0);
  put<std::uint64_t>(out, dim);
  put<std::uint64_t>(out, latents.size());
  put<std::uint32_t>(out, 0);
  for (const auto& x : latents) {
    for (double v : x.values()) {
      if (dtype == Dtype::Float64) {
        put<double>(out, v);
      } else {
        put<float>(out, static_cast<float>(v));
      }
    }
  }
  return out;
}

std::vector<Latent> decode_latents(std::span<const std::byte> bytes) {
  if (bytes.size() < kLatentHeaderSize) {
    throw Truncated("COGL header needs 28 bytes, file has " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw BadMagic("not a COGL file (bad magic)");
  }
  const auto version = get<std::uint16_t>(bytes, 4);
  if (version != kLatentFormatVersion) {
    throw BadVersion("unsupported COGL version " + std::to_string(version));
  }
  const auto dtype = get<std::uint8_t>(bytes, 6);
  if (dtype != 1 && dtype != 2) throw BadDtype("unknown COGL dtype " + std::to_string(dtype));
  if (const auto flags = get<std::uint8_t>(bytes, 7); flags != 0) {
    throw BadFlags("unsupported COGL flags " + std::to_string(flags));
  }
  const auto dim = get<std::uint64_t>(bytes, 8);
  const auto count = get<std::uint64_t>(bytes, 16);
  if (get<std::uint32_t>(bytes, 24) != 0) throw BadReserved("COGL reserved bytes are not zero");

  const std::uint64_t width = dtype == 1 ? 8 : 4;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (dim != 0 && count > kMax / dim) throw DimensionOverflow("COGL dim * count overflows");
  const std::uint64_t values = dim * count;
  if (values > (kMax - kLatentHeaderSize) / width) {
    throw DimensionOverflow("COGL payload size overflows");
  }
  if (count > 0 && dim == 0) throw DimensionOverflow("COGL file declares latents of dimension 0");

  const std::uint64_t expected = kLatentHeaderSize + values * width;
  if (bytes.size() < expected) {
    throw Truncated("COGL payload truncated: expected " + std::to_string(expected) +
                    " bytes, file has " + std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw TrailingBytes("COGL file has " + std::to_string(bytes.size() - expected) +
                        " bytes after the payload");
  }

  std::vector<Latent> out;
  out.reserve(count);
  std::size_t offset = kLatentHeaderSize;
  for (std::uint64_t k = 0; k < count; ++k) {
    std::vector<double> x(dim);
    for (auto& v : x) {
      v = dtype == 1 ? get<double>(bytes, offset) : static_cast<double>(get<float>(bytes, offset));
      offset += width;
    }
    out.emplace_back(std::move(x));
  }
  return out;
}

std::vector<Latent> decode_latents(const std::string& bytes) {
  return decode_latents(std::as_bytes(std::span(bytes.data(), bytes.size())));
}

void write_latents(const std::filesystem::path& path, std::span<const Latent> latents,
                   Dtype dtype) {
  const auto bytes = encode_latents(latents, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Latent> read_latents(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return decode_latents(bytes);
}

void write_basis(const std::filesystem::path& path, const SubspaceBasis& basis) {
  write_latents(path, basis.latents(), Dtype::Float64);
}

SubspaceBasis read_basis(const std::filesystem::path& path) {
  const auto latents = read_latents(path);
  if (latents.empty()) throw InvalidArgument("basis file " + path.string() + " holds no latents");
  return SubspaceBasis::build(latents);
}

}  // namespace cog
