#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "cog/config.hpp"
#include "cog/error.hpp"
#include "cog/latent_io.hpp"
#include "oracles.hpp"

using namespace cog;

namespace {

std::string sample_file() {
  return encode_latents(std::vector{Latent({1, 2, 3}), Latent({4, 5, 6})}, Dtype::Float64);
}

template <class T>
void poke(std::string& bytes, std::size_t offset, T value) {
  std::memcpy(bytes.data() + offset, &value, sizeof(T));
}

}  // namespace

TEST_CASE("COGL layout") {
  const auto bytes = sample_file();
  CHECK(bytes.size() == 28 + 48);
  CHECK(bytes.substr(0, 4) == "COGL");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[5]) == 0);
  CHECK(static_cast<unsigned char>(bytes[6]) == 1);
  CHECK(static_cast<unsigned char>(bytes[7]) == 0);
  CHECK(static_cast<unsigned char>(bytes[8]) == 3);
  CHECK(static_cast<unsigned char>(bytes[16]) == 2);
  double first;
  std::memcpy(&first, bytes.data() + 28, 8);
  CHECK(first == 1.0);
  double fourth;
  std::memcpy(&fourth, bytes.data() + 28 + 24, 8);
  CHECK(fourth == 4.0);

  const auto f32 = encode_latents(std::vector{Latent({1, 2, 3})}, Dtype::Float32);
  CHECK(f32.size() == 28 + 12);
  CHECK(encode_latents(std::vector<Latent>{}).size() == 28);
  CHECK(decode_latents(encode_latents(std::vector<Latent>{})).empty());
}

TEST_CASE("COGL round trip") {
  std::mt19937_64 rng(1);
  const auto xs = testing::random_latents(rng, 50, 17);
  CHECK(decode_latents(encode_latents(xs)) == xs);

  const auto f32 = decode_latents(encode_latents(xs, Dtype::Float32));
  REQUIRE(f32.size() == xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (std::size_t d = 0; d < 17; ++d)
      CHECK(f32[k][d] == static_cast<double>(static_cast<float>(xs[k][d])));

  const auto path = std::filesystem::temp_directory_path() / "cog_io_roundtrip.cogl";
  write_latents(path, xs);
  CHECK(read_latents(path) == xs);
  std::filesystem::remove(path);
}

TEST_CASE("COGL header validation") {
  {
    auto b = sample_file();
    b[0] = 'X';
    CHECK_THROWS_AS(decode_latents(b), BadMagic);
  }
  {
    auto b = sample_file();
    poke<std::uint16_t>(b, 4, 2);
    CHECK_THROWS_AS(decode_latents(b), BadVersion);
  }
  for (int dtype = 0; dtype < 256; ++dtype) {
    if (dtype == 1 || dtype == 2) continue;
    auto b = sample_file();
    b[6] = static_cast<char>(dtype);
    CHECK_THROWS_AS(decode_latents(b), BadDtype);
  }
  {
    auto b = sample_file();
    b[7] = 1;
    CHECK_THROWS_AS(decode_latents(b), BadFlags);
  }
  {
    auto b = sample_file();
    b[26] = 1;
    CHECK_THROWS_AS(decode_latents(b), BadReserved);
  }
  {
    auto b = sample_file();
    b.pop_back();
    CHECK_THROWS_AS(decode_latents(b), Truncated);
    CHECK_THROWS_AS(decode_latents(b.substr(0, 20)), Truncated);
  }
  {
    auto b = sample_file();
    b.push_back('\0');
    CHECK_THROWS_AS(decode_latents(b), TrailingBytes);
  }
  {
    // Byte-swapped dim / count.
    auto b = sample_file();
    poke<std::uint64_t>(b, 8, 3ULL << 56);
    CHECK_THROWS_AS(decode_latents(b), FormatError);
    auto c = sample_file();
    poke<std::uint64_t>(c, 16, 2ULL << 56);
    CHECK_THROWS_AS(decode_latents(c), FormatError);
  }
  {
    auto b = sample_file();
    poke<std::uint64_t>(b, 8, ~0ULL);
    poke<std::uint64_t>(b, 16, ~0ULL);
    CHECK_THROWS_AS(decode_latents(b), DimensionOverflow);
  }
  {
    auto b = sample_file();
    poke<std::uint64_t>(b, 8, 0);
    CHECK_THROWS_AS(decode_latents(b), DimensionOverflow);
  }
  CHECK_THROWS_AS(read_latents("/nonexistent/dir/file.cogl"), IoError);
}

TEST_CASE("write rejects ragged input") {
  const std::vector<Latent> ragged = {Latent({1, 2}), Latent({1})};
  CHECK_THROWS_AS(encode_latents(ragged), DimensionMismatch);
}

TEST_CASE("basis files rebuild the same basis") {
  std::mt19937_64 rng(2);
  const auto xs = testing::random_latents(rng, 3, 10);
  const auto basis = build_basis(xs);
  const auto path = std::filesystem::temp_directory_path() / "cog_io_basis.cogl";
  write_basis(path, basis);
  const auto loaded = read_basis(path);
  CHECK(loaded.u() == basis.u());
  CHECK(loaded.r() == basis.r());
  CHECK(loaded.pinv() == basis.pinv());
  std::filesystem::remove(path);
}

TEST_CASE("spec config parsing") {
  const auto a = parse_spec_config(R"({"dim": 3, "mean": 0.5, "cov": {"isotropic": 2.0}})");
  CHECK(a.dim() == 3);
  CHECK(a.mean(2) == 0.5);
  CHECK(a.variance(1) == 2.0);
  CHECK(a.is_isotropic());

  const auto b = parse_spec_config(
      R"({"dim": 2, "mean": [1, -1], "cov": {"diagonal": [0.5, 3]}})");
  CHECK(b.mean(1) == -1.0);
  CHECK(b.variance(1) == 3.0);

  CHECK(spec_from_json(to_json(b)).variance(0) == 0.5);
  CHECK(to_json(a)["cov"]["isotropic"] == 2.0);
}

TEST_CASE("spec config errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_spec_config(text);
    } catch (const SpecConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"mean": 0, "cov": {"isotropic": 1}})").find("dim") != std::string::npos);
  CHECK(message(R"({"dim": 0, "mean": 0, "cov": {"isotropic": 1}})").find("dim") !=
        std::string::npos);
  CHECK(message(R"({"dim": 2.5, "mean": 0, "cov": {"isotropic": 1}})").find("dim") !=
        std::string::npos);
  CHECK(message(R"({"dim": 2, "mean": [0], "cov": {"isotropic": 1}})").find("mean") !=
        std::string::npos);
  CHECK(message(R"({"dim": 2, "mean": "x", "cov": {"isotropic": 1}})").find("mean") !=
        std::string::npos);
  CHECK(message(R"({"dim": 2, "mean": 0, "cov": {"isotropic": -1}})").find("cov.isotropic") !=
        std::string::npos);
  CHECK(message(R"({"dim": 2, "mean": 0, "cov": {"diagonal": [1, 0]}})")
            .find("cov.diagonal[1]") != std::string::npos);
  CHECK(message(R"({"dim": 2, "mean": 0, "cov": {"full": [[1, 0], [0, 1]]}})")
            .find("cov.full") != std::string::npos);
  CHECK(message(R"({"dim": 2, "mean": 0})").find("cov") != std::string::npos);
  CHECK(message("not json").find("invalid JSON") != std::string::npos);
}

TEST_CASE("report serialization") {
  TypicalityReport r;
  r.norm = 2.0;
  r.norm_sq = 4.0;
  r.norm_log_cdf = -std::numeric_limits<double>::infinity();
  const auto kv = to_key_value(r);
  CHECK(kv.find("norm=2\n") != std::string::npos);
  CHECK(kv.find("norm_log_cdf=-inf\n") != std::string::npos);
  const auto j = to_json(r);
  for (const char* key : {"norm", "norm_sq", "norm_log_cdf", "norm_log_sf", "log_density",
                          "density_percentile"})
    CHECK(j.contains(key));
  CHECK(j["norm_log_cdf"].is_null());

  IntervalEstimate e{0.25, 0.75, 0.99, 100, 7};
  CHECK(to_key_value(e) == "lo=0.25\nhi=0.75\nconfidence=0.98999999999999999\nn_samples=100\nseed=7\n");
  CHECK(to_json(e)["n_samples"] == 100);
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
