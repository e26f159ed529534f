#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "cog/config.hpp"
#include "cog/diagnostics.hpp"
#include "cog/error.hpp"
#include "cog/latent_io.hpp"
#include "cog/schemes.hpp"
#include "cog/subspace.hpp"

namespace py = pybind11;
using namespace cog;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Latent to_latent(const Array& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a 1-D array, got " + std::to_string(a.ndim()) + "-D");
  return Latent(std::vector<double>(a.data(), a.data() + a.size()));
}

std::vector<Latent> to_latents(const Array& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-D (count, dim) array");
  const auto count = static_cast<std::size_t>(a.shape(0));
  const auto dim = static_cast<std::size_t>(a.shape(1));
  std::vector<Latent> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.emplace_back(std::vector<double>(a.data() + k * dim, a.data() + (k + 1) * dim));
  return out;
}

Array from_values(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array from_latent(const Latent& x) { return from_values(x.values()); }

Array from_latents(const std::vector<Latent>& xs) {
  const std::size_t dim = xs.empty() ? 0 : xs.front().dim();
  Array out({static_cast<py::ssize_t>(xs.size()), static_cast<py::ssize_t>(dim)});
  double* p = out.mutable_data();
  for (const auto& x : xs) p = std::copy(x.values().begin(), x.values().end(), p);
  return out;
}

Array from_matrix(const Matrix& m) {
  Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  return out;
}

InterpolationMethod interpolation_method(const std::string& name) {
  const auto m = parse_interpolation_method(name);
  if (!m) throw InvalidArgument("unknown interpolation method: " + name);
  return *m;
}

CentroidMethod centroid_method(const std::string& name) {
  const auto m = parse_centroid_method(name);
  if (!m) throw InvalidArgument("unknown centroid method: " + name);
  return *m;
}

Dtype dtype_from(const std::string& name) {
  if (name == "f64") return Dtype::Float64;
  if (name == "f32") return Dtype::Float32;
  throw InvalidArgument("dtype must be f64 or f32");
}

CombineMode combine_mode(bool corrected) {
  return corrected ? CombineMode::Corrected : CombineMode::Uncorrected;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Corrected combinations of Gaussian latents";

  auto base = py::register_exception<Error>(m, "CogError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base);
  py::register_exception<NonFinite>(m, "NonFinite", base);
  py::register_exception<DegenerateWeights>(m, "DegenerateWeights", base);
  py::register_exception<RankDeficient>(m, "RankDeficient", base);
  py::register_exception<NotInSubspace>(m, "NotInSubspace", base);
  py::register_exception<SpecConfigError>(m, "SpecConfigError", base);
  auto format = py::register_exception<FormatError>(m, "FormatError", base);
  py::register_exception<IoError>(m, "IoError", format);
  py::register_exception<BadMagic>(m, "BadMagic", format);
  py::register_exception<BadVersion>(m, "BadVersion", format);
  py::register_exception<BadDtype>(m, "BadDtype", format);
  py::register_exception<BadFlags>(m, "BadFlags", format);
  py::register_exception<BadReserved>(m, "BadReserved", format);
  py::register_exception<Truncated>(m, "Truncated", format);
  py::register_exception<TrailingBytes>(m, "TrailingBytes", format);
  py::register_exception<DimensionOverflow>(m, "DimensionOverflow", format);

  py::class_<GaussianSpec>(m, "GaussianSpec")
      .def(py::init<std::size_t, GaussianSpec::Mean, GaussianSpec::Covariance>(), py::arg("dim"),
           py::arg("mean") = 0.0, py::arg("cov") = 1.0,
           "Diagonal Gaussian prior; mean and cov are scalars or per-component lists.")
      .def_static("from_json", &parse_spec_config, py::arg("text"))
      .def_static("load", &load_spec_config, py::arg("path"))
      .def("to_json", [](const GaussianSpec& s) { return to_json(s).dump(); })
      .def_property_readonly("dim", &GaussianSpec::dim)
      .def_property_readonly("is_isotropic", &GaussianSpec::is_isotropic)
      .def_property_readonly("is_standard", &GaussianSpec::is_standard)
      .def("mean", &GaussianSpec::mean, py::arg("d"))
      .def("variance", &GaussianSpec::variance, py::arg("d"))
      .def("__repr__", [](const GaussianSpec& s) { return "GaussianSpec(" + to_json(s).dump() + ")"; });

  py::class_<WeightVec>(m, "WeightVec")
      .def(py::init<std::vector<double>>(), py::arg("weights"))
      .def_property_readonly("alpha", &WeightVec::alpha)
      .def_property_readonly("beta", &WeightVec::beta)
      .def_property_readonly("weights", [](const WeightVec& w) { return from_values(w.weights()); })
      .def("__len__", &WeightVec::size);

  m.def("combination_stats", &combination_stats, py::arg("weights"));
  m.def("linear_combine",
        [](const Array& xs, std::vector<double> w) {
          return from_latent(linear_combine(to_latents(xs), WeightVec(std::move(w))));
        },
        py::arg("latents"), py::arg("weights"));
  m.def("cog_transform",
        [](const Array& y, std::vector<double> w, const GaussianSpec& spec) {
          return from_latent(cog_transform(to_latent(y), WeightVec(std::move(w)), spec));
        },
        py::arg("y"), py::arg("weights"), py::arg("spec"));
  m.def("cog_combine",
        [](const Array& xs, std::vector<double> w, const GaussianSpec& spec) {
          return from_latent(cog_combine(to_latents(xs), std::move(w), spec));
        },
        py::arg("latents"), py::arg("weights"), py::arg("spec"));

  m.def("lerp_weights", [](double v) { return from_values(lerp_weights(v).weights()); },
        py::arg("v"));
  m.def("slerp_weights",
        [](double v, const Array& x1, const Array& x2) {
          return from_values(slerp_weights(v, to_latent(x1), to_latent(x2)).weights());
        },
        py::arg("v"), py::arg("x1"), py::arg("x2"));
  m.def("interpolate",
        [](const Array& x1, const Array& x2, double v, const std::string& method,
           const GaussianSpec& spec) {
          return from_latent(
              interpolate(to_latent(x1), to_latent(x2), v, interpolation_method(method), spec));
        },
        py::arg("x1"), py::arg("x2"), py::arg("v"), py::arg("method"), py::arg("spec"));
  m.def("centroid",
        [](const Array& xs, const std::string& method, const GaussianSpec& spec,
           bool strict_baselines) {
          return from_latent(centroid(to_latents(xs), centroid_method(method), spec,
                                      CentroidOptions{strict_baselines}));
        },
        py::arg("latents"), py::arg("method"), py::arg("spec"),
        py::arg("strict_baselines") = false);

  py::class_<SubspaceBasis>(m, "SubspaceBasis")
      .def(py::init([](const Array& xs) { return build_basis(to_latents(xs)); }),
           py::arg("latents"))
      .def_property_readonly("dim", &SubspaceBasis::dim)
      .def_property_readonly("rank", &SubspaceBasis::rank)
      .def_property_readonly("a", [](const SubspaceBasis& b) { return from_matrix(b.a()); })
      .def_property_readonly("u", [](const SubspaceBasis& b) { return from_matrix(b.u()); })
      .def_property_readonly("r", [](const SubspaceBasis& b) { return from_matrix(b.r()); })
      .def_property_readonly("pinv", [](const SubspaceBasis& b) { return from_matrix(b.pinv()); })
      .def("coords",
           [](const SubspaceBasis& b, const Array& x) { return from_values(coords(b, to_latent(x)).h); },
           py::arg("x"))
      .def("project",
           [](const SubspaceBasis& b, const Array& x) { return from_latent(project(b, to_latent(x))); },
           py::arg("x"))
      .def("recover_weights",
           [](const SubspaceBasis& b, const Array& s) {
             return from_values(recover_weights(b, to_latent(s)).weights());
           },
           py::arg("s"))
      .def("latent_at",
           [](const SubspaceBasis& b, std::vector<double> h, const GaussianSpec& spec) {
             return from_latent(latent_at(b, SubspaceCoords{std::move(h)}, spec));
           },
           py::arg("h"), py::arg("spec"))
      .def("grid",
           [](const SubspaceBasis& b, const Array& center, std::size_t dim_i, std::size_t dim_j,
              double half_extent, std::size_t rows, std::size_t cols, const GaussianSpec& spec) {
             std::vector<Latent> out;
             for (const auto& h : grid_coords(b, to_latent(center), dim_i, dim_j, half_extent, rows, cols))
               out.push_back(latent_at(b, h, spec));
             return from_latents(out);
           },
           py::arg("center"), py::arg("dim_i"), py::arg("dim_j"), py::arg("half_extent"),
           py::arg("rows"), py::arg("cols"), py::arg("spec"))
      .def("save", [](const SubspaceBasis& b, const std::filesystem::path& p) { write_basis(p, b); },
           py::arg("path"))
      .def_static("load", &read_basis, py::arg("path"));

  m.def("gaussian_log_density",
        [](const Array& x, const GaussianSpec& spec) { return gaussian_log_density(to_latent(x), spec); },
        py::arg("x"), py::arg("spec"));
  m.def("chi2_mode", &chi2_mode, py::arg("dof"));
  m.def("chi2_log_cdf", &chi2_log_cdf, py::arg("t"), py::arg("dof"));
  m.def("chi2_log_sf", &chi2_log_sf, py::arg("t"), py::arg("dof"));
  m.def("typicality_report",
        [](const Array& x, const GaussianSpec& spec) {
          return py::module_::import("json").attr("loads")(
              to_json(typicality_report(to_latent(x), spec)).dump());
        },
        py::arg("x"), py::arg("spec"), "Typicality diagnostics as a dict.");
  m.def("estimate_slerp_beta_ci",
        [](std::size_t dim, std::size_t n, double v, double confidence, std::uint64_t seed,
           unsigned threads) {
          py::gil_scoped_release release;
          const auto e = estimate_slerp_beta_ci(dim, n, v, confidence, seed, threads);
          return std::pair{e.lo, e.hi};
        },
        py::arg("dim"), py::arg("n_samples"), py::arg("v") = 0.5, py::arg("confidence") = 0.99,
        py::arg("seed") = 0, py::arg("threads") = 0);
  m.def("sample_latents",
        [](const GaussianSpec& spec, std::size_t count, std::uint64_t seed, unsigned threads) {
          std::vector<Latent> xs;
          {
            py::gil_scoped_release release;
            xs = sample_latents(spec, count, seed, threads);
          }
          return from_latents(xs);
        },
        py::arg("spec"), py::arg("count"), py::arg("seed") = 0, py::arg("threads") = 0);
  m.def("check_cog_distribution",
        [](const GaussianSpec& spec, std::vector<double> w, std::size_t n, std::uint64_t seed,
           bool corrected, unsigned threads) {
          CogDistributionReport r;
          {
            py::gil_scoped_release release;
            r = check_cog_distribution(spec, std::move(w), n, seed, combine_mode(corrected), threads);
          }
          return py::module_::import("json").attr("loads")(to_json(r).dump());
        },
        py::arg("spec"), py::arg("weights"), py::arg("n_trials"), py::arg("seed") = 0,
        py::arg("corrected") = true, py::arg("threads") = 0, "Moment test report as a dict.");

  m.def("encode_latents",
        [](const Array& xs, const std::string& dtype) {
          return py::bytes(encode_latents(to_latents(xs), dtype_from(dtype)));
        },
        py::arg("latents"), py::arg("dtype") = "f64");
  m.def("decode_latents",
        [](const py::bytes& b) { return from_latents(decode_latents(std::string(b))); },
        py::arg("data"));
  m.def("write_latents",
        [](const std::filesystem::path& p, const Array& xs, const std::string& dtype) {
          write_latents(p, to_latents(xs), dtype_from(dtype));
        },
        py::arg("path"), py::arg("latents"), py::arg("dtype") = "f64");
  m.def("read_latents", [](const std::filesystem::path& p) { return from_latents(read_latents(p)); },
        py::arg("path"));
}
