#include "cog/subspace.hpp"

#include <cmath>
#include <string>

#include "cog/error.hpp"

namespace cog {

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void require_coords(const SubspaceBasis& basis, const SubspaceCoords& h) {
  if (h.size() != basis.rank()) {
    throw DimensionMismatch("subspace coordinates have " + std::to_string(h.size()) +
                            " components, basis has rank " + std::to_string(basis.rank()));
  }
}

// y = M x
std::vector<double> multiply(const Matrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto col = m.column(c);
    for (std::size_t r = 0; r < m.rows(); ++r) y[r] += col[r] * x[c];
  }
  return y;
}

// y = M^T x
std::vector<double> multiply_transposed(const Matrix& m, std::span<const double> x) {
  std::vector<double> y(m.cols(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto col = m.column(c);
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += col[r] * x[r];
    y[c] = s;
  }
  return y;
}

// Applies H = I - 2 v v^T (v unit, supported on rows [k, D)) to columns
// [first, last) of m.
void reflect(Matrix& m, std::span<const double> v, std::size_t k, std::size_t first,
             std::size_t last) {
  for (std::size_t c = first; c < last; ++c) {
    auto col = m.column(c);
    double dot = 0.0;
    for (std::size_t r = k; r < m.rows(); ++r) dot += v[r] * col[r];
    for (std::size_t r = k; r < m.rows(); ++r) col[r] -= 2.0 * dot * v[r];
  }
}

}  // namespace

SubspaceBasis SubspaceBasis::build(std::span<const Latent> latents) {
  require_same_dim(latents);
  const std::size_t dim = latents.front().dim();
  const std::size_t k_count = latents.size();
  if (k_count > dim) {
    throw RankDeficient("subspace: " + std::to_string(k_count) + " latents cannot be independent in " +
                        std::to_string(dim) + " dimensions");
  }

  Matrix a(dim, k_count);
  std::vector<double> column_norms(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    std::copy(latents[k].values().begin(), latents[k].values().end(), a.column(k).begin());
    column_norms[k] = norm(a.column(k));
  }

  // Householder triangularization of a working copy.
  Matrix work = a;
  std::vector<std::vector<double>> reflectors(k_count, std::vector<double>(dim, 0.0));
  for (std::size_t k = 0; k < k_count; ++k) {
    auto col = work.column(k);
    const double tail_norm = norm(col.subspan(k));
    const bool degenerate =
        !(column_norms[k] > 0.0) || !(tail_norm >= kRankTol * column_norms[k]);
    if (degenerate) {
      throw RankDeficient("subspace: latent " + std::to_string(k) +
                          " is linearly dependent on the preceding latents");
    }
    const double diag = col[k] >= 0.0 ? -tail_norm : tail_norm;
    auto& v = reflectors[k];
    for (std::size_t r = k; r < dim; ++r) v[r] = col[r];
    v[k] -= diag;
    const double v_norm = norm(std::span<const double>(v).subspan(k));
    if (v_norm > 0.0) {
      for (std::size_t r = k; r < dim; ++r) v[r] /= v_norm;
      reflect(work, v, k, k, k_count);
    }
    // The reflection maps the tail onto diag * e_k; store it exactly.
    col[k] = diag;
    for (std::size_t r = k + 1; r < dim; ++r) col[r] = 0.0;
  }

  Matrix r(k_count, k_count);
  for (std::size_t c = 0; c < k_count; ++c)
    for (std::size_t row = 0; row <= c; ++row) r(row, c) = work(row, c);

  // Thin Q = H_0 ... H_{K-1} [I_K; 0].
  Matrix u(dim, k_count);
  for (std::size_t k = 0; k < k_count; ++k) u(k, k) = 1.0;
  for (std::size_t k = k_count; k-- > 0;) reflect(u, reflectors[k], k, k, k_count);

  // Sign convention: positive diagonal of R.
  for (std::size_t k = 0; k < k_count; ++k) {
    if (r(k, k) < 0.0) {
      for (std::size_t c = k; c < k_count; ++c) r(k, c) = -r(k, c);
      for (double& x : u.column(k)) x = -x;
    }
  }

  // pinv = R^-1 U^T, one back substitution per row of U.
  Matrix pinv(k_count, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    auto p = pinv.column(j);
    for (std::size_t i = k_count; i-- > 0;) {
      double s = u(j, i);
      for (std::size_t c = i + 1; c < k_count; ++c) s -= r(i, c) * p[c];
      p[i] = s / r(i, i);
    }
  }

  return SubspaceBasis(std::move(a), std::move(u), std::move(r), std::move(pinv));
}

std::vector<Latent> SubspaceBasis::latents() const {
  std::vector<Latent> out;
  out.reserve(rank());
  for (std::size_t k = 0; k < rank(); ++k) {
    const auto col = a_.column(k);
    out.emplace_back(std::vector<double>(col.begin(), col.end()));
  }
  return out;
}

SubspaceCoords coords(const SubspaceBasis& basis, const Latent& x) {
  require_dim(x, basis.dim(), "subspace input");
  return {multiply_transposed(basis.u(), x.values())};
}

Latent project(const SubspaceBasis& basis, const Latent& x) {
  const auto h = coords(basis, x);
  return Latent(multiply(basis.u(), h.h));
}

WeightVec recover_weights(const SubspaceBasis& basis, const Latent& s) {
  require_dim(s, basis.dim(), "subspace point");
  auto w = multiply(basis.pinv(), s.values());
  const auto back = multiply(basis.a(), w);
  double resid = 0.0;
  for (std::size_t d = 0; d < back.size(); ++d) resid += (back[d] - s[d]) * (back[d] - s[d]);
  resid = std::sqrt(resid);
  const double scale = norm(s.values());
  if (resid > kResidualTol * scale) {
    throw NotInSubspace("recover_weights: relative residual " + std::to_string(resid / scale) +
                        " exceeds 1e-8; project the point onto the subspace first");
  }
  return WeightVec(std::move(w));
}

Latent latent_at(const SubspaceBasis& basis, const SubspaceCoords& h, const GaussianSpec& spec) {
  require_coords(basis, h);
  if (spec.dim() != basis.dim()) {
    throw DimensionMismatch("latent_at: spec dimension " + std::to_string(spec.dim()) +
                            " differs from basis dimension " + std::to_string(basis.dim()));
  }
  Latent y(multiply(basis.u(), h.h));
  WeightVec w(multiply(basis.pinv(), y.values()));
  return cog_transform(y, w, spec);
}

std::vector<SubspaceCoords> grid_coords(const SubspaceBasis& basis, const Latent& center,
                                        std::size_t dim_i, std::size_t dim_j,
                                        double half_extent, std::size_t rows, std::size_t cols) {
  if (dim_i >= basis.rank() || dim_j >= basis.rank()) {
    throw InvalidArgument("grid: swept dimensions must be below the basis rank " +
                          std::to_string(basis.rank()));
  }
  if (dim_i == dim_j) throw InvalidArgument("grid: the two swept dimensions must differ");
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw InvalidArgument("grid: half extent must be positive and finite");
  }
  if (rows == 0 || cols == 0) throw InvalidArgument("grid: rows and cols must be at least 1");

  const auto h0 = coords(basis, center);
  // offset(i, n) = e (2i - (n-1)) / (n-1); zero at the middle of odd n.
  auto offset = [half_extent](std::size_t i, std::size_t n) {
    if (n == 1) return 0.0;
    const double num = 2.0 * static_cast<double>(i) - static_cast<double>(n - 1);
    return half_extent * num / static_cast<double>(n - 1);
  };

  std::vector<SubspaceCoords> grid;
  grid.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      SubspaceCoords h = h0;
      h.h[dim_i] += offset(r, rows);
      h.h[dim_j] += offset(c, cols);
      grid.push_back(std::move(h));
    }
  }
  return grid;
}

}  // namespace cog
