#pragma once

// K-dimensional subspaces spanned by K latents. The basis is a thin
// Householder QR of A = [x_1 .. x_K]; A's pseudoinverse R^-1 U^T maps a point
// of the subspace back to the combination weights that produce it, and
// those weights drive the distribution-restoring transform.

#include <cstddef>
#include <span>
#include <vector>

#include "cog/latent.hpp"
#include "cog/matrix.hpp"

namespace cog {

/// |R_kk| below this fraction of ||x_k|| marks the input as rank deficient.
inline constexpr double kRankTol = 1e-10;
/// Largest accepted ||A w - s|| / ||s|| when recovering weights.
inline constexpr double kResidualTol = 1e-8;

/// Coordinates h in the orthonormal basis U.
struct SubspaceCoords {
  std::vector<double> h;
  std::size_t size() const noexcept { return h.size(); }
  friend bool operator==(const SubspaceCoords&, const SubspaceCoords&) = default;
};

/// Immutable after construction. Invariants: U^T U = I, A = U R, R has a
/// strictly positive diagonal, pinv * A = I.
class SubspaceBasis {
 public:
  /// Throws RankDeficient, DimensionMismatch, or InvalidArgument (K = 0 or
  /// K > D).
  static SubspaceBasis build(std::span<const Latent> latents);

  std::size_t dim() const noexcept { return a_.rows(); }
  std::size_t rank() const noexcept { return a_.cols(); }

  const Matrix& a() const noexcept { return a_; }
  const Matrix& u() const noexcept { return u_; }
  const Matrix& r() const noexcept { return r_; }
  const Matrix& pinv() const noexcept { return pinv_; }

  /// The original latents (columns of A).
  std::vector<Latent> latents() const;

 private:
  SubspaceBasis(Matrix a, Matrix u, Matrix r, Matrix pinv)
      : a_(std::move(a)), u_(std::move(u)), r_(std::move(r)), pinv_(std::move(pinv)) {}

  Matrix a_;
  Matrix u_;
  Matrix r_;
  Matrix pinv_;
};

inline SubspaceBasis build_basis(std::span<const Latent> latents) {
  return SubspaceBasis::build(latents);
}

/// h = U^T x.
SubspaceCoords coords(const SubspaceBasis& basis, const Latent& x);

/// s(x) = U U^T x.
Latent project(const SubspaceBasis& basis, const Latent& x);

/// w = pinv * s. Throws NotInSubspace when ||A w - s|| > kResidualTol ||s||.
WeightVec recover_weights(const SubspaceBasis& basis, const Latent& s);

/// y = U h, w = pinv * y, then the corrected latent for (y, w).
Latent latent_at(const SubspaceBasis& basis, const SubspaceCoords& h, const GaussianSpec& spec);

/// rows x cols coordinate vectors around coords(center): component dim_i
/// takes `rows` evenly spaced values and dim_j takes `cols` values, both
/// spanning [h0 - half_extent, h0 + half_extent]. Row-major order. For odd
/// counts the central cell equals h0 exactly.
std::vector<SubspaceCoords> grid_coords(const SubspaceBasis& basis, const Latent& center,
                                        std::size_t dim_i, std::size_t dim_j,
                                        double half_extent, std::size_t rows, std::size_t cols);

}  // namespace cog
