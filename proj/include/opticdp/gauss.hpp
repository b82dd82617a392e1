#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace opticdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPsdTolerance = 1e-9;

/// Throws std::invalid_argument unless `cov` is square, symmetric and PSD.
void check_covariance(const Matrix& cov, const char* what);

/// Multivariate normal N(mean, cov).
struct GaussState {
    Vector mean;
    Matrix cov;

    GaussState(Vector mean_, Matrix cov_);
    std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Affine map with additive Gaussian noise: x -> N(lin * x + offset, noise_cov).
struct GaussKernel {
    Matrix lin;
    Vector offset;
    Matrix noise_cov;

    GaussKernel(Matrix lin_, Vector offset_, Matrix noise_cov_);
    /// Noise-free affine map.
    GaussKernel(Matrix lin_, Vector offset_);

    std::size_t in_dim() const noexcept { return static_cast<std::size_t>(lin.cols()); }
    std::size_t out_dim() const noexcept { return static_cast<std::size_t>(lin.rows()); }

    static GaussKernel identity(std::size_t dim);
    /// Map from R^0: the constant distribution N(mean, cov).
    static GaussKernel constant(const Vector& mean, const Matrix& cov);
};

/// Pushforward of a Gaussian along an affine-Gaussian kernel.
GaussState gauss_push(const GaussState& s, const GaussKernel& k);

/// Sequential composition: first `first`, then `second`.
GaussKernel gauss_compose(const GaussKernel& first, const GaussKernel& second);

/// Parallel (block-diagonal) product acting on stacked inputs.
GaussKernel gauss_tensor(const GaussKernel& top, const GaussKernel& bottom);

/// Symmetric square root factor S with S * S^T = cov (PSD input).
Matrix covariance_factor(const Matrix& cov);

}  // namespace opticdp
