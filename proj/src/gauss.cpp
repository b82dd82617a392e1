#include "opticdp/gauss.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace opticdp {

namespace {

std::string dims(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void check_covariance(const Matrix& cov, const char* what) {
    if (cov.rows() != cov.cols()) {
        throw std::invalid_argument(std::string(what) + " is not square (" + dims(cov) + ")");
    }
    if (cov.size() == 0) return;
    if (!cov.allFinite()) throw std::invalid_argument(std::string(what) + " has non-finite entries");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
        throw std::invalid_argument(std::string(what) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
        std::ostringstream msg;
        msg << what << " is not positive semi-definite (smallest eigenvalue "
            << eig.eigenvalues().minCoeff() << ")";
        throw std::invalid_argument(msg.str());
    }
}

GaussState::GaussState(Vector mean_, Matrix cov_) : mean(std::move(mean_)), cov(std::move(cov_)) {
    if (cov.rows() != mean.size()) {
        throw std::invalid_argument("Gaussian state: mean has dimension " + std::to_string(mean.size()) +
                                    " but covariance is " + dims(cov));
    }
    check_covariance(cov, "Gaussian state covariance");
}

GaussKernel::GaussKernel(Matrix lin_, Vector offset_, Matrix noise_cov_)
    : lin(std::move(lin_)), offset(std::move(offset_)), noise_cov(std::move(noise_cov_)) {
    if (offset.size() != lin.rows()) {
        throw std::invalid_argument("Gauss kernel: offset has dimension " + std::to_string(offset.size()) +
                                    " but linear part is " + dims(lin));
    }
    if (noise_cov.rows() != lin.rows()) {
        throw std::invalid_argument("Gauss kernel: noise covariance is " + dims(noise_cov) +
                                    " but output dimension is " + std::to_string(lin.rows()));
    }
    check_covariance(noise_cov, "Gauss kernel noise covariance");
}

GaussKernel::GaussKernel(Matrix lin_, Vector offset_)
    : GaussKernel(lin_, offset_, Matrix::Zero(lin_.rows(), lin_.rows())) {}

GaussKernel GaussKernel::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return GaussKernel(Matrix::Identity(n, n), Vector::Zero(n));
}

GaussKernel GaussKernel::constant(const Vector& mean, const Matrix& cov) {
    return GaussKernel(Matrix::Zero(mean.size(), 0), mean, cov);
}

GaussState gauss_push(const GaussState& s, const GaussKernel& k) {
    if (s.dim() != k.in_dim()) {
        throw std::invalid_argument("gauss_push: state has dimension " + std::to_string(s.dim()) +
                                    " but kernel expects input dimension " + std::to_string(k.in_dim()));
    }
    Vector mean = k.lin * s.mean + k.offset;
    Matrix cov = k.lin * s.cov * k.lin.transpose() + k.noise_cov;
    cov = 0.5 * (cov + cov.transpose());
    return GaussState(std::move(mean), std::move(cov));
}

GaussKernel gauss_compose(const GaussKernel& first, const GaussKernel& second) {
    if (first.out_dim() != second.in_dim()) {
        throw std::invalid_argument("gauss_compose: first kernel outputs dimension " +
                                    std::to_string(first.out_dim()) + " but second expects " +
                                    std::to_string(second.in_dim()));
    }
    Matrix lin = second.lin * first.lin;
    Vector offset = second.lin * first.offset + second.offset;
    Matrix noise = second.lin * first.noise_cov * second.lin.transpose() + second.noise_cov;
    noise = 0.5 * (noise + noise.transpose());
    return GaussKernel(std::move(lin), std::move(offset), std::move(noise));
}

GaussKernel gauss_tensor(const GaussKernel& top, const GaussKernel& bottom) {
    const auto r1 = top.lin.rows(), c1 = top.lin.cols();
    const auto r2 = bottom.lin.rows(), c2 = bottom.lin.cols();
    Matrix lin = Matrix::Zero(r1 + r2, c1 + c2);
    lin.topLeftCorner(r1, c1) = top.lin;
    lin.bottomRightCorner(r2, c2) = bottom.lin;
    Vector offset(r1 + r2);
    offset << top.offset, bottom.offset;
    Matrix noise = Matrix::Zero(r1 + r2, r1 + r2);
    noise.topLeftCorner(r1, r1) = top.noise_cov;
    noise.bottomRightCorner(r2, r2) = bottom.noise_cov;
    return GaussKernel(std::move(lin), std::move(offset), std::move(noise));
}

Matrix covariance_factor(const Matrix& cov) {
    check_covariance(cov, "covariance");
    if (cov.size() == 0) return cov;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal();
}

}  // namespace opticdp
