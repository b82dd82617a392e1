#include "opticdp/optic.hpp"

#include <stdexcept>
#include <string>

namespace opticdp {

GaussOptic::GaussOptic(std::size_t residual_dim, GaussKernel forward, GaussKernel backward)
    : residual_dim_(residual_dim), forward_(std::move(forward)), backward_(std::move(backward)) {
    if (forward_.out_dim() < residual_dim_ || backward_.in_dim() < residual_dim_) {
        throw std::invalid_argument("Gauss optic: residual dimension " + std::to_string(residual_dim_) +
                                    " exceeds forward output " + std::to_string(forward_.out_dim()) +
                                    " or backward input " + std::to_string(backward_.in_dim()));
    }
}

GaussOptic GaussOptic::identity(std::size_t dim, std::size_t back_dim) {
    return GaussOptic(0, GaussKernel::identity(dim), GaussKernel::identity(back_dim));
}

GaussOptic compose(const GaussOptic& first, const GaussOptic& second) {
    if (first.y_dim() != second.x_dim() || first.yb_dim() != second.xb_dim()) {
        throw std::invalid_argument("Gauss optic composition: interface (" + std::to_string(first.y_dim()) + ", " +
                                    std::to_string(first.yb_dim()) + ") does not match (" +
                                    std::to_string(second.x_dim()) + ", " + std::to_string(second.xb_dim()) + ")");
    }
    const auto keep = GaussKernel::identity(first.residual_dim());
    GaussKernel forward = gauss_compose(first.forward(), gauss_tensor(keep, second.forward()));
    GaussKernel backward = gauss_compose(gauss_tensor(keep, second.backward()), first.backward());
    return GaussOptic(first.residual_dim() + second.residual_dim(), std::move(forward), std::move(backward));
}

GaussKernel apply_costate(const GaussOptic& o, const GaussKernel& v) {
    if (v.in_dim() != o.y_dim() || v.out_dim() != o.yb_dim()) {
        throw std::invalid_argument("Gauss costate is " + std::to_string(v.in_dim()) + " -> " +
                                    std::to_string(v.out_dim()) + " but the optic exposes (" +
                                    std::to_string(o.y_dim()) + ", " + std::to_string(o.yb_dim()) + ")");
    }
    const auto middle = gauss_tensor(GaussKernel::identity(o.residual_dim()), v);
    return gauss_compose(gauss_compose(o.forward(), middle), o.backward());
}

MarkovOptic<StateAction, State, StateAction> lambda_optic(const Mdp& m) {
    using Out = std::pair<StateAction, State>;
    using ForwardKernel = Kernel<StateAction, Out>;
    ForwardKernel forward = [&]() {
        if (m.transition.family() == KernelFamily::deterministic) {
            return ForwardKernel::deterministic(
                [f = m.transition.det_map()](const StateAction& xa) { return Out{xa, f(xa)}; });
        }
        return ForwardKernel::stochastic([f = m.transition](const StateAction& xa) {
            return f(xa).map([&](State next) { return Out{xa, next}; });
        });
    }();
    auto backward = [reward = m.reward, beta = m.discount, terminal = m.terminal](const StateAction& xa,
                                                                                   double r) {
        const bool stop = !terminal.empty() && terminal[xa.state];
        return reward(xa.state, xa.action) + (stop ? 0.0 : beta * r);
    };
    return {std::move(forward), std::move(backward)};
}

MarkovOptic<State, StateAction, Unit> policy_lift(const Policy& p) {
    using Out = std::pair<Unit, StateAction>;
    using ForwardKernel = Kernel<State, Out>;
    auto identity_back = [](const Unit&, double r) { return r; };
    if (const auto* det = std::get_if<DeterministicPolicy>(&p)) {
        return {ForwardKernel::deterministic(
                    [pi = *det](State x) { return Out{Unit{}, StateAction{x, pi(x)}}; }),
                identity_back};
    }
    return {ForwardKernel::stochastic([pi = std::get<StochasticPolicy>(p)](State x) {
                return pi(x).map([x](Action a) { return Out{Unit{}, StateAction{x, a}}; });
            }),
            identity_back};
}

Lens<EuclideanPair, double, Vector, double, EuclideanPair> lambda_lens(const ContinuousMdp& m) {
    if (const auto* g = std::get_if<GaussKernel>(&m.dynamics); g && g->noise_cov.cwiseAbs().maxCoeff() > 0.0) {
        throw UnsupportedKernel("lambda_lens needs deterministic dynamics; use lambda_gauss_optic for noisy ones");
    }
    return {[m](const EuclideanPair& xa) { return std::pair<EuclideanPair, Vector>{xa, m.mean_step(xa.first, xa.second)}; },
            [reward = m.reward, beta = m.discount](const EuclideanPair& xa, double r) {
                return reward(xa.first, xa.second) + beta * r;
            }};
}

Lens<Vector, double, EuclideanPair, double, Unit> policy_lift_lens(std::function<Vector(const Vector&)> policy) {
    return {[policy = std::move(policy)](const Vector& x) {
                return std::pair<Unit, EuclideanPair>{Unit{}, EuclideanPair{x, policy(x)}};
            },
            [](const Unit&, double r) { return r; }};
}

GaussOptic lambda_gauss_optic(const GaussMdp& m) {
    m.validate();
    const auto n = static_cast<Eigen::Index>(m.state_dim);
    const auto na = static_cast<Eigen::Index>(m.state_dim + m.action_dim);

    // (x, a) -> ((x, a), f(x, a)): copy the input into the residual.
    Matrix lin(na + n, na);
    lin << Matrix::Identity(na, na), m.transition.lin;
    Vector offset(na + n);
    offset << Vector::Zero(na), m.transition.offset;
    Matrix noise = Matrix::Zero(na + n, na + n);
    noise.bottomRightCorner(n, n) = m.transition.noise_cov;
    GaussKernel forward(std::move(lin), std::move(offset), std::move(noise));

    // ((x, a), r) -> U(x, a) + beta r
    Matrix back_lin(1, na + 1);
    back_lin << m.reward_weights, m.discount;
    Vector back_offset(1);
    back_offset << m.reward_offset;
    GaussKernel backward(std::move(back_lin), std::move(back_offset));

    return GaussOptic(m.state_dim + m.action_dim, std::move(forward), std::move(backward));
}

GaussOptic policy_lift_gauss(const AffinePolicy& p, std::size_t state_dim) {
    const auto n = static_cast<Eigen::Index>(state_dim);
    const auto k = p.offset.size();
    if (p.gain.cols() != n) {
        throw std::invalid_argument("affine policy gain has " + std::to_string(p.gain.cols()) +
                                    " columns but the state dimension is " + std::to_string(state_dim));
    }
    Matrix lin(n + k, n);
    lin << Matrix::Identity(n, n), p.gain;
    Vector offset(n + k);
    offset << Vector::Zero(n), p.offset;
    Matrix noise = Matrix::Zero(n + k, n + k);
    noise.bottomRightCorner(k, k) = p.noise_cov;
    return GaussOptic(0, GaussKernel(std::move(lin), std::move(offset), std::move(noise)),
                      GaussKernel::identity(1));
}

}  // namespace opticdp
