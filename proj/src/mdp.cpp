#include "opticdp/mdp.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace opticdp {

void Mdp::validate() const {
    if (!(discount > 0.0 && discount < 1.0)) {
        throw std::invalid_argument("MDP discount must lie in (0, 1), got " + std::to_string(discount));
    }
    if (num_states() == 0) throw std::invalid_argument("MDP has no states");
    if (num_actions() == 0) throw std::invalid_argument("MDP has no actions");
    if (!terminal.empty() && terminal.size() != num_states()) {
        throw std::invalid_argument("MDP terminal mask does not cover the state space");
    }
    if (!reward) throw std::invalid_argument("MDP has no reward function");
    for (State x = 0; x < num_states(); ++x) {
        for (Action a = 0; a < num_actions(); ++a) {
            const FiniteDist<State> row = transition({x, a});
            for (const auto& [next, w] : row) {
                if (next >= num_states()) {
                    throw std::invalid_argument("transition from state " + std::to_string(x) +
                                                " leaves the state space");
                }
            }
            if (!std::isfinite(reward(x, a))) {
                throw std::invalid_argument("reward at state " + std::to_string(x) + " is not finite");
            }
        }
    }
}

Kernel<StateAction, State> tabulated_kernel(std::size_t num_actions, std::vector<FiniteDist<State>> rows) {
    auto table = std::make_shared<const std::vector<FiniteDist<State>>>(std::move(rows));
    return Kernel<StateAction, State>::stochastic(
        [table, num_actions](const StateAction& xa) -> FiniteDist<State> {
            return (*table)[xa.state * num_actions + xa.action];
        });
}

DeterministicPolicy constant_policy(std::size_t num_states, Action a) {
    return DeterministicPolicy{std::vector<Action>(num_states, a)};
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

Action greedy_action(const QFn& q, State x) {
    Action best = 0;
    double best_value = q(x, 0);
    for (Action a = 1; a < q.num_actions; ++a) {
        if (q(x, a) > best_value) {
            best_value = q(x, a);
            best = a;
        }
    }
    return best;
}

DeterministicPolicy greedy_policy(const QFn& q) {
    DeterministicPolicy p;
    p.actions.resize(q.num_states());
    for (State x = 0; x < q.num_states(); ++x) p.actions[x] = greedy_action(q, x);
    return p;
}

StochasticPolicy epsilon_greedy(const QFn& q, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    StochasticPolicy p;
    const auto n = static_cast<double>(q.num_actions);
    for (State x = 0; x < q.num_states(); ++x) {
        const Action best = greedy_action(q, x);
        std::vector<std::pair<Action, double>> items;
        for (Action a = 0; a < q.num_actions; ++a) {
            items.emplace_back(a, epsilon / n + (a == best ? 1.0 - epsilon : 0.0));
        }
        p.actions.emplace_back(std::move(items));
    }
    return p;
}

Vector ContinuousMdp::mean_step(const Vector& x, const Vector& a) const {
    if (const auto* f = std::get_if<DeterministicDynamics>(&dynamics)) return (*f)(x, a);
    const auto& k = std::get<GaussKernel>(dynamics);
    Vector xa(x.size() + a.size());
    xa << x, a;
    return k.lin * xa + k.offset;
}

void GaussMdp::validate() const {
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("GaussMdp discount must lie in (0, 1)");
    if (transition.in_dim() != state_dim + action_dim || transition.out_dim() != state_dim) {
        throw std::invalid_argument("GaussMdp transition is " + std::to_string(transition.in_dim()) + " -> " +
                                    std::to_string(transition.out_dim()) + ", expected " +
                                    std::to_string(state_dim + action_dim) + " -> " + std::to_string(state_dim));
    }
    if (static_cast<std::size_t>(reward_weights.size()) != state_dim + action_dim) {
        throw std::invalid_argument("GaussMdp reward weights have the wrong dimension");
    }
}

AffinePolicy::AffinePolicy(Matrix gain_, Vector offset_)
    : AffinePolicy(gain_, offset_, Matrix::Zero(offset_.size(), offset_.size())) {}

AffinePolicy::AffinePolicy(Matrix gain_, Vector offset_, Matrix noise_cov_)
    : gain(std::move(gain_)), offset(std::move(offset_)), noise_cov(std::move(noise_cov_)) {
    if (gain.rows() != offset.size() || noise_cov.rows() != offset.size()) {
        throw std::invalid_argument("affine policy: gain, offset and noise dimensions disagree");
    }
    check_covariance(noise_cov, "affine policy noise covariance");
}

}  // namespace opticdp
