#pragma once

#include "opticdp/finite_dist.hpp"
#include "opticdp/gauss.hpp"
#include "opticdp/kernel.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace opticdp {

using State = std::size_t;
using Action = std::size_t;

struct StateAction {
    State state = 0;
    Action action = 0;
    auto operator<=>(const StateAction&) const = default;
};

/// Enumerated state space; coordinates are what the CSV writers print.
struct StateSpace {
    std::vector<std::string> coordinate_names;
    std::vector<std::vector<double>> coordinates;  // one row per state

    std::size_t size() const noexcept { return coordinates.size(); }
};

struct ActionSpace {
    std::vector<std::string> labels;
    std::size_t size() const noexcept { return labels.size(); }
};

/**
 * Finite Markov decision process.
 *
 * `reward` is the expected immediate reward. States listed in `terminal`
 * end the episode after their action is taken: their continuation value is
 * not added.
 */
struct Mdp {
    StateSpace states;
    ActionSpace actions;
    Kernel<StateAction, State> transition;
    std::function<double(State, Action)> reward;
    double discount = 0.9;
    std::vector<bool> terminal;

    std::size_t num_states() const noexcept { return states.size(); }
    std::size_t num_actions() const noexcept { return actions.size(); }
    bool is_terminal(State x) const { return !terminal.empty() && terminal[x]; }

    /// Checks the discount range, space sizes and every transition row.
    void validate() const;
};

/// Tabulates an enumerated transition function into a stochastic kernel.
Kernel<StateAction, State> tabulated_kernel(std::size_t num_actions,
                                            std::vector<FiniteDist<State>> rows);

struct DeterministicPolicy {
    std::vector<Action> actions;  // indexed by state
    Action operator()(State x) const { return actions.at(x); }
};

struct StochasticPolicy {
    std::vector<FiniteDist<Action>> actions;  // indexed by state
    const FiniteDist<Action>& operator()(State x) const { return actions.at(x); }
};

using Policy = std::variant<DeterministicPolicy, StochasticPolicy>;

DeterministicPolicy constant_policy(std::size_t num_states, Action a);

/// Tabular costate on an enumerated state space.
struct ValueFn {
    std::vector<double> values;

    ValueFn() = default;
    explicit ValueFn(std::vector<double> v) : values(std::move(v)) {}
    static ValueFn zeros(std::size_t n) { return ValueFn(std::vector<double>(n, 0.0)); }

    double operator()(State x) const { return values[x]; }
    std::size_t size() const noexcept { return values.size(); }
};

/// Tabular state-action costate, row-major by state.
struct QFn {
    std::size_t num_actions = 0;
    std::vector<double> values;

    QFn() = default;
    QFn(std::size_t states, std::size_t actions, double init = 0.0)
        : num_actions(actions), values(states * actions, init) {}

    double operator()(State x, Action a) const { return values[x * num_actions + a]; }
    double operator()(const StateAction& xa) const { return (*this)(xa.state, xa.action); }
    double& at(State x, Action a) { return values[x * num_actions + a]; }
    std::size_t num_states() const noexcept { return num_actions == 0 ? 0 : values.size() / num_actions; }
};

double sup_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Lowest-index maximiser of q(x, .).
Action greedy_action(const QFn& q, State x);
DeterministicPolicy greedy_policy(const QFn& q);

/// (1 - epsilon) on the greedy action plus epsilon spread uniformly.
StochasticPolicy epsilon_greedy(const QFn& q, double epsilon);

/// Continuous-space model: x' = dynamics(x, a), or a Gaussian kernel on stacked (x, a).
using DeterministicDynamics = std::function<Vector(const Vector& x, const Vector& a)>;
using ContinuousDynamics = std::variant<DeterministicDynamics, GaussKernel>;

struct ContinuousMdp {
    std::size_t state_dim = 0;
    std::size_t action_dim = 0;
    ContinuousDynamics dynamics;
    std::function<double(const Vector& x, const Vector& a)> reward;
    double discount = 0.9;

    /// Successor, or its mean for Gaussian dynamics.
    Vector mean_step(const Vector& x, const Vector& a) const;
};

/// Continuous MDP whose transition is affine-Gaussian and whose reward is affine.
struct GaussMdp {
    std::size_t state_dim = 0;
    std::size_t action_dim = 0;
    GaussKernel transition;                 // (x, a) stacked -> x'
    Eigen::RowVectorXd reward_weights;      // U(x, a) = w . (x, a) + reward_offset
    double reward_offset = 0.0;
    double discount = 0.9;

    void validate() const;
};

/// a = gain * x + offset (+ optional action noise).
struct AffinePolicy {
    Matrix gain;
    Vector offset;
    Matrix noise_cov;

    AffinePolicy(Matrix gain_, Vector offset_);
    AffinePolicy(Matrix gain_, Vector offset_, Matrix noise_cov_);
};

}  // namespace opticdp
