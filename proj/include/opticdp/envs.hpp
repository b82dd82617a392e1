#pragma once

#include "opticdp/discretize.hpp"
#include "opticdp/gauss.hpp"
#include "opticdp/mdp.hpp"

#include <array>
#include <cstddef>

namespace opticdp {

// -- gridworld ---------------------------------------------------------------

/// Cell coordinate; (0, 0) is the top-left corner.
struct Cell {
    std::size_t col = 0;
    std::size_t row = 0;
    auto operator<=>(const Cell&) const = default;
};

/// Action enumeration order. The lowest index wins argmax ties.
enum class Move : Action { up = 0, left = 1, down = 2, right = 3 };
inline constexpr std::array<const char*, 4> kMoveLabels{"up", "left", "down", "right"};

struct GridworldSpec {
    std::size_t width = 4;
    std::size_t height = 4;
    Cell reward_cell{0, 0};
    /// Probability that the successor is shifted one cell to the right.
    double wind_epsilon = 0.0;
    /// The reward cell ends the episode: its continuation value is dropped.
    bool terminal_reward_cell = true;
    double discount = 0.9;

    void validate() const;
    State state(Cell c) const { return c.row * width + c.col; }
    Cell cell(State s) const { return {s % width, s / width}; }
};

/// States in row-major order; moves clamp at the boundary; reward 1 in the reward cell.
Mdp gridworld(const GridworldSpec& spec);

// -- inverted pendulum ------------------------------------------------------

struct PendulumSpec {
    double cart_mass = 1.0;
    double pendulum_mass = 0.1;
    double length = 0.5;
    double gravity = 9.8;
    double dt = 0.02;
    std::array<double, 4> state_weights{1.0, 0.1, 10.0, 0.1};
    double action_weight = 0.001;
    double discount = 0.99;

    void validate() const;
};

/// Linearized, Euler-discretized cart-pole with a quadratic stage cost.
/// State is (y, y_dot, theta, theta_dot); the action is the force on the cart.
struct PendulumModel {
    PendulumSpec spec;
    Matrix A;  // continuous-time drift, 4x4
    Vector B;  // input column, 4

    Vector step(const Vector& x, double a) const;
    double cost(const Vector& x, double a) const;
    /// Affine one-step kernel on stacked (x, a).
    GaussKernel kernel() const;
    /// Reward is the negated cost so every solver maximizes.
    ContinuousMdp mdp() const;
};

PendulumModel pendulum_dynamics(const PendulumSpec& spec);

struct PendulumGrid {
    GridSpec states;
    GridSpec actions;
};

/// 11 x 11 x 21 x 11 state grid and 11 force levels.
PendulumGrid default_pendulum_grid();

// -- savings problem --------------------------------------------------------

struct SavingsSpec {
    double interest = 0.03;
    double income_mean = 1.0;
    double income_std = 0.2;
    double discount = 0.95;

    void validate() const;
};

struct SavingsModel {
    SavingsSpec spec;

    /// max{(1 + gamma) x - a + i, 0}
    double next_balance(double x, double a, double income) const;
    /// min{a, x + i}
    double utility(double x, double a, double income) const;
    /// E_i min{a, x + i} for i ~ N(mu, sigma^2).
    double expected_utility(double x, double a) const;

    /// Unclamped form: x' ~ N((1 + gamma) x - a + mu, sigma^2), U(x, a) = a.
    GaussMdp gauss_mdp() const;
    /// Clamped form for discretization. The grid floor at 0 realizes the max.
    ContinuousMdp clamped_mdp() const;
};

SavingsModel savings_dynamics(const SavingsSpec& spec);

struct SavingsGrid {
    GridSpec states;
    GridSpec actions;
};

/// Balance in [0, 50] on 201 nodes, consumption in [0, 10] on 51 nodes.
SavingsGrid default_savings_grid();

}  // namespace opticdp
