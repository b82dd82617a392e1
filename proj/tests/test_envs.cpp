#include "opticdp/envs.hpp"
#include "opticdp/rng.hpp"
#include "support/gauss_mc.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace opticdp;

namespace {

Action act(Move m) { return static_cast<Action>(m); }

}  // namespace

TEST(Gridworld, CornerStaysAndPaysOne) {
    const GridworldSpec spec;
    const Mdp m = gridworld(spec);
    EXPECT_EQ(m.transition.apply({0, act(Move::up)}), 0u);
    EXPECT_EQ(m.reward(0, act(Move::up)), 1.0);
    EXPECT_TRUE(m.is_terminal(0));
}

TEST(Gridworld, InteriorMove) {
    const GridworldSpec spec;
    const Mdp m = gridworld(spec);
    EXPECT_EQ(m.transition.apply({spec.state({2, 2}), act(Move::left)}), spec.state({1, 2}));
    EXPECT_EQ(m.reward(spec.state({2, 2}), act(Move::left)), 0.0);
}

TEST(Gridworld, BoundariesClamp) {
    const GridworldSpec spec;
    const Mdp m = gridworld(spec);
    EXPECT_EQ(m.transition.apply({spec.state({3, 3}), act(Move::down)}), spec.state({3, 3}));
    EXPECT_EQ(m.transition.apply({spec.state({3, 3}), act(Move::right)}), spec.state({3, 3}));
    EXPECT_EQ(m.transition.apply({spec.state({0, 2}), act(Move::left)}), spec.state({0, 2}));
}

TEST(Gridworld, WindShiftsRightAfterTheMove) {
    GridworldSpec spec;
    spec.wind_epsilon = 0.1;
    const Mdp m = gridworld(spec);
    const auto d = m.transition({spec.state({1, 1}), act(Move::up)});
    EXPECT_DOUBLE_EQ(d.probability(spec.state({1, 0})), 0.9);
    EXPECT_DOUBLE_EQ(d.probability(spec.state({2, 0})), 0.1);
    // Rightmost column: the wind clamps and both outcomes coincide.
    EXPECT_EQ(m.transition({spec.state({3, 1}), act(Move::up)}), dirac(spec.state({3, 0})));
}

TEST(Gridworld, RowsAreValidAndDeterministicWithoutWind) {
    const Mdp calm = gridworld({});
    EXPECT_NO_THROW(calm.validate());
    for (State x = 0; x < 16; ++x) {
        for (Action a = 0; a < 4; ++a) EXPECT_EQ(calm.transition({x, a}).size(), 1u);
    }
    GridworldSpec spec;
    spec.wind_epsilon = 0.3;
    EXPECT_NO_THROW(gridworld(spec).validate());
}

TEST(Gridworld, SpecValidation) {
    GridworldSpec spec;
    spec.reward_cell = {4, 0};
    EXPECT_THROW(gridworld(spec), std::invalid_argument);
    spec = {};
    spec.wind_epsilon = 1.5;
    EXPECT_THROW(gridworld(spec), std::invalid_argument);
    spec = {};
    spec.width = 0;
    EXPECT_THROW(gridworld(spec), std::invalid_argument);
}

TEST(Gridworld, LargerGridAndMovedReward) {
    GridworldSpec spec;
    spec.width = 6;
    spec.height = 3;
    spec.reward_cell = {5, 2};
    const Mdp m = gridworld(spec);
    EXPECT_EQ(m.num_states(), 18u);
    EXPECT_EQ(m.reward(spec.state({5, 2}), 0), 1.0);
    EXPECT_EQ(m.states.coordinates[spec.state({4, 1})], (std::vector<double>{4.0, 1.0}));
}

TEST(Pendulum, MatricesAsPrinted) {
    const PendulumModel p = pendulum_dynamics({});
    Matrix a(4, 4);
    a << 0, 1, 0, 0,  //
        0, 0, -0.1 * 9.8 / 1.0, 0,  //
        0, 0, 0, 1,  //
        0, 0, 1.1 * 9.8 / 0.5, 0;
    EXPECT_EQ(p.A, a);
    EXPECT_NEAR(p.A(1, 2), -0.98, 1e-15);
    EXPECT_NEAR(p.A(3, 2), 21.56, 1e-12);
    Vector b(4);
    b << 0, 1.0, 0, -1.0 / 0.5;
    EXPECT_EQ(p.B, b);
}

TEST(Pendulum, EquilibriumAndEulerStep) {
    const PendulumModel p = pendulum_dynamics({});
    const Vector zero = Vector::Zero(4);
    EXPECT_EQ(p.step(zero, 0.0), zero);
    EXPECT_EQ(p.cost(zero, 0.0), 0.0);
    Vector x(4);
    x << 0.1, -0.2, 0.05, 0.3;
    const Vector expected = x + 0.02 * (p.A * x + p.B * 1.5);
    EXPECT_LT((p.step(x, 1.5) - expected).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_DOUBLE_EQ(p.cost(x, 2.0), 0.01 + 0.1 * 0.04 + 10 * 0.0025 + 0.1 * 0.09 + 0.001 * 4);
    EXPECT_DOUBLE_EQ(p.mdp().reward(x, Vector::Constant(1, 2.0)), -p.cost(x, 2.0));
}

TEST(Pendulum, InvalidSpec) {
    PendulumSpec spec;
    spec.dt = 0.0;
    EXPECT_THROW(pendulum_dynamics(spec), std::invalid_argument);
}

TEST(Savings, SteadyStateAtZeroInterest) {
    SavingsSpec spec;
    spec.interest = 0.0;
    spec.income_std = 0.0;
    const SavingsModel s = savings_dynamics(spec);
    EXPECT_EQ(s.next_balance(10.0, spec.income_mean, spec.income_mean), 10.0);
}

TEST(Savings, ClampsAtZero) {
    SavingsSpec spec;
    spec.income_mean = 2.0;
    spec.income_std = 0.0;
    const SavingsModel s = savings_dynamics(spec);
    EXPECT_EQ(s.next_balance(0.0, 5.0, 2.0), 0.0);
    EXPECT_EQ(s.utility(0.0, 5.0, 2.0), 2.0);
    EXPECT_EQ(s.expected_utility(0.0, 5.0), 2.0);
}

TEST(Savings, GaussFormIsTheAffinePushforward) {
    const SavingsModel s = savings_dynamics({});
    const GaussMdp g = s.gauss_mdp();
    Vector xa(2);
    xa << 10.0, 3.0;
    const auto out = gauss_push(GaussState(xa, Matrix::Zero(2, 2)), g.transition);
    EXPECT_DOUBLE_EQ(out.mean[0], 1.03 * 10.0 - 3.0 + 1.0);
    EXPECT_DOUBLE_EQ(out.cov(0, 0), 0.04);
}

TEST(Savings, ExpectedUtilityMatchesMonteCarlo) {
    const SavingsModel s = savings_dynamics({});
    Rng rng(71);
    std::normal_distribution<double> income(s.spec.income_mean, s.spec.income_std);
    for (double x : {0.0, 0.5, 2.0}) {
        for (double a : {0.5, 1.2, 3.0}) {
            constexpr int kDraws = 200000;
            double sum = 0.0, sq = 0.0;
            for (int i = 0; i < kDraws; ++i) {
                const double u = s.utility(x, a, income(rng.engine()));
                sum += u;
                sq += u * u;
            }
            const double mean = sum / kDraws;
            const double se = std::sqrt(std::max(sq / kDraws - mean * mean, 0.0) / kDraws);
            // When every draw lands on one branch the sample spread is zero; the
            // far tail still carries mass below 1e-7.
            EXPECT_NEAR(s.expected_utility(x, a), mean, 5 * se + 1e-7) << "x=" << x << " a=" << a;
        }
    }
}

TEST(Savings, DefaultGrid) {
    const SavingsGrid g = default_savings_grid();
    EXPECT_EQ(g.states.node_count(), 201u);
    EXPECT_EQ(g.actions.node_count(), 51u);
    EXPECT_EQ(g.states.axes[0].upper, 50.0);
    EXPECT_EQ(g.actions.axes[0].upper, 10.0);
}
