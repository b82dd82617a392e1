#include "opticdp/envs.hpp"
#include "opticdp/solvers.hpp"
#include "support/reference_panels.hpp"
#include "support/random_mdp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace opticdp;
namespace ts = testing_support;

namespace {

constexpr double kBeta = 0.9;

ValueFn panel_values(const ts::Exponents& e) {
    GridworldSpec spec;
    ValueFn v = ValueFn::zeros(16);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            v.values[spec.state({c, r})] = e[r][c] < 0 ? 0.0 : std::pow(kBeta, e[r][c]);
        }
    }
    return v;
}

DeterministicPolicy panel_policy(const ts::Arrows& arrows) {
    GridworldSpec spec;
    DeterministicPolicy p{std::vector<Action>(16)};
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const std::string a = arrows[r][c];
            Action idx = 0;
            while (kMoveLabels[idx] != a) ++idx;
            p.actions[spec.state({c, r})] = idx;
        }
    }
    return p;
}

void expect_values_near(const ValueFn& a, const ValueFn& b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a(i), b(i), tol) << "state " << i;
}

struct Snapshots {
    std::vector<DeterministicPolicy> policies;
    std::vector<ValueFn> values;
    SnapshotObserver observer() {
        return [this](std::size_t, const DeterministicPolicy& p, const ValueFn& v) {
            policies.push_back(p);
            values.push_back(v);
        };
    }
};

}  // namespace

// -- one-step operations -------------------------------------------------------

TEST(ValueImprovement, FirstPolicyIterationStep) {
    const Mdp m = gridworld({});
    const ValueFn v1 = value_improvement(m, constant_policy(16, 0), panel_values(ts::kE0));
    expect_values_near(v1, panel_values(ts::kCol1), 1e-12);
}

TEST(ValueImprovement, FixpointIsUnchanged) {
    Rng rng(41);
    SolverConfig cfg;
    cfg.tol = 1e-13;
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = ts::random_tables(rng);
        const Mdp m = ts::to_mdp(t);
        std::vector<Action> pi(t.n);
        for (auto& a : pi) a = rng.index(t.k);
        const ValueFn v(ts::ref_policy_value(t, pi));
        expect_values_near(value_improvement(m, DeterministicPolicy{pi}, v), v, 1e-9);
    }
}

TEST(ValueImprovement, WindyCellIsTwoOutcomeExpectation) {
    GridworldSpec spec;
    spec.wind_epsilon = 0.1;
    spec.terminal_reward_cell = false;
    const Mdp m = gridworld(spec);
    Rng rng(42);
    const ValueFn v(ts::random_values(rng, 16));
    const ValueFn out = value_improvement(m, constant_policy(16, static_cast<Action>(Move::up)), v);
    const State x = spec.state({1, 1});
    const double u = m.reward(x, 0);
    const double expected = 0.9 * (u + kBeta * v(spec.state({1, 0}))) + 0.1 * (u + kBeta * v(spec.state({2, 0})));
    EXPECT_NEAR(out(x), expected, 1e-12);
}

TEST(ValueImprovement, MatchesReferenceOnRandomMdps) {
    Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = ts::random_tables(rng);
        const Mdp m = ts::to_mdp(t);
        std::vector<Action> pi(t.n);
        for (auto& a : pi) a = rng.index(t.k);
        const ValueFn v(ts::random_values(rng, t.n));
        const auto ref = ts::ref_policy_backup(t, pi, v.values);
        const auto out = value_improvement(m, DeterministicPolicy{pi}, v, 1 + rng.index(3));
        for (State x = 0; x < t.n; ++x) EXPECT_NEAR(out(x), ref[x], 1e-12);
    }
}

template <class M>
concept Improvable = requires(const M& m, const Policy& p, const ValueFn& v) { value_improvement(m, p, v); };

// Continuous models have to be discretized first; the overload is deleted.
static_assert(Improvable<Mdp>);
static_assert(!Improvable<ContinuousMdp>);

TEST(PolicyImprovement, SingleStepOnInitialGridworldChangesOnlyOneCell) {
    const Mdp m = gridworld({});
    const auto p = policy_improvement(m, panel_values(ts::kE0));
    for (State x = 0; x < 16; ++x) {
        const Action expected = x == 1 ? static_cast<Action>(Move::left) : static_cast<Action>(Move::up);
        EXPECT_EQ(p(x), expected) << "state " << x;
    }
}

TEST(PolicyImprovement, ConvergedColumnGivesSecondColumnLeft) {
    const Mdp m = gridworld({});
    const auto p = policy_improvement(m, panel_values(ts::kCol3));
    EXPECT_EQ(p.actions, panel_policy(ts::kSecondColumnLeft).actions);
}

TEST(PolicyImprovement, AllTiesPickTheFirstAction) {
    Rng rng(44);
    auto t = ts::random_tables(rng);
    for (auto& r : t.r) r = 0.0;
    const auto p = policy_improvement(ts::to_mdp(t), ValueFn::zeros(t.n));
    for (Action a : p.actions) EXPECT_EQ(a, 0u);
}

// -- gridworld panels ------------------------------------------------------------

TEST(PolicyIteration, ReproducesTopRowPanels) {
    const Mdp m = gridworld({});
    Snapshots s;
    const auto r = policy_iteration(m, constant_policy(16, 0), panel_values(ts::kE0), {}, s.observer());
    ASSERT_GE(s.values.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) {
        expect_values_near(s.values[k], panel_values(ts::kPolicyIterationRow[k].values), 1e-9);
        EXPECT_EQ(s.policies[k].actions, panel_policy(ts::kPolicyIterationRow[k].arrows).actions) << "panel " << k;
    }
    EXPECT_TRUE(r.trace.converged);
    EXPECT_NEAR(r.value(0), 1.0, 1e-9);
    EXPECT_NEAR(r.value(4), 0.9, 1e-9);
    EXPECT_NEAR(r.value(8), 0.81, 1e-9);
    EXPECT_NEAR(r.value(12), 0.729, 1e-9);
}

TEST(ValueIteration, ReproducesBottomRowPanels) {
    const Mdp m = gridworld({});
    Snapshots s;
    const auto r = value_iteration(m, panel_values(ts::kE0), {}, s.observer());
    ASSERT_GE(s.values.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) {
        expect_values_near(s.values[k], panel_values(ts::kValueIterationRow[k].values), 1e-9);
        EXPECT_EQ(s.policies[k].actions, panel_policy(ts::kValueIterationRow[k].arrows).actions) << "panel " << k;
    }
    EXPECT_TRUE(r.trace.converged);
}

TEST(Gridworld, OptimalValuesArePowersOfTheManhattanDistance) {
    GridworldSpec spec;
    const auto r = value_iteration(gridworld(spec), ValueFn::zeros(16), {});
    for (State x = 0; x < 16; ++x) {
        const Cell c = spec.cell(x);
        EXPECT_NEAR(r.value(x), std::pow(kBeta, static_cast<double>(c.col + c.row)), 1e-9);
    }
}

TEST(QIteration, MaxOverActionsReproducesConvergedGrid) {
    GridworldSpec spec;
    const Mdp m = gridworld(spec);
    const auto r = q_value_iteration(m, QFn(16, 4), {});
    const auto v = state_values(r.q);
    for (State x = 0; x < 16; ++x) {
        const Cell c = spec.cell(x);
        EXPECT_NEAR(v(x), std::pow(kBeta, static_cast<double>(c.col + c.row)), 1e-9);
    }
}

// -- q improvement -----------------------------------------------------------------

TEST(QImprovement, DeterministicDefinition) {
    Rng rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = ts::random_deterministic_tables(rng);
        const Mdp m = ts::to_mdp(t);
        QFn q(t.n, t.k);
        for (auto& e : q.values) e = rng.uniform();
        const auto pi = greedy_policy(q);
        const auto out = q_improvement(m, pi, q);
        for (State x = 0; x < t.n; ++x) {
            for (Action a = 0; a < t.k; ++a) {
                State next = 0;
                while (t.prob(x, a, next) != 1.0) ++next;
                EXPECT_NEAR(out(x, a), t.reward(x, a) + t.beta * q(next, pi(next)), 1e-12);
            }
        }
    }
}

TEST(QImprovement, GridworldCorner) {
    GridworldSpec spec;
    spec.terminal_reward_cell = false;
    const Mdp m = gridworld(spec);
    Rng rng(46);
    QFn q(16, 4);
    for (auto& e : q.values) e = rng.uniform();
    const auto pi = greedy_policy(q);
    const auto out = q_improvement(m, pi, q);
    for (Move a : {Move::up, Move::left}) {
        EXPECT_NEAR(out(0, static_cast<Action>(a)), 1.0 + kBeta * q(0, pi(0)), 1e-12);
    }
}

TEST(QImprovement, ZeroContinuationGivesReward) {
    Rng rng(47);
    const auto t = ts::random_tables(rng);
    const auto out = q_improvement(ts::to_mdp(t), constant_policy(t.n, 0), QFn(t.n, t.k));
    for (State x = 0; x < t.n; ++x) {
        for (Action a = 0; a < t.k; ++a) EXPECT_DOUBLE_EQ(out(x, a), t.reward(x, a));
    }
}

// -- properties on random MDPs -----------------------------------------------------

TEST(Properties, Contraction) {
    Rng rng(48);
    ts::TableOptions opt;
    opt.max_states = 8;
    opt.max_actions = 4;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto t = ts::random_tables(rng, opt);
        const Mdp m = ts::to_mdp(t);
        const ValueFn a(ts::random_values(rng, t.n)), b(ts::random_values(rng, t.n));
        const double lhs = sup_distance(bellman_optimality_backup(m, a).values, bellman_optimality_backup(m, b).values);
        ASSERT_LE(lhs, t.beta * sup_distance(a.values, b.values) + 1e-12);
    }
}

TEST(Properties, BackupMatchesReference) {
    Rng rng(49);
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = ts::random_tables(rng);
        const ValueFn v(ts::random_values(rng, t.n));
        const auto out = bellman_optimality_backup(ts::to_mdp(t), v);
        const auto ref = ts::ref_backup(t, v.values);
        for (State x = 0; x < t.n; ++x) ASSERT_NEAR(out(x), ref[x], 1e-12);
    }
}

TEST(Properties, MonotoneImprovement) {
    Rng rng(50);
    SolverConfig eval;
    eval.tol = 1e-12;
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = ts::random_tables(rng);
        const Mdp m = ts::to_mdp(t);
        DeterministicPolicy base{std::vector<Action>(t.n)};
        for (auto& a : base.actions) a = rng.index(t.k);
        const auto v = policy_evaluation(m, base, ValueFn::zeros(t.n), eval).value;
        const auto greedy = policy_improvement(m, v);
        const auto v2 = policy_evaluation(m, greedy, ValueFn::zeros(t.n), eval).value;
        for (State x = 0; x < t.n; ++x) ASSERT_GE(v2(x), v(x) - 1e-9);
    }
}

TEST(Properties, PolicyValueMatchesTruncatedRollout) {
    Rng rng(51);
    SolverConfig eval;
    eval.tol = 1e-12;
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = ts::random_deterministic_tables(rng);
        const Mdp m = ts::to_mdp(t);
        DeterministicPolicy pi{std::vector<Action>(t.n)};
        for (auto& a : pi.actions) a = rng.index(t.k);
        const auto v = policy_evaluation(m, pi, ValueFn::zeros(t.n), eval).value;
        double max_u = 0.0;
        for (double r : t.r) max_u = std::max(max_u, std::abs(r));
        constexpr int kSteps = 200;
        for (State x0 = 0; x0 < t.n; ++x0) {
            double sum = 0.0, disc = 1.0;
            State x = x0;
            for (int k = 0; k < kSteps; ++k) {
                sum += disc * t.reward(x, pi(x));
                disc *= t.beta;
                State next = 0;
                while (t.prob(x, pi(x), next) != 1.0) ++next;
                x = next;
            }
            ASSERT_NEAR(v(x0), sum, std::pow(t.beta, kSteps) * max_u / (1 - t.beta) + 1e-9);
        }
    }
}

TEST(Properties, FixpointCharacterization) {
    Rng rng(52);
    SolverConfig cfg;
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = ts::random_tables(rng);
        const auto r = value_iteration(ts::to_mdp(t), ValueFn::zeros(t.n), cfg);
        ASSERT_TRUE(r.trace.converged);
        const auto backed = ts::ref_backup(t, r.value.values);
        for (State x = 0; x < t.n; ++x) ASSERT_LT(std::abs(r.value(x) - backed[x]), cfg.tol);
        const auto exact = ts::ref_optimal_value(t);
        for (State x = 0; x < t.n; ++x) ASSERT_LE(std::abs(r.value(x) - exact[x]), cfg.tol + 1e-12);
    }
}

TEST(Properties, SolversAgree) {
    Rng rng(53);
    SolverConfig cfg;
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = ts::random_tables(rng);
        const Mdp m = ts::to_mdp(t);
        const auto pi = policy_iteration(m, constant_policy(t.n, 0), ValueFn::zeros(t.n), cfg);
        const auto vi = value_iteration(m, ValueFn::zeros(t.n), cfg);
        const auto qi = q_value_iteration(m, QFn(t.n, t.k), cfg);
        EXPECT_LE(sup_distance(pi.value.values, vi.value.values), 2 * cfg.tol);
        EXPECT_LE(sup_distance(state_values(qi.q).values, vi.value.values), 2 * cfg.tol);
        const auto exact = ts::ref_optimal_value(t);
        for (State x = 0; x < t.n; ++x) {
            std::vector<double> q(t.k);
            for (Action a = 0; a < t.k; ++a) q[a] = ts::q_of(t, exact, x, a);
            std::vector<double> sorted = q;
            std::sort(sorted.rbegin(), sorted.rend());
            if (t.k > 1 && sorted[0] - sorted[1] <= 10 * cfg.tol) continue;
            EXPECT_EQ(pi.policy(x), vi.policy(x));
            EXPECT_EQ(qi.policy(x), vi.policy(x));
        }
    }
}

TEST(Solvers, SingleActionPolicyIterationIsEvaluation) {
    Rng rng(54);
    ts::TableOptions opt;
    opt.max_actions = 1;
    const auto t = ts::random_tables(rng, opt);
    SolverConfig cfg;
    const auto r = policy_iteration(ts::to_mdp(t), constant_policy(t.n, 0), ValueFn::zeros(t.n), cfg);
    const auto ref = ts::ref_policy_value(t, std::vector<Action>(t.n, 0));
    for (State x = 0; x < t.n; ++x) EXPECT_NEAR(r.value(x), ref[x], 1e-9);
    const auto q = q_value_iteration(ts::to_mdp(t), QFn(t.n, 1), cfg);
    for (State x = 0; x < t.n; ++x) EXPECT_NEAR(q.q(x, 0), ref[x], 1e-9);
}

TEST(Solvers, ZeroRewardConvergesImmediately) {
    Rng rng(55);
    auto t = ts::random_tables(rng);
    for (auto& r : t.r) r = 0.0;
    t.beta = 0.1;
    const auto r = value_iteration(ts::to_mdp(t), ValueFn::zeros(t.n), {});
    EXPECT_TRUE(r.trace.converged);
    EXPECT_EQ(r.trace.iterations(), 1u);
    for (double v : r.value.values) EXPECT_EQ(v, 0.0);
}

TEST(Solvers, MaxItersFlagsNonConvergence) {
    SolverConfig cfg;
    cfg.max_iters = 2;
    const auto r = value_iteration(gridworld({}), ValueFn::zeros(16), cfg);
    EXPECT_FALSE(r.trace.converged);
    EXPECT_EQ(r.trace.iterations(), 2u);
    const auto p = policy_iteration(gridworld({}), constant_policy(16, 0), ValueFn::zeros(16), cfg);
    EXPECT_FALSE(p.trace.converged);
}

TEST(Solvers, ConfigValidation) {
    SolverConfig cfg;
    cfg.tol = 0.0;
    EXPECT_THROW(value_iteration(gridworld({}), ValueFn::zeros(16), cfg), std::invalid_argument);
    cfg = {};
    cfg.max_iters = 0;
    EXPECT_THROW(value_iteration(gridworld({}), ValueFn::zeros(16), cfg), std::invalid_argument);
    QLearnConfig q;
    q.alpha = 0.0;
    EXPECT_THROW(q.validate(), std::invalid_argument);
    q = {};
    q.epsilon = 1.5;
    EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Solvers, ThreadedSweepsMatchSequential) {
    Rng rng(56);
    ts::TableOptions opt;
    opt.max_states = 40;
    const auto t = ts::random_tables(rng, opt);
    const Mdp m = ts::to_mdp(t);
    SolverConfig one, four;
    four.threads = 4;
    const auto a = value_iteration(m, ValueFn::zeros(t.n), one);
    const auto b = value_iteration(m, ValueFn::zeros(t.n), four);
    EXPECT_EQ(a.value.values, b.value.values);
    EXPECT_EQ(a.policy.actions, b.policy.actions);
}

TEST(Trace, CsvHeaderAndRows) {
    const auto r = value_iteration(gridworld({}), ValueFn::zeros(16), {});
    std::ostringstream out;
    r.trace.write_csv(out);
    const std::string s = out.str();
    EXPECT_EQ(s.rfind("iteration,delta_sup,policy_changes\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), r.trace.iterations() + 1);
    for (const auto& rec : r.trace.records) EXPECT_GE(rec.delta_sup, 0.0);
}

// -- Q-learning --------------------------------------------------------------------

TEST(QLearning, AlphaOneOverwritesWithTheTarget) {
    GridworldSpec spec;
    spec.terminal_reward_cell = false;
    const Mdp m = gridworld(spec);
    QLearnConfig cfg;
    cfg.alpha = 1.0;
    cfg.epsilon = 1.0;
    cfg.episodes = 1;
    cfg.max_steps_per_episode = 1;
    cfg.seed = 3;
    QFn q0(16, 4);
    for (std::size_t i = 0; i < q0.values.size(); ++i) q0.values[i] = 0.01 * static_cast<double>(i);
    const auto r = q_learning(MdpEnvironment(m), cfg, q0);
    std::size_t changed = 0;
    for (State x = 0; x < 16; ++x) {
        for (Action a = 0; a < 4; ++a) {
            if (r.q(x, a) == q0(x, a)) continue;
            ++changed;
            const State next = m.transition.apply({x, a});
            double best = -INFINITY;
            for (Action b = 0; b < 4; ++b) best = std::max(best, q0(next, b));
            EXPECT_DOUBLE_EQ(r.q(x, a), m.reward(x, a) + kBeta * best);
        }
    }
    EXPECT_LE(changed, 1u);
}

TEST(QLearning, GreedyOnTheFixpointStaysPut) {
    const Mdp m = gridworld({});
    const auto star = q_value_iteration(m, QFn(16, 4), {});
    QLearnConfig cfg;
    cfg.epsilon = 0.0;
    cfg.episodes = 200;
    const auto r = q_learning(MdpEnvironment(m), cfg, star.q);
    EXPECT_EQ(greedy_policy(r.q).actions, star.policy.actions);
    EXPECT_LE(sup_distance(r.q.values, star.q.values), 1e-9);
    // Greedy episodes walk a shortest path, so the return is beta^(steps - 1).
    for (const auto& e : r.episodes) {
        EXPECT_FALSE(e.truncated);
        EXPECT_NEAR(e.discounted_return, std::pow(kBeta, static_cast<double>(e.steps - 1)), 1e-12);
    }
}

TEST(QLearning, SeededRunsAreIdentical) {
    const Mdp m = gridworld({});
    QLearnConfig cfg;
    cfg.episodes = 300;
    cfg.seed = 7;
    const auto a = q_learning(MdpEnvironment(m), cfg);
    const auto b = q_learning(MdpEnvironment(m), cfg);
    EXPECT_EQ(a.q.values, b.q.values);
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        EXPECT_EQ(a.trace.records[i].delta_sup, b.trace.records[i].delta_sup);
    }
    cfg.seed = 8;
    EXPECT_NE(q_learning(MdpEnvironment(m), cfg).q.values, a.q.values);
}

TEST(QLearning, ConvergesOnGridworld) {
    const Mdp m = gridworld({});
    const auto star = q_value_iteration(m, QFn(16, 4), {});
    QLearnConfig cfg;
    cfg.seed = 7;
    const auto r = q_learning(MdpEnvironment(m), cfg);
    EXPECT_LE(sup_distance(r.q.values, star.q.values), 0.05);
    EXPECT_EQ(r.trace.records.size(), cfg.episodes);
}

TEST(QLearning, TruncationIsCountedNotThrown) {
    GridworldSpec spec;
    spec.terminal_reward_cell = false;  // episodes never end on their own
    QLearnConfig cfg;
    cfg.episodes = 10;
    cfg.max_steps_per_episode = 5;
    const auto r = q_learning(MdpEnvironment(gridworld(spec)), cfg);
    EXPECT_EQ(r.truncated_episodes, 10u);
    for (const auto& e : r.episodes) {
        EXPECT_TRUE(e.truncated);
        EXPECT_EQ(e.steps, 5u);
    }
}
