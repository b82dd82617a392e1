#pragma once

#include "opticdp/mdp.hpp"
#include "opticdp/optic.hpp"
#include "opticdp/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace opticdp {

struct SolverConfig {
    /// Bound on the sup-norm distance to the fixpoint at termination.
    double tol = 1e-10;
    std::size_t max_iters = 100000;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    void validate() const;
};

struct QLearnConfig {
    double alpha = 0.5;
    double epsilon = 0.1;
    std::size_t episodes = 5000;
    std::size_t max_steps_per_episode = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct IterationRecord {
    std::size_t iteration = 0;
    double delta_sup = 0.0;
    std::size_t policy_changes = 0;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    bool converged = false;

    std::size_t iterations() const noexcept { return records.size(); }
    double final_delta() const noexcept { return records.empty() ? 0.0 : records.back().delta_sup; }

    /// CSV with header iteration,delta_sup,policy_changes.
    void write_csv(std::ostream& out) const;
};

/// Called with iteration 0 for the initial pair, then once per iteration.
using SnapshotObserver = std::function<void(std::size_t iteration, const DeterministicPolicy&, const ValueFn&)>;

/// True once a sweep change of `delta` guarantees sup-distance `tol` to the fixpoint.
bool within_tolerance(double delta, double discount, double tol);

// -- value-function steps ----------------------------------------------------

/// One Bellman backup under a fixed policy: the costate V precomposed with pi-bar ; lambda.
ValueFn value_improvement(const Mdp& m, const Policy& p, const ValueFn& v, std::size_t threads = 1);

/// Continuous models have no tabular backup; discretize them first.
ValueFn value_improvement(const ContinuousMdp&, const Policy&, const ValueFn&, std::size_t = 1) = delete;

/// Value improvement in the Gaussian setting. The result keeps the noise the
/// backward pass picks up, so it is in general a noisy affine map.
GaussKernel value_improvement(const GaussMdp& m, const AffinePolicy& p, const GaussKernel& v);

/// (lambda ; V)(x, a) for every state-action pair.
QFn action_values(const Mdp& m, const ValueFn& v, std::size_t threads = 1);

/// Greedy policy for V; ties go to the lowest action index.
DeterministicPolicy policy_improvement(const Mdp& m, const ValueFn& v, std::size_t threads = 1);

/// Fused backup V -> max_a (lambda ; V)(., a).
ValueFn bellman_optimality_backup(const Mdp& m, const ValueFn& v, std::size_t threads = 1);

/// Iterates value_improvement for a fixed policy until within tolerance.
struct EvaluationResult {
    ValueFn value;
    IterationTrace trace;
};
EvaluationResult policy_evaluation(const Mdp& m, const Policy& p, const ValueFn& v0, const SolverConfig& cfg);

// -- solvers -----------------------------------------------------------------

struct SolveResult {
    DeterministicPolicy policy;
    ValueFn value;
    IterationTrace trace;
};

/**
 * Policy iteration. One iteration is one value-improvement sweep; the sweep
 * that reaches tolerance also performs the policy-improvement step, and its
 * record counts the states whose action changed. Stops when an improvement
 * step leaves the (deterministic) policy unchanged.
 */
SolveResult policy_iteration(const Mdp& m, const Policy& p0, const ValueFn& v0, const SolverConfig& cfg,
                             const SnapshotObserver& observer = {});

/// Value iteration: greedy readout and fused max-backup once per iteration.
SolveResult value_iteration(const Mdp& m, const ValueFn& v0, const SolverConfig& cfg,
                            const SnapshotObserver& observer = {});

/// q'(x, a) = U(x, a) + beta E q(x', pi(x')), i.e. the costate q precomposed with lambda ; pi-bar.
QFn q_improvement(const Mdp& m, const Policy& p, const QFn& q, std::size_t threads = 1);

struct QSolveResult {
    DeterministicPolicy policy;
    QFn q;
    IterationTrace trace;
};

/// State-action value iteration; observer values are max_a q(x, a).
QSolveResult q_value_iteration(const Mdp& m, const QFn& q0, const SolverConfig& cfg,
                               const SnapshotObserver& observer = {});

ValueFn state_values(const QFn& q);

// -- sample-based learning ---------------------------------------------------

struct StepResult {
    State next = 0;
    double reward = 0.0;
    bool terminal = false;
};

/// Black-box environment: the learner only sees sampled transitions.
class Environment {
public:
    virtual ~Environment() = default;
    virtual std::size_t num_states() const = 0;
    virtual std::size_t num_actions() const = 0;
    virtual double discount() const = 0;
    virtual State reset(Rng& rng) const = 0;
    virtual StepResult step(State x, Action a, Rng& rng) const = 0;
};

/// Samples an MDP through its lambda optic; starts are uniform over states.
class MdpEnvironment : public Environment {
public:
    explicit MdpEnvironment(const Mdp& m);

    std::size_t num_states() const override { return num_states_; }
    std::size_t num_actions() const override { return num_actions_; }
    double discount() const override { return discount_; }
    State reset(Rng& rng) const override;
    StepResult step(State x, Action a, Rng& rng) const override;

private:
    MarkovOptic<StateAction, State, StateAction> optic_;
    std::size_t num_states_;
    std::size_t num_actions_;
    double discount_;
    std::vector<bool> terminal_;
};

struct EpisodeRecord {
    std::size_t episode = 0;
    double discounted_return = 0.0;
    std::size_t steps = 0;
    bool truncated = false;
};

struct QLearningResult {
    QFn q;
    IterationTrace trace;  // one record per episode
    std::vector<EpisodeRecord> episodes;
    std::size_t truncated_episodes = 0;
};

/// Tabular Q-learning with an epsilon-greedy behaviour policy. q starts at
/// zero unless `q0` is given.
QLearningResult q_learning(const Environment& env, const QLearnConfig& cfg, std::optional<QFn> q0 = std::nullopt);

}  // namespace opticdp
