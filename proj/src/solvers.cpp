#include "opticdp/solvers.hpp"

#include "opticdp/csv.hpp"
#include "opticdp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace opticdp {

namespace {

void require_finite(const Mdp& m, std::size_t value_size) {
    if (value_size != m.num_states()) {
        throw std::invalid_argument("value table has " + std::to_string(value_size) + " entries for " +
                                    std::to_string(m.num_states()) + " states");
    }
}

std::size_t count_changes(const DeterministicPolicy& a, const DeterministicPolicy& b) {
    std::size_t n = 0;
    for (std::size_t x = 0; x < a.actions.size(); ++x) n += (a.actions[x] != b.actions[x]) ? 1 : 0;
    return n;
}

/// Most likely action per state; ties to the lowest index.
DeterministicPolicy determinize(const Policy& p) {
    if (const auto* det = std::get_if<DeterministicPolicy>(&p)) return *det;
    const auto& stoch = std::get<StochasticPolicy>(p);
    DeterministicPolicy out;
    for (const auto& d : stoch.actions) {
        Action best = d.support().front().first;
        double best_w = -1.0;
        for (const auto& [a, w] : d) {
            if (w > best_w) {
                best_w = w;
                best = a;
            }
        }
        out.actions.push_back(best);
    }
    return out;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("solver max_iters must be >= 1");
    if (threads < 1) throw std::invalid_argument("solver threads must be >= 1");
}

void QLearnConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("q-learning alpha must lie in (0, 1]");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("q-learning epsilon must lie in [0, 1]");
    if (episodes < 1) throw std::invalid_argument("q-learning episodes must be >= 1");
    if (max_steps_per_episode < 1) throw std::invalid_argument("q-learning max_steps_per_episode must be >= 1");
}

void IterationTrace::write_csv(std::ostream& out) const {
    out << "iteration,delta_sup,policy_changes\n";
    for (const auto& r : records) {
        out << r.iteration << ',' << format_double(r.delta_sup) << ',' << r.policy_changes << '\n';
    }
}

bool within_tolerance(double delta, double discount, double tol) {
    // ||V_k - V*|| <= beta / (1 - beta) * ||V_k - V_{k-1}||
    return delta * discount < tol * (1.0 - discount);
}

ValueFn value_improvement(const Mdp& m, const Policy& p, const ValueFn& v, std::size_t threads) {
    require_finite(m, v.size());
    const auto improved = apply_costate(compose(policy_lift(p), lambda_optic(m)), std::cref(v));
    ValueFn out = ValueFn::zeros(m.num_states());
    parallel_for(m.num_states(), threads, [&](std::size_t begin, std::size_t end) {
        for (State x = begin; x < end; ++x) out.values[x] = improved(x);
    });
    return out;
}

GaussKernel value_improvement(const GaussMdp& m, const AffinePolicy& p, const GaussKernel& v) {
    return apply_costate(compose(policy_lift_gauss(p, m.state_dim), lambda_gauss_optic(m)), v);
}

QFn action_values(const Mdp& m, const ValueFn& v, std::size_t threads) {
    require_finite(m, v.size());
    const auto q_of = apply_costate(lambda_optic(m), std::cref(v));
    QFn q(m.num_states(), m.num_actions());
    parallel_for(m.num_states(), threads, [&](std::size_t begin, std::size_t end) {
        for (State x = begin; x < end; ++x) {
            for (Action a = 0; a < m.num_actions(); ++a) q.at(x, a) = q_of(StateAction{x, a});
        }
    });
    return q;
}

DeterministicPolicy policy_improvement(const Mdp& m, const ValueFn& v, std::size_t threads) {
    return greedy_policy(action_values(m, v, threads));
}

ValueFn bellman_optimality_backup(const Mdp& m, const ValueFn& v, std::size_t threads) {
    return state_values(action_values(m, v, threads));
}

ValueFn state_values(const QFn& q) {
    ValueFn v = ValueFn::zeros(q.num_states());
    for (State x = 0; x < q.num_states(); ++x) v.values[x] = q(x, greedy_action(q, x));
    return v;
}

EvaluationResult policy_evaluation(const Mdp& m, const Policy& p, const ValueFn& v0, const SolverConfig& cfg) {
    cfg.validate();
    EvaluationResult out{v0, {}};
    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        ValueFn next = value_improvement(m, p, out.value, cfg.threads);
        const double delta = sup_distance(next.values, out.value.values);
        out.value = std::move(next);
        out.trace.records.push_back({it, delta, 0});
        if (within_tolerance(delta, m.discount, cfg.tol)) {
            out.trace.converged = true;
            break;
        }
    }
    return out;
}

SolveResult policy_iteration(const Mdp& m, const Policy& p0, const ValueFn& v0, const SolverConfig& cfg,
                             const SnapshotObserver& observer) {
    cfg.validate();
    require_finite(m, v0.size());
    Policy policy = p0;
    bool deterministic = std::holds_alternative<DeterministicPolicy>(policy);
    DeterministicPolicy current = determinize(policy);
    SolveResult out{current, v0, {}};
    if (observer) observer(0, current, out.value);

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        ValueFn next = value_improvement(m, policy, out.value, cfg.threads);
        const double delta = sup_distance(next.values, out.value.values);
        out.value = std::move(next);
        if (!within_tolerance(delta, m.discount, cfg.tol)) {
            out.trace.records.push_back({it, delta, 0});
            if (observer) observer(it, current, out.value);
            continue;
        }
        DeterministicPolicy improved = policy_improvement(m, out.value, cfg.threads);
        const std::size_t changes = count_changes(improved, current);
        out.trace.records.push_back({it, delta, changes});
        const bool stable = deterministic && changes == 0;
        current = std::move(improved);
        policy = current;
        deterministic = true;
        if (observer) observer(it, current, out.value);
        if (stable) {
            out.trace.converged = true;
            break;
        }
    }
    out.policy = current;
    return out;
}

SolveResult value_iteration(const Mdp& m, const ValueFn& v0, const SolverConfig& cfg,
                            const SnapshotObserver& observer) {
    cfg.validate();
    require_finite(m, v0.size());
    SolveResult out{constant_policy(m.num_states(), 0), v0, {}};
    if (observer) observer(0, out.policy, out.value);

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        const QFn q = action_values(m, out.value, cfg.threads);
        DeterministicPolicy greedy = greedy_policy(q);
        ValueFn next = state_values(q);
        const double delta = sup_distance(next.values, out.value.values);
        out.trace.records.push_back({it, delta, count_changes(greedy, out.policy)});
        out.value = std::move(next);
        out.policy = std::move(greedy);
        if (observer) observer(it, out.policy, out.value);
        if (within_tolerance(delta, m.discount, cfg.tol)) {
            out.trace.converged = true;
            break;
        }
    }
    out.policy = policy_improvement(m, out.value, cfg.threads);
    return out;
}

QFn q_improvement(const Mdp& m, const Policy& p, const QFn& q, std::size_t threads) {
    if (q.num_states() != m.num_states() || q.num_actions != m.num_actions()) {
        throw std::invalid_argument("q table shape does not match the MDP");
    }
    const auto improved = apply_costate(compose(lambda_optic(m), policy_lift(p)), std::cref(q));
    QFn out(m.num_states(), m.num_actions());
    parallel_for(m.num_states(), threads, [&](std::size_t begin, std::size_t end) {
        for (State x = begin; x < end; ++x) {
            for (Action a = 0; a < m.num_actions(); ++a) out.at(x, a) = improved(StateAction{x, a});
        }
    });
    return out;
}

QSolveResult q_value_iteration(const Mdp& m, const QFn& q0, const SolverConfig& cfg,
                               const SnapshotObserver& observer) {
    cfg.validate();
    QSolveResult out{greedy_policy(q0), q0, {}};
    if (observer) observer(0, out.policy, state_values(out.q));

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        DeterministicPolicy greedy = greedy_policy(out.q);
        QFn next = q_improvement(m, greedy, out.q, cfg.threads);
        const double delta = sup_distance(next.values, out.q.values);
        out.trace.records.push_back({it, delta, count_changes(greedy, out.policy)});
        out.q = std::move(next);
        out.policy = std::move(greedy);
        if (observer) observer(it, out.policy, state_values(out.q));
        if (within_tolerance(delta, m.discount, cfg.tol)) {
            out.trace.converged = true;
            break;
        }
    }
    out.policy = greedy_policy(out.q);
    return out;
}

MdpEnvironment::MdpEnvironment(const Mdp& m)
    : optic_(lambda_optic(m)),
      num_states_(m.num_states()),
      num_actions_(m.num_actions()),
      discount_(m.discount),
      terminal_(m.terminal) {}

State MdpEnvironment::reset(Rng& rng) const { return rng.index(num_states_); }

StepResult MdpEnvironment::step(State x, Action a, Rng& rng) const {
    const auto joint = optic_.forward(StateAction{x, a});
    const auto& [residual, next] = sample(joint, rng.uniform());
    // Zero continuation isolates the immediate reward.
    const double reward = optic_.backward(residual, 0.0);
    const bool terminal = !terminal_.empty() && terminal_[x];
    return {next, reward, terminal};
}

QLearningResult q_learning(const Environment& env, const QLearnConfig& cfg, std::optional<QFn> q0) {
    cfg.validate();
    const std::size_t nx = env.num_states();
    const std::size_t na = env.num_actions();
    QLearningResult out{q0 ? std::move(*q0) : QFn(nx, na), {}, {}, 0};
    if (out.q.num_states() != nx || out.q.num_actions != na) {
        throw std::invalid_argument("initial q table shape does not match the environment");
    }
    const double beta = env.discount();
    const Rng root(cfg.seed);

    for (std::size_t episode = 1; episode <= cfg.episodes; ++episode) {
        Rng rng = root.split(episode);
        const std::vector<double> before = out.q.values;
        const DeterministicPolicy greedy_before = greedy_policy(out.q);

        EpisodeRecord record{episode, 0.0, 0, true};
        double weight = 1.0;
        State x = env.reset(rng);
        for (std::size_t t = 0; t < cfg.max_steps_per_episode; ++t) {
            const double explore = rng.uniform();
            const Action a = explore < cfg.epsilon ? rng.index(na) : greedy_action(out.q, x);
            const StepResult s = env.step(x, a, rng);
            const double target = s.reward + (s.terminal ? 0.0 : beta * out.q(s.next, greedy_action(out.q, s.next)));
            double& cell = out.q.at(x, a);
            cell = (1.0 - cfg.alpha) * cell + cfg.alpha * target;
            record.discounted_return += weight * s.reward;
            weight *= beta;
            ++record.steps;
            if (s.terminal) {
                record.truncated = false;
                break;
            }
            x = s.next;
        }
        if (record.truncated) ++out.truncated_episodes;
        out.trace.records.push_back(
            {episode, sup_distance(out.q.values, before), count_changes(greedy_policy(out.q), greedy_before)});
        out.episodes.push_back(record);
    }
    out.trace.converged = true;
    return out;
}

}  // namespace opticdp
