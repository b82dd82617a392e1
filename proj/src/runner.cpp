#include "opticdp/runner.hpp"

#include "opticdp/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace opticdp {

namespace {

constexpr const char* kEnv = "environment";
constexpr const char* kSolver = "solver";
constexpr const char* kOutput = "output";

std::string environment_name(EnvironmentKind k) {
    switch (k) {
        case EnvironmentKind::gridworld: return "gridworld";
        case EnvironmentKind::pendulum: return "pendulum";
        case EnvironmentKind::savings: return "savings";
    }
    return "?";
}

EnvironmentConfig preset_environment(const std::string& name) {
    EnvironmentConfig env;
    env.preset = name;
    if (name == "gridworld4") {
        env.kind = EnvironmentKind::gridworld;
    } else if (name == "pendulum-default") {
        env.kind = EnvironmentKind::pendulum;
        const PendulumGrid g = default_pendulum_grid();
        env.state_grid = g.states;
        env.action_grid = g.actions;
    } else if (name == "savings-default") {
        env.kind = EnvironmentKind::savings;
        const SavingsGrid g = default_savings_grid();
        env.state_grid = g.states;
        env.action_grid = g.actions;
    } else {
        std::string known;
        for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
        throw ConfigError("[environment] preset '" + name + "' does not exist (known: " + known + ")");
    }
    return env;
}

EnvironmentConfig inline_environment(const std::string& type) {
    EnvironmentConfig env;
    if (type == "gridworld") {
        env = preset_environment("gridworld4");
    } else if (type == "pendulum") {
        env = preset_environment("pendulum-default");
    } else if (type == "savings") {
        env = preset_environment("savings-default");
    } else {
        throw ConfigError("[environment] type must be gridworld, pendulum or savings, got '" + type + "'");
    }
    env.preset.clear();
    return env;
}

std::size_t get_size(const ConfigDocument& doc, const char* key, std::size_t fallback) {
    return static_cast<std::size_t>(doc.get_uint(kEnv, key, fallback));
}

void read_grid(const ConfigDocument& doc, const std::string& prefix, GridSpec& grid) {
    const std::size_t d = grid.dim();
    auto list = [&](const std::string& suffix) -> std::optional<std::vector<double>> {
        const std::string key = prefix + "_" + suffix;
        if (!doc.has(kEnv, key)) return std::nullopt;
        auto v = doc.get_double_list(kEnv, key);
        if (v.size() != d) {
            throw ConfigError("[environment] " + key + " needs " + std::to_string(d) + " entries, got " +
                              std::to_string(v.size()));
        }
        return v;
    };
    if (auto lo = list("lower")) {
        for (std::size_t k = 0; k < d; ++k) grid.axes[k].lower = (*lo)[k];
    }
    if (auto hi = list("upper")) {
        for (std::size_t k = 0; k < d; ++k) grid.axes[k].upper = (*hi)[k];
    }
    if (auto n = list("nodes")) {
        for (std::size_t k = 0; k < d; ++k) {
            const double v = (*n)[k];
            if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
                throw ConfigError("[environment] " + prefix + "_nodes entries must be non-negative integers");
            }
            grid.axes[k].nodes = static_cast<std::size_t>(v);
        }
    }
    grid.node_budget = get_size(doc, "node_budget", grid.node_budget);
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("[environment] " + prefix + " grid: " + e.what());
    }
}

EnvironmentConfig parse_environment(const ConfigDocument& doc) {
    if (!doc.has_section(kEnv)) throw ConfigError("missing section [environment]");
    const bool has_preset = doc.has(kEnv, "preset");
    const bool has_type = doc.has(kEnv, "type");
    if (has_preset == has_type) throw ConfigError("[environment] needs exactly one of preset or type");
    EnvironmentConfig env =
        has_preset ? preset_environment(doc.get_string(kEnv, "preset")) : inline_environment(doc.get_string(kEnv, "type"));

    try {
        switch (env.kind) {
            case EnvironmentKind::gridworld: {
                auto& g = env.gridworld;
                g.width = get_size(doc, "width", g.width);
                g.height = get_size(doc, "height", g.height);
                g.reward_cell.col = get_size(doc, "reward_col", g.reward_cell.col);
                g.reward_cell.row = get_size(doc, "reward_row", g.reward_cell.row);
                g.wind_epsilon = doc.get_double(kEnv, "wind_epsilon", g.wind_epsilon);
                g.terminal_reward_cell = doc.get_bool(kEnv, "terminal_reward_cell", g.terminal_reward_cell);
                g.discount = doc.get_double(kEnv, "discount", g.discount);
                g.validate();
                break;
            }
            case EnvironmentKind::pendulum: {
                auto& p = env.pendulum;
                p.cart_mass = doc.get_double(kEnv, "cart_mass", p.cart_mass);
                p.pendulum_mass = doc.get_double(kEnv, "pendulum_mass", p.pendulum_mass);
                p.length = doc.get_double(kEnv, "length", p.length);
                p.gravity = doc.get_double(kEnv, "gravity", p.gravity);
                p.dt = doc.get_double(kEnv, "dt", p.dt);
                p.action_weight = doc.get_double(kEnv, "action_weight", p.action_weight);
                p.discount = doc.get_double(kEnv, "discount", p.discount);
                if (doc.has(kEnv, "state_weights")) {
                    const auto w = doc.get_double_list(kEnv, "state_weights");
                    if (w.size() != 4) throw ConfigError("[environment] state_weights needs 4 entries");
                    std::copy(w.begin(), w.end(), p.state_weights.begin());
                }
                p.validate();
                read_grid(doc, "state", env.state_grid);
                read_grid(doc, "action", env.action_grid);
                break;
            }
            case EnvironmentKind::savings: {
                auto& s = env.savings;
                s.interest = doc.get_double(kEnv, "interest", s.interest);
                s.income_mean = doc.get_double(kEnv, "income_mean", s.income_mean);
                s.income_std = doc.get_double(kEnv, "income_std", s.income_std);
                s.discount = doc.get_double(kEnv, "discount", s.discount);
                s.validate();
                read_grid(doc, "state", env.state_grid);
                read_grid(doc, "action", env.action_grid);
                break;
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[environment] ") + e.what());
    }
    return env;
}

SolverKind parse_solver_name(const std::string& name) {
    if (name == "policy-iteration") return SolverKind::policy_iteration;
    if (name == "value-iteration") return SolverKind::value_iteration;
    if (name == "q-iteration") return SolverKind::q_iteration;
    if (name == "q-learning") return SolverKind::q_learning;
    throw ConfigError("[solver] name must be policy-iteration, value-iteration, q-iteration or q-learning, got '" +
                      name + "'");
}

std::filesystem::path output_directory(const RunConfig& cfg) {
    if (const char* env = std::getenv("OPTICDP_OUT"); env && *env) return env;
    return cfg.output_dir;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    body(out);
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

struct Outcome {
    DeterministicPolicy policy;
    ValueFn value;
    std::optional<QFn> q;
    IterationTrace trace;
    std::optional<QLearningResult> learning;
};

Outcome solve(const RunConfig& cfg, const Mdp& m, const SnapshotObserver& observer) {
    const ValueFn v0 = initial_value(m, cfg.initial_value);
    switch (cfg.solver) {
        case SolverKind::policy_iteration: {
            auto r = policy_iteration(m, constant_policy(m.num_states(), 0), v0, cfg.solver_config, observer);
            return {std::move(r.policy), std::move(r.value), std::nullopt, std::move(r.trace), std::nullopt};
        }
        case SolverKind::value_iteration: {
            auto r = value_iteration(m, v0, cfg.solver_config, observer);
            return {std::move(r.policy), std::move(r.value), std::nullopt, std::move(r.trace), std::nullopt};
        }
        case SolverKind::q_iteration: {
            QFn q0(m.num_states(), m.num_actions());
            for (State x = 0; x < m.num_states(); ++x) {
                for (Action a = 0; a < m.num_actions(); ++a) q0.at(x, a) = v0(x);
            }
            auto r = q_value_iteration(m, q0, cfg.solver_config, observer);
            ValueFn v = state_values(r.q);
            return {std::move(r.policy), std::move(v), std::move(r.q), std::move(r.trace), std::nullopt};
        }
        case SolverKind::q_learning: {
            MdpEnvironment env(m);
            auto r = q_learning(env, cfg.qlearn);
            Outcome o{greedy_policy(r.q), state_values(r.q), r.q, r.trace, std::nullopt};
            o.learning = std::move(r);
            return o;
        }
    }
    throw std::logic_error("unknown solver");
}

std::string environment_label(const EnvironmentConfig& env) {
    return env.preset.empty() ? environment_name(env.kind) : env.preset;
}

int execute(const std::filesystem::path& config_path, std::size_t every, bool snapshots, std::ostream& out,
            std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
        if (snapshots && every == 0) throw ConfigError("--every must be a positive integer");
        if (snapshots && cfg.solver == SolverKind::q_learning) {
            throw ConfigError("[solver] name: snapshots need policy-iteration, value-iteration or q-iteration");
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        const BuiltEnvironment built = build_environment(cfg.environment);
        const Mdp& m = built.mdp;
        const std::filesystem::path dir = output_directory(cfg);
        std::filesystem::create_directories(dir);

        SnapshotObserver observer;
        std::size_t last_k = 0;
        bool last_written = false;
        DeterministicPolicy last_policy;
        ValueFn last_value;
        if (snapshots) {
            observer = [&](std::size_t iteration, const DeterministicPolicy& p, const ValueFn& v) {
                last_k = iteration + 1;
                last_written = last_k % every == 0;
                if (last_written) {
                    write_file(dir / ("value_" + std::to_string(last_k) + ".csv"),
                               [&](std::ostream& o) { write_value_csv(o, m.states, v); });
                    write_file(dir / ("policy_" + std::to_string(last_k) + ".csv"),
                               [&](std::ostream& o) { write_policy_csv(o, m.states, m.actions, p); });
                } else {
                    last_policy = p;
                    last_value = v;
                }
            };
        }

        const Outcome r = solve(cfg, m, observer);

        if (snapshots && !last_written) {
            write_file(dir / ("value_" + std::to_string(last_k) + ".csv"),
                       [&](std::ostream& o) { write_value_csv(o, m.states, last_value); });
            write_file(dir / ("policy_" + std::to_string(last_k) + ".csv"),
                       [&](std::ostream& o) { write_policy_csv(o, m.states, m.actions, last_policy); });
        }
        write_file(dir / "value.csv", [&](std::ostream& o) { write_value_csv(o, m.states, r.value); });
        write_file(dir / "policy.csv", [&](std::ostream& o) { write_policy_csv(o, m.states, m.actions, r.policy); });
        write_file(dir / "trace.csv", [&](std::ostream& o) { r.trace.write_csv(o); });
        if (r.q) write_file(dir / "q.csv", [&](std::ostream& o) { write_q_csv(o, m.states, m.actions, *r.q); });
        if (r.learning) {
            write_file(dir / "episodes.csv", [&](std::ostream& o) { write_episodes_csv(o, r.learning->episodes); });
        }

        out << "environment: " << environment_label(cfg.environment) << " (" << m.num_states() << " states, "
            << m.num_actions() << " actions)\n";
        if (built.clamped_successors > 0) out << "clamped successors: " << built.clamped_successors << '\n';
        out << "solver: " << solver_name(cfg.solver) << '\n';
        if (r.learning) {
            out << "episodes: " << r.trace.iterations() << '\n';
            out << "truncated episodes: " << r.learning->truncated_episodes << '\n';
        } else {
            out << "iterations: " << r.trace.iterations() << '\n';
        }
        out << "final delta_sup: " << format_double(r.trace.final_delta()) << '\n';
        const bool converged = r.learning || r.trace.converged;
        out << "converged: " << (converged ? "yes" : "no (max_iters reached)") << '\n';
        out << "output: " << dir.string() << '\n';
        return converged ? kExitConverged : kExitNotConverged;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

}  // namespace

std::string solver_name(SolverKind s) {
    switch (s) {
        case SolverKind::policy_iteration: return "policy-iteration";
        case SolverKind::value_iteration: return "value-iteration";
        case SolverKind::q_iteration: return "q-iteration";
        case SolverKind::q_learning: return "q-learning";
    }
    return "?";
}

std::vector<PresetInfo> presets() {
    return {{"gridworld4", "4x4 gridworld, reward 1 in the top-left terminal cell, discount 0.9"},
            {"pendulum-default", "linearized cart-pole on an 11x11x21x11 grid with 11 force levels, discount 0.99"},
            {"savings-default", "savings problem on a 201-node balance grid with 51 consumption levels"}};
}

RunConfig parse_run_config(const ConfigDocument& doc) {
    RunConfig cfg;
    cfg.environment = parse_environment(doc);
    cfg.initial_value = cfg.environment.kind == EnvironmentKind::gridworld ? InitialValue::reward : InitialValue::zero;

    if (!doc.has_section(kSolver)) throw ConfigError("missing section [solver]");
    cfg.solver = parse_solver_name(doc.get_string(kSolver, "name"));

    auto& s = cfg.solver_config;
    s.tol = doc.get_double(kSolver, "tol", s.tol);
    if (!(s.tol > 0.0)) throw ConfigError("[solver] tol must be > 0");
    s.max_iters = static_cast<std::size_t>(doc.get_uint(kSolver, "max_iters", s.max_iters));
    if (s.max_iters < 1) throw ConfigError("[solver] max_iters must be >= 1");
    s.seed = doc.get_uint(kSolver, "seed", s.seed);
    s.threads = static_cast<std::size_t>(doc.get_uint(kSolver, "threads", s.threads));
    if (s.threads < 1) throw ConfigError("[solver] threads must be >= 1");

    if (doc.has(kSolver, "initial_value")) {
        const std::string init = doc.get_string(kSolver, "initial_value");
        if (init == "zero") {
            cfg.initial_value = InitialValue::zero;
        } else if (init == "reward") {
            cfg.initial_value = InitialValue::reward;
        } else {
            throw ConfigError("[solver] initial_value must be zero or reward, got '" + init + "'");
        }
    }

    auto& q = cfg.qlearn;
    q.seed = s.seed;
    q.alpha = doc.get_double(kSolver, "alpha", q.alpha);
    if (!(q.alpha > 0.0 && q.alpha <= 1.0)) throw ConfigError("[solver] alpha must lie in (0, 1]");
    q.epsilon = doc.get_double(kSolver, "epsilon", q.epsilon);
    if (!(q.epsilon >= 0.0 && q.epsilon <= 1.0)) throw ConfigError("[solver] epsilon must lie in [0, 1]");
    q.episodes = static_cast<std::size_t>(doc.get_uint(kSolver, "episodes", q.episodes));
    if (q.episodes < 1) throw ConfigError("[solver] episodes must be >= 1");
    q.max_steps_per_episode = static_cast<std::size_t>(doc.get_uint(kSolver, "max_steps_per_episode", q.max_steps_per_episode));
    if (q.max_steps_per_episode < 1) throw ConfigError("[solver] max_steps_per_episode must be >= 1");

    cfg.output_dir = doc.get_string(kOutput, "directory", "out");
    if (cfg.output_dir.empty()) throw ConfigError("[output] directory must not be empty");

    doc.check_all_used();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(ConfigDocument::load(path)); }

BuiltEnvironment build_environment(const EnvironmentConfig& env) {
    switch (env.kind) {
        case EnvironmentKind::gridworld: return {gridworld(env.gridworld), 0};
        case EnvironmentKind::pendulum: {
            auto d = discretize_mdp(pendulum_dynamics(env.pendulum).mdp(), env.state_grid, env.action_grid);
            return {std::move(d.mdp), d.clamped_successors};
        }
        case EnvironmentKind::savings: {
            auto d = discretize_mdp(savings_dynamics(env.savings).clamped_mdp(), env.state_grid, env.action_grid);
            return {std::move(d.mdp), d.clamped_successors};
        }
    }
    throw std::logic_error("unknown environment");
}

ValueFn initial_value(const Mdp& m, InitialValue init) {
    ValueFn v = ValueFn::zeros(m.num_states());
    if (init == InitialValue::reward) {
        for (State x = 0; x < m.num_states(); ++x) v.values[x] = m.reward(x, 0);
    }
    return v;
}

int run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    return execute(config_path, 0, false, out, err);
}

int snapshot_sequence(const std::filesystem::path& config_path, std::size_t every, std::ostream& out,
                      std::ostream& err) {
    return execute(config_path, every, true, out, err);
}

}  // namespace opticdp
