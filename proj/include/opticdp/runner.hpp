#pragma once

#include "opticdp/config.hpp"
#include "opticdp/discretize.hpp"
#include "opticdp/envs.hpp"
#include "opticdp/solvers.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace opticdp {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNotConverged = 2;

enum class SolverKind { policy_iteration, value_iteration, q_iteration, q_learning };

std::string solver_name(SolverKind s);

enum class EnvironmentKind { gridworld, pendulum, savings };

struct EnvironmentConfig {
    EnvironmentKind kind = EnvironmentKind::gridworld;
    std::string preset;  // empty for inline specs
    GridworldSpec gridworld;
    PendulumSpec pendulum;
    SavingsSpec savings;
    GridSpec state_grid;  // pendulum and savings only
    GridSpec action_grid;
};

/// Starting value table: zero, or the reward of the first action.
enum class InitialValue { zero, reward };

struct RunConfig {
    EnvironmentConfig environment;
    SolverKind solver = SolverKind::value_iteration;
    SolverConfig solver_config;
    QLearnConfig qlearn;
    InitialValue initial_value = InitialValue::zero;
    std::filesystem::path output_dir = "out";
};

struct PresetInfo {
    std::string name;
    std::string description;
};

std::vector<PresetInfo> presets();

/// Throws ConfigError naming the offending field.
RunConfig parse_run_config(const ConfigDocument& doc);
RunConfig load_run_config(const std::filesystem::path& path);

struct BuiltEnvironment {
    Mdp mdp;
    std::size_t clamped_successors = 0;
};

BuiltEnvironment build_environment(const EnvironmentConfig& env);

ValueFn initial_value(const Mdp& m, InitialValue init);

/**
 * Loads the config, solves, and writes value.csv, policy.csv, trace.csv and,
 * for the q solvers, q.csv (q-learning adds episodes.csv). OPTICDP_OUT
 * overrides the output directory. Returns one of the kExit codes.
 */
int run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/**
 * Like `run`, but also writes value_k.csv and policy_k.csv whenever k is a
 * multiple of `every`, plus the final pair. k = 1 is the starting pair and
 * k = i + 1 follows iteration i.
 */
int snapshot_sequence(const std::filesystem::path& config_path, std::size_t every, std::ostream& out,
                      std::ostream& err);

}  // namespace opticdp
