#pragma once

#include "opticdp/mdp.hpp"
#include "opticdp/solvers.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace opticdp {

/// Shortest form that reads back to the same double (17 significant digits).
std::string format_double(double v);

// One row per state. States without coordinates get a single `state` index column.
void write_value_csv(std::ostream& out, const StateSpace& states, const ValueFn& v);
void write_policy_csv(std::ostream& out, const StateSpace& states, const ActionSpace& actions,
                      const DeterministicPolicy& p);
/// One `q_<label>` column per action.
void write_q_csv(std::ostream& out, const StateSpace& states, const ActionSpace& actions, const QFn& q);
void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& episodes);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};

/// Plain comma-separated reader; no quoting.
CsvTable read_csv(std::istream& in);

}  // namespace opticdp
