#include "opticdp/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace opticdp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_state_header(std::ostream& out, const StateSpace& states) {
    if (states.coordinate_names.empty()) {
        out << "state";
        return;
    }
    for (std::size_t i = 0; i < states.coordinate_names.size(); ++i) out << (i ? "," : "") << states.coordinate_names[i];
}

void write_state(std::ostream& out, const StateSpace& states, State x) {
    if (states.coordinate_names.empty()) {
        out << x;
        return;
    }
    const auto& c = states.coordinates.at(x);
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << format_double(c[i]);
}

std::size_t row_count(const StateSpace& states, std::size_t fallback) {
    return states.coordinate_names.empty() ? fallback : states.size();
}

}  // namespace

void write_value_csv(std::ostream& out, const StateSpace& states, const ValueFn& v) {
    write_state_header(out, states);
    out << ",value\n";
    for (State x = 0; x < row_count(states, v.size()); ++x) {
        write_state(out, states, x);
        out << ',' << format_double(v(x)) << '\n';
    }
}

void write_policy_csv(std::ostream& out, const StateSpace& states, const ActionSpace& actions,
                      const DeterministicPolicy& p) {
    write_state_header(out, states);
    out << ",action\n";
    for (State x = 0; x < row_count(states, p.actions.size()); ++x) {
        write_state(out, states, x);
        out << ',' << actions.labels.at(p(x)) << '\n';
    }
}

void write_q_csv(std::ostream& out, const StateSpace& states, const ActionSpace& actions, const QFn& q) {
    write_state_header(out, states);
    for (const auto& label : actions.labels) out << ",q_" << label;
    out << '\n';
    for (State x = 0; x < row_count(states, q.num_states()); ++x) {
        write_state(out, states, x);
        for (Action a = 0; a < q.num_actions; ++a) out << ',' << format_double(q(x, a));
        out << '\n';
    }
}

void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& episodes) {
    out << "episode,discounted_return,steps,truncated\n";
    for (const auto& e : episodes) {
        out << e.episode << ',' << format_double(e.discounted_return) << ',' << e.steps << ','
            << (e.truncated ? 1 : 0) << '\n';
    }
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("csv has no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv is empty");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw std::runtime_error("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace opticdp
