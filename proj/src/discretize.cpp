#include "opticdp/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace opticdp {

double GridAxis::node(std::size_t i) const {
    if (i + 1 == nodes) return upper;
    return lower + spacing() * static_cast<double>(i);
}

std::size_t GridSpec::node_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.nodes;
    return n;
}

void GridSpec::validate() const {
    if (axes.empty()) throw std::invalid_argument("grid has no axes");
    double total = 1.0;
    std::string shape;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto& a = axes[i];
        if (!(a.lower < a.upper)) {
            throw std::invalid_argument("grid axis " + std::to_string(i) + " needs lower < upper");
        }
        if (a.nodes < 2) throw std::invalid_argument("grid axis " + std::to_string(i) + " needs at least 2 nodes");
        total *= static_cast<double>(a.nodes);
        shape += (i ? "x" : "") + std::to_string(a.nodes);
    }
    if (total > static_cast<double>(node_budget)) {
        throw std::invalid_argument("grid " + shape + " has " + std::to_string(static_cast<long long>(total)) +
                                    " nodes, above the budget of " + std::to_string(node_budget));
    }
}

std::vector<std::size_t> GridSpec::multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t d = axes.size(); d-- > 0;) {
        idx[d] = flat % axes[d].nodes;
        flat /= axes[d].nodes;
    }
    return idx;
}

std::size_t GridSpec::flat_index(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes.size(); ++d) flat = flat * axes[d].nodes + idx[d];
    return flat;
}

Vector GridSpec::node_point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Vector p(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t d = 0; d < axes.size(); ++d) p[static_cast<Eigen::Index>(d)] = axes[d].node(idx[d]);
    return p;
}

CellWeights locate(const GridSpec& g, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != g.dim()) {
        throw std::invalid_argument("locate: point has dimension " + std::to_string(x.size()) + ", grid has " +
                                    std::to_string(g.dim()));
    }
    CellWeights out;
    const std::size_t d = g.dim();
    std::vector<std::size_t> base(d);
    std::vector<double> frac(d);
    for (std::size_t k = 0; k < d; ++k) {
        const auto& axis = g.axes[k];
        double v = x[static_cast<Eigen::Index>(k)];
        if (v < axis.lower || v > axis.upper || std::isnan(v)) {
            out.clamped = true;
            v = std::isnan(v) ? axis.lower : std::clamp(v, axis.lower, axis.upper);
        }
        const double t = (v - axis.lower) / axis.spacing();
        auto i = static_cast<std::size_t>(std::floor(t));
        i = std::min(i, axis.nodes - 2);
        base[k] = i;
        frac[k] = std::clamp(t - static_cast<double>(i), 0.0, 1.0);
    }

    std::vector<std::size_t> idx(d);
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
        double w = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            const bool upper = (corner >> (d - 1 - k)) & 1U;
            w *= upper ? frac[k] : 1.0 - frac[k];
            idx[k] = base[k] + (upper ? 1 : 0);
        }
        if (w > 0.0) out.weights.emplace_back(g.flat_index(idx), w);
    }
    return out;
}

double interpolate(const GridSpec& g, const std::vector<double>& node_values, const Vector& x) {
    double v = 0.0;
    for (const auto& [node, w] : locate(g, x).weights) v += w * node_values.at(node);
    return v;
}

namespace {

std::string format_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

StateSpace grid_state_space(const GridSpec& g) {
    StateSpace s;
    for (std::size_t k = 0; k < g.dim(); ++k) {
        s.coordinate_names.push_back(g.axes[k].name.empty() ? "x" + std::to_string(k) : g.axes[k].name);
    }
    s.coordinates.reserve(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const Vector p = g.node_point(i);
        s.coordinates.emplace_back(p.data(), p.data() + p.size());
    }
    return s;
}

ActionSpace grid_action_space(const GridSpec& g) {
    ActionSpace a;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const Vector p = g.node_point(i);
        std::string label;
        for (Eigen::Index k = 0; k < p.size(); ++k) label += (k ? ";" : "") + format_label(p[k]);
        a.labels.push_back(std::move(label));
    }
    return a;
}

/// Offsets mean +/- one standard deviation along each noisy principal axis.
std::vector<Vector> sigma_offsets(const ContinuousMdp& m) {
    std::vector<Vector> offsets{Vector::Zero(static_cast<Eigen::Index>(m.state_dim))};
    const auto* k = std::get_if<GaussKernel>(&m.dynamics);
    if (!k) return offsets;
    const Matrix factor = covariance_factor(k->noise_cov);
    for (Eigen::Index i = 0; i < factor.cols(); ++i) {
        if (factor.col(i).squaredNorm() == 0.0) continue;  // degenerate direction
        offsets.emplace_back(factor.col(i));
        offsets.emplace_back(-factor.col(i));
    }
    return offsets;
}

}  // namespace

DiscretizedMdp discretize_mdp(const ContinuousMdp& m, const GridSpec& state_grid, const GridSpec& action_grid) {
    state_grid.validate();
    action_grid.validate();
    if (state_grid.dim() != m.state_dim || action_grid.dim() != m.action_dim) {
        throw std::invalid_argument("grid dimensions (" + std::to_string(state_grid.dim()) + ", " +
                                    std::to_string(action_grid.dim()) + ") do not match the model (" +
                                    std::to_string(m.state_dim) + ", " + std::to_string(m.action_dim) + ")");
    }
    const std::size_t nx = state_grid.node_count();
    const std::size_t na = action_grid.node_count();

    std::vector<Vector> action_points(na);
    for (std::size_t j = 0; j < na; ++j) action_points[j] = action_grid.node_point(j);

    const std::vector<Vector> offsets = sigma_offsets(m);
    const double share = 1.0 / static_cast<double>(offsets.size());

    std::vector<FiniteDist<State>> rows;
    rows.reserve(nx * na);
    auto rewards = std::make_shared<std::vector<double>>(nx * na);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        const Vector x = state_grid.node_point(i);
        for (std::size_t j = 0; j < na; ++j) {
            const Vector mean = m.mean_step(x, action_points[j]);
            std::vector<std::pair<State, double>> items;
            for (const auto& offset : offsets) {
                const CellWeights cw = locate(state_grid, mean + offset);
                clamped += cw.clamped ? 1 : 0;
                for (const auto& [node, w] : cw.weights) items.emplace_back(node, share * w);
            }
            rows.emplace_back(std::move(items));
            (*rewards)[i * na + j] = m.reward(x, action_points[j]);
        }
    }

    DiscretizedMdp out{Mdp{grid_state_space(state_grid), grid_action_space(action_grid),
                           tabulated_kernel(na, std::move(rows)),
                           [rewards, na](State x, Action a) { return (*rewards)[x * na + a]; }, m.discount, {}},
                       state_grid, action_grid, clamped};
    return out;
}

}  // namespace opticdp
