#pragma once

#include "opticdp/gauss.hpp"
#include "opticdp/mdp.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace opticdp {

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

struct GridAxis {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t nodes = 2;
    std::string name;

    double spacing() const { return (upper - lower) / static_cast<double>(nodes - 1); }
    double node(std::size_t i) const;
};

/// Uniform tensor grid. Nodes are numbered row-major (last axis fastest).
struct GridSpec {
    std::vector<GridAxis> axes;
    std::size_t node_budget = kDefaultNodeBudget;

    std::size_t dim() const noexcept { return axes.size(); }
    std::size_t node_count() const;
    void validate() const;

    std::vector<std::size_t> multi_index(std::size_t flat) const;
    std::size_t flat_index(const std::vector<std::size_t>& idx) const;
    Vector node_point(std::size_t flat) const;
};

/// Convex weights of a point over the corners of its enclosing grid cell.
struct CellWeights {
    std::vector<std::pair<std::size_t, double>> weights;
    bool clamped = false;
};

/// Multilinear interpolation weights; out-of-range coordinates are clamped first.
CellWeights locate(const GridSpec& g, const Vector& x);

/// Value at x of the multilinear interpolant of node values.
double interpolate(const GridSpec& g, const std::vector<double>& node_values, const Vector& x);

struct DiscretizedMdp {
    Mdp mdp;
    GridSpec state_grid;
    GridSpec action_grid;
    std::size_t clamped_successors = 0;  // located points that fell outside the grid
};

/**
 * Finite MDP on grid nodes. Each successor is spread over the enclosing cell
 * by multilinear weights. Gaussian dynamics evaluate the mean and the
 * points mean +/- one standard deviation along each principal axis of the
 * noise with nonzero variance, all with equal weight (1 / (2r + 1) for r
 * such axes).
 */
DiscretizedMdp discretize_mdp(const ContinuousMdp& m, const GridSpec& state_grid, const GridSpec& action_grid);

}  // namespace opticdp
