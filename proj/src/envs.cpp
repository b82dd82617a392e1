#include "opticdp/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace opticdp {

void GridworldSpec::validate() const {
    if (width == 0 || height == 0) throw std::invalid_argument("gridworld width and height must be positive");
    if (reward_cell.col >= width || reward_cell.row >= height) {
        throw std::invalid_argument("gridworld reward cell (" + std::to_string(reward_cell.col) + ", " +
                                    std::to_string(reward_cell.row) + ") lies outside the grid");
    }
    if (!(wind_epsilon >= 0.0 && wind_epsilon <= 1.0)) {
        throw std::invalid_argument("gridworld wind_epsilon must lie in [0, 1]");
    }
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("gridworld discount must lie in (0, 1)");
}

Mdp gridworld(const GridworldSpec& spec) {
    spec.validate();
    const std::size_t n = spec.width * spec.height;

    StateSpace states{{"col", "row"}, {}};
    for (State s = 0; s < n; ++s) {
        const Cell c = spec.cell(s);
        states.coordinates.push_back({static_cast<double>(c.col), static_cast<double>(c.row)});
    }
    ActionSpace actions{{kMoveLabels.begin(), kMoveLabels.end()}};

    auto move = [spec](Cell c, Move m) {
        switch (m) {
            case Move::up: c.row = c.row == 0 ? 0 : c.row - 1; break;
            case Move::down: c.row = std::min(c.row + 1, spec.height - 1); break;
            case Move::left: c.col = c.col == 0 ? 0 : c.col - 1; break;
            case Move::right: c.col = std::min(c.col + 1, spec.width - 1); break;
        }
        return c;
    };

    Kernel<StateAction, State> transition = [&]() {
        if (spec.wind_epsilon == 0.0) {
            return Kernel<StateAction, State>::deterministic([spec, move](const StateAction& xa) {
                return spec.state(move(spec.cell(xa.state), static_cast<Move>(xa.action)));
            });
        }
        // Wind acts after the chosen move.
        return Kernel<StateAction, State>::stochastic([spec, move](const StateAction& xa) {
            const Cell moved = move(spec.cell(xa.state), static_cast<Move>(xa.action));
            const Cell blown = move(moved, Move::right);
            return FiniteDist<State>{{spec.state(moved), 1.0 - spec.wind_epsilon},
                                     {spec.state(blown), spec.wind_epsilon}};
        });
    }();

    const State goal = spec.state(spec.reward_cell);
    std::vector<bool> terminal;
    if (spec.terminal_reward_cell) {
        terminal.assign(n, false);
        terminal[goal] = true;
    }
    return Mdp{std::move(states), std::move(actions), std::move(transition),
               [goal](State x, Action) { return x == goal ? 1.0 : 0.0; }, spec.discount, std::move(terminal)};
}

void PendulumSpec::validate() const {
    if (!(cart_mass > 0 && pendulum_mass > 0 && length > 0 && dt > 0)) {
        throw std::invalid_argument("pendulum masses, length and dt must be positive");
    }
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("pendulum discount must lie in (0, 1)");
}

PendulumModel pendulum_dynamics(const PendulumSpec& spec) {
    spec.validate();
    const double M = spec.cart_mass, m = spec.pendulum_mass, L = spec.length, g = spec.gravity;
    Matrix A = Matrix::Zero(4, 4);
    A(0, 1) = 1.0;
    A(1, 2) = -m * g / M;
    A(2, 3) = 1.0;
    A(3, 2) = (M + m) * g / (M * L);
    Vector B(4);
    B << 0.0, 1.0 / M, 0.0, -1.0 / (M * L);
    return PendulumModel{spec, std::move(A), std::move(B)};
}

Vector PendulumModel::step(const Vector& x, double a) const { return x + spec.dt * (A * x + B * a); }

double PendulumModel::cost(const Vector& x, double a) const {
    double c = spec.action_weight * a * a;
    for (Eigen::Index i = 0; i < 4; ++i) c += spec.state_weights[static_cast<std::size_t>(i)] * x[i] * x[i];
    return c;
}

GaussKernel PendulumModel::kernel() const {
    Matrix lin(4, 5);
    lin << Matrix::Identity(4, 4) + spec.dt * A, spec.dt * B;
    return GaussKernel(std::move(lin), Vector::Zero(4));
}

ContinuousMdp PendulumModel::mdp() const {
    return ContinuousMdp{4, 1, kernel(),
                         [model = *this](const Vector& x, const Vector& a) { return -model.cost(x, a[0]); },
                         spec.discount};
}

PendulumGrid default_pendulum_grid() {
    PendulumGrid g;
    g.states.axes = {{-0.5, 0.5, 11, "y"}, {-1.0, 1.0, 11, "y_dot"}, {-0.2, 0.2, 21, "theta"}, {-1.0, 1.0, 11, "theta_dot"}};
    g.actions.axes = {{-5.0, 5.0, 11, "force"}};
    return g;
}

void SavingsSpec::validate() const {
    if (!(interest >= 0.0)) throw std::invalid_argument("savings interest must be >= 0");
    if (!(income_std >= 0.0)) throw std::invalid_argument("savings income_std must be >= 0");
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("savings discount must lie in (0, 1)");
}

SavingsModel savings_dynamics(const SavingsSpec& spec) {
    spec.validate();
    return SavingsModel{spec};
}

double SavingsModel::next_balance(double x, double a, double income) const {
    return std::max((1.0 + spec.interest) * x - a + income, 0.0);
}

double SavingsModel::utility(double x, double a, double income) const { return std::min(a, x + income); }

double SavingsModel::expected_utility(double x, double a) const {
    // E min{a, x + i} = a - E (a - x - i)^+
    const double c = a - x - spec.income_mean;
    if (spec.income_std == 0.0) return a - std::max(c, 0.0);
    const double s = spec.income_std;
    const double z = c / s;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return a - (c * cdf + s * pdf);
}

GaussMdp SavingsModel::gauss_mdp() const {
    Matrix lin(1, 2);
    lin << 1.0 + spec.interest, -1.0;
    Vector offset(1);
    offset << spec.income_mean;
    Matrix noise(1, 1);
    noise << spec.income_std * spec.income_std;
    Eigen::RowVectorXd reward(2);
    reward << 0.0, 1.0;
    return GaussMdp{1, 1, GaussKernel(std::move(lin), std::move(offset), std::move(noise)), std::move(reward), 0.0,
                    spec.discount};
}

ContinuousMdp SavingsModel::clamped_mdp() const {
    return ContinuousMdp{1, 1, gauss_mdp().transition,
                         [model = *this](const Vector& x, const Vector& a) {
                             return model.expected_utility(x[0], a[0]);
                         },
                         spec.discount};
}

SavingsGrid default_savings_grid() {
    SavingsGrid g;
    g.states.axes = {{0.0, 50.0, 201, "balance"}};
    g.actions.axes = {{0.0, 10.0, 51, "consumption"}};
    return g;
}

}  // namespace opticdp
