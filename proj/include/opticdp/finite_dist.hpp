#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace opticdp {

/// Tolerance on the total mass of a finite distribution.
inline constexpr double kMassTolerance = 1e-12;

/// Merged weights below this are dropped and the remainder renormalized.
inline constexpr double kPruneThreshold = 1e-15;

/**
 * Finite-support probability distribution.
 *
 * The support is kept sorted by outcome with duplicates merged, so two
 * distributions with the same law compare equal element by element. Outcomes
 * are compared with operator<, which is why states are integers or enums and
 * never floating point values.
 */
template <class T>
class FiniteDist {
public:
    using value_type = std::pair<T, double>;

    FiniteDist(std::initializer_list<value_type> items)
        : FiniteDist(std::vector<value_type>(items)) {}

    explicit FiniteDist(std::vector<value_type> items) : support_(std::move(items)) {
        normalize();
    }

    static FiniteDist dirac(T outcome) {
        return FiniteDist(std::vector<value_type>{{std::move(outcome), 1.0}});
    }

    static FiniteDist uniform(const std::vector<T>& outcomes) {
        if (outcomes.empty()) throw std::invalid_argument("uniform distribution over empty set");
        std::vector<value_type> items;
        items.reserve(outcomes.size());
        const double w = 1.0 / static_cast<double>(outcomes.size());
        for (const auto& o : outcomes) items.emplace_back(o, w);
        return FiniteDist(std::move(items));
    }

    const std::vector<value_type>& support() const noexcept { return support_; }
    std::size_t size() const noexcept { return support_.size(); }
    auto begin() const noexcept { return support_.begin(); }
    auto end() const noexcept { return support_.end(); }

    /// Probability of a single outcome (0 when outside the support).
    double probability(const T& outcome) const {
        auto it = std::lower_bound(
            support_.begin(), support_.end(), outcome,
            [](const value_type& item, const T& key) { return item.first < key; });
        return (it != support_.end() && !(outcome < it->first)) ? it->second : 0.0;
    }

    /// Image under f; outcomes that collide are merged.
    template <class F>
    auto map(F&& f) const {
        using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
        std::vector<std::pair<U, double>> items;
        items.reserve(support_.size());
        for (const auto& [x, w] : support_) items.emplace_back(std::invoke(f, x), w);
        return FiniteDist<U>(std::move(items));
    }

    /// Kleisli extension: sum over x of w(x) * k(x).
    template <class F>
    auto bind(F&& k) const {
        using D = std::decay_t<std::invoke_result_t<F&, const T&>>;
        std::vector<typename D::value_type> items;
        for (const auto& [x, w] : support_) {
            const D inner = std::invoke(k, x);
            for (const auto& [y, v] : inner) items.emplace_back(y, w * v);
        }
        return D(std::move(items));
    }

    friend bool operator==(const FiniteDist&, const FiniteDist&) = default;

private:
    void normalize() {
        for (const auto& [x, w] : support_) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw std::invalid_argument("finite distribution has a negative or non-finite weight");
            }
        }
        auto less = [](const value_type& a, const value_type& b) { return a.first < b.first; };
        // Images of sorted supports under monotone maps are already strictly
        // increasing; skip the sort and merge for them.
        if (std::adjacent_find(support_.begin(), support_.end(),
                               [&](const value_type& a, const value_type& b) { return !less(a, b); }) !=
            support_.end()) {
            std::stable_sort(support_.begin(), support_.end(), less);
            std::size_t out = 0;
            for (std::size_t i = 0; i < support_.size(); ++i) {
                if (out > 0 && !less(support_[out - 1], support_[i])) {
                    support_[out - 1].second += support_[i].second;
                } else {
                    if (out != i) support_[out] = std::move(support_[i]);
                    ++out;
                }
            }
            support_.erase(support_.begin() + static_cast<std::ptrdiff_t>(out), support_.end());
        }
        double total = 0.0;
        for (const auto& item : support_) total += item.second;
        if (std::abs(total - 1.0) > kMassTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "finite distribution weights sum to " << total << ", expected 1";
            throw std::invalid_argument(msg.str());
        }
        const auto pruned = std::erase_if(support_, [](const value_type& item) { return item.second < kPruneThreshold; });
        if (pruned > 0) {
            double kept = 0.0;
            for (const auto& item : support_) kept += item.second;
            for (auto& item : support_) item.second /= kept;
        }
    }

    std::vector<value_type> support_;
};

template <class T>
FiniteDist<T> dirac(T outcome) {
    return FiniteDist<T>::dirac(std::move(outcome));
}

/// Sum of weight(t) * f(t) over the support, in support order.
template <class T, class F>
double expectation(const FiniteDist<T>& d, F&& f) {
    double acc = 0.0;
    for (const auto& [x, w] : d) acc += w * static_cast<double>(std::invoke(f, x));
    return acc;
}

/// Inverse-CDF draw from `d` for a uniform variate `u` in [0, 1).
template <class T>
const T& sample(const FiniteDist<T>& d, double u) {
    double acc = 0.0;
    for (const auto& [x, w] : d) {
        acc += w;
        if (u < acc) return x;
    }
    return d.support().back().first;
}

}  // namespace opticdp
