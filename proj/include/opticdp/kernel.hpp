#pragma once

#include "opticdp/finite_dist.hpp"
#include "opticdp/gauss.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace opticdp {

/// Raised when two kernel families cannot be combined.
class UnsupportedKernel : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class KernelFamily { deterministic, stochastic, gaussian };

/**
 * Morphism X -> Y in one of three forward categories: plain functions,
 * finite-support Markov kernels, or affine maps with Gaussian noise.
 *
 * Gaussian kernels only exist between Euclidean spaces, so the factory is
 * restricted to Kernel<Vector, Vector>.
 */
template <class X, class Y>
class Kernel {
public:
    using DetMap = std::function<Y(const X&)>;
    using StochMap = std::function<FiniteDist<Y>(const X&)>;

    static Kernel deterministic(DetMap f) { return Kernel(Impl(std::in_place_index<0>, std::move(f))); }

    static Kernel stochastic(StochMap f) { return Kernel(Impl(std::in_place_index<1>, std::move(f))); }

    static Kernel gaussian(GaussKernel k)
        requires(std::is_same_v<X, Vector> && std::is_same_v<Y, Vector>)
    {
        return Kernel(Impl(std::in_place_index<2>, std::move(k)));
    }

    static Kernel identity()
        requires std::is_same_v<X, Y>
    {
        return deterministic([](const X& x) { return x; });
    }

    KernelFamily family() const noexcept { return static_cast<KernelFamily>(impl_.index()); }

    /// Point image; only for deterministic kernels.
    Y apply(const X& x) const {
        if (const auto* f = std::get_if<0>(&impl_)) return (*f)(x);
        throw UnsupportedKernel("point evaluation of a non-deterministic kernel");
    }

    /// Distribution image; deterministic kernels give a point mass.
    FiniteDist<Y> operator()(const X& x) const
        requires std::totally_ordered<Y>
    {
        switch (impl_.index()) {
            case 0: return FiniteDist<Y>::dirac(std::get<0>(impl_)(x));
            case 1: return std::get<1>(impl_)(x);
            default: throw UnsupportedKernel("a Gaussian kernel has no finite-support image");
        }
    }

    const DetMap& det_map() const { return std::get<0>(impl_); }
    const StochMap& stoch_map() const { return std::get<1>(impl_); }
    const GaussKernel& gauss() const {
        if (const auto* g = std::get_if<2>(&impl_)) return *g;
        throw UnsupportedKernel("kernel is not Gaussian");
    }

private:
    using Impl = std::variant<DetMap, StochMap, GaussKernel>;
    explicit Kernel(Impl impl) : impl_(std::move(impl)) {}
    Impl impl_;
};

/// Law of total probability for a finite input distribution.
template <class X, class Y>
FiniteDist<Y> pushforward(const FiniteDist<X>& d, const Kernel<X, Y>& k) {
    if (k.family() == KernelFamily::gaussian) {
        throw UnsupportedKernel("pushforward of a finite distribution along a Gaussian kernel");
    }
    if (k.family() == KernelFamily::deterministic) {
        return d.map(k.det_map());
    }
    return d.bind(k.stoch_map());
}

/**
 * Composite that first applies `first` then `second`.
 *
 * Det;Det stays deterministic, anything touching a stochastic kernel is
 * stochastic, Gauss;Gauss stays Gaussian. Gaussian kernels do not mix with
 * the other two families.
 */
template <class X, class Y, class Z>
Kernel<X, Z> kernel_compose(const Kernel<X, Y>& first, const Kernel<Y, Z>& second) {
    const auto f1 = first.family();
    const auto f2 = second.family();
    if (f1 == KernelFamily::gaussian || f2 == KernelFamily::gaussian) {
        if constexpr (std::is_same_v<X, Vector> && std::is_same_v<Y, Vector> && std::is_same_v<Z, Vector>) {
            if (f1 == KernelFamily::gaussian && f2 == KernelFamily::gaussian) {
                return Kernel<X, Z>::gaussian(gauss_compose(first.gauss(), second.gauss()));
            }
        }
        throw UnsupportedKernel("cannot compose a Gaussian kernel with a non-Gaussian kernel");
    }
    if constexpr (std::totally_ordered<Y> && std::totally_ordered<Z>) {
        if (f1 == KernelFamily::deterministic && f2 == KernelFamily::deterministic) {
            return Kernel<X, Z>::deterministic(
                [g = first.det_map(), h = second.det_map()](const X& x) { return h(g(x)); });
        }
        if (f1 == KernelFamily::deterministic) {
            return Kernel<X, Z>::stochastic(
                [g = first.det_map(), h = second.stoch_map()](const X& x) { return h(g(x)); });
        }
        return Kernel<X, Z>::stochastic([first, second](const X& x) { return pushforward(first(x), second); });
    } else {
        if (f1 == KernelFamily::deterministic && f2 == KernelFamily::deterministic) {
            return Kernel<X, Z>::deterministic(
                [g = first.det_map(), h = second.det_map()](const X& x) { return h(g(x)); });
        }
        throw UnsupportedKernel("stochastic composition needs ordered outcome types");
    }
}

}  // namespace opticdp
