#pragma once

#include "opticdp/finite_dist.hpp"
#include "opticdp/gauss.hpp"
#include "opticdp/kernel.hpp"
#include "opticdp/mdp.hpp"

#include <compare>
#include <functional>
#include <utility>

// Optics are stored as one concrete (residual, forward, backward) triple.
// Two optics are only ever compared through the costates they produce.

namespace opticdp {

/// Monoidal unit: the trivial residual.
struct Unit {
    auto operator<=>(const Unit&) const = default;
};

// ---------------------------------------------------------------------------
// Lenses: deterministic forward pass (sets, Euclidean spaces)
// ---------------------------------------------------------------------------

/// Optic (X, Xb) -> (Y, Yb) with residual M and a point-valued forward pass.
template <class X, class Xb, class Y, class Yb, class M>
class Lens {
public:
    using residual_type = M;
    using Forward = std::function<std::pair<M, Y>(const X&)>;
    using Backward = std::function<Xb(const M&, const Yb&)>;

    Lens(Forward forward, Backward backward) : forward_(std::move(forward)), backward_(std::move(backward)) {}

    std::pair<M, Y> forward(const X& x) const { return forward_(x); }
    Xb backward(const M& m, const Yb& r) const { return backward_(m, r); }

private:
    Forward forward_;
    Backward backward_;
};

template <class X, class Xb>
Lens<X, Xb, X, Xb, Unit> identity_lens() {
    return {[](const X& x) { return std::pair<Unit, X>{Unit{}, x}; }, [](const Unit&, const Xb& r) { return r; }};
}

/// `first` then `second`; residuals multiply.
template <class X, class Xb, class Y, class Yb, class Z, class Zb, class M1, class M2>
Lens<X, Xb, Z, Zb, std::pair<M1, M2>> compose(const Lens<X, Xb, Y, Yb, M1>& first,
                                              const Lens<Y, Yb, Z, Zb, M2>& second) {
    return {
        [first, second](const X& x) {
            auto [m1, y] = first.forward(x);
            auto [m2, z] = second.forward(y);
            return std::pair<std::pair<M1, M2>, Z>{{std::move(m1), std::move(m2)}, std::move(z)};
        },
        [first, second](const std::pair<M1, M2>& m, const Zb& r) {
            return first.backward(m.first, second.backward(m.second, r));
        }};
}

/// Action of the representable functor: x -> backward(m, v(y)) where (m, y) = forward(x).
template <class X, class Xb, class Y, class Yb, class M, class V>
auto apply_costate(const Lens<X, Xb, Y, Yb, M>& o, V v) {
    return [o, v = std::move(v)](const X& x) -> Xb {
        const auto [m, y] = o.forward(x);
        return o.backward(m, static_cast<Yb>(v(y)));
    };
}

/// A function X -> Xb viewed as an optic into the unit interface.
template <class X, class Xb, class F>
Lens<X, Xb, Unit, Unit, X> costate_from_function(F f) {
    return {[](const X& x) { return std::pair<X, Unit>{x, Unit{}}; },
            [f = std::move(f)](const X& m, const Unit&) -> Xb { return f(m); }};
}

/// Inverse of costate_from_function.
template <class X, class Xb, class M>
std::function<Xb(const X&)> costate_to_function(const Lens<X, Xb, Unit, Unit, M>& c) {
    return [c](const X& x) {
        const auto [m, u] = c.forward(x);
        return c.backward(m, u);
    };
}

// ---------------------------------------------------------------------------
// Markov optics: Markov-kernel forward pass, expectation-linear backward pass
// ---------------------------------------------------------------------------

/**
 * Optic (X, R) -> (Y, R) whose forward pass is a finite Markov kernel into
 * M x Y and whose backward pass maps a residual point and a real
 * continuation to a real. The backward pass must be affine in the
 * continuation; on distributions over M it acts by expectation.
 */
template <class X, class Y, class M>
class MarkovOptic {
public:
    using residual_type = M;
    using Forward = Kernel<X, std::pair<M, Y>>;
    using Backward = std::function<double(const M&, double)>;

    MarkovOptic(Forward forward, Backward backward) : forward_(std::move(forward)), backward_(std::move(backward)) {}

    const Forward& forward() const noexcept { return forward_; }
    FiniteDist<std::pair<M, Y>> forward(const X& x) const { return forward_(x); }

    double backward(const M& m, double r) const { return backward_(m, r); }

    /// Linear extension of the backward pass to residual distributions.
    double backward(const FiniteDist<M>& d, double r) const {
        return expectation(d, [&](const M& m) { return backward_(m, r); });
    }

private:
    Forward forward_;
    Backward backward_;
};

template <class X>
MarkovOptic<X, X, Unit> identity_optic() {
    return {Kernel<X, std::pair<Unit, X>>::deterministic([](const X& x) { return std::pair<Unit, X>{Unit{}, x}; }),
            [](const Unit&, double r) { return r; }};
}

/// `first` then `second`; residuals multiply, backward passes nest.
template <class X, class Y, class Z, class M1, class M2>
MarkovOptic<X, Z, std::pair<M1, M2>> compose(const MarkovOptic<X, Y, M1>& first,
                                             const MarkovOptic<Y, Z, M2>& second) {
    using Mid = std::pair<M1, Y>;
    using Out = std::pair<std::pair<M1, M2>, Z>;
    const auto& f2 = second.forward();
    Kernel<Mid, Out> lifted = [&]() {
        if (f2.family() == KernelFamily::deterministic) {
            return Kernel<Mid, Out>::deterministic([g = f2.det_map()](const Mid& my) {
                auto [m2, z] = g(my.second);
                return Out{{my.first, std::move(m2)}, std::move(z)};
            });
        }
        return Kernel<Mid, Out>::stochastic([g = f2.stoch_map()](const Mid& my) {
            return g(my.second).map([&](const std::pair<M2, Z>& mz) { return Out{{my.first, mz.first}, mz.second}; });
        });
    }();
    return {kernel_compose(first.forward(), lifted), [first, second](const std::pair<M1, M2>& m, double r) {
                return first.backward(m.first, second.backward(m.second, r));
            }};
}

/// x -> E[(m, y) ~ forward(x)] backward(m, v(y)).
template <class X, class Y, class M, class V>
auto apply_costate(const MarkovOptic<X, Y, M>& o, V v) {
    return [o, v = std::move(v)](const X& x) -> double {
        return expectation(o.forward(x),
                           [&](const std::pair<M, Y>& my) { return o.backward(my.first, static_cast<double>(v(my.second))); });
    };
}

// ---------------------------------------------------------------------------
// Gaussian optics: both passes affine with Gaussian noise
// ---------------------------------------------------------------------------

/**
 * Optic (R^x, R^xb) -> (R^y, R^yb) with residual R^m. The forward kernel maps
 * R^x to R^(m+y), the backward kernel maps R^(m+yb) to R^xb.
 */
class GaussOptic {
public:
    GaussOptic(std::size_t residual_dim, GaussKernel forward, GaussKernel backward);

    std::size_t residual_dim() const noexcept { return residual_dim_; }
    std::size_t x_dim() const noexcept { return forward_.in_dim(); }
    std::size_t y_dim() const noexcept { return forward_.out_dim() - residual_dim_; }
    std::size_t yb_dim() const noexcept { return backward_.in_dim() - residual_dim_; }
    std::size_t xb_dim() const noexcept { return backward_.out_dim(); }

    const GaussKernel& forward() const noexcept { return forward_; }
    const GaussKernel& backward() const noexcept { return backward_; }

    static GaussOptic identity(std::size_t dim, std::size_t back_dim);

private:
    std::size_t residual_dim_;
    GaussKernel forward_;
    GaussKernel backward_;
};

GaussOptic compose(const GaussOptic& first, const GaussOptic& second);

/// Costate action for an affine-Gaussian v: backward . (id_M x v) . forward.
GaussKernel apply_costate(const GaussOptic& o, const GaussKernel& v);

// ---------------------------------------------------------------------------
// MDP and policy optics
// ---------------------------------------------------------------------------

/// lambda: (X x A, R) -> (X, R). Forward (x,a) -> ((x,a), x'), backward U(x,a) + beta r.
MarkovOptic<StateAction, State, StateAction> lambda_optic(const Mdp& m);

/// pi-bar: (X, R) -> (X x A, R). Forward x -> (x, pi(x)), backward identity.
MarkovOptic<State, StateAction, Unit> policy_lift(const Policy& p);

using EuclideanPoint = Vector;
using EuclideanPair = std::pair<Vector, Vector>;

/// lambda for a deterministic continuous MDP as a lens in Euclidean spaces.
Lens<EuclideanPair, double, Vector, double, EuclideanPair> lambda_lens(const ContinuousMdp& m);

/// pi-bar for a continuous deterministic policy.
Lens<Vector, double, EuclideanPair, double, Unit> policy_lift_lens(std::function<Vector(const Vector&)> policy);

/// lambda for an affine-Gaussian MDP. Residual is the stacked (x, a).
GaussOptic lambda_gauss_optic(const GaussMdp& m);

/// pi-bar for an affine policy over `state_dim` states; trivial residual.
GaussOptic policy_lift_gauss(const AffinePolicy& p, std::size_t state_dim);

}  // namespace opticdp
