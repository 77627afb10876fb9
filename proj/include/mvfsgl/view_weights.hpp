#pragma once

#include <cmath>
#include <stdexcept>

#include "mvfsgl/types.hpp"

namespace mvfsgl {

/// Per-view scalars driving the view-weight subproblem: p holds the inner
/// products <A_v, S> and q the squared norms ||A_v||_F^2 (all q > 0).
template <typename Scalar = double>
struct DeltaScratch {
    Vector<Scalar> p;
    Vector<Scalar> q;
};

template <typename Scalar = double>
struct ViewWeightSolution {
    Vector<Scalar> delta;     // on the probability simplex
    Vector<Scalar> k;         // unconstrained stationary targets
    Scalar mu_tilde = 0;      // root of the active-set balance function
    int newton_iterations = 0;
};

/// Minimizes sum_v ||S - delta_v A_v||_F^2 over the probability simplex.
///
/// The KKT system reduces to a scalar root-finding problem: with
/// k_v = p_v/q_v + (1 - sum_u p_u/q_u) / (q_v sum_u 1/q_u) the weights are
/// delta_v = max(k_v - mu / (q_v sum_u 1/q_u), 0) where mu is the root of
/// the piecewise-linear f(mu) = sum_v max(-k_v + mu/(q_v sum_u 1/q_u), 0) - mu.
/// Newton from mu = 0 with the one-sided slope lands on the root in finitely
/// many steps; a bisection fallback covers flat or stalled segments.
template <typename Scalar>
ViewWeightSolution<Scalar> solve_view_weights(const Vector<Scalar>& p, const Vector<Scalar>& q) {
    const Index views = p.size();
    if (views == 0 || q.size() != views) throw std::invalid_argument("solve_view_weights: bad sizes");
    if ((q.array() <= Scalar(0)).any()) throw std::invalid_argument("solve_view_weights: need every q > 0");

    const Vector<Scalar> inv_q = q.cwiseInverse();
    const Scalar inv_q_sum = inv_q.sum();
    const Vector<Scalar> ratio = p.cwiseQuotient(q);

    ViewWeightSolution<Scalar> out;
    out.k = ratio.array() + (Scalar(1) - ratio.sum()) * inv_q.array() / inv_q_sum;
    const Vector<Scalar> slope = inv_q / inv_q_sum;  // sums to 1

    const auto f = [&](Scalar mu) {
        Scalar acc = 0;
        for (Index v = 0; v < views; ++v) acc += std::max(-out.k(v) + mu * slope(v), Scalar(0));
        return acc - mu;
    };

    constexpr Scalar tol = Scalar(1e-12);
    Scalar mu = 0;
    Scalar value = f(mu);
    Scalar lo = 0, hi = 0;  // bracket once a sign change is seen
    bool have_hi = false;
    int iter = 0;
    for (; iter < 100 && std::abs(value) > tol; ++iter) {
        if (value > Scalar(0)) {
            lo = mu;
        } else {
            hi = mu;
            have_hi = true;
        }
        Scalar next;
        if (value > Scalar(0)) {
            // one-sided (right) derivative of the convex, non-increasing f
            Scalar grad = -Scalar(1);
            for (Index v = 0; v < views; ++v)
                if (-out.k(v) + mu * slope(v) >= Scalar(0)) grad += slope(v);
            next = grad < Scalar(0) ? mu - value / grad : mu;
            const bool stalled = !(next > mu) || (have_hi && next >= hi);
            if (stalled) {
                if (!have_hi) {
                    hi = std::max(Scalar(1), Scalar(2) * std::abs(mu));
                    while (f(hi) > Scalar(0)) hi *= Scalar(2);
                    have_hi = true;
                }
                next = (lo + hi) / Scalar(2);
            }
        } else {
            next = (lo + hi) / Scalar(2);
        }
        if (next == mu) break;
        mu = next;
        value = f(mu);
    }
    if (std::abs(value) > tol)
        throw std::runtime_error("solve_view_weights: root finding did not converge");

    out.mu_tilde = mu;
    out.newton_iterations = iter;
    out.delta = (out.k.array() - mu * slope.array()).max(Scalar(0));
    return out;
}

template <typename Scalar>
ViewWeightSolution<Scalar> solve_view_weights(const DeltaScratch<Scalar>& scratch) {
    return solve_view_weights(scratch.p, scratch.q);
}

}  // namespace mvfsgl
