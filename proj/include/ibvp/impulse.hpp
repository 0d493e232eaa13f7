#pragma once

// Impulse handling: the d/e coefficients derived from the boundary basis,
// the combined jump values they produce, and sampled verification of the
// declared linear growth bounds p11 <= j1/w <= p12, 0 <= j2/w <= p22.

#include "expr.hpp"
#include "grid.hpp"
#include "kernel.hpp"

#include <optional>
#include <string>

namespace ibvp {

/// User-declared impulse data for one equation. I and N are expressions in w
/// (jump of the value resp. the derivative at tau, as functions of w(tau-)).
struct ImpulseSpec {
    Rational tau;
    Expression I;
    Expression N;
    Rational p11, p12, p22;

    void validate() const {
        if (tau <= Rational(0) || tau >= Rational(1))
            throw std::invalid_argument("impulse-time-interior: tau must lie in (0,1)");
        if (p11 <= Rational(0) || p12 <= Rational(0) || p22 < Rational(0))
            throw std::invalid_argument("impulse-bound-signs: need p11 > 0, p12 > 0, p22 >= 0");
        if (p11 > p12)
            throw std::invalid_argument("impulse-bound-signs: need p11 <= p12");
    }
};

/// d1 = delta'(tau)/W, e1 = -delta(tau)/W, d2 = gamma'(tau)/W, e2 = -gamma(tau)/W.
/// Chosen so that applying the jumps through G reproduces I and N exactly.
struct ImpulseCoefficients {
    Rational d1, e1, d2, e2;
};

inline ImpulseCoefficients impulse_coeffs(const BoundaryBasis& basis, const Rational& tau) {
    ImpulseCoefficients c;
    c.d1 = basis.delta.slope() / basis.W;
    c.e1 = -basis.delta(tau) / basis.W;
    c.d2 = basis.gamma.slope() / basis.W;
    c.e2 = -basis.gamma(tau) / basis.W;
    return c;
}

/// j1 = d1*I(w) + e1*N(w), j2 = d2*I(w) + e2*N(w), exact when w is rational
/// and I, N stay rational at it.
inline std::pair<Scalar, Scalar> combined_jumps(const ImpulseSpec& spec,
                                                const ImpulseCoefficients& coeffs,
                                                const Scalar& w_tau) {
    Scalar iv, nv;
    if (w_tau.is_exact()) {
        iv = eval_scalar(spec.I, RationalBindings{{"w", *w_tau.exact}});
        nv = eval_scalar(spec.N, RationalBindings{{"w", *w_tau.exact}});
    } else {
        iv = Scalar(eval(spec.I, Bindings{{"w", w_tau.value}}));
        nv = Scalar(eval(spec.N, Bindings{{"w", w_tau.value}}));
    }
    Scalar j1 = Scalar(coeffs.d1) * iv + Scalar(coeffs.e1) * nv;
    Scalar j2 = Scalar(coeffs.d2) * iv + Scalar(coeffs.e2) * nv;
    return {j1, j2};
}

/// G(w)(t) = gamma(t) 1_(tau,1](t) j1 + delta(t) 1_[0,tau](t) j2, with w(tau)
/// read as the left value. The output jumps at tau by gamma(tau) j1 -
/// delta(tau) j2, which the d/e coefficients make equal to I(w(tau)); its
/// derivative jump equals N(w(tau)).
inline PiecewiseGridFunction G_apply(const BoundaryBasis& basis, const ImpulseSpec& spec,
                                     const ImpulseCoefficients& coeffs,
                                     const PiecewiseGridFunction& w) {
    if (w.jump_entry < 0 ||
        !(w.grid->rposition(static_cast<size_t>(w.jump_entry)) == spec.tau))
        throw GridError("grid lacks a double node at tau");
    auto [j1, j2] = combined_jumps(spec, coeffs, Scalar(w.left_at_jump()));
    PiecewiseGridFunction out = PiecewiseGridFunction::with_jump_at(w.grid, spec.tau);
    const size_t left = static_cast<size_t>(out.jump_entry);
    for (size_t j = 0; j < out.size(); ++j) {
        double t = out.grid->position(j);
        out.values[j] = (j <= left) ? basis.delta(t) * j2.value : basis.gamma(t) * j1.value;
    }
    return out;
}

/// Sampled check of the growth bounds. Failure is a verdict with witnesses,
/// not an exception; the bounds are hypotheses of the theory.
struct PBoundReport {
    bool pass = true;
    double min_ratio1 = 0, max_ratio1 = 0, arg_min1 = 0, arg_max1 = 0;
    double min_ratio2 = 0, max_ratio2 = 0, arg_min2 = 0, arg_max2 = 0;
    std::optional<double> witness;  // first w violating a bound
    std::string detail;
};

inline PBoundReport verify_p_bounds(const ImpulseSpec& spec, const ImpulseCoefficients& coeffs,
                                    double w_max, int n_samples = 64) {
    if (w_max <= 0) throw std::invalid_argument("verify_p_bounds: w_max must be positive");
    if (n_samples < 2) throw std::invalid_argument("verify_p_bounds: need at least 2 samples");
    PBoundReport rep;
    const double p11 = to_double(spec.p11), p12 = to_double(spec.p12),
                 p22 = to_double(spec.p22);
    bool first = true;
    for (int k = 1; k <= n_samples; ++k) {
        double w = w_max * k / n_samples;
        auto [j1, j2] = combined_jumps(spec, coeffs, Scalar(w));
        double r1 = j1.value / w, r2 = j2.value / w;
        if (first || r1 < rep.min_ratio1) { rep.min_ratio1 = r1; rep.arg_min1 = w; }
        if (first || r1 > rep.max_ratio1) { rep.max_ratio1 = r1; rep.arg_max1 = w; }
        if (first || r2 < rep.min_ratio2) { rep.min_ratio2 = r2; rep.arg_min2 = w; }
        if (first || r2 > rep.max_ratio2) { rep.max_ratio2 = r2; rep.arg_max2 = w; }
        first = false;
        const double eps = 1e-12;
        if (r1 < p11 - eps || r1 > p12 + eps || r2 < -eps || r2 > p22 + eps) {
            if (rep.pass) rep.witness = w;
            rep.pass = false;
        }
    }
    if (!rep.pass && rep.witness) {
        rep.detail = "impulse-p-bounds violated at w = " + std::to_string(*rep.witness);
    }
    return rep;
}

}  // namespace ibvp
