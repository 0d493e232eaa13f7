#pragma once

// The inequality machinery: growth constants m_i and M_i, the augmented
// functionals applied to the boundary basis, box extrema of the
// nonlinearities, and the three index conditions evaluated at a radius rho.
//
// Every constant except the f-extrema is exact for atomic measures with
// g identically 1. The f-extrema are exact when full monotonicity hints are
// declared (corner evaluation); otherwise they are corner-biased sampling
// labeled as numeric evidence.

#include "cone.hpp"
#include "measures.hpp"
#include "problem.hpp"
#include "quadrature.hpp"

#include <array>
#include <sstream>

namespace ibvp {

struct ConditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* verdict_name(Verdict v) {
    return v == Verdict::Pass ? "pass" : v == Verdict::Fail ? "fail" : "inconclusive";
}

/// Strict comparison with the module's margin policy: exact values compare
/// exactly (equality fails, the lemmas need strictness); numeric values get
/// a 1e-9 margin and the band in between is inconclusive, never a pass.
inline Verdict strictly_less(const Scalar& lhs, const Scalar& rhs) {
    if (lhs.is_exact() && rhs.is_exact())
        return *lhs.exact < *rhs.exact ? Verdict::Pass : Verdict::Fail;
    const double margin = 1e-9;
    if (lhs.value < rhs.value - margin) return Verdict::Pass;
    if (lhs.value > rhs.value + margin) return Verdict::Fail;
    return Verdict::Inconclusive;
}

inline Verdict strictly_greater(const Scalar& lhs, const Scalar& rhs) {
    return strictly_less(rhs, lhs);
}

inline Verdict verdict_and(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Pass;
}

inline Verdict verdict_or(Verdict a, Verdict b) {
    if (a == Verdict::Pass || b == Verdict::Pass) return Verdict::Pass;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Fail;
}

// --- growth constants --------------------------------------------------------

namespace detail {

/// Exact quadratic through three points; the inner kernel integral in t is a
/// quadratic with second derivative -1, so three samples determine it.
struct Quadratic {
    Rational a, b, c;  // a + b t + c t^2
    Rational operator()(const Rational& t) const { return a + b * t + c * t * t; }
};

inline Quadratic fit_quadratic(const Rational& x0, const Rational& y0, const Rational& x1,
                               const Rational& y1, const Rational& x2, const Rational& y2) {
    Quadratic q;
    Rational s01 = (y1 - y0) / (x1 - x0);
    Rational s12 = (y2 - y1) / (x2 - x1);
    q.c = (s12 - s01) / (x2 - x0);
    q.b = s01 - q.c * (x0 + x1);
    q.a = y0 - q.b * x0 - q.c * x0 * x0;
    return q;
}

}  // namespace detail

struct ExtremumWithArg {
    Scalar value;
    double arg = 0;
};

/// 1/m = sup over t in [0,1] of the integral of k(t,s) g(s) ds over [0,1].
inline ExtremumWithArg sup_kernel_integral(const GreenKernel& kernel, const Expression& g) {
    if (is_literal_one(g)) {
        const Rational zero(0), one(1), half(1, 2);
        auto I = [&](const Rational& t) { return kernel.integral_in_s(t, zero, one); };
        auto q = detail::fit_quadratic(zero, I(zero), half, I(half), one, I(one));
        Rational vertex = -q.b / (Rational(2) * q.c);  // c = -1/2, concave
        Rational t_star = rational_min(rational_max(vertex, zero), one);
        Rational best = rational_max(q(t_star), rational_max(q(zero), q(one)));
        double arg = to_double(t_star);
        if (best == q(zero)) arg = 0;
        if (best == q(one)) arg = 1;
        return {Scalar(best), arg};
    }
    auto J = [&](double t) {
        return integrate(
            [&](double s) { return kernel.eval(t, s) * eval(g, Bindings{{"s", s}, {"t", s}}); },
            0.0, 1.0, 1e-11, {t});
    };
    auto r = maximize_scalar(J, 0.0, 1.0, 1e-9);
    return {Scalar(r.value), r.arg};
}

/// 1/M = inf over t in [a,b] of the integral of k(t,s) g(s) ds over [a,b].
inline ExtremumWithArg inf_kernel_integral(const GreenKernel& kernel, const Expression& g,
                                           const Rational& a, const Rational& b) {
    if (is_literal_one(g)) {
        auto I = [&](const Rational& t) { return kernel.integral_in_s(t, a, b); };
        // concave quadratic on [a,b]: the minimum sits at an endpoint
        Rational va = I(a), vb = I(b);
        if (va <= vb) return {Scalar(va), to_double(a)};
        return {Scalar(vb), to_double(b)};
    }
    double ad = to_double(a), bd = to_double(b);
    auto J = [&](double t) {
        return integrate(
            [&](double s) { return kernel.eval(t, s) * eval(g, Bindings{{"s", s}, {"t", s}}); },
            ad, bd, 1e-11, {t});
    };
    auto r = minimize_scalar(J, ad, bd, 1e-9);
    return {Scalar(r.value), r.arg};
}

/// All per-equation constants feeding the index conditions.
struct EquationBounds {
    Scalar one_over_m, one_over_M;
    Scalar m, M;
    double sup_arg = 0, inf_arg = 0;
    Scalar alpha_tilde_gamma, alpha_tilde_delta, alpha_bar_gamma;
    Scalar beta_one;      // beta_i[1]
    Scalar K_tilde_int;   // integral over [0,1] of K_tilde(s) g(s) ds
    Scalar K_bar_int;     // integral over [a_i,b_i] of K_bar(s) g(s) ds
    Rational gamma_sup, delta_sup;
};

struct BoundConstants {
    std::array<EquationBounds, 2> eq;
};

namespace detail {

inline Scalar apply_to_affine(const StieltjesMeasure& m, const Affine& fn) {
    if (m.purely_atomic())
        return Scalar(apply_exact(m, [&](const Rational& x) { return fn(x); }));
    return Scalar(apply(m, [&](double x) { return fn(x); }));
}

inline Scalar apply_to_affine(const AugmentedMeasure& m, const Affine& fn) {
    return apply_to_affine(m.measure, fn);
}

}  // namespace detail

inline BoundConstants bound_constants(const ProblemSpec& p) {
    BoundConstants out;
    for (int i = 0; i < 2; ++i) {
        const EquationSpec& e = p.eq[i];
        GreenKernel kernel = make_kernel(e.bc);
        EquationBounds& b = out.eq[i];

        // the positivity assumption behind M_i > 0
        Scalar phi_g;
        if (is_literal_one(e.g)) {
            const Affine& ga = kernel.basis.gamma;
            const Affine& da = kernel.basis.delta;
            auto phi_anti = [&](const Rational& x) {
                // antiderivative of the quadratic gamma(s)delta(s)
                Rational c0 = ga.c0 * da.c0, c1 = ga.c0 * da.c1 + ga.c1 * da.c0,
                         c2 = ga.c1 * da.c1;
                return c0 * x + c1 * x * x / Rational(2) + c2 * x * x * x / Rational(3);
            };
            phi_g = Scalar((phi_anti(e.window_b) - phi_anti(e.window_a)) / kernel.basis.W);
        } else {
            phi_g = Scalar(weighted_integral_numeric(
                [&](double s) { return kernel.phi(s); }, e.g, to_double(e.window_a),
                to_double(e.window_b)));
        }
        bool positive = phi_g.is_exact() ? (*phi_g.exact > Rational(0)) : (phi_g.value > 1e-15);
        if (!positive)
            throw ConditionError(
                "g-positivity-window: the integral of Phi_i(s) g_i(s) over [a_i,b_i] must be "
                "positive (equation " + std::to_string(i + 1) + ")");

        auto sup = sup_kernel_integral(kernel, e.g);
        auto inf = inf_kernel_integral(kernel, e.g, e.window_a, e.window_b);
        b.one_over_m = sup.value;
        b.one_over_M = inf.value;
        b.sup_arg = sup.arg;
        b.inf_arg = inf.arg;
        b.m = Scalar(Rational(1)) / b.one_over_m;
        b.M = Scalar(Rational(1)) / b.one_over_M;

        AugmentedMeasure tilde = augment_tilde(e.alpha, e.h2, e.impulse.p12, e.impulse.tau);
        AugmentedMeasure bar = augment_bar(e.alpha, e.h1, e.impulse.p11, e.impulse.tau);
        b.alpha_tilde_gamma = detail::apply_to_affine(tilde, kernel.basis.gamma);
        b.alpha_tilde_delta = detail::apply_to_affine(tilde, kernel.basis.delta);
        b.alpha_bar_gamma = detail::apply_to_affine(bar, kernel.basis.gamma);
        b.beta_one = total_mass(e.beta);
        b.K_tilde_int =
            weighted_integral(kernel_transform(kernel, tilde), e.g, Rational(0), Rational(1));
        b.K_bar_int =
            weighted_integral(kernel_transform(kernel, bar), e.g, e.window_a, e.window_b);
        b.gamma_sup = kernel.basis.gamma_sup();
        b.delta_sup = kernel.basis.delta_sup();
    }
    return out;
}

// --- box extrema of the nonlinearities ----------------------------------------

struct BoxExtremum {
    Scalar value;                 // extremum of f/rho over the box
    std::array<double, 3> arg{};  // (t, u, v) attaining it
    bool exact = false;           // corner evaluation with rational data
};

namespace detail {

struct AxisRange {
    Rational lo, hi;
    Monotone hint;
};

inline BoxExtremum box_extremum(const Expression& f, const std::array<AxisRange, 3>& box,
                                const Rational& rho, bool maximize, int samples_per_axis = 64) {
    static const char* names[3] = {"t", "u", "v"};
    bool all_hinted = true;
    for (const auto& a : box)
        if (a.hint == Monotone::None && a.lo != a.hi) all_hinted = false;

    if (all_hinted) {
        RationalBindings env;
        std::array<double, 3> arg{};
        for (int k = 0; k < 3; ++k) {
            bool take_hi = (box[k].hint == Monotone::Inc) == maximize;
            const Rational& x = take_hi ? box[k].hi : box[k].lo;
            env[names[k]] = x;
            arg[k] = to_double(x);
        }
        Scalar v = eval_scalar(f, env);
        BoxExtremum out;
        out.value = v / Scalar(rho);
        out.arg = arg;
        out.exact = out.value.is_exact();
        return out;
    }

    // corner-biased tensor sampling; hinted axes collapse to their corner
    std::array<std::vector<double>, 3> axis;
    for (int k = 0; k < 3; ++k) {
        double lo = to_double(box[k].lo), hi = to_double(box[k].hi);
        if (box[k].hint != Monotone::None || lo == hi) {
            bool take_hi = (box[k].hint == Monotone::Inc) == maximize;
            axis[k].push_back(lo == hi ? lo : (take_hi ? hi : lo));
            continue;
        }
        int m = samples_per_axis;
        for (int j = 0; j < m; ++j) {
            double x = 0.5 * (1.0 - std::cos(M_PI * j / (m - 1)));
            axis[k].push_back(lo + (hi - lo) * x);
        }
    }
    double best = 0;
    std::array<double, 3> arg{};
    bool first = true;
    Bindings env;
    for (double tv : axis[0]) {
        env["t"] = tv;
        for (double uv : axis[1]) {
            env["u"] = uv;
            for (double vv : axis[2]) {
                env["v"] = vv;
                double val = eval(f, env);
                if (first || (maximize ? val > best : val < best)) {
                    best = val;
                    arg = {tv, uv, vv};
                    first = false;
                }
            }
        }
    }
    BoxExtremum out;
    out.value = Scalar(best / to_double(rho));
    out.arg = arg;
    out.exact = false;
    return out;
}

}  // namespace detail

/// sup of f/rho over [0,1] x [0,rho] x [0,rho].
inline BoxExtremum f_sup_box(const Expression& f, const MonotoneHints& hints,
                             const Rational& rho, int samples = 64) {
    if (rho <= Rational(0)) throw ConditionError("f_sup_box: rho must be positive");
    std::array<detail::AxisRange, 3> box = {
        detail::AxisRange{Rational(0), Rational(1), hints.t},
        detail::AxisRange{Rational(0), rho, hints.u},
        detail::AxisRange{Rational(0), rho, hints.v}};
    return detail::box_extremum(f, box, rho, true, samples);
}

/// inf of f/rho over [a,b] x box, where the `which` component (0 for u,
/// 1 for v) ranges over [rho, rho/c] and the other over [0, rho/c].
inline BoxExtremum f_inf_box(const Expression& f, const MonotoneHints& hints, const Rational& a,
                             const Rational& b, const Rational& rho, const Rational& c,
                             int which, int samples = 64) {
    if (rho <= Rational(0) || c <= Rational(0) || c > Rational(1))
        throw ConditionError("f_inf_box: need rho > 0 and c in (0,1]");
    Rational hi = rho / c;
    std::array<detail::AxisRange, 3> box = {
        detail::AxisRange{a, b, hints.t},
        detail::AxisRange{which == 0 ? rho : Rational(0), hi, hints.u},
        detail::AxisRange{which == 1 ? rho : Rational(0), hi, hints.v}};
    return detail::box_extremum(f, box, rho, false, samples);
}

/// inf of f/rho over [a,b] x [0,rho/c] x [0,rho/c].
inline BoxExtremum f_inf_box_star(const Expression& f, const MonotoneHints& hints,
                                  const Rational& a, const Rational& b, const Rational& rho,
                                  const Rational& c, int samples = 64) {
    if (rho <= Rational(0) || c <= Rational(0) || c > Rational(1))
        throw ConditionError("f_inf_box_star: need rho > 0 and c in (0,1]");
    Rational hi = rho / c;
    std::array<detail::AxisRange, 3> box = {detail::AxisRange{a, b, hints.t},
                                            detail::AxisRange{Rational(0), hi, hints.u},
                                            detail::AxisRange{Rational(0), hi, hints.v}};
    return detail::box_extremum(f, box, rho, false, samples);
}

// --- condition checks ----------------------------------------------------------

struct PreconditionReport {
    std::array<Scalar, 2> alpha_tilde_gamma;
    Verdict verdict = Verdict::Fail;
};

/// The standing assumption alpha_tilde_i[gamma_i] < 1 for both equations.
inline PreconditionReport check_precondition(const BoundConstants& bc) {
    PreconditionReport r;
    r.alpha_tilde_gamma = {bc.eq[0].alpha_tilde_gamma, bc.eq[1].alpha_tilde_gamma};
    r.verdict = verdict_and(strictly_less(bc.eq[0].alpha_tilde_gamma, Scalar(Rational(1))),
                            strictly_less(bc.eq[1].alpha_tilde_gamma, Scalar(Rational(1))));
    return r;
}

enum class ConditionKind { I1, I0, I0Star };

inline std::string condition_name(ConditionKind k) {
    switch (k) {
        case ConditionKind::I1: return "I1";
        case ConditionKind::I0: return "I0";
        default: return "I0*";
    }
}

struct EquationCondition {
    Scalar lhs;
    Scalar offset;       // additive constant part (I1 only, else 0)
    Scalar coefficient;  // multiplier of the f-extremum
    Scalar threshold;    // extremum value solving LHS = 1
    BoxExtremum extremum;
    Verdict verdict = Verdict::Fail;
};

struct ConditionReport {
    ConditionKind kind;
    Rational rho;
    Rational c_used;
    std::array<EquationCondition, 2> eq;
    Verdict verdict = Verdict::Fail;
    bool exact = false;  // provenance: every ingredient stayed rational
};

namespace detail {

inline void require_precondition(const BoundConstants& bc) {
    for (int i = 0; i < 2; ++i) {
        const Scalar& v = bc.eq[i].alpha_tilde_gamma;
        bool ok = v.is_exact() ? (*v.exact < Rational(1)) : (v.value < 1.0);
        if (!ok)
            throw ConditionError(
                "precondition alpha_tilde[gamma] < 1 fails for equation " +
                std::to_string(i + 1));
    }
}

}  // namespace detail

/// (I1_rho): for both i,
///   (||gamma||*at[delta]/(1-at[gamma]) + ||delta||) * (l2*beta[1] + p22)
///     + f^{0,rho} * (1/m + ||gamma||/(1-at[gamma]) * K_tilde_int) < 1.
inline ConditionReport check_I1(const ProblemSpec& p, const BoundConstants& bc,
                                const Rational& rho, int samples = 64) {
    detail::require_precondition(bc);
    ConditionReport rep;
    rep.kind = ConditionKind::I1;
    rep.rho = rho;
    rep.c_used = Rational(0);  // unused by this condition
    rep.exact = true;
    for (int i = 0; i < 2; ++i) {
        const EquationBounds& b = bc.eq[i];
        const EquationSpec& e = p.eq[i];
        EquationCondition& ec = rep.eq[i];
        Scalar one(Rational(1));
        Scalar gap = one - b.alpha_tilde_gamma;
        Scalar gs(b.gamma_sup), ds(b.delta_sup);
        ec.offset = (gs * b.alpha_tilde_delta / gap + ds) *
                    (Scalar(e.l2) * b.beta_one + Scalar(e.impulse.p22));
        ec.coefficient = b.one_over_m + gs / gap * b.K_tilde_int;
        ec.extremum = f_sup_box(e.f, e.f_monotone, rho, samples);
        ec.lhs = ec.offset + ec.extremum.value * ec.coefficient;
        ec.threshold = (one - ec.offset) / ec.coefficient;
        ec.verdict = strictly_less(ec.lhs, one);
        rep.exact = rep.exact && ec.lhs.is_exact();
    }
    rep.verdict = verdict_and(rep.eq[0].verdict, rep.eq[1].verdict);
    return rep;
}

/// (I0_rho): for both i,
///   f_{i,(rho,rho/c)} * (c_gamma*||gamma||/(1-ab[gamma]) * K_bar_int + 1/M) > 1.
inline ConditionReport check_I0(const ProblemSpec& p, const BoundConstants& bc,
                                const ConeData& cone, const Rational& rho, const Rational& c,
                                int samples = 64) {
    detail::require_precondition(bc);
    ConditionReport rep;
    rep.kind = ConditionKind::I0;
    rep.rho = rho;
    rep.c_used = c;
    rep.exact = true;
    for (int i = 0; i < 2; ++i) {
        const EquationBounds& b = bc.eq[i];
        const EquationSpec& e = p.eq[i];
        EquationCondition& ec = rep.eq[i];
        Scalar one(Rational(1));
        Scalar gap = one - b.alpha_bar_gamma;
        ec.offset = Scalar(Rational(0));
        ec.coefficient =
            Scalar(cone.per_eq[i].window.c_gamma) * Scalar(b.gamma_sup) / gap * b.K_bar_int +
            b.one_over_M;
        ec.extremum = f_inf_box(e.f, e.f_monotone, e.window_a, e.window_b, rho, c, i, samples);
        ec.lhs = ec.extremum.value * ec.coefficient;
        ec.threshold = one / ec.coefficient;
        ec.verdict = strictly_greater(ec.lhs, one);
        rep.exact = rep.exact && ec.lhs.is_exact();
    }
    rep.verdict = verdict_and(rep.eq[0].verdict, rep.eq[1].verdict);
    return rep;
}

/// (I0_rho)*: for SOME i,
///   f*_{i,(0,rho/c)} * (c_gamma*||gamma||/(1-ab[gamma]) * K_bar_int + 1/M) > 1.
inline ConditionReport check_I0_star(const ProblemSpec& p, const BoundConstants& bc,
                                     const ConeData& cone, const Rational& rho,
                                     const Rational& c, int samples = 64) {
    detail::require_precondition(bc);
    ConditionReport rep;
    rep.kind = ConditionKind::I0Star;
    rep.rho = rho;
    rep.c_used = c;
    rep.exact = true;
    for (int i = 0; i < 2; ++i) {
        const EquationBounds& b = bc.eq[i];
        const EquationSpec& e = p.eq[i];
        EquationCondition& ec = rep.eq[i];
        Scalar one(Rational(1));
        Scalar gap = one - b.alpha_bar_gamma;
        ec.offset = Scalar(Rational(0));
        ec.coefficient =
            Scalar(cone.per_eq[i].window.c_gamma) * Scalar(b.gamma_sup) / gap * b.K_bar_int +
            b.one_over_M;
        ec.extremum =
            f_inf_box_star(e.f, e.f_monotone, e.window_a, e.window_b, rho, c, samples);
        ec.lhs = ec.extremum.value * ec.coefficient;
        ec.threshold = one / ec.coefficient;
        ec.verdict = strictly_greater(ec.lhs, one);
        rep.exact = rep.exact && ec.lhs.is_exact();
    }
    rep.verdict = verdict_or(rep.eq[0].verdict, rep.eq[1].verdict);
    return rep;
}

}  // namespace ibvp
