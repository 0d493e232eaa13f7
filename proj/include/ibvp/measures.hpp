#pragma once

// Positive Riemann-Stieltjes measures (finite atoms + optional density),
// the augmented functionals built from them, and kernel transforms
// K_C(s) = integral of k(t,s) dC(t).

#include "expr.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

#include <optional>
#include <vector>

namespace ibvp {

struct MeasureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Atom {
    Rational position;  // in [0, 1]
    Rational weight;    // > 0
};

/// Finite atom list plus an optional nonnegative density (an expression in
/// s, with t accepted as an alias). Purely atomic rational measures admit an
/// exact application path.
struct StieltjesMeasure {
    std::vector<Atom> atoms;
    std::optional<Expression> density;

    bool purely_atomic() const { return !density.has_value(); }

    void validate() const {
        for (const auto& a : atoms) {
            if (a.weight <= Rational(0))
                throw MeasureError("measure-positivity: atom weights must be positive");
            if (a.position < Rational(0) || a.position > Rational(1))
                throw MeasureError("atom position outside [0,1]");
        }
    }

    double density_at(double s) const {
        if (!density) return 0.0;
        return eval(*density, Bindings{{"s", s}, {"t", s}});
    }

    /// Sampled positivity evidence for the density part.
    bool density_nonnegative(int samples = 1024, double* worst = nullptr) const {
        if (!density) return true;
        double w = 0.0;
        bool ok = true;
        for (int i = 0; i <= samples; ++i) {
            double s = static_cast<double>(i) / samples;
            double v = density_at(s);
            if (v < w) w = v;
            if (v < -1e-12) ok = false;
        }
        if (worst) *worst = w;
        return ok;
    }
};

/// Exact application to a rational-valued test function; atoms only.
template <class F>
inline Rational apply_exact(const StieltjesMeasure& m, F&& w) {
    if (m.density)
        throw MeasureError("exact application requires a purely atomic measure");
    Rational total(0);
    for (const auto& a : m.atoms) total += a.weight * w(a.position);
    return total;
}

/// Numeric application: atom sum plus the density integral. `breakpoints`
/// mark kinks of w for the adaptive quadrature.
template <class F>
inline double apply(const StieltjesMeasure& m, F&& w,
                    const std::vector<double>& breakpoints = {}) {
    double total = 0.0;
    for (const auto& a : m.atoms) total += to_double(a.weight) * w(to_double(a.position));
    if (m.density) {
        total += integrate([&](double s) { return w(s) * m.density_at(s); }, 0.0, 1.0, 1e-12,
                           breakpoints);
    }
    return total;
}

/// Total mass, i.e. the functional applied to the constant 1.
inline Scalar total_mass(const StieltjesMeasure& m) {
    if (m.purely_atomic()) return Scalar(apply_exact(m, [](const Rational&) { return Rational(1); }));
    return Scalar(apply(m, [](double) { return 1.0; }));
}

// --- augmented measures ------------------------------------------------------

enum class AugmentKind { Tilde, Bar };

/// The measure h*dA + p*atom(tau). Tilde pairs (h2, p12); bar pairs (h1, p11).
/// Unlike a user measure it deliberately carries an atom at the impulse time,
/// so it may only be applied to functions continuous at tau.
struct AugmentedMeasure {
    StieltjesMeasure measure;
    AugmentKind kind;
    Rational tau;
};

namespace detail {

inline AugmentedMeasure augment(const StieltjesMeasure& base, const Rational& h,
                                const Rational& p, const Rational& tau, AugmentKind kind) {
    if (h < Rational(0)) throw MeasureError("augmentation scale must be nonnegative");
    if (p <= Rational(0)) throw MeasureError("augmentation atom weight must be positive");
    if (tau <= Rational(0) || tau >= Rational(1))
        throw MeasureError("impulse time must be interior");
    AugmentedMeasure out;
    out.kind = kind;
    out.tau = tau;
    if (h > Rational(0)) {
        for (const auto& a : base.atoms) out.measure.atoms.push_back({a.position, h * a.weight});
        if (base.density) {
            auto scale = std::make_shared<ExprNode>();
            scale->kind = ExprNode::Kind::Literal;
            scale->literal = h;
            auto prod = std::make_shared<ExprNode>();
            prod->kind = ExprNode::Kind::Binary;
            prod->bin_op = BinOp::Mul;
            prod->lhs = scale;
            prod->rhs = base.density->root();
            out.measure.density = Expression(prod);
        }
    }
    out.measure.atoms.push_back({tau, p});
    return out;
}

}  // namespace detail

/// alpha_tilde[w] = h2*alpha[w] + p12*w(tau).
inline AugmentedMeasure augment_tilde(const StieltjesMeasure& alpha, const Rational& h2,
                                      const Rational& p12, const Rational& tau) {
    return detail::augment(alpha, h2, p12, tau, AugmentKind::Tilde);
}

/// alpha_bar[w] = h1*alpha[w] + p11*w(tau).
inline AugmentedMeasure augment_bar(const StieltjesMeasure& alpha, const Rational& h1,
                                    const Rational& p11, const Rational& tau) {
    return detail::augment(alpha, h1, p11, tau, AugmentKind::Bar);
}

template <class F>
inline Rational apply_exact(const AugmentedMeasure& m, F&& w) {
    return apply_exact(m.measure, std::forward<F>(w));
}

template <class F>
inline double apply(const AugmentedMeasure& m, F&& w,
                    const std::vector<double>& breakpoints = {}) {
    return apply(m.measure, std::forward<F>(w), breakpoints);
}

// --- kernel transforms -------------------------------------------------------

/// s |-> integral of k(t,s) dC(t). Piecewise affine in s with kinks at the
/// atom positions when C is purely atomic.
struct KernelTransform {
    const GreenKernel* kernel = nullptr;
    StieltjesMeasure measure;

    double operator()(double s) const {
        double total = 0.0;
        for (const auto& a : measure.atoms)
            total += to_double(a.weight) * kernel->eval(to_double(a.position), s);
        if (measure.density) {
            total += integrate([&](double t) { return kernel->eval(t, s) * measure.density_at(t); },
                               0.0, 1.0, 1e-12, {s});
        }
        return total;
    }

    Rational eval_exact(const Rational& s) const {
        if (measure.density)
            throw MeasureError("exact transform requires a purely atomic measure");
        Rational total(0);
        for (const auto& a : measure.atoms) total += a.weight * kernel->eval(a.position, s);
        return total;
    }

    std::vector<double> breakpoints() const {
        std::vector<double> out;
        for (const auto& a : measure.atoms) out.push_back(to_double(a.position));
        return out;
    }

    /// Exact integral over [lo, hi] (atomic measure; weight g identically 1).
    Rational integral_exact(const Rational& lo, const Rational& hi) const {
        if (measure.density)
            throw MeasureError("exact transform integral requires a purely atomic measure");
        Rational total(0);
        for (const auto& a : measure.atoms)
            total += a.weight * kernel->integral_in_s(a.position, lo, hi);
        return total;
    }
};

inline KernelTransform kernel_transform(const GreenKernel& kernel, const StieltjesMeasure& m) {
    return KernelTransform{&kernel, m};
}

inline KernelTransform kernel_transform(const GreenKernel& kernel, const AugmentedMeasure& m) {
    return KernelTransform{&kernel, m.measure};
}

/// integral of K_C(s) g(s) ds over [lo, hi]. Exact when the transform is
/// atomic and g is the constant 1; adaptive quadrature otherwise.
inline Scalar weighted_integral(const KernelTransform& tr, const Expression& g,
                                const Rational& lo, const Rational& hi) {
    if (tr.measure.purely_atomic() && is_literal_one(g))
        return Scalar(tr.integral_exact(lo, hi));
    auto bps = tr.breakpoints();
    double v = integrate(
        [&](double s) {
            return tr(s) * eval(g, Bindings{{"s", s}, {"t", s}});
        },
        to_double(lo), to_double(hi), 1e-10, bps);
    return Scalar(v);
}

/// Generic weighted integral of fn(s) g(s) ds for a numeric integrand.
template <class F>
inline double weighted_integral_numeric(F&& fn, const Expression& g, double lo, double hi,
                                        const std::vector<double>& breakpoints = {},
                                        double rel_tol = 1e-10) {
    return integrate(
        [&](double s) { return fn(s) * eval(g, Bindings{{"s", s}, {"t", s}}); }, lo, hi,
        rel_tol, breakpoints);
}

}  // namespace ibvp
