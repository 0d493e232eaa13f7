#pragma once

// Closed-form boundary basis and Green kernel for w'' + (.) = 0 under
// separated boundary conditions a1 w(0) - b1 w'(0), a2 w(1) + b2 w'(1).
// Everything here is exact rational; doubles are derived views.

#include "rational.hpp"

#include <stdexcept>
#include <string>

namespace ibvp {

struct KernelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Affine function c0 + c1*t with exact coefficients.
struct Affine {
    Rational c0, c1;

    Rational operator()(const Rational& t) const { return c0 + c1 * t; }
    double operator()(double t) const { return to_double(c0) + to_double(c1) * t; }
    Rational slope() const { return c1; }

    /// Antiderivative evaluated at x (constant of integration 0).
    Rational antiderivative(const Rational& x) const {
        return c0 * x + c1 * x * x / Rational(2);
    }
};

struct SLCoefficients {
    Rational a1, b1, a2, b2;

    Rational determinant() const { return a1 * a2 + a1 * b2 + a2 * b1; }

    void validate() const {
        const Rational zero(0);
        if (a1 < zero || b1 < zero || a2 < zero || b2 < zero)
            throw KernelError("boundary coefficients must be nonnegative");
        if (a1 + b1 == zero || a2 + b2 == zero)
            throw KernelError("degenerate boundary condition: a1+b1 and a2+b2 must be nonzero");
        if (determinant() <= zero)
            throw KernelError("resonant boundary coefficients (a1*a2 + a1*b2 + a2*b1 = 0)");
    }
};

/// gamma, delta and the (constant) Wronskian W = gamma*delta' - delta*gamma'.
/// gamma is nonincreasing with gamma(0) = ||gamma||, delta nondecreasing with
/// delta(1) = ||delta||; the four boundary identities hold exactly.
struct BoundaryBasis {
    SLCoefficients coeffs;
    Affine gamma;
    Affine delta;
    Rational W;  // = 1/D, constant and positive

    Rational gamma_sup() const { return gamma(Rational(0)); }
    Rational delta_sup() const { return delta(Rational(1)); }
};

inline BoundaryBasis make_basis(const SLCoefficients& c) {
    c.validate();
    const Rational D = c.determinant();
    BoundaryBasis b;
    b.coeffs = c;
    b.gamma = Affine{(c.a2 + c.b2) / D, -c.a2 / D};
    b.delta = Affine{c.b1 / D, c.a1 / D};
    b.W = Rational(1) / D;
    return b;
}

/// k(t,s) = gamma(t)delta(s)/W for s <= t, gamma(s)delta(t)/W for s > t.
/// Symmetric, bounded by Phi(s) = gamma(s)delta(s)/W, with unit derivative
/// defect across the diagonal.
struct GreenKernel {
    BoundaryBasis basis;

    Rational eval(const Rational& t, const Rational& s) const {
        if (s <= t) return basis.gamma(t) * basis.delta(s) / basis.W;
        return basis.gamma(s) * basis.delta(t) / basis.W;
    }

    double eval(double t, double s) const {
        const double g0 = to_double(basis.gamma.c0), g1 = to_double(basis.gamma.c1);
        const double d0 = to_double(basis.delta.c0), d1 = to_double(basis.delta.c1);
        const double w = to_double(basis.W);
        if (s <= t) return (g0 + g1 * t) * (d0 + d1 * s) / w;
        return (g0 + g1 * s) * (d0 + d1 * t) / w;
    }

    Rational phi(const Rational& s) const { return basis.gamma(s) * basis.delta(s) / basis.W; }
    double phi(double s) const {
        return basis.gamma(s) * basis.delta(s) / to_double(basis.W);
    }

    /// Exact integral of s |-> k(t,s) over [x1, x2] for rational t.
    Rational integral_in_s(const Rational& t, const Rational& x1, const Rational& x2) const {
        if (x2 <= x1) return Rational(0);
        const Affine& g = basis.gamma;
        const Affine& d = basis.delta;
        Rational total(0);
        // region s <= t: gamma(t) * integral of delta
        const Rational lo1 = x1, hi1 = rational_min(x2, rational_max(t, x1));
        if (hi1 > lo1)
            total += g(t) * (d.antiderivative(hi1) - d.antiderivative(lo1));
        // region s > t: delta(t) * integral of gamma
        const Rational lo2 = rational_max(x1, rational_min(t, x2)), hi2 = x2;
        if (hi2 > lo2)
            total += d(t) * (g.antiderivative(hi2) - g.antiderivative(lo2));
        return total / basis.W;
    }

    /// One-sided derivative in t. side = -1 takes the limit from below.
    /// Across t = s the two limits differ by exactly -1.
    Rational ddt(const Rational& t, const Rational& s, int side) const {
        bool lower_branch = (side > 0) ? (s <= t) : (s < t);
        if (lower_branch) return basis.gamma.slope() * basis.delta(s) / basis.W;
        return basis.delta.slope() * basis.gamma(s) / basis.W;
    }
};

inline GreenKernel make_kernel(const SLCoefficients& c) { return GreenKernel{make_basis(c)}; }

/// Window constants on [a, b]: c_gamma = gamma(b)/gamma(0), c_delta =
/// delta(a)/delta(1), c_phi = min of the two. Each lies in (0, 1]; a window
/// touching a zero of the basis is rejected.
struct IntervalConstants {
    Rational c_phi, c_gamma, c_delta;
};

inline IntervalConstants interval_constants(const BoundaryBasis& basis, const Rational& a,
                                            const Rational& b) {
    if (a < Rational(0) || b > Rational(1) || !(a < b))
        throw KernelError("window must satisfy 0 <= a < b <= 1");
    IntervalConstants out;
    out.c_gamma = basis.gamma(b) / basis.gamma_sup();
    out.c_delta = basis.delta(a) / basis.delta_sup();
    if (out.c_gamma == Rational(0) || out.c_delta == Rational(0))
        throw KernelError("degenerate window: basis function vanishes on [a,b]");
    out.c_phi = rational_min(out.c_gamma, out.c_delta);
    return out;
}

}  // namespace ibvp
