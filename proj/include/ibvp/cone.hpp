#pragma once

// Cone constants c_i = min{c_Phi, c_gamma, c_delta, impulse term} and the
// global c = min{c_1, c_2}, plus a membership test for grid functions.

#include "grid.hpp"
#include "impulse.hpp"
#include "problem.hpp"

#include <sstream>

namespace ibvp {

struct ConeEquationData {
    IntervalConstants window;  // c_phi, c_gamma, c_delta
    Rational c_impulse;        // c_gamma*||gamma||*p11 / max{||gamma||p12, ||delta||p22}
    Rational c_i;
};

struct ConeData {
    std::array<ConeEquationData, 2> per_eq;
    Rational c;                         // min{c_1, c_2}, always the computed value
    std::optional<Rational> override_c; // user-declared alternative, reported alongside

    const Rational& effective_c(bool use_override) const {
        return (use_override && override_c) ? *override_c : c;
    }
};

inline ConeData cone_constants(const ProblemSpec& p) {
    ConeData out;
    for (int i = 0; i < 2; ++i) {
        const EquationSpec& e = p.eq[i];
        BoundaryBasis basis = make_basis(e.bc);
        ConeEquationData d;
        d.window = interval_constants(basis, e.window_a, e.window_b);
        const Rational gs = basis.gamma_sup(), ds = basis.delta_sup();
        const Rational denom = rational_max(gs * e.impulse.p12, ds * e.impulse.p22);
        d.c_impulse = d.window.c_gamma * gs * e.impulse.p11 / denom;
        d.c_i = rational_min(rational_min(d.window.c_phi, d.window.c_gamma),
                             rational_min(d.window.c_delta, d.c_impulse));
        out.per_eq[i] = d;
    }
    out.c = rational_min(out.per_eq[0].c_i, out.per_eq[1].c_i);
    out.override_c = p.analysis.override_c;
    return out;
}

/// One-line derivation of c, used for discrepancy notes in reports.
inline std::string cone_derivation(const ConeData& d) {
    std::ostringstream os;
    for (int i = 0; i < 2; ++i) {
        const auto& q = d.per_eq[i];
        os << "c" << (i + 1) << " = min{c_Phi=" << to_string(q.window.c_phi)
           << ", c_gamma=" << to_string(q.window.c_gamma)
           << ", c_delta=" << to_string(q.window.c_delta)
           << ", impulse=" << to_string(q.c_impulse) << "} = " << to_string(q.c_i) << "; ";
    }
    os << "c = min{c1,c2} = " << to_string(d.c);
    return os.str();
}

struct ConeVerdict {
    bool pass = true;
    std::string detail;
    double witness_position = 0;
};

/// pass iff u >= -tol everywhere and min over [a,b] >= c*||u|| - tol.
inline ConeVerdict cone_membership(const PiecewiseGridFunction& u, double a, double b, double c,
                                   double tol) {
    ConeVerdict v;
    for (size_t j = 0; j < u.size(); ++j) {
        if (u.values[j] < -tol) {
            v.pass = false;
            v.witness_position = u.grid->position(j);
            std::ostringstream os;
            os << "negative value " << u.values[j] << " at t = " << v.witness_position;
            v.detail = os.str();
            return v;
        }
    }
    double window_min = u.min_on(a, b);
    double norm = u.sup_norm();
    if (window_min < c * norm - tol) {
        v.pass = false;
        std::ostringstream os;
        os << "window minimum " << window_min << " < c*||u|| = " << c * norm;
        v.detail = os.str();
    }
    return v;
}

}  // namespace ibvp
