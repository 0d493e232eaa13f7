#pragma once

// Numerical solution of the fixed-point system by damped Picard iteration.
//
// The integral term is discretized by product-trapezoid quadrature: the
// scheme integrates k(t,.) times the piecewise-linear interpolant of
// g*f(., u, v) exactly on panels aligned with the kernel kink, so the
// dominant error is the interpolation of g*f. This keeps the impulse and
// boundary identities of the discrete solution exact up to iteration
// tolerance, which the residual checks rely on.

#include "cone.hpp"
#include "grid.hpp"
#include "impulse.hpp"
#include "problem.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace ibvp {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shared node set: per-equation uniform panels on [0,tau_i] and [tau_i,1],
/// measure atoms and window endpoints, with both impulse times duplicated.
inline GridPtr build_grid(const ProblemSpec& p, int n) {
    if (n < 8) throw SolverError("build_grid: need at least 8 panels per smooth piece");
    std::vector<Rational> base;
    std::vector<Rational> jumps;
    for (int i = 0; i < 2; ++i) {
        const Rational& tau = p.eq[i].impulse.tau;
        for (int k = 0; k <= n; ++k) {
            Rational frac(k, n);
            base.push_back(tau * frac);
            base.push_back(tau + (Rational(1) - tau) * frac);
        }
        for (const auto& a : p.eq[i].alpha.atoms) base.push_back(a.position);
        for (const auto& a : p.eq[i].beta.atoms) base.push_back(a.position);
        base.push_back(p.eq[i].window_a);
        base.push_back(p.eq[i].window_b);
        jumps.push_back(tau);
    }
    return Grid::build(std::move(base), std::move(jumps));
}

/// Riemann-Stieltjes functional of a grid function: exact node hits for
/// atoms when possible, grid trapezoid for the density part.
inline double apply_to_grid_function(const StieltjesMeasure& m, const PiecewiseGridFunction& w) {
    double total = 0;
    for (const auto& a : m.atoms) {
        if (w.jump_entry >= 0 &&
            w.grid->rposition(static_cast<size_t>(w.jump_entry)) == a.position)
            throw MeasureError(
                "measure-continuity-at-tau: atom coincides with the jump of the integrand");
        total += to_double(a.weight) * (w.grid->has_node(a.position)
                                            ? w.value_at_node(a.position)
                                            : w.value_at(to_double(a.position)));
    }
    if (m.density) {
        std::vector<double> vals(w.size());
        for (size_t j = 0; j < w.size(); ++j)
            vals[j] = w.values[j] * m.density_at(w.grid->position(j));
        total += trapezoid(*w.grid, vals);
    }
    return total;
}

/// The discretized integral operator T on a fixed grid.
class HammersteinOperator {
  public:
    HammersteinOperator(const ProblemSpec& p, GridPtr grid) : p_(&p), grid_(std::move(grid)) {
        const size_t N = grid_->size();
        for (int i = 0; i < 2; ++i) {
            kernel_[i] = make_kernel(p.eq[i].bc);
            coeffs_[i] = impulse_coeffs(kernel_[i].basis, p.eq[i].impulse.tau);
            tau_left_[i] = grid_->index_of(p.eq[i].impulse.tau);
            gamma_[i].resize(N);
            delta_[i].resize(N);
            gvals_[i].resize(N);
            for (size_t j = 0; j < N; ++j) {
                double t = grid_->position(j);
                gamma_[i][j] = kernel_[i].basis.gamma(t);
                delta_[i][j] = kernel_[i].basis.delta(t);
                gvals_[i][j] = eval(p.eq[i].g, Bindings{{"s", t}, {"t", t}});
            }
            assemble_matrix(i);
        }
    }

    const GridPtr& grid() const { return grid_; }
    const ProblemSpec& problem() const { return *p_; }
    const GreenKernel& kernel(int i) const { return kernel_[i]; }
    const ImpulseCoefficients& impulse_coefficients(int i) const { return coeffs_[i]; }

    /// Applies T to a pair of grid functions (component-wise output).
    std::pair<PiecewiseGridFunction, PiecewiseGridFunction> apply(
        const PiecewiseGridFunction& u, const PiecewiseGridFunction& v) const {
        State st = prepare(u, v);
        const size_t N = grid_->size();
        auto out_u = PiecewiseGridFunction::with_jump_at(grid_, p_->eq[0].impulse.tau);
        auto out_v = PiecewiseGridFunction::with_jump_at(grid_, p_->eq[1].impulse.tau);
        for (size_t j = 0; j < N; ++j) {
            out_u.values[j] = boundary_part(0, j, st) + matrix_row(0, j, st.phi[0]);
            out_v.values[j] = boundary_part(1, j, st) + matrix_row(1, j, st.phi[1]);
        }
        return {std::move(out_u), std::move(out_v)};
    }

    /// Natural (Nystrom) interpolant of component `i` of T(u,v) at any t.
    /// side < 0 takes the left branch at that equation's impulse time.
    double apply_component_at(int i, double t, int side, const PiecewiseGridFunction& u,
                              const PiecewiseGridFunction& v) const {
        State st = prepare(u, v);
        return component_at(i, t, side, st);
    }

    /// Evaluates all boundary/impulse scalars once so repeated point
    /// evaluations (derivative probes) reuse them.
    struct State {
        std::array<double, 2> H{}, L{};     // H_i(alpha_i[.]), L_i(beta_i[.])
        std::array<double, 2> j1{}, j2{};   // combined jumps per equation
        std::array<std::vector<double>, 2> phi;  // g*f at entries
    };

    State prepare(const PiecewiseGridFunction& u, const PiecewiseGridFunction& v) const {
        guard_nonnegative(u, "u");
        guard_nonnegative(v, "v");
        State st;
        const size_t N = grid_->size();
        Bindings env;
        for (int i = 0; i < 2; ++i) {
            const EquationSpec& e = p_->eq[i];
            st.phi[i].resize(N);
            for (size_t j = 0; j < N; ++j) {
                env["t"] = grid_->position(j);
                env["u"] = std::max(0.0, u.values[j]);
                env["v"] = std::max(0.0, v.values[j]);
                st.phi[i][j] = gvals_[i][j] * eval(e.f, env);
            }
        }
        double a1 = std::max(0.0, apply_to_grid_function(p_->eq[0].alpha, u));
        double b1 = std::max(0.0, apply_to_grid_function(p_->eq[0].beta, v));
        double a2 = std::max(0.0, apply_to_grid_function(p_->eq[1].alpha, v));
        double b2 = std::max(0.0, apply_to_grid_function(p_->eq[1].beta, u));
        st.H[0] = eval(p_->eq[0].H, Bindings{{"w", a1}});
        st.L[0] = eval(p_->eq[0].L, Bindings{{"w", b1}});
        st.H[1] = eval(p_->eq[1].H, Bindings{{"w", a2}});
        st.L[1] = eval(p_->eq[1].L, Bindings{{"w", b2}});
        const PiecewiseGridFunction* w[2] = {&u, &v};
        for (int i = 0; i < 2; ++i) {
            double w_tau = std::max(0.0, w[i]->values[tau_left_[i]]);
            auto [j1, j2] = combined_jumps(p_->eq[i].impulse, coeffs_[i], Scalar(w_tau));
            st.j1[i] = j1.value;
            st.j2[i] = j2.value;
        }
        return st;
    }

    double component_at(int i, double t, int side, const State& st) const {
        const double tau = to_double(p_->eq[i].impulse.tau);
        const double g = kernel_[i].basis.gamma(t), d = kernel_[i].basis.delta(t);
        double val = g * st.H[i] + d * st.L[i];
        bool left_of_tau = t < tau || (t == tau && side <= 0);
        val += left_of_tau ? d * st.j2[i] : g * st.j1[i];
        val += integral_at(i, t, st.phi[i]);
        return val;
    }

  private:
    const ProblemSpec* p_;
    GridPtr grid_;
    std::array<GreenKernel, 2> kernel_;
    std::array<ImpulseCoefficients, 2> coeffs_;
    std::array<size_t, 2> tau_left_;
    std::array<std::vector<double>, 2> gamma_, delta_, gvals_;
    std::array<std::vector<double>, 2> matrix_;  // N x N product-trapezoid weights

    void guard_nonnegative(const PiecewiseGridFunction& w, const char* name) const {
        for (double x : w.values)
            if (x < -1e-9)
                throw SolverError(std::string("operator input ") + name +
                                  " is negative beyond tolerance");
    }

    // weight of phi_a and phi_b in the exact integral of k(t,.) times the
    // affine interpolant over [sa, sb]
    static double product_panel(const GreenKernel& k, double t, double sa, double sb,
                                double phi_a, double phi_b) {
        double ka = k.eval(t, sa), kb = k.eval(t, sb);
        return (sb - sa) / 6.0 * (ka * (2 * phi_a + phi_b) + kb * (phi_a + 2 * phi_b));
    }

    void assemble_matrix(int i) {
        const size_t N = grid_->size();
        matrix_[i].assign(N * N, 0.0);
        const GreenKernel& k = kernel_[i];
        for (size_t j = 0; j + 1 < N; ++j) {
            double sa = grid_->position(j), sb = grid_->position(j + 1);
            double h = sb - sa;
            if (h <= 0) continue;
            for (size_t r = 0; r < N; ++r) {
                double t = grid_->position(r);
                double ka = k.eval(t, sa), kb = k.eval(t, sb);
                // exact integral of k(t,.)*hat functions on this panel;
                // t is a node, so k(t,.) is affine inside the panel
                matrix_[i][r * N + j] += h / 6.0 * (2 * ka + kb);
                matrix_[i][r * N + j + 1] += h / 6.0 * (ka + 2 * kb);
            }
        }
    }

    double matrix_row(int i, size_t r, const std::vector<double>& phi) const {
        const size_t N = grid_->size();
        const double* row = matrix_[i].data() + r * N;
        double acc = 0;
        for (size_t j = 0; j < N; ++j) acc += row[j] * phi[j];
        return acc;
    }

    double boundary_part(int i, size_t j, const State& st) const {
        double val = gamma_[i][j] * st.H[i] + delta_[i][j] * st.L[i];
        val += (j <= tau_left_[i]) ? delta_[i][j] * st.j2[i] : gamma_[i][j] * st.j1[i];
        return val;
    }

    /// Off-grid integral: product panels with an extra split at s = t.
    double integral_at(int i, double t, const std::vector<double>& phi) const {
        const size_t N = grid_->size();
        const GreenKernel& k = kernel_[i];
        double acc = 0;
        for (size_t j = 0; j + 1 < N; ++j) {
            double sa = grid_->position(j), sb = grid_->position(j + 1);
            if (sb <= sa) continue;
            if (t > sa && t < sb) {
                double phi_t = phi[j] + (phi[j + 1] - phi[j]) * (t - sa) / (sb - sa);
                acc += product_panel(k, t, sa, t, phi[j], phi_t);
                acc += product_panel(k, t, t, sb, phi_t, phi[j + 1]);
            } else {
                acc += product_panel(k, t, sa, sb, phi[j], phi[j + 1]);
            }
        }
        return acc;
    }
};

// --- Picard iteration ----------------------------------------------------------

struct SolveOutcome {
    PiecewiseGridFunction u, v;
    bool converged = false;
    int iterations = 0;
    double final_update = 0;
    std::vector<double> update_history;
    std::string diagnostic;
};

inline SolveOutcome solve_picard(const HammersteinOperator& op, double init_u, double init_v,
                                 double damping, double tol, int max_iter) {
    if (!(damping > 0 && damping <= 1)) throw SolverError("damping must lie in (0,1]");
    if (init_u < 0 || init_v < 0) throw SolverError("initial values must be nonnegative");
    const ProblemSpec& p = op.problem();
    SolveOutcome out;
    out.u = PiecewiseGridFunction::with_jump_at(op.grid(), p.eq[0].impulse.tau, init_u);
    out.v = PiecewiseGridFunction::with_jump_at(op.grid(), p.eq[1].impulse.tau, init_v);

    for (int it = 0; it < max_iter; ++it) {
        auto [tu, tv] = op.apply(out.u, out.v);
        double update = 0;
        for (size_t j = 0; j < tu.size(); ++j) {
            double nu = (1 - damping) * out.u.values[j] + damping * tu.values[j];
            double nv = (1 - damping) * out.v.values[j] + damping * tv.values[j];
            update = std::max(update, std::fabs(nu - out.u.values[j]));
            update = std::max(update, std::fabs(nv - out.v.values[j]));
            out.u.values[j] = nu;
            out.v.values[j] = nv;
        }
        out.iterations = it + 1;
        out.final_update = update;
        out.update_history.push_back(update);
        if (!std::isfinite(update) || update > 1e14) {
            out.diagnostic = "iteration diverged (non-finite or exploding update)";
            return out;
        }
        if (update < tol) {
            // snap to the operator image so the discrete boundary and jump
            // identities hold on the returned values
            auto [fu, fv] = op.apply(out.u, out.v);
            out.u = std::move(fu);
            out.v = std::move(fv);
            out.converged = true;
            return out;
        }
    }
    out.diagnostic = "no convergence within max_iter";
    return out;
}

// --- residuals -------------------------------------------------------------------

struct EquationResiduals {
    double integral_eq = 0;  // sup |w - T_i(u,v)| over entries
    double ode = 0;          // max interior |D^2 w + g f|
    double jump_value = 0;   // |Delta w - I(w(tau-))|
    double jump_deriv = 0;   // |Delta w' - N(w(tau-))|
    double bc_left = 0;      // |a1 w(0) - b1 w'(0) - H(alpha[.])|
    double bc_right = 0;     // |a2 w(1) + b2 w'(1) - L(beta[.])|
};

struct ResidualSummary {
    std::array<EquationResiduals, 2> eq;

    double worst_integral_eq() const { return std::max(eq[0].integral_eq, eq[1].integral_eq); }
    double worst_jump() const {
        return std::max(std::max(eq[0].jump_value, eq[1].jump_value),
                        std::max(eq[0].jump_deriv, eq[1].jump_deriv));
    }
    double worst_bc() const {
        return std::max(std::max(eq[0].bc_left, eq[1].bc_left),
                        std::max(eq[0].bc_right, eq[1].bc_right));
    }
};

namespace detail {

/// Second-order one-sided difference derivative of the natural interpolant.
/// direction = +1 differentiates to the right of x0, -1 to the left.
template <class F>
inline double one_sided_derivative(F&& f, double x0, int direction, double eps) {
    double s = direction;
    double f0 = f(x0, direction), f1 = f(x0 + s * eps, 0), f2 = f(x0 + s * 2 * eps, 0);
    return s * (-3 * f0 + 4 * f1 - f2) / (2 * eps);
}

}  // namespace detail

inline ResidualSummary residuals(const HammersteinOperator& op, const PiecewiseGridFunction& u,
                                 const PiecewiseGridFunction& v) {
    const ProblemSpec& p = op.problem();
    const Grid& g = *op.grid();
    auto st = op.prepare(u, v);
    ResidualSummary out;
    const PiecewiseGridFunction* w[2] = {&u, &v};

    for (int i = 0; i < 2; ++i) {
        const EquationSpec& e = p.eq[i];
        EquationResiduals& r = out.eq[i];
        const std::vector<double>& val = w[i]->values;

        // (a) integral-equation residual against the same discrete operator
        for (size_t j = 0; j < g.size(); ++j) {
            double tj = g.position(j);
            int side = g.is_right_copy(j) ? +1 : -1;
            r.integral_eq =
                std::max(r.integral_eq, std::fabs(val[j] - op.component_at(i, tj, side, st)));
        }

        // (b) interior ODE residual by second central differences
        Bindings env;
        for (size_t j = 1; j + 1 < g.size(); ++j) {
            double hm = g.position(j) - g.position(j - 1);
            double hp = g.position(j + 1) - g.position(j);
            if (hm <= 0 || hp <= 0) continue;  // skip nodes touching a jump
            double d2 = 2.0 *
                        ((val[j + 1] - val[j]) / hp - (val[j] - val[j - 1]) / hm) / (hm + hp);
            env["t"] = g.position(j);
            env["u"] = std::max(0.0, u.values[j]);
            env["v"] = std::max(0.0, v.values[j]);
            double gf = eval(e.g, Bindings{{"s", g.position(j)}, {"t", g.position(j)}}) *
                        eval(e.f, env);
            r.ode = std::max(r.ode, std::fabs(d2 + gf));
        }

        // (c) jump residuals; the derivative uses one-sided differences of
        // the natural interpolant with a small probe step
        const double tau = to_double(e.impulse.tau);
        double w_tau = std::max(0.0, w[i]->left_at_jump());
        double Iv = eval(e.impulse.I, Bindings{{"w", w_tau}});
        double Nv = eval(e.impulse.N, Bindings{{"w", w_tau}});
        r.jump_value = std::fabs(w[i]->jump() - Iv);

        double eps = std::min({1e-5, tau / 4, (1 - tau) / 4});
        auto interp = [&](double t, int side) { return op.component_at(i, t, side, st); };
        double d_right = detail::one_sided_derivative(interp, tau, +1, eps);
        double d_left = detail::one_sided_derivative(interp, tau, -1, eps);
        r.jump_deriv = std::fabs((d_right - d_left) - Nv);

        // (d) boundary residuals
        double eps_b = std::min(1e-5, 0.25 * std::min(to_double(p.eq[0].impulse.tau),
                                                      to_double(p.eq[1].impulse.tau)));
        double d0 = detail::one_sided_derivative(interp, 0.0, +1, eps_b);
        double d1 = detail::one_sided_derivative(interp, 1.0, -1, eps_b);
        const SLCoefficients& bc = e.bc;
        r.bc_left = std::fabs(to_double(bc.a1) * val.front() - to_double(bc.b1) * d0 - st.H[i]);
        r.bc_right = std::fabs(to_double(bc.a2) * val.back() + to_double(bc.b2) * d1 - st.L[i]);
    }
    return out;
}

// --- multi-start ------------------------------------------------------------------

struct SolutionPair {
    PiecewiseGridFunction u, v;
    int iterations = 0;
    double final_update = 0;
    double init_level = 0;
    ResidualSummary residual;
    ConeVerdict cone_u, cone_v;
};

struct MultiStartResult {
    std::vector<SolutionPair> solutions;
    std::vector<std::string> failures;  // per non-converged start
};

/// Runs Picard from constant initializers at each given level (certificate
/// radii plus geometric midpoints), deduplicates by sup-distance, and keeps
/// converged, cone-verified solutions. Picard can miss solutions separated
/// by index-zero radii; fewer solutions than certified is a valid outcome.
inline MultiStartResult multi_start(const HammersteinOperator& op, const ConeData& cone,
                                    std::vector<Rational> levels) {
    const ProblemSpec& p = op.problem();
    std::vector<double> inits;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (size_t k = 0; k < levels.size(); ++k) {
        inits.push_back(to_double(levels[k]));
        if (k + 1 < levels.size())
            inits.push_back(std::sqrt(to_double(levels[k]) * to_double(levels[k + 1])));
    }
    if (inits.empty()) inits.push_back(1.0);

    MultiStartResult out;
    for (double level : inits) {
        SolveOutcome sol = solve_picard(op, level, level, p.solver.damping, p.solver.tol,
                                        p.solver.max_iter);
        if (!sol.converged) {
            out.failures.push_back("start at level " + std::to_string(level) + ": " +
                                   sol.diagnostic);
            continue;
        }
        double scale = std::max({1.0, sol.u.sup_norm(), sol.v.sup_norm()});
        bool duplicate = false;
        for (const auto& known : out.solutions) {
            double dist = std::max(known.u.max_abs_diff(sol.u), known.v.max_abs_diff(sol.v));
            if (dist <= 1e-3 * scale) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;

        SolutionPair pair;
        pair.u = std::move(sol.u);
        pair.v = std::move(sol.v);
        pair.iterations = sol.iterations;
        pair.final_update = sol.final_update;
        pair.init_level = level;
        pair.residual = residuals(op, pair.u, pair.v);
        double tol_cone = 1e-8 * scale;
        pair.cone_u = cone_membership(pair.u, to_double(p.eq[0].window_a),
                                      to_double(p.eq[0].window_b), to_double(cone.c), tol_cone);
        pair.cone_v = cone_membership(pair.v, to_double(p.eq[1].window_a),
                                      to_double(p.eq[1].window_b), to_double(cone.c), tol_cone);
        if (pair.cone_u.pass && pair.cone_v.pass) out.solutions.push_back(std::move(pair));
        else
            out.failures.push_back("start at level " + std::to_string(level) +
                                   ": converged but failed cone membership");
    }
    return out;
}

}  // namespace ibvp
