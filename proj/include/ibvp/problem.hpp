#pragma once

// Declarative description of one coupled impulsive system, its JSON loader
// and the load-time validation. Validation collects every violation instead
// of stopping at the first, and each message names the standing assumption
// it breaks.

#include "impulse.hpp"
#include "kernel.hpp"
#include "measures.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ibvp {

using json = nlohmann::ordered_json;

struct Violation {
    std::string where;       // e.g. "equations[0].alpha"
    std::string assumption;  // e.g. "measure-continuity-at-tau"
    std::string message;
};

struct ValidationError : std::runtime_error {
    std::vector<Violation> violations;

    explicit ValidationError(std::vector<Violation> v)
        : std::runtime_error(render(v)), violations(std::move(v)) {}

    static std::string render(const std::vector<Violation>& v) {
        std::ostringstream os;
        os << "problem validation failed with " << v.size() << " violation(s):";
        for (const auto& x : v)
            os << "\n  [" << x.assumption << "] " << x.where << ": " << x.message;
        return os.str();
    }
};

enum class Monotone { None, Inc, Dec };

struct MonotoneHints {
    Monotone t = Monotone::None;
    Monotone u = Monotone::None;
    Monotone v = Monotone::None;

    bool complete() const {
        return t != Monotone::None && u != Monotone::None && v != Monotone::None;
    }
};

struct EquationSpec {
    SLCoefficients bc;
    Expression f;  // f(t, u, v)
    Expression g;  // weight g(s)
    MonotoneHints f_monotone;
    ImpulseSpec impulse;
    Expression H;  // H(w), with h1 w <= H(w) <= h2 w
    Rational h1, h2;
    Expression L;  // L(w), with L(w) <= l2 w
    Rational l2;
    StieltjesMeasure alpha;
    StieltjesMeasure beta;
    Rational window_a, window_b;
};

enum class Pattern { S1, S2, S3, S4, S5, S6 };

inline int pattern_rho_count(Pattern p) {
    switch (p) {
        case Pattern::S1:
        case Pattern::S2: return 2;
        case Pattern::S3:
        case Pattern::S4: return 3;
        default: return 4;
    }
}

inline int pattern_solution_count(Pattern p) {
    switch (p) {
        case Pattern::S1:
        case Pattern::S2: return 1;
        case Pattern::S3:
        case Pattern::S4: return 2;
        default: return 3;
    }
}

inline std::string pattern_name(Pattern p) {
    static const char* names[] = {"S1", "S2", "S3", "S4", "S5", "S6"};
    return names[static_cast<int>(p)];
}

struct GridSearchSpec {
    Rational lo, hi, factor;  // geometric grid lo * factor^k <= hi
};

struct AnalysisSpec {
    std::optional<Pattern> pattern;
    std::vector<Rational> rho;
    std::optional<GridSearchSpec> search;
    std::optional<Rational> override_c;
    std::map<std::string, std::string> reference_values;  // echoed verbatim in reports
};

struct SolverSettings {
    int n = 200;           // panels per smooth piece
    double damping = 0.5;  // Picard damping lambda
    double tol = 1e-10;
    int max_iter = 5000;
};

struct ProblemSpec {
    std::string name;
    std::array<EquationSpec, 2> eq;
    AnalysisSpec analysis;
    SolverSettings solver;

    /// tau of the component a beta functional integrates: beta_i acts on the
    /// other equation's unknown.
    const Rational& beta_target_tau(int i) const { return eq[1 - i].impulse.tau; }
};

// --- JSON loading ------------------------------------------------------------

namespace detail {

class Loader {
  public:
    ProblemSpec load(const json& root) {
        ProblemSpec p;
        p.name = root.value("name", std::string("unnamed"));
        const json* eqs = find(root, "", "equations");
        if (eqs) {
            if (!eqs->is_array() || eqs->size() != 2) {
                violation("equations", "schema", "exactly two equations are required");
            } else {
                for (int i = 0; i < 2; ++i) p.eq[i] = load_equation((*eqs)[i], i);
            }
        }
        if (root.contains("analysis")) p.analysis = load_analysis(root["analysis"]);
        if (root.contains("solver")) p.solver = load_solver(root["solver"]);
        validate(p);
        if (!violations_.empty()) throw ValidationError(std::move(violations_));
        return p;
    }

  private:
    std::vector<Violation> violations_;

    void violation(const std::string& where, const std::string& assumption,
                   const std::string& message) {
        violations_.push_back({where, assumption, message});
    }

    const json* find(const json& j, const std::string& ctx, const std::string& key) {
        if (!j.contains(key)) {
            violation(ctx.empty() ? key : ctx + "." + key, "schema", "missing required field");
            return nullptr;
        }
        return &j[key];
    }

    Rational rational_field(const json& j, const std::string& ctx, const std::string& key,
                            const Rational& fallback) {
        if (!j.contains(key)) {
            violation(ctx + "." + key, "schema", "missing required field");
            return fallback;
        }
        return rational_value(j[key], ctx + "." + key, fallback);
    }

    Rational rational_value(const json& v, const std::string& where, const Rational& fallback) {
        try {
            if (v.is_number_integer()) return Rational(BigInt(v.get<long long>()));
            if (v.is_string()) return parse_rational(v.get<std::string>());
        } catch (const std::exception& e) {
            violation(where, "schema", e.what());
            return fallback;
        }
        violation(where, "schema", "expected an integer or a \"p/q\" string");
        return fallback;
    }

    Expression expr_field(const json& j, const std::string& ctx, const std::string& key,
                          const std::set<std::string>& vars, const char* fallback) {
        std::string src = fallback;
        if (j.contains(key)) {
            if (j[key].is_string()) {
                src = j[key].get<std::string>();
            } else {
                violation(ctx + "." + key, "expression-syntax", "expected a string expression");
            }
        } else {
            violation(ctx + "." + key, "schema", "missing required field");
        }
        try {
            return parse(src, vars);
        } catch (const ExprError& e) {
            violation(ctx + "." + key, "expression-syntax", e.what());
            return parse(fallback, vars);
        }
    }

    Monotone monotone_value(const json& v, const std::string& where) {
        std::string s = v.is_string() ? v.get<std::string>() : std::string();
        if (s == "inc") return Monotone::Inc;
        if (s == "dec") return Monotone::Dec;
        if (s == "none" || s.empty()) return Monotone::None;
        violation(where, "schema", "monotone hint must be \"inc\", \"dec\" or \"none\"");
        return Monotone::None;
    }

    StieltjesMeasure load_measure(const json& j, const std::string& ctx) {
        StieltjesMeasure m;
        if (j.contains("atoms")) {
            for (size_t k = 0; k < j["atoms"].size(); ++k) {
                const auto& a = j["atoms"][k];
                std::string actx = ctx + ".atoms[" + std::to_string(k) + "]";
                Atom atom;
                atom.position = rational_field(a, actx, "at", Rational(0));
                atom.weight = rational_field(a, actx, "weight", Rational(1));
                m.atoms.push_back(atom);
            }
        }
        if (j.contains("density")) {
            try {
                m.density = parse(j["density"].get<std::string>(), {"s", "t"});
            } catch (const std::exception& e) {
                violation(ctx + ".density", "expression-syntax", e.what());
            }
        }
        return m;
    }

    EquationSpec load_equation(const json& j, int i) {
        std::string ctx = "equations[" + std::to_string(i) + "]";
        EquationSpec e;
        if (const json* bc = find(j, ctx, "bc")) {
            e.bc.a1 = rational_field(*bc, ctx + ".bc", "a1", Rational(1));
            e.bc.b1 = rational_field(*bc, ctx + ".bc", "b1", Rational(0));
            e.bc.a2 = rational_field(*bc, ctx + ".bc", "a2", Rational(1));
            e.bc.b2 = rational_field(*bc, ctx + ".bc", "b2", Rational(0));
        }
        e.f = expr_field(j, ctx, "f", {"t", "u", "v"}, "0");
        e.g = expr_field(j, ctx, "g", {"t", "s"}, "1");
        if (j.contains("f_monotone")) {
            const auto& m = j["f_monotone"];
            if (m.contains("t")) e.f_monotone.t = monotone_value(m["t"], ctx + ".f_monotone.t");
            if (m.contains("u")) e.f_monotone.u = monotone_value(m["u"], ctx + ".f_monotone.u");
            if (m.contains("v")) e.f_monotone.v = monotone_value(m["v"], ctx + ".f_monotone.v");
        }
        if (const json* imp = find(j, ctx, "impulse")) {
            std::string ictx = ctx + ".impulse";
            e.impulse.tau = rational_field(*imp, ictx, "tau", Rational(1, 2));
            e.impulse.I = expr_field(*imp, ictx, "I", {"w"}, "0");
            e.impulse.N = expr_field(*imp, ictx, "N", {"w"}, "0");
            e.impulse.p11 = rational_field(*imp, ictx, "p11", Rational(1));
            e.impulse.p12 = rational_field(*imp, ictx, "p12", Rational(1));
            e.impulse.p22 = rational_field(*imp, ictx, "p22", Rational(0));
        }
        if (const json* H = find(j, ctx, "H")) {
            e.H = expr_field(*H, ctx + ".H", "expr", {"w"}, "0");
            e.h1 = rational_field(*H, ctx + ".H", "h1", Rational(0));
            e.h2 = rational_field(*H, ctx + ".H", "h2", Rational(0));
        }
        if (const json* L = find(j, ctx, "L")) {
            e.L = expr_field(*L, ctx + ".L", "expr", {"w"}, "0");
            e.l2 = rational_field(*L, ctx + ".L", "l2", Rational(0));
        }
        if (j.contains("alpha")) e.alpha = load_measure(j["alpha"], ctx + ".alpha");
        if (j.contains("beta")) e.beta = load_measure(j["beta"], ctx + ".beta");
        if (const json* w = find(j, ctx, "window")) {
            e.window_a = rational_field(*w, ctx + ".window", "a", Rational(1, 2));
            e.window_b = rational_field(*w, ctx + ".window", "b", Rational(1));
        }
        return e;
    }

    AnalysisSpec load_analysis(const json& j) {
        AnalysisSpec a;
        if (j.contains("pattern")) {
            std::string s = j["pattern"].is_string() ? j["pattern"].get<std::string>() : "";
            static const std::map<std::string, Pattern> names = {
                {"S1", Pattern::S1}, {"S2", Pattern::S2}, {"S3", Pattern::S3},
                {"S4", Pattern::S4}, {"S5", Pattern::S5}, {"S6", Pattern::S6}};
            auto it = names.find(s);
            if (it == names.end())
                violation("analysis.pattern", "schema", "pattern must be one of S1..S6");
            else
                a.pattern = it->second;
        }
        if (j.contains("rho"))
            for (size_t k = 0; k < j["rho"].size(); ++k)
                a.rho.push_back(
                    rational_value(j["rho"][k], "analysis.rho[" + std::to_string(k) + "]",
                                   Rational(1)));
        if (j.contains("search_grid")) {
            GridSearchSpec s;
            const auto& g = j["search_grid"];
            s.lo = rational_field(g, "analysis.search_grid", "lo", Rational(1, 32));
            s.hi = rational_field(g, "analysis.search_grid", "hi", Rational(128));
            s.factor = rational_field(g, "analysis.search_grid", "factor", Rational(2));
            a.search = s;
        }
        if (j.contains("override_c"))
            a.override_c = rational_value(j["override_c"], "analysis.override_c", Rational(1));
        if (j.contains("reference_values")) {
            for (const auto& [k, v] : j["reference_values"].items()) {
                std::string text = v.is_string() ? v.get<std::string>()
                                                 : std::to_string(v.get<long long>());
                rational_value(v, "analysis.reference_values." + k, Rational(0));  // parse check
                a.reference_values[k] = text;
            }
        }
        return a;
    }

    SolverSettings load_solver(const json& j) {
        SolverSettings s;
        if (j.contains("n")) s.n = j["n"].get<int>();
        if (j.contains("lambda"))
            s.damping = j["lambda"].is_number() ? j["lambda"].get<double>()
                                                : to_double(rational_value(j["lambda"],
                                                                           "solver.lambda",
                                                                           Rational(1, 2)));
        if (j.contains("tol")) s.tol = j["tol"].get<double>();
        if (j.contains("max_iter")) s.max_iter = j["max_iter"].get<int>();
        return s;
    }

    void validate(const ProblemSpec& p) {
        for (int i = 0; i < 2; ++i) {
            const EquationSpec& e = p.eq[i];
            std::string ctx = "equations[" + std::to_string(i) + "]";

            try {
                e.bc.validate();
            } catch (const std::exception& ex) {
                std::string what = ex.what();
                violation(ctx + ".bc",
                          what.find("resonant") != std::string::npos ? "bc-nonresonance"
                                                                     : "bc-nondegeneracy",
                          what);
                continue;  // basis-dependent checks are meaningless now
            }
            try {
                e.impulse.validate();
            } catch (const std::exception& ex) {
                std::string what = ex.what();
                violation(ctx + ".impulse",
                          what.find("interior") != std::string::npos ? "impulse-time-interior"
                                                                     : "impulse-bound-signs",
                          what);
            }

            // window inside (tau, 1]
            if (!(e.impulse.tau < e.window_a && e.window_a < e.window_b &&
                  e.window_b <= Rational(1))) {
                violation(ctx + ".window", "window-in-(tau,1]",
                          "window [a,b] must satisfy tau < a < b <= 1 (a=" +
                              to_string(e.window_a) + ", b=" + to_string(e.window_b) +
                              ", tau=" + to_string(e.impulse.tau) + ")");
            } else {
                try {
                    interval_constants(make_basis(e.bc), e.window_a, e.window_b);
                } catch (const std::exception& ex) {
                    violation(ctx + ".window", "window-nondegenerate", ex.what());
                }
            }

            for (const char* which : {"alpha", "beta"}) {
                const StieltjesMeasure& m = (which[0] == 'a') ? e.alpha : e.beta;
                // beta_i integrates the other component, so its continuity
                // constraint is at the other equation's impulse time
                const Rational& tau =
                    (which[0] == 'a') ? e.impulse.tau : p.eq[1 - i].impulse.tau;
                try {
                    m.validate();
                } catch (const std::exception& ex) {
                    violation(ctx + "." + which, "measure-positivity", ex.what());
                }
                for (const auto& atom : m.atoms) {
                    if (atom.position == tau) {
                        violation(ctx + "." + which, "measure-continuity-at-tau",
                                  "measure must be continuous at the impulse time: atom at " +
                                      to_string(atom.position) +
                                      " coincides with tau of the function it integrates");
                    }
                }
            }

            if (e.h1 < Rational(0) || e.h2 < Rational(0) || e.l2 < Rational(0) || e.h1 > e.h2)
                violation(ctx, "growth-bound-order",
                          "growth bounds must satisfy 0 <= h1 <= h2 and l2 >= 0");
        }

        if (p.analysis.pattern && !p.analysis.rho.empty()) {
            int want = pattern_rho_count(*p.analysis.pattern);
            if (static_cast<int>(p.analysis.rho.size()) != want)
                violation("analysis.rho", "schema",
                          "pattern " + pattern_name(*p.analysis.pattern) + " needs " +
                              std::to_string(want) + " radii, got " +
                              std::to_string(p.analysis.rho.size()));
        }
        for (const auto& r : p.analysis.rho)
            if (r <= Rational(0))
                violation("analysis.rho", "schema", "radii must be positive");
        if (p.analysis.override_c &&
            (*p.analysis.override_c <= Rational(0) || *p.analysis.override_c > Rational(1)))
            violation("analysis.override_c", "schema", "override_c must lie in (0,1]");
        if (p.analysis.search) {
            const auto& s = *p.analysis.search;
            if (s.lo <= Rational(0) || s.factor <= Rational(1))
                violation("analysis.search_grid", "schema",
                          "need lo > 0 and factor > 1");
        }
        if (p.solver.n < 8) violation("solver.n", "schema", "need at least 8 panels per piece");
        if (!(p.solver.damping > 0 && p.solver.damping <= 1))
            violation("solver.lambda", "schema", "damping must lie in (0,1]");
        if (!(p.solver.tol > 0)) violation("solver.tol", "schema", "tolerance must be positive");
        if (p.solver.max_iter < 1) violation("solver.max_iter", "schema", "need max_iter >= 1");
    }
};

}  // namespace detail

inline ProblemSpec load_problem_json(const json& root) {
    detail::Loader loader;
    return loader.load(root);
}

inline ProblemSpec load_problem_string(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError({{"<input>", "json-syntax", e.what()}});
    }
    return load_problem_json(root);
}

inline ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({{path, "io", "cannot open problem file"}});
    std::stringstream ss;
    ss << in.rdbuf();
    return load_problem_string(ss.str());
}

}  // namespace ibvp
