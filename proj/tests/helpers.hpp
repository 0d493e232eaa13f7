#pragma once

// Shared fixtures for the unit tests.

#include <ibvp/ibvp.hpp>

#include <random>
#include <string>

#ifndef IBVP_PROBLEMS_DIR
#define IBVP_PROBLEMS_DIR "problems"
#endif

namespace testutil {

inline ibvp::ProblemSpec demo_problem() {
    return ibvp::load_problem(std::string(IBVP_PROBLEMS_DIR) + "/demo.json");
}

inline std::string demo_json_text() {
    std::ifstream in(std::string(IBVP_PROBLEMS_DIR) + "/demo.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// decoupled linear problem: u'' + 1 = 0 with Dirichlet conditions, all
// boundary/impulse nonlinearities zero; u(t) = t(1-t)/2
inline const char* linear_problem_json() {
    return R"({
      "name": "linear-test",
      "equations": [
        {
          "bc": {"a1": 1, "b1": 0, "a2": 1, "b2": 0},
          "f": "1", "g": "1",
          "impulse": {"tau": "1/2", "I": "0", "N": "0", "p11": 1, "p12": 1, "p22": 1},
          "H": {"expr": "0", "h1": 0, "h2": 0},
          "L": {"expr": "0", "l2": 0},
          "alpha": {}, "beta": {},
          "window": {"a": "5/8", "b": "7/8"}
        },
        {
          "bc": {"a1": 1, "b1": 0, "a2": 1, "b2": 0},
          "f": "0", "g": "1",
          "impulse": {"tau": "1/2", "I": "0", "N": "0", "p11": 1, "p12": 1, "p22": 1},
          "H": {"expr": "0", "h1": 0, "h2": 0},
          "L": {"expr": "0", "l2": 0},
          "alpha": {}, "beta": {},
          "window": {"a": "5/8", "b": "7/8"}
        }
      ],
      "solver": {"n": 100, "lambda": 0.5, "tol": 1e-12, "max_iter": 500}
    })";
}

// everything identically zero; the unique fixed point is the zero pair
inline const char* zero_problem_json() {
    return R"({
      "name": "zero",
      "equations": [
        {
          "bc": {"a1": 1, "b1": 0, "a2": 1, "b2": 0},
          "f": "0", "g": "1",
          "impulse": {"tau": "1/2", "I": "0", "N": "0", "p11": 1, "p12": 1, "p22": 1},
          "H": {"expr": "0", "h1": 0, "h2": 0},
          "L": {"expr": "0", "l2": 0},
          "alpha": {}, "beta": {},
          "window": {"a": "5/8", "b": "7/8"}
        },
        {
          "bc": {"a1": 1, "b1": 0, "a2": 1, "b2": 0},
          "f": "0", "g": "1",
          "impulse": {"tau": "1/2", "I": "0", "N": "0", "p11": 1, "p12": 1, "p22": 1},
          "H": {"expr": "0", "h1": 0, "h2": 0},
          "L": {"expr": "0", "l2": 0},
          "alpha": {}, "beta": {},
          "window": {"a": "5/8", "b": "7/8"}
        }
      ],
      "solver": {"n": 64, "lambda": 0.5, "tol": 1e-12, "max_iter": 100}
    })";
}

inline ibvp::Rational random_rational(std::mt19937& rng, long long lo = -20, long long hi = 20,
                                      long long max_den = 20) {
    std::uniform_int_distribution<long long> num(lo, hi);
    std::uniform_int_distribution<long long> den(1, max_den);
    return ibvp::make_rational(num(rng), den(rng));
}

inline ibvp::Rational random_positive_rational(std::mt19937& rng, long long hi = 20,
                                               long long max_den = 20) {
    std::uniform_int_distribution<long long> num(1, hi);
    std::uniform_int_distribution<long long> den(1, max_den);
    return ibvp::make_rational(num(rng), den(rng));
}

/// Random coefficients with a1+b1 > 0, a2+b2 > 0 and positive determinant.
inline ibvp::SLCoefficients random_coefficients(std::mt19937& rng) {
    for (;;) {
        std::uniform_int_distribution<long long> c(0, 6);
        ibvp::SLCoefficients k{ibvp::make_rational(c(rng)), ibvp::make_rational(c(rng)),
                               ibvp::make_rational(c(rng)), ibvp::make_rational(c(rng))};
        if (k.a1 + k.b1 == ibvp::Rational(0) || k.a2 + k.b2 == ibvp::Rational(0)) continue;
        if (k.determinant() <= ibvp::Rational(0)) continue;
        return k;
    }
}

/// Nonnegative combination a*gamma + b*delta + kappa; always a cone member.
inline ibvp::PiecewiseGridFunction random_cone_member(std::mt19937& rng,
                                                      const ibvp::BoundaryBasis& basis,
                                                      ibvp::GridPtr grid,
                                                      const ibvp::Rational& tau,
                                                      double scale = 1.0) {
    std::uniform_real_distribution<double> coef(0.0, scale);
    double a = coef(rng), b = coef(rng), kappa = coef(rng);
    auto f = ibvp::PiecewiseGridFunction::with_jump_at(grid, tau);
    for (size_t j = 0; j < f.size(); ++j) {
        double t = grid->position(j);
        f.values[j] = a * basis.gamma(t) + b * basis.delta(t) + kappa;
    }
    return f;
}

}  // namespace testutil
