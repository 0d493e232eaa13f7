#pragma once

// Multiplicity certificates: a rho-ladder realizing one of the patterns
// S1..S6, with every gap inequality and index condition verified. Ladder
// search scans a geometric grid in increasing lexicographic order and
// returns the first certificate found.

#include "conditions.hpp"

#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace ibvp {

enum class StepKind { IndexOne, IndexZero, IndexZeroOrStar };

inline std::vector<StepKind> pattern_steps(Pattern p) {
    using S = StepKind;
    switch (p) {
        case Pattern::S1: return {S::IndexZeroOrStar, S::IndexOne};
        case Pattern::S2: return {S::IndexOne, S::IndexZero};
        case Pattern::S3: return {S::IndexZeroOrStar, S::IndexOne, S::IndexZero};
        case Pattern::S4: return {S::IndexOne, S::IndexZero, S::IndexOne};
        case Pattern::S5: return {S::IndexZeroOrStar, S::IndexOne, S::IndexZero, S::IndexOne};
        case Pattern::S6: return {S::IndexOne, S::IndexZero, S::IndexOne, S::IndexZero};
    }
    return {};
}

/// Between consecutive radii the theorem requires either a plain rho_k <
/// rho_{k+1} or the stronger rho_k / c < rho_{k+1}, the latter whenever the
/// pair switches away from an index-zero radius.
struct GapCheck {
    int from = 0, to = 0;
    bool divide_by_c = false;
    Rational lhs, rhs;
    bool pass = false;
};

struct CertificateStep {
    Rational rho;
    StepKind kind;
    ConditionReport report;
    std::optional<int> satisfied_via;  // equation index for I0*, when it decided
};

struct Certificate {
    Pattern pattern;
    Rational c_used;
    std::vector<CertificateStep> steps;
    std::vector<GapCheck> gaps;
    int solutions_at_least = 0;
    bool pass = false;
    std::string failure;  // first violation when pass is false
};

namespace detail {

inline bool gap_divides_by_c(Pattern p, int from_step) {
    // S1, S3, S5 start with an index-zero radius: rho1/c < rho2.
    // S4, S5, S6 contain an interior index-zero radius followed by /c.
    std::vector<StepKind> steps = pattern_steps(p);
    return steps[from_step] != StepKind::IndexOne;
}

}  // namespace detail

/// Validates a ladder against a pattern. Stops at the first violation but
/// keeps everything checked so far in the certificate for diagnosis.
inline Certificate certify(const ProblemSpec& p, const BoundConstants& bc, const ConeData& cone,
                           Pattern pattern, const std::vector<Rational>& rho_list,
                           const Rational& c, int samples = 64) {
    Certificate cert;
    cert.pattern = pattern;
    cert.c_used = c;

    std::vector<StepKind> kinds = pattern_steps(pattern);
    if (rho_list.size() != kinds.size()) {
        cert.failure = "pattern " + pattern_name(pattern) + " needs " +
                       std::to_string(kinds.size()) + " radii, got " +
                       std::to_string(rho_list.size());
        return cert;
    }

    for (size_t k = 0; k + 1 < rho_list.size(); ++k) {
        GapCheck gc;
        gc.from = static_cast<int>(k);
        gc.to = static_cast<int>(k + 1);
        gc.divide_by_c = detail::gap_divides_by_c(pattern, static_cast<int>(k));
        gc.lhs = gc.divide_by_c ? rho_list[k] / c : rho_list[k];
        gc.rhs = rho_list[k + 1];
        gc.pass = gc.lhs < gc.rhs;
        cert.gaps.push_back(gc);
        if (!gc.pass) {
            std::ostringstream os;
            os << "gap violation: rho" << k + 1 << (gc.divide_by_c ? "/c" : "") << " = "
               << to_string(gc.lhs) << " must be < rho" << k + 2 << " = " << to_string(gc.rhs);
            cert.failure = os.str();
            return cert;
        }
    }

    for (size_t k = 0; k < rho_list.size(); ++k) {
        CertificateStep step;
        step.rho = rho_list[k];
        step.kind = kinds[k];
        switch (kinds[k]) {
            case StepKind::IndexOne:
                step.report = check_I1(p, bc, rho_list[k], samples);
                break;
            case StepKind::IndexZero:
                step.report = check_I0(p, bc, cone, rho_list[k], c, samples);
                break;
            case StepKind::IndexZeroOrStar: {
                // the theorem allows (I0) or (I0*); try the plain condition
                // first and fall back to the starred one
                step.report = check_I0(p, bc, cone, rho_list[k], c, samples);
                if (step.report.verdict != Verdict::Pass) {
                    ConditionReport star = check_I0_star(p, bc, cone, rho_list[k], c, samples);
                    if (star.verdict == Verdict::Pass) {
                        step.report = star;
                        for (int i = 0; i < 2; ++i)
                            if (star.eq[i].verdict == Verdict::Pass) {
                                step.satisfied_via = i;
                                break;
                            }
                    }
                }
                break;
            }
        }
        bool ok = step.report.verdict == Verdict::Pass;
        cert.steps.push_back(std::move(step));
        if (!ok) {
            std::ostringstream os;
            os << "condition " << condition_name(cert.steps.back().report.kind) << " at rho = "
               << to_string(rho_list[k]) << ": "
               << verdict_name(cert.steps.back().report.verdict);
            cert.failure = os.str();
            return cert;
        }
    }

    cert.solutions_at_least = pattern_solution_count(pattern);
    cert.pass = true;
    return cert;
}

/// Scans ladders drawn from the geometric grid lo * factor^k <= hi, in
/// increasing lexicographic order, and returns the first certificate that
/// passes. Deterministic for a fixed grid; absence is a result, not an error.
inline std::optional<Certificate> search_ladder(const ProblemSpec& p, const BoundConstants& bc,
                                                const ConeData& cone, Pattern pattern,
                                                const GridSearchSpec& grid, const Rational& c,
                                                int samples = 64) {
    std::vector<Rational> points;
    for (Rational x = grid.lo; x <= grid.hi; x *= grid.factor) points.push_back(x);
    const int need = pattern_rho_count(pattern);
    if (static_cast<int>(points.size()) < need) return std::nullopt;

    // memoize per-radius condition verdicts; they do not depend on position
    std::map<std::pair<int, Rational>, bool> memo;
    auto passes = [&](StepKind kind, const Rational& rho) {
        int tag = kind == StepKind::IndexOne ? 0 : kind == StepKind::IndexZero ? 1 : 2;
        auto key = std::make_pair(tag, rho);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool ok = false;
        switch (kind) {
            case StepKind::IndexOne:
                ok = check_I1(p, bc, rho, samples).verdict == Verdict::Pass;
                break;
            case StepKind::IndexZero:
                ok = check_I0(p, bc, cone, rho, c, samples).verdict == Verdict::Pass;
                break;
            case StepKind::IndexZeroOrStar:
                ok = check_I0(p, bc, cone, rho, c, samples).verdict == Verdict::Pass ||
                     check_I0_star(p, bc, cone, rho, c, samples).verdict == Verdict::Pass;
                break;
        }
        memo[key] = ok;
        return ok;
    };

    std::vector<StepKind> kinds = pattern_steps(pattern);
    std::vector<int> idx(static_cast<size_t>(need));
    std::function<std::optional<Certificate>(int, int)> scan =
        [&](int slot, int start) -> std::optional<Certificate> {
        if (slot == need) {
            std::vector<Rational> ladder;
            for (int k = 0; k < need; ++k) ladder.push_back(points[idx[k]]);
            Certificate cert = certify(p, bc, cone, pattern, ladder, c, samples);
            if (cert.pass) return cert;
            return std::nullopt;
        }
        for (int j = start; j < static_cast<int>(points.size()); ++j) {
            idx[slot] = j;
            // prune: the gap inequality with the previous radius must hold
            if (slot > 0) {
                const Rational& prev = points[idx[slot - 1]];
                Rational lhs = detail::gap_divides_by_c(pattern, slot - 1) ? prev / c : prev;
                if (!(lhs < points[j])) continue;
            }
            if (!passes(kinds[slot], points[j])) continue;
            auto found = scan(slot + 1, j + 1);
            if (found) return found;
        }
        return std::nullopt;
    };
    return scan(0, 0);
}

}  // namespace ibvp
