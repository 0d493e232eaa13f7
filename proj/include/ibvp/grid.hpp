#pragma once

// Jump-aware grids on [0,1]. A grid entry list is strictly increasing except
// at designated jump positions, which appear twice (left copy then right
// copy). Grid functions take one value per entry; the value *at* a jump
// position means the left copy, following the PC convention w(tau-) = w(tau).

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ibvp {

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Grid {
  public:
    /// `base` are node positions (deduplicated), `jumps` the positions to
    /// duplicate. Jump positions are inserted even if absent from base.
    static std::shared_ptr<const Grid> build(std::vector<Rational> base,
                                             std::vector<Rational> jumps) {
        auto g = std::make_shared<Grid>();
        std::sort(jumps.begin(), jumps.end());
        jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
        for (const auto& j : jumps) base.push_back(j);
        std::sort(base.begin(), base.end());
        base.erase(std::unique(base.begin(), base.end()), base.end());
        if (base.size() < 2) throw GridError("grid needs at least two distinct nodes");

        g->jumps_ = jumps;
        for (const auto& r : base) {
            bool dup = std::binary_search(jumps.begin(), jumps.end(), r);
            g->first_entry_[r] = g->rpos_.size();
            g->rpos_.push_back(r);
            g->pos_.push_back(to_double(r));
            if (dup) {
                g->rpos_.push_back(r);
                g->pos_.push_back(to_double(r));
            }
        }
        return g;
    }

    size_t size() const { return pos_.size(); }
    double position(size_t j) const { return pos_[j]; }
    const Rational& rposition(size_t j) const { return rpos_[j]; }
    const std::vector<double>& positions() const { return pos_; }
    const std::vector<Rational>& jump_positions() const { return jumps_; }

    bool is_left_copy(size_t j) const { return j + 1 < rpos_.size() && rpos_[j] == rpos_[j + 1]; }
    bool is_right_copy(size_t j) const { return j > 0 && rpos_[j - 1] == rpos_[j]; }

    /// Entry index of the left copy at an exact position; throws if absent.
    size_t index_of(const Rational& r) const {
        auto it = first_entry_.find(r);
        if (it == first_entry_.end()) throw GridError("position is not a grid node");
        return it->second;
    }

    bool has_node(const Rational& r) const { return first_entry_.count(r) > 0; }

    size_t distinct_count() const { return first_entry_.size(); }

    /// Largest panel width (used for step-size driven tolerances).
    double max_panel() const {
        double h = 0;
        for (size_t j = 0; j + 1 < pos_.size(); ++j) h = std::max(h, pos_[j + 1] - pos_[j]);
        return h;
    }

  private:
    std::vector<Rational> rpos_;
    std::vector<double> pos_;
    std::vector<Rational> jumps_;
    std::map<Rational, size_t> first_entry_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Grid function with (at most) one jump of its own. Values at other
/// duplicated entries are expected to agree across the copies.
struct PiecewiseGridFunction {
    GridPtr grid;
    std::vector<double> values;
    long jump_entry = -1;  // left-copy entry index of this function's own jump

    PiecewiseGridFunction() = default;
    PiecewiseGridFunction(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), values(grid->size(), fill) {}

    static PiecewiseGridFunction with_jump_at(GridPtr g, const Rational& tau, double fill = 0.0) {
        PiecewiseGridFunction f(std::move(g), fill);
        size_t j = f.grid->index_of(tau);
        if (!f.grid->is_left_copy(j)) throw GridError("grid lacks a double node at tau");
        f.jump_entry = static_cast<long>(j);
        return f;
    }

    size_t size() const { return values.size(); }

    double left_at_jump() const { return values[static_cast<size_t>(jump_entry)]; }
    double right_at_jump() const { return values[static_cast<size_t>(jump_entry) + 1]; }
    double jump() const { return right_at_jump() - left_at_jump(); }

    /// Piecewise-linear interpolation; an exact hit on a duplicated position
    /// returns the left copy (PC convention).
    double value_at(double t) const {
        const auto& p = grid->positions();
        if (t <= p.front()) return values.front();
        if (t >= p.back()) return values.back();
        size_t hi = static_cast<size_t>(
            std::lower_bound(p.begin(), p.end(), t) - p.begin());
        if (p[hi] == t) return values[hi];  // lower_bound lands on the left copy
        size_t lo = hi - 1;
        if (p[hi] == p[lo]) --lo;  // never interpolate across a zero-width panel
        double w = (t - p[lo]) / (p[hi] - p[lo]);
        return values[lo] + w * (values[hi] - values[lo]);
    }

    /// Exact-node value for functional application; throws if not a node.
    double value_at_node(const Rational& r) const { return values[grid->index_of(r)]; }

    double sup_norm() const {
        double m = 0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }

    double min_all() const {
        double m = values.front();
        for (double v : values) m = std::min(m, v);
        return m;
    }

    /// Minimum over entries with position in [a, b].
    double min_on(double a, double b) const {
        double m = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < values.size(); ++j) {
            double p = grid->position(j);
            if (p >= a - 1e-15 && p <= b + 1e-15) m = std::min(m, values[j]);
        }
        if (!std::isfinite(m)) throw GridError("window contains no grid nodes");
        return m;
    }

    double max_abs_diff(const PiecewiseGridFunction& other) const {
        double m = 0;
        for (size_t j = 0; j < values.size(); ++j)
            m = std::max(m, std::fabs(values[j] - other.values[j]));
        return m;
    }
};

/// Composite trapezoid over the grid entries; zero-width panels at jumps
/// contribute nothing, so discontinuous integrands are handled one-sidedly.
inline double trapezoid(const Grid& g, const std::vector<double>& values) {
    double total = 0;
    for (size_t j = 0; j + 1 < g.size(); ++j) {
        double h = g.position(j + 1) - g.position(j);
        if (h > 0) total += 0.5 * h * (values[j] + values[j + 1]);
    }
    return total;
}

}  // namespace ibvp
