#pragma once
// Locally-admissible extension solver: backtracking over per-site candidate
// masks with AC-3 arc propagation on lattice edges. Deterministic under the
// fixed (distance-to-fixed, canonical) variable order and letter-index values.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sftlab/sft.hpp"

namespace sftlab {

using BigInt = boost::multiprecision::cpp_int;

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct SolveOptions {
    std::uint64_t node_budget = 200'000'000;
    // Optional letter permutation for sampling; identity (letter index) when null.
    const std::vector<int>* value_order = nullptr;
};

/// One extension problem: fill `region` so that the fill together with `fixed`
/// is locally admissible. Instances are single-use per call but reusable.
class RegionProblem {
  public:
    RegionProblem(const NNSFT& x, const Shape& region, const Pattern& fixed)
        : x_(&x), region_(region), fixed_(fixed) {
        if (!region.empty() && region.dim() != x.dim())
            throw std::invalid_argument("region dimension mismatch");
        if (!fixed.empty() && fixed.shape().dim() != x.dim())
            throw std::invalid_argument("fixed pattern dimension mismatch");
        if (!region.intersect(fixed.shape()).empty())
            throw std::invalid_argument("region overlaps fixed pattern");
        for (int a : fixed.letters())
            if (a < 0 || a >= x.letters())
                throw std::invalid_argument("fixed letter outside alphabet");
        fixed_ok_ = is_locally_admissible(x, fixed);
        build_order({});
    }

    /// Rebuild the variable order with `first` sites up front (used for
    /// projection streaming). `first` must be a subset of the region.
    void set_projection(const Shape& first) {
        build_order(first);
        proj_count_ = 0;
        for (std::size_t i = 0; i < order_.size(); ++i)
            if (first.contains(region_.at(order_[i]))) ++proj_count_;
        if (proj_count_ != first.size())
            throw std::invalid_argument("projection sites outside region");
    }

    std::optional<Pattern> find_one(const SolveOptions& opt = {}) {
        std::optional<Pattern> out;
        run(opt, order_.size(), [&](const std::vector<int>& letters) {
            out = materialize(letters, order_.size());
            return false;  // stop at first
        });
        return out;
    }

    BigInt count(const SolveOptions& opt = {}) {
        BigInt n = 0;
        run(opt, order_.size(), [&](const std::vector<int>&) {
            ++n;
            return true;
        });
        return n;
    }

    /// Stream every solution; callback returning false stops the enumeration.
    /// Returns true when the space was exhausted (not stopped early).
    bool for_each(const std::function<bool(const Pattern&)>& cb, const SolveOptions& opt = {}) {
        return run(opt, order_.size(), [&](const std::vector<int>& letters) {
            return cb(materialize(letters, order_.size()));
        });
    }

    /// Stream the distinct completable assignments of the projection sites set
    /// via set_projection. Each emitted pattern extends to a full solution.
    bool for_each_projection(const std::function<bool(const Pattern&)>& cb,
                             const SolveOptions& opt = {}) {
        if (proj_count_ == std::numeric_limits<std::size_t>::max())
            throw std::logic_error("set_projection was not called");
        return run(opt, proj_count_, [&](const std::vector<int>& letters) {
            return cb(materialize(letters, proj_count_));
        });
    }

    const Shape& region() const { return region_; }

  private:
    struct Arc {
        std::uint32_t from, to;  // variable indices (positions in order_)
        std::uint16_t axis;
        std::uint8_t forward;  // 1: to sits at from + e_axis
    };

    void build_order(const Shape& first) {
        const std::size_t n = region_.size();
        order_.clear();
        order_.reserve(n);
        std::vector<Coord> key(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            order_.push_back(i);
            if (!fixed_.empty()) {
                Coord best = std::numeric_limits<Coord>::max();
                for (const Site& q : fixed_.shape())
                    best = std::min(best, l1_dist(region_.at(i), q));
                key[i] = best;
            }
        }
        auto rank = [&](std::size_t i) {
            return std::pair<int, Coord>(first.empty() || first.contains(region_.at(i)) ? 0 : 1,
                                         key[i]);
        };
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (first.contains(region_.at(a)) != first.contains(region_.at(b)))
                return first.contains(region_.at(a));
            return rank(a) < rank(b);
        });
        pos_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) pos_[order_[i]] = i;
        build_structure();
    }

    void build_structure() {
        const std::size_t n = region_.size();
        const int d = x_->dim();
        base_dom_.assign(n, x_->full_mask());
        adj_.assign(n, {});
        for (std::size_t v = 0; v < n; ++v) {
            const Site& p = region_.at(order_[v]);
            for (int axis = 0; axis < d; ++axis) {
                for (int dir = -1; dir <= 1; dir += 2) {
                    Site q = p;
                    q[static_cast<std::size_t>(axis)] += dir;
                    if (auto j = region_.index_of(q)) {
                        std::uint32_t u = static_cast<std::uint32_t>(pos_[*j]);
                        adj_[v].push_back(Arc{static_cast<std::uint32_t>(v), u,
                                              static_cast<std::uint16_t>(axis),
                                              static_cast<std::uint8_t>(dir > 0)});
                    } else if (auto b = fixed_.try_at(q)) {
                        base_dom_[v] &= (dir > 0) ? x_->prev_mask(axis, *b) : x_->next_mask(axis, *b);
                    }
                }
            }
        }
    }

    Pattern materialize(const std::vector<int>& letters, std::size_t upto) const {
        std::vector<Site> sites;
        std::vector<int> vals;
        sites.reserve(upto);
        for (std::size_t v = 0; v < upto; ++v) {
            sites.push_back(region_.at(order_[v]));
            vals.push_back(letters[v]);
        }
        Shape s(std::move(sites));
        std::vector<int> ordered(s.size());
        for (std::size_t v = 0; v < upto; ++v)
            ordered[*s.index_of(region_.at(order_[v]))] = letters[v];
        return Pattern(std::move(s), std::move(ordered));
    }

    /// Union of supported neighbour letters over the live candidates of `from`.
    std::uint64_t support(std::uint64_t dom, const Arc& a) const {
        std::uint64_t s = 0;
        while (dom) {
            int l = std::countr_zero(dom);
            dom &= dom - 1;
            s |= a.forward ? x_->next_mask(a.axis, l) : x_->prev_mask(a.axis, l);
        }
        return s;
    }

    // Core DFS. `emit_depth` is where assignments are reported (full depth for
    // normal solving, projection prefix for streaming). After a report at a
    // prefix depth, the subtree below it is solved once (existence) per report.
    bool run(const SolveOptions& opt, std::size_t emit_depth,
             const std::function<bool(const std::vector<int>&)>& emit) {
        if (!fixed_ok_) return true;  // no solutions, trivially exhausted
        const std::size_t n = region_.size();
        std::vector<int> value_of(x_->letters());
        for (int i = 0; i < x_->letters(); ++i) value_of[static_cast<std::size_t>(i)] = i;
        if (opt.value_order) {
            if (opt.value_order->size() != static_cast<std::size_t>(x_->letters()))
                throw std::invalid_argument("value order size mismatch");
            value_of = *opt.value_order;
        }
        if (n == 0) return emit({});

        dom_ = base_dom_;
        trail_.clear();
        nodes_ = 0;
        budget_ = opt.node_budget;
        for (std::size_t v = 0; v < n; ++v)
            if (!dom_[v]) return true;
        // Initial propagation of the fixed-neighbour prunings.
        for (std::size_t v = 0; v < n; ++v)
            if (!propagate_from(v)) return true;

        std::vector<int> letters(n, -1);
        std::vector<std::uint64_t> tried(n, 0);
        struct Frame {
            std::size_t trail_mark;
            std::uint64_t saved_dom;
        };
        std::vector<Frame> frames(n);
        std::size_t depth = 0;

        auto descend_or_emit = [&]() -> int {
            // returns +1 keep going deeper, 0 emitted and should backtrack, -1 stop all
            if (depth == emit_depth) {
                bool ok = true;
                if (emit_depth < n) ok = exists_completion(emit_depth, letters, value_of);
                if (ok && !emit(letters)) return -1;
                return 0;
            }
            return +1;
        };

        if (int r = descend_or_emit(); r == -1)
            return false;
        else if (r == 0)
            return true;

        while (true) {
            // Pick next untried letter for var `depth`.
            std::uint64_t avail = dom_[depth] & ~tried[depth];
            int chosen = -1;
            for (int vi = 0; vi < x_->letters(); ++vi) {
                int l = value_of[static_cast<std::size_t>(vi)];
                if (avail >> l & 1u) {
                    chosen = l;
                    break;
                }
            }
            if (chosen < 0) {
                // Exhausted this variable; backtrack.
                tried[depth] = 0;
                if (depth == 0) break;
                --depth;
                undo(frames[depth].trail_mark);
                dom_[depth] = frames[depth].saved_dom;
                continue;
            }
            if (++nodes_ > budget_) throw BudgetExceeded("solver node budget exhausted");
            tried[depth] |= 1ull << chosen;
            frames[depth].trail_mark = trail_.size();
            frames[depth].saved_dom = dom_[depth];
            dom_[depth] = 1ull << chosen;
            letters[depth] = chosen;
            if (propagate_from(depth)) {
                ++depth;
                int r = descend_or_emit();
                if (r == -1) return false;
                if (r == 0) {
                    --depth;
                    undo(frames[depth].trail_mark);
                    dom_[depth] = frames[depth].saved_dom;
                }
            } else {
                undo(frames[depth].trail_mark);
                dom_[depth] = frames[depth].saved_dom;
            }
        }
        return true;
    }

    /// Existence check for the suffix vars >= from, preserving outer state.
    bool exists_completion(std::size_t from, std::vector<int>& letters,
                           const std::vector<int>& value_of) {
        const std::size_t n = region_.size();
        std::size_t mark0 = trail_.size();
        std::vector<std::uint64_t> tried(n - from, 0);
        struct Frame {
            std::size_t trail_mark;
            std::uint64_t saved_dom;
        };
        std::vector<Frame> frames(n - from);
        std::size_t depth = from;
        bool found = false;
        while (true) {
            if (depth == n) {
                found = true;
                break;
            }
            std::uint64_t avail = dom_[depth] & ~tried[depth - from];
            int chosen = -1;
            for (int vi = 0; vi < x_->letters(); ++vi) {
                int l = value_of[static_cast<std::size_t>(vi)];
                if (avail >> l & 1u) {
                    chosen = l;
                    break;
                }
            }
            if (chosen < 0) {
                tried[depth - from] = 0;
                if (depth == from) break;
                --depth;
                undo(frames[depth - from].trail_mark);
                dom_[depth] = frames[depth - from].saved_dom;
                continue;
            }
            if (++nodes_ > budget_) {
                undo(mark0);
                throw BudgetExceeded("solver node budget exhausted");
            }
            tried[depth - from] |= 1ull << chosen;
            frames[depth - from].trail_mark = trail_.size();
            frames[depth - from].saved_dom = dom_[depth];
            dom_[depth] = 1ull << chosen;
            letters[depth] = chosen;
            if (propagate_from(depth)) {
                ++depth;
            } else {
                undo(frames[depth - from].trail_mark);
                dom_[depth] = frames[depth - from].saved_dom;
            }
        }
        undo(mark0);
        return found;
    }

    bool propagate_from(std::size_t v) {
        queue_.clear();
        queue_.push_back(static_cast<std::uint32_t>(v));
        std::size_t head = 0;
        while (head < queue_.size()) {
            std::uint32_t u = queue_[head++];
            for (const Arc& a : adj_[u]) {
                std::uint64_t sup = support(dom_[u], a);
                std::uint64_t nd = dom_[a.to] & sup;
                if (nd != dom_[a.to]) {
                    trail_.emplace_back(a.to, dom_[a.to]);
                    dom_[a.to] = nd;
                    if (!nd) return false;
                    queue_.push_back(a.to);
                }
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [v, old] = trail_.back();
            trail_.pop_back();
            dom_[v] = old;
        }
    }

    const NNSFT* x_;
    Shape region_;
    Pattern fixed_;
    bool fixed_ok_ = true;
    std::vector<std::size_t> order_;  // order_[depth] = region site index
    std::vector<std::size_t> pos_;    // inverse of order_
    std::vector<std::vector<Arc>> adj_;
    std::vector<std::uint64_t> base_dom_;
    std::vector<std::uint64_t> dom_;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> trail_;
    std::vector<std::uint32_t> queue_;
    std::size_t proj_count_ = std::numeric_limits<std::size_t>::max();
    std::uint64_t nodes_ = 0, budget_ = 0;
};

/// Convenience wrapper matching the find-one / count / exhaust interface.
inline std::optional<Pattern> extend_locally_admissible(const NNSFT& x, const Pattern& fixed,
                                                        const Shape& region,
                                                        const SolveOptions& opt = {}) {
    RegionProblem pr(x, region, fixed);
    return pr.find_one(opt);
}

inline BigInt count_extensions(const NNSFT& x, const Pattern& fixed, const Shape& region,
                               const SolveOptions& opt = {}) {
    RegionProblem pr(x, region, fixed);
    return pr.count(opt);
}

}  // namespace sftlab
