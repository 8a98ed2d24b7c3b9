#pragma once
// Column-sweep transfer machinery for conditional Gibbs probabilities in one
// and two dimensions. One engine serves two callers: a single fully-fixed
// boundary (transfer_conditional) and a scan over all assignments of a free
// part of the boundary, sharing column prefixes across assignments.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sftlab/interaction.hpp"

namespace sftlab {

struct TransferOptions {
    int h_max = 14;                       // maximum sites per column
    std::size_t state_budget = 1u << 22;  // maximum states per column
};

namespace detail {

/// All finite edge weights on an axis equal? If so masks suffice for ratios,
/// because the shared constant multiplies numerator and denominator alike.
inline std::optional<double> uniform_edge_weight(const Interaction& phi, int axis) {
    std::optional<double> c;
    for (int a = 0; a < phi.letters(); ++a)
        for (int b = 0; b < phi.letters(); ++b) {
            double w = phi.edge(axis, a, b);
            if (w == kInfiniteEnergy) continue;
            if (!c) c = w;
            else if (*c != w) return std::nullopt;
        }
    return c ? c : std::optional<double>(0.0);
}

struct TransferColumn {
    Coord x = 0;
    std::vector<Coord> ys;                   // sorted ascending
    std::vector<Site> cells;                 // aligned with ys
    std::vector<std::vector<int>> states;    // letters per y slot
    std::vector<double> weight;              // exp(vertex + internal + fixed edges)
};

inline Site column_site(int d, Coord x, Coord y) {
    Site p(static_cast<std::size_t>(d), 0);
    p[0] = x;
    if (d == 2) p[1] = y;
    return p;
}

inline std::vector<TransferColumn> column_split(const Shape& region, int d,
                                                const TransferOptions& opt) {
    std::vector<TransferColumn> cols;
    for (const Site& p : region) {
        Coord x = p[0], y = d == 2 ? p[1] : 0;
        if (cols.empty() || cols.back().x != x) {
            cols.push_back({});
            cols.back().x = x;
        }
        cols.back().ys.push_back(y);
        cols.back().cells.push_back(p);
    }
    for (auto& c : cols) {
        if (static_cast<int>(c.ys.size()) > opt.h_max)
            throw std::invalid_argument("column height exceeds the configured maximum");
        if (!std::is_sorted(c.ys.begin(), c.ys.end()))
            throw std::logic_error("column sites out of order");
    }
    return cols;
}

/// Depth-first enumeration of the column fills compatible with the fixed
/// boundary, with vertex, internal-vertical-edge, and fixed-edge weights.
inline void enumerate_column(const Interaction& phi, const NNSFT& x, const Pattern& fixed,
                             TransferColumn& col, std::size_t budget) {
    const int d = phi.dim();
    const int k = phi.letters();
    const std::size_t h = col.ys.size();
    std::vector<int> cur(h, 0);
    std::vector<double> logw(h + 1, 0.0);
    std::size_t i = 0;
    cur[0] = -1;
    while (true) {
        if (static_cast<int>(++cur[i]) >= k) {
            if (i == 0) break;
            --i;
            continue;
        }
        int a = cur[i];
        double w = phi.vertex(a);
        if (i > 0 && col.ys[i] == col.ys[i - 1] + 1) {
            double e = phi.edge(d - 1, cur[i - 1], a);
            if (e == kInfiniteEnergy) continue;
            w += e;
        }
        bool dead = false;
        for (int axis = 0; axis < d && !dead; ++axis) {
            for (int dir = -1; dir <= 1 && !dead; dir += 2) {
                Site q = col.cells[i];
                q[static_cast<std::size_t>(axis)] += dir;
                if (auto f = fixed.try_at(q)) {
                    double e = dir > 0 ? phi.edge(axis, a, *f) : phi.edge(axis, *f, a);
                    if (e == kInfiniteEnergy) dead = true;
                    else w += e;
                }
            }
        }
        if (dead) continue;
        logw[i + 1] = logw[i] + w;
        if (i + 1 == h) {
            if (col.states.size() >= budget)
                throw std::invalid_argument("column state budget exhausted");
            col.states.push_back(cur);
            col.weight.push_back(std::exp(-logw[h]));
        } else {
            cur[++i] = -1;
        }
    }
    (void)x;
}

struct ColumnBridge {
    bool adjacent = false;  // consecutive x: coupled by horizontal edges
    bool boolean = false;   // uniform edge weight, mask representation
    std::size_t words = 0;
    std::vector<std::uint64_t> rows;  // [to * words + w]
    std::vector<double> dense;        // [to * n_from + from]
};

inline ColumnBridge make_bridge(const Interaction& phi, const TransferColumn& a,
                                const TransferColumn& b) {
    ColumnBridge br;
    br.adjacent = b.x == a.x + 1;
    if (!br.adjacent) return br;
    std::vector<std::pair<std::size_t, std::size_t>> shared;  // (slot in a, slot in b)
    for (std::size_t ia = 0, ib = 0; ia < a.ys.size() && ib < b.ys.size();) {
        if (a.ys[ia] == b.ys[ib]) shared.emplace_back(ia++, ib++);
        else if (a.ys[ia] < b.ys[ib]) ++ia;
        else ++ib;
    }
    const std::size_t na = a.states.size(), nb = b.states.size();
    br.boolean = uniform_edge_weight(phi, 0).has_value();
    if (br.boolean) {
        br.words = (na + 63) / 64;
        br.rows.assign(nb * br.words, 0);
    } else {
        br.dense.assign(nb * na, 0.0);
    }
    for (std::size_t t = 0; t < nb; ++t) {
        for (std::size_t s = 0; s < na; ++s) {
            double w = 0.0;
            bool dead = false;
            for (auto [ia, ib] : shared) {
                double e = phi.edge(0, a.states[s][ia], b.states[t][ib]);
                if (e == kInfiniteEnergy) {
                    dead = true;
                    break;
                }
                w += e;
            }
            if (dead) continue;
            if (br.boolean) br.rows[t * br.words + s / 64] |= 1ull << (s % 64);
            else br.dense[t * na + s] = std::exp(-w);
        }
    }
    return br;
}

}  // namespace detail

/// Scans mu(target | fixed ∪ delta) for every assignment delta of the free
/// boundary sites, by a depth-first sweep over columns that branches on a free
/// site at the first column it touches. Emitted probabilities exclude
/// assignments with no compatible fill. Replaying one assignment follows the
/// same code path, so reported extrema reproduce bit-for-bit.
class ConditionalScanner {
  public:
    ConditionalScanner(const Interaction& phi, Shape region, Pattern fixed, Shape free_sites,
                       Pattern target, TransferOptions opt = {})
        : phi_(phi), region_(std::move(region)), fixed_(std::move(fixed)),
          free_(std::move(free_sites)), target_(std::move(target)), opt_(opt) {
        const int d = phi_.dim();
        if (d != 1 && d != 2) throw std::invalid_argument("transfer supports d in {1,2}");
        if (region_.empty()) throw std::invalid_argument("region must be nonempty");
        Shape boundary = n_boundary(region_, 1);
        if (!(fixed_.shape().union_with(free_) == boundary) ||
            !fixed_.shape().intersect(free_).empty())
            throw std::invalid_argument("fixed and free sites must partition the 1-boundary");
        for (const Site& p : target_.shape())
            if (!region_.contains(p))
                throw std::invalid_argument("target must sit inside the region");
        x_ = underlying_sft(phi_);
        cols_ = detail::column_split(region_, d, opt_);
        for (auto& c : cols_) detail::enumerate_column(phi_, x_, fixed_, c, opt_.state_budget);
        bridges_.resize(cols_.size());
        for (std::size_t j = 1; j < cols_.size(); ++j)
            bridges_[j] = detail::make_bridge(phi_, cols_[j - 1], cols_[j]);
        build_pin_masks();
        build_free_tables();
    }

    const Shape& free_sites() const { return free_; }

    /// Letters indexed by branch order; use delta_pattern to normalize.
    Pattern delta_pattern(const std::vector<int>& letters) const {
        std::vector<int> by_shape(free_.size());
        for (std::size_t i = 0; i < branch_order_.size(); ++i)
            by_shape[branch_order_[i]] = letters[i];
        return Pattern(free_, std::move(by_shape));
    }

    /// cb(letters_in_branch_order, probability); deterministic odometer order.
    void scan(const std::function<void(const std::vector<int>&, double)>& cb) {
        cb_ = &cb;
        replay_ = nullptr;
        letters_.assign(free_.size(), -1);
        descend(0, {}, {});
        cb_ = nullptr;
    }

    /// Recompute the probability of one scanned assignment, bit-for-bit.
    double replay(const Pattern& delta) {
        if (!(delta.shape() == free_)) throw std::invalid_argument("delta shape mismatch");
        std::vector<int> forced(free_.size());
        for (std::size_t i = 0; i < branch_order_.size(); ++i)
            forced[i] = delta.at(free_.at(branch_order_[i]));
        replay_ = &forced;
        cb_ = nullptr;
        letters_.assign(free_.size(), -1);
        replay_value_.reset();
        descend(0, {}, {});
        replay_ = nullptr;
        if (!replay_value_) throw std::domain_error("assignment admits no compatible fill");
        return *replay_value_;
    }

  private:
    struct CellAdj {
        std::size_t col;
        std::size_t slot;  // state index within the column
        int axis;
        int dir;  // +1: free site = cell + e_axis
    };
    struct FreeSite {
        std::size_t shape_index;
        std::uint64_t fixed_mask;               // letters compatible with fixed neighbours
        std::vector<CellAdj> adjs;              // ascending by column
        std::vector<std::pair<std::size_t, std::pair<int, int>>> earlier;  // (branch idx, axis, dir)
        std::size_t branch_col;
    };

    void build_pin_masks() {
        pin_.resize(cols_.size());
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            auto& c = cols_[j];
            const std::size_t words = (c.states.size() + 63) / 64;
            pin_[j].assign(words, ~0ull);
            bool any = false;
            for (std::size_t i = 0; i < c.cells.size(); ++i)
                if (target_.try_at(c.cells[i])) any = true;
            if (!any) continue;
            for (std::size_t s = 0; s < c.states.size(); ++s) {
                bool ok = true;
                for (std::size_t i = 0; i < c.cells.size() && ok; ++i) {
                    if (auto t = target_.try_at(c.cells[i]))
                        if (c.states[s][i] != *t) ok = false;
                }
                if (!ok) pin_[j][s / 64] &= ~(1ull << (s % 64));
            }
        }
    }

    void build_free_tables() {
        const int d = phi_.dim();
        const int k = phi_.letters();
        std::vector<FreeSite> fs;
        for (std::size_t fi = 0; fi < free_.size(); ++fi) {
            const Site& v = free_.at(fi);
            FreeSite f;
            f.shape_index = fi;
            f.fixed_mask = x_.full_mask();
            for (int axis = 0; axis < d; ++axis) {
                for (int dir = -1; dir <= 1; dir += 2) {
                    Site q = v;
                    q[static_cast<std::size_t>(axis)] += dir;
                    if (region_.contains(q)) {
                        std::size_t col = 0;
                        while (cols_[col].x != q[0]) ++col;
                        std::size_t slot = 0;
                        Coord y = d == 2 ? q[1] : 0;
                        while (cols_[col].ys[slot] != y) ++slot;
                        // dir is cell->free reversed: q + dir*e == v
                        f.adjs.push_back({col, slot, axis, -dir});
                    } else if (auto fx = fixed_.try_at(q)) {
                        std::uint64_t m = 0;
                        for (int c = 0; c < k; ++c) {
                            double e = dir > 0 ? phi_.edge(axis, c, *fx) : phi_.edge(axis, *fx, c);
                            if (e != kInfiniteEnergy) m |= 1ull << c;
                        }
                        f.fixed_mask &= m;
                    }
                }
            }
            if (f.adjs.empty())
                throw std::invalid_argument("free boundary site not adjacent to the region");
            std::sort(f.adjs.begin(), f.adjs.end(),
                      [](const CellAdj& a, const CellAdj& b) { return a.col < b.col; });
            f.branch_col = f.adjs.front().col;
            fs.push_back(std::move(f));
        }
        std::vector<std::size_t> order(fs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return fs[a].branch_col < fs[b].branch_col;
        });
        frees_.reserve(fs.size());
        branch_order_.reserve(fs.size());
        std::vector<std::size_t> branch_of(fs.size());
        for (std::size_t bi = 0; bi < order.size(); ++bi) {
            branch_of[order[bi]] = bi;
            branch_order_.push_back(fs[order[bi]].shape_index);
            frees_.push_back(std::move(fs[order[bi]]));
        }
        // Free-free lattice edges, checked when the later site gets a letter.
        for (std::size_t bi = 0; bi < frees_.size(); ++bi) {
            const Site& v = free_.at(frees_[bi].shape_index);
            for (std::size_t bj = 0; bj < bi; ++bj) {
                const Site& u = free_.at(frees_[bj].shape_index);
                if (l1_dist(u, v) != 1) continue;
                for (int axis = 0; axis < d; ++axis) {
                    if (u[static_cast<std::size_t>(axis)] == v[static_cast<std::size_t>(axis)] + 1)
                        frees_[bi].earlier.push_back({bj, {axis, +1}});  // v + e_axis == u
                    else if (v[static_cast<std::size_t>(axis)] ==
                             u[static_cast<std::size_t>(axis)] + 1)
                        frees_[bi].earlier.push_back({bj, {axis, -1}});
                }
            }
        }
        new_at_.assign(cols_.size(), {});
        late_at_.assign(cols_.size(), {});
        for (std::size_t bi = 0; bi < frees_.size(); ++bi) {
            new_at_[frees_[bi].branch_col].push_back(bi);
            for (std::size_t ai = 0; ai < frees_[bi].adjs.size(); ++ai)
                if (frees_[bi].adjs[ai].col != frees_[bi].branch_col)
                    late_at_[frees_[bi].adjs[ai].col].push_back({bi, ai});
        }
        // Per (free, letter, adjacency) state masks / weight vectors.
        cap_mask_.resize(frees_.size());
        cap_weight_.resize(frees_.size());
        for (std::size_t bi = 0; bi < frees_.size(); ++bi) {
            auto& masks = cap_mask_[bi];
            auto& weights = cap_weight_[bi];
            masks.resize(frees_[bi].adjs.size());
            weights.resize(frees_[bi].adjs.size());
            for (std::size_t ai = 0; ai < frees_[bi].adjs.size(); ++ai) {
                const CellAdj& a = frees_[bi].adjs[ai];
                const auto& col = cols_[a.col];
                bool boolean = detail::uniform_edge_weight(phi_, a.axis).has_value();
                const std::size_t n = col.states.size();
                const std::size_t words = (n + 63) / 64;
                if (boolean) masks[ai].assign(static_cast<std::size_t>(k) * words, 0);
                else weights[ai].assign(static_cast<std::size_t>(k) * n, 0.0);
                for (int c = 0; c < k; ++c) {
                    for (std::size_t s = 0; s < n; ++s) {
                        int cell_letter = col.states[s][a.slot];
                        double e = a.dir > 0 ? phi_.edge(a.axis, cell_letter, c)
                                             : phi_.edge(a.axis, c, cell_letter);
                        if (boolean) {
                            if (e != kInfiniteEnergy)
                                masks[ai][static_cast<std::size_t>(c) * words + s / 64] |=
                                    1ull << (s % 64);
                        } else if (e != kInfiniteEnergy) {
                            weights[ai][static_cast<std::size_t>(c) * n + s] = std::exp(-e);
                        }
                    }
                }
            }
        }
    }

    static void apply_words(std::vector<double>& v, const std::uint64_t* mask) {
        for (std::size_t s = 0; s < v.size(); ++s)
            if (!(mask[s / 64] >> (s % 64) & 1ull)) v[s] = 0.0;
    }

    void bridge_into(std::size_t j, const std::vector<double>& in, std::vector<double>& out) const {
        const auto& col = cols_[j];
        const auto& br = bridges_[j];
        out.assign(col.states.size(), 0.0);
        if (!br.adjacent) {
            double tot = 0.0;
            for (double v : in) tot += v;
            for (std::size_t t = 0; t < out.size(); ++t) out[t] = tot * col.weight[t];
            return;
        }
        const std::size_t na = in.size();
        for (std::size_t t = 0; t < out.size(); ++t) {
            double acc = 0.0;
            if (br.boolean) {
                const std::uint64_t* row = &br.rows[t * br.words];
                for (std::size_t w = 0; w < br.words; ++w) {
                    std::uint64_t bits = row[w];
                    while (bits) {
                        int b = std::countr_zero(bits);
                        bits &= bits - 1;
                        acc += in[w * 64 + static_cast<std::size_t>(b)];
                    }
                }
            } else {
                const double* row = &br.dense[t * na];
                for (std::size_t s = 0; s < na; ++s) acc += row[s] * in[s];
            }
            out[t] = acc * col.weight[t];
        }
    }

    void descend(std::size_t j, std::vector<double> vf, std::vector<double> vp) {
        if (j == cols_.size()) {
            double f = 0.0, g = 0.0;
            for (double v : vf) f += v;
            for (double v : vp) g += v;
            if (!(f > 0.0)) return;
            double p = g / f;
            if (p > 1.0) p = 1.0;
            if (replay_) replay_value_ = p;
            else (*cb_)(letters_, p);
            return;
        }
        std::vector<double> wf, wp;
        if (j == 0) {
            wf = cols_[0].weight;
        } else {
            bridge_into(j, vf, wf);
        }
        double tot = 0.0;
        for (double v : wf) tot += v;
        if (!(tot > 0.0)) return;
        if (tot < 1e-120 || tot > 1e120)
            for (double& v : wf) v /= tot;
        if (j == 0) {
            wp = wf;
        } else {
            bridge_into(j, vp, wp);
            if (tot < 1e-120 || tot > 1e120)
                for (double& v : wp) v /= tot;
        }
        apply_words(wp, pin_[j].data());
        for (const auto& [bi, ai] : late_at_[j]) apply_cap(bi, ai, letters_[bi], wf, wp);
        branch(j, 0, wf, wp);
    }

    void apply_cap(std::size_t bi, std::size_t ai, int c, std::vector<double>& wf,
                   std::vector<double>& wp) const {
        const std::size_t n = wf.size();
        if (!cap_mask_[bi][ai].empty()) {
            const std::size_t words = (n + 63) / 64;
            const std::uint64_t* m = &cap_mask_[bi][ai][static_cast<std::size_t>(c) * words];
            apply_words(wf, m);
            apply_words(wp, m);
        } else {
            const double* w = &cap_weight_[bi][ai][static_cast<std::size_t>(c) * n];
            for (std::size_t s = 0; s < n; ++s) {
                wf[s] *= w[s];
                wp[s] *= w[s];
            }
        }
    }

    void branch(std::size_t j, std::size_t k_idx, const std::vector<double>& wf,
                const std::vector<double>& wp) {
        if (k_idx == new_at_[j].size()) {
            descend(j + 1, wf, wp);
            return;
        }
        std::size_t bi = new_at_[j][k_idx];
        const FreeSite& f = frees_[bi];
        int from = 0, to = phi_.letters() - 1;
        if (replay_) from = to = (*replay_)[bi];
        for (int c = from; c <= to; ++c) {
            if (!(f.fixed_mask >> c & 1ull)) continue;
            bool ok = true;
            for (const auto& [bj, ax] : f.earlier) {
                int other = letters_[bj];
                double e = ax.second > 0 ? phi_.edge(ax.first, c, other)
                                         : phi_.edge(ax.first, other, c);
                if (e == kInfiniteEnergy) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            std::vector<double> nf = wf, np = wp;
            letters_[bi] = c;
            for (std::size_t ai = 0; ai < f.adjs.size(); ++ai)
                if (f.adjs[ai].col == j) apply_cap(bi, ai, c, nf, np);
            branch(j, k_idx + 1, nf, np);
        }
        letters_[bi] = -1;
    }

    Interaction phi_;
    Shape region_;
    Pattern fixed_;
    Shape free_;
    Pattern target_;
    TransferOptions opt_;
    NNSFT x_;
    std::vector<detail::TransferColumn> cols_;
    std::vector<detail::ColumnBridge> bridges_;
    std::vector<std::vector<std::uint64_t>> pin_;
    std::vector<FreeSite> frees_;
    std::vector<std::size_t> branch_order_;  // branch index -> shape index
    std::vector<std::vector<std::size_t>> new_at_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> late_at_;  // (branch, adj)
    std::vector<std::vector<std::vector<std::uint64_t>>> cap_mask_;
    std::vector<std::vector<std::vector<double>>> cap_weight_;
    std::vector<int> letters_;
    const std::function<void(const std::vector<int>&, double)>* cb_ = nullptr;
    const std::vector<int>* replay_ = nullptr;
    std::optional<double> replay_value_;
};

/// Conditional probability of `target` given a fully fixed boundary, by the
/// column sweep. Agrees with specification_prob; boundary-internal weights
/// cancel in the ratio and are skipped.
inline double transfer_conditional(const Interaction& phi, const Shape& region,
                                   const Pattern& boundary, const Pattern& target,
                                   TransferOptions opt = {}) {
    ConditionalScanner sc(phi, region, boundary, Shape(std::vector<Site>{}), target, opt);
    std::optional<double> out;
    sc.scan([&](const std::vector<int>&, double p) { out = p; });
    if (!out) throw std::domain_error("boundary is not admissible: zero partition function");
    return *out;
}

}  // namespace sftlab
