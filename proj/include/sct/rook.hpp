#pragma once
// Rook placements on the cut region, their block rank data, the block Weyl
// actions, and canonical representatives within each Weyl orbit.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sct/roots.hpp"
#include "sct/scalars.hpp"

namespace sct {

using Cell = std::pair<unsigned, unsigned>;  // display positions (row, col)

// Every matrix cell a placed root occupies.  Signed conventions contribute the
// mirrored cell as well; a self-mirrored cell appears once.
inline std::vector<Cell> placement_cells(const RootSystem& rs, const RookPlacement& D) {
    std::vector<Cell> out;
    for (Root a : D) {
        unsigned ri = rs.index.pos_of(a.i), rj = rs.index.pos_of(a.j);
        out.push_back({ri, rj});
        if (rs.series != Series::A) {
            Cell mir{rs.index.neg_pos(rj), rs.index.neg_pos(ri)};
            if (mir != Cell{ri, rj}) out.push_back(mir);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_rook_placement(const RootSystem& rs, const RookPlacement& D) {
    std::set<unsigned> rows, cols;
    for (Cell c : placement_cells(rs, D)) {
        if (!rows.insert(c.first).second) return false;
        if (!cols.insert(c.second).second) return false;
    }
    for (Root a : D)
        if (!rs.is_root(a)) return false;
    return true;
}

// All rook subsets of the cut region, both signs of root included.
inline std::vector<RookPlacement> enumerate_rook_placements(const RootSystem& rs,
                                                            const PartitionSpec& ps) {
    std::vector<Root> domain = delta_ua(rs, ps);
    {
        std::vector<Root> neg;
        for (Root a : domain) neg.push_back(rs.negative(a));
        domain.insert(domain.end(), neg.begin(), neg.end());
        std::sort(domain.begin(), domain.end());
    }
    std::vector<RookPlacement> out;
    std::vector<Root> cur;
    std::set<unsigned> rows, cols;
    auto fits = [&](Root a) {
        RookPlacement one{a};
        for (Cell c : placement_cells(rs, one))
            if (rows.count(c.first) || cols.count(c.second)) return false;
        return true;
    };
    auto mark = [&](Root a, bool on) {
        for (Cell c : placement_cells(rs, {a})) {
            if (on) {
                rows.insert(c.first);
                cols.insert(c.second);
            } else {
                rows.erase(c.first);
                cols.erase(c.second);
            }
        }
    };
    std::function<void(unsigned)> rec = [&](unsigned from) {
        out.push_back(sorted_placement(cur));
        for (unsigned t = from; t < domain.size(); ++t) {
            if (!fits(domain[t])) continue;
            mark(domain[t], true);
            cur.push_back(domain[t]);
            rec(t + 1);
            cur.pop_back();
            mark(domain[t], false);
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ---- rank data -------------------------------------------------------------

struct RankSignature {
    std::map<std::pair<int, int>, unsigned> r;  // nonzero block-pair cell counts
    std::map<int, int> d;                       // symplectic discriminant per positive block

    auto operator<=>(const RankSignature&) const = default;
};

inline RankSignature rank_signature(const RootSystem& rs, const PartitionSpec& ps,
                                    const RookPlacement& D, const std::vector<Fq>& phi = {},
                                    unsigned p = 0) {
    RankSignature sig;
    for (Cell c : placement_cells(rs, D)) {
        int bk = ps.block_of_pos(c.first), bm = ps.block_of_pos(c.second);
        sig.r[{bk, bm}] += 1;
    }
    if (rs.series == Series::C) {
        if (!phi.empty() && p == 0)
            throw std::invalid_argument("rank_signature: coefficient values need the modulus");
        for (int id : ps.block_ids)
            if (id != 0) sig.d[id] = 1;
        for (unsigned t = 0; t < D.size(); ++t) {
            Root a = D[t];
            if (a.j != -a.i) continue;  // discriminants live on the long cells
            int bk = ps.block_of_pos(rs.index.pos_of(a.i));
            if (bk == 0) continue;
            Fq v = phi.empty() ? 1 : phi[t];
            if (v != 1 && fpow(v, (p - 1) / 2, p) != 1) sig.d[bk] = -sig.d[bk];
        }
    }
    return sig;
}

// ---- block Weyl elements ---------------------------------------------------

struct WeylElement {
    std::vector<int> to;  // image label per display position

    auto operator<=>(const WeylElement&) const = default;
};

inline WeylElement weyl_identity(const IndexMap& ix) { return {ix.labels}; }

inline int weyl_apply(const IndexMap& ix, const WeylElement& w, int label) {
    return w.to.at(ix.pos_of(label));
}

inline WeylElement weyl_compose(const IndexMap& ix, const WeylElement& a, const WeylElement& b) {
    WeylElement r;
    for (int l : ix.labels) r.to.push_back(weyl_apply(ix, a, weyl_apply(ix, b, l)));
    return r;
}

inline WeylElement weyl_inverse(const IndexMap& ix, const WeylElement& w) {
    WeylElement r;
    r.to.resize(w.to.size());
    for (unsigned t = 0; t < w.to.size(); ++t) r.to[ix.pos_of(w.to[t])] = ix.labels[t];
    return r;
}

inline MatrixFq weyl_matrix(const IndexMap& ix, const WeylElement& w, unsigned p) {
    MatrixFq m((unsigned)ix.labels.size(), p);
    for (unsigned t = 0; t < w.to.size(); ++t) m.at(ix.pos_of(w.to[t]), t) = 1;
    return m;
}

namespace detail {

inline void cartesian_blocks(const std::vector<std::vector<std::vector<std::pair<int, int>>>>& per_block,
                             unsigned at, std::vector<std::pair<int, int>>& cur,
                             const IndexMap& ix, std::vector<WeylElement>& out) {
    if (at == per_block.size()) {
        WeylElement w = weyl_identity(ix);
        for (auto [from, toL] : cur) w.to[ix.pos_of(from)] = toL;
        out.push_back(w);
        return;
    }
    for (const auto& choice : per_block[at]) {
        unsigned keep = (unsigned)cur.size();
        cur.insert(cur.end(), choice.begin(), choice.end());
        cartesian_blocks(per_block, at + 1, cur, ix, out);
        cur.resize(keep);
    }
}

// all permutations of labels as (from, to) assignment lists
inline std::vector<std::vector<std::pair<int, int>>> label_perms(std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<int> img = labels;
    do {
        std::vector<std::pair<int, int>> a;
        for (unsigned t = 0; t < labels.size(); ++t) a.push_back({labels[t], img[t]});
        out.push_back(a);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

}  // namespace detail

// The block relabeling group: independent permutations inside each diagonal
// block, every block free.  For the signed series the negative blocks permute
// independently of their positive mirrors; the conjugation action recouples
// them on cells, so a mirror-closed cell set stays mirror-closed.
inline std::vector<WeylElement> enumerate_weyl(const RootSystem& rs, const PartitionSpec& ps) {
    std::vector<std::vector<std::vector<std::pair<int, int>>>> per_block;
    for (int id : ps.block_ids) {
        std::vector<int> labels;
        for (unsigned pos : ps.positions_in_block(id)) labels.push_back(rs.index.labels[pos]);
        per_block.push_back(detail::label_perms(labels));
    }
    std::vector<WeylElement> out;
    std::vector<std::pair<int, int>> cur;
    detail::cartesian_blocks(per_block, 0, cur, rs.index, out);
    std::sort(out.begin(), out.end());
    return out;
}

// Two-sided relabeling: matches left and right multiplication by the
// permutation matrices of w1 and w2.
inline RookPlacement weyl_act(const RootSystem& rs, const WeylElement& w1, const RookPlacement& D,
                              const WeylElement& w2) {
    WeylElement w2i = weyl_inverse(rs.index, w2);
    RookPlacement out;
    for (Root a : D) out.push_back({weyl_apply(rs.index, w1, a.i), weyl_apply(rs.index, w2i, a.j)});
    return sorted_placement(out);
}

// Mirrored relabeling: matches conjugation x -> w x w^dagger.  Coefficients
// travel with their roots.
inline BasicPair weyl_act_mirror(const RootSystem& rs, const WeylElement& w,
                                 const BasicPair& pair) {
    auto tilde = [&](int j) { return -weyl_apply(rs.index, w, -j); };
    std::vector<std::pair<Root, Fq>> moved;
    for (unsigned t = 0; t < pair.D.size(); ++t) {
        Root a = pair.D[t];
        Root img{weyl_apply(rs.index, w, a.i), tilde(a.j)};
        if (img.i + img.j < 0) img = {-img.j, -img.i};  // renormalize to the stored cell
        moved.push_back({img, pair.phi.empty() ? 1 : pair.phi[t]});
    }
    std::sort(moved.begin(), moved.end());
    BasicPair out;
    for (auto& [a, v] : moved) {
        out.D.push_back(a);
        out.phi.push_back(v);
    }
    return out;
}

// ---- canonical representatives ---------------------------------------------

namespace detail {

inline unsigned block_start(const PartitionSpec& ps, int id) {
    unsigned ord = ps.ordinal_of_block(id);
    unsigned s = 0;
    for (unsigned t = 0; t < ord; ++t) s += ps.parts[t];
    return s;
}

// Target cells per ordered block pair with positive id sum: rows packed from
// the top of the row block in display order of the column block, columns
// likewise.  Pairs with nonpositive sum get no target: their content is either
// the mirror image of a positive pair or subject to the coupled normal form
// below, where independent per-pair packing is unachievable.
struct PairTargets {
    std::map<std::pair<int, int>, std::vector<Cell>> cells;
};

inline PairTargets canonical_targets(const RootSystem& rs, const PartitionSpec& ps,
                                     const RankSignature& sig) {
    PairTargets tg;
    for (int k : ps.block_ids)
        for (int m : ps.block_ids) {
            if (k == m || k + m <= 0) continue;
            auto it = sig.r.find({k, m});
            if (it == sig.r.end() || it->second == 0) continue;
            unsigned r = it->second;
            unsigned prow = block_start(ps, k);
            for (int t : ps.block_ids) {
                if (t == m) break;
                if (t == k) continue;
                auto jt = sig.r.find({k, t});
                if (jt != sig.r.end()) prow += jt->second;
            }
            unsigned pcol = block_start(ps, m);
            for (int t : ps.block_ids) {
                if (t == k) break;
                if (t == m) continue;
                auto jt = sig.r.find({t, m});
                if (jt != sig.r.end()) pcol += jt->second;
            }
            std::vector<Cell> want;
            for (unsigned j = 0; j < r; ++j) want.push_back({prow + j, pcol + j});
            tg.cells[{k, m}] = want;
        }
    return tg;
}

// Orbit members are ranked region by region: first the cells in block pairs
// with positive id sum (display order, row major inside), then the cells in
// the self-mirrored zero-sum pairs, last the marked coefficient positions.
// Minimizing this key packs the positive regions top left and resolves the
// coupled zero-sum regions, which admit no independent packing rule.
using StagedKey = std::tuple<std::vector<std::array<long, 4>>, std::vector<std::array<long, 4>>,
                             std::vector<long>>;

inline StagedKey staged_key(const RootSystem& rs, const PartitionSpec& ps, const BasicPair& pair) {
    std::vector<std::array<long, 4>> upper, zero;
    for (Cell c : placement_cells(rs, pair.D)) {
        int k = ps.block_of_pos(c.first), m = ps.block_of_pos(c.second);
        std::array<long, 4> e{(long)ps.ordinal_of_block(k), (long)ps.ordinal_of_block(m),
                              (long)c.first, (long)c.second};
        if (k + m > 0)
            upper.push_back(e);
        else if (k + m == 0)
            zero.push_back(e);
    }
    std::sort(upper.begin(), upper.end());
    std::sort(zero.begin(), zero.end());
    long M = (long)rs.index.labels.size();
    std::vector<long> marks;
    for (unsigned t = 0; t < pair.D.size(); ++t)
        if (!pair.phi.empty() && pair.phi[t] != 1)
            marks.push_back((long)rs.index.pos_of(pair.D[t].i) * M +
                            (long)rs.index.pos_of(pair.D[t].j));
    std::sort(marks.begin(), marks.end());
    return {std::move(upper), std::move(zero), std::move(marks)};
}

}  // namespace detail

struct CanonicalBCD {
    BasicPair canon;
    WeylElement w;
};

// Unique representative of the mirrored-Weyl orbit: the member minimizing the
// staged region key, found by scanning the whole orbit.  The witness is the
// least group element reaching the minimum.
inline CanonicalBCD canonical_form_BCD(const RootSystem& rs, const PartitionSpec& ps,
                                       const BasicPair& pair,
                                       const std::vector<WeylElement>* weyl = nullptr) {
    if (rs.series == Series::A) throw std::logic_error("canonical_form_BCD: wrong series");
    std::vector<WeylElement> local;
    if (!weyl) {
        local = enumerate_weyl(rs, ps);
        weyl = &local;
    }
    CanonicalBCD best;
    detail::StagedKey best_key;
    bool have = false;
    for (const WeylElement& w : *weyl) {
        BasicPair img = weyl_act_mirror(rs, w, pair);
        detail::StagedKey key = detail::staged_key(rs, ps, img);
        if (!have || key < best_key || (key == best_key && w < best.w)) {
            best = {img, w};
            best_key = std::move(key);
            have = true;
        }
    }
    return best;
}

inline bool canonical_type(const RootSystem& rs, const PartitionSpec& ps, const BasicPair& pair,
                           const std::vector<WeylElement>* weyl = nullptr) {
    if (rs.series == Series::A) {
        RankSignature sig = rank_signature(rs, ps, pair.D);
        detail::PairTargets tg = detail::canonical_targets(rs, ps, sig);
        std::map<std::pair<int, int>, std::vector<Cell>> have;
        for (Cell c : placement_cells(rs, pair.D))
            have[{ps.block_of_pos(c.first), ps.block_of_pos(c.second)}].push_back(c);
        return have == tg.cells;
    }
    return pair == canonical_form_BCD(rs, ps, pair, weyl).canon;
}

inline bool canonical_type(const RootSystem& rs, const PartitionSpec& ps, const RookPlacement& D,
                           const std::vector<WeylElement>* weyl = nullptr) {
    return canonical_type(rs, ps, BasicPair{D, {}}, weyl);
}

struct CanonicalA {
    RookPlacement Dc;
    WeylElement w1, w2;
};

// Sorts each block's rook rows and columns to the packed target positions.
// Within a block pair the rooks keep their ascending row order.
inline CanonicalA canonical_form_A(const RootSystem& rs, const PartitionSpec& ps,
                                   const RookPlacement& D) {
    if (rs.series != Series::A) throw std::logic_error("canonical_form_A: wrong series");
    RankSignature sig = rank_signature(rs, ps, D);
    detail::PairTargets tg = detail::canonical_targets(rs, ps, sig);

    std::map<std::pair<int, int>, std::vector<Root>> by_pair;
    for (Root a : D) {
        int bk = ps.block_of_pos(rs.index.pos_of(a.i));
        int bm = ps.block_of_pos(rs.index.pos_of(a.j));
        by_pair[{bk, bm}].push_back(a);
    }
    CanonicalA res;
    res.w1 = weyl_identity(rs.index);
    res.w2 = weyl_identity(rs.index);
    std::map<int, int> rowmap, colmap_rev;  // actual -> target; target -> actual
    for (auto& [km, roots] : by_pair) {
        std::sort(roots.begin(), roots.end(),
                  [&](Root a, Root b) { return rs.index.pos_of(a.i) < rs.index.pos_of(b.i); });
        const std::vector<Cell>& want = tg.cells.at(km);
        for (unsigned j = 0; j < roots.size(); ++j) {
            int trow = rs.index.labels[want[j].first], tcol = rs.index.labels[want[j].second];
            rowmap[roots[j].i] = trow;
            colmap_rev[tcol] = roots[j].j;
            res.Dc.push_back({trow, tcol});
        }
    }
    res.Dc = sorted_placement(res.Dc);
    // complete both permutations blockwise, untouched labels kept ascending
    for (int id : ps.block_ids) {
        std::vector<int> rsrc, rdst, csrc, cdst;
        for (unsigned pos : ps.positions_in_block(id)) {
            int l = rs.index.labels[pos];
            if (!rowmap.count(l)) rsrc.push_back(l);
            if (!colmap_rev.count(l)) csrc.push_back(l);
        }
        std::set<int> rused, cused;
        for (auto& [src, dst] : rowmap)
            if (ps.block_of_pos(rs.index.pos_of(src)) == id) rused.insert(dst);
        for (auto& [tgt, act] : colmap_rev)
            if (ps.block_of_pos(rs.index.pos_of(tgt)) == id) cused.insert(act);
        for (unsigned pos : ps.positions_in_block(id)) {
            int l = rs.index.labels[pos];
            if (!rused.count(l)) rdst.push_back(l);
            if (!cused.count(l)) cdst.push_back(l);
        }
        for (unsigned t = 0; t < rsrc.size(); ++t) rowmap[rsrc[t]] = rdst[t];
        for (unsigned t = 0; t < csrc.size(); ++t) colmap_rev[csrc[t]] = cdst[t];
    }
    for (auto& [src, dst] : rowmap) res.w1.to[rs.index.pos_of(src)] = dst;
    for (auto& [tgt, act] : colmap_rev) res.w2.to[rs.index.pos_of(tgt)] = act;
    return res;
}

// All placements dressed with admissible coefficient labels: identically one,
// except that the symplectic convention may mark at most one long root per
// block pair with the smallest non-square.
inline std::vector<BasicPair> enumerate_basic_pairs(const RootSystem& rs, const PartitionSpec& ps,
                                                    unsigned p) {
    std::vector<BasicPair> out;
    Fq delta = rs.series == Series::C ? find_nonsquare(PrimeModulus(p)) : 1;
    for (const RookPlacement& D : enumerate_rook_placements(rs, ps)) {
        if (rs.series != Series::C) {
            out.push_back({D, std::vector<Fq>(D.size(), 1)});
            continue;
        }
        // mirrored block pairs may only be populated along the anti-diagonal
        bool admissible = true;
        std::map<int, std::vector<unsigned>> long_by_block;
        for (unsigned t = 0; t < D.size() && admissible; ++t) {
            Root a = D[t];
            int bk = ps.block_of_pos(rs.index.pos_of(a.i));
            int bm = ps.block_of_pos(rs.index.pos_of(a.j));
            if (a.j == -a.i)
                long_by_block[bk].push_back(t);
            else if (bm == -bk)
                admissible = false;
        }
        if (!admissible) continue;
        std::vector<std::vector<Fq>> phis{std::vector<Fq>(D.size(), 1)};
        for (auto& [bk, slots] : long_by_block) {
            std::vector<std::vector<Fq>> next;
            for (const auto& base : phis) {
                next.push_back(base);
                for (unsigned slot : slots) {
                    std::vector<Fq> v = base;
                    v[slot] = delta;
                    next.push_back(v);
                }
            }
            phis = std::move(next);
        }
        for (auto& v : phis) out.push_back({D, v});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace sct
