// Root systems in the cell picture: a root is a grid cell (i,j) of signed
// labels carrying the functional eps_i - eps_j (eps_0 = 0, eps_{-i} = -eps_i).
// The mirror cell (-j,-i) carries the same functional; the representative is
// the cell with i+j >= 0.  Block data for a composition of the index set and
// the nilpotent cell region sit here as well.
#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "sct/matfq.hpp"

namespace sct {

enum class Series { A, B, C, D };

inline char series_letter(Series s) {
    switch (s) {
        case Series::A: return 'A';
        case Series::B: return 'B';
        case Series::C: return 'C';
        default: return 'D';
    }
}

struct Root {
    int i = 0, j = 0;
    auto operator<=>(const Root&) const = default;
};

struct RootSystem {
    Series series = Series::A;
    unsigned n = 0;
    IndexMap index;
    std::vector<Root> roots;     // representative cells
    std::vector<Root> positive;  // upper-triangle representatives

    bool is_root(Root a) const { return root_set_.count(a) > 0; }
    bool is_positive(Root a) const {
        return index.pos_of(a.i) < index.pos_of(a.j);
    }
    // mirror across the anti-diagonal; the same functional, the other cell
    Root prime(Root a) const {
        if (series == Series::A) throw std::logic_error("prime: no mirror in series A");
        return Root{-a.j, -a.i};
    }
    Root negative(Root a) const { return Root{a.j, a.i}; }

    // composition rule for the contracted series-A bracket: strictly head-to-tail
    std::optional<Root> sum(Root a, Root b) const {
        if (series != Series::A) throw std::logic_error("sum: series A only");
        if (a.j != b.i || a.i == b.j) return std::nullopt;
        return Root{a.i, b.j};
    }

    // functional as an integer vector (coefficients of eps_1..eps_n)
    std::vector<int> weight(Root a) const {
        std::vector<int> w(n, 0);
        auto add = [&](int lbl, int s) {
            if (lbl > 0)
                w[lbl - 1] += s;
            else if (lbl < 0)
                w[-lbl - 1] -= s;
        };
        add(a.i, 1);
        add(a.j, -1);
        return w;
    }

    std::set<Root> root_set_;
};

inline RootSystem build_root_system(Series s, unsigned n) {
    RootSystem r;
    r.series = s;
    r.n = n;
    if (s == Series::A) {
        r.index = IndexMap::general_linear(n);
        for (int i = 1; i <= (int)n; ++i)
            for (int j = 1; j <= (int)n; ++j)
                if (i != j) r.roots.push_back(Root{i, j});
    } else {
        r.index = IndexMap::signed_labels(n, s == Series::B);
        for (int i : r.index.labels)
            for (int j : r.index.labels) {
                if (i == j) continue;
                if (i + j < 0) continue;  // mirror cell, not the representative
                if (i + j == 0 && s != Series::C) continue;  // no long cells off C
                r.roots.push_back(Root{i, j});
            }
    }
    for (Root a : r.roots) {
        r.root_set_.insert(a);
        if (r.is_positive(a)) r.positive.push_back(a);
    }
    return r;
}

// A composition of the display positions into consecutive blocks.  For the
// signed conventions the part sizes must be palindromic; an odd count yields
// a self-mirrored central block (id 0).
struct PartitionSpec {
    Series series = Series::A;
    unsigned n = 0;
    std::vector<unsigned> parts;      // display order, top to bottom
    std::vector<int> block_ids;       // per part: A: 1..l; signed: l..1[,0],-1..-l
    std::vector<unsigned> pos_block;  // display position -> part ordinal
    unsigned ell = 0;                 // positive block ids (A: part count)
    bool has_central = false;

    unsigned part_count() const { return (unsigned)parts.size(); }
    unsigned ordinal_of_block(int id) const {
        for (unsigned t = 0; t < block_ids.size(); ++t)
            if (block_ids[t] == id) return t;
        throw std::out_of_range("ordinal_of_block: no such block");
    }
    bool has_block(int id) const {
        return std::find(block_ids.begin(), block_ids.end(), id) != block_ids.end();
    }
    int block_of_pos(unsigned pos) const { return block_ids.at(pos_block.at(pos)); }
    std::vector<unsigned> positions_in_block(int id) const {
        unsigned ord = ordinal_of_block(id);
        std::vector<unsigned> out;
        for (unsigned pos = 0; pos < pos_block.size(); ++pos)
            if (pos_block[pos] == ord) out.push_back(pos);
        return out;
    }
    unsigned block_size(int id) const { return parts.at(ordinal_of_block(id)); }
};

inline PartitionSpec make_partition(Series s, unsigned n, std::vector<unsigned> parts) {
    PartitionSpec ps;
    ps.series = s;
    ps.n = n;
    unsigned M = (s == Series::A) ? n : (s == Series::B ? 2 * n + 1 : 2 * n);
    unsigned sum = 0;
    for (unsigned x : parts) {
        if (x == 0) throw std::invalid_argument("partition: zero part");
        sum += x;
    }
    if (sum != M) throw std::invalid_argument("partition: sizes must sum to the matrix size");
    if (s != Series::A) {
        std::vector<unsigned> rev(parts.rbegin(), parts.rend());
        if (rev != parts) throw std::invalid_argument("partition: sizes must be palindromic");
    }
    ps.parts = parts;
    unsigned r = (unsigned)parts.size();
    if (s == Series::A) {
        ps.ell = r;
        for (unsigned t = 0; t < r; ++t) ps.block_ids.push_back((int)t + 1);
    } else {
        if (s == Series::B && r % 2 == 0)
            throw std::invalid_argument("partition: even part count cannot cover the zero label");
        ps.has_central = (r % 2 == 1);
        ps.ell = ps.has_central ? (r - 1) / 2 : r / 2;
        for (int k = (int)ps.ell; k >= 1; --k) ps.block_ids.push_back(k);
        if (ps.has_central) ps.block_ids.push_back(0);
        for (int k = -1; k >= -(int)ps.ell; --k) ps.block_ids.push_back(k);
    }
    for (unsigned t = 0; t < r; ++t)
        for (unsigned c = 0; c < parts[t]; ++c) ps.pos_block.push_back(t);
    return ps;
}

inline PartitionSpec borel_partition(Series s, unsigned n) {
    unsigned M = (s == Series::A) ? n : (s == Series::B ? 2 * n + 1 : 2 * n);
    return make_partition(s, n, std::vector<unsigned>(M, 1));
}

// Cells strictly above the block diagonal (row block earlier than column
// block in display order).  These are the positive roots outside the Levi.
inline std::vector<Root> delta_ua(const RootSystem& rs, const PartitionSpec& ps) {
    std::vector<Root> out;
    for (Root a : rs.positive) {
        unsigned rb = ps.pos_block[rs.index.pos_of(a.i)];
        unsigned cb = ps.pos_block[rs.index.pos_of(a.j)];
        if (rb < cb) out.push_back(a);
    }
    return out;
}

// A rook-style subset of roots together with field labels on its members.
using RookPlacement = std::vector<Root>;  // kept sorted

struct BasicPair {
    RookPlacement D;
    std::vector<Fq> phi;  // aligned with D; identically 1 except symplectic long cells

    auto operator<=>(const BasicPair&) const = default;
};

inline RookPlacement sorted_placement(std::vector<Root> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace sct
