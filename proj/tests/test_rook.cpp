// Placement enumeration, rank signatures, Weyl actions, canonical forms.

#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "sct/contraction.hpp"
#include "sct/rook.hpp"

using namespace sct;

namespace {

// independent oracle: filter every subset of the domain by the row/col rule
std::set<RookPlacement> brute_placements(const RootSystem& rs, const PartitionSpec& ps) {
    std::vector<Root> domain = delta_ua(rs, ps);
    std::vector<Root> neg;
    for (Root a : domain) neg.push_back(rs.negative(a));
    domain.insert(domain.end(), neg.begin(), neg.end());
    REQUIRE(domain.size() <= 16);
    std::set<RookPlacement> out;
    for (unsigned long mask = 0; mask < (1ul << domain.size()); ++mask) {
        RookPlacement d;
        for (unsigned t = 0; t < domain.size(); ++t)
            if ((mask >> t) & 1) d.push_back(domain[t]);
        if (is_rook_placement(rs, d)) out.insert(sorted_placement(d));
    }
    return out;
}

struct Instance {
    RootSystem rs;
    PartitionSpec ps;
};

Instance make(Series s, unsigned n, std::vector<unsigned> parts) {
    return {build_root_system(s, n), make_partition(s, n, parts)};
}

}  // namespace

TEST_CASE("placement enumeration matches the subset filter") {
    for (auto& [rs, ps] : {make(Series::A, 2, {1, 1}), make(Series::A, 3, {1, 1, 1}),
                           make(Series::A, 3, {2, 1}), make(Series::A, 4, {2, 2}),
                           make(Series::C, 2, {1, 1, 1, 1}), make(Series::B, 2, {1, 1, 1, 1, 1}),
                           make(Series::D, 2, {2, 2}), make(Series::C, 2, {1, 2, 1}),
                           make(Series::D, 3, {2, 2, 2})}) {
        auto got = enumerate_rook_placements(rs, ps);
        std::set<RookPlacement> asset(got.begin(), got.end());
        REQUIRE(asset.size() == got.size());
        REQUIRE(asset == brute_placements(rs, ps));
        REQUIRE(asset.count(RookPlacement{}) == 1);
        for (const auto& d : got) {
            auto sig = rank_signature(rs, ps, d);
            for (auto& [km, r] : sig.r)
                REQUIRE(r <= std::min(ps.block_size(km.first), ps.block_size(km.second)));
        }
    }
}

TEST_CASE("frozen placement counts") {
    auto [rs2, ps2] = make(Series::A, 2, {1, 1});
    auto got = enumerate_rook_placements(rs2, ps2);
    REQUIRE(got.size() == 4);
    std::set<RookPlacement> want{{}, {{1, 2}}, {{2, 1}}, {{1, 2}, {2, 1}}};
    REQUIRE(std::set<RookPlacement>(got.begin(), got.end()) == want);

    auto [rs3, ps3] = make(Series::A, 3, {1, 1, 1});
    auto full = enumerate_rook_placements(rs3, ps3);
    REQUIRE(full.size() == 18);
    std::map<size_t, unsigned> by_size;
    for (auto& d : full) by_size[d.size()]++;
    REQUIRE(by_size[0] == 1);
    REQUIRE(by_size[1] == 6);
    REQUIRE(by_size[2] == 9);
    REQUIRE(by_size[3] == 2);

    auto [rs21, ps21] = make(Series::A, 3, {2, 1});
    REQUIRE(enumerate_rook_placements(rs21, ps21).size() == 9);
}

TEST_CASE("rank signatures") {
    auto [rs, ps] = make(Series::C, 2, {1, 1, 1, 1});
    RankSignature empty = rank_signature(rs, ps, {});
    REQUIRE(empty.r.empty());
    for (auto& [k, v] : empty.d) REQUIRE(v == 1);
    REQUIRE(empty.d.size() == 4);

    Fq delta = find_nonsquare(PrimeModulus(3));
    RankSignature dneg = rank_signature(rs, ps, {{1, -1}}, {delta}, 3);
    REQUIRE(dneg.d.at(1) == -1);
    REQUIRE(dneg.d.at(2) == 1);
    REQUIRE(dneg.d.at(-1) == 1);
    RankSignature dpos = rank_signature(rs, ps, {{1, -1}}, {1}, 3);
    REQUIRE(dpos.d.at(1) == 1);
    REQUIRE(dneg.r == dpos.r);
    REQUIRE(dneg != dpos);
}

TEST_CASE("realized block ranks match the combinatorial counts") {
    // two rooks across one block pair need distinct columns
    auto [rs, ps] = make(Series::A, 4, {2, 2});
    REQUIRE(!is_rook_placement(rs, {{1, 3}, {2, 3}}));
    RookPlacement d{{1, 3}, {2, 4}};
    REQUIRE(is_rook_placement(rs, d));
    RankSignature sig = rank_signature(rs, ps, d);
    REQUIRE(sig.r.at({1, 2}) == 2);

    ContractionContext cx = build_context(Series::A, 4, {2, 2}, 3);
    MatrixFq xd = cx.realize(cx.build_XDphi(d, {}));
    auto rows = ps.positions_in_block(1);
    auto cols = ps.positions_in_block(2);
    REQUIRE(submatrix_rank(xd, rows, cols) == 2);

    // signed case: every block pair, every placement, coefficients included
    ContractionContext c2 = build_context(Series::C, 2, {1, 1, 1, 1}, 3);
    for (const BasicPair& bp : enumerate_basic_pairs(c2.rs, c2.part, 3)) {
        RankSignature s = rank_signature(c2.rs, c2.part, bp.D, bp.phi, 3);
        MatrixFq x = c2.realize(c2.build_XDphi(bp.D, bp.phi));
        for (int k : c2.part.block_ids)
            for (int m : c2.part.block_ids) {
                unsigned want = s.r.count({k, m}) ? s.r.at({k, m}) : 0;
                REQUIRE(submatrix_rank(x, c2.part.positions_in_block(k),
                                       c2.part.positions_in_block(m)) == want);
            }
    }
}

TEST_CASE("weyl group enumeration") {
    auto check_group = [](const RootSystem& rs, const std::vector<WeylElement>& W) {
        std::set<WeylElement> setW(W.begin(), W.end());
        REQUIRE(setW.size() == W.size());
        REQUIRE(setW.count(weyl_identity(rs.index)) == 1);
        for (const auto& a : W) {
            REQUIRE(setW.count(weyl_inverse(rs.index, a)) == 1);
            for (const auto& b : W) REQUIRE(setW.count(weyl_compose(rs.index, a, b)) == 1);
        }
    };
    auto [ra, pa] = make(Series::A, 3, {2, 1});
    auto Wa = enumerate_weyl(ra, pa);
    REQUIRE(Wa.size() == 2);
    check_group(ra, Wa);

    auto [rb, pb] = make(Series::A, 4, {2, 2});
    REQUIRE(enumerate_weyl(rb, pb).size() == 4);

    auto [rc, pc] = make(Series::A, 3, {1, 1, 1});
    REQUIRE(enumerate_weyl(rc, pc).size() == 1);

    auto [rd, pd] = make(Series::C, 2, {2, 2});
    auto Wd = enumerate_weyl(rd, pd);
    REQUIRE(Wd.size() == 4);  // the two off-center blocks permute independently
    check_group(rd, Wd);

    auto [re, pe] = make(Series::B, 2, {1, 3, 1});
    auto We = enumerate_weyl(re, pe);
    REQUIRE(We.size() == 6);  // free central block, middle label not special
    check_group(re, We);

    auto [rf, pf] = make(Series::D, 3, {2, 2, 2});
    auto Wf = enumerate_weyl(rf, pf);
    REQUIRE(Wf.size() == 8);
    check_group(rf, Wf);
}

TEST_CASE("weyl actions") {
    std::mt19937 rng(53);
    auto [rs, ps] = make(Series::A, 4, {2, 2});
    auto W = enumerate_weyl(rs, ps);
    auto places = enumerate_rook_placements(rs, ps);
    WeylElement id = weyl_identity(rs.index);
    for (const auto& d : places) {
        REQUIRE(weyl_act(rs, id, d, id) == d);
        for (const auto& u : W)
            for (const auto& v : W) {
                RookPlacement img = weyl_act(rs, u, d, v);
                REQUIRE(is_rook_placement(rs, img));
                REQUIRE(rank_signature(rs, ps, img) == rank_signature(rs, ps, d));
            }
    }
    for (int t = 0; t < 200; ++t) {
        const auto& d = places[rng() % places.size()];
        const auto &u1 = W[rng() % W.size()], &u2 = W[rng() % W.size()];
        const auto &v1 = W[rng() % W.size()], &v2 = W[rng() % W.size()];
        // composing actions composes the permutations, opposite on the right
        REQUIRE(weyl_act(rs, u1, weyl_act(rs, u2, d, v2), v1) ==
                weyl_act(rs, weyl_compose(rs.index, u1, u2), d, weyl_compose(rs.index, v2, v1)));
    }

    auto [rc, pc] = make(Series::C, 2, {2, 2});
    auto Wc = enumerate_weyl(rc, pc);
    for (const BasicPair& bp : enumerate_basic_pairs(rc, pc, 3)) {
        REQUIRE(weyl_act_mirror(rc, weyl_identity(rc.index), bp) == bp);
        for (const auto& w : Wc) {
            BasicPair img = weyl_act_mirror(rc, w, bp);
            REQUIRE(is_rook_placement(rc, img.D));
            REQUIRE(rank_signature(rc, pc, img.D, img.phi, 3) ==
                    rank_signature(rc, pc, bp.D, bp.phi, 3));
            for (const auto& v : Wc)
                REQUIRE(weyl_act_mirror(rc, v, img) ==
                        weyl_act_mirror(rc, weyl_compose(rc.index, v, w), bp));
        }
    }
}

TEST_CASE("canonical form, general linear") {
    // singleton blocks leave nothing to move
    auto [rb, pb] = make(Series::A, 3, {1, 1, 1});
    for (const auto& d : enumerate_rook_placements(rb, pb)) {
        CanonicalA c = canonical_form_A(rb, pb, d);
        REQUIRE(c.Dc == d);
        REQUIRE(c.w1 == weyl_identity(rb.index));
        REQUIRE(c.w2 == weyl_identity(rb.index));
        REQUIRE(canonical_type(rb, pb, d));
    }

    auto [rs, ps] = make(Series::A, 4, {2, 2});
    CanonicalA moved = canonical_form_A(rs, ps, {{2, 3}});
    REQUIRE(moved.Dc == RookPlacement{{1, 3}});
    REQUIRE(weyl_act(rs, moved.w1, {{2, 3}}, moved.w2) == moved.Dc);

    std::mt19937 rng(59);
    for (auto& [rr, pp] : {make(Series::A, 3, {2, 1}), make(Series::A, 4, {2, 2}),
                           make(Series::A, 4, {2, 1, 1}), make(Series::A, 4, {3, 1})}) {
        auto W = enumerate_weyl(rr, pp);
        auto places = enumerate_rook_placements(rr, pp);
        std::map<RookPlacement, RookPlacement> canon_of;
        for (const auto& d : places) {
            CanonicalA c = canonical_form_A(rr, pp, d);
            REQUIRE(weyl_act(rr, c.w1, d, c.w2) == c.Dc);  // witnesses verify
            REQUIRE(rank_signature(rr, pp, c.Dc) == rank_signature(rr, pp, d));
            REQUIRE(canonical_type(rr, pp, c.Dc));
            REQUIRE(canonical_type(rr, pp, d) == (c.Dc == d));
            // idempotent with identity witnesses
            CanonicalA again = canonical_form_A(rr, pp, c.Dc);
            REQUIRE(again.Dc == c.Dc);
            REQUIRE(again.w1 == weyl_identity(rr.index));
            REQUIRE(again.w2 == weyl_identity(rr.index));
            canon_of[d] = c.Dc;
        }
        // constant on orbits, and separating between them; signature decides
        for (const auto& d1 : places)
            for (const auto& d2 : places) {
                bool same_orbit = false;
                for (const auto& u : W)
                    for (const auto& v : W)
                        if (weyl_act(rr, u, d1, v) == d2) same_orbit = true;
                REQUIRE((canon_of[d1] == canon_of[d2]) == same_orbit);
                REQUIRE((rank_signature(rr, pp, d1) == rank_signature(rr, pp, d2)) == same_orbit);
            }
        for (int t = 0; t < 200; ++t) {
            const auto& d = places[rng() % places.size()];
            RookPlacement shuffled =
                weyl_act(rr, W[rng() % W.size()], d, W[rng() % W.size()]);
            REQUIRE(canonical_form_A(rr, pp, shuffled).Dc == canon_of[d]);
        }
    }
}

TEST_CASE("canonical form, signed series") {
    // a lone long rook slides to the top corner of its block pair
    auto [rc, pc] = make(Series::C, 2, {2, 2});
    Fq delta = find_nonsquare(PrimeModulus(3));
    CanonicalBCD slid = canonical_form_BCD(rc, pc, {{{1, -1}}, {delta}});
    REQUIRE(slid.canon.D == RookPlacement{{2, -2}});
    REQUIRE(slid.canon.phi == std::vector<Fq>{delta});
    REQUIRE(weyl_act_mirror(rc, slid.w, {{{1, -1}}, {delta}}) == slid.canon);

    std::mt19937 rng(61);
    for (auto& [rr, pp] :
         {make(Series::C, 2, {1, 1, 1, 1}), make(Series::C, 2, {2, 2}),
          make(Series::C, 2, {1, 2, 1}), make(Series::D, 2, {2, 2}),
          make(Series::B, 2, {2, 1, 2}), make(Series::B, 2, {1, 3, 1}),
          make(Series::D, 3, {2, 2, 2}), make(Series::D, 3, {3, 3})}) {
        auto W = enumerate_weyl(rr, pp);
        auto pairs = enumerate_basic_pairs(rr, pp, 3);
        std::map<BasicPair, BasicPair> canon_of;
        for (const BasicPair& bp : pairs) {
            CanonicalBCD c = canonical_form_BCD(rr, pp, bp, &W);
            REQUIRE(weyl_act_mirror(rr, c.w, bp) == c.canon);
            REQUIRE(rank_signature(rr, pp, c.canon.D, c.canon.phi, 3) ==
                    rank_signature(rr, pp, bp.D, bp.phi, 3));
            REQUIRE(canonical_type(rr, pp, bp, &W) == (bp == c.canon));
            REQUIRE(canonical_form_BCD(rr, pp, c.canon, &W).canon == c.canon);
            // representatives pack every noncentral block pair of positive id
            // sum into its top-left target cells
            detail::PairTargets tg =
                detail::canonical_targets(rr, pp, rank_signature(rr, pp, c.canon.D));
            std::map<std::pair<int, int>, std::vector<Cell>> have, want;
            for (Cell cl : placement_cells(rr, c.canon.D)) {
                int bk = pp.block_of_pos(cl.first), bm = pp.block_of_pos(cl.second);
                if (bk + bm > 0 && bk != 0 && bm != 0) have[{bk, bm}].push_back(cl);
            }
            for (auto& [km, cells] : tg.cells)
                if (km.first != 0 && km.second != 0) want[km] = cells;
            REQUIRE(have == want);
            canon_of[bp] = c.canon;
        }
        for (const BasicPair& b1 : pairs)
            for (const BasicPair& b2 : pairs) {
                bool same_orbit = false;
                for (const auto& w : W)
                    if (weyl_act_mirror(rr, w, b1) == b2) same_orbit = true;
                REQUIRE((canon_of[b1] == canon_of[b2]) == same_orbit);
                // rank data decides the orbit in both directions
                REQUIRE((rank_signature(rr, pp, b1.D, b1.phi, 3) ==
                         rank_signature(rr, pp, b2.D, b2.phi, 3)) == same_orbit);
            }
        for (int t = 0; t < 200; ++t) {
            const BasicPair& bp = pairs[rng() % pairs.size()];
            BasicPair shuffled = weyl_act_mirror(rr, W[rng() % W.size()], bp);
            REQUIRE(canonical_form_BCD(rr, pp, shuffled, &W).canon == canon_of[bp]);
        }
    }
}
