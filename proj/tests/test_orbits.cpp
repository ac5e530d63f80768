// Orbit closures, superclass partitions at both group levels, invariant
// ideals, dual orbits, and plain conjugacy classes on desk-size instances.

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "sct/orbits.hpp"

using namespace sct;

static unsigned long code_of(const ContractionContext& cx, const RookPlacement& D,
                             const std::vector<Fq>& phi = {}) {
    return cx.ua_code(cx.build_XDphi(D, phi));
}

static const Superclass& class_of(const std::vector<Superclass>& ks, unsigned long code) {
    for (const Superclass& k : ks)
        if (std::binary_search(k.members.begin(), k.members.end(), code)) return k;
    throw std::logic_error("code missing from every class");
}

static std::multiset<size_t> size_multiset(const std::vector<Superclass>& ks) {
    std::multiset<size_t> out;
    for (const Superclass& k : ks) out.insert(k.size());
    return out;
}

static GroupElement torus_elem(const ContractionContext& cx, const std::vector<Fq>& diag) {
    MatrixFq m = MatrixFq::identity(cx.M, cx.p);
    for (unsigned i = 0; i < cx.M; ++i) m.at(i, i) = diag[i];
    return cx.from_alg(m);
}

static FqVec unit_vec(const ContractionContext& cx, Root a) {
    FqVec v(cx.dim_ua(), 0);
    v[cx.root_index.at(a)] = 1;
    return v;
}

TEST_CASE("orbit closure basics") {
    ContractionContext a2 = build_context(Series::A, 2, {1, 1}, 3);
    LinearAction act = superclass_action(a2);

    Orbit zero = orbit_bfs(a2, 0, act);
    REQUIRE(zero.members == std::vector<unsigned long>{0});

    unsigned long e12 = code_of(a2, {Root{1, 2}});
    unsigned long e12_twice = a2.ua_code(a2.build_XDphi({Root{1, 2}}, {2}));
    Orbit line = orbit_bfs(a2, e12, act);
    REQUIRE(line.members.size() == 2);
    REQUIRE(std::is_sorted(line.members.begin(), line.members.end()));
    REQUIRE(std::binary_search(line.members.begin(), line.members.end(), e12));
    REQUIRE(std::binary_search(line.members.begin(), line.members.end(), e12_twice));

    REQUIRE_THROWS_WITH(orbit_bfs(a2, e12, act, 1),
                        Catch::Matchers::ContainsSubstring("partial count"));
}

TEST_CASE("unipotent superclasses, general linear") {
    ContractionContext a2 = build_context(Series::A, 2, {1, 1}, 3);
    std::vector<Superclass> k2 = superclasses_Ua(a2);
    REQUIRE(size_multiset(k2) == std::multiset<size_t>{1, 2, 2, 4});
    REQUIRE(class_of(k2, 0).label.D.empty());

    ContractionContext a3 = build_context(Series::A, 3, {1, 1, 1}, 3);
    std::vector<Superclass> k3 = superclasses_Ua(a3);
    REQUIRE(k3.size() == 18);
    size_t total = 0;
    for (const Superclass& k : k3) total += k.size();
    REQUIRE(total == a3.ua_order());

    unsigned canonical = 0;
    for (const RookPlacement& D : enumerate_rook_placements(a3.rs, a3.part))
        if (canonical_type(a3.rs, a3.part, D)) ++canonical;
    REQUIRE(canonical == 18);

    ContractionContext a21 = build_context(Series::A, 3, {2, 1}, 3);
    std::vector<Superclass> k21 = superclasses_Ua(a21);
    REQUIRE(k21.size() == 4);
    total = 0;
    for (const Superclass& k : k21) total += k.size();
    REQUIRE(total == a21.ua_order());
}

TEST_CASE("general linear classes match block relabeling") {
    ContractionContext cx = build_context(Series::A, 3, {2, 1}, 3);
    std::vector<Superclass> ks = superclasses_Ua(cx);
    std::vector<RookPlacement> all = enumerate_rook_placements(cx.rs, cx.part);
    std::vector<WeylElement> W = enumerate_weyl(cx.rs, cx.part);

    auto class_id = [&](const RookPlacement& D) {
        const Superclass& k = class_of(ks, code_of(cx, D));
        return (long)(&k - ks.data());
    };
    auto conjugate = [&](const RookPlacement& a, const RookPlacement& b) {
        for (const WeylElement& w1 : W)
            for (const WeylElement& w2 : W)
                if (weyl_act(cx.rs, w1, a, w2) == b) return true;
        return false;
    };
    for (const RookPlacement& a : all)
        for (const RookPlacement& b : all)
            REQUIRE((class_id(a) == class_id(b)) == conjugate(a, b));

    // corner ranks of the doubled realization are class functions
    for (const Superclass& k : ks) {
        AlgebraElement first = cx.ua_from_code(k.members.front());
        for (unsigned long c : k.members) {
            AlgebraElement x = cx.ua_from_code(c);
            for (unsigned lo = 1; lo <= 2; ++lo)
                for (unsigned hi = lo; hi <= 2; ++hi)
                    REQUIRE(cx.doubled_rank_upper(x, lo, hi) ==
                            cx.doubled_rank_upper(first, lo, hi));
            for (unsigned lo = 1; lo <= 2; ++lo)
                for (unsigned hi = 1; hi <= 2; ++hi)
                    REQUIRE(cx.doubled_rank_lower(x, lo, hi) ==
                            cx.doubled_rank_lower(first, lo, hi));
        }
    }
}

TEST_CASE("unipotent superclasses, signed") {
    ContractionContext c2 = build_context(Series::C, 2, {1, 1, 1, 1}, 3);
    std::vector<Superclass> kc = superclasses_Ua(c2);
    REQUIRE(kc.size() == 119);
    size_t total = 0;
    for (const Superclass& k : kc) total += k.size();
    REQUIRE(total == c2.ua_order());

    // the long-root coefficient marks genuinely different classes
    Fq delta = find_nonsquare(PrimeModulus(3));
    unsigned long plain = code_of(c2, {Root{1, -1}}, {1});
    unsigned long marked = code_of(c2, {Root{1, -1}}, {delta});
    REQUIRE(&class_of(kc, plain) != &class_of(kc, marked));

    std::set<RankSignature> sigs;
    for (const Superclass& k : kc)
        sigs.insert(rank_signature(c2.rs, c2.part, k.label.D, k.label.phi, 3));
    REQUIRE(sigs.size() == kc.size());

    ContractionContext b2 = build_context(Series::B, 2, {1, 1, 1, 1, 1}, 3);
    std::vector<Superclass> kb = superclasses_Ua(b2);
    REQUIRE(kb.size() == 19);
    total = 0;
    for (const Superclass& k : kb) total += k.size();
    REQUIRE(total == b2.ua_order());

    ContractionContext d2 = build_context(Series::D, 2, {2, 2}, 3);
    REQUIRE(superclasses_Ua(d2).size() == 4);
}

TEST_CASE("signed classes match the canonical representative") {
    ContractionContext cx = build_context(Series::C, 2, {2, 2}, 3);
    std::vector<Superclass> ks = superclasses_Ua(cx);
    REQUIRE(ks.size() == 25);
    std::vector<WeylElement> W = enumerate_weyl(cx.rs, cx.part);
    for (const BasicPair& bp : enumerate_basic_pairs(cx.rs, cx.part, 3)) {
        const Superclass& k = class_of(ks, cx.ua_code(cx.build_XDphi(bp.D, bp.phi)));
        REQUIRE(k.label == canonical_form_BCD(cx.rs, cx.part, bp, &W).canon);
    }
    std::set<RankSignature> sigs;
    for (const Superclass& k : ks)
        sigs.insert(rank_signature(cx.rs, cx.part, k.label.D, k.label.phi, 3));
    REQUIRE(sigs.size() == ks.size());
}

TEST_CASE("smallest invariant ideal") {
    ContractionContext a2 = build_context(Series::A, 2, {1, 1}, 3);
    REQUIRE(smallest_invariant_ideal(a2, torus_elem(a2, {2, 2})).dim() == 0);
    REQUIRE(smallest_invariant_ideal(a2, torus_elem(a2, {1, 2})).dim() == a2.dim_ua());

    ContractionContext c2 = build_context(Series::C, 2, {1, 1, 1, 1}, 3);
    REQUIRE(smallest_invariant_ideal(c2, torus_elem(c2, {2, 2, 2, 2})).dim() == 0);

    // one deviant torus entry wakes exactly the arms through it plus the
    // products those arms reach; the opposite corner stays dark
    ContractionContext a4 = build_context(Series::A, 4, {1, 1, 1, 1}, 3);
    FpRowSpace star = smallest_invariant_ideal(a4, torus_elem(a4, {1, 1, 2, 1}));
    REQUIRE(star.dim() == 9);
    for (Root a : {Root{1, 3}, Root{1, 4}, Root{2, 1}, Root{2, 3}, Root{2, 4}, Root{3, 1},
                   Root{3, 2}, Root{3, 4}, Root{4, 3}})
        REQUIRE(star.contains(unit_vec(a4, a)));
    for (Root a : {Root{1, 2}, Root{4, 1}, Root{4, 2}})
        REQUIRE(!star.contains(unit_vec(a4, a)));
}

TEST_CASE("dual orbit ideal") {
    ContractionContext c2 = build_context(Series::C, 2, {1, 1, 1, 1}, 3);

    DualOrbitIdeal empty = ideal_uaD_BCD(c2, BasicPair{{}, {}});
    REQUIRE(empty.dual_span.dim() == 0);
    REQUIRE(empty.perp.dim() == c2.dim_ua());

    BasicPair bp{sorted_placement({Root{2, -1}, Root{-1, 1}}), {1, 1}};
    DualOrbitIdeal out = ideal_uaD_BCD(c2, bp);
    REQUIRE(out.dual_span.dim() == 6);
    REQUIRE(out.perp.dim() == 2);
    REQUIRE(out.perp.contains(unit_vec(c2, Root{1, 2})));
    REQUIRE(out.perp.contains(unit_vec(c2, Root{2, -2})));

    // the perp is stable under the whole conjugation action
    for (const MatrixFq& T : dagger_action(c2).maps)
        for (const FqVec& b : out.perp.basis())
            REQUIRE(out.perp.contains(detail::apply_map(T, b, 3)));

    // its rational preimage is a subgroup and stays put under conjugation
    std::vector<GroupElement> members;
    for (unsigned long c : subspace_codes(c2, out.perp))
        members.push_back(c2.cayley_inv(c2.ua_from_code(c)));
    REQUIRE(members.size() == 9);
    for (const GroupElement& u : members)
        for (const GroupElement& v : members)
            REQUIRE(out.perp.contains(c2.cayley(c2.group_mul(u, v)).c));
    std::mt19937 rng(7);
    for (int s = 0; s < 50; ++s) {
        GroupElement g = c2.group_identity();
        for (int t = 0; t < 5; ++t) g = c2.group_mul(g, c2.gens_Ga[rng() % c2.gens_Ga.size()]);
        GroupElement gi = c2.group_inv(g);
        for (const GroupElement& u : members)
            REQUIRE(out.perp.contains(c2.cayley(c2.group_mul(c2.group_mul(g, u), gi)).c));
    }
}

TEST_CASE("pointwise torus stabilizer") {
    ContractionContext a2 = build_context(Series::A, 2, {1, 1}, 3);
    std::vector<GroupElement> sa = pointwise_torus_stabilizer(a2, BasicPair{{Root{1, 2}}, {}});
    REQUIRE(sa.size() == 2);
    for (const GroupElement& h : sa) REQUIRE(h.pmat.at(0, 0) == h.pmat.at(1, 1));

    ContractionContext c2 = build_context(Series::C, 2, {1, 1, 1, 1}, 3);
    BasicPair worked{sorted_placement({Root{2, -1}, Root{-1, 1}}), {1, 1}};
    std::vector<GroupElement> sc = pointwise_torus_stabilizer(c2, worked);
    REQUIRE(sc.size() == 2);
    std::set<std::string> keys;
    for (const GroupElement& h : sc) keys.insert(h.key());
    REQUIRE(keys.count(c2.group_identity().key()) == 1);
    REQUIRE(keys.count(torus_elem(c2, {2, 2, 2, 2}).key()) == 1);

    // a lone long root constrains nothing at this modulus
    REQUIRE(pointwise_torus_stabilizer(c2, BasicPair{{Root{2, -2}}, {1}}).size() == 4);
}

TEST_CASE("full group superclasses") {
    ContractionContext cx = build_context(Series::A, 2, {1, 1}, 3);
    auto hd = [&](const BasicPair& label) { return pointwise_torus_stabilizer(cx, label); };
    std::vector<Superclass> ks = assemble_superclasses_Ga(cx, hd);
    REQUIRE(ks.size() == 10);
    REQUIRE(size_multiset(ks) == std::multiset<size_t>{1, 1, 2, 2, 2, 2, 4, 4, 9, 9});
    size_t total = 0;
    for (const Superclass& k : ks) total += k.size();
    REQUIRE(total == cx.group_order());

    bool found = false;
    for (const Superclass& k : ks)
        if (k.label.D.empty() && k.h == cx.group_identity()) {
            REQUIRE(k.pairs == std::vector<std::pair<unsigned, unsigned long>>{{0, 0}});
            found = true;
        }
    REQUIRE(found);

    // each class is a union of conjugacy classes
    std::vector<GroupElement> elements = group_elements(cx);
    REQUIRE(elements.size() == 36);
    std::vector<long> super_of(elements.size(), -1);
    for (unsigned id = 0; id < ks.size(); ++id)
        for (auto [i, c] : ks[id].pairs) {
            size_t at = (size_t)i * cx.ua_order() + c;
            REQUIRE(elements[at] == cx.group_mul(cx.levi_elements()[i],
                                                 unipotent_from_coords(cx, cx.ua_from_code(c))));
            REQUIRE(super_of[at] == -1);
            super_of[at] = id;
        }
    std::vector<std::vector<unsigned>> conj = conjugacy_classes(cx, elements, cx.gens_Ga);
    std::map<long, unsigned> parts_of;
    for (const std::vector<unsigned>& cls : conj) {
        for (unsigned i : cls) REQUIRE(super_of[i] == super_of[cls.front()]);
        parts_of[super_of[cls.front()]] += 1;
    }
    // the size-4 classes each weld two conjugacy classes together
    for (unsigned id = 0; id < ks.size(); ++id)
        REQUIRE(parts_of[id] == (ks[id].size() == 4 ? 2u : 1u));
}

TEST_CASE("conjugacy classes") {
    ContractionContext cx = build_context(Series::A, 2, {1, 1}, 3);
    std::vector<GroupElement> elements = group_elements(cx);
    std::vector<std::vector<unsigned>> conj = conjugacy_classes(cx, elements, cx.gens_Ga);
    REQUIRE(conj.size() == 12);
    std::multiset<size_t> sizes;
    size_t total = 0;
    for (const std::vector<unsigned>& cls : conj) {
        REQUIRE(36 % cls.size() == 0);
        sizes.insert(cls.size());
        total += cls.size();
    }
    REQUIRE(total == 36);
    REQUIRE(sizes == std::multiset<size_t>{1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 9, 9});
    REQUIRE(conj.front() == std::vector<unsigned>{0});

    REQUIRE_THROWS_AS(conjugacy_classes(cx, {elements[0], elements[5]}, cx.gens_Ga),
                      std::invalid_argument);
}
