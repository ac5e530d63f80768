// Orbit closures on the nilpotent coordinate space and the partitions built
// from them: superclasses of the unipotent group and of the full contraction
// group, invariant ideals, dual orbits, plain conjugacy classes.
#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sct/contraction.hpp"
#include "sct/rook.hpp"

namespace sct {

// A group action on u^a presented as one linear map per generator, applied to
// coefficient columns.  Generators of finite order need no explicit inverses.
struct LinearAction {
    std::string label;
    std::vector<MatrixFq> maps;
};

namespace detail {

inline FqVec apply_map(const MatrixFq& T, const FqVec& v, unsigned p) {
    FqVec r(v.size(), 0);
    for (unsigned i = 0; i < r.size(); ++i) {
        unsigned long s = 0;
        for (unsigned j = 0; j < r.size(); ++j)
            if (T.at(i, j)) s += (unsigned long)T.at(i, j) * v[j] % p;
        r[i] = (Fq)(s % p);
    }
    return r;
}

// column k = coordinates of the image of basis vector k
template <typename F>
inline MatrixFq map_on_coords(const ContractionContext& cx, F&& image) {
    MatrixFq T(cx.dim_ua(), cx.p);
    for (unsigned k = 0; k < cx.dim_ua(); ++k) {
        AlgebraElement img = cx.coords(image(cx.basis[k]));
        for (unsigned i = 0; i < cx.dim_ua(); ++i) T.at(i, k) = img.c[i];
    }
    return T;
}

}  // namespace detail

// Generators of the group the superclass orbits run under: the whole diagonal
// torus, a unit for every parabolic cell, and a unit for every functional
// cell.  For the signed series this is the full matrix group's contraction,
// strictly larger than the isometry subgroup: negative-block torus entries
// move freely and the functional translations span the whole lower region.
inline std::vector<MatrixFq> ambient_group_generators(const ContractionContext& cx) {
    std::vector<MatrixFq> mats;
    Fq prim = primitive_root(cx.p);
    for (unsigned i = 0; i < cx.M; ++i) {
        MatrixFq t = MatrixFq::identity(cx.M, cx.p);
        t.at(i, i) = prim;
        mats.push_back(t);
    }
    for (unsigned i = 0; i < cx.M; ++i)
        for (unsigned j = 0; j < cx.M; ++j)
            if (i != j) mats.push_back(MatrixFq::identity(cx.M, cx.p) + MatrixFq::unit(cx.M, cx.p, i, j));
    return mats;
}

// x -> a x b over generator pairs (a, 1) and (1, b)
inline LinearAction two_sided_action(const ContractionContext& cx) {
    LinearAction act{"two-sided", {}};
    for (const MatrixFq& a : ambient_group_generators(cx)) {
        act.maps.push_back(detail::map_on_coords(cx, [&](const MatrixFq& x) { return cx.masked_mul(a, x); }));
        act.maps.push_back(detail::map_on_coords(cx, [&](const MatrixFq& x) { return cx.masked_mul(x, a); }));
    }
    return act;
}

// x -> a x a^dagger
inline LinearAction dagger_action(const ContractionContext& cx) {
    LinearAction act{"dagger", {}};
    for (const MatrixFq& a : ambient_group_generators(cx)) {
        MatrixFq ad = cx.dag(a);
        act.maps.push_back(detail::map_on_coords(
            cx, [&](const MatrixFq& x) { return cx.masked_mul(cx.masked_mul(a, x), ad); }));
    }
    return act;
}

inline LinearAction superclass_action(const ContractionContext& cx) {
    return cx.form == FormKind::None ? two_sided_action(cx) : dagger_action(cx);
}

// functionals transform by the transposed maps; the orbit of a form is the
// same set under either composition convention since the group is finite
inline LinearAction dual_action(const LinearAction& act) {
    LinearAction d{"dual-" + act.label, {}};
    for (const MatrixFq& T : act.maps) d.maps.push_back(T.transpose());
    return d;
}

// ---- breadth-first orbit closure ------------------------------------------

struct Orbit {
    std::vector<unsigned long> members;  // sorted codes
    unsigned long seed = 0;
    std::string acting_group;
};

inline Orbit orbit_bfs(const ContractionContext& cx, unsigned long seed, const LinearAction& act,
                       unsigned long cap = 1000000) {
    std::set<unsigned long> seen{seed};
    std::queue<unsigned long> work;
    work.push(seed);
    while (!work.empty()) {
        unsigned long code = work.front();
        work.pop();
        FqVec v = cx.ua_from_code(code).c;
        for (const MatrixFq& T : act.maps) {
            unsigned long img = cx.ua_code(AlgebraElement{detail::apply_map(T, v, cx.p)});
            if (seen.insert(img).second) {
                if (seen.size() > cap)
                    throw std::runtime_error("orbit_bfs: size cap exceeded, partial count " +
                                             std::to_string(seen.size()));
                work.push(img);
            }
        }
    }
    return Orbit{{seen.begin(), seen.end()}, seed, act.label};
}

// ---- superclasses ---------------------------------------------------------

// One class of U^a or of the full group.  U^a classes list coordinate codes;
// a class member is 1+X for the general-linear series and the rational
// preimage f^{-1}(X) for the signed ones.  Full-group classes list (Levi
// index, coordinate code) pairs under the unique Levi-unipotent splitting.
struct Superclass {
    BasicPair label;  // phi empty for the general-linear series
    GroupElement h;   // Levi label part; identity for U^a classes
    bool group_level = false;
    std::vector<unsigned long> members;
    std::vector<std::pair<unsigned, unsigned long>> pairs;
    size_t size() const { return group_level ? pairs.size() : members.size(); }
};

inline GroupElement unipotent_from_coords(const ContractionContext& cx, const AlgebraElement& x) {
    if (cx.form == FormKind::None)
        return cx.from_alg(MatrixFq::identity(cx.M, cx.p) + cx.realize(x));
    return cx.cayley_inv(x);
}

inline std::vector<Superclass> superclasses_Ua(const ContractionContext& cx,
                                               unsigned long cap = 1000000) {
    LinearAction act = superclass_action(cx);
    std::vector<long> orbit_of(cx.ua_order(), -1);
    std::vector<Superclass> out;
    for (unsigned long seed = 0; seed < cx.ua_order(); ++seed) {
        if (orbit_of[seed] != -1) continue;
        Orbit orb = orbit_bfs(cx, seed, act, cap);
        for (unsigned long c : orb.members) {
            if (orbit_of[c] != -1) throw std::runtime_error("superclasses_Ua: orbits overlap");
            orbit_of[c] = (long)out.size();
        }
        Superclass k;
        k.h = cx.group_identity();
        k.members = std::move(orb.members);
        out.push_back(std::move(k));
    }

    // each orbit must carry exactly one canonical coefficient label
    std::vector<unsigned> hits(out.size(), 0);
    std::vector<WeylElement> W;
    std::vector<BasicPair> labels;
    if (cx.form == FormKind::None) {
        for (const RookPlacement& D : enumerate_rook_placements(cx.rs, cx.part))
            labels.push_back(BasicPair{D, {}});
    } else {
        W = enumerate_weyl(cx.rs, cx.part);
        labels = enumerate_basic_pairs(cx.rs, cx.part, cx.p);
    }
    for (const BasicPair& bp : labels) {
        if (!canonical_type(cx.rs, cx.part, bp, cx.form == FormKind::None ? nullptr : &W)) continue;
        long id = orbit_of[cx.ua_code(cx.build_XDphi(bp.D, bp.phi))];
        out[id].label = bp;
        ++hits[id];
    }
    for (unsigned id = 0; id < out.size(); ++id)
        if (hits[id] != 1)
            throw std::runtime_error("superclasses_Ua: class " + std::to_string(id) + " carries " +
                                     std::to_string(hits[id]) + " canonical labels");
    return out;
}

// ---- invariant ideals -----------------------------------------------------

inline std::vector<unsigned long> subspace_codes(const ContractionContext& cx,
                                                 const FpRowSpace& span) {
    std::vector<unsigned long> codes{0};
    std::set<unsigned long> seen{0};
    for (const FqVec& b : span.basis()) {
        std::vector<unsigned long> next;
        for (unsigned long c : codes) {
            AlgebraElement x = cx.ua_from_code(c);
            for (Fq t = 1; t < (Fq)cx.p; ++t) {
                AlgebraElement y = x;
                for (unsigned i = 0; i < y.c.size(); ++i)
                    y.c[i] = fadd(y.c[i], fmul(t, b[i], cx.p), cx.p);
                unsigned long cy = cx.ua_code(y);
                if (seen.insert(cy).second) next.push_back(cy);
            }
        }
        codes.insert(codes.end(), next.begin(), next.end());
    }
    std::sort(codes.begin(), codes.end());
    return codes;
}

// Smallest subspace containing the displacements of Ad_h and closed under the
// superclass action.  Minimality holds by construction; the displacement
// containment is re-checked as the quotient-triviality certificate.
inline FpRowSpace smallest_invariant_ideal(const ContractionContext& cx, const GroupElement& h,
                                           const LinearAction* reuse = nullptr) {
    LinearAction local;
    if (!reuse) {
        local = superclass_action(cx);
        reuse = &local;
    }
    const LinearAction& act = *reuse;
    GroupElement hi = cx.group_inv(h);
    FpRowSpace span(cx.p);
    std::queue<FqVec> work;
    for (unsigned k = 0; k < cx.dim_ua(); ++k) {
        AlgebraElement b = cx.basis_elem(k);
        AlgebraElement ad = cx.form == FormKind::None ? cx.act_two_sided(h, b, hi)
                                                      : cx.act_dagger(h, b);
        FqVec v = cx.sub(ad, b).c;
        if (span.insert(v)) work.push(std::move(v));
    }
    while (!work.empty()) {
        FqVec v = std::move(work.front());
        work.pop();
        for (const MatrixFq& T : act.maps) {
            FqVec img = detail::apply_map(T, v, cx.p);
            if (span.insert(img)) work.push(std::move(img));
        }
    }
    for (unsigned k = 0; k < cx.dim_ua(); ++k) {
        AlgebraElement b = cx.basis_elem(k);
        AlgebraElement ad = cx.form == FormKind::None ? cx.act_two_sided(h, b, hi)
                                                      : cx.act_dagger(h, b);
        if (!span.contains(cx.sub(ad, b).c))
            throw std::logic_error("smallest_invariant_ideal: quotient certificate failed");
    }
    return span;
}

// ---- dual orbit and its perp (signed series) ------------------------------

struct DualOrbitIdeal {
    std::vector<unsigned long> dual_orbit;  // codes of the functional orbit
    FpRowSpace dual_span;                   // span of the orbit
    FpRowSpace perp;                        // common kernel of the orbit
    DualOrbitIdeal(unsigned p) : dual_span(p), perp(p) {}
};

inline DualOrbitIdeal ideal_uaD_BCD(const ContractionContext& cx, const BasicPair& pair,
                                    unsigned long cap = 1000000) {
    if (cx.form == FormKind::None) throw std::logic_error("ideal_uaD_BCD: signed series only");
    LinearAction dual = dual_action(dagger_action(cx));
    LinearForm seed = cx.build_LambdaDphi(pair.D, pair.phi);
    DualOrbitIdeal out(cx.p);
    Orbit orb = orbit_bfs(cx, cx.ua_code(AlgebraElement{seed.c}), dual, cap);
    out.dual_orbit = orb.members;
    for (unsigned long c : out.dual_orbit) out.dual_span.insert(cx.ua_from_code(c).c);
    for (const FqVec& v : kernel_basis(out.dual_span.basis(), cx.dim_ua(), cx.p))
        out.perp.insert(v);
    return out;
}

// ---- full-group superclasses ----------------------------------------------

namespace detail {

// the diagonal torus subgroup, reached from its generator list
inline std::vector<GroupElement> enumerate_torus(const ContractionContext& cx) {
    std::map<std::string, GroupElement> seen;
    std::queue<GroupElement> work;
    GroupElement e = cx.group_identity();
    seen.emplace(e.key(), e);
    work.push(e);
    while (!work.empty()) {
        GroupElement g = work.front();
        work.pop();
        for (const GroupElement& s : cx.gens_H) {
            GroupElement t = cx.group_mul(g, s);
            if (seen.emplace(t.key(), t).second) work.push(t);
        }
    }
    std::vector<GroupElement> out;
    for (auto& [k, g] : seen) out.push_back(g);
    return out;
}

// conjugacy class of h inside the Levi subgroup, as element keys
inline std::set<std::string> levi_class_keys(const ContractionContext& cx, const GroupElement& h) {
    std::set<std::string> seen{h.key()};
    std::queue<GroupElement> work;
    work.push(h);
    while (!work.empty()) {
        GroupElement g = work.front();
        work.pop();
        for (const GroupElement& s : cx.gens_L) {
            GroupElement t = cx.group_mul(cx.group_mul(s, g), cx.group_inv(s));
            if (seen.insert(t.key()).second) work.push(t);
        }
    }
    return seen;
}

}  // namespace detail

// The torus elements whose dual conjugation fixes the labeled functional
// pointwise.  This is generally coarser than the label's character-stability
// subgroup, which constrains whole label ranges; callers assembling classes
// must supply the finer subgroup.
inline std::vector<GroupElement> pointwise_torus_stabilizer(const ContractionContext& cx,
                                                            const BasicPair& label) {
    LinearForm f = cx.build_LambdaDphi(label.D, label.phi);
    std::vector<GroupElement> out;
    for (const GroupElement& h : detail::enumerate_torus(cx)) {
        bool fix;
        if (cx.form != FormKind::None) {
            fix = cx.dual_act_dagger(h, f) == f;
        } else {
            LinearForm step = cx.dual_act(h, f, ContractionContext::Side::Left);
            fix = cx.dual_act(cx.group_inv(h), step, ContractionContext::Side::Right) == f;
        }
        if (fix) out.push_back(h);
    }
    return out;
}

// Classes of the full group over pairs (coefficient label, torus label): the
// Levi class of h times the unipotent fiber of the labeled orbit thickened by
// the ideal of h.  subgroup_HD supplies each label's admissible torus
// elements; h runs over them one per Levi class, represented by the least
// serialized member.
template <typename SubgroupHD>
inline std::vector<Superclass> assemble_superclasses_Ga(const ContractionContext& cx,
                                                        SubgroupHD&& subgroup_HD,
                                                        unsigned long cap = 1000000) {
    std::vector<Superclass> ua = superclasses_Ua(cx, cap);
    const std::vector<GroupElement>& levi = cx.levi_elements();
    LinearAction act = superclass_action(cx);
    std::map<std::string, std::vector<unsigned long>> thick_of;  // ideal codes per h

    std::vector<Superclass> out;
    std::vector<char> covered((size_t)cx.levi_order() * cx.ua_order(), 0);
    std::vector<char> fiber(cx.ua_order(), 0);
    for (const Superclass& k : ua) {
        std::vector<GroupElement> hd = subgroup_HD(k.label);
        std::sort(hd.begin(), hd.end(),
                  [](const GroupElement& a, const GroupElement& b) { return a.key() < b.key(); });
        std::set<std::string> used;
        for (const GroupElement& h : hd) {
            if (used.count(h.key())) continue;
            std::set<std::string> cl = detail::levi_class_keys(cx, h);
            for (const std::string& s : cl) used.insert(s);

            Superclass g;
            g.label = k.label;
            g.h = h;  // least member of its class inside the subgroup
            g.group_level = true;
            std::vector<unsigned> levi_idx;
            for (unsigned i = 0; i < levi.size(); ++i)
                if (cl.count(levi[i].key())) levi_idx.push_back(i);
            if (levi_idx.size() != cl.size())
                throw std::logic_error("assemble_superclasses_Ga: Levi class left the Levi");

            auto [it, fresh] = thick_of.try_emplace(h.key());
            if (fresh) it->second = subspace_codes(cx, smallest_invariant_ideal(cx, h, &act));
            const std::vector<unsigned long>& thick = it->second;
            std::vector<unsigned long> fiber_codes;
            if (thick.size() == cx.ua_order()) {
                fiber_codes.resize(cx.ua_order());
                for (unsigned long c = 0; c < cx.ua_order(); ++c) fiber_codes[c] = c;
            } else if (thick.size() == 1) {
                fiber_codes = k.members;
            } else {
                std::vector<AlgebraElement> shifts;
                for (unsigned long d : thick) shifts.push_back(cx.ua_from_code(d));
                std::fill(fiber.begin(), fiber.end(), 0);
                for (unsigned long c : k.members) {
                    AlgebraElement x = cx.ua_from_code(c);
                    for (const AlgebraElement& d : shifts) {
                        unsigned long s = cx.ua_code(cx.add(x, d));
                        if (!fiber[s]) {
                            fiber[s] = 1;
                            fiber_codes.push_back(s);
                        }
                    }
                }
                std::sort(fiber_codes.begin(), fiber_codes.end());
            }
            for (unsigned i : levi_idx)
                for (unsigned long c : fiber_codes) {
                    g.pairs.push_back({i, c});
                    size_t cell = (size_t)i * cx.ua_order() + c;
                    if (covered[cell])
                        throw std::runtime_error("assemble_superclasses_Ga: classes overlap");
                    covered[cell] = 1;
                }
            out.push_back(std::move(g));
        }
    }
    for (char c : covered)
        if (!c) throw std::runtime_error("assemble_superclasses_Ga: classes do not cover the group");
    return out;
}

// ---- conjugacy classes ----------------------------------------------------

// Partition of a closed element list by conjugation, reached through the
// given generators.  Returns indices into the input, classes led by their
// least member.
inline std::vector<std::vector<unsigned>> conjugacy_classes(
    const ContractionContext& cx, const std::vector<GroupElement>& elements,
    const std::vector<GroupElement>& generators) {
    std::map<std::string, unsigned> index;
    for (unsigned i = 0; i < elements.size(); ++i) index.emplace(elements[i].key(), i);
    std::vector<char> seen(elements.size(), 0);
    std::vector<std::vector<unsigned>> out;
    for (unsigned i = 0; i < elements.size(); ++i) {
        if (seen[i]) continue;
        std::vector<unsigned> cls{i};
        seen[i] = 1;
        std::queue<unsigned> work;
        work.push(i);
        while (!work.empty()) {
            unsigned at = work.front();
            work.pop();
            for (const GroupElement& s : generators) {
                GroupElement t =
                    cx.group_mul(cx.group_mul(s, elements[at]), cx.group_inv(s));
                auto it = index.find(t.key());
                if (it == index.end())
                    throw std::invalid_argument("conjugacy_classes: conjugate left the list");
                if (!seen[it->second]) {
                    seen[it->second] = 1;
                    cls.push_back(it->second);
                    work.push(it->second);
                }
            }
        }
        std::sort(cls.begin(), cls.end());
        out.push_back(std::move(cls));
    }
    return out;
}

// every element of the group, Levi factor times unipotent coordinate
inline std::vector<GroupElement> group_elements(const ContractionContext& cx,
                                                unsigned long cap = 1000000) {
    if (cx.group_order() > cap) throw std::runtime_error("group_elements: cap exceeded");
    std::vector<GroupElement> out;
    for (const GroupElement& l : cx.levi_elements())
        for (unsigned long c = 0; c < cx.ua_order(); ++c)
            out.push_back(cx.group_mul(l, unipotent_from_coords(cx, cx.ua_from_code(c))));
    return out;
}

}  // namespace sct
