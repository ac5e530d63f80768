// Orbit-sum characters attached to coefficient labels, and the paired
// class/character systems they assemble at the unipotent and whole-group
// levels.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sct/contraction.hpp"
#include "sct/grouptools.hpp"
#include "sct/orbits.hpp"

namespace sct {

// ---- coefficient coordinates of a unipotent element -----------------------

// Inverse of the coordinate-to-element map.  The stored functional part of a
// group element is parabolic-twisted, so recover coordinates through the
// realized matrix rather than by reading the element fields.
inline AlgebraElement coords_of_unipotent(const ContractionContext& cx, const GroupElement& u) {
    if (cx.form != FormKind::None) return cx.cayley(u);
    return cx.coords(cx.alg(u) - MatrixFq::identity(cx.M, cx.p));
}

// ---- right stabilizer of a label form (general-linear series) -------------

namespace detail {

// 1-based display ordinal of the block holding an index
inline unsigned block_ordinal(const ContractionContext& cx, int label) {
    return cx.part.pos_block.at(cx.rs.index.pos_of(label)) + 1;
}

}  // namespace detail

// Coordinates killed by right translation invariance of a label form.  An
// upper label shadows the upper cells of its row whose column block lies
// strictly between its endpoints; a lower label shadows the lower cells of
// its row left of its column block and the upper cells right of its row
// block.
inline std::vector<char> shadowed_coords(const ContractionContext& cx, const RookPlacement& D) {
    if (cx.form != FormKind::None)
        throw std::logic_error("shadowed_coords: general-linear series only");
    std::vector<char> out(cx.dim_ua(), 0);
    for (const Root& g : D) {
        unsigned kb = detail::block_ordinal(cx, g.i);
        unsigned mb = detail::block_ordinal(cx, g.j);
        for (unsigned t = 0; t < cx.dim_ua(); ++t) {
            bool upper = t < cx.half_dim();
            Root a = upper ? cx.dpos[t] : cx.dneg[t - cx.half_dim()];
            if (a.i != g.i) continue;
            unsigned tb = detail::block_ordinal(cx, a.j);
            if (kb < mb) {
                if (upper && kb < tb && tb < mb) out[t] = 1;
            } else {
                if (!upper && tb < mb) out[t] = 1;
                if (upper && tb > kb) out[t] = 1;
            }
        }
    }
    return out;
}

struct StabilizerSubgroup {
    FpRowSpace span;
    std::vector<unsigned long> codes;   // sorted coefficient codes
    std::vector<GroupElement> members;  // aligned with codes
};

// Span of the unshadowed coordinates.  Cross-checked against the brute-force
// fixer of the label form under left translation of the argument; any
// disagreement is a hard error.
inline StabilizerSubgroup stabilizer_UaD_A(const ContractionContext& cx, const RookPlacement& D) {
    if (cx.form != FormKind::None)
        throw std::logic_error("stabilizer_UaD_A: general-linear series only");
    std::vector<char> shadow = shadowed_coords(cx, D);
    StabilizerSubgroup out{FpRowSpace(cx.p), {}, {}};
    for (unsigned k = 0; k < cx.dim_ua(); ++k)
        if (!shadow[k]) out.span.insert(cx.basis_elem(k).c);
    out.codes = subspace_codes(cx, out.span);
    std::sort(out.codes.begin(), out.codes.end());
    LinearForm lam = cx.build_LambdaDphi(D, {});
    std::vector<unsigned long> fixed;
    for (unsigned long c = 0; c < cx.ua_order(); ++c) {
        GroupElement u = unipotent_from_coords(cx, cx.ua_from_code(c));
        if (cx.dual_act(u, lam, ContractionContext::Side::Right) == lam) fixed.push_back(c);
    }
    if (fixed != out.codes)
        throw std::logic_error("stabilizer_UaD_A: shadow span disagrees with the fixed set");
    for (unsigned long c : out.codes)
        out.members.push_back(unipotent_from_coords(cx, cx.ua_from_code(c)));
    return out;
}

// ---- summed exponential character on the stabilizer -----------------------

struct SubgroupCharacter {
    StabilizerSubgroup sub;
    std::shared_ptr<const CycloField> F;  // conductor p
    std::vector<CycloNumber> values;      // aligned with sub.codes
};

// Sum of the label form over its full family of Levi translates, restricted
// to the stabilizer subgroup.  The sum must decompose against the subgroup's
// irreducible table with nonnegative integer multiplicities; hard error
// otherwise.
inline SubgroupCharacter xi_D(const ContractionContext& cx, const RookPlacement& D,
                              unsigned group_cap = 2048) {
    SubgroupCharacter out{stabilizer_UaD_A(cx, D), std::make_shared<CycloField>(cx.p), {}};
    LinearForm lam = cx.build_LambdaDphi(D, {});
    std::vector<LinearForm> shifted;
    for (const GroupElement& h : cx.levi_elements())
        shifted.push_back(cx.dual_act(h, lam, ContractionContext::Side::Left));
    for (unsigned long c : out.sub.codes) {
        AlgebraElement x = cx.ua_from_code(c);
        std::vector<long long> counts(cx.p, 0);
        for (const LinearForm& f : shifted) counts[cx.eval(f, x)]++;
        out.values.push_back(from_power_counts(*out.F, counts));
    }
    SmallGroup sg = make_small_group(
        out.sub.members,
        [&](const GroupElement& a, const GroupElement& b) { return cx.group_mul(a, b); },
        [](const GroupElement& g) { return g.key(); }, group_cap);
    CharacterTable tab = character_table(sg);
    std::vector<CycloNumber> lift;
    for (const CycloNumber& v : out.values) lift.push_back(embed(v, *tab.field));
    if (!nonneg_integer_vector(decompose(to_class_function(lift, tab.cls), tab)))
        throw std::logic_error("xi_D: not a nonnegative integral combination of irreducibles");
    return out;
}

// ---- orbit-sum class functions --------------------------------------------

// functional orbit maps of the classifying action
inline LinearAction dual_coefficient_action(const ContractionContext& cx) {
    return dual_action(superclass_action(cx));
}

// left translation of the argument, as maps on functionals, one generator
// per coordinate line
inline LinearAction dual_right_action(const ContractionContext& cx) {
    LinearAction act{"dual-right", {}};
    for (unsigned k = 0; k < cx.dim_ua(); ++k) {
        GroupElement u = unipotent_from_coords(cx, cx.basis_elem(k));
        MatrixFq T(cx.dim_ua(), cx.p);
        for (unsigned j = 0; j < cx.dim_ua(); ++j) {
            LinearForm d;
            d.c.assign(cx.dim_ua(), 0);
            d.c[j] = 1;
            LinearForm img = cx.dual_act(u, d, ContractionContext::Side::Right);
            for (unsigned i = 0; i < cx.dim_ua(); ++i) T.at(i, j) = img.c[i];
        }
        act.maps.push_back(T);
    }
    return act;
}

struct OrbitSumCharacter {
    BasicPair label;
    std::shared_ptr<const CycloField> F;  // conductor p
    mpq_class scale = 1;
    std::vector<unsigned long> orbit;  // functional codes, sorted
    std::vector<LinearForm> forms;
};

inline CycloNumber orbit_sum_value(const ContractionContext& cx, const OrbitSumCharacter& s,
                                   const AlgebraElement& x) {
    std::vector<long long> counts(cx.p, 0);
    for (const LinearForm& f : s.forms) counts[cx.eval(f, x)]++;
    CycloNumber v = from_power_counts(*s.F, counts);
    if (s.scale != 1) v = v.scaled(s.scale);
    return v;
}

namespace detail {

inline OrbitSumCharacter orbit_sum_from_codes(const ContractionContext& cx, const BasicPair& label,
                                              std::vector<unsigned long> codes) {
    OrbitSumCharacter s{label, std::make_shared<CycloField>(cx.p), 1, std::move(codes), {}};
    for (unsigned long c : s.orbit) s.forms.push_back(LinearForm{cx.ua_from_code(c).c});
    return s;
}

}  // namespace detail

// Orbit exponential sum for a general-linear label, scaled by the ratio of
// the one-sided orbit to the two-sided orbit.
inline OrbitSumCharacter zeta_D(const ContractionContext& cx, const RookPlacement& D,
                                unsigned long cap = 1000000) {
    if (cx.form != FormKind::None) throw std::logic_error("zeta_D: general-linear series only");
    LinearForm lam = cx.build_LambdaDphi(D, {});
    unsigned long seed = cx.ua_code(AlgebraElement{lam.c});
    Orbit big = orbit_bfs(cx, seed, dual_coefficient_action(cx), cap);
    Orbit right = orbit_bfs(cx, seed, dual_right_action(cx), cap);
    OrbitSumCharacter s = detail::orbit_sum_from_codes(cx, BasicPair{D, {}}, big.members);
    s.scale = mpq_class((unsigned long)right.members.size()) /
              mpq_class((unsigned long)big.members.size());
    return s;
}

// Orbit exponential sum for a signed-series basic pair; unit scale.
inline OrbitSumCharacter sigma_Dphi_BCD(const ContractionContext& cx, const BasicPair& pair,
                                        unsigned long cap = 1000000) {
    if (cx.form == FormKind::None) throw std::logic_error("sigma_Dphi_BCD: signed series only");
    return detail::orbit_sum_from_codes(cx, pair, ideal_uaD_BCD(cx, pair, cap).dual_orbit);
}

// ---- Levi subgroups tied by a label ---------------------------------------

namespace detail {

// display positions a label ties into one scalar group: an upper label ties
// the block range between its endpoints, a lower label ties the range left
// of its column block together with the range right of its row block
inline std::vector<unsigned> tied_positions(const ContractionContext& cx, const Root& g) {
    unsigned kb = block_ordinal(cx, g.i);
    unsigned mb = block_ordinal(cx, g.j);
    unsigned r = cx.part.part_count();
    std::vector<char> tied(r + 1, 0);
    if (kb < mb) {
        for (unsigned t = kb; t <= mb; ++t) tied[t] = 1;
    } else {
        for (unsigned t = 1; t <= mb; ++t) tied[t] = 1;
        for (unsigned t = kb; t <= r; ++t) tied[t] = 1;
    }
    std::vector<unsigned> pos;
    for (unsigned q = 0; q < cx.M; ++q)
        if (tied[cx.part.pos_block[q] + 1]) pos.push_back(q);
    return pos;
}

inline bool scalar_on(const MatrixFq& m, const std::vector<unsigned>& pos) {
    Fq a = m.at(pos.front(), pos.front());
    for (unsigned r : pos)
        for (unsigned c : pos)
            if (m.at(r, c) != (r == c ? a : (Fq)0)) return false;
    return true;
}

inline bool label_ties_hold(const ContractionContext& cx, const MatrixFq& m, const Root& g) {
    if (!scalar_on(m, tied_positions(cx, g))) return false;
    if (cx.form == FormKind::None) return true;
    return scalar_on(m, tied_positions(cx, Root{-g.j, -g.i}));
}

}  // namespace detail

// Levi elements scalar across the block range a label ties; signed labels
// impose the mirror cell's condition as well.
inline std::vector<GroupElement> subgroup_H_gamma(const ContractionContext& cx, const Root& g) {
    std::vector<GroupElement> out;
    for (const GroupElement& h : cx.levi_elements())
        if (detail::label_ties_hold(cx, h.pmat, g)) out.push_back(h);
    return out;
}

inline std::vector<GroupElement> subgroup_H_D(const ContractionContext& cx,
                                              const RookPlacement& D) {
    std::vector<GroupElement> out;
    for (const GroupElement& h : cx.levi_elements()) {
        bool ok = true;
        for (const Root& g : D)
            if (!detail::label_ties_hold(cx, h.pmat, g)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(h);
    }
    return out;
}

// ---- induction by averaging over conjugates -------------------------------

// zero-extended subgroup character averaged over whole-group conjugates
inline CycloNumber induced_value(const ContractionContext& cx,
                                 const std::vector<GroupElement>& whole,
                                 const std::unordered_map<std::string, unsigned>& sub_index,
                                 const std::vector<CycloNumber>& sub_values,
                                 const GroupElement& g) {
    if (sub_values.empty()) throw std::invalid_argument("induced_value: empty subgroup");
    CycloNumber acc(*sub_values.front().F);
    for (const GroupElement& x : whole) {
        GroupElement t = cx.group_mul(cx.group_mul(x, g), cx.group_inv(x));
        auto it = sub_index.find(t.key());
        if (it != sub_index.end()) acc += sub_values[it->second];
    }
    return acc.scaled(mpq_class(1) / mpq_class((unsigned long)sub_index.size()));
}

// ---- adjoint triviality of the tied subgroup ------------------------------

// Every tied element must move each coordinate line only within the kernel
// of the label's dual orbit; hard error otherwise.
inline void check_ties_fix_quotient(const ContractionContext& cx,
                                    const std::vector<GroupElement>& hd,
                                    const FpRowSpace& kernel) {
    for (const GroupElement& h : hd)
        for (unsigned k = 0; k < cx.dim_ua(); ++k) {
            AlgebraElement v = cx.basis_elem(k);
            AlgebraElement w = cx.sub(cx.act_dagger(h, v), v);
            if (!w.is_zero() && !kernel.contains(w.c))
                throw std::logic_error(
                    "check_ties_fix_quotient: tied element moves a line off the kernel");
        }
}

// ---- whole-group characters -----------------------------------------------

namespace detail {

struct LabelBlock {
    OrbitSumCharacter sum;  // conductor p
    std::vector<GroupElement> hd;
    std::unordered_map<std::string, unsigned> h_index;
    CharacterTable tab;  // irreducibles of the tied subgroup
    mpq_class factor = 1;
};

inline LabelBlock build_label_block(const ContractionContext& cx, const BasicPair& label,
                                    unsigned long cap, unsigned group_cap = 4096) {
    LabelBlock b;
    b.hd = subgroup_H_D(cx, label.D);
    if (cx.form == FormKind::None) {
        b.sum = zeta_D(cx, label.D, cap);
        unsigned long l2 = (unsigned long)cx.levi_order() * cx.levi_order();
        b.factor = mpq_class(l2) / mpq_class((unsigned long)b.hd.size());
    } else {
        DualOrbitIdeal ideal = ideal_uaD_BCD(cx, label, cap);
        check_ties_fix_quotient(cx, b.hd, ideal.perp);
        b.sum = orbit_sum_from_codes(cx, label, ideal.dual_orbit);
        if (cx.levi_order() % b.hd.size() != 0)
            throw std::logic_error("build_label_block: tied subgroup order does not divide");
        b.factor = mpq_class(cx.levi_order() / (unsigned long)b.hd.size());
    }
    SmallGroup sg = make_small_group(
        b.hd, [&](const GroupElement& x, const GroupElement& y) { return cx.group_mul(x, y); },
        [](const GroupElement& g) { return g.key(); }, group_cap);
    b.tab = character_table(sg);
    for (unsigned i = 0; i < b.hd.size(); ++i) b.h_index.emplace(b.hd[i].key(), i);
    return b;
}

// value at the element with the given Levi index and coefficient code; zero
// when the Levi part is not tied
inline CycloNumber whole_value(const ContractionContext& cx, const LabelBlock& b,
                               unsigned theta_row, const CycloField& target, unsigned levi_idx,
                               unsigned long code) {
    const GroupElement& h = cx.levi_elements().at(levi_idx);
    auto it = b.h_index.find(h.key());
    if (it == b.h_index.end()) return CycloNumber(target);
    CycloNumber th = embed(b.tab.chi.at(theta_row).at(b.tab.cls.class_of.at(it->second)), target);
    CycloNumber base = embed(orbit_sum_value(cx, b.sum, cx.ua_from_code(code)), target);
    return (th * base).scaled(b.factor);
}

}  // namespace detail

struct WholeCharacter {
    std::shared_ptr<const CycloField> F;
    std::vector<CycloNumber> values;  // aligned with the supplied class list
};

namespace detail {

inline WholeCharacter whole_character(const ContractionContext& cx, const BasicPair& label,
                                      unsigned theta_row, const std::vector<Superclass>& classes,
                                      unsigned long cap) {
    LabelBlock b = build_label_block(cx, label, cap);
    WholeCharacter out;
    out.F = std::make_shared<CycloField>((unsigned)std::lcm((unsigned long)cx.p,
                                                            (unsigned long)b.tab.field->N));
    for (const Superclass& k : classes) {
        if (k.pairs.empty())
            throw std::invalid_argument("whole_character: group-level classes required");
        auto [li, code] = k.pairs.front();
        out.values.push_back(whole_value(cx, b, theta_row, *out.F, li, code));
    }
    return out;
}

}  // namespace detail

// Closed-form whole-group character for a label and a row of its tied
// subgroup table, at the representative of each supplied class.
inline WholeCharacter chi_alpha_A(const ContractionContext& cx, const RookPlacement& D,
                                  unsigned theta_row, const std::vector<Superclass>& classes,
                                  unsigned long cap = 1000000) {
    if (cx.form != FormKind::None) throw std::logic_error("chi_alpha_A: general-linear series only");
    return detail::whole_character(cx, BasicPair{D, {}}, theta_row, classes, cap);
}

inline WholeCharacter sigma_a_BCD(const ContractionContext& cx, const BasicPair& pair,
                                  unsigned theta_row, const std::vector<Superclass>& classes,
                                  unsigned long cap = 1000000) {
    if (cx.form == FormKind::None) throw std::logic_error("sigma_a_BCD: signed series only");
    return detail::whole_character(cx, pair, theta_row, classes, cap);
}

// ---- assembled pairings ---------------------------------------------------

enum class TheoryScope { Unipotent, Whole };

struct SupercharTheory {
    std::string group;  // readable domain tag
    bool group_level = false;
    std::shared_ptr<const CycloField> F;
    std::vector<Superclass> classes;
    unsigned identity_class = 0;
    std::vector<std::string> names;
    std::vector<std::vector<CycloNumber>> table;  // character rows, class columns
    // (character, levi index, coefficient code) -> value at that element;
    // the levi index is ignored at the unipotent level
    std::function<CycloNumber(unsigned, unsigned, unsigned long)> eval_element;
    // group model on encoded elements, for axiom checking: an element is the
    // cell index levi*code_stride + code at group level and the bare code
    // otherwise; the identity sits at cell 0
    unsigned long order = 0;
    unsigned long code_stride = 0;
    std::function<unsigned long(unsigned long, unsigned long)> mul;
    std::function<unsigned long(unsigned long)> inv;
    std::vector<unsigned long> generators;
};

inline std::string label_text(const BasicPair& bp) {
    std::string s = "[";
    for (size_t t = 0; t < bp.D.size(); ++t) {
        if (t) s += ' ';
        s += "(" + std::to_string(bp.D[t].i) + "," + std::to_string(bp.D[t].j) + ")";
        if (!bp.phi.empty() && bp.phi[t] != 1) s += "*" + std::to_string(bp.phi[t]);
    }
    return s + "]";
}

inline std::string theory_tag(const ContractionContext& cx, TheoryScope scope) {
    const char* s = cx.type.series == Series::A   ? "A"
                    : cx.type.series == Series::B ? "B"
                    : cx.type.series == Series::C ? "C"
                                                  : "D";
    std::string t = std::string(s) + std::to_string(cx.type.n) + " p" + std::to_string(cx.p);
    t += " blocks ";
    for (size_t i = 0; i < cx.part.parts.size(); ++i) {
        if (i) t += "+";
        t += std::to_string(cx.part.parts[i]);
    }
    t += scope == TheoryScope::Unipotent ? " unipotent" : " whole";
    return t;
}

namespace detail {

// cell-indexed multiplication, inversion, and a generating set; cell 0 must
// be the identity
inline void attach_group_model(const ContractionContext& cx, bool whole, SupercharTheory& th,
                               unsigned long cap) {
    const ContractionContext* cxp = &cx;
    auto els = std::make_shared<std::vector<GroupElement>>();
    if (whole) {
        *els = group_elements(cx, cap);
        th.order = cx.group_order();
    } else {
        for (unsigned long c = 0; c < cx.ua_order(); ++c)
            els->push_back(unipotent_from_coords(cx, cx.ua_from_code(c)));
        th.order = cx.ua_order();
    }
    th.code_stride = cx.ua_order();
    if (els->front().key() != cx.group_identity().key())
        throw std::logic_error("attach_group_model: identity is not the first cell");
    auto idx = std::make_shared<std::unordered_map<std::string, unsigned long>>();
    for (unsigned long i = 0; i < els->size(); ++i) idx->emplace((*els)[i].key(), i);
    th.mul = [cxp, els, idx](unsigned long a, unsigned long b) {
        return idx->at(cxp->group_mul(els->at(a), els->at(b)).key());
    };
    th.inv = [cxp, els, idx](unsigned long a) {
        return idx->at(cxp->group_inv(els->at(a)).key());
    };
    unsigned long pw = 1;
    for (unsigned t = 0; t < cx.dim_ua(); ++t) {
        th.generators.push_back(pw);
        pw *= cx.p;
    }
    if (whole)
        for (unsigned li = 1; li < cx.levi_elements().size(); ++li)
            th.generators.push_back((unsigned long)li * cx.ua_order());
}

}  // namespace detail

// Paired class and character lists at the requested level.  The context must
// outlive the returned theory; table cells are evaluated at each class
// representative and eval_element gives the value at any element.
inline SupercharTheory assemble_theory(const ContractionContext& cx, TheoryScope scope,
                                       unsigned long cap = 1000000) {
    SupercharTheory th;
    th.group = theory_tag(cx, scope);
    const ContractionContext* cxp = &cx;

    if (scope == TheoryScope::Unipotent) {
        th.group_level = false;
        th.F = std::make_shared<CycloField>(cx.p);
        th.classes = superclasses_Ua(cx, cap);
        LinearAction dual = dual_coefficient_action(cx);
        std::unique_ptr<LinearAction> right;
        if (cx.form == FormKind::None)
            right = std::make_unique<LinearAction>(dual_right_action(cx));
        auto sums = std::make_shared<std::vector<OrbitSumCharacter>>();
        for (const Superclass& k : th.classes) {
            LinearForm lam = cx.build_LambdaDphi(k.label.D, k.label.phi);
            unsigned long seed = cx.ua_code(AlgebraElement{lam.c});
            Orbit big = orbit_bfs(cx, seed, dual, cap);
            OrbitSumCharacter s = detail::orbit_sum_from_codes(cx, k.label, big.members);
            if (right) {
                Orbit r = orbit_bfs(cx, seed, *right, cap);
                s.scale = mpq_class((unsigned long)r.members.size()) /
                          mpq_class((unsigned long)big.members.size());
            }
            sums->push_back(std::move(s));
        }
        for (size_t i = 0; i < th.classes.size(); ++i) {
            th.names.push_back(label_text(th.classes[i].label));
            std::vector<CycloNumber> row;
            for (const Superclass& k : th.classes)
                row.push_back(
                    embed(orbit_sum_value(cx, (*sums)[i], cx.ua_from_code(k.members.front())),
                          *th.F));
            th.table.push_back(std::move(row));
        }
        for (size_t j = 0; j < th.classes.size(); ++j)
            if (std::binary_search(th.classes[j].members.begin(), th.classes[j].members.end(),
                                   0ul))
                th.identity_class = (unsigned)j;
        auto F = th.F;
        th.eval_element = [cxp, sums, F](unsigned ci, unsigned, unsigned long code) {
            return embed(orbit_sum_value(*cxp, sums->at(ci), cxp->ua_from_code(code)), *F);
        };
        detail::attach_group_model(cx, false, th, cap);
        return th;
    }

    th.group_level = true;
    th.classes = assemble_superclasses_Ga(
        cx, [&](const BasicPair& bp) { return subgroup_H_D(cx, bp.D); }, cap);

    // one block per distinct label, in first-appearance order
    auto blocks = std::make_shared<std::vector<detail::LabelBlock>>();
    std::map<std::string, unsigned> block_of;
    for (const Superclass& k : th.classes) {
        std::string key = label_text(k.label);
        if (!block_of.count(key)) {
            block_of.emplace(key, (unsigned)blocks->size());
            blocks->push_back(detail::build_label_block(cx, k.label, cap));
        }
    }

    unsigned long m = cx.p;
    for (const detail::LabelBlock& b : *blocks)
        m = std::lcm(m, (unsigned long)b.tab.field->N);
    th.F = std::make_shared<CycloField>((unsigned)m);

    auto chars = std::make_shared<std::vector<std::pair<unsigned, unsigned>>>();
    for (unsigned bi = 0; bi < blocks->size(); ++bi)
        for (unsigned r = 0; r < (*blocks)[bi].tab.chi.size(); ++r) {
            chars->emplace_back(bi, r);
            th.names.push_back(label_text((*blocks)[bi].sum.label) + "#" + std::to_string(r));
        }

    // base sums are shared by every character row of a label
    const std::vector<GroupElement>& levi = cx.levi_elements();
    for (unsigned bi = 0; bi < blocks->size(); ++bi) {
        const detail::LabelBlock& b = (*blocks)[bi];
        std::vector<int> hcls(th.classes.size(), -1);
        std::vector<CycloNumber> base(th.classes.size());
        for (size_t j = 0; j < th.classes.size(); ++j) {
            auto [li, code] = th.classes[j].pairs.front();
            auto it = b.h_index.find(levi[li].key());
            if (it == b.h_index.end()) continue;
            hcls[j] = (int)b.tab.cls.class_of[it->second];
            base[j] = embed(orbit_sum_value(cx, b.sum, cx.ua_from_code(code)), *th.F);
        }
        for (unsigned r = 0; r < b.tab.chi.size(); ++r) {
            std::vector<CycloNumber> row;
            for (size_t j = 0; j < th.classes.size(); ++j) {
                if (hcls[j] < 0) {
                    row.push_back(CycloNumber(*th.F));
                    continue;
                }
                row.push_back(
                    (embed(b.tab.chi[r][(unsigned)hcls[j]], *th.F) * base[j]).scaled(b.factor));
            }
            th.table.push_back(std::move(row));
        }
    }
    for (size_t j = 0; j < th.classes.size(); ++j)
        if (th.classes[j].pairs.front() == std::pair<unsigned, unsigned long>{0, 0})
            th.identity_class = (unsigned)j;

    auto F = th.F;
    // base orbit sums are shared by every row of a label block, so memoize
    // them per (block, code)
    struct BaseCache {
        std::mutex mu;
        std::vector<std::unordered_map<unsigned long, CycloNumber>> per_block;
    };
    auto cache = std::make_shared<BaseCache>();
    cache->per_block.resize(blocks->size());
    auto levi_keys = std::make_shared<std::vector<std::string>>();
    for (const MatFq& h : cxp->levi_elements()) levi_keys->push_back(h.key());
    th.eval_element = [blocks, chars, F, cache, levi_keys, cxp](unsigned ci, unsigned li,
                                                                unsigned long code) {
        auto [bi, r] = chars->at(ci);
        const detail::LabelBlock& b = blocks->at(bi);
        auto it = b.h_index.find(levi_keys->at(li));
        if (it == b.h_index.end()) return CycloNumber(*F);
        CycloNumber base(*F);
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto hit = cache->per_block[bi].find(code);
            if (hit != cache->per_block[bi].end()) {
                base = hit->second;
            } else {
                base = embed(orbit_sum_value(*cxp, b.sum, cxp->ua_from_code(code)), *F);
                cache->per_block[bi].emplace(code, base);
            }
        }
        CycloNumber t = embed(b.tab.chi.at(r).at(b.tab.cls.class_of.at(it->second)), *F);
        return (t * base).scaled(b.factor);
    };
    detail::attach_group_model(cx, true, th, cap);
    return th;
}

}  // namespace sct
