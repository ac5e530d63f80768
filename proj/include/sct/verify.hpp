// Machine checks for an assembled class/character system: first the defining
// axioms of such a system, then instance-level claims tied to this
// construction.  Failures become report entries carrying a replayable
// witness; nothing here throws for a failed check.
#pragma once

#include <chrono>
#include <future>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "sct/rook.hpp"
#include "sct/superchar.hpp"

namespace sct {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string witness;  // empty when passed
    double seconds = 0.0;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const CheckResult* find(const std::string& name) const {
        for (const CheckResult& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

inline CheckResult timed(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    r.witness = body();
    r.passed = r.witness.empty();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// encoded cells of one class; unipotent-level classes store bare codes
inline std::vector<unsigned long> class_cells(const SupercharTheory& th, size_t j) {
    const Superclass& k = th.classes[j];
    if (!th.group_level) return k.members;
    std::vector<unsigned long> out;
    out.reserve(k.pairs.size());
    for (auto [li, code] : k.pairs) out.push_back((unsigned long)li * th.code_stride + code);
    return out;
}

inline std::vector<long> cell_owners(const SupercharTheory& th, std::string* err) {
    std::vector<long> owner(th.order, -1);
    for (size_t j = 0; j < th.classes.size(); ++j)
        for (unsigned long c : class_cells(th, j)) {
            if (c >= th.order) {
                if (err) *err = "class " + std::to_string(j) + " holds out-of-range cell " +
                                std::to_string(c);
                return owner;
            }
            if (owner[c] != -1) {
                if (err) *err = "cell " + std::to_string(c) + " appears in classes " +
                                std::to_string(owner[c]) + " and " + std::to_string(j);
                return owner;
            }
            owner[c] = (long)j;
        }
    return owner;
}

}  // namespace detail

namespace detail {

// checks run concurrently unless a single worker is requested; assembly keeps
// the declared order either way
inline VerificationReport run_checks(std::vector<std::function<CheckResult()>>& work,
                                     unsigned workers) {
    VerificationReport rep;
    if (workers == 1) {
        for (auto& w : work) rep.checks.push_back(w());
        return rep;
    }
    std::vector<std::future<CheckResult>> futs;
    for (auto& w : work) futs.push_back(std::async(std::launch::async, w));
    for (auto& f : futs) rep.checks.push_back(f.get());
    return rep;
}

}  // namespace detail

// The seven defining properties, in order: the classes partition the group,
// the identity is a class by itself, every class is closed under conjugation,
// each character is constant on each class, distinct characters are
// orthogonal, the two counts agree, and the value matrix is invertible.  All
// arithmetic is exact; invertibility tries a one-sided modular certificate
// first and falls back to exact elimination.
inline VerificationReport check_axioms(const SupercharTheory& th, unsigned workers = 0) {
    using detail::timed;
    std::vector<std::function<CheckResult()>> work;

    work.push_back([&th] {
        return timed("classes-partition-the-group", [&th]() -> std::string {
            std::string err;
            std::vector<long> owner = detail::cell_owners(th, &err);
            if (!err.empty()) return err;
            for (unsigned long c = 0; c < th.order; ++c)
                if (owner[c] == -1) return "cell " + std::to_string(c) + " is in no class";
            return "";
        });
    });

    work.push_back([&th] {
        return timed("identity-is-a-class", [&th]() -> std::string {
            if (th.identity_class >= th.classes.size()) return "identity class index out of range";
            std::vector<unsigned long> cells = detail::class_cells(th, th.identity_class);
            if (cells.size() != 1 || cells.front() != 0)
                return "class " + std::to_string(th.identity_class) +
                       " is not the singleton identity";
            return "";
        });
    });

    work.push_back([&th] {
        return timed("classes-close-under-conjugacy", [&th]() -> std::string {
            if (!th.mul || !th.inv || th.generators.empty())
                return "no group model attached to the theory";
            std::vector<char> seen(th.order, 0);
            std::queue<unsigned long> bfs;
            seen[0] = 1;
            bfs.push(0);
            unsigned long reached = 1;
            while (!bfs.empty()) {
                unsigned long a = bfs.front();
                bfs.pop();
                for (unsigned long g : th.generators) {
                    unsigned long t = th.mul(a, g);
                    if (!seen.at(t)) {
                        seen[t] = 1;
                        ++reached;
                        bfs.push(t);
                    }
                }
            }
            if (reached != th.order)
                return "generators reach " + std::to_string(reached) + " of " +
                       std::to_string(th.order) + " elements";
            std::string err;
            std::vector<long> owner = detail::cell_owners(th, &err);
            if (!err.empty()) return "class data unusable: " + err;
            for (unsigned long g : th.generators) {
                unsigned long gi = th.inv(g);
                for (unsigned long c = 0; c < th.order; ++c) {
                    unsigned long t = th.mul(th.mul(g, c), gi);
                    if (owner[t] != owner[c])
                        return "conjugating cell " + std::to_string(c) + " by generator " +
                               std::to_string(g) + " crosses from class " +
                               std::to_string(owner[c]) + " to " + std::to_string(owner[t]);
                }
            }
            return "";
        });
    });

    work.push_back([&th] {
        return timed("characters-constant-on-classes", [&th]() -> std::string {
            if (!th.eval_element) return "no element evaluator attached to the theory";
            for (size_t i = 0; i < th.table.size(); ++i)
                for (size_t j = 0; j < th.classes.size(); ++j) {
                    if (th.table[i].size() != th.classes.size())
                        return "row " + std::to_string(i) + " has wrong length";
                    const CycloNumber& want = th.table[i][j];
                    const Superclass& k = th.classes[j];
                    if (th.group_level) {
                        for (auto [li, code] : k.pairs)
                            if (th.eval_element((unsigned)i, li, code) != want)
                                return "character " + std::to_string(i) + " varies on class " +
                                       std::to_string(j) + " at levi " + std::to_string(li) +
                                       " code " + std::to_string(code);
                    } else {
                        for (unsigned long code : k.members)
                            if (th.eval_element((unsigned)i, 0, code) != want)
                                return "character " + std::to_string(i) + " varies on class " +
                                       std::to_string(j) + " at code " + std::to_string(code);
                    }
                }
            return "";
        });
    });

    work.push_back([&th] {
        return timed("characters-pairwise-orthogonal", [&th]() -> std::string {
            std::vector<unsigned> sizes;
            for (size_t j = 0; j < th.classes.size(); ++j)
                sizes.push_back((unsigned)th.classes[j].size());
            for (size_t i = 0; i < th.table.size(); ++i)
                for (size_t j = i + 1; j < th.table.size(); ++j) {
                    if (th.table[i].size() != sizes.size() || th.table[j].size() != sizes.size())
                        return "table is not class-aligned";
                    if (!inner_product_classes(th.table[i], th.table[j], sizes).is_zero())
                        return "characters " + std::to_string(i) + " and " + std::to_string(j) +
                               " are not orthogonal";
                }
            return "";
        });
    });

    work.push_back([&th] {
        return timed("counts-agree", [&th]() -> std::string {
            if (th.table.size() != th.classes.size())
                return std::to_string(th.table.size()) + " characters against " +
                       std::to_string(th.classes.size()) + " classes";
            if (th.names.size() != th.table.size()) return "name list out of step";
            return "";
        });
    });

    work.push_back([&th] {
        return timed("value-matrix-invertible", [&th]() -> std::string {
            size_t k = th.classes.size();
            if (th.table.size() != k) return "value matrix is not square";
            for (const auto& row : th.table)
                if (row.size() != k) return "value matrix is not square";
            if (k == 0) return "empty theory";
            detail::ModMap mm(th.F->N);
            std::vector<std::vector<unsigned long>> a(k, std::vector<unsigned long>(k));
            for (size_t i = 0; i < k; ++i)
                for (size_t j = 0; j < k; ++j) a[i][j] = mm.map_cyclo(th.table[i][j]);
            if (detail::det_mod(std::move(a), mm.ell) != 0) return "";
            // the modular certificate is one-sided; settle it exactly
            detail::CycloMat m(th.table.begin(), th.table.end());
            if (detail::kernel_cyclo(std::move(m), *th.F).empty()) return "";
            return "value matrix is singular";
        });
    });

    return detail::run_checks(work, workers);
}

// ---- instance-level claims -------------------------------------------------

namespace detail {

inline std::string claim_labels(const ContractionContext& cx,
                                const std::vector<Superclass>& ua) {
    std::vector<WeylElement> weyl = enumerate_weyl(cx.rs, cx.part);
    std::set<std::string> seen;
    unsigned long covered = 0;
    for (const Superclass& k : ua) {
        if (!canonical_type(cx.rs, cx.part, k.label, &weyl))
            return "class label " + label_text(k.label) + " is not canonical";
        if (!seen.insert(label_text(k.label)).second)
            return "label " + label_text(k.label) + " repeats";
        covered += k.members.size();
    }
    if (covered != cx.ua_order())
        return "classes cover " + std::to_string(covered) + " of " +
               std::to_string(cx.ua_order()) + " elements";
    std::set<std::string> expected;
    for (const BasicPair& bp : enumerate_basic_pairs(cx.rs, cx.part, cx.p))
        if (canonical_type(cx.rs, cx.part, bp, &weyl)) expected.insert(label_text(bp));
    if (expected != seen) {
        for (const std::string& s : expected)
            if (!seen.count(s)) return "canonical label " + s + " has no class";
        for (const std::string& s : seen)
            if (!expected.count(s)) return "class label " + s + " is not enumerated";
    }
    return "";
}

inline std::string claim_rank_separation(const ContractionContext& cx) {
    std::vector<WeylElement> weyl = enumerate_weyl(cx.rs, cx.part);
    struct Entry {
        std::string canon;
        RankSignature sig;
        std::string text;
    };
    std::vector<Entry> entries;
    for (const BasicPair& bp : enumerate_basic_pairs(cx.rs, cx.part, cx.p)) {
        Entry e;
        if (cx.rs.series == Series::A) {
            CanonicalA cf = canonical_form_A(cx.rs, cx.part, bp.D);
            e.canon = label_text(BasicPair{cf.Dc, {}});
        } else {
            e.canon = label_text(canonical_form_BCD(cx.rs, cx.part, bp, &weyl).canon);
        }
        e.sig = rank_signature(cx.rs, cx.part, bp.D, bp.phi, cx.p);
        e.text = label_text(bp);
        entries.push_back(std::move(e));
    }
    for (size_t a = 0; a < entries.size(); ++a)
        for (size_t b = a + 1; b < entries.size(); ++b) {
            bool same_orbit = entries[a].canon == entries[b].canon;
            bool same_sig = entries[a].sig == entries[b].sig;
            if (same_orbit != same_sig)
                return entries[a].text + " vs " + entries[b].text +
                       (same_orbit ? ": shared orbit, different rank data"
                                   : ": same rank data, different orbits");
        }
    return "";
}

inline std::string claim_coefficient_stabilizer(const ContractionContext& cx,
                                                const std::vector<Superclass>& ua) {
    std::set<std::string> done;
    for (const Superclass& k : ua) {
        std::string key = label_text(BasicPair{k.label.D, {}});
        if (!done.insert(key).second) continue;
        try {
            stabilizer_UaD_A(cx, k.label.D);
        } catch (const std::exception& e) {
            return key + ": " + e.what();
        }
    }
    return "";
}

inline std::string claim_tied_levi_fixer(const ContractionContext& cx,
                                         const std::vector<Superclass>& ua,
                                         unsigned long cap) {
    LinearAction dual = dual_coefficient_action(cx);
    for (const Superclass& k : ua) {
        std::vector<GroupElement> hd = subgroup_H_D(cx, k.label.D);
        std::set<std::string> tied;
        for (const GroupElement& h : hd) tied.insert(h.key());
        LinearForm lam = cx.build_LambdaDphi(k.label.D, k.label.phi);
        Orbit orb = orbit_bfs(cx, cx.ua_code(AlgebraElement{lam.c}), dual, cap);
        std::set<std::string> fixer;
        for (const GroupElement& h : detail::enumerate_torus(cx)) {
            GroupElement hi = cx.group_inv(h);
            bool fixes = true;
            for (unsigned long mc : orb.members) {
                LinearForm f{cx.ua_from_code(mc).c};
                LinearForm step = cx.dual_act(h, f, ContractionContext::Side::Left);
                if (cx.dual_act(hi, step, ContractionContext::Side::Right) != f) {
                    fixes = false;
                    break;
                }
            }
            if (fixes) fixer.insert(h.key());
        }
        if (fixer != tied)
            return label_text(k.label) + ": tied subgroup has " + std::to_string(tied.size()) +
                   " members, the orbit fixer " + std::to_string(fixer.size());
    }
    return "";
}

inline std::string claim_quotient_action(const ContractionContext& cx,
                                         const std::vector<Superclass>& ua, unsigned long cap) {
    std::set<std::string> done;
    for (const Superclass& k : ua) {
        if (!done.insert(label_text(k.label)).second) continue;
        try {
            std::vector<GroupElement> hd = subgroup_H_D(cx, k.label.D);
            DualOrbitIdeal ideal = ideal_uaD_BCD(cx, k.label, cap);
            check_ties_fix_quotient(cx, hd, ideal.perp);
        } catch (const std::exception& e) {
            return label_text(k.label) + ": " + e.what();
        }
    }
    return "";
}

inline std::string claim_pairing_slides(const ContractionContext& cx) {
    std::vector<MatrixFq> gens;
    for (const GroupElement& l : cx.levi_elements()) gens.push_back(cx.alg(l));
    for (unsigned t = 0; t < cx.dim_ua(); ++t) {
        AlgebraElement e = cx.zero_elem();
        e.c[t] = 1;
        gens.push_back(cx.alg(unipotent_from_coords(cx, e)));
    }
    for (unsigned a = 0; a < cx.dim_ua(); ++a) {
        MatrixFq xa = cx.realize(cx.basis_elem(a));
        for (unsigned b = 0; b < cx.dim_ua(); ++b) {
            MatrixFq xb = cx.realize(cx.basis_elem(b));
            for (size_t g = 0; g < gens.size(); ++g) {
                Fq lhs = cx.form_pair(cx.masked_mul(gens[g], xa), xb);
                Fq rhs = cx.form_pair(xa, cx.masked_mul(xb, gens[g]));
                if (lhs != rhs)
                    return "basis pair (" + std::to_string(a) + "," + std::to_string(b) +
                           ") and generator " + std::to_string(g) + " break the slide";
            }
        }
    }
    return "";
}

inline std::string claim_unit_coefficients(const std::vector<Superclass>& ua) {
    for (const Superclass& k : ua)
        for (Fq v : k.label.phi)
            if (v != 1) return label_text(k.label) + " carries a non-unit coefficient";
    return "";
}

}  // namespace detail

// Re-verify, exhaustively at this instance, the structural claims behind the
// construction: canonical labels classify the orbits, rank data separates
// them, the stabilizer subgroups are what they are claimed to be, the tied
// Levi subgroup acts trivially on the labeled quotient, the pairing slides
// across the action, and the odd-orthogonal series only carries unit
// coefficients.
inline VerificationReport check_instance_claims(const ContractionContext& cx,
                                                const SupercharTheory& th,
                                                unsigned long cap = 1000000,
                                                unsigned workers = 0) {
    using detail::timed;
    std::shared_ptr<const std::vector<Superclass>> ua;
    if (!th.group_level && !th.classes.empty())
        ua = std::shared_ptr<const std::vector<Superclass>>(&th.classes,
                                                            [](const void*) {});
    else
        ua = std::make_shared<const std::vector<Superclass>>(superclasses_Ua(cx, cap));

    std::vector<std::function<CheckResult()>> work;
    work.push_back([&cx, ua] {
        return timed("labels-canonical-and-complete",
                     [&cx, ua] { return detail::claim_labels(cx, *ua); });
    });
    work.push_back([&cx] {
        return timed("rank-data-separates-orbits",
                     [&cx] { return detail::claim_rank_separation(cx); });
    });
    if (cx.form == FormKind::None) {
        work.push_back([&cx, ua] {
            return timed("coefficient-stabilizer-matches-brute-force",
                         [&cx, ua] { return detail::claim_coefficient_stabilizer(cx, *ua); });
        });
        work.push_back([&cx, ua, cap] {
            return timed("tied-levi-matches-orbit-fixer",
                         [&cx, ua, cap] { return detail::claim_tied_levi_fixer(cx, *ua, cap); });
        });
    } else {
        work.push_back([&cx, ua, cap] {
            return timed("tied-levi-fixes-quotient",
                         [&cx, ua, cap] { return detail::claim_quotient_action(cx, *ua, cap); });
        });
    }
    work.push_back([&cx] {
        return timed("pairing-slides-across-the-action",
                     [&cx] { return detail::claim_pairing_slides(cx); });
    });
    if (cx.type.series == Series::B) {
        work.push_back([ua] {
            return timed("unit-coefficients-only",
                         [ua] { return detail::claim_unit_coefficients(*ua); });
        });
    }

    return detail::run_checks(work, workers);
}

}  // namespace sct
