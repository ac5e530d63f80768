// The parabolic contraction.  Elements live in an M x M matrix split into two
// regions by the block partition: the block-upper region (diagonal blocks
// included) carries honest matrix coefficients, the strict block-lower region
// carries coefficients of linear functionals.  The masked product multiplies
// the matrix parts, pushes the mixed terms into the functional region, and
// kills functional-times-functional terms outright.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sct/roots.hpp"

namespace sct {

struct LieTypeSpec {
    Series series = Series::A;
    unsigned n = 0;
};

// coefficient vector over the basis of the nilpotent space u^a
struct AlgebraElement {
    FqVec c;
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.c == b.c; }
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }
    bool is_zero() const {
        for (Fq x : c)
            if (x) return false;
        return true;
    }
};

// coefficient vector over the dual basis (values on the primal basis)
struct LinearForm {
    FqVec c;
    friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.c == b.c; }
    friend bool operator!=(const LinearForm& a, const LinearForm& b) { return !(a == b); }
};

// g = p(1+mu): invertible block-upper part and functional-region coefficients
struct GroupElement {
    MatrixFq pmat;
    FqVec lam;
    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.pmat == b.pmat && a.lam == b.lam;
    }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
    std::string key() const {
        std::string s;
        s.reserve(pmat.a.size() + lam.size());
        for (Fq x : pmat.a) s.push_back((char)x);
        for (Fq x : lam) s.push_back((char)(x + 64));
        return s;
    }
};

struct ContractionContext {
    LieTypeSpec type;
    PartitionSpec part;
    unsigned p = 0;
    RootSystem rs;
    unsigned M = 0;
    FormKind form = FormKind::None;

    std::vector<Root> dpos, dneg;  // dneg[k] = negative of dpos[k]
    std::vector<MatrixFq> basis;   // realized basis: dpos part then dneg part
    std::vector<uint8_t> inP;      // M*M region mask
    std::map<Root, unsigned> root_index;

    std::vector<GroupElement> gens_P, gens_L, gens_H, gens_Upos, gens_Uneg, gens_Ga;

    mutable std::vector<GroupElement> levi_cache;
    mutable std::unordered_map<std::string, unsigned> levi_index;

    unsigned dim_ua() const { return (unsigned)basis.size(); }
    unsigned half_dim() const { return (unsigned)dpos.size(); }

    // ---- region machinery -------------------------------------------------

    bool cell_in_P(unsigned r, unsigned c) const { return inP[r * M + c]; }

    MatrixFq proj_P(const MatrixFq& x) const {
        MatrixFq r(M, p);
        for (unsigned i = 0; i < M; ++i)
            for (unsigned j = 0; j < M; ++j)
                if (cell_in_P(i, j)) r.at(i, j) = x.at(i, j);
        return r;
    }
    MatrixFq proj_F(const MatrixFq& x) const {
        MatrixFq r(M, p);
        for (unsigned i = 0; i < M; ++i)
            for (unsigned j = 0; j < M; ++j)
                if (!cell_in_P(i, j)) r.at(i, j) = x.at(i, j);
        return r;
    }
    MatrixFq masked_mul(const MatrixFq& a, const MatrixFq& b) const {
        MatrixFq ap = proj_P(a), af = proj_F(a), bp = proj_P(b), bf = proj_F(b);
        return ap * bp + proj_F(ap * bf + af * bp);
    }
    MatrixFq dag(const MatrixFq& x) const { return dagger(x, form); }

    // ---- basis and coordinates --------------------------------------------

    MatrixFq realize(const AlgebraElement& x) const {
        MatrixFq r(M, p);
        for (unsigned k = 0; k < basis.size(); ++k)
            if (x.c[k]) r += basis[k].scaled(x.c[k]);
        return r;
    }
    AlgebraElement try_coords(const MatrixFq& m, bool* ok) const {
        AlgebraElement x;
        x.c.assign(dim_ua(), 0);
        for (unsigned k = 0; k < dim_ua(); ++k) {
            Root rep = (k < half_dim()) ? dpos[k] : dneg[k - half_dim()];
            x.c[k] = m.at(rs.index.pos_of(rep.i), rs.index.pos_of(rep.j));
        }
        *ok = (realize(x) == m);
        return x;
    }
    AlgebraElement coords(const MatrixFq& m) const {
        bool ok = false;
        AlgebraElement x = try_coords(m, &ok);
        if (!ok) throw std::domain_error("coords: matrix is not in the nilpotent span");
        return x;
    }
    AlgebraElement zero_elem() const { return AlgebraElement{FqVec(dim_ua(), 0)}; }
    AlgebraElement basis_elem(unsigned k) const {
        AlgebraElement x = zero_elem();
        x.c[k] = 1;
        return x;
    }
    AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) const {
        AlgebraElement r = a;
        for (unsigned k = 0; k < r.c.size(); ++k) r.c[k] = fadd(r.c[k], b.c[k], p);
        return r;
    }
    AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) const {
        AlgebraElement r = a;
        for (unsigned k = 0; k < r.c.size(); ++k) r.c[k] = fsub(r.c[k], b.c[k], p);
        return r;
    }

    unsigned long ua_code(const AlgebraElement& x) const {
        unsigned long code = 0;
        for (unsigned k = dim_ua(); k-- > 0;) code = code * p + x.c[k];
        return code;
    }
    AlgebraElement ua_from_code(unsigned long code) const {
        AlgebraElement x = zero_elem();
        for (unsigned k = 0; k < dim_ua(); ++k) {
            x.c[k] = (Fq)(code % p);
            code /= p;
        }
        return x;
    }
    unsigned long ua_order() const {
        unsigned long t = 1;
        for (unsigned k = 0; k < dim_ua(); ++k) t *= p;
        return t;
    }

    // ---- group elements ---------------------------------------------------

    MatrixFq lam_matrix(const FqVec& lam) const {
        MatrixFq r(M, p);
        for (unsigned k = 0; k < half_dim(); ++k)
            if (lam[k]) r += basis[half_dim() + k].scaled(lam[k]);
        return r;
    }
    FqVec lam_coords(const MatrixFq& mu) const {
        FqVec v(half_dim(), 0);
        for (unsigned k = 0; k < half_dim(); ++k)
            v[k] = mu.at(rs.index.pos_of(dneg[k].i), rs.index.pos_of(dneg[k].j));
        if (lam_matrix(v) != mu) throw std::domain_error("lam_coords: not in the functional span");
        return v;
    }

    GroupElement group_identity() const {
        return GroupElement{MatrixFq::identity(M, p), FqVec(half_dim(), 0)};
    }
    MatrixFq alg(const GroupElement& g) const {
        return g.pmat + proj_F(g.pmat * lam_matrix(g.lam));
    }
    GroupElement from_alg(const MatrixFq& x) const {
        MatrixFq pm = proj_P(x);
        auto pinv = try_inverse(pm);
        if (!pinv) throw std::domain_error("from_alg: singular parabolic part");
        MatrixFq mu = proj_F(*pinv * proj_F(x));
        return GroupElement{pm, lam_coords(mu)};
    }
    GroupElement group_mul(const GroupElement& a, const GroupElement& b) const {
        MatrixFq p2inv = inverse(b.pmat);
        MatrixFq mu = proj_F(p2inv * lam_matrix(a.lam) * b.pmat) + lam_matrix(b.lam);
        return GroupElement{a.pmat * b.pmat, lam_coords(proj_F(mu))};
    }
    GroupElement group_inv(const GroupElement& g) const {
        MatrixFq mu = proj_F(g.pmat * lam_matrix(g.lam) * inverse(g.pmat));
        FqVec v = lam_coords(mu);
        for (Fq& x : v) x = fneg(x, p);
        return GroupElement{inverse(g.pmat), v};
    }
    bool is_isometry(const GroupElement& g) const {
        if (form == FormKind::None) return true;
        MatrixFq a = alg(g);
        return masked_mul(a, dag(a)) == MatrixFq::identity(M, p);
    }

    // Levi part: the block-diagonal slice of the parabolic factor
    MatrixFq block_diag(const MatrixFq& x) const {
        MatrixFq r(M, p);
        for (unsigned i = 0; i < M; ++i)
            for (unsigned j = 0; j < M; ++j)
                if (part.pos_block[i] == part.pos_block[j]) r.at(i, j) = x.at(i, j);
        return r;
    }
    GroupElement levi_part(const GroupElement& g) const {
        return GroupElement{block_diag(g.pmat), FqVec(half_dim(), 0)};
    }
    GroupElement unipotent_part(const GroupElement& g) const {
        return group_mul(group_inv(levi_part(g)), g);
    }
    bool in_Ua(const GroupElement& g) const {
        return block_diag(g.pmat) == MatrixFq::identity(M, p);
    }

    // ---- Cayley transform -------------------------------------------------

    // series for (1 - Y/2)^{-1} restricted to nilpotent Y
    MatrixFq nil_geometric(const MatrixFq& y, Fq half) const {
        MatrixFq acc = MatrixFq::identity(M, p);
        MatrixFq pow = MatrixFq::identity(M, p);
        for (unsigned k = 1; k <= 2 * M + 2; ++k) {
            pow = masked_mul(pow, y.scaled(half));
            if (pow.is_zero()) return acc;
            acc += pow;
        }
        throw std::domain_error("nil_geometric: input is not nilpotent");
    }

    // f(u) = 2(u-1)(u+1)^{-1} on unipotent group elements
    AlgebraElement cayley(const GroupElement& u) const {
        if (!in_Ua(u)) throw std::domain_error("cayley: element is not unipotent");
        MatrixFq X = alg(u) - MatrixFq::identity(M, p);
        Fq half = finv(2 % p, p);
        // (2+X)^{-1} = (1/2)(1+X/2)^{-1}
        MatrixFq inv2px = nil_geometric(-X, half).scaled(half);
        return coords(masked_mul(X.scaled(2 % p), inv2px));
    }
    // truncated series  sum (-1)^k X^{k+1} / 2^k
    AlgebraElement cayley_series(const GroupElement& u) const {
        if (!in_Ua(u)) throw std::domain_error("cayley_series: element is not unipotent");
        MatrixFq X = alg(u) - MatrixFq::identity(M, p);
        Fq half = finv(2 % p, p);
        MatrixFq acc(M, p), term = X;
        Fq coef = 1;
        for (unsigned k = 0; k <= 2 * M + 2; ++k) {
            acc += term.scaled(coef);
            term = masked_mul(term, X);
            if (term.is_zero()) return coords(acc);
            coef = fneg(fmul(coef, half, p), p);
        }
        throw std::domain_error("cayley_series: not nilpotent");
    }
    // f^{-1}(Y) = (2+Y)(2-Y)^{-1}
    GroupElement cayley_inv(const AlgebraElement& y) const {
        MatrixFq Y = realize(y);
        Fq half = finv(2 % p, p);
        MatrixFq inv2my = nil_geometric(Y, half).scaled(half);
        MatrixFq two = MatrixFq::identity(M, p).scaled(2 % p);
        GroupElement g = from_alg(masked_mul(two + Y, inv2my));
        if (!in_Ua(g)) throw std::domain_error("cayley_inv: image is not unipotent");
        return g;
    }

    // ---- actions ----------------------------------------------------------

    AlgebraElement act_two_sided(const GroupElement& a, const AlgebraElement& x,
                                 const GroupElement& b) const {
        return coords(masked_mul(masked_mul(alg(a), realize(x)), alg(b)));
    }
    AlgebraElement act_dagger(const GroupElement& g, const AlgebraElement& x) const {
        MatrixFq ga = alg(g);
        return coords(masked_mul(masked_mul(ga, realize(x)), dag(ga)));
    }
    Fq eval(const LinearForm& f, const AlgebraElement& x) const { return dot(f.c, x.c, p); }

    // dual of left/right multiplication: (a.f)(x) = f(xa), (f.b)(x) = f(bx)
    enum class Side { Left, Right };
    LinearForm dual_act(const GroupElement& g, const LinearForm& f, Side side) const {
        LinearForm r;
        r.c.assign(dim_ua(), 0);
        MatrixFq ga = alg(g);
        for (unsigned k = 0; k < dim_ua(); ++k) {
            MatrixFq img = (side == Side::Left) ? masked_mul(basis[k], ga)
                                                : masked_mul(ga, basis[k]);
            r.c[k] = eval(f, coords(img));
        }
        return r;
    }
    // dual of the dagger action: (g.f)(x) = f(g^dagger x g)
    LinearForm dual_act_dagger(const GroupElement& g, const LinearForm& f) const {
        LinearForm r;
        r.c.assign(dim_ua(), 0);
        MatrixFq ga = alg(g);
        MatrixFq gd = dag(ga);
        for (unsigned k = 0; k < dim_ua(); ++k)
            r.c[k] = eval(f, coords(masked_mul(masked_mul(gd, basis[k]), ga)));
        return r;
    }

    // ---- bilinear form (matrix-coefficient vs functional pairing) ---------

    Fq form_pair(const MatrixFq& x1, const MatrixFq& x2) const {
        MatrixFq t = proj_F(x2) * proj_P(x1) + proj_F(x1) * proj_P(x2);
        unsigned long s = 0;
        for (unsigned i = 0; i < M; ++i) s += t.at(i, i);
        return (Fq)(s % p);
    }
    Fq bilinear_form(const AlgebraElement& x1, const AlgebraElement& x2) const {
        return form_pair(realize(x1), realize(x2));
    }

    // ---- placements -------------------------------------------------------

    AlgebraElement build_XDphi(const RookPlacement& D, const std::vector<Fq>& phi) const {
        AlgebraElement x = zero_elem();
        for (unsigned t = 0; t < D.size(); ++t) {
            auto it = root_index.find(D[t]);
            if (it == root_index.end())
                throw std::invalid_argument("build_XDphi: root outside the nilpotent region");
            x.c[it->second] = fadd(x.c[it->second], phi.empty() ? 1 : phi[t], p);
        }
        return x;
    }
    LinearForm build_LambdaDphi(const RookPlacement& D, const std::vector<Fq>& phi) const {
        LinearForm f;
        f.c.assign(dim_ua(), 0);
        for (unsigned t = 0; t < D.size(); ++t) {
            auto it = root_index.find(D[t]);
            if (it == root_index.end())
                throw std::invalid_argument("build_LambdaDphi: root outside the nilpotent region");
            f.c[it->second] = fadd(f.c[it->second], phi.empty() ? 1 : phi[t], p);
        }
        return f;
    }

    // ---- doubled realization (general-linear series only) -----------------

    MatrixFq realize_doubled(const AlgebraElement& x) const {
        if (type.series != Series::A) throw std::logic_error("realize_doubled: series A only");
        unsigned n = type.n;
        MatrixFq r(2 * n, p);
        for (unsigned k = 0; k < half_dim(); ++k) {
            unsigned i = rs.index.pos_of(dpos[k].i), j = rs.index.pos_of(dpos[k].j);
            r.at(i, j) = fadd(r.at(i, j), x.c[k], p);
            r.at(n + i, n + j) = fadd(r.at(n + i, n + j), x.c[k], p);
            unsigned fi = rs.index.pos_of(dneg[k].i), fj = rs.index.pos_of(dneg[k].j);
            r.at(fi, n + fj) = fadd(r.at(fi, n + fj), x.c[half_dim() + k], p);
        }
        return r;
    }
    // rank over rows and columns covering blocks k..m of the matrix half
    unsigned doubled_rank_upper(const AlgebraElement& x, unsigned k, unsigned m) const {
        MatrixFq d = realize_doubled(x);
        std::vector<unsigned> idx;
        for (unsigned pos = 0; pos < type.n; ++pos) {
            unsigned b = part.pos_block[pos] + 1;
            if (b >= k && b <= m) idx.push_back(pos);
        }
        return submatrix_rank(d, idx, idx);
    }
    // rank over rows/columns covering blocks k..l of the matrix half plus
    // blocks 1..m of the functional half
    unsigned doubled_rank_lower(const AlgebraElement& x, unsigned k, unsigned m) const {
        MatrixFq d = realize_doubled(x);
        std::vector<unsigned> idx;
        for (unsigned pos = 0; pos < type.n; ++pos)
            if (part.pos_block[pos] + 1 >= k) idx.push_back(pos);
        for (unsigned pos = 0; pos < type.n; ++pos)
            if (part.pos_block[pos] + 1 <= m) idx.push_back(type.n + pos);
        return submatrix_rank(d, idx, idx);
    }

    // ---- Levi enumeration -------------------------------------------------

    const std::vector<GroupElement>& levi_elements(unsigned cap = 2000000) const {
        if (!levi_cache.empty()) return levi_cache;
        std::vector<GroupElement> frontier{group_identity()};
        levi_index[frontier[0].key()] = 0;
        levi_cache.push_back(frontier[0]);
        while (!frontier.empty()) {
            std::vector<GroupElement> next;
            for (const GroupElement& g : frontier)
                for (const GroupElement& s : gens_L) {
                    GroupElement h = group_mul(g, s);
                    auto [it, fresh] = levi_index.try_emplace(h.key(), (unsigned)levi_cache.size());
                    if (fresh) {
                        levi_cache.push_back(h);
                        next.push_back(h);
                        if (levi_cache.size() > cap)
                            throw std::runtime_error("levi_elements: cap exceeded");
                    }
                }
            frontier = std::move(next);
        }
        return levi_cache;
    }
    unsigned levi_order() const { return (unsigned)levi_elements().size(); }
    unsigned levi_index_of(const GroupElement& l) const {
        levi_elements();
        auto it = levi_index.find(l.key());
        if (it == levi_index.end()) throw std::domain_error("levi_index_of: not a Levi element");
        return it->second;
    }
    unsigned long group_order() const { return (unsigned long)levi_order() * ua_order(); }
};

namespace detail {

// mirror coefficient solved from the antisymmetry constraint on the root pair
inline MatrixFq root_vector_matrix(const RootSystem& rs, const PartitionSpec&, unsigned p,
                                   FormKind form, unsigned M, Root rep) {
    MatrixFq e = MatrixFq::unit(M, p, rs.index.pos_of(rep.i), rs.index.pos_of(rep.j));
    if (form == FormKind::None) return e;
    Root mir = rs.prime(rep);
    MatrixFq d = dagger(e, form);
    if (mir == rep) {
        if (d != -e) throw std::logic_error("root vector: self-mirror cell is not antisymmetric");
        return e;
    }
    Fq s = d.at(rs.index.pos_of(mir.i), rs.index.pos_of(mir.j));
    MatrixFq v = e + MatrixFq::unit(M, p, rs.index.pos_of(mir.i), rs.index.pos_of(mir.j), fneg(s, p));
    if (dagger(v, form) != -v) throw std::logic_error("root vector: antisymmetry failed");
    return v;
}

}  // namespace detail

inline ContractionContext build_context(LieTypeSpec type, PartitionSpec part, unsigned p) {
    PrimeModulus pm(p);
    ContractionContext cx;
    cx.type = type;
    cx.part = part;
    cx.p = p;
    cx.rs = build_root_system(type.series, type.n);
    cx.M = cx.rs.index.size();
    cx.form = type.series == Series::A      ? FormKind::None
              : type.series == Series::C    ? FormKind::Symplectic
                                            : FormKind::Orthogonal;
    if (part.series != type.series || part.pos_block.size() != cx.M)
        throw std::invalid_argument("build_context: partition does not match the type");

    for (unsigned r = 0; r < cx.M; ++r)
        for (unsigned c = 0; c < cx.M; ++c)
            cx.inP.push_back(part.pos_block[r] <= part.pos_block[c] ? 1 : 0);

    cx.dpos = sorted_placement(delta_ua(cx.rs, part));
    for (Root a : cx.dpos) cx.dneg.push_back(cx.rs.negative(a));
    for (unsigned k = 0; k < cx.dpos.size(); ++k) cx.root_index[cx.dpos[k]] = k;
    for (unsigned k = 0; k < cx.dneg.size(); ++k)
        cx.root_index[cx.dneg[k]] = (unsigned)cx.dpos.size() + k;
    for (Root a : cx.dpos)
        cx.basis.push_back(detail::root_vector_matrix(cx.rs, part, p, cx.form, cx.M, a));
    for (Root a : cx.dneg)
        cx.basis.push_back(detail::root_vector_matrix(cx.rs, part, p, cx.form, cx.M, a));

    // generators
    Fq prim = primitive_root(p);
    auto push_gen = [&](std::vector<GroupElement>& dst, const GroupElement& g) { dst.push_back(g); };

    if (type.series == Series::A) {
        // torus: one primitive scalar per position
        for (unsigned i = 0; i < cx.M; ++i) {
            MatrixFq t = MatrixFq::identity(cx.M, p);
            t.at(i, i) = prim;
            GroupElement g{t, FqVec(cx.half_dim(), 0)};
            push_gen(cx.gens_H, g);
            push_gen(cx.gens_L, g);
            push_gen(cx.gens_P, g);
        }
        // parabolic root cells: every off-diagonal cell weakly above the block diagonal
        for (unsigned i = 0; i < cx.M; ++i)
            for (unsigned j = 0; j < cx.M; ++j) {
                if (i == j || !cx.cell_in_P(i, j)) continue;
                MatrixFq t = MatrixFq::identity(cx.M, p);
                t.at(i, j) = 1;
                GroupElement g{t, FqVec(cx.half_dim(), 0)};
                push_gen(cx.gens_P, g);
                if (part.pos_block[i] == part.pos_block[j])
                    push_gen(cx.gens_L, g);
                else
                    push_gen(cx.gens_Upos, g);
            }
    } else {
        // paired torus generators t, t^{-1} on mirrored positions
        for (unsigned i = 1; i <= type.n; ++i) {
            MatrixFq t = MatrixFq::identity(cx.M, p);
            t.at(cx.rs.index.pos_of((int)i), cx.rs.index.pos_of((int)i)) = prim;
            t.at(cx.rs.index.pos_of(-(int)i), cx.rs.index.pos_of(-(int)i)) = finv(prim, p);
            GroupElement g{t, FqVec(cx.half_dim(), 0)};
            push_gen(cx.gens_H, g);
            push_gen(cx.gens_L, g);
            push_gen(cx.gens_P, g);
        }
        if (type.series == Series::B) {
            // the reflection on the middle coordinate: the other component
            MatrixFq t = MatrixFq::identity(cx.M, p);
            t.at(cx.rs.index.pos_of(0), cx.rs.index.pos_of(0)) = p - 1;
            GroupElement g{t, FqVec(cx.half_dim(), 0)};
            push_gen(cx.gens_H, g);
            push_gen(cx.gens_L, g);
            push_gen(cx.gens_P, g);
        }
        // exponentials of root vectors whose cells sit weakly block-above
        for (Root a : cx.rs.roots) {
            unsigned ri = cx.rs.index.pos_of(a.i), rj = cx.rs.index.pos_of(a.j);
            if (!cx.cell_in_P(ri, rj)) continue;
            MatrixFq v = detail::root_vector_matrix(cx.rs, part, p, cx.form, cx.M, a);
            MatrixFq acc = MatrixFq::identity(cx.M, p);
            MatrixFq pow = MatrixFq::identity(cx.M, p);
            Fq fact = 1;
            for (unsigned k = 1; k < p; ++k) {
                pow = cx.masked_mul(pow, v);
                if (pow.is_zero()) break;
                fact = fmul(fact, k % p, p);
                acc += pow.scaled(finv(fact, p));
            }
            // the truncated series inverts cleanly as long as v^p vanishes
            if (!pow.is_zero() && !cx.masked_mul(pow, v).is_zero())
                throw std::logic_error("build_context: root vector not nilpotent");
            GroupElement g = cx.from_alg(acc);
            push_gen(cx.gens_P, g);
            if (part.pos_block[ri] == part.pos_block[rj])
                push_gen(cx.gens_L, g);
            else
                push_gen(cx.gens_Upos, g);
        }
    }
    // functional-region translations: 1 + basis vector, one per negative root
    for (unsigned k = 0; k < cx.half_dim(); ++k) {
        FqVec lam(cx.half_dim(), 0);
        lam[k] = 1;
        push_gen(cx.gens_Uneg, GroupElement{MatrixFq::identity(cx.M, p), lam});
    }
    for (const GroupElement& g : cx.gens_P) push_gen(cx.gens_Ga, g);
    for (const GroupElement& g : cx.gens_Uneg) push_gen(cx.gens_Ga, g);

    for (const GroupElement& g : cx.gens_Ga)
        if (!cx.is_isometry(g))
            throw std::logic_error("build_context: generator fails the unitarity membership");
    return cx;
}

inline ContractionContext build_context(Series s, unsigned n, std::vector<unsigned> parts,
                                        unsigned p) {
    return build_context(LieTypeSpec{s, n}, make_partition(s, n, std::move(parts)), p);
}

// Two-sided ideal property of the within-block functional cells inside the
// full flag contraction: mu x = x nu = 0 for strictly block-upper x, and all
// one-sided products land back in the within-block functional span.
inline bool flag_ideal_check(Series s, unsigned n, const PartitionSpec& overlay, unsigned p) {
    if (s != Series::A) throw std::logic_error("flag_ideal_check: series A only");
    ContractionContext cx = build_context(LieTypeSpec{s, n}, borel_partition(s, n), p);
    unsigned M = cx.M;
    auto overlay_block = [&](unsigned pos) { return overlay.pos_block[pos]; };
    // within-block functional cells of the overlay partition
    auto is_levi_functional = [&](unsigned r, unsigned c) {
        return r > c && overlay_block(r) == overlay_block(c);
    };
    auto in_levi_span = [&](const MatrixFq& x) {
        for (unsigned r = 0; r < M; ++r)
            for (unsigned c = 0; c < M; ++c)
                if (x.at(r, c) && !is_levi_functional(r, c)) return false;
        return true;
    };
    for (unsigned r1 = 0; r1 < M; ++r1)
        for (unsigned c1 = 0; c1 < M; ++c1) {
            if (!is_levi_functional(r1, c1)) continue;
            MatrixFq mu = MatrixFq::unit(M, p, r1, c1);
            for (unsigned r2 = 0; r2 < M; ++r2)
                for (unsigned c2 = 0; c2 < M; ++c2) {
                    if (r2 == c2) continue;  // cells of the flag contraction only
                    MatrixFq b = MatrixFq::unit(M, p, r2, c2);
                    if (!in_levi_span(cx.masked_mul(mu, b))) return false;
                    if (!in_levi_span(cx.masked_mul(b, mu))) return false;
                    // strictly block-upper x must annihilate entirely
                    if (r2 < c2 && overlay_block(r2) < overlay_block(c2)) {
                        if (!cx.masked_mul(mu, b).is_zero()) return false;
                        if (!cx.masked_mul(b, mu).is_zero()) return false;
                    }
                }
        }
    return true;
}

}  // namespace sct
