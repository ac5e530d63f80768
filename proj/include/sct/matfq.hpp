// Dense matrices over F_p with a signed-label index convention, the two
// transpose-like involutions attached to the bilinear forms, and small
// row-space / kernel utilities used by the orbit machinery.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sct/scalars.hpp"

namespace sct {

// Maps display positions 0..M-1 to row labels.  Labels increase 1..n for the
// general-linear convention and decrease n..1,(0),-1..-n for the signed one.
struct IndexMap {
    unsigned n = 0;
    bool has_zero = false;
    std::vector<int> labels;           // labels[pos]
    std::vector<unsigned> pos_table;   // index (label + n) -> pos

    static IndexMap general_linear(unsigned n) {
        IndexMap m;
        m.n = n;
        for (unsigned i = 1; i <= n; ++i) m.labels.push_back((int)i);
        m.build_table();
        return m;
    }
    static IndexMap signed_labels(unsigned n, bool with_zero) {
        IndexMap m;
        m.n = n;
        m.has_zero = with_zero;
        for (int i = (int)n; i >= 1; --i) m.labels.push_back(i);
        if (with_zero) m.labels.push_back(0);
        for (int i = -1; i >= -(int)n; --i) m.labels.push_back(i);
        m.build_table();
        return m;
    }

    unsigned size() const { return (unsigned)labels.size(); }
    int label_of(unsigned pos) const { return labels.at(pos); }
    unsigned pos_of(int label) const {
        int idx = label + (int)n;
        if (idx < 0 || idx >= (int)pos_table.size() || pos_table[idx] == (unsigned)-1)
            throw std::out_of_range("IndexMap: no such label");
        return pos_table[idx];
    }
    bool has_label(int label) const {
        int idx = label + (int)n;
        return idx >= 0 && idx < (int)pos_table.size() && pos_table[idx] != (unsigned)-1;
    }
    // position of the negated label; defined only for the signed convention
    unsigned neg_pos(unsigned pos) const { return pos_of(-label_of(pos)); }

   private:
    void build_table() {
        pos_table.assign(2 * n + 1, (unsigned)-1);
        for (unsigned pos = 0; pos < labels.size(); ++pos) pos_table[labels[pos] + (int)n] = pos;
    }
};

struct MatrixFq {
    unsigned M = 0;
    unsigned p = 0;
    std::vector<Fq> a;  // row-major, M*M

    MatrixFq() = default;
    MatrixFq(unsigned M_, unsigned p_) : M(M_), p(p_), a(M_ * M_, 0) {}

    static MatrixFq identity(unsigned M, unsigned p) {
        MatrixFq r(M, p);
        for (unsigned i = 0; i < M; ++i) r.at(i, i) = 1;
        return r;
    }
    static MatrixFq unit(unsigned M, unsigned p, unsigned r, unsigned c, Fq v = 1) {
        MatrixFq m(M, p);
        m.at(r, c) = v % p;
        return m;
    }

    Fq& at(unsigned r, unsigned c) { return a[r * M + c]; }
    Fq at(unsigned r, unsigned c) const { return a[r * M + c]; }

    bool is_zero() const {
        for (Fq x : a)
            if (x) return false;
        return true;
    }
    friend bool operator==(const MatrixFq& x, const MatrixFq& y) {
        return x.M == y.M && x.p == y.p && x.a == y.a;
    }
    friend bool operator!=(const MatrixFq& x, const MatrixFq& y) { return !(x == y); }

    MatrixFq& operator+=(const MatrixFq& o) {
        for (size_t i = 0; i < a.size(); ++i) a[i] = fadd(a[i], o.a[i], p);
        return *this;
    }
    MatrixFq& operator-=(const MatrixFq& o) {
        for (size_t i = 0; i < a.size(); ++i) a[i] = fsub(a[i], o.a[i], p);
        return *this;
    }
    friend MatrixFq operator+(MatrixFq x, const MatrixFq& y) { return x += y; }
    friend MatrixFq operator-(MatrixFq x, const MatrixFq& y) { return x -= y; }
    MatrixFq operator-() const {
        MatrixFq r = *this;
        for (Fq& x : r.a) x = fneg(x, p);
        return r;
    }
    MatrixFq scaled(Fq t) const {
        MatrixFq r = *this;
        for (Fq& x : r.a) x = fmul(x, t, p);
        return r;
    }
    friend MatrixFq operator*(const MatrixFq& x, const MatrixFq& y) {
        if (x.M != y.M || x.p != y.p) throw std::logic_error("MatrixFq: shape/field mismatch");
        MatrixFq r(x.M, x.p);
        for (unsigned i = 0; i < x.M; ++i)
            for (unsigned k = 0; k < x.M; ++k) {
                Fq v = x.at(i, k);
                if (!v) continue;
                for (unsigned j = 0; j < x.M; ++j)
                    r.at(i, j) = (Fq)((r.at(i, j) + (unsigned long)v * y.at(k, j)) % x.p);
            }
        return r;
    }

    MatrixFq transpose() const {
        MatrixFq r(M, p);
        for (unsigned i = 0; i < M; ++i)
            for (unsigned j = 0; j < M; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    std::string str() const {
        std::string s;
        for (unsigned i = 0; i < M; ++i) {
            for (unsigned j = 0; j < M; ++j) s += std::to_string(at(i, j)) + (j + 1 < M ? " " : "");
            s += "\n";
        }
        return s;
    }
};

// Flip across the anti-diagonal: rows/cols swap as (i,j) -> (-j,-i) in labels.
inline MatrixFq dagger_orthogonal(const MatrixFq& x) {
    MatrixFq r(x.M, x.p);
    for (unsigned i = 0; i < x.M; ++i)
        for (unsigned j = 0; j < x.M; ++j) r.at(i, j) = x.at(x.M - 1 - j, x.M - 1 - i);
    return r;
}

// Same flip with the sign twist of the alternating form.  M must be even;
// positions below M/2 carry positive labels.
inline MatrixFq dagger_symplectic(const MatrixFq& x) {
    if (x.M % 2) throw std::logic_error("dagger_symplectic: odd size");
    unsigned h = x.M / 2;
    MatrixFq r(x.M, x.p);
    for (unsigned i = 0; i < x.M; ++i)
        for (unsigned j = 0; j < x.M; ++j) {
            Fq v = x.at(x.M - 1 - j, x.M - 1 - i);
            bool flip = (i < h) != (j < h);
            r.at(i, j) = flip ? fneg(v, x.p) : v;
        }
    return r;
}

enum class FormKind { None, Orthogonal, Symplectic };

inline MatrixFq dagger(const MatrixFq& x, FormKind k) {
    switch (k) {
        case FormKind::Orthogonal: return dagger_orthogonal(x);
        case FormKind::Symplectic: return dagger_symplectic(x);
        default: throw std::logic_error("dagger: no form");
    }
}

// Gram matrix of the alternating form: J e_{-i} = sgn(i) e_i in positions.
inline MatrixFq symplectic_gram(unsigned M, unsigned p) {
    if (M % 2) throw std::logic_error("symplectic_gram: odd size");
    MatrixFq j(M, p);
    for (unsigned r = 0; r < M; ++r) j.at(r, M - 1 - r) = (r < M / 2) ? 1 : p - 1;
    return j;
}

inline unsigned rank_of(MatrixFq x) {
    unsigned rank = 0;
    for (unsigned col = 0; col < x.M && rank < x.M; ++col) {
        unsigned piv = rank;
        while (piv < x.M && !x.at(piv, col)) ++piv;
        if (piv == x.M) continue;
        for (unsigned j = 0; j < x.M; ++j) std::swap(x.at(rank, j), x.at(piv, j));
        Fq inv = finv(x.at(rank, col), x.p);
        for (unsigned j = 0; j < x.M; ++j) x.at(rank, j) = fmul(x.at(rank, j), inv, x.p);
        for (unsigned i = 0; i < x.M; ++i) {
            if (i == rank || !x.at(i, col)) continue;
            Fq f = x.at(i, col);
            for (unsigned j = 0; j < x.M; ++j)
                x.at(i, j) = fsub(x.at(i, j), fmul(f, x.at(rank, j), x.p), x.p);
        }
        ++rank;
    }
    return rank;
}

inline std::optional<MatrixFq> try_inverse(MatrixFq x) {
    unsigned M = x.M, p = x.p;
    MatrixFq inv = MatrixFq::identity(M, p);
    for (unsigned col = 0; col < M; ++col) {
        unsigned piv = col;
        while (piv < M && !x.at(piv, col)) ++piv;
        if (piv == M) return std::nullopt;
        for (unsigned j = 0; j < M; ++j) {
            std::swap(x.at(col, j), x.at(piv, j));
            std::swap(inv.at(col, j), inv.at(piv, j));
        }
        Fq d = finv(x.at(col, col), p);
        for (unsigned j = 0; j < M; ++j) {
            x.at(col, j) = fmul(x.at(col, j), d, p);
            inv.at(col, j) = fmul(inv.at(col, j), d, p);
        }
        for (unsigned i = 0; i < M; ++i) {
            if (i == col || !x.at(i, col)) continue;
            Fq f = x.at(i, col);
            for (unsigned j = 0; j < M; ++j) {
                x.at(i, j) = fsub(x.at(i, j), fmul(f, x.at(col, j), p), p);
                inv.at(i, j) = fsub(inv.at(i, j), fmul(f, inv.at(col, j), p), p);
            }
        }
    }
    return inv;
}

inline MatrixFq inverse(const MatrixFq& x) {
    auto r = try_inverse(x);
    if (!r) throw std::domain_error("inverse: singular matrix");
    return *r;
}

inline unsigned submatrix_rank(const MatrixFq& x, const std::vector<unsigned>& rows,
                               const std::vector<unsigned>& cols) {
    unsigned m = (unsigned)std::max(rows.size(), cols.size());
    MatrixFq s(m, x.p);
    for (unsigned i = 0; i < rows.size(); ++i)
        for (unsigned j = 0; j < cols.size(); ++j) s.at(i, j) = x.at(rows[i], cols[j]);
    return rank_of(s);
}

// --- F_p row-space utilities on plain coefficient vectors -------------------

using FqVec = std::vector<Fq>;

inline FqVec vec_sub_scaled(FqVec v, const FqVec& w, Fq t, unsigned p) {
    for (size_t i = 0; i < v.size(); ++i) v[i] = fsub(v[i], fmul(t, w[i], p), p);
    return v;
}

// Incremental reduced row space: rows kept with distinct, normalized pivots.
class FpRowSpace {
   public:
    explicit FpRowSpace(unsigned p) : p_(p) {}

    // reduce v against the basis; nonzero remainder means v was independent
    FqVec reduce(FqVec v) const {
        for (size_t k = 0; k < rows_.size(); ++k)
            if (v[pivots_[k]]) v = vec_sub_scaled(std::move(v), rows_[k], v[pivots_[k]], p_);
        return v;
    }
    bool contains(const FqVec& v) const {
        for (Fq x : reduce(v))
            if (x) return false;
        return true;
    }
    // returns true when the vector enlarged the span
    bool insert(FqVec v) {
        v = reduce(std::move(v));
        size_t piv = 0;
        while (piv < v.size() && !v[piv]) ++piv;
        if (piv == v.size()) return false;
        Fq inv = finv(v[piv], p_);
        for (Fq& x : v) x = fmul(x, inv, p_);
        for (size_t k = 0; k < rows_.size(); ++k)
            if (rows_[k][piv]) rows_[k] = vec_sub_scaled(std::move(rows_[k]), v, rows_[k][piv], p_);
        rows_.push_back(std::move(v));
        pivots_.push_back(piv);
        return true;
    }
    unsigned dim() const { return (unsigned)rows_.size(); }
    const std::vector<FqVec>& basis() const { return rows_; }
    unsigned modulus() const { return p_; }

   private:
    unsigned p_;
    std::vector<FqVec> rows_;
    std::vector<size_t> pivots_;
};

// Basis of { v : rows . v = 0 } inside F_p^width.
inline std::vector<FqVec> kernel_basis(const std::vector<FqVec>& rows, unsigned width, unsigned p) {
    FpRowSpace sp(p);
    for (const auto& r : rows) sp.insert(r);
    // pivot columns of the reduced basis
    std::vector<int> pivot_row(width, -1);
    for (size_t k = 0; k < sp.basis().size(); ++k) {
        const FqVec& r = sp.basis()[k];
        for (unsigned j = 0; j < width; ++j)
            if (r[j]) {
                pivot_row[j] = (int)k;
                break;
            }
    }
    std::vector<FqVec> out;
    for (unsigned fc = 0; fc < width; ++fc) {
        if (pivot_row[fc] >= 0) continue;
        FqVec v(width, 0);
        v[fc] = 1;
        for (unsigned j = 0; j < width; ++j)
            if (pivot_row[j] >= 0) {
                Fq coef = sp.basis()[pivot_row[j]][fc];
                v[j] = fneg(coef, p);
            }
        out.push_back(std::move(v));
    }
    return out;
}

inline Fq dot(const FqVec& a, const FqVec& b, unsigned p) {
    unsigned long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += (unsigned long)a[i] * b[i] % p;
    return (Fq)(s % p);
}

}  // namespace sct
