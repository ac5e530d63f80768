// Generic machinery for small finite groups: cached multiplication tables,
// conjugacy classes, exact character tables, and class-function pairings.
// Tables come from the class-algebra eigenvector method over the cyclotomic
// field of the group exponent; abelian groups take a direct dual-group path.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sct/scalars.hpp"

namespace sct {

// ---- groups as index tables -------------------------------------------------

// A fully materialized finite group: canonical element keys, a cached index
// multiplication table, identity and inverses.  Closure is checked while the
// table is built.
struct SmallGroup {
    unsigned n = 0;
    std::vector<std::string> keys;
    unsigned identity = 0;
    std::vector<unsigned> inv;
    std::shared_ptr<const std::vector<uint16_t>> table;

    unsigned mul(unsigned i, unsigned j) const { return (*table)[(size_t)i * n + j]; }
};

template <typename E, typename Mul, typename Key>
inline SmallGroup make_small_group(const std::vector<E>& elements, Mul&& mult, Key&& key,
                                   unsigned cap = 2048) {
    SmallGroup g;
    g.n = (unsigned)elements.size();
    if (g.n == 0) throw std::invalid_argument("make_small_group: empty element list");
    if (g.n > cap)
        throw std::invalid_argument(
            "make_small_group: order " + std::to_string(g.n) + " exceeds the cap " +
            std::to_string(cap) + "; raise it, shrink the instance, or use the abelian path");
    std::unordered_map<std::string, unsigned> index;
    for (unsigned i = 0; i < g.n; ++i) {
        g.keys.push_back(key(elements[i]));
        if (!index.emplace(g.keys.back(), i).second)
            throw std::invalid_argument("make_small_group: duplicate element");
    }
    auto table = std::make_shared<std::vector<uint16_t>>((size_t)g.n * g.n);
    for (unsigned i = 0; i < g.n; ++i)
        for (unsigned j = 0; j < g.n; ++j) {
            auto it = index.find(key(mult(elements[i], elements[j])));
            if (it == index.end())
                throw std::invalid_argument("make_small_group: products leave the element list");
            (*table)[(size_t)i * g.n + j] = (uint16_t)it->second;
        }
    g.table = table;

    bool found = false;
    for (unsigned e = 0; e < g.n && !found; ++e) {
        bool ok = true;
        for (unsigned j = 0; j < g.n && ok; ++j)
            ok = g.mul(e, j) == j && g.mul(j, e) == j;
        if (ok) {
            g.identity = e;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("make_small_group: no identity element");
    g.inv.assign(g.n, g.n);
    for (unsigned i = 0; i < g.n; ++i)
        for (unsigned j = 0; j < g.n; ++j)
            if (g.mul(i, j) == g.identity) g.inv[i] = j;
    for (unsigned i = 0; i < g.n; ++i)
        if (g.inv[i] == g.n) throw std::invalid_argument("make_small_group: missing inverse");
    return g;
}

struct GroupClasses {
    std::vector<unsigned> class_of;
    std::vector<std::vector<unsigned>> classes;  // identity class first, then by least member
    std::vector<unsigned> reps;
    std::vector<unsigned> sizes;
};

inline GroupClasses small_group_classes(const SmallGroup& g) {
    GroupClasses out;
    out.class_of.assign(g.n, g.n);
    std::vector<std::vector<unsigned>> found;
    for (unsigned i = 0; i < g.n; ++i) {
        if (out.class_of[i] != g.n) continue;
        std::set<unsigned> cls;
        for (unsigned a = 0; a < g.n; ++a) cls.insert(g.mul(g.mul(a, i), g.inv[a]));
        unsigned id = (unsigned)found.size();
        found.push_back({cls.begin(), cls.end()});
        for (unsigned x : found.back()) out.class_of[x] = id;
    }
    std::vector<unsigned> order(found.size());
    std::iota(order.begin(), order.end(), 0);
    unsigned idc = out.class_of[g.identity];
    std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
        if ((a == idc) != (b == idc)) return a == idc;
        return found[a].front() < found[b].front();
    });
    for (unsigned pos = 0; pos < order.size(); ++pos) {
        out.classes.push_back(found[order[pos]]);
        out.reps.push_back(out.classes.back().front());
        out.sizes.push_back((unsigned)out.classes.back().size());
        for (unsigned x : out.classes.back()) out.class_of[x] = pos;
    }
    return out;
}

inline unsigned element_order(const SmallGroup& g, unsigned i) {
    unsigned at = i, ord = 1;
    while (at != g.identity) {
        at = g.mul(at, i);
        ++ord;
        if (ord > g.n) throw std::logic_error("element_order: no finite order");
    }
    return ord;
}

inline unsigned group_exponent(const SmallGroup& g) {
    unsigned long m = 1;
    for (unsigned i = 0; i < g.n; ++i) m = std::lcm(m, (unsigned long)element_order(g, i));
    return (unsigned)m;
}

// ---- character tables ------------------------------------------------------

struct CharacterTable {
    std::shared_ptr<const CycloField> field;  // Q(zeta_m), m the group exponent
    GroupClasses cls;
    std::vector<std::vector<CycloNumber>> chi;  // one row per irreducible, class-indexed
    std::vector<unsigned> degree;
    unsigned long order = 0;

    unsigned k() const { return (unsigned)cls.classes.size(); }
};

// (1/|G|) sum_i |C_i| f_i conj(g_i) over class-indexed functions
inline CycloNumber inner_product_classes(const std::vector<CycloNumber>& f,
                                         const std::vector<CycloNumber>& g,
                                         const std::vector<unsigned>& sizes) {
    if (f.size() != sizes.size() || g.size() != sizes.size())
        throw std::invalid_argument("inner_product_classes: length mismatch");
    unsigned long order = 0;
    for (unsigned s : sizes) order += s;
    CycloNumber acc(*f.at(0).F);
    for (unsigned i = 0; i < sizes.size(); ++i)
        acc += (f[i] * g[i].conj()).scaled(mpq_class(sizes[i]));
    return acc.scaled(mpq_class(1) / mpq_class((unsigned long)order));
}

inline CycloNumber inner_product(const std::vector<CycloNumber>& f,
                                 const std::vector<CycloNumber>& g, const CharacterTable& t) {
    return inner_product_classes(f, g, t.cls.sizes);
}

// fold an element-indexed function to class values, insisting on constancy
inline std::vector<CycloNumber> to_class_function(const std::vector<CycloNumber>& by_element,
                                                  const GroupClasses& cls) {
    std::vector<CycloNumber> out;
    for (const std::vector<unsigned>& c : cls.classes) {
        out.push_back(by_element.at(c.front()));
        for (unsigned x : c)
            if (by_element.at(x) != out.back())
                throw std::invalid_argument("to_class_function: not constant on a class");
    }
    return out;
}

inline std::vector<CycloNumber> decompose(const std::vector<CycloNumber>& f,
                                          const CharacterTable& t) {
    std::vector<CycloNumber> out;
    for (const std::vector<CycloNumber>& row : t.chi) out.push_back(inner_product(f, row, t));
    return out;
}

inline bool nonneg_integer_vector(const std::vector<CycloNumber>& v) {
    for (const CycloNumber& x : v) {
        if (!x.is_rational()) return false;
        mpq_class r = x.rational_part();
        if (r.get_den() != 1 || r < 0) return false;
    }
    return true;
}

namespace detail {

// ---- modular prefilter for eigenvalue candidates ---------------------------

inline unsigned long mulmod_u64(unsigned long a, unsigned long b, unsigned long m) {
    return (unsigned long)((__uint128_t)a * b % m);
}
inline unsigned long powmod_u64(unsigned long a, unsigned long e, unsigned long m) {
    unsigned long r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}
inline bool is_prime_u64(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
        if (n % p == 0) return n == p;
    }
    unsigned long d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
        unsigned long x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<unsigned> prime_factors(unsigned m) {
    std::vector<unsigned> out;
    for (unsigned q = 2; q * q <= m; ++q)
        if (m % q == 0) {
            out.push_back(q);
            while (m % q == 0) m /= q;
        }
    if (m > 1) out.push_back(m);
    return out;
}

// F_ell with a fixed primitive m-th root: a sound homomorphic image of Z[zeta_m]
struct ModMap {
    unsigned long ell = 0;
    std::vector<unsigned long> zeta_pow;  // images of zeta^0..zeta^{m-1}

    explicit ModMap(unsigned m) {
        unsigned long start = (3ul << 30);
        unsigned long c = start - start % m + 1;
        std::vector<unsigned> qs = prime_factors(m);
        while (true) {
            c += m;
            if (!is_prime_u64(c)) continue;
            bool ok = false;
            unsigned long r = 0;
            for (unsigned long a = 2; a < 60 && !ok; ++a) {
                r = powmod_u64(a, (c - 1) / m, c);
                ok = true;
                for (unsigned q : qs)
                    if (powmod_u64(r, m / q, c) == 1) ok = false;
            }
            if (!ok) continue;
            ell = c;
            zeta_pow.assign(m, 1);
            for (unsigned k = 1; k < m; ++k) zeta_pow[k] = mulmod_u64(zeta_pow[k - 1], r, c);
            return;
        }
    }

    unsigned long map_mpq(const mpq_class& q) const {
        mpz_class num = q.get_num() % mpz_class((unsigned long)ell);
        mpz_class den = q.get_den() % mpz_class((unsigned long)ell);
        unsigned long n = mpz_class(num < 0 ? num + (unsigned long)ell : num).get_ui();
        unsigned long d = den.get_ui();
        if (d == 0) throw std::logic_error("ModMap: denominator collapses modulo the filter prime");
        return mulmod_u64(n, powmod_u64(d, ell - 2, ell), ell);
    }
    unsigned long map_cyclo(const CycloNumber& x) const {
        unsigned long acc = 0;
        for (unsigned i = 0; i < x.c.size(); ++i)
            acc = (acc + mulmod_u64(map_mpq(x.c[i]), zeta_pow[i], ell)) % ell;
        return acc;
    }
};

inline unsigned long det_mod(std::vector<std::vector<unsigned long>> a, unsigned long ell) {
    unsigned v = (unsigned)a.size();
    unsigned long det = 1;
    for (unsigned col = 0; col < v; ++col) {
        unsigned piv = v;
        for (unsigned r = col; r < v; ++r)
            if (a[r][col]) {
                piv = r;
                break;
            }
        if (piv == v) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = ell - det;
        }
        det = mulmod_u64(det, a[col][col], ell);
        unsigned long pin = powmod_u64(a[col][col], ell - 2, ell);
        for (unsigned r = col + 1; r < v; ++r) {
            if (!a[r][col]) continue;
            unsigned long f = mulmod_u64(a[r][col], pin, ell);
            for (unsigned cidx = col; cidx < v; ++cidx)
                a[r][cidx] = (a[r][cidx] + ell - mulmod_u64(f, a[col][cidx], ell)) % ell;
        }
    }
    return det % ell;
}

// ---- exact linear algebra over the cyclotomic field ------------------------

using CycloVec = std::vector<CycloNumber>;
using CycloMat = std::vector<CycloVec>;

inline CycloVec cyclo_zero_vec(const CycloField& F, unsigned n) {
    return CycloVec(n, CycloNumber(F));
}

// null space basis of a square matrix, plain Gauss
inline std::vector<CycloVec> kernel_cyclo(CycloMat a, const CycloField& F) {
    unsigned v = (unsigned)a.size();
    std::vector<int> pivot_of_col(v, -1);
    unsigned row = 0;
    for (unsigned col = 0; col < v && row < v; ++col) {
        unsigned piv = v;
        for (unsigned r = row; r < v; ++r)
            if (!a[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv == v) continue;
        std::swap(a[piv], a[row]);
        CycloNumber inv = cyclo_inv(a[row][col]);
        for (unsigned c = col; c < v; ++c) a[row][c] *= inv;
        for (unsigned r = 0; r < v; ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            CycloNumber f = a[r][col];
            for (unsigned c = col; c < v; ++c) a[r][c] -= f * a[row][c];
        }
        pivot_of_col[col] = (int)row;
        ++row;
    }
    std::vector<CycloVec> basis;
    for (unsigned col = 0; col < v; ++col) {
        if (pivot_of_col[col] != -1) continue;
        CycloVec x = cyclo_zero_vec(F, v);
        x[col] = CycloNumber(F, 1);
        for (unsigned c = 0; c < v; ++c)
            if (pivot_of_col[c] != -1) x[c] = -a[(unsigned)pivot_of_col[c]][col];
        basis.push_back(std::move(x));
    }
    return basis;
}

// coordinates of targets in the span of the basis columns; throws if outside
inline CycloMat solve_in_basis(const std::vector<CycloVec>& basis,
                               const std::vector<CycloVec>& targets, const CycloField& F) {
    unsigned k = (unsigned)basis[0].size(), v = (unsigned)basis.size(),
             t = (unsigned)targets.size();
    CycloMat a(k, cyclo_zero_vec(F, v + t));
    for (unsigned r = 0; r < k; ++r) {
        for (unsigned c = 0; c < v; ++c) a[r][c] = basis[c][r];
        for (unsigned c = 0; c < t; ++c) a[r][v + c] = targets[c][r];
    }
    std::vector<int> pivot_row_of(v, -1);
    unsigned row = 0;
    for (unsigned col = 0; col < v && row < k; ++col) {
        unsigned piv = k;
        for (unsigned r = row; r < k; ++r)
            if (!a[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv == k) throw std::logic_error("solve_in_basis: dependent basis");
        std::swap(a[piv], a[row]);
        CycloNumber inv = cyclo_inv(a[row][col]);
        for (unsigned c = col; c < v + t; ++c) a[row][c] *= inv;
        for (unsigned r = 0; r < k; ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            CycloNumber f = a[r][col];
            for (unsigned c = col; c < v + t; ++c) a[r][c] -= f * a[row][c];
        }
        pivot_row_of[col] = (int)row;
        ++row;
    }
    for (unsigned r = row; r < k; ++r)
        for (unsigned c = v; c < v + t; ++c)
            if (!a[r][c].is_zero())
                throw std::logic_error("solve_in_basis: target outside the span");
    CycloMat coords(t, cyclo_zero_vec(F, v));
    for (unsigned c = 0; c < v; ++c)
        if (pivot_row_of[c] != -1)
            for (unsigned j = 0; j < t; ++j)
                coords[j][c] = a[(unsigned)pivot_row_of[c]][v + j];
    return coords;
}

// ---- the two table construction paths --------------------------------------

// dual group of an abelian group by extending one generator at a time; values
// are tracked as exponents of zeta_m
inline std::vector<std::vector<unsigned>> abelian_dual_exponents(const SmallGroup& g,
                                                                 unsigned m) {
    std::vector<char> member(g.n, 0);
    member[g.identity] = 1;
    std::vector<unsigned> members{g.identity};
    std::vector<std::vector<unsigned>> expo{std::vector<unsigned>(g.n, 0)};
    for (unsigned gen = 0; gen < g.n; ++gen) {
        if (member[gen]) continue;
        std::vector<unsigned> pw{g.identity};
        unsigned d = 0;
        for (unsigned at = gen;; at = g.mul(at, gen)) {
            ++d;
            pw.push_back(at);
            if (member[at]) break;
        }
        // pw[t] = gen^t for t in [1, d], with gen^d the first power inside
        unsigned step = m / d;
        if (m % d != 0) throw std::logic_error("abelian dual: order does not divide exponent");
        std::vector<unsigned> base_of(g.n, g.n), pow_of(g.n, 0);
        std::vector<unsigned> base = members;
        for (unsigned x : base) base_of[x] = x;
        for (unsigned t = 1; t < d; ++t)
            for (unsigned h : base) {
                unsigned x = g.mul(h, pw[t]);
                if (member[x]) throw std::logic_error("abelian dual: collision, input not abelian");
                member[x] = 1;
                members.push_back(x);
                base_of[x] = h;
                pow_of[x] = t;
            }
        std::vector<std::vector<unsigned>> next;
        for (const std::vector<unsigned>& row : expo) {
            unsigned t0 = row[pw[d]];
            if (t0 % d != 0) throw std::logic_error("abelian dual: non-divisible root exponent");
            for (unsigned j = 0; j < d; ++j) {
                unsigned s = (t0 / d + j * step) % m;
                std::vector<unsigned> ext(g.n, 0);
                for (unsigned x : members)
                    ext[x] = (unsigned)(((unsigned long)row[base_of[x]] +
                                         (unsigned long)pow_of[x] * s) %
                                        m);
                next.push_back(std::move(ext));
            }
        }
        expo = std::move(next);
    }
    if (members.size() != g.n)
        throw std::logic_error("abelian dual: generators did not exhaust the group");
    return expo;
}

// largest magnitude of a power-basis coordinate over all zeta^k reductions
inline unsigned long reduction_bound(const CycloField& F) {
    mpz_class best = 1;
    for (const std::vector<mpq_class>& row : F.power)
        for (const mpq_class& q : row) {
            mpz_class a = abs(q.get_num());
            if (a > best) best = a;
        }
    return best.get_ui();
}

inline std::vector<CycloVec> burnside_eigenvectors(const std::vector<std::vector<std::vector<long>>>& M,
                                                   const std::vector<unsigned>& sizes,
                                                   const CycloField& F) {
    unsigned k = (unsigned)sizes.size();
    ModMap mod(F.N);
    auto apply_int = [&](const std::vector<std::vector<long>>& A, const CycloVec& v) {
        CycloVec r = cyclo_zero_vec(F, k);
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = 0; j < k; ++j)
                if (A[i][j]) r[i] += v[j].scaled(mpq_class(A[i][j]));
        return r;
    };

    std::vector<std::vector<CycloVec>> spaces;
    {
        std::vector<CycloVec> full;
        for (unsigned j = 0; j < k; ++j) {
            CycloVec e = cyclo_zero_vec(F, k);
            e[j] = CycloNumber(F, 1);
            full.push_back(std::move(e));
        }
        spaces.push_back(std::move(full));
    }

    unsigned long rbound = reduction_bound(F);
    for (unsigned i = 1; i < k; ++i) {
        std::vector<std::vector<CycloVec>> next;
        for (std::vector<CycloVec>& V : spaces) {
            unsigned v = (unsigned)V.size();
            if (v == 1) {
                next.push_back(std::move(V));
                continue;
            }
            // restriction of M_i to the invariant subspace spanned by V
            std::vector<CycloVec> images;
            for (const CycloVec& b : V) images.push_back(apply_int(M[i], b));
            CycloMat A = solve_in_basis(V, images, F);  // A[j] = coords of image of V[j]

            std::vector<std::vector<unsigned long>> Amod(v, std::vector<unsigned long>(v));
            for (unsigned r = 0; r < v; ++r)
                for (unsigned c = 0; c < v; ++c) Amod[r][c] = mod.map_cyclo(A[c][r]);

            // eigenvalues lie in Z[zeta] with coordinates bounded by |C_i| times
            // the reduction bound; reject candidates cheaply modulo ell first
            long B = (long)((unsigned long)sizes[i] * rbound);
            unsigned d = F.d;
            double box = 1;
            for (unsigned t = 0; t < d; ++t) box *= (double)(2 * B + 1);
            if (box > 2e6)
                throw std::runtime_error(
                    "character_table: eigenvalue search space too large for this instance");

            std::vector<long> coord(d, -B);
            bool done = false;
            unsigned found = 0;
            std::vector<std::vector<CycloVec>> pieces;
            while (!done) {
                CycloNumber cand(F);
                for (unsigned t = 0; t < d; ++t) cand.c[t] = (long)coord[t];
                unsigned long cm = mod.map_cyclo(cand);
                std::vector<std::vector<unsigned long>> shifted = Amod;
                for (unsigned r = 0; r < v; ++r)
                    shifted[r][r] = (shifted[r][r] + mod.ell - cm) % mod.ell;
                if (det_mod(std::move(shifted), mod.ell) == 0) {
                    CycloMat shift_exact(v, cyclo_zero_vec(F, v));
                    for (unsigned r = 0; r < v; ++r)
                        for (unsigned c = 0; c < v; ++c) {
                            shift_exact[r][c] = A[c][r];
                            if (r == c) shift_exact[r][c] -= cand;
                        }
                    std::vector<CycloVec> ker = kernel_cyclo(std::move(shift_exact), F);
                    if (!ker.empty()) {
                        std::vector<CycloVec> lifted;
                        for (const CycloVec& x : ker) {
                            CycloVec w = cyclo_zero_vec(F, k);
                            for (unsigned c = 0; c < v; ++c)
                                for (unsigned r = 0; r < k; ++r) w[r] += x[c] * V[c][r];
                            lifted.push_back(std::move(w));
                        }
                        found += (unsigned)lifted.size();
                        pieces.push_back(std::move(lifted));
                        if (found == v) break;
                    }
                }
                for (unsigned t = 0;; ++t) {
                    if (t == d) {
                        done = true;
                        break;
                    }
                    if (++coord[t] <= B) break;
                    coord[t] = -B;
                }
            }
            if (found != v)
                throw std::runtime_error("character_table: eigenvalue search incomplete");
            for (std::vector<CycloVec>& piece : pieces) next.push_back(std::move(piece));
        }
        spaces = std::move(next);
    }
    std::vector<CycloVec> out;
    for (std::vector<CycloVec>& V : spaces) {
        if (V.size() != 1)
            throw std::logic_error("character_table: class algebra failed to separate");
        out.push_back(std::move(V[0]));
    }
    return out;
}

inline mpz_class exact_sqrt(const mpz_class& a) {
    if (a < 0) throw std::logic_error("exact_sqrt: negative");
    mpz_class r = sqrt(a);
    if (r * r != a) throw std::logic_error("exact_sqrt: not a perfect square");
    return r;
}

}  // namespace detail

inline CharacterTable character_table(const SmallGroup& g) {
    CharacterTable t;
    t.cls = small_group_classes(g);
    t.order = g.n;
    unsigned m = group_exponent(g);
    auto field = std::make_shared<CycloField>(m);
    t.field = field;
    const CycloField& F = *field;
    unsigned k = t.k();

    bool abelian = true;
    for (unsigned s : t.cls.sizes)
        if (s != 1) abelian = false;

    if (abelian) {
        for (const std::vector<unsigned>& row : detail::abelian_dual_exponents(g, m)) {
            std::vector<CycloNumber> vals;
            for (unsigned c = 0; c < k; ++c)
                vals.push_back(CycloNumber::zeta_pow(F, (long)row[t.cls.reps[c]]));
            t.chi.push_back(std::move(vals));
        }
    } else {
        // integer class-sum multiplication matrices: column j of M[i] holds the
        // expansion of K_i K_j over the class sums
        std::vector<std::vector<std::vector<long>>> M(
            k, std::vector<std::vector<long>>(k, std::vector<long>(k, 0)));
        for (unsigned i = 0; i < k; ++i)
            for (unsigned r = 0; r < k; ++r)
                for (unsigned x : t.cls.classes[i]) {
                    unsigned y = g.mul(g.inv[x], t.cls.reps[r]);
                    M[i][r][t.cls.class_of[y]] += 1;
                }

        for (const detail::CycloVec& u : detail::burnside_eigenvectors(M, t.cls.sizes, F)) {
            // read off the central character, then scale to character values
            unsigned lead = k;
            for (unsigned r = 0; r < k && lead == k; ++r)
                if (!u[r].is_zero()) lead = r;
            CycloNumber lead_inv = cyclo_inv(u[lead]);
            std::vector<CycloNumber> omega;
            for (unsigned i = 0; i < k; ++i) {
                CycloNumber img(F);
                for (unsigned j = 0; j < k; ++j)
                    if (M[i][lead][j] != 0) img += u[j].scaled(mpq_class(M[i][lead][j]));
                omega.push_back(img * lead_inv);
            }
            CycloNumber S(F);
            for (unsigned i = 0; i < k; ++i)
                S += (omega[i] * omega[i].conj()).scaled(mpq_class(1) / mpq_class(t.cls.sizes[i]));
            if (!S.is_rational())
                throw std::logic_error("character_table: central character norm not rational");
            mpq_class deg2 = mpq_class((unsigned long)g.n) / S.rational_part();
            mpz_class dnum = detail::exact_sqrt(deg2.get_num());
            mpz_class dden = detail::exact_sqrt(deg2.get_den());
            if (dden != 1) throw std::logic_error("character_table: non-integral degree");
            mpq_class deg(dnum);
            std::vector<CycloNumber> vals;
            for (unsigned i = 0; i < k; ++i)
                vals.push_back(omega[i].scaled(deg / mpq_class(t.cls.sizes[i])));
            t.chi.push_back(std::move(vals));
        }
    }

    std::sort(t.chi.begin(), t.chi.end(),
              [](const std::vector<CycloNumber>& a, const std::vector<CycloNumber>& b) {
                  mpq_class da = a[0].rational_part(), db = b[0].rational_part();
                  if (da != db) return da < db;
                  for (unsigned i = 0; i < a.size(); ++i) {
                      std::string sa = a[i].str(), sb = b[i].str();
                      if (sa != sb) return sa < sb;
                  }
                  return false;
              });
    for (const std::vector<CycloNumber>& row : t.chi) {
        if (!row[0].is_rational()) throw std::logic_error("character_table: degree not rational");
        mpq_class d = row[0].rational_part();
        if (d.get_den() != 1 || d <= 0) throw std::logic_error("character_table: bad degree");
        t.degree.push_back((unsigned)d.get_num().get_ui());
    }

    // both table invariants, exactly
    if (t.chi.size() != k) throw std::logic_error("character_table: row count != class count");
    unsigned long sq = 0;
    for (unsigned d : t.degree) sq += (unsigned long)d * d;
    if (sq != t.order) throw std::logic_error("character_table: degree squares do not sum to |G|");
    for (unsigned a = 0; a < k; ++a)
        for (unsigned b = 0; b < k; ++b) {
            CycloNumber ip = inner_product(t.chi[a], t.chi[b], t);
            CycloNumber want(F, a == b ? 1 : 0);
            if (ip != want) throw std::logic_error("character_table: rows not orthonormal");
        }
    for (unsigned a = 0; a < k; ++a)
        for (unsigned b = 0; b < k; ++b) {
            CycloNumber acc(F);
            for (unsigned r = 0; r < k; ++r) acc += t.chi[r][a] * t.chi[r][b].conj();
            CycloNumber want(F);
            if (a == b) want = CycloNumber(F, mpq_class((unsigned long)g.n) /
                                                  mpq_class(t.cls.sizes[a]));
            if (acc != want) throw std::logic_error("character_table: columns not orthogonal");
        }
    return t;
}

}  // namespace sct
