// Exact scalar arithmetic: the prime field F_p and the cyclotomic field Q(zeta_N).
//
// Field elements are unsigned residues in [0, p), always reduced.  Cyclotomic
// numbers are exact rational coefficient vectors over the power basis
// zeta^0 .. zeta^{d-1}, d = deg Phi_N, reduced modulo the N-th cyclotomic
// polynomial.  No floating point is used anywhere in the arithmetic; decimal
// rendering is display-only.

#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sct {

// ---------------------------------------------------------------------------
// F_p

inline bool is_prime_u(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Odd prime modulus; the only characteristic restriction in the library.
struct PrimeModulus {
    unsigned p;
    explicit PrimeModulus(unsigned p_) : p(p_) {
        if (!is_prime_u(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
        if (p == 2) throw std::invalid_argument("characteristic 2 is not supported");
    }
};

using Fq = unsigned;  // residue in [0, p)

inline Fq fadd(Fq a, Fq b, unsigned p) { return (a + b) % p; }
inline Fq fsub(Fq a, Fq b, unsigned p) { return (a + p - b % p) % p; }
inline Fq fneg(Fq a, unsigned p) { return (p - a % p) % p; }
inline Fq fmul(Fq a, Fq b, unsigned p) { return (unsigned)((unsigned long long)a * b % p); }

inline Fq fpow(Fq a, unsigned long long e, unsigned p) {
    Fq r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = fmul(r, a, p);
        a = fmul(a, a, p);
        e >>= 1;
    }
    return r;
}

inline Fq finv(Fq a, unsigned p) {
    if (a % p == 0) throw std::domain_error("division by zero in F_p");
    return fpow(a, p - 2, p);
}

// Smallest positive non-square residue.
inline Fq find_nonsquare(const PrimeModulus& pm) {
    unsigned p = pm.p;
    std::vector<bool> sq(p, false);
    for (unsigned t = 0; t < p; ++t) sq[fmul(t, t, p)] = true;
    for (unsigned d = 1; d < p; ++d)
        if (!sq[d]) return d;
    throw std::logic_error("no non-square found (p odd prime expected)");
}

// Smallest generator of the cyclic group F_p^*.
inline Fq primitive_root(unsigned p) {
    unsigned order = p - 1;
    std::vector<unsigned> pf;
    unsigned m = order;
    for (unsigned d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            pf.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) pf.push_back(m);
    for (unsigned g = 2; g < p; ++g) {
        bool ok = true;
        for (unsigned f : pf)
            if (fpow(g, order / f, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    return 1;  // p = 3 reaches here only via g=2 above; p=2 excluded
}

// ---------------------------------------------------------------------------
// Q(zeta_N)

using Poly = std::vector<mpq_class>;  // coefficient list, index = degree

inline void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Exact division; throws if the remainder is nonzero.
inline Poly poly_div_exact(Poly num, const Poly& den) {
    poly_trim(num);
    Poly q;
    if (num.size() >= den.size()) q.assign(num.size() - den.size() + 1, mpq_class(0));
    while (num.size() >= den.size() && !num.empty()) {
        mpq_class c = num.back() / den.back();
        size_t off = num.size() - den.size();
        q[off] = c;
        for (size_t j = 0; j < den.size(); ++j) num[off + j] -= c * den[j];
        poly_trim(num);
    }
    if (!num.empty()) throw std::logic_error("poly_div_exact: nonzero remainder");
    return q;
}

// Phi_N by recursive peeling: x^N - 1 = prod_{d | N} Phi_d.
inline Poly cyclotomic_poly(unsigned N) {
    Poly num(N + 1, mpq_class(0));
    num[0] = -1;
    num[N] = 1;
    for (unsigned d = 1; d < N; ++d)
        if (N % d == 0) num = poly_div_exact(num, cyclotomic_poly(d));
    return num;
}

// The field Q(zeta_N), shared by all CycloNumbers over it.  Precomputes the
// reduction of every power zeta^k, k in [0, N), to the power basis.
struct CycloField {
    unsigned N;
    Poly phi;                              // Phi_N, monic, degree d
    unsigned d;                            // = deg Phi_N = phi(N)
    std::vector<std::vector<mpq_class>> power;  // power[k] = zeta^k in basis

    explicit CycloField(unsigned N_) : N(N_) {
        if (N == 0) throw std::invalid_argument("CycloField: N must be positive");
        phi = cyclotomic_poly(N);
        d = (unsigned)phi.size() - 1;
        power.assign(N, std::vector<mpq_class>(d, mpq_class(0)));
        // x^k mod Phi_N, iteratively: multiply by x and reduce.
        std::vector<mpq_class> cur(d, mpq_class(0));
        cur[0] = 1;
        for (unsigned k = 0; k < N; ++k) {
            power[k] = cur;
            std::vector<mpq_class> nxt(d, mpq_class(0));
            mpq_class top = cur[d - 1];
            for (unsigned i = d - 1; i >= 1; --i) nxt[i] = cur[i - 1];
            nxt[0] = 0;
            if (top != 0)
                for (unsigned i = 0; i < d; ++i) nxt[i] -= top * phi[i];
            cur = nxt;
        }
    }
};

struct CycloNumber {
    const CycloField* F = nullptr;
    std::vector<mpq_class> c;  // length F->d

    CycloNumber() = default;
    explicit CycloNumber(const CycloField& f) : F(&f), c(f.d, mpq_class(0)) {}
    CycloNumber(const CycloField& f, const mpq_class& r) : F(&f), c(f.d, mpq_class(0)) { c[0] = r; }

    static CycloNumber zeta_pow(const CycloField& f, long k) {
        CycloNumber z(f);
        long r = k % (long)f.N;
        if (r < 0) r += f.N;
        z.c = f.power[(unsigned)r];
        return z;
    }

    bool is_zero() const {
        for (auto& x : c)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0) return false;
        return true;
    }
    mpq_class rational_part() const { return c.empty() ? mpq_class(0) : c[0]; }

    friend bool operator==(const CycloNumber& a, const CycloNumber& b) {
        if (a.F != b.F) throw std::logic_error("CycloNumber: field mismatch in comparison");
        return a.c == b.c;
    }
    friend bool operator!=(const CycloNumber& a, const CycloNumber& b) { return !(a == b); }

    CycloNumber& operator+=(const CycloNumber& o) {
        for (unsigned i = 0; i < F->d; ++i) c[i] += o.c[i];
        return *this;
    }
    CycloNumber& operator-=(const CycloNumber& o) {
        for (unsigned i = 0; i < F->d; ++i) c[i] -= o.c[i];
        return *this;
    }
    friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
    friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
    CycloNumber operator-() const {
        CycloNumber r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend CycloNumber operator*(const CycloNumber& a, const CycloNumber& b) {
        if (a.F != b.F) throw std::logic_error("CycloNumber: field mismatch in product");
        const CycloField& f = *a.F;
        std::vector<mpq_class> prod(2 * f.d - 1, mpq_class(0));
        for (unsigned i = 0; i < f.d; ++i) {
            if (a.c[i] == 0) continue;
            for (unsigned j = 0; j < f.d; ++j)
                if (b.c[j] != 0) prod[i + j] += a.c[i] * b.c[j];
        }
        CycloNumber r(f);
        for (unsigned k = 0; k < prod.size(); ++k) {
            if (prod[k] == 0) continue;
            if (k < f.d)
                r.c[k] += prod[k];
            else
                for (unsigned i = 0; i < f.d; ++i) r.c[i] += prod[k] * f.power[k % f.N][i];
        }
        return r;
    }
    CycloNumber& operator*=(const CycloNumber& o) { return *this = *this * o; }

    CycloNumber scaled(const mpq_class& r) const {
        CycloNumber out = *this;
        for (auto& x : out.c) x *= r;
        return out;
    }

    // Complex conjugation = the Galois map zeta -> zeta^{N-1}.
    CycloNumber conj() const {
        const CycloField& f = *F;
        CycloNumber r(f);
        for (unsigned i = 0; i < f.d; ++i) {
            if (c[i] == 0) continue;
            unsigned k = (unsigned)(((unsigned long)(f.N - i)) % f.N);
            for (unsigned j = 0; j < f.d; ++j) r.c[j] += c[i] * f.power[k][j];
        }
        return r;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (unsigned i = 0; i < F->d; ++i) os << (i ? "," : "") << c[i].get_str();
        os << "]";
        return os.str();
    }
};

// Extended Euclid in Q[x]: returns (g, s) with s*a = g mod b, g = gcd(a,b) monic.
inline std::pair<Poly, Poly> poly_half_gcd(Poly a, Poly b) {
    Poly s0{mpq_class(1)}, s1;  // s coefficients tracking a-multiplier
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // divide a by b: a = q*b + r
        Poly r = a, q;
        if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, mpq_class(0));
        while (r.size() >= b.size() && !r.empty()) {
            mpq_class c = r.back() / b.back();
            size_t off = r.size() - b.size();
            q[off] = c;
            for (size_t j = 0; j < b.size(); ++j) r[off + j] -= c * b[j];
            poly_trim(r);
        }
        // s_new = s0 - q*s1
        Poly qs(q.size() + (s1.empty() ? 1 : s1.size()) - 1, mpq_class(0));
        if (!s1.empty())
            for (size_t i = 0; i < q.size(); ++i)
                if (q[i] != 0)
                    for (size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
        poly_trim(qs);
        Poly s2 = s0;
        if (s2.size() < qs.size()) s2.resize(qs.size(), mpq_class(0));
        for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        poly_trim(s2);
        a = b;
        s0 = s1;
        b = r;
        s1 = s2;
    }
    if (a.empty()) throw std::domain_error("poly gcd of zero polynomials");
    mpq_class lead = a.back();
    for (auto& x : a) x /= lead;
    for (auto& x : s0) x /= lead;
    return {a, s0};
}

// Multiplicative inverse in Q[x]/(Phi_N); throws on zero.
inline CycloNumber cyclo_inv(const CycloNumber& x) {
    if (x.is_zero()) throw std::domain_error("inverse of zero cyclotomic number");
    const CycloField& f = *x.F;
    Poly a(x.c.begin(), x.c.end());
    poly_trim(a);
    auto [g, s] = poly_half_gcd(a, f.phi);
    if (g.size() != 1) throw std::logic_error("cyclo_inv: element not invertible mod Phi_N");
    CycloNumber r(f);
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0) continue;
        for (unsigned j = 0; j < f.d; ++j) r.c[j] += s[i] * f.power[i % f.N][j];
    }
    return r;
}

// Embed Q(zeta_{N1}) into Q(zeta_{N2}) via zeta_{N1} = zeta_{N2}^{N2/N1}.
inline CycloNumber embed(const CycloNumber& x, const CycloField& target) {
    const CycloField& src = *x.F;
    if (target.N % src.N != 0) throw std::invalid_argument("embed: source conductor must divide target");
    unsigned long step = target.N / src.N;
    CycloNumber r(target);
    for (unsigned i = 0; i < src.d; ++i) {
        if (x.c[i] == 0) continue;
        unsigned k = (unsigned)((unsigned long)i * step % target.N);
        for (unsigned j = 0; j < target.d; ++j) r.c[j] += x.c[i] * target.power[k][j];
    }
    return r;
}

// The additive character t -> zeta_p^t of (F_p, +); field must have N = p.
inline CycloNumber additive_character(Fq t, const CycloField& f) {
    return CycloNumber::zeta_pow(f, (long)t);
}

// Assemble sum_k counts[k] * zeta^k; counts indexed by exponent in [0, N).
inline CycloNumber from_power_counts(const CycloField& f, const std::vector<long long>& counts) {
    CycloNumber r(f);
    for (unsigned k = 0; k < counts.size() && k < f.N; ++k) {
        if (counts[k] == 0) continue;
        mpq_class m((long)counts[k]);
        for (unsigned j = 0; j < f.d; ++j) r.c[j] += m * f.power[k][j];
    }
    return r;
}

// Display-only decimal approximation (real, imag).
inline std::pair<double, double> cyclo_approx(const CycloNumber& x) {
    long double re = 0, im = 0;
    const long double pi = 3.14159265358979323846264338327950288L;
    for (unsigned i = 0; i < x.F->d; ++i) {
        long double co = x.c[i].get_d();
        re += co * cosl(2 * pi * i / x.F->N);
        im += co * sinl(2 * pi * i / x.F->N);
    }
    return {(double)re, (double)im};
}

}  // namespace sct
