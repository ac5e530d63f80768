// Small-group plumbing and exact character tables: cyclic and product groups
// through the abelian path, S3, Q8, the order-27 Heisenberg group, and the
// order-36 contraction group through the class-algebra path.

#include <catch2/catch_amalgamated.hpp>
#include <array>
#include <map>
#include <set>
#include <string>

#include "sct/grouptools.hpp"
#include "sct/orbits.hpp"

using namespace sct;

static SmallGroup cyclic_group(unsigned n) {
    std::vector<unsigned> el(n);
    for (unsigned i = 0; i < n; ++i) el[i] = i;
    return make_small_group(
        el, [n](unsigned a, unsigned b) { return (a + b) % n; },
        [](unsigned a) { return std::to_string(a); });
}

static SmallGroup symmetric3() {
    std::vector<std::array<int, 3>> el;
    std::array<int, 3> p{0, 1, 2};
    do {
        el.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return make_small_group(
        el,
        [](const std::array<int, 3>& a, const std::array<int, 3>& b) {
            return std::array<int, 3>{a[b[0]], a[b[1]], a[b[2]]};
        },
        [](const std::array<int, 3>& a) {
            return std::to_string(a[0]) + std::to_string(a[1]) + std::to_string(a[2]);
        });
}

static SmallGroup quaternion8() {
    // index: axis in {1,i,j,k} doubled, low bit = sign
    static const int ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<unsigned> el(8);
    for (unsigned i = 0; i < 8; ++i) el[i] = i;
    return make_small_group(
        el,
        [](unsigned a, unsigned b) {
            unsigned ea = a >> 1, eb = b >> 1;
            unsigned axis = (unsigned)ax[ea][eb];
            unsigned sign = ((a & 1) ^ (b & 1) ^ (unsigned)sg[ea][eb]) & 1;
            return (axis << 1) | sign;
        },
        [](unsigned a) { return std::to_string(a); });
}

static SmallGroup heisenberg27() {
    std::vector<std::array<unsigned, 3>> el;
    for (unsigned a = 0; a < 3; ++a)
        for (unsigned b = 0; b < 3; ++b)
            for (unsigned c = 0; c < 3; ++c) el.push_back({a, b, c});
    return make_small_group(
        el,
        [](const std::array<unsigned, 3>& x, const std::array<unsigned, 3>& y) {
            return std::array<unsigned, 3>{(x[0] + y[0]) % 3, (x[1] + y[1]) % 3,
                                           (x[2] + y[2] + x[0] * y[1]) % 3};
        },
        [](const std::array<unsigned, 3>& x) {
            return std::to_string(x[0]) + std::to_string(x[1]) + std::to_string(x[2]);
        });
}

static std::multiset<unsigned> degree_multiset(const CharacterTable& t) {
    return {t.degree.begin(), t.degree.end()};
}

TEST_CASE("group construction and classes") {
    SmallGroup c6 = cyclic_group(6);
    REQUIRE(c6.n == 6);
    REQUIRE(c6.identity == 0);
    REQUIRE(c6.inv[1] == 5);
    REQUIRE(element_order(c6, 1) == 6);
    REQUIRE(element_order(c6, 2) == 3);
    REQUIRE(group_exponent(c6) == 6);

    GroupClasses cls = small_group_classes(symmetric3());
    REQUIRE(cls.classes.size() == 3);
    std::multiset<unsigned> sizes{cls.sizes.begin(), cls.sizes.end()};
    REQUIRE(sizes == std::multiset<unsigned>{1, 2, 3});
    REQUIRE(cls.classes[0] == std::vector<unsigned>{symmetric3().identity});

    // a subset missing products is rejected
    std::vector<unsigned> broken{0, 1};
    REQUIRE_THROWS_AS(make_small_group(
                          broken, [](unsigned a, unsigned b) { return (a + b) % 3; },
                          [](unsigned a) { return std::to_string(a); }),
                      std::invalid_argument);
    std::vector<unsigned> dup{0, 0};
    REQUIRE_THROWS_AS(make_small_group(
                          dup, [](unsigned, unsigned) { return 0u; },
                          [](unsigned a) { return std::to_string(a); }),
                      std::invalid_argument);
}

TEST_CASE("order two table") {
    CharacterTable t = character_table(cyclic_group(2));
    REQUIRE(t.k() == 2);
    REQUIRE(t.degree == std::vector<unsigned>{1, 1});
    const CycloField& F = *t.field;
    std::set<std::string> rows;
    for (auto& row : t.chi) rows.insert(row[0].str() + row[1].str());
    CycloNumber one(F, 1), minus(F, -1);
    REQUIRE(rows == std::set<std::string>{one.str() + one.str(), one.str() + minus.str()});
}

TEST_CASE("abelian tables") {
    CharacterTable t = character_table(cyclic_group(6));
    REQUIRE(t.k() == 6);
    for (unsigned d : t.degree) REQUIRE(d == 1);
    // each row is multiplicative and the rows exhaust the dual group
    std::set<std::string> at_gen;
    for (auto& row : t.chi) {
        CycloNumber v = row[t.cls.class_of[1]];
        at_gen.insert(v.str());
        CycloNumber acc(*t.field, 1);
        for (unsigned kpow = 0; kpow < 6; ++kpow) {
            REQUIRE(row[t.cls.class_of[(kpow) % 6]] == acc);
            acc *= v;
        }
    }
    REQUIRE(at_gen.size() == 6);

    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned a = 0; a < 3; ++a)
        for (unsigned b = 0; b < 3; ++b) pairs.push_back({a, b});
    SmallGroup g33 = make_small_group(
        pairs,
        [](auto x, auto y) {
            return std::pair<unsigned, unsigned>{(x.first + y.first) % 3, (x.second + y.second) % 3};
        },
        [](auto x) { return std::to_string(x.first) + std::to_string(x.second); });
    CharacterTable t33 = character_table(g33);
    REQUIRE(t33.k() == 9);
    std::set<std::string> distinct;
    for (auto& row : t33.chi) {
        std::string s;
        for (auto& v : row) s += v.str();
        distinct.insert(s);
    }
    REQUIRE(distinct.size() == 9);
}

TEST_CASE("symmetric group table") {
    CharacterTable t = character_table(symmetric3());
    REQUIRE(t.k() == 3);
    REQUIRE(degree_multiset(t) == std::multiset<unsigned>{1, 1, 2});
    const CycloField& F = *t.field;
    unsigned cyc = 0, tra = 0;
    for (unsigned c = 0; c < 3; ++c) {
        if (t.cls.sizes[c] == 2) cyc = c;
        if (t.cls.sizes[c] == 3) tra = c;
    }
    for (unsigned r = 0; r < 3; ++r) {
        if (t.degree[r] != 2) continue;
        REQUIRE(t.chi[r][cyc] == CycloNumber(F, -1));
        REQUIRE(t.chi[r][tra] == CycloNumber(F, 0));
    }
}

TEST_CASE("quaternion table") {
    CharacterTable t = character_table(quaternion8());
    REQUIRE(t.k() == 5);
    REQUIRE(degree_multiset(t) == std::multiset<unsigned>{1, 1, 1, 1, 2});
    const CycloField& F = *t.field;
    for (unsigned r = 0; r < 5; ++r) {
        if (t.degree[r] != 2) continue;
        for (unsigned c = 1; c < 5; ++c) {
            if (t.cls.sizes[c] == 1)
                REQUIRE(t.chi[r][c] == CycloNumber(F, -2));  // the central involution
            else
                REQUIRE(t.chi[r][c] == CycloNumber(F, 0));
        }
    }
}

TEST_CASE("heisenberg table") {
    SmallGroup h = heisenberg27();
    REQUIRE(group_exponent(h) == 3);
    CharacterTable t = character_table(h);
    REQUIRE(t.k() == 11);
    REQUIRE(degree_multiset(t) == std::multiset<unsigned>{1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3});
    const CycloField& F = *t.field;
    // the two faithful rows: 3 zeta^e on the center, zero elsewhere
    unsigned z1 = t.cls.class_of[1];  // element (0,0,1)
    std::set<std::string> central;
    for (unsigned r = 0; r < t.k(); ++r) {
        if (t.degree[r] != 3) continue;
        central.insert(t.chi[r][z1].str());
        for (unsigned c = 0; c < t.k(); ++c)
            if (t.cls.sizes[c] == 3) REQUIRE(t.chi[r][c] == CycloNumber(F, 0));
    }
    REQUIRE(central == std::set<std::string>{CycloNumber::zeta_pow(F, 1).scaled(3).str(),
                                             CycloNumber::zeta_pow(F, 2).scaled(3).str()});
}

TEST_CASE("inner products and decomposition") {
    CharacterTable t = character_table(symmetric3());
    const CycloField& F = *t.field;
    std::vector<CycloNumber> triv(3, CycloNumber(F, 1));
    REQUIRE(inner_product(triv, triv, t) == CycloNumber(F, 1));

    std::vector<CycloNumber> reg{CycloNumber(F, 6), CycloNumber(F, 0), CycloNumber(F, 0)};
    REQUIRE(inner_product(reg, triv, t) == CycloNumber(F, 1));
    std::vector<CycloNumber> m = decompose(reg, t);
    REQUIRE(nonneg_integer_vector(m));
    for (unsigned i = 0; i < 3; ++i)
        REQUIRE(m[i] == CycloNumber(F, (long)t.degree[i]));

    for (unsigned i = 0; i < 3; ++i) {
        std::vector<CycloNumber> e = decompose(t.chi[i], t);
        for (unsigned j = 0; j < 3; ++j)
            REQUIRE(e[j] == CycloNumber(F, i == j ? 1 : 0));
    }

    // a virtual character fails the genuineness test
    std::vector<CycloNumber> virt = triv;
    for (unsigned c = 0; c < 3; ++c) virt[c] -= t.chi[2][c];
    REQUIRE(!nonneg_integer_vector(decompose(virt, t)));

    SmallGroup s3 = symmetric3();
    GroupClasses cls = small_group_classes(s3);
    std::vector<CycloNumber> by_el(6, CycloNumber(F, 1));
    REQUIRE(to_class_function(by_el, cls).size() == 3);
    by_el[3] = CycloNumber(F, 0);
    REQUIRE_THROWS_AS(to_class_function(by_el, cls), std::invalid_argument);
}

TEST_CASE("contraction group table") {
    ContractionContext cx = build_context(Series::A, 2, {1, 1}, 3);
    std::vector<GroupElement> el = group_elements(cx);
    SmallGroup g = make_small_group(
        el, [&](const GroupElement& a, const GroupElement& b) { return cx.group_mul(a, b); },
        [](const GroupElement& e) { return e.key(); });
    REQUIRE(g.n == 36);
    REQUIRE(group_exponent(g) == 6);

    GroupClasses cls = small_group_classes(g);
    std::set<std::vector<unsigned>> via_table{cls.classes.begin(), cls.classes.end()};
    std::vector<std::vector<unsigned>> conj = conjugacy_classes(cx, el, cx.gens_Ga);
    std::set<std::vector<unsigned>> via_gens{conj.begin(), conj.end()};
    REQUIRE(via_table == via_gens);

    CharacterTable t = character_table(g);
    REQUIRE(t.k() == 12);
    REQUIRE(degree_multiset(t) == std::multiset<unsigned>{1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2});
}

TEST_CASE("tables are deterministic") {
    CharacterTable a = character_table(symmetric3());
    CharacterTable b = character_table(symmetric3());
    REQUIRE(a.chi.size() == b.chi.size());
    for (unsigned i = 0; i < a.chi.size(); ++i)
        for (unsigned j = 0; j < a.k(); ++j) REQUIRE(a.chi[i][j].str() == b.chi[i][j].str());

    // the C2-shaped two-element subgroup coming out of the contraction machinery
    ContractionContext cx = build_context(Series::C, 2, {1, 1, 1, 1}, 3);
    MatrixFq neg = MatrixFq::identity(cx.M, 3).scaled(2);
    std::vector<GroupElement> pm{cx.group_identity(), cx.from_alg(neg)};
    SmallGroup g = make_small_group(
        pm, [&](const GroupElement& a, const GroupElement& b) { return cx.group_mul(a, b); },
        [](const GroupElement& e) { return e.key(); });
    CharacterTable t = character_table(g);
    REQUIRE(t.k() == 2);
    REQUIRE(t.degree == std::vector<unsigned>{1, 1});
    bool has_sign = false;
    for (auto& row : t.chi)
        if (row[1] == CycloNumber(*t.field, -1)) has_sign = true;
    REQUIRE(has_sign);
}
