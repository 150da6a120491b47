#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "affdist/bent.hpp"
#include "affdist/distance.hpp"

using namespace affdist;

namespace {

BentSpec randomized_spec(int m, int t, std::mt19937_64& rng) {
    BentSpec s = default_bent_spec(m, t);
    // random surjective tau
    while (true) {
        BitMatrix tau(t, m);
        for (int i = 0; i < t; ++i) tau.set_row(i, rng() & ((1u << m) - 1));
        if (tau.rank() == t) { s.tau = tau; break; }
    }
    // random permutations for sigma and pi
    for (auto* tbl : {&s.sigma, &s.pi}) {
        for (uint32_t i = 0; i < (1u << m); ++i) (*tbl)[i] = uint16_t(i);
        std::shuffle(tbl->begin(), tbl->end(), rng);
    }
    // random balanced gamma
    std::shuffle(s.gamma.begin(), s.gamma.end(), rng);
    // random h
    for (auto& v : s.h) v = uint16_t(rng() & ((1u << t) - 1));
    return s;
}

}  // namespace

TEST_CASE("quasifield validation accepts fields and the twisted table") {
    for (int m = 2; m <= 5; ++m) {
        FieldSpec k = FieldSpec::standard(m);
        CHECK_FALSE(validate_prequasifield(field_quasifield(k)).has_value());
        CHECK_FALSE(validate_prequasifield(twisted_quasifield(k, 1)).has_value());
    }
    // twisted with higher exponent, odd m
    CHECK_FALSE(validate_prequasifield(twisted_quasifield(FieldSpec::standard(5), 2)).has_value());
}

TEST_CASE("quasifield validation reports violations") {
    FieldSpec k = FieldSpec::standard(3);
    PreQuasifield q = field_quasifield(k);
    q.star[(1u << 3) | 0] = 1;   // star[1][0] = 1
    auto bad = validate_prequasifield(q);
    REQUIRE(bad.has_value());
    CHECK(bad->axiom == 1);
    CHECK(bad->x == 1);

    PreQuasifield q2 = field_quasifield(k);
    q2.star[(2u << 3) | 3] = q2.star[(2u << 3) | 5];   // break bijectivity of right mult
    auto bad2 = validate_prequasifield(q2);
    REQUIRE(bad2.has_value());
    CHECK(bad2->axiom >= 2);
}

TEST_CASE("right division") {
    FieldSpec k = FieldSpec::standard(4);
    PreQuasifield q = twisted_quasifield(k, 1);
    for (uint32_t x = 0; x < 16; ++x) CHECK(star_divide(q, x, 0) == 0);
    // field case: x / y = x * y^(-1)
    PreQuasifield fq = field_quasifield(k);
    for (uint32_t x = 0; x < 16; ++x)
        for (uint32_t y = 1; y < 16; ++y)
            CHECK(star_divide(fq, x, y) == gf_mul(k, x, gf_pow(k, y, 14)));
    // round trip through the operation table
    for (uint32_t a = 0; a < 16; ++a)
        for (uint32_t y = 1; y < 16; ++y)
            CHECK(star_divide(q, q.mul(a, y), y) == a);
}

TEST_CASE("translation differences are bijective") {
    // for y1 != y2 the map x -> y1*x + y2*x permutes the quasifield
    for (int m = 2; m <= 6; ++m) {
        PreQuasifield q = twisted_quasifield(FieldSpec::standard(m), 1);
        for (uint32_t y1 = 0; y1 < q.size(); ++y1)
            for (uint32_t y2 = y1 + 1; y2 < q.size(); ++y2) {
                std::vector<char> seen(q.size(), 0);
                for (uint32_t x = 0; x < q.size(); ++x) {
                    uint16_t v = q.mul(y1, x) ^ q.mul(y2, x);
                    CHECK_FALSE(seen[v]);
                    seen[v] = 1;
                }
            }
    }
}

TEST_CASE("maiorana-mcfarland construction") {
    // m=2, t=1, trace-valued tau: a 4-variable bent function
    FieldSpec k2 = FieldSpec::standard(2);
    BentSpec s = default_bent_spec(2, 1);
    BitMatrix tr(1, 2);
    tr.set(0, 0, 1);
    tr.set(0, 1, 1);   // Tr over GF(4) in the standard basis
    s.tau = tr;
    VBF f = construct_mm(k2, s);
    CHECK(f.n == 4);
    CHECK(f.m == 1);
    CHECK(is_vectorial_bent(f));

    // m=3, t=3, identity tau: the field product map, (6,3)-bent
    FieldSpec k3 = FieldSpec::standard(3);
    BentSpec s3 = default_bent_spec(3, 3);
    VBF prod = construct_mm(k3, s3);
    for (uint32_t y = 0; y < 8; ++y)
        for (uint32_t x = 0; x < 8; ++x)
            CHECK(prod.table[(y << 3) | x] == gf_mul(k3, x, y));
    for (uint32_t b = 1; b < 8; ++b)
        for (int32_t v : walsh_row(prod, b)) CHECK((v == 8 || v == -8));

    // x = 0 row equals h
    std::mt19937_64 rng(5);
    BentSpec hr = randomized_spec(3, 2, rng);
    VBF fh = construct_mm(k3, hr);
    for (uint32_t y = 0; y < 8; ++y) CHECK(fh.table[(y << 3) | 0] == hr.h[y]);
}

TEST_CASE("partial spread construction") {
    FieldSpec k2 = FieldSpec::standard(2);
    PreQuasifield q = field_quasifield(k2);
    BentSpec s = default_bent_spec(2, 1);
    s.gamma = {0, 1, 1, 0};   // balanced, gamma = Tr-like
    VBF f = construct_ps(q, s);
    CHECK(f.table[0] == s.gamma[0]);
    CHECK(nonlinearity(f) == 6);
    CHECK(is_vectorial_bent(f));

    // preimage count of gamma(0): 2*2^m - 1 + (2^(m-t) - 1)(2^m - 1)
    std::mt19937_64 rng(7);
    for (int m = 2; m <= 4; ++m)
        for (int t = 1; t <= m; ++t) {
            PreQuasifield qq = twisted_quasifield(FieldSpec::standard(m), 1);
            BentSpec sp = randomized_spec(m, t, rng);
            VBF g = construct_ps(qq, sp);
            int count = 0;
            uint16_t v0 = g.table[0];
            for (auto v : g.table)
                if (v == v0) ++count;
            int want = 2 * (1 << m) - 1 + ((1 << (m - t)) - 1) * ((1 << m) - 1);
            CHECK(count == want);
        }

    BentSpec bad = default_bent_spec(2, 1);
    bad.gamma = {0, 0, 0, 1};
    CHECK_THROWS_WITH_AS(construct_ps(q, bad), doctest::Contains("balanced"),
                         std::invalid_argument);
}

TEST_CASE("quasifield construction") {
    FieldSpec k3 = FieldSpec::standard(3);
    PreQuasifield q = field_quasifield(k3);
    std::mt19937_64 rng(11);
    BentSpec s = randomized_spec(3, 2, rng);
    VBF f = construct_qf(q, s);
    for (uint32_t y = 0; y < 8; ++y) CHECK(f.table[(y << 3) | 0] == s.h[y]);
    // every nonzero component is bent
    for (uint32_t v = 1; v < 4; ++v) {
        VBF comp = component(f, v);
        CHECK(is_vectorial_bent(comp));
    }

    // m=2, t=2 distance to affine maps is (1 - 1/4)(16 - 4) = 9
    FieldSpec k2 = FieldSpec::standard(2);
    VBF g = construct_qf(field_quasifield(k2), default_bent_spec(2, 2));
    CHECK(distance_exact(g) == 9);

    BentSpec bad = default_bent_spec(3, 2);
    bad.sigma[3] = bad.sigma[5];
    CHECK_THROWS_WITH_AS(construct_qf(q, bad), doctest::Contains("invertible"),
                         std::invalid_argument);
    BentSpec badTau = default_bent_spec(3, 2);
    badTau.tau = BitMatrix(2, 3);
    CHECK_THROWS_WITH_AS(construct_qf(q, badTau), doctest::Contains("surjective"),
                         std::invalid_argument);
}

TEST_CASE("vectorial bent detection") {
    FieldSpec k2 = FieldSpec::standard(2);
    VBF ps = construct_ps(field_quasifield(k2), default_bent_spec(2, 1));
    CHECK(is_vectorial_bent(ps));

    VBF aff{4, 2, std::vector<uint16_t>(16)};
    for (uint32_t x = 0; x < 16; ++x) aff.table[x] = uint16_t(x & 3);
    CHECK_FALSE(is_vectorial_bent(aff));

    CHECK_FALSE(is_vectorial_bent(vbf_from_power(FieldSpec::standard(6), 3)));
    CHECK_THROWS(is_vectorial_bent(vbf_from_power(FieldSpec::standard(5), 3)));
}

TEST_CASE("all constructions are bent with the covering-radius nonlinearity") {
    std::mt19937_64 rng(13);
    for (int m = 2; m <= 4; ++m)
        for (int t = 1; t <= m; ++t) {
            FieldSpec k = FieldSpec::standard(m);
            BentSpec s = randomized_spec(m, t, rng);
            int want_nl = (1 << (2 * m - 1)) - (1 << (m - 1));
            for (const VBF& f : {construct_mm(k, s), construct_ps(field_quasifield(k), s),
                                 construct_qf(twisted_quasifield(k, 1), s)}) {
                CHECK(is_vectorial_bent(f));
                CHECK(nonlinearity(f) == want_nl);
            }
        }
}

TEST_CASE("field quasifield construction overlaps the product construction") {
    // with sigma = id and the field star, tau(sigma(y) * x) + h(y) is the
    // same table as tau(x pi(y)) + h(y) with pi = id
    FieldSpec k = FieldSpec::standard(3);
    BentSpec s = default_bent_spec(3, 2);
    CHECK(construct_qf(field_quasifield(k), s) == construct_mm(k, s));
}

TEST_CASE("quasifield file round trip") {
    PreQuasifield q = twisted_quasifield(FieldSpec::standard(3), 1);
    std::stringstream ss;
    write_quasifield(ss, q);
    PreQuasifield back = read_quasifield(ss);
    CHECK(back.m == q.m);
    CHECK(back.star == q.star);

    std::stringstream bad("2\n0 0 0 0\n0 1 2 3\n0 2 3 1\n0 3 1 3\n");
    CHECK_THROWS(read_quasifield(bad));
}
