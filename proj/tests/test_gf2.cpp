#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "affdist/gf2.hpp"

using namespace affdist;

namespace {

// schoolbook polynomial multiply + long division, the reduction oracle
uint32_t schoolbook_mul(uint32_t a, uint32_t b, uint32_t mod, int n) {
    uint64_t prod = 0;
    for (int i = 0; i < 32; ++i)
        if ((b >> i) & 1) prod ^= uint64_t(a) << i;
    for (int d = 62; d >= n; --d)
        if ((prod >> d) & 1) prod ^= uint64_t(mod) << (d - n);
    return uint32_t(prod);
}

}  // namespace

TEST_CASE("standard moduli are the smallest irreducible polynomials") {
    for (int n = 1; n <= 16; ++n) {
        uint32_t mod = standard_moduli()[size_t(n)];
        CHECK(gf2_poly_irreducible(mod, n));
        for (uint32_t p = 1u << n; p < mod; ++p)
            CHECK_FALSE(gf2_poly_irreducible(p, n));
    }
}

TEST_CASE("field multiplication basics") {
    FieldSpec k = FieldSpec::standard(3);
    CHECK(gf_mul(k, 0b001, 0b110) == 0b110);
    CHECK(gf_mul(k, 0b010, 0b010) == 0b100);
    // x * x^2 = x^3 = x + 1 under x^3 + x + 1
    CHECK(gf_mul(k, 0b100, 0b010) == 0b011);
}

TEST_CASE("field multiplication matches the schoolbook oracle") {
    for (int n : {2, 3, 4, 5, 6, 8}) {
        FieldSpec k = FieldSpec::standard(n);
        std::mt19937 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            uint32_t a = rng() & (k.size() - 1);
            uint32_t b = rng() & (k.size() - 1);
            CHECK(gf_mul(k, a, b) == schoolbook_mul(a, b, k.modulus, n));
        }
    }
}

TEST_CASE("field axioms hold exhaustively for small n") {
    for (int n = 1; n <= 6; ++n) {
        FieldSpec k = FieldSpec::standard(n);
        for (uint32_t a = 0; a < k.size(); ++a)
            for (uint32_t b = 0; b < k.size(); ++b) {
                CHECK(gf_mul(k, a, b) == gf_mul(k, b, a));
                for (uint32_t c = 0; c < k.size(); ++c) {
                    CHECK(gf_mul(k, gf_mul(k, a, b), c) == gf_mul(k, a, gf_mul(k, b, c)));
                    CHECK(gf_mul(k, a, b ^ c) == (gf_mul(k, a, b) ^ gf_mul(k, a, c)));
                }
            }
    }
}

TEST_CASE("powers and inverses") {
    FieldSpec k = FieldSpec::standard(4);
    for (uint32_t a = 1; a < k.size(); ++a) {
        CHECK(gf_pow(k, a, 0) == 1);
        CHECK(gf_mul(k, a, gf_pow(k, a, 14)) == 1);
    }
    CHECK(gf_pow(k, 0, 0) == 1);
    CHECK(gf_pow(k, 0, 5) == 0);

    int fifth_roots = 0;
    for (uint32_t x = 0; x < k.size(); ++x)
        if (gf_pow(k, x, 5) == 1) ++fifth_roots;
    CHECK(fifth_roots == 5);

    for (int n = 2; n <= 8; ++n) {
        FieldSpec kk = FieldSpec::standard(n);
        for (uint32_t a = 1; a < kk.size(); ++a)
            CHECK(gf_mul(kk, a, gf_pow(kk, a, kk.size() - 2)) == 1);
    }
}

TEST_CASE("trace is linear, balanced, and matches direct evaluation") {
    FieldSpec k2 = FieldSpec::standard(2);
    CHECK(gf_trace(k2, 0) == 0);
    int ones = 0;
    for (uint32_t a = 0; a < 4; ++a) ones += gf_trace(k2, a);
    CHECK(ones == 2);

    FieldSpec k3 = FieldSpec::standard(3);
    // direct orbit sum: 1 + 1 + 1
    uint32_t acc = 1 ^ gf_mul(k3, 1, 1) ^ gf_mul(k3, gf_mul(k3, 1, 1), gf_mul(k3, 1, 1));
    CHECK(gf_trace(k3, 1) == int(acc & 1));
    CHECK(gf_trace(k3, 1) == 1);

    for (int n = 1; n <= 8; ++n) {
        FieldSpec k = FieldSpec::standard(n);
        int cnt = 0;
        for (uint32_t a = 0; a < k.size(); ++a) {
            cnt += gf_trace(k, a);
            for (uint32_t b = 0; b < std::min(k.size(), 64u); ++b)
                CHECK(gf_trace(k, a ^ b) == (gf_trace(k, a) ^ gf_trace(k, b)));
        }
        CHECK(cnt == int(k.size() / 2));
    }
}

TEST_CASE("inner product") {
    CHECK(dot(0, 0b1011) == 0);
    CHECK(dot(0b011, 0b101) == 1);
    // Tr(xy) is a non-degenerate pairing on GF(8)
    FieldSpec k = FieldSpec::standard(3);
    BitMatrix gram(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            gram.set(i, j, gf_trace(k, gf_mul(k, 1u << i, 1u << j)));
    CHECK(gram.rank() == 3);
}

TEST_CASE("rank and reduced row echelon form") {
    CHECK(BitMatrix(4, 5).rank() == 0);
    CHECK(BitMatrix::identity(6).rank() == 6);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        BitMatrix m(6, 8);
        for (int i = 0; i < 6; ++i) m.set_row(i, rng() & 0xff);
        auto [rank, rref] = rank_and_span(m);
        CHECK(rref.rref() == rref);
        CHECK(rref.rank() == rank);
        // row spaces agree: every row of one reduces to zero against the other
        auto in_span = [](const BitMatrix& basis, uint64_t v) {
            Echelon e;
            for (int i = 0; i < basis.rows(); ++i)
                if (basis.row(i)) e.insert(uint32_t(basis.row(i)));
            return e.reduce(uint32_t(v)) == 0;
        };
        for (int i = 0; i < 6; ++i) {
            CHECK(in_span(rref, m.row(i)));
            CHECK(in_span(m, rref.row(i)));
        }
    }
}

TEST_CASE("matrix inverse round trip") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        BitMatrix m(5, 5);
        for (int i = 0; i < 5; ++i) m.set_row(i, rng() & 0x1f);
        BitMatrix inv = m.inverse();
        if (m.rank() < 5) {
            CHECK(inv.rows() == 0);
        } else {
            CHECK((m * inv) == BitMatrix::identity(5));
            CHECK((inv * m) == BitMatrix::identity(5));
        }
    }
}

TEST_CASE("affine maps") {
    AffineMap id = AffineMap::identity(4);
    for (uint32_t x = 0; x < 16; ++x) CHECK(id.apply(x) == x);

    AffineMap constant{BitMatrix(4, 4), 0b1010};
    for (uint32_t x = 0; x < 16; ++x) CHECK(constant.apply(x) == 0b1010);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        BitMatrix ma(4, 4), mb(4, 4);
        for (int i = 0; i < 4; ++i) {
            ma.set_row(i, rng() & 0xf);
            mb.set_row(i, rng() & 0xf);
        }
        AffineMap a{ma, uint32_t(rng() & 0xf)}, b{mb, uint32_t(rng() & 0xf)};
        AffineMap ab = a.after(b);
        for (uint32_t x = 0; x < 16; ++x)
            CHECK(ab.apply(x) == a.apply(b.apply(x)));
    }
}

TEST_CASE("affine subspace membership counts") {
    std::mt19937 rng(19);
    for (int d : {6, 10, 14}) {
        for (int dim = 0; dim <= 4; ++dim) {
            std::vector<uint32_t> basis;
            Echelon e;
            while (int(basis.size()) < dim) {
                uint32_t v = rng() & ((1u << d) - 1);
                if (e.insert(v)) basis.push_back(v);
            }
            auto s = AffineSubspace::make(d, rng() & ((1u << d) - 1), basis);
            size_t count = 0;
            for (uint32_t p = 0; p < (1u << d); ++p)
                if (s.contains(p)) ++count;
            CHECK(count == size_t(1) << dim);
            for (uint32_t p : s.points()) CHECK(s.contains(p));
        }
    }
    CHECK_THROWS(AffineSubspace::make(4, 0, {0b0001, 0b0011, 0b0010}));
}
