#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <sstream>

#include "affdist/catalog.hpp"
#include "affdist/sidon.hpp"

using namespace affdist;

namespace {

AffineMap random_invertible(int n, std::mt19937_64& rng) {
    while (true) {
        BitMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set_row(i, rng() & ((1u << n) - 1));
        if (m.rank() == n) return AffineMap{std::move(m), uint32_t(rng() & ((1u << n) - 1))};
    }
}

// every Sidon subset of F_2^dim, by depth-first extension
void all_sidon_sets(int dim, std::vector<std::vector<uint32_t>>& out) {
    std::vector<uint32_t> cur;
    std::function<void(uint32_t)> rec = [&](uint32_t from) {
        out.push_back(cur);
        for (uint32_t p = from; p < (1u << dim); ++p) {
            cur.push_back(p);
            if (is_sidon(cur, dim))
                rec(p + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

TEST_CASE("sidon membership") {
    CHECK(is_sidon(affine_basis_set(3)));
    CHECK(is_sidon(extended_affine_basis_set(4)));
    SidonSet flat{3, {0b001, 0b010, 0b100, 0b111}};   // 2-flat
    CHECK_FALSE(is_sidon(flat));
    CHECK_THROWS(is_sidon(SidonSet{3, {1, 1, 2}}));
}

TEST_CASE("extended affine basis is Sidon exactly from dimension 4") {
    CHECK_FALSE(is_sidon(extended_affine_basis_set(3)));
    for (int d = 4; d <= 9; ++d) CHECK(is_sidon(extended_affine_basis_set(d)));
}

TEST_CASE("completeness") {
    // the graph of x^3 over GF(8), dropped into F_2^6, is complete
    SidonSet g = power_graph_set(3, 3);
    CHECK(is_complete_sidon(g));
    CHECK_FALSE(is_complete_sidon(SidonSet{2, {1}}));
    CHECK(is_complete_sidon(inverse_hyperbola_set(4)));
}

TEST_CASE("greedy completion") {
    SidonSet g = power_graph_set(3, 3);
    CHECK(greedy_complete(g, 42) == g);   // already complete

    std::set<size_t> sizes6, sizes9;
    for (uint64_t seed = 0; seed < 150; ++seed)
        sizes6.insert(greedy_complete(SidonSet{6, {}}, seed).points.size());
    for (uint64_t seed = 0; seed < 150; ++seed)
        sizes9.insert(greedy_complete(SidonSet{9, {}}, seed).points.size());
    for (size_t s : sizes6) CHECK((s == 8 || s == 9));
    for (size_t s : sizes9) CHECK((s >= 21 && s <= 24));
    // every result is really complete and Sidon
    SidonSet c = greedy_complete(SidonSet{7, {}}, 3);
    CHECK(is_sidon(c));
    CHECK(is_complete_sidon(c));
}

TEST_CASE("greedy from every Sidon seed stays within the size ledger") {
    for (int dim = 2; dim <= 4; ++dim) {
        std::vector<std::vector<uint32_t>> seeds;
        all_sidon_sets(dim, seeds);
        int maxsize = max_complete_sidon_size(dim);
        for (const auto& pts : seeds) {
            SidonSet s{dim, pts};
            SidonSet done = greedy_complete(s, 1);
            CHECK(int(done.points.size()) <= maxsize);
            CHECK(is_complete_sidon(done));
        }
    }
}

TEST_CASE("gerbera leaves and enumeration") {
    SidonSet e6 = named_sidon_set("ellipse-6");
    REQUIRE(e6.points.size() == 9);

    // t=1: each leaf appears once although three pairs generate it
    for (uint32_t w : {0u, 5u, 11u, 63u}) {
        if (std::count(e6.points.begin(), e6.points.end(), w)) continue;
        auto leaves = gerbera_leaves(e6, w);
        int pairs = 0;
        std::vector<int32_t> idx(64, -1);
        for (size_t i = 0; i < e6.points.size(); ++i) idx[e6.points[i]] = int32_t(i);
        for (size_t i = 0; i < e6.points.size(); ++i)
            for (size_t j = i + 1; j < e6.points.size(); ++j) {
                uint32_t z = e6.points[i] ^ e6.points[j] ^ w;
                if (z < 64 && idx[z] >= 0 && z != e6.points[i] && z != e6.points[j]) ++pairs;
            }
        CHECK(int(leaves.size()) * 3 == pairs);
        for (auto& l : leaves) {
            CHECK((l[0] ^ l[1] ^ l[2]) == w);
            CHECK(l[0] < l[1]);
            CHECK(l[1] < l[2]);
        }
    }
}

TEST_CASE("size-9 sets in dimension 6 carry 3-gerberas but no 4-gerberas") {
    SidonSet e6 = named_sidon_set("ellipse-6");
    bool some3 = false;
    for (uint32_t w = 0; w < 64 && !some3; ++w) {
        if (std::count(e6.points.begin(), e6.points.end(), w)) continue;
        enumerate_gerbera(e6, w, 3, [&](const GerberaConfig&) {
            some3 = true;
            return false;
        });
    }
    CHECK(some3);
    for (uint32_t w = 0; w < 64; ++w) {
        if (std::count(e6.points.begin(), e6.points.end(), w)) continue;
        enumerate_gerbera(e6, w, 4, [&](const GerberaConfig& cfg) {
            CAPTURE(w);
            CHECK(cfg.leaves.size() != 4);
            return false;
        });
    }
}

TEST_CASE("size-12 sets in dimension 7 carry 3-gerberas but no 4-gerberas") {
    SidonSet s = named_sidon_set("max-7");
    bool some3 = false;
    int fours = 0;
    for (uint32_t w = 0; w < 128; ++w) {
        if (std::count(s.points.begin(), s.points.end(), w)) continue;
        enumerate_gerbera(s, w, 3, [&](const GerberaConfig&) {
            some3 = true;
            return false;
        });
        enumerate_gerbera(s, w, 4, [&](const GerberaConfig&) {
            ++fours;
            return false;
        });
    }
    CHECK(some3);
    CHECK(fours == 0);
}

TEST_CASE("gerbera leaves are disjoint and spans grow by two per leaf") {
    SidonSet s = named_sidon_set("ellipse-8");
    std::mt19937_64 rng(3);
    int visited = 0;
    for (int trial = 0; trial < 40 && visited < 200; ++trial) {
        uint32_t w = uint32_t(rng() & 255);
        if (std::count(s.points.begin(), s.points.end(), w)) continue;
        enumerate_gerbera(s, w, 4, [&](const GerberaConfig& cfg) {
            ++visited;
            std::set<uint32_t> pts;
            for (auto& l : cfg.leaves)
                for (uint32_t p : l) pts.insert(p);
            CHECK(pts.size() == 12);   // disjoint leaves
            auto all = cfg.all_points();
            CHECK(affine_span_dim(all) == 8);
            return visited < 200;
        });
    }
    CHECK(visited > 0);
}

TEST_CASE("affine span dimension") {
    std::vector<uint32_t> single{5};
    CHECK(affine_span_dim(single) == 0);
    std::vector<uint32_t> empty;
    CHECK_THROWS(affine_span_dim(empty));

    SidonSet s = named_sidon_set("max-9");
    std::mt19937_64 rng(9);
    for (int t = 1; t <= 4; ++t) {
        int seen = 0;
        for (int trial = 0; trial < 200 && seen < 20; ++trial) {
            uint32_t w = uint32_t(rng() & 511);
            if (std::count(s.points.begin(), s.points.end(), w)) continue;
            enumerate_gerbera(s, w, t, [&](const GerberaConfig& cfg) {
                ++seen;
                auto pts = cfg.all_points();
                int dim = affine_span_dim(pts);
                CHECK(dim <= 2 * t);
                CHECK(dim == 2 * t);
                return seen < 20;
            });
        }
        CHECK(seen > 0);
    }
}

TEST_CASE("maximum sizes per dimension") {
    CHECK(max_complete_sidon_size(2) == 3);
    CHECK(max_complete_sidon_size(3) == 4);
    CHECK(max_complete_sidon_size(4) == 6);
    CHECK(max_complete_sidon_size(5) == 7);
    CHECK(max_complete_sidon_size(6) == 9);
    CHECK(max_complete_sidon_size(7) == 12);
    CHECK(max_complete_sidon_size(8) == 18);
    CHECK(max_complete_sidon_size(9) == 24);
    // counting bound above dimension 9: floor(sqrt(2)*2^(d/2) + 1/2)
    CHECK(max_complete_sidon_size(10) == 45);
    CHECK(max_complete_sidon_size(11) == 64);
    CHECK(max_complete_sidon_size(12) == 91);
    CHECK_THROWS(max_complete_sidon_size(1));
    // the bound is not tight at dimension 6: 9 <= 11
    CHECK(9 <= int(std::sqrt(2.0) * 8 + 0.5));
}

TEST_CASE("sidon property is invariant under invertible affine maps") {
    std::mt19937_64 rng(17);
    for (int dim : {5, 7, 10}) {
        SidonSet s = dim <= 6 ? extended_affine_basis_set(dim)
                              : greedy_complete(SidonSet{dim, {}}, 7);
        for (int trial = 0; trial < 6; ++trial) {
            AffineMap a = random_invertible(dim, rng);
            SidonSet img{dim, {}};
            for (uint32_t p : s.points) img.points.push_back(a.apply(p));
            CHECK(is_sidon(img));
        }
    }
}

TEST_CASE("dimension-9 sets of size at least 22 contain 4-gerberas") {
    int checked = 0;
    for (uint64_t seed = 0; seed < 1200 && checked < 1000; ++seed) {
        SidonSet s = greedy_complete(SidonSet{9, {}}, seed);
        if (s.points.size() < 22) continue;
        ++checked;
        bool found = false;
        for (uint32_t w = 0; w < 512 && !found; ++w) {
            if (std::count(s.points.begin(), s.points.end(), w)) continue;
            enumerate_gerbera(s, w, 4, [&](const GerberaConfig&) {
                found = true;
                return false;
            });
        }
        CAPTURE(seed);
        CHECK(found);
    }
    CHECK(checked >= 1000);
}

TEST_CASE("sidon set file round trip") {
    SidonSet s = named_sidon_set("max-7");
    std::stringstream ss;
    write_sidon_set(ss, s);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "7 12");
    ss.seekg(0);
    CHECK(read_sidon_set(ss) == s);

    std::stringstream bad("3 2\nff\n1\n");
    CHECK_THROWS(read_sidon_set(bad));
}
