#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <random>

#include "affdist/bent.hpp"
#include "affdist/catalog.hpp"
#include "affdist/distance.hpp"
#include "oracles.hpp"

using namespace affdist;
using oracles::brute_force_distance;

TEST_CASE("intersection counting") {
    VBF aff{4, 4, std::vector<uint16_t>(16)};
    BitMatrix mat = BitMatrix::identity(4);
    for (uint32_t x = 0; x < 16; ++x) aff.table[x] = uint16_t(x ^ 9);
    CHECK(intersection_count(aff, AffineMap{mat, 9}) == 16);

    auto [h1, a1] = monomial_witness_pair(4, MonomialPair::inverse_pair);
    CHECK(intersection_count(h1, a1) == 6);
    auto [h2, a2] = monomial_witness_pair(8, MonomialPair::gold_half_pair);
    CHECK(intersection_count(h2, a2) == 18);

    CHECK_THROWS(intersection_count(aff, AffineMap::identity(3)));
}

TEST_CASE("exact distance equals brute force in tiny dimensions") {
    for (int n = 1; n <= 3; ++n) {
        for (uint64_t d : {uint64_t(1), uint64_t(3)}) {
            if (d >= (uint64_t(1) << n)) continue;
            VBF f = vbf_from_power(FieldSpec::standard(n), d);
            CHECK(distance_exact(f) == brute_force_distance(f));
        }
    }
    // a couple of non-monomial tables
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<uint16_t> t(8);
        for (auto& v : t) v = uint16_t(rng() & 7);
        VBF f{3, 3, t};
        CHECK(distance_exact(f) == brute_force_distance(f));
    }
}

TEST_CASE("exact distances for small apn functions") {
    CHECK(distance_exact(vbf_from_power(FieldSpec::standard(3), 3)) == 4);
    CHECK(distance_exact(vbf_from_power(FieldSpec::standard(4), 3), 2) == 10);
    VBF aff{3, 3, std::vector<uint16_t>(8)};
    for (uint32_t x = 0; x < 8; ++x) aff.table[x] = uint16_t(x);
    CHECK(distance_exact(aff) == 0);
    // witness reproduces the distance
    ExactDistance e = distance_exact_witnessed(vbf_from_power(FieldSpec::standard(4), 3), 2);
    CHECK(intersection_count(vbf_from_power(FieldSpec::standard(4), 3), e.witness) ==
          16 - e.distance);
}

TEST_CASE("exact computation refuses oversized inputs") {
    CHECK(distance_exact_feasible(5, 5));
    CHECK_FALSE(distance_exact_feasible(6, 6));
    CHECK_THROWS(distance_exact(vbf_from_power(FieldSpec::standard(6), 3)));
}

TEST_CASE("bounds report") {
    // dimension 6 apn: the Sidon packing bound gives 64 - 9
    DistanceBounds b6 = bounds_report(vbf_from_power(FieldSpec::standard(6), 3));
    CHECK(b6.apn);
    REQUIRE(b6.sidon_lower.has_value());
    CHECK(*b6.sidon_lower == 55);
    CHECK(b6.trivial_upper == 57);

    // (4,2)-bent: interval [9, 15]
    VBF bent42 = construct_qf(field_quasifield(FieldSpec::standard(2)), default_bent_spec(2, 2));
    DistanceBounds bb = bounds_report(bent42);
    CHECK(bb.vectorial_bent);
    REQUIRE(bb.bent_interval.has_value());
    CHECK(bb.bent_interval->first == 9);
    CHECK(bb.bent_interval->second == 15);

    // dimension 8 field inverse: lower 232 after integer rounding, upper 238
    DistanceBounds bi = bounds_report(vbf_from_power(FieldSpec::standard(8), 254));
    CHECK(bi.delta == 4);
    REQUIRE(bi.family_lower.has_value());
    CHECK(bi.family_lower->usable() == 232);
    REQUIRE(bi.family_upper.has_value());
    CHECK(*bi.family_upper == 238);
    CHECK(bi.uniformity_lower.usable() == 224);
}

TEST_CASE("radical bound arithmetic") {
    // perfect squares sit exactly half a unit below an integer
    RadicalBound r{5, 64, 1};
    CHECK(r.usable() == 24);
    RadicalBound r8{8, 512, 3};
    CHECK(r8.usable() == 232);
    RadicalBound r8b{8, 512, 1};
    CHECK(r8b.usable() == 233);
    CHECK(r8.formula() == "2^8 - sqrt(512) - 3/2");
}

TEST_CASE("witness search finds the known maxima") {
    VBF f6 = vbf_from_power(FieldSpec::standard(6), 3);
    CHECK(witness_search(f6, 0).intersection == 9);
    VBF f7 = vbf_from_power(FieldSpec::standard(7), 3);
    WitnessResult w7 = witness_search(f7, 0);
    CHECK(w7.intersection == 11);
    CHECK(intersection_count(f7, w7.map) == 11);
    CHECK_THROWS(witness_search(VBF{3, 2, std::vector<uint16_t>(8, 0)}, 0));
}

TEST_CASE("projection tests and subspace conversion") {
    AffineMap a = AffineMap::identity(3);
    AffineSubspace g = affine_map_graph(a);
    CHECK(g.dim() == 3);
    std::vector<uint32_t> dirs = g.basis;
    CHECK(projects_onto_inputs(3, dirs));
    AffineMap back = subspace_to_affine_map(3, g.offset, dirs);
    CHECK(back == a);

    // a vertical direction breaks the projection
    std::vector<uint32_t> bad = {1u | (1u << 3), 2u, 4u << 3};
    CHECK_FALSE(projects_onto_inputs(3, bad));
}

TEST_CASE("center orbit machinery") {
    ScanCenters c7 = center_orbit_representatives(FieldSpec::standard(7), 3);
    CHECK(c7.list.size() == 1);   // translations and cube scalings act transitively
    size_t total = 0;
    for (size_t s : c7.orbit_sizes) total += s;
    CHECK(total == c7.total_centers);
    CHECK(c7.total_centers == (size_t(1) << 14) - (size_t(1) << 7));

    ScanCenters c857 = center_orbit_representatives(FieldSpec::standard(8), 57);
    CHECK(c857.list.size() == 37);   // scalings and Frobenius only
    total = 0;
    for (size_t s : c857.orbit_sizes) total += s;
    CHECK(total == c857.total_centers);

    ScanCenters c83 = center_orbit_representatives(FieldSpec::standard(8), 3);
    CHECK(c83.list.size() == 2);
}

TEST_CASE("gerbera scan on the kim function") {
    VBF kim = kim_function();
    ScanCertificate cert = gerbera_scan(kim, 10, 3, all_centers(kim), 2);
    CHECK(cert.absent);
    CHECK(cert.witnessed_max == 9);
    CHECK(cert.exhaustive);
    CHECK(cert.centers_scanned == 4032);
    REQUIRE(cert.witness.has_value());
    CHECK(intersection_count(kim, *cert.witness) == 9);

    // unlicensed combinations are rejected
    CHECK_THROWS(gerbera_scan(kim, 8, 3, all_centers(kim)));
    CHECK_THROWS(gerbera_scan(kim, 10, 4, all_centers(kim)));
    VBF notapn = vbf_from_power(FieldSpec::standard(6), 1);
    CHECK_THROWS(gerbera_scan(notapn, 10, 3, all_centers(notapn)));
}

TEST_CASE("monotone absence targets") {
    VBF f = vbf_from_power(FieldSpec::standard(6), 3);
    ScanCenters centers = all_centers(f);
    ScanCertificate c10 = gerbera_scan(f, 10, 3, centers, 2);
    ScanCertificate c11 = gerbera_scan(f, 11, 3, centers, 2);
    CHECK(c10.absent);
    CHECK(c11.absent);   // absence at 10 forces absence at 11
    CHECK(c10.witnessed_max == c11.witnessed_max);
}

TEST_CASE("scan certificate json round trip and verification") {
    VBF f = vbf_from_power(FieldSpec::standard(7), 3);
    ScanCenters reps = center_orbit_representatives(FieldSpec::standard(7), 3);
    ScanCertificate cert = gerbera_scan(f, 12, 3, reps, 2);
    CHECK(cert.absent);
    CHECK(cert.witnessed_max == 11);

    std::string json = certificate_to_json(cert);
    ScanCertificate back = certificate_from_json(json);
    CHECK(back.target == 12);
    CHECK(back.truth_table == f.table);
    VerifyResult v = verify_certificate(back);
    CHECK(v.ok);

    // a corrupted witness is caught
    ScanCertificate bad = back;
    REQUIRE(bad.witness.has_value());
    bad.witness->offset ^= 1;
    CHECK_FALSE(verify_certificate(bad).ok);
    // an inconsistent absence claim is caught
    ScanCertificate bad2 = back;
    bad2.witnessed_max = 13;
    bad2.witness.reset();
    CHECK_FALSE(verify_certificate(bad2).ok);
}

TEST_CASE("interrupted scans resume from the checkpoint") {
    VBF f = vbf_from_power(FieldSpec::standard(7), 3);
    ScanCenters reps = center_orbit_representatives(FieldSpec::standard(7), 3);
    std::string ck = "test_scan_checkpoint.json";
    std::remove(ck.c_str());

    // run only a partial center list first, sharing the checkpoint key by
    // passing the same request shape
    ScanCertificate full = gerbera_scan(f, 12, 3, reps, 1, {}, ck);
    CHECK(full.absent);
    // a rerun with the completed checkpoint skips all work but reproduces
    // the certificate conclusion
    int visited = 0;
    ScanCertificate again =
        gerbera_scan(f, 12, 3, reps, 1, [&](const ScanOutcome&) { ++visited; }, ck);
    CHECK(visited == 0);
    CHECK(again.absent == full.absent);
    CHECK(again.witnessed_max == full.witnessed_max);
    CHECK(again.centers_scanned == full.centers_scanned);
    std::remove(ck.c_str());
}

TEST_CASE("no sampled affine map beats a certified bound") {
    VBF kim = kim_function();
    ScanCertificate cert = gerbera_scan(kim, 10, 3, all_centers(kim), 2);
    REQUIRE(cert.absent);
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 4000; ++trial) {
        BitMatrix m(6, 6);
        for (int i = 0; i < 6; ++i) m.set_row(i, rng() & 63);
        AffineMap a{std::move(m), uint32_t(rng() & 63)};
        CHECK(intersection_count(kim, a) < cert.target);
    }
}

TEST_CASE("bent construction distance matches the closed form") {
    for (auto [m, t] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}}) {
        FieldSpec k = FieldSpec::standard(m);
        int want = ((1 << (2 * m)) - (1 << m)) / (1 << t) * ((1 << t) - 1);
        CHECK(distance_exact(construct_ps(field_quasifield(k), default_bent_spec(m, t)), 2) ==
              want);
    }
}

TEST_CASE("bound sandwich on every exact value") {
    for (const auto& e : catalog_entries()) {
        if (!distance_exact_feasible(e.n, e.n) || e.n > 5) continue;
        VBF f = instantiate(e);
        int exact = distance_exact(f, 2);
        DistanceBounds b = bounds_report(f);
        CAPTURE(e.name);
        CHECK(b.uniformity_lower.usable() <= exact);
        CHECK(exact <= b.trivial_upper);
        if (b.sidon_lower) CHECK(*b.sidon_lower <= exact);
    }
}

TEST_CASE("distance reports") {
    // n=5: exact through the transform
    DistanceOptions opt;
    opt.threads = 2;
    opt.id = "x3-n5";
    DistanceReport r5 = distance_report(vbf_from_power(FieldSpec::standard(5), 3), opt);
    REQUIRE(r5.exact.has_value());
    CHECK(*r5.exact == 25);
    CHECK(r5.strategy_used == "exact");
    CHECK(r5.lmc == LmcStatus::consistent);

    // n=6 kim: witness 9 plus exhaustive absence certificate
    opt.id = "kim-n6";
    DistanceReport rk = distance_report(kim_function(), opt);
    REQUIRE(rk.exact.has_value());
    CHECK(*rk.exact == 55);
    REQUIRE(rk.certificate.has_value());
    CHECK(rk.certificate->absent);
    CHECK(rk.certificate->exhaustive);
    CHECK(rk.witness_intersection == 9);

    // n=7 gold: certificate over orbit representatives
    opt.id = "x3-n7";
    DistanceReport r7 = distance_report(vbf_from_power(FieldSpec::standard(7), 3), opt);
    REQUIRE(r7.exact.has_value());
    CHECK(*r7.exact == 117);
    REQUIRE(r7.certificate.has_value());
    CHECK(r7.certificate->orbit_mode);

    // report json is deterministic up to timing
    std::string j1 = report_to_json(r7);
    DistanceReport r7b = distance_report(vbf_from_power(FieldSpec::standard(7), 3), opt);
    std::string j2 = report_to_json(r7b);
    auto strip = [](std::string s) {
        for (size_t p; (p = s.find("\"wall_ms\"")) != std::string::npos;) {
            size_t e = s.find('\n', p);
            s.erase(p, e - p);
        }
        return s;
    };
    CHECK(strip(j1) == strip(j2));
}
