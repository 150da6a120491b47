#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affdist/gf2.hpp"
#include "affdist/sidon.hpp"
#include "affdist/vbf.hpp"

// Bundled functions and point sets: the six APN power families, the Kim
// function, witness pairs for the inverse / half-exponent Gold monomials,
// and the complete Sidon sets the test suites lean on.

namespace affdist {

enum class Family { Gold, Kasami, Welch, Niho, Inverse, Dobbertin, Kim, Custom };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct CatalogEntry {
    std::string name;
    Family family = Family::Custom;
    int n = 0;
    uint64_t exponent = 0;        // 0 for table-backed entries (Kim)
    int expected_delta = 2;
    std::string note;
};

// Every bundled entry for dimensions 1..9; instantiating any of them and
// measuring the differential spectrum reproduces expected_delta.
const std::vector<CatalogEntry>& catalog_entries();

// Validated entry for the requested family; param carries the family
// index i where one applies (Gold, Kasami). Throws on unsupported input.
CatalogEntry catalog_lookup(int n, Family family, int param = 0);

VBF instantiate(const CatalogEntry& e);

// x^3 + zeta x^24 + x^10 over GF(2^6); zeta is the first primitive element
// in encoding order making the map APN.
VBF kim_function();
uint32_t kim_zeta();

// Linear map x -> x^(2^k) in the standard basis.
AffineMap frobenius_map(const FieldSpec& k, int power);

enum class MonomialPair { inverse_pair, gold_half_pair };

// The two monomial/witness pairs with intersection 2^(n/2) + 2:
//   inverse_pair:   f = x^(2^n - 2),        A = x^(2^(n/2)),  n even
//   gold_half_pair: f = x^(2^(n/2-1) + 1),  A = x^(2^(n-1)),  4 | n
std::pair<VBF, AffineMap> monomial_witness_pair(int n, MonomialPair which);

// ----- bundled point sets ----------------------------------------------------

SidonSet affine_basis_set(int dim);              // {0, e_0, ..., e_(dim-1)}
SidonSet extended_affine_basis_set(int dim);     // plus the sum of all basis vectors
SidonSet power_graph_set(int n, uint64_t d);     // {(x, x^d)} in F_2^(2n)
SidonSet inverse_hyperbola_set(int m);           // {(x, 1/x) : x != 0} in F_2^(2m)
// {(x,y) : x^2 + xy + c y^2 = 1} for the first c of absolute trace one
SidonSet conic_set(int m);

// Complete sets found by seeded greedy search and frozen; verified Sidon
// and complete by the tests.
struct NamedSidonSet {
    std::string name;
    int dim = 0;
    size_t size = 0;
    uint64_t aut_order = 0;   // expected automorphism group order
    SidonSet set;
};
const std::vector<NamedSidonSet>& bundled_sidon_sets();
SidonSet named_sidon_set(const std::string& name, int dim = 0);
std::vector<std::string> sidon_set_names();

}  // namespace affdist
