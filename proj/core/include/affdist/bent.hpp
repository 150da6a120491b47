#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affdist/gf2.hpp"
#include "affdist/vbf.hpp"

// Left pre-quasifields (Q,+,*) on F_2^m and the vectorial bent
// constructions built on them. Pair index convention throughout:
// (x,y) -> x + 2^m * y.

namespace affdist {

struct QuasifieldViolation {
    int axiom = 0;          // 1 zero annihilation, 2 left distributivity, 3 bijectivity
    uint32_t x = 0, y = 0, z = 0;
    std::string describe() const;
};

struct PreQuasifield {
    int m = 0;
    std::string name;
    std::vector<uint16_t> star;   // star[(a << m) | b] = a * b

    uint32_t size() const { return 1u << m; }
    uint16_t mul(uint32_t a, uint32_t b) const { return star[(a << m) | b]; }
};

// Checks all three axioms exhaustively; nullopt when valid.
std::optional<QuasifieldViolation> validate_prequasifield(const PreQuasifield& q);

// GF(2^m) multiplication as a quasifield table.
PreQuasifield field_quasifield(const FieldSpec& k);
// Twisted operation a * b = a . b^(2^e) over GF(2^m), gcd(e,m) = 1.
PreQuasifield twisted_quasifield(const FieldSpec& k, int e);

// Right division: the a with x = a * y when y != 0, and 0 when y = 0.
// Requires a valid quasifield.
uint32_t star_divide(const PreQuasifield& q, uint32_t x, uint32_t y);

// Ingredients for the (2m,t)-bent constructions. tau is a t x m bit
// matrix applied as z -> row_i . z; gamma, h are (m,t) truth tables;
// sigma, pi are (m,m) truth tables.
struct BentSpec {
    int m = 0;
    int t = 0;
    std::vector<uint16_t> gamma;   // balanced (construct_ps)
    BitMatrix tau;                 // surjective linear (mm, qf)
    std::vector<uint16_t> sigma;   // invertible (qf)
    std::vector<uint16_t> h;       // arbitrary
    std::vector<uint16_t> pi;      // invertible (mm)

    uint32_t apply_tau(uint32_t z) const;
};

BentSpec default_bent_spec(int m, int t);   // tau = truncation, id maps, gamma balanced, h = 0

// Throwing checks, used by the constructions; error text names the
// violated property.
void require_balanced(const std::vector<uint16_t>& tbl, int m, int t, const char* what);
void require_invertible(const std::vector<uint16_t>& tbl, int m, const char* what);
void require_surjective_linear(const BitMatrix& tau, int m, int t);

// f(x,y) = tau(x . pi(y)) + h(y), product in GF(2^m).
VBF construct_mm(const FieldSpec& k, const BentSpec& spec);
// f(x,y) = gamma(x / y) with quasifield right division.
VBF construct_ps(const PreQuasifield& q, const BentSpec& spec);
// f(x,y) = tau(sigma(y) * x) + h(y).
VBF construct_qf(const PreQuasifield& q, const BentSpec& spec);

// All Walsh values with b != 0 have absolute value 2^(n/2). Requires even n.
bool is_vectorial_bent(const VBF& f);

// Quasifield table file: first line "m", then 2^m rows of 2^m hex entries
// (row a lists a * b for b = 0..2^m-1).
void write_quasifield(std::ostream& os, const PreQuasifield& q);
PreQuasifield read_quasifield(std::istream& is);
PreQuasifield load_quasifield(const std::string& path);

}  // namespace affdist
