#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

// Finite field GF(2^n) arithmetic on machine words, plus GF(2) linear
// algebra (bit matrices, affine maps, affine subspaces).
//
// Encoding convention used by the whole library: the integer u encodes the
// field element sum_i u_i * alpha^i, where alpha is a root of the modulus
// and bit 0 is the constant term. Truth-table indices use the same integer.

namespace affdist {

inline int parity(uint32_t x) { return std::popcount(x) & 1; }
inline int parity64(uint64_t x) { return std::popcount(x) & 1; }

// Inner product of two bit vectors packed in words.
inline int dot(uint32_t u, uint32_t v) { return parity(u & v); }

struct FieldSpec {
    int n = 0;              // extension degree, 1..16
    uint32_t modulus = 0;   // irreducible polynomial, (n+1) bits

    // Field with the lexicographically smallest irreducible modulus of
    // degree n (see standard_moduli()).
    static FieldSpec standard(int n);

    uint32_t size() const { return 1u << n; }
};

// standard_moduli()[n] is the smallest (n+1)-bit integer encoding an
// irreducible polynomial of degree n over GF(2), for n = 1..16:
//
//   n : 1    2    3    4     5     6     7     8      9
//       x    x2+x+1  x3+x+1  x4+x+1  x5+x2+1  x6+x+1  x7+x+1  x8+x4+x3+x+1  x9+x+1
//   n : 10       11       12       13             14       15       16
//       x10+x3+1 x11+x2+1 x12+x3+1 x13+x4+x3+x+1  x14+x5+1 x15+x+1  x16+x5+x3+x+1
const std::array<uint32_t, 17>& standard_moduli();

bool gf2_poly_irreducible(uint32_t poly, int degree);

uint32_t gf_mul(const FieldSpec& k, uint32_t a, uint32_t b);

// Square-and-multiply; exponents reduced mod 2^n-1 for a != 0; 0^0 = 1.
uint32_t gf_pow(const FieldSpec& k, uint32_t a, uint64_t e);

// Absolute trace Tr(a) = a + a^2 + ... + a^(2^(n-1)).
int gf_trace(const FieldSpec& k, uint32_t a);

// Row-major bit matrix; row i is a word whose bit j is entry (i,j).
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols) : r_(rows), c_(cols), w_(rows, 0) {}
    static BitMatrix identity(int n);
    static BitMatrix from_rows(std::span<const uint64_t> rows, int cols);

    int rows() const { return r_; }
    int cols() const { return c_; }
    uint64_t row(int i) const { return w_[i]; }
    void set_row(int i, uint64_t v) { w_[i] = v; }
    int at(int i, int j) const { return (w_[i] >> j) & 1; }
    void set(int i, int j, int v);

    // x interpreted as a row vector of rows() bits; result x * M.
    uint64_t apply(uint64_t x) const;

    BitMatrix transposed() const;
    BitMatrix operator*(const BitMatrix& rhs) const;
    bool operator==(const BitMatrix& rhs) const = default;

    int rank() const;
    // Reduced row echelon form (same shape, zero rows at the bottom),
    // the canonical representative of the row space. Pivot search runs
    // from column 0 upward.
    BitMatrix rref() const;
    // Inverse of a square matrix, or empty if singular.
    BitMatrix inverse() const;

  private:
    int r_ = 0, c_ = 0;
    std::vector<uint64_t> w_;
};

std::pair<int, BitMatrix> rank_and_span(const BitMatrix& m);

// A(x) = x * matrix + offset, x a row vector of in_dim() bits.
struct AffineMap {
    BitMatrix matrix;    // in_dim x out_dim
    uint32_t offset = 0;

    int in_dim() const { return matrix.rows(); }
    int out_dim() const { return matrix.cols(); }
    uint32_t apply(uint32_t x) const { return uint32_t(matrix.apply(x)) ^ offset; }
    static AffineMap identity(int n);
    // this applied after g
    AffineMap after(const AffineMap& g) const;
    // lexicographic key (row-major matrix bits, then offset)
    std::vector<uint64_t> key() const;
    bool operator==(const AffineMap&) const = default;
};

// Incremental GF(2) span with pivot = highest set bit. Not canonical,
// just enough for rank, membership and coset reduction.
struct Echelon {
    std::array<uint32_t, 32> piv{};
    int dim = 0;

    uint32_t reduce(uint32_t v) const {
        while (v) {
            int h = 31 - std::countl_zero(v);
            if (!piv[h]) return v;
            v ^= piv[h];
        }
        return 0;
    }
    // true if v was independent and is now part of the span
    bool insert(uint32_t v) {
        v = reduce(v);
        if (!v) return false;
        piv[31 - std::countl_zero(v)] = v;
        ++dim;
        return true;
    }
    bool contains(uint32_t v) const { return reduce(v) == 0; }
};

// Affine subspace offset + span(basis) of F_2^ambient.
struct AffineSubspace {
    int ambient = 0;
    uint32_t offset = 0;
    std::vector<uint32_t> basis;   // linearly independent

    // throws std::invalid_argument if the basis is dependent
    static AffineSubspace make(int ambient, uint32_t offset,
                               std::vector<uint32_t> basis);
    int dim() const { return int(basis.size()); }
    bool contains(uint32_t p) const;
    std::vector<uint32_t> points() const;   // all 2^dim points
};

}  // namespace affdist
