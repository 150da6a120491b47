#include "affdist/gf2.hpp"

#include <stdexcept>

namespace affdist {

const std::array<uint32_t, 17>& standard_moduli() {
    static const std::array<uint32_t, 17> tbl = {
        0,      0x2,    0x7,    0xb,    0x13,   0x25,   0x43,   0x83,
        0x11b,  0x203,  0x409,  0x805,  0x1009, 0x201b, 0x4021, 0x8003,
        0x1002b,
    };
    return tbl;
}

FieldSpec FieldSpec::standard(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("FieldSpec: n must be 1..16");
    return FieldSpec{n, standard_moduli()[size_t(n)]};
}

static uint32_t poly_mod(uint64_t a, uint32_t m) {
    int dm = int(std::bit_width(uint64_t(m))) - 1;
    while (a >> dm) {
        int da = int(std::bit_width(a)) - 1;
        a ^= uint64_t(m) << (da - dm);
    }
    return uint32_t(a);
}

bool gf2_poly_irreducible(uint32_t poly, int degree) {
    if (int(std::bit_width(poly)) - 1 != degree || degree < 1) return false;
    // trial division by every polynomial of degree 1..degree/2
    for (int d = 1; d <= degree / 2; ++d)
        for (uint32_t q = 1u << d; q < (2u << d); ++q)
            if (poly_mod(poly, q) == 0) return false;
    return true;
}

uint32_t gf_mul(const FieldSpec& k, uint32_t a, uint32_t b) {
    uint32_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a >> k.n) a ^= k.modulus;
    }
    return r;
}

uint32_t gf_pow(const FieldSpec& k, uint32_t a, uint64_t e) {
    if (a == 0) return e == 0 ? 1u : 0u;
    uint32_t group = k.size() - 1;
    e %= group;
    uint32_t r = 1, base = a;
    while (e) {
        if (e & 1) r = gf_mul(k, r, base);
        base = gf_mul(k, base, base);
        e >>= 1;
    }
    return r;
}

int gf_trace(const FieldSpec& k, uint32_t a) {
    uint32_t acc = 0, t = a;
    for (int i = 0; i < k.n; ++i) {
        acc ^= t;
        t = gf_mul(k, t, t);
    }
    // acc is 0 or 1 in the field: the trace lands in the prime field
    return int(acc & 1);
}

BitMatrix BitMatrix::identity(int n) {
    BitMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.w_[size_t(i)] = uint64_t(1) << i;
    return m;
}

BitMatrix BitMatrix::from_rows(std::span<const uint64_t> rows, int cols) {
    BitMatrix m(int(rows.size()), cols);
    for (size_t i = 0; i < rows.size(); ++i) m.w_[i] = rows[i];
    return m;
}

void BitMatrix::set(int i, int j, int v) {
    if (v)
        w_[size_t(i)] |= uint64_t(1) << j;
    else
        w_[size_t(i)] &= ~(uint64_t(1) << j);
}

uint64_t BitMatrix::apply(uint64_t x) const {
    uint64_t acc = 0;
    for (int i = 0; i < r_; ++i)
        if ((x >> i) & 1) acc ^= w_[size_t(i)];
    return acc;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j)
            if (at(i, j)) t.set(j, i, 1);
    return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
    if (c_ != rhs.r_) throw std::invalid_argument("BitMatrix: shape mismatch");
    BitMatrix out(r_, rhs.c_);
    for (int i = 0; i < r_; ++i) out.w_[size_t(i)] = rhs.apply(w_[size_t(i)]);
    return out;
}

BitMatrix BitMatrix::rref() const {
    BitMatrix m = *this;
    int pr = 0;
    for (int col = 0; col < c_ && pr < r_; ++col) {
        int pivot = -1;
        for (int i = pr; i < r_; ++i)
            if (m.at(i, col)) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(m.w_[size_t(pr)], m.w_[size_t(pivot)]);
        for (int i = 0; i < r_; ++i)
            if (i != pr && m.at(i, col)) m.w_[size_t(i)] ^= m.w_[size_t(pr)];
        ++pr;
    }
    return m;
}

int BitMatrix::rank() const {
    BitMatrix m = rref();
    int r = 0;
    for (int i = 0; i < r_; ++i)
        if (m.w_[size_t(i)]) ++r;
    return r;
}

BitMatrix BitMatrix::inverse() const {
    if (r_ != c_) return {};
    // eliminate on [M | I]
    std::vector<uint64_t> left(w_);
    std::vector<uint64_t> right(size_t(r_), 0);
    for (int i = 0; i < r_; ++i) right[size_t(i)] = uint64_t(1) << i;
    int pr = 0;
    for (int col = 0; col < c_; ++col) {
        int pivot = -1;
        for (int i = pr; i < r_; ++i)
            if ((left[size_t(i)] >> col) & 1) { pivot = i; break; }
        if (pivot < 0) return {};
        std::swap(left[size_t(pr)], left[size_t(pivot)]);
        std::swap(right[size_t(pr)], right[size_t(pivot)]);
        for (int i = 0; i < r_; ++i)
            if (i != pr && ((left[size_t(i)] >> col) & 1)) {
                left[size_t(i)] ^= left[size_t(pr)];
                right[size_t(i)] ^= right[size_t(pr)];
            }
        ++pr;
    }
    BitMatrix inv(r_, c_);
    inv.w_ = right;
    return inv;
}

std::pair<int, BitMatrix> rank_and_span(const BitMatrix& m) {
    BitMatrix r = m.rref();
    int rank = 0;
    for (int i = 0; i < r.rows(); ++i)
        if (r.row(i)) ++rank;
    return {rank, r};
}

AffineMap AffineMap::identity(int n) { return {BitMatrix::identity(n), 0}; }

AffineMap AffineMap::after(const AffineMap& g) const {
    if (g.out_dim() != in_dim()) throw std::invalid_argument("AffineMap: shape mismatch");
    return {g.matrix * matrix, uint32_t(matrix.apply(g.offset)) ^ offset};
}

std::vector<uint64_t> AffineMap::key() const {
    std::vector<uint64_t> k;
    k.reserve(size_t(in_dim()) + 1);
    for (int i = 0; i < in_dim(); ++i) k.push_back(matrix.row(i));
    k.push_back(offset);
    return k;
}

AffineSubspace AffineSubspace::make(int ambient, uint32_t offset,
                                    std::vector<uint32_t> basis) {
    Echelon e;
    for (uint32_t v : basis)
        if (!e.insert(v)) throw std::invalid_argument("AffineSubspace: dependent basis");
    AffineSubspace s;
    s.ambient = ambient;
    s.offset = offset;
    s.basis = std::move(basis);
    return s;
}

bool AffineSubspace::contains(uint32_t p) const {
    Echelon e;
    for (uint32_t v : basis) e.insert(v);
    return e.reduce(p ^ offset) == 0;
}

std::vector<uint32_t> AffineSubspace::points() const {
    std::vector<uint32_t> pts(size_t(1) << basis.size());
    pts[0] = offset;
    for (size_t i = 1; i < pts.size(); ++i)
        pts[i] = pts[i & (i - 1)] ^ basis[size_t(std::countr_zero(i))];
    return pts;
}

}  // namespace affdist
