#include "affdist/vbf.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace affdist {

VBF vbf_from_table(int n, int m, std::vector<uint16_t> table) {
    if (n < 1 || n > 16 || m < 1 || m > 16)
        throw std::invalid_argument("VBF: dimensions must be 1..16");
    if (table.size() != (size_t(1) << n))
        throw std::invalid_argument("VBF: table length must be 2^n");
    for (uint16_t v : table)
        if (m < 16 && v >= (1u << m)) throw std::invalid_argument("VBF: entry out of range");
    return VBF{n, m, std::move(table)};
}

VBF vbf_from_power(const FieldSpec& k, uint64_t d) {
    if (d == 0 || d >= k.size()) throw std::invalid_argument("vbf_from_power: need 1 <= d < 2^n");
    std::vector<uint16_t> t(k.size());
    for (uint32_t x = 0; x < k.size(); ++x) t[x] = uint16_t(gf_pow(k, x, d));
    return VBF{k.n, k.n, std::move(t)};
}

void fwht(int32_t* data, size_t len) {
    for (size_t half = 1; half < len; half <<= 1)
        for (size_t i = 0; i < len; i += half << 1)
            for (size_t j = i; j < i + half; ++j) {
                int32_t u = data[j], v = data[j + half];
                data[j] = u + v;
                data[j + half] = u - v;
            }
}

std::vector<int32_t> walsh_row(const VBF& f, uint32_t b) {
    std::vector<int32_t> row(f.size());
    for (uint32_t x = 0; x < f.size(); ++x)
        row[x] = 1 - 2 * parity(b & f.table[x]);
    fwht(row.data(), row.size());
    return row;
}

WalshTable walsh_table(const VBF& f) {
    if (f.n + f.m > 24)
        throw std::invalid_argument("walsh_table: n+m > 24, use walsh_row per b");
    WalshTable w{f.n, f.m, {}};
    w.values.resize(size_t(1) << (f.n + f.m));
    for (uint32_t b = 0; b < (1u << f.m); ++b) {
        auto row = walsh_row(f, b);
        std::copy(row.begin(), row.end(), w.values.begin() + (size_t(b) << f.n));
    }
    return w;
}

int nonlinearity(const VBF& f) {
    int32_t best = 0;
    for (uint32_t b = 1; b < (1u << f.m); ++b) {
        auto row = walsh_row(f, b);
        for (int32_t v : row) {
            int32_t a = v < 0 ? -v : v;
            if (a > best) best = a;
        }
    }
    return (1 << (f.n - 1)) - best / 2;
}

std::vector<int> differential_row(const VBF& f, uint32_t a) {
    std::vector<int> counts(size_t(1) << f.m, 0);
    for (uint32_t x = 0; x < f.size(); ++x)
        ++counts[uint32_t(f.table[x] ^ f.table[x ^ a])];
    return counts;
}

DifferentialSpectrum differential_spectrum(const VBF& f) {
    int delta = 0;
    std::vector<int> counts(size_t(1) << f.m);
    for (uint32_t a = 1; a < f.size(); ++a) {
        std::fill(counts.begin(), counts.end(), 0);
        for (uint32_t x = 0; x < f.size(); ++x) {
            int c = ++counts[uint32_t(f.table[x] ^ f.table[x ^ a])];
            if (c > delta) delta = c;
        }
    }
    return DifferentialSpectrum{f.n, f.m, delta};
}

bool is_apn(const VBF& f) {
    if (f.n != f.m) throw std::invalid_argument("is_apn: requires n == m");
    // early exit once any derivative value appears three times
    std::vector<int> counts(f.size());
    for (uint32_t a = 1; a < f.size(); ++a) {
        std::fill(counts.begin(), counts.end(), 0);
        for (uint32_t x = 0; x < f.size(); ++x)
            if (++counts[uint32_t(f.table[x] ^ f.table[x ^ a])] > 2) return false;
    }
    return true;
}

std::vector<uint32_t> graph_of(const VBF& f) {
    std::vector<uint32_t> g(f.size());
    for (uint32_t x = 0; x < f.size(); ++x)
        g[x] = x | (uint32_t(f.table[x]) << f.n) | (1u << (f.n + f.m));
    return g;
}

std::vector<uint32_t> graph_points(const VBF& f) {
    std::vector<uint32_t> g(f.size());
    for (uint32_t x = 0; x < f.size(); ++x)
        g[x] = x | (uint32_t(f.table[x]) << f.n);
    return g;
}

VBF component(const VBF& f, uint32_t v) {
    std::vector<uint16_t> t(f.size());
    for (uint32_t x = 0; x < f.size(); ++x) t[x] = uint16_t(parity(v & f.table[x]));
    return VBF{f.n, 1, std::move(t)};
}

VBF affine_conjugate(const VBF& f, const AffineMap& l1, const AffineMap& l2) {
    if (l1.in_dim() != f.n || l1.out_dim() != f.n)
        throw std::invalid_argument("affine_conjugate: inner map shape");
    if (l2.in_dim() != f.m || l2.out_dim() != f.m)
        throw std::invalid_argument("affine_conjugate: outer map shape");
    std::vector<uint16_t> t(f.size());
    for (uint32_t x = 0; x < f.size(); ++x)
        t[x] = uint16_t(l2.apply(f.table[l1.apply(x)]));
    return VBF{f.n, f.m, std::move(t)};
}

void write_truth_table(std::ostream& os, const VBF& f) {
    os << f.n << ' ' << f.m << '\n';
    for (uint32_t x = 0; x < f.size(); ++x) os << std::hex << f.table[x] << std::dec << '\n';
}

VBF read_truth_table(std::istream& is) {
    int n = 0, m = 0;
    if (!(is >> n >> m)) throw std::runtime_error("truth table: bad header");
    if (n < 1 || n > 16 || m < 1 || m > 16) throw std::runtime_error("truth table: bad dimensions");
    std::vector<uint16_t> t(size_t(1) << n);
    for (auto& e : t) {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("truth table: truncated");
        unsigned long v = std::stoul(tok, nullptr, 16);
        if (m < 16 && v >= (1ul << m)) throw std::runtime_error("truth table: entry out of range");
        e = uint16_t(v);
    }
    return VBF{n, m, std::move(t)};
}

void save_truth_table(const std::string& path, const VBF& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_truth_table(os, f);
}

VBF load_truth_table(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_truth_table(is);
}

}  // namespace affdist
