#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "affdist/gf2.hpp"

// Vectorial Boolean functions f : F_2^n -> F_2^m as truth tables, and
// their spectral / differential analysis.

namespace affdist {

struct VBF {
    int n = 0;
    int m = 0;
    std::vector<uint16_t> table;   // 2^n entries, each < 2^m

    uint32_t size() const { return 1u << n; }
    uint16_t operator()(uint32_t x) const { return table[x]; }
    bool operator==(const VBF&) const = default;
};

VBF vbf_from_table(int n, int m, std::vector<uint16_t> table);

// Power map x^d over GF(2^n); f(0) = 0 for every d >= 1.
VBF vbf_from_power(const FieldSpec& k, uint64_t d);

// W_f(a,b) = sum_x (-1)^(b.f(x) + a.x), stored row per output mask b.
struct WalshTable {
    int n = 0;
    int m = 0;
    std::vector<int32_t> values;   // values[(b << n) | a]

    int32_t at(uint32_t a, uint32_t b) const { return values[(size_t(b) << n) | a]; }
};

// In-place Walsh-Hadamard butterfly over a length-2^k array.
void fwht(int32_t* data, size_t len);

// Row b of the Walsh table (all a), via one fast transform.
std::vector<int32_t> walsh_row(const VBF& f, uint32_t b);

// Dense table; refuses n + m > 24 (compute rows on demand instead).
WalshTable walsh_table(const VBF& f);

int nonlinearity(const VBF& f);

struct DifferentialSpectrum {
    int n = 0;
    int m = 0;
    int delta_max = 0;
};

DifferentialSpectrum differential_spectrum(const VBF& f);
// counts[b] = #{x : f(x+a)+f(x) = b} for one fixed a
std::vector<int> differential_row(const VBF& f, uint32_t a);
bool is_apn(const VBF& f);   // requires n == m

// Graph point (x, f(x), 1) in F_2^(2n+1); bit layout x | f(x)<<n | 1<<2n.
std::vector<uint32_t> graph_of(const VBF& f);
// Plain graph (x, f(x)) in F_2^(2n).
std::vector<uint32_t> graph_points(const VBF& f);

// x -> v . f(x) as an (n,1)-function.
VBF component(const VBF& f, uint32_t v);

// L2 o f o L1 with invertible affine maps of matching shapes.
VBF affine_conjugate(const VBF& f, const AffineMap& l1, const AffineMap& l2);

// Truth-table text format: first line "n m", then 2^n lines with the
// hexadecimal value of table[u], u = 0..2^n-1.
void write_truth_table(std::ostream& os, const VBF& f);
VBF read_truth_table(std::istream& is);
void save_truth_table(const std::string& path, const VBF& f);
VBF load_truth_table(const std::string& path);

}  // namespace affdist
