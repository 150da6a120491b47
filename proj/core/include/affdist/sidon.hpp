#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "affdist/gf2.hpp"

// Sidon sets in F_2^d: a set is Sidon when all sums of distinct pairs are
// distinct, equivalently x+y != z+w whenever at least three of the four
// points differ.

namespace affdist {

struct SidonSet {
    int dim = 0;
    std::vector<uint32_t> points;   // ordered, distinct

    size_t size() const { return points.size(); }
    bool operator==(const SidonSet&) const = default;
};

// Direct-indexed pair-sum table; dim <= 26.
class PairSums {
  public:
    explicit PairSums(int dim);
    bool test(uint32_t v) const { return (bits_[v >> 6] >> (v & 63)) & 1; }
    void set(uint32_t v) { bits_[v >> 6] |= uint64_t(1) << (v & 63); }

  private:
    std::vector<uint64_t> bits_;
};

// Throws on duplicate points.
bool is_sidon(std::span<const uint32_t> points, int dim);
bool is_sidon(const SidonSet& s);

// Throws if s is not Sidon.
bool is_complete_sidon(const SidonSet& s);

// Points p that keep s Sidon when added.
std::vector<uint32_t> sidon_extension_points(const SidonSet& s);

// Extends s to a complete Sidon set, trying candidate points in an order
// shuffled by the seed. Already-complete input comes back unchanged.
SidonSet greedy_complete(const SidonSet& s, uint64_t seed);

struct GerberaConfig {
    uint32_t center = 0;
    std::vector<std::array<uint32_t, 3>> leaves;   // each sorted, XOR = center

    int size() const { return int(leaves.size()); }
    std::vector<uint32_t> all_points() const;
};

// All 3-element subsets {x,y,z} of s with x^y^z = w, sorted ascending,
// ordered by (smallest, middle) element.
std::vector<std::array<uint32_t, 3>> gerbera_leaves(const SidonSet& s, uint32_t w);

// Streams every collection of t pairwise-disjoint leaves, collections in
// lexicographic order of leaf keys. Visitor returns false to stop early.
void enumerate_gerbera(const SidonSet& s, uint32_t w, int t,
                       const std::function<bool(const GerberaConfig&)>& visit);

// Dimension of the smallest affine subspace containing the points.
int affine_span_dim(std::span<const uint32_t> points);

// Largest size of a Sidon set in F_2^dim: exact for dim 2..9, the
// floor(sqrt(2)*2^(dim/2) + 1/2) counting bound above that.
int max_complete_sidon_size(int dim);

// File format: first line "dim size", then size lines of hex vectors.
void write_sidon_set(std::ostream& os, const SidonSet& s);
SidonSet read_sidon_set(std::istream& is);
void save_sidon_set(const std::string& path, const SidonSet& s);
SidonSet load_sidon_set(const std::string& path);

}  // namespace affdist
