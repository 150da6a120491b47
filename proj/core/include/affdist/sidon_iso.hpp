#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affdist/gf2.hpp"
#include "affdist/sidon.hpp"

// Isomorphisms and automorphisms of full-rank Sidon sets in F_2^d,
// through the code space of the point matrix and the incidence graph of
// zero-XOR 6-subsets. An isomorphism S1 -> S2 is an invertible affine map
// of the ambient space carrying S1 onto S2; on the (d+1)-bit homogeneous
// rows (point, 1) it is an invertible matrix A with H_S1 A = P_sigma H_S2.

namespace affdist {

using Perm = std::vector<uint8_t>;   // images: p[i] = image of i

Perm perm_identity(int degree);
Perm perm_compose(const Perm& a, const Perm& b);   // a after b
Perm perm_inverse(const Perm& p);

std::string u128_to_string(unsigned __int128 v);

struct SidonCode {
    int dim = 0;                     // ambient dimension d
    int size = 0;                    // |S|
    BitMatrix H;                     // |S| x (d+1), rows (point, 1)
    std::vector<uint32_t> code;      // canonical basis of the column space,
                                     // each word one |S|-bit column vector
};

// Requires the affine span of s to be all of F_2^dim (rank d+1), else throws.
SidonCode sidon_code(const SidonSet& s);

// Canonical (reduced echelon, sorted) basis of a span of |set|-bit words.
std::vector<uint32_t> canonical_subspace(std::vector<uint32_t> basis);

// Column vector action of P_sigma^T: bit j of u moves to bit sigma(j).
uint32_t permute_code_word(const Perm& sigma, uint32_t u);

bool permutation_respects_code(const Perm& sigma, const SidonCode& c1,
                               const SidonCode& c2);

struct IncidenceGraph {
    int npoints = 0;
    std::vector<uint32_t> blocks;   // zero-XOR 6-subsets as point-index masks
};

IncidenceGraph build_gamma(const SidonSet& s);

// Automorphisms of the incidence graph, acting on the points; the block
// action is induced. Either the full symmetric group (no blocks, or no
// constraints that bite) or an explicit element list.
struct PermutationSet {
    int degree = 0;
    bool symmetric = false;         // all of Sym(degree); elements empty
    std::vector<Perm> elements;     // explicit list, identity included
    unsigned __int128 order() const;
    std::vector<Perm> generators() const;   // small generating set
};

PermutationSet graph_aut(const IncidenceGraph& g);

// One isomorphism g1 -> g2 on points, or nullopt.
std::optional<Perm> graph_isomorphism(const IncidenceGraph& g1,
                                      const IncidenceGraph& g2);

struct SidonAutGroup {
    int set_size = 0;
    int dim = 0;
    unsigned __int128 order = 0;
    bool symmetric = false;          // stabilizer is all of Sym(set_size)
    std::vector<Perm> perms;         // explicit elements (or generators when symmetric)
    std::vector<BitMatrix> matrices; // (d+1)x(d+1), aligned with perms
};

// The group of invertible affine maps fixing s setwise.
SidonAutGroup aut_sidon(const SidonSet& s);

struct SidonIsomorphism {
    BitMatrix matrix;   // (d+1)x(d+1), block form [[A,0],[b,1]]
    Perm sigma;         // matrix sends point i of S1 to point sigma(i) of S2
};

// Affine isomorphism S1 -> S2, or nullopt when none exists.
std::optional<SidonIsomorphism> isom_sidon(const SidonSet& s1, const SidonSet& s2);

// H_S1 A = P_sigma H_S2, rechecked row by row.
bool verify_isomorphism(const SidonSet& s1, const SidonSet& s2,
                        const SidonIsomorphism& iso);

struct OrbitStabilizer {
    std::vector<std::vector<uint32_t>> orbit;   // canonical subspace keys
    std::vector<Perm> stabilizer;               // explicit elements
};

// Orbit of the code subspace under an explicit permutation list, with the
// exact stabilizer. Full enumeration; the groups here are small.
OrbitStabilizer subspace_orbit_stabilizer(const std::vector<Perm>& elements,
                                          const SidonCode& code);

// Certificate text: matrix rows in hex, permutation in one-line form.
void write_isomorphism(std::ostream& os, const SidonIsomorphism& iso);
SidonIsomorphism read_isomorphism(std::istream& is);

}  // namespace affdist
