#include "affdist/sidon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace affdist {

PairSums::PairSums(int dim) {
    if (dim < 1 || dim > 26) throw std::invalid_argument("PairSums: dim must be 1..26");
    bits_.assign(size_t(1) << (dim <= 6 ? 0 : dim - 6), 0);
}

bool is_sidon(std::span<const uint32_t> points, int dim) {
    PairSums sums(dim);
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i] >> dim) throw std::invalid_argument("is_sidon: point out of range");
        for (size_t j = i + 1; j < points.size(); ++j) {
            uint32_t s = points[i] ^ points[j];
            if (s == 0) throw std::invalid_argument("is_sidon: duplicate points");
            if (sums.test(s)) return false;
            sums.set(s);
        }
    }
    return true;
}

bool is_sidon(const SidonSet& s) { return is_sidon(s.points, s.dim); }

std::vector<uint32_t> sidon_extension_points(const SidonSet& s) {
    if (!is_sidon(s)) throw std::invalid_argument("sidon_extension_points: input not Sidon");
    PairSums sums(s.dim);
    PairSums member(s.dim);
    for (size_t i = 0; i < s.points.size(); ++i) {
        member.set(s.points[i]);
        for (size_t j = i + 1; j < s.points.size(); ++j)
            sums.set(s.points[i] ^ s.points[j]);
    }
    std::vector<uint32_t> out;
    for (uint32_t p = 0; p < (1u << s.dim); ++p) {
        if (member.test(p)) continue;
        bool ok = true;
        for (uint32_t x : s.points)
            if (sums.test(p ^ x)) { ok = false; break; }
        if (ok) out.push_back(p);
    }
    return out;
}

bool is_complete_sidon(const SidonSet& s) { return sidon_extension_points(s).empty(); }

SidonSet greedy_complete(const SidonSet& s, uint64_t seed) {
    if (!is_sidon(s)) throw std::invalid_argument("greedy_complete: input not Sidon");
    PairSums sums(s.dim);
    PairSums member(s.dim);
    for (size_t i = 0; i < s.points.size(); ++i) {
        member.set(s.points[i]);
        for (size_t j = i + 1; j < s.points.size(); ++j)
            sums.set(s.points[i] ^ s.points[j]);
    }
    std::vector<uint32_t> order(size_t(1) << s.dim);
    for (uint32_t p = 0; p < order.size(); ++p) order[p] = p;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    SidonSet out = s;
    for (uint32_t p : order) {
        if (member.test(p)) continue;
        bool ok = true;
        for (uint32_t x : out.points)
            if (sums.test(p ^ x)) { ok = false; break; }
        if (!ok) continue;
        for (uint32_t x : out.points) sums.set(p ^ x);
        member.set(p);
        out.points.push_back(p);
    }
    return out;
}

std::vector<uint32_t> GerberaConfig::all_points() const {
    std::vector<uint32_t> pts;
    pts.reserve(leaves.size() * 3);
    for (const auto& l : leaves) pts.insert(pts.end(), l.begin(), l.end());
    return pts;
}

std::vector<std::array<uint32_t, 3>> gerbera_leaves(const SidonSet& s, uint32_t w) {
    std::vector<int32_t> index(size_t(1) << s.dim, -1);
    for (size_t i = 0; i < s.points.size(); ++i) index[s.points[i]] = int32_t(i);
    std::vector<std::array<uint32_t, 3>> leaves;
    for (size_t i = 0; i < s.points.size(); ++i)
        for (size_t j = i + 1; j < s.points.size(); ++j) {
            uint32_t z = s.points[i] ^ s.points[j] ^ w;
            if (z >> s.dim) continue;
            int32_t k = index[z];
            // keep each triple once, from its two smallest indices
            if (k <= int32_t(j)) continue;
            std::array<uint32_t, 3> leaf{s.points[i], s.points[j], z};
            std::sort(leaf.begin(), leaf.end());
            leaves.push_back(leaf);
        }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

void enumerate_gerbera(const SidonSet& s, uint32_t w, int t,
                       const std::function<bool(const GerberaConfig&)>& visit) {
    if (t < 1) throw std::invalid_argument("enumerate_gerbera: t must be positive");
    auto leaves = gerbera_leaves(s, w);
    if (int(leaves.size()) < t) return;

    std::vector<char> used(size_t(1) << s.dim, 0);
    std::vector<size_t> chosen;
    GerberaConfig cfg;
    cfg.center = w;
    Echelon span;
    bool stop = false;

    // depth-first over leaves in lexicographic order; prune on shared
    // points, and on spans growing by less than 2 per leaf while the
    // collection has at most 4 leaves (inside a Sidon set such small
    // collections always span exactly 2 per leaf)
    std::function<void(size_t, Echelon)> rec = [&](size_t from, Echelon sp) {
        if (stop) return;
        if (int(chosen.size()) == t) {
            cfg.leaves.clear();
            for (size_t idx : chosen) cfg.leaves.push_back(leaves[idx]);
            if (!visit(cfg)) stop = true;
            return;
        }
        size_t need = size_t(t) - chosen.size();
        for (size_t i = from; i + need <= leaves.size() && !stop; ++i) {
            const auto& l = leaves[i];
            if (used[l[0]] || used[l[1]] || used[l[2]]) continue;
            Echelon sp2 = sp;
            sp2.insert(l[0] ^ w);
            sp2.insert(l[1] ^ w);
            int depth = int(chosen.size()) + 1;
            if (depth <= 4 && sp2.dim != depth * 2) continue;
            used[l[0]] = used[l[1]] = used[l[2]] = 1;
            chosen.push_back(i);
            rec(i + 1, sp2);
            chosen.pop_back();
            used[l[0]] = used[l[1]] = used[l[2]] = 0;
        }
    };
    rec(0, span);
}

int affine_span_dim(std::span<const uint32_t> points) {
    if (points.empty()) throw std::invalid_argument("affine_span_dim: empty input");
    Echelon e;
    for (size_t i = 1; i < points.size(); ++i) e.insert(points[i] ^ points[0]);
    return e.dim;
}

int max_complete_sidon_size(int dim) {
    if (dim < 2) throw std::invalid_argument("max_complete_sidon_size: dim must be >= 2");
    static const int known[] = {3, 4, 6, 7, 9, 12, 18, 24};   // dim 2..9
    if (dim <= 9) return known[dim - 2];
    // floor(sqrt(2^(dim+1)) + 1/2)
    uint64_t v = uint64_t(1) << (dim + 1);
    uint64_t r = uint64_t(std::sqrt(double(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return int(v <= r * r + r ? r : r + 1);
}

void write_sidon_set(std::ostream& os, const SidonSet& s) {
    os << s.dim << ' ' << s.points.size() << '\n';
    for (uint32_t p : s.points) os << std::hex << p << std::dec << '\n';
}

SidonSet read_sidon_set(std::istream& is) {
    int dim = 0;
    size_t size = 0;
    if (!(is >> dim >> size)) throw std::runtime_error("sidon set: bad header");
    if (dim < 1 || dim > 26) throw std::runtime_error("sidon set: bad dimension");
    SidonSet s;
    s.dim = dim;
    s.points.resize(size);
    for (auto& p : s.points) {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("sidon set: truncated");
        unsigned long v = std::stoul(tok, nullptr, 16);
        if (v >> dim) throw std::runtime_error("sidon set: point out of range");
        p = uint32_t(v);
    }
    return s;
}

void save_sidon_set(const std::string& path, const SidonSet& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_sidon_set(os, s);
}

SidonSet load_sidon_set(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_sidon_set(is);
}

}  // namespace affdist
