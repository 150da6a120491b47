#include "affdist/sidon_iso.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace affdist {

Perm perm_identity(int degree) {
    Perm p(static_cast<size_t>(degree));
    for (int i = 0; i < degree; ++i) p[size_t(i)] = uint8_t(i);
    return p;
}

Perm perm_compose(const Perm& a, const Perm& b) {
    Perm r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
    return r;
}

Perm perm_inverse(const Perm& p) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[p[i]] = uint8_t(i);
    return r;
}

std::string u128_to_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s += char('0' + int(v % 10));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

static unsigned __int128 factorial128(int k) {
    unsigned __int128 r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

std::vector<uint32_t> canonical_subspace(std::vector<uint32_t> basis) {
    std::array<uint32_t, 32> piv{};
    for (uint32_t v : basis) {
        while (v) {
            int h = 31 - std::countl_zero(v);
            if (!piv[size_t(h)]) { piv[size_t(h)] = v; break; }
            v ^= piv[size_t(h)];
        }
    }
    std::vector<uint32_t> rows;
    for (int h = 31; h >= 0; --h)
        if (piv[size_t(h)]) rows.push_back(piv[size_t(h)]);
    // back-substitute: clear each pivot bit from every other row
    for (size_t i = 0; i < rows.size(); ++i) {
        uint32_t pivot = uint32_t(1) << (31 - std::countl_zero(rows[i]));
        for (size_t j = 0; j < rows.size(); ++j)
            if (j != i && (rows[j] & pivot)) rows[j] ^= rows[i];
    }
    std::sort(rows.begin(), rows.end(), std::greater<>());
    return rows;
}

SidonCode sidon_code(const SidonSet& s) {
    const int d = s.dim;
    const int k = int(s.points.size());
    BitMatrix H(k, d + 1);
    for (int i = 0; i < k; ++i)
        H.set_row(i, uint64_t(s.points[size_t(i)]) | (uint64_t(1) << d));
    if (H.rank() != d + 1)
        throw std::invalid_argument(
            "sidon_code: affine span is not the full ambient space (quotient to the span first)");
    std::vector<uint32_t> cols(size_t(d) + 1, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= d; ++j)
            if (H.at(i, j)) cols[size_t(j)] |= uint32_t(1) << i;
    SidonCode code;
    code.dim = d;
    code.size = k;
    code.H = std::move(H);
    code.code = canonical_subspace(cols);
    return code;
}

uint32_t permute_code_word(const Perm& sigma, uint32_t u) {
    uint32_t r = 0;
    while (u) {
        int j = std::countr_zero(u);
        u &= u - 1;
        r |= uint32_t(1) << sigma[size_t(j)];
    }
    return r;
}

bool permutation_respects_code(const Perm& sigma, const SidonCode& c1,
                               const SidonCode& c2) {
    if (c1.size != c2.size || int(sigma.size()) != c1.size)
        throw std::invalid_argument("permutation_respects_code: degree mismatch");
    std::vector<uint32_t> moved;
    moved.reserve(c1.code.size());
    for (uint32_t u : c1.code) moved.push_back(permute_code_word(sigma, u));
    return canonical_subspace(std::move(moved)) == c2.code;
}

IncidenceGraph build_gamma(const SidonSet& s) {
    const int k = int(s.points.size());
    IncidenceGraph g;
    g.npoints = k;
    const auto& p = s.points;
    for (int a = 0; a + 5 < k; ++a)
        for (int b = a + 1; b + 4 < k; ++b)
            for (int c = b + 1; c + 3 < k; ++c) {
                uint32_t xabc = p[a] ^ p[b] ^ p[c];
                for (int d = c + 1; d + 2 < k; ++d)
                    for (int e = d + 1; e + 1 < k; ++e) {
                        uint32_t x5 = xabc ^ p[d] ^ p[e];
                        for (int f = e + 1; f < k; ++f)
                            if ((x5 ^ p[f]) == 0)
                                g.blocks.push_back((1u << a) | (1u << b) | (1u << c) |
                                                   (1u << d) | (1u << e) | (1u << f));
                    }
            }
    return g;
}

unsigned __int128 PermutationSet::order() const {
    if (symmetric) return factorial128(degree);
    return (unsigned __int128)elements.size();
}

std::vector<Perm> PermutationSet::generators() const {
    if (symmetric) {
        std::vector<Perm> g;
        if (degree >= 2) {
            Perm t = perm_identity(degree);
            std::swap(t[0], t[1]);
            g.push_back(t);
            Perm c(static_cast<size_t>(degree));
            for (int i = 0; i < degree; ++i) c[size_t(i)] = uint8_t((i + 1) % degree);
            g.push_back(c);
        }
        return g;
    }
    return elements;   // small groups, no reduction attempted
}

// ---------------------------------------------------------------------------
// Incidence graph isomorphism search: equitable color refinement on both
// sides, then depth-first assignment with partial-block pruning against the
// sub-mask table of the target graph.

namespace {

struct RefinedColors {
    std::vector<int> c1, c2;
    bool compatible = true;
};

RefinedColors refine_colors(const IncidenceGraph& g1, const IncidenceGraph* g2) {
    RefinedColors rc;
    rc.c1.assign(size_t(g1.npoints), 0);
    if (g2) rc.c2.assign(size_t(g2->npoints), 0);
    int ncolors = 1;
    for (int round = 0; round < g1.npoints + 2; ++round) {
        std::map<std::vector<int>, int> blockIds;
        auto block_colors = [&](const IncidenceGraph& g, const std::vector<int>& col) {
            std::vector<int> bc(g.blocks.size());
            for (size_t bi = 0; bi < g.blocks.size(); ++bi) {
                std::vector<int> sig;
                uint32_t m = g.blocks[bi];
                while (m) {
                    sig.push_back(col[size_t(std::countr_zero(m))]);
                    m &= m - 1;
                }
                std::sort(sig.begin(), sig.end());
                auto [it, _] = blockIds.try_emplace(sig, int(blockIds.size()));
                bc[bi] = it->second;
            }
            return bc;
        };
        auto bc1 = block_colors(g1, rc.c1);
        std::vector<int> bc2;
        if (g2) bc2 = block_colors(*g2, rc.c2);

        std::map<std::pair<int, std::vector<int>>, int> pointIds;
        auto point_colors = [&](const IncidenceGraph& g, const std::vector<int>& col,
                                const std::vector<int>& bc) {
            std::vector<std::vector<int>> incident(size_t(g.npoints));
            for (size_t bi = 0; bi < g.blocks.size(); ++bi) {
                uint32_t m = g.blocks[bi];
                while (m) {
                    incident[size_t(std::countr_zero(m))].push_back(bc[bi]);
                    m &= m - 1;
                }
            }
            std::vector<int> out(size_t(g.npoints));
            for (int v = 0; v < g.npoints; ++v) {
                auto& sig = incident[size_t(v)];
                std::sort(sig.begin(), sig.end());
                auto [it, _] =
                    pointIds.try_emplace({col[size_t(v)], std::move(sig)}, int(pointIds.size()));
                out[size_t(v)] = it->second;
            }
            return out;
        };
        auto n1 = point_colors(g1, rc.c1, bc1);
        std::vector<int> n2;
        if (g2) n2 = point_colors(*g2, rc.c2, bc2);
        int newColors = int(pointIds.size());
        rc.c1 = std::move(n1);
        if (g2) rc.c2 = std::move(n2);
        if (newColors == ncolors) break;
        ncolors = newColors;
    }
    if (g2) {
        auto s1 = rc.c1, s2 = rc.c2;
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        rc.compatible = (s1 == s2);
    }
    return rc;
}

struct IsoSearch {
    const IncidenceGraph& g1;
    const IncidenceGraph& g2;
    std::vector<int> col1, col2;
    std::vector<std::vector<int>> blocksOf1;
    std::unordered_set<uint32_t> subMasks2;
    std::vector<int> order;
    std::vector<int> img;
    std::vector<char> usedW;
    std::vector<uint32_t> pimg;
    bool collect_all = false;
    size_t limit = size_t(1) << 21;
    std::vector<Perm> found;
    bool overflow = false;
    bool stop = false;

    IsoSearch(const IncidenceGraph& a, const IncidenceGraph& b) : g1(a), g2(b) {}

    void prepare() {
        blocksOf1.assign(size_t(g1.npoints), {});
        for (size_t bi = 0; bi < g1.blocks.size(); ++bi) {
            uint32_t m = g1.blocks[bi];
            while (m) {
                blocksOf1[size_t(std::countr_zero(m))].push_back(int(bi));
                m &= m - 1;
            }
        }
        for (uint32_t b : g2.blocks) {
            // all subsets of each target block
            uint32_t sub = b;
            while (true) {
                subMasks2.insert(sub);
                if (sub == 0) break;
                sub = (sub - 1) & b;
            }
        }
        // processing order: grow through blocks so partial pruning bites early
        std::vector<char> placed(size_t(g1.npoints), 0);
        int maxColor = 0;
        for (int c : col1) maxColor = std::max(maxColor, c);
        std::vector<int> classSize(size_t(maxColor) + 1, 0);
        for (int c : col1) ++classSize[size_t(c)];
        for (int step = 0; step < g1.npoints; ++step) {
            int best = -1;
            long bestScore = 0;
            for (int v = 0; v < g1.npoints; ++v) {
                if (placed[size_t(v)]) continue;
                long touched = 0;
                for (int bi : blocksOf1[size_t(v)]) {
                    uint32_t m = g1.blocks[size_t(bi)];
                    bool any = false;
                    uint32_t mm = m;
                    while (mm) {
                        if (placed[size_t(std::countr_zero(mm))]) { any = true; break; }
                        mm &= mm - 1;
                    }
                    if (any) ++touched;
                }
                long score = touched * 1000 - classSize[size_t(col1[size_t(v)])];
                if (best < 0 || score > bestScore) { bestScore = score; best = v; }
            }
            order.push_back(best);
            placed[size_t(best)] = 1;
        }
        img.assign(size_t(g1.npoints), -1);
        usedW.assign(size_t(g2.npoints), 0);
        pimg.assign(g1.blocks.size(), 0);
    }

    bool apply(int v, int w) {
        const auto& bs = blocksOf1[size_t(v)];
        for (size_t i = 0; i < bs.size(); ++i) {
            uint32_t& m = pimg[size_t(bs[i])];
            m |= uint32_t(1) << w;
            if (!subMasks2.count(m)) {
                m &= ~(uint32_t(1) << w);
                for (size_t j = 0; j < i; ++j) pimg[size_t(bs[j])] &= ~(uint32_t(1) << w);
                return false;
            }
        }
        return true;
    }

    void undo(int v, int w) {
        for (int bi : blocksOf1[size_t(v)]) pimg[size_t(bi)] &= ~(uint32_t(1) << w);
    }

    void dfs(int depth) {
        if (stop) return;
        if (depth == g1.npoints) {
            Perm p(size_t(g1.npoints));
            for (int v = 0; v < g1.npoints; ++v) p[size_t(v)] = uint8_t(img[size_t(v)]);
            found.push_back(std::move(p));
            if (!collect_all) stop = true;
            if (found.size() > limit) { overflow = true; stop = true; }
            return;
        }
        int v = order[size_t(depth)];
        for (int w = 0; w < g2.npoints && !stop; ++w) {
            if (usedW[size_t(w)] || col2[size_t(w)] != col1[size_t(v)]) continue;
            if (!apply(v, w)) continue;
            usedW[size_t(w)] = 1;
            img[size_t(v)] = w;
            dfs(depth + 1);
            img[size_t(v)] = -1;
            usedW[size_t(w)] = 0;
            undo(v, w);
        }
    }
};

}  // namespace

PermutationSet graph_aut(const IncidenceGraph& g) {
    PermutationSet out;
    out.degree = g.npoints;
    if (g.blocks.empty()) {
        out.symmetric = true;
        return out;
    }
    auto rc = refine_colors(g, &g);
    IsoSearch s(g, g);
    s.col1 = rc.c1;
    s.col2 = rc.c2;
    s.collect_all = true;
    s.prepare();
    s.dfs(0);
    if (s.overflow)
        throw std::runtime_error("graph_aut: automorphism group too large to enumerate");
    out.elements = std::move(s.found);
    return out;
}

std::optional<Perm> graph_isomorphism(const IncidenceGraph& g1, const IncidenceGraph& g2) {
    if (g1.npoints != g2.npoints || g1.blocks.size() != g2.blocks.size()) return std::nullopt;
    if (g1.blocks.empty()) return perm_identity(g1.npoints);
    auto rc = refine_colors(g1, &g2);
    if (!rc.compatible) return std::nullopt;
    IsoSearch s(g1, g2);
    s.col1 = rc.c1;
    s.col2 = rc.c2;
    s.collect_all = false;
    s.prepare();
    s.dfs(0);
    if (s.found.empty()) return std::nullopt;
    return s.found.front();
}

// enumerate Sym(k) explicitly; callers guard the size
static std::vector<Perm> all_permutations(int k) {
    std::vector<uint8_t> base(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) base[size_t(i)] = uint8_t(i);
    std::vector<Perm> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

// A with H_S1 A = P_sigma H_S2, built from d+1 independent rows and
// verified on every row.
static BitMatrix solve_iso_matrix(const SidonCode& c1, const SidonCode& c2, const Perm& sigma) {
    const int d1 = c1.dim + 1;
    Echelon e;
    std::vector<int> rows;
    for (int i = 0; i < c1.size && int(rows.size()) < d1; ++i)
        if (e.insert(uint32_t(c1.H.row(i)))) rows.push_back(i);
    if (int(rows.size()) != d1) throw std::logic_error("solve_iso_matrix: rank deficiency");
    BitMatrix R(d1, d1), T(d1, d1);
    for (int i = 0; i < d1; ++i) {
        R.set_row(i, c1.H.row(rows[size_t(i)]));
        T.set_row(i, c2.H.row(sigma[size_t(rows[size_t(i)])]));
    }
    BitMatrix Rinv = R.inverse();
    if (Rinv.rows() == 0) throw std::logic_error("solve_iso_matrix: singular row basis");
    BitMatrix A = Rinv * T;
    for (int i = 0; i < c1.size; ++i)
        if (A.apply(c1.H.row(i)) != c2.H.row(sigma[size_t(i)]))
            throw std::logic_error("solve_iso_matrix: permutation does not respect the code");
    return A;
}

SidonAutGroup aut_sidon(const SidonSet& s) {
    if (!is_sidon(s)) throw std::invalid_argument("aut_sidon: input not Sidon");
    SidonCode code = sidon_code(s);
    IncidenceGraph g = build_gamma(s);
    PermutationSet auts = graph_aut(g);

    SidonAutGroup out;
    out.set_size = int(s.points.size());
    out.dim = s.dim;

    std::vector<Perm> pool;
    if (auts.symmetric) {
        if (out.set_size <= 9) {
            pool = all_permutations(out.set_size);
        } else {
            // check whether the symmetric generators already stabilize the code
            auto gens = auts.generators();
            bool all = true;
            for (const auto& p : gens)
                if (!permutation_respects_code(p, code, code)) { all = false; break; }
            if (!all)
                throw std::runtime_error(
                    "aut_sidon: unconstrained graph with large degree, stabilizer not computable");
            out.symmetric = true;
            out.order = factorial128(out.set_size);
            out.perms = gens;
            for (const auto& p : out.perms) out.matrices.push_back(solve_iso_matrix(code, code, p));
            return out;
        }
    } else {
        pool = std::move(auts.elements);
    }

    for (const auto& p : pool)
        if (permutation_respects_code(p, code, code)) out.perms.push_back(p);
    out.order = (unsigned __int128)out.perms.size();
    out.matrices.reserve(out.perms.size());
    for (const auto& p : out.perms) out.matrices.push_back(solve_iso_matrix(code, code, p));
    return out;
}

std::optional<SidonIsomorphism> isom_sidon(const SidonSet& s1, const SidonSet& s2) {
    if (s1.dim != s2.dim || s1.points.size() != s2.points.size()) return std::nullopt;
    if (!is_sidon(s1) || !is_sidon(s2)) throw std::invalid_argument("isom_sidon: inputs not Sidon");
    SidonCode c1 = sidon_code(s1);
    SidonCode c2 = sidon_code(s2);
    IncidenceGraph g1 = build_gamma(s1);
    IncidenceGraph g2 = build_gamma(s2);

    auto phi = graph_isomorphism(g1, g2);
    if (!phi) return std::nullopt;

    std::vector<uint32_t> moved;
    for (uint32_t u : c1.code) moved.push_back(permute_code_word(*phi, u));
    auto transported = canonical_subspace(std::move(moved));

    PermutationSet auts = graph_aut(g2);
    std::vector<Perm> pool;
    if (auts.symmetric) {
        if (c2.size > 9)
            throw std::runtime_error("isom_sidon: unconstrained graph with large degree");
        pool = all_permutations(c2.size);
    } else {
        pool = std::move(auts.elements);
    }
    for (const auto& alpha : pool) {
        std::vector<uint32_t> m2;
        for (uint32_t u : transported) m2.push_back(permute_code_word(alpha, u));
        if (canonical_subspace(std::move(m2)) == c2.code) {
            Perm sigma = perm_compose(alpha, *phi);
            SidonIsomorphism iso;
            iso.sigma = sigma;
            iso.matrix = solve_iso_matrix(c1, c2, sigma);
            return iso;
        }
    }
    return std::nullopt;
}

bool verify_isomorphism(const SidonSet& s1, const SidonSet& s2, const SidonIsomorphism& iso) {
    if (s1.points.size() != s2.points.size() || s1.dim != s2.dim) return false;
    const int d = s1.dim;
    if (iso.matrix.rows() != d + 1 || iso.matrix.cols() != d + 1) return false;
    for (int i = 0; i < d; ++i)
        if (iso.matrix.at(i, d) != 0) return false;
    if (iso.matrix.at(d, d) != 1) return false;
    if (iso.matrix.inverse().rows() == 0) return false;
    for (size_t i = 0; i < s1.points.size(); ++i) {
        uint64_t row = uint64_t(s1.points[i]) | (uint64_t(1) << d);
        uint64_t want = uint64_t(s2.points[iso.sigma[i]]) | (uint64_t(1) << d);
        if (iso.matrix.apply(row) != want) return false;
    }
    return true;
}

OrbitStabilizer subspace_orbit_stabilizer(const std::vector<Perm>& elements,
                                          const SidonCode& code) {
    OrbitStabilizer out;
    std::map<std::vector<uint32_t>, bool> seen;
    for (const auto& p : elements) {
        std::vector<uint32_t> moved;
        for (uint32_t u : code.code) moved.push_back(permute_code_word(p, u));
        auto key = canonical_subspace(std::move(moved));
        if (key == code.code) out.stabilizer.push_back(p);
        if (!seen.count(key)) {
            seen[key] = true;
            out.orbit.push_back(key);
        }
    }
    return out;
}

void write_isomorphism(std::ostream& os, const SidonIsomorphism& iso) {
    os << iso.matrix.rows() << ' ' << iso.sigma.size() << '\n';
    for (int i = 0; i < iso.matrix.rows(); ++i)
        os << std::hex << iso.matrix.row(i) << std::dec << '\n';
    for (size_t i = 0; i < iso.sigma.size(); ++i)
        os << int(iso.sigma[i]) << (i + 1 < iso.sigma.size() ? ' ' : '\n');
}

SidonIsomorphism read_isomorphism(std::istream& is) {
    int d1 = 0;
    size_t deg = 0;
    if (!(is >> d1 >> deg)) throw std::runtime_error("isomorphism: bad header");
    SidonIsomorphism iso;
    iso.matrix = BitMatrix(d1, d1);
    for (int i = 0; i < d1; ++i) {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("isomorphism: truncated");
        iso.matrix.set_row(i, std::stoull(tok, nullptr, 16));
    }
    iso.sigma.resize(deg);
    for (auto& v : iso.sigma) {
        int x;
        if (!(is >> x)) throw std::runtime_error("isomorphism: truncated");
        v = uint8_t(x);
    }
    return iso;
}

}  // namespace affdist
