#include "affdist/distance.hpp"

#include "affdist/bent.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace affdist {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

static double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int intersection_count(const VBF& f, const AffineMap& a) {
    if (a.in_dim() != f.n || a.out_dim() != f.m)
        throw std::invalid_argument("intersection_count: shape mismatch");
    int cnt = 0;
    for (uint32_t x = 0; x < f.size(); ++x)
        if (f.table[x] == a.apply(x)) ++cnt;
    return cnt;
}

bool distance_exact_feasible(int n, int m) {
    if (n < 1 || m < 1) return false;
    long double steps = std::exp2l((long double)n * m) * m * std::exp2l(m);
    return steps <= std::exp2l(38);
}

// ----- exact distance -------------------------------------------------------

namespace {

struct ExactBest {
    int64_t value = INT64_MIN;
    std::vector<uint64_t> key;
    uint64_t mstar = 0;
    uint32_t offset = 0;

    bool better(int64_t v, const std::vector<uint64_t>& k) const {
        if (v != value) return v > value;
        return k < key;
    }
};

AffineMap witness_from_mstar(int n, int m, uint64_t mstar, uint32_t offset) {
    // mstar packs the linear map F_2^m -> F_2^n, row j = bits [j*n, (j+1)*n);
    // the witness matrix is its transpose
    BitMatrix mat(n, m);
    for (int j = 0; j < m; ++j) {
        uint64_t row = (mstar >> (j * n)) & ((uint64_t(1) << n) - 1);
        for (int i = 0; i < n; ++i)
            if ((row >> i) & 1) mat.set(i, j, 1);
    }
    return AffineMap{std::move(mat), offset};
}

}  // namespace

ExactDistance distance_exact_witnessed(const VBF& f, int threads) {
    if (!distance_exact_feasible(f.n, f.m))
        throw std::invalid_argument(
            "distance_exact: budget 2^(nm)*m*2^m exceeds 2^38; use witness_search/gerbera_scan");
    const int n = f.n, m = f.m;
    const WalshTable W = walsh_table(f);
    const uint64_t total = uint64_t(1) << (n * m);
    const uint32_t maskn = (1u << n) - 1;
    const uint32_t M = 1u << m;

    threads = std::max(1, threads);
    std::atomic<uint64_t> next{0};
    const uint64_t chunk = std::max<uint64_t>(1024, total / (uint64_t(threads) * 64));
    std::vector<ExactBest> bests(static_cast<size_t>(threads));

    auto worker = [&](int tid) {
        ExactBest best;
        std::vector<uint32_t> arr(M);
        std::vector<int32_t> g(M);
        while (true) {
            uint64_t begin = next.fetch_add(chunk);
            if (begin >= total) break;
            uint64_t end = std::min(total, begin + chunk);
            for (uint64_t ms = begin; ms < end; ++ms) {
                arr[0] = 0;
                for (uint32_t v = 1; v < M; ++v) {
                    int j = std::countr_zero(v);
                    arr[v] = arr[v & (v - 1)] ^ uint32_t((ms >> (j * n)) & maskn);
                }
                for (uint32_t v = 0; v < M; ++v)
                    g[v] = W.values[(size_t(v) << n) | arr[v]];
                fwht(g.data(), M);
                for (uint32_t b = 0; b < M; ++b) {
                    if (g[b] < best.value) continue;
                    auto key = witness_from_mstar(n, m, ms, b).key();
                    if (best.better(g[b], key)) {
                        best.value = g[b];
                        best.key = std::move(key);
                        best.mstar = ms;
                        best.offset = b;
                    }
                }
            }
        }
        bests[size_t(tid)] = std::move(best);
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    ExactBest best;
    for (auto& b : bests)
        if (b.value != INT64_MIN && best.better(b.value, b.key)) best = std::move(b);

    ExactDistance out;
    out.distance = int((int64_t(1) << n) - (best.value >> m));
    out.witness = witness_from_mstar(n, m, best.mstar, best.offset);
    return out;
}

int distance_exact(const VBF& f, int threads) {
    return distance_exact_witnessed(f, threads).distance;
}

// ----- bounds ---------------------------------------------------------------

double RadicalBound::value() const {
    return std::exp2(n) - std::sqrt(double(sqrt_arg)) - halves / 2.0;
}

std::string RadicalBound::formula() const {
    std::ostringstream os;
    os << "2^" << n << " - sqrt(" << sqrt_arg << ") - " << halves << "/2";
    return os.str();
}

int RadicalBound::usable() const {
    // ceil(2^n - U) = 2^n - floor(U), U = sqrt(arg) + halves/2, halves odd
    uint64_t r = uint64_t(std::sqrt(double(sqrt_arg)));
    while (r * r > sqrt_arg) --r;
    while ((r + 1) * (r + 1) <= sqrt_arg) ++r;
    uint64_t fl = r + uint64_t((halves - 1) / 2);
    if (sqrt_arg != r * r && sqrt_arg > r * r + r) ++fl;
    return int((int64_t(1) << n) - int64_t(fl));
}

static bool table_is_power(const VBF& f, const FieldSpec& k, uint64_t d) {
    for (uint32_t x = 0; x < f.size(); ++x)
        if (f.table[x] != gf_pow(k, x, d)) return false;
    return true;
}

// smallest exponent whose power map has this truth table, if any
static std::optional<uint64_t> detect_power(const VBF& f, const FieldSpec& k) {
    if (f.n != f.m || f.n != k.n) return std::nullopt;
    std::vector<uint16_t> cur(f.size());
    for (uint32_t x = 0; x < f.size(); ++x) cur[x] = uint16_t(x);
    for (uint64_t d = 1; d + 1 < f.size(); ++d) {
        if (d > 1)
            for (uint32_t x = 0; x < f.size(); ++x) cur[x] = uint16_t(gf_mul(k, cur[x], x));
        if (std::equal(cur.begin(), cur.end(), f.table.begin())) return d;
    }
    return std::nullopt;
}

DistanceBounds bounds_report(const VBF& f) {
    DistanceBounds b;
    b.n = f.n;
    b.m = f.m;
    const int64_t N = int64_t(1) << f.n;
    b.delta = differential_spectrum(f).delta_max;
    b.apn = (f.n == f.m && b.delta == 2);
    b.trivial_upper = int(N - f.n - 1);
    b.uniformity_lower = RadicalBound{f.n, uint64_t(b.delta) << f.n, 1};
    b.vectorial_bent = (f.n % 2 == 0 && f.m <= f.n / 2 && is_vectorial_bent(f));
    if (b.vectorial_bent) {
        int64_t half = int64_t(1) << (f.n / 2);
        int64_t lo = ((N - half) >> f.m) * ((int64_t(1) << f.m) - 1);
        int64_t hi = ((N + half) >> f.m) * ((int64_t(1) << f.m) - 1);
        b.bent_interval = {int(lo), int(hi)};
    }
    b.conjecture_value = (1.0 - std::exp2(-f.m)) * (std::exp2(f.n) - std::exp2(f.n / 2.0));
    if (f.n == f.m) b.conjecture_apn = std::exp2(f.n) - std::exp2(f.n / 2.0) - 1;
    if (b.apn && f.n >= 2) b.sidon_lower = int(N - max_complete_sidon_size(f.n));

    if (f.n == f.m && f.n % 2 == 0 && f.n >= 4) {
        FieldSpec k = FieldSpec::standard(f.n);
        if (table_is_power(f, k, (uint64_t(1) << f.n) - 2)) {
            // field inverse: intersections with affine graphs stay within one
            // point of a Sidon set, hence the 3/2 slack
            b.family_lower = RadicalBound{f.n, uint64_t(2) << f.n, 3};
            b.family_upper = int(N - (int64_t(1) << (f.n / 2)) - 2);
        } else if (f.n % 4 == 0 &&
                   table_is_power(f, k, (uint64_t(1) << (f.n / 2 - 1)) + 1)) {
            b.family_lower = RadicalBound{f.n, uint64_t(2) << f.n, 1};
            b.family_upper = int(N - (int64_t(1) << (f.n / 2)) - 2);
        }
    }

    b.best_lower = std::max(0, b.uniformity_lower.usable());
    if (b.sidon_lower) b.best_lower = std::max(b.best_lower, *b.sidon_lower);
    if (b.family_lower) b.best_lower = std::max(b.best_lower, b.family_lower->usable());
    if (b.bent_interval) b.best_lower = std::max(b.best_lower, b.bent_interval->first);
    b.best_upper = b.trivial_upper;
    if (b.family_upper) b.best_upper = std::min(b.best_upper, *b.family_upper);
    if (b.bent_interval) b.best_upper = std::min(b.best_upper, b.bent_interval->second);
    return b;
}

// ----- affine-graph subspaces -----------------------------------------------

bool projects_onto_inputs(int n, std::span<const uint32_t> dirs) {
    const uint32_t maskn = (1u << n) - 1;
    Echelon e;
    for (uint32_t d : dirs) e.insert(d & maskn);
    return e.dim == n;
}

AffineMap subspace_to_affine_map(int n, uint32_t base, std::span<const uint32_t> dirs) {
    if (int(dirs.size()) != n || !projects_onto_inputs(n, dirs))
        throw std::invalid_argument("subspace_to_affine_map: not an affine-map graph");
    const uint32_t maskn = (1u << n) - 1;
    std::vector<uint16_t> tbl(size_t(1) << n);
    uint32_t p = base;
    tbl[p & maskn] = uint16_t((p >> n) & maskn);
    for (uint32_t it = 1; it < (1u << n); ++it) {
        p ^= dirs[size_t(std::countr_zero(it))];
        tbl[p & maskn] = uint16_t((p >> n) & maskn);
    }
    BitMatrix mat(n, n);
    uint32_t offset = tbl[0];
    for (int i = 0; i < n; ++i) {
        uint32_t row = tbl[1u << i] ^ offset;
        for (int j = 0; j < n; ++j)
            if ((row >> j) & 1) mat.set(i, j, 1);
    }
    return AffineMap{std::move(mat), offset};
}

AffineSubspace affine_map_graph(const AffineMap& a) {
    const int n = a.in_dim();
    std::vector<uint32_t> dirs;
    for (int i = 0; i < n; ++i)
        dirs.push_back((1u << i) | (uint32_t(a.apply(1u << i) ^ a.offset) << n));
    return AffineSubspace::make(2 * n + 1, a.offset << n | (1u << (2 * n)), std::move(dirs));
}

// ----- centers ---------------------------------------------------------------

ScanCenters all_centers(const VBF& f) {
    if (f.n != f.m) throw std::invalid_argument("all_centers: requires n == m");
    ScanCenters c;
    c.exhaustive = true;
    const int n = f.n;
    c.list.reserve((size_t(1) << (2 * n)) - (size_t(1) << n));
    for (uint32_t u = 0; u < (1u << (2 * n)); ++u) {
        uint32_t x = u & ((1u << n) - 1);
        if ((u >> n) == f.table[x]) continue;   // graph point
        c.list.push_back(u | (1u << (2 * n)));
    }
    c.total_centers = c.list.size();
    return c;
}

namespace {

std::vector<uint32_t> prime_factors(uint64_t v) {
    std::vector<uint32_t> ps;
    for (uint64_t p = 2; p * p <= v; ++p)
        if (v % p == 0) {
            ps.push_back(uint32_t(p));
            while (v % p == 0) v /= p;
        }
    if (v > 1) ps.push_back(uint32_t(v));
    return ps;
}

uint32_t smallest_primitive(const FieldSpec& k) {
    uint64_t group = k.size() - 1;
    auto ps = prime_factors(group);
    for (uint32_t a = 2; a < k.size(); ++a) {
        bool prim = true;
        for (uint32_t p : ps)
            if (gf_pow(k, a, group / p) == 1) { prim = false; break; }
        if (prim) return a;
    }
    return 1;   // n = 1
}

bool is_quadratic(const VBF& f) {
    // every directional derivative must be affine
    for (int i = 0; i < f.n; ++i) {
        uint32_t c = 1u << i;
        uint16_t b0 = f.table[c] ^ f.table[0];
        std::vector<uint16_t> lin(f.size());
        for (uint32_t x = 0; x < f.size(); ++x)
            lin[x] = uint16_t(f.table[x ^ c] ^ f.table[x] ^ b0);
        for (int j = 0; j < f.n; ++j) {
            uint16_t lj = lin[1u << j];
            for (uint32_t x = 0; x < f.size(); ++x)
                if (lin[x ^ (1u << j)] != (lin[x] ^ lj)) return false;
        }
    }
    return true;
}

struct DisjointSets {
    std::vector<int32_t> p;
    explicit DisjointSets(size_t n) : p(n, -1) {}
    int32_t find(int32_t x) {
        while (p[size_t(x)] >= 0) {
            if (p[size_t(p[size_t(x)])] >= 0) p[size_t(x)] = p[size_t(p[size_t(x)])];
            x = p[size_t(x)];
        }
        return x;
    }
    void unite(int32_t a, int32_t b) {
        a = find(a); b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);   // keep the smaller id as root
        p[size_t(b)] = a;
    }
};

}  // namespace

ScanCenters center_orbit_representatives(const FieldSpec& k, uint64_t d) {
    const int n = k.n;
    if (n < 2 || n > 12)
        throw std::invalid_argument("center_orbit_representatives: n out of range");
    VBF f = vbf_from_power(k, d);
    const uint32_t N = 1u << n;
    const uint32_t maskn = N - 1;

    std::vector<std::vector<uint16_t>> genx, geny;   // coordinatewise maps
    std::vector<bool> gen_applies_to_x_only;
    ScanCenters out;

    uint32_t a = smallest_primitive(k);
    uint32_t ad = gf_pow(k, a, d);
    {
        std::vector<uint16_t> gx(N), gy(N);
        for (uint32_t v = 0; v < N; ++v) {
            gx[v] = uint16_t(gf_mul(k, a, v));
            gy[v] = uint16_t(gf_mul(k, ad, v));
        }
        genx.push_back(std::move(gx));
        geny.push_back(std::move(gy));
        std::ostringstream os;
        os << "scale(a=0x" << std::hex << a << std::dec << ", a^d=0x" << std::hex << ad << std::dec << ")";
        out.group.push_back(os.str());
    }
    {
        std::vector<uint16_t> gx(N), gy(N);
        for (uint32_t v = 0; v < N; ++v) gx[v] = gy[v] = uint16_t(gf_mul(k, v, v));
        genx.push_back(std::move(gx));
        geny.push_back(std::move(gy));
        out.group.push_back("frobenius");
    }

    std::vector<std::vector<uint16_t>> trans_shift;   // per basis vector: y shift table
    if (is_quadratic(f)) {
        for (int i = 0; i < n; ++i) {
            uint32_t c = 1u << i;
            std::vector<uint16_t> shift(N);
            for (uint32_t x = 0; x < N; ++x) shift[x] = uint16_t(f.table[x ^ c] ^ f.table[x]);
            trans_shift.push_back(std::move(shift));
            std::ostringstream os;
            os << "translate(e" << i << ")";
            out.group.push_back(os.str());
        }
    }

    // each generator must carry the graph onto itself
    auto check_graph = [&](auto&& map) {
        for (uint32_t x = 0; x < N; ++x) {
            auto [nx, ny] = map(x, uint32_t(f.table[x]));
            if (f.table[nx] != ny)
                throw std::logic_error("center_orbit_representatives: generator breaks the graph");
        }
    };
    for (size_t g = 0; g < genx.size(); ++g)
        check_graph([&](uint32_t x, uint32_t y) {
            return std::pair<uint32_t, uint32_t>(genx[g][x], geny[g][y]);
        });
    for (size_t gi = 0; gi < trans_shift.size(); ++gi)
        check_graph([&](uint32_t x, uint32_t y) {
            return std::pair<uint32_t, uint32_t>(x ^ (1u << gi), uint32_t(y ^ trans_shift[gi][x]));
        });

    DisjointSets ds(size_t(1) << (2 * n));
    for (uint32_t u = 0; u < (1u << (2 * n)); ++u) {
        uint32_t x = u & maskn, y = u >> n;
        for (size_t g = 0; g < genx.size(); ++g)
            ds.unite(int32_t(u), int32_t(uint32_t(genx[g][x]) | (uint32_t(geny[g][y]) << n)));
        for (size_t gi = 0; gi < trans_shift.size(); ++gi)
            ds.unite(int32_t(u),
                     int32_t((x ^ (1u << gi)) | (uint32_t(y ^ trans_shift[gi][x]) << n)));
    }

    std::vector<size_t> orbit_size(size_t(1) << (2 * n), 0);
    for (uint32_t u = 0; u < (1u << (2 * n)); ++u) ++orbit_size[size_t(ds.find(int32_t(u)))];
    for (uint32_t u = 0; u < (1u << (2 * n)); ++u) {
        uint32_t x = u & maskn;
        if ((u >> n) == f.table[x]) continue;
        if (ds.find(int32_t(u)) != int32_t(u)) continue;
        out.list.push_back(u | (1u << (2 * n)));
        out.orbit_sizes.push_back(orbit_size[u]);
    }
    out.total_centers = (size_t(1) << (2 * n)) - N;
    out.exhaustive = true;   // representatives cover every center up to the group
    return out;
}

// ----- gerbera scan ---------------------------------------------------------

namespace {

// fully reduced echelon over <= 20-bit words, pivots mutually exclusive so
// reduction is a single pass in any order
struct SmallSpan {
    std::array<uint32_t, 12> piv{};
    std::array<int, 12> hb{};
    int cnt = 0;

    uint32_t reduce(uint32_t v) const {
        for (int i = 0; i < cnt; ++i)
            if ((v >> hb[size_t(i)]) & 1) v ^= piv[size_t(i)];
        return v;
    }
    bool insert(uint32_t v) {
        v = reduce(v);
        if (!v) return false;
        int h = 31 - std::countl_zero(v);
        for (int i = 0; i < cnt; ++i)
            if ((piv[size_t(i)] >> h) & 1) piv[size_t(i)] ^= v;
        piv[size_t(cnt)] = v;
        hb[size_t(cnt)] = h;
        ++cnt;
        return true;
    }
};

struct RemCounter {
    std::vector<uint32_t> key;
    std::vector<int32_t> cnt;
    std::vector<uint32_t> stamp;
    std::vector<uint32_t> touched;
    uint32_t epoch = 0;
    uint32_t mask;

    RemCounter() : key(4096), cnt(4096), stamp(4096, ~0u), mask(4095) {}
    void clear() {
        ++epoch;
        touched.clear();
    }
    void add(uint32_t k) {
        uint32_t h = (k * 0x9E3779B9u) & mask;
        while (true) {
            if (stamp[h] != epoch) {
                stamp[h] = epoch;
                key[h] = k;
                cnt[h] = 1;
                touched.push_back(h);
                return;
            }
            if (key[h] == k) { ++cnt[h]; return; }
            h = (h + 1) & mask;
        }
    }
};

struct CenterContext {
    const VBF& f;
    const std::vector<uint32_t>& graph;
    int n, t, target;
    uint32_t maskn;
    bool span_is_full;       // 2t == n (else 2t == n-1)
    uint64_t budget = UINT64_MAX;   // configurations per center (witness mode)
    uint64_t used = 0;
    RemCounter rc;
    std::vector<uint32_t> rem_prev;

    ScanOutcome out;

    CenterContext(const VBF& vf, const std::vector<uint32_t>& g, int target_, int t_)
        : f(vf), graph(g), n(vf.n), t(t_), target(target_), maskn((1u << vf.n) - 1),
          span_is_full(2 * t_ == vf.n) {
        rem_prev.resize(g.size());
    }

    void consider(int count, uint32_t base, std::span<const uint32_t> dirs) {
        if (count >= target) out.hit = true;
        if (count < out.max_count) return;
        AffineMap cand = subspace_to_affine_map(n, base, dirs);
        if (count == out.max_count && out.witness && !(cand.key() < out.witness->key())) return;
        out.max_count = count;
        out.witness = std::move(cand);
    }

    void full_span_candidate(uint32_t w, const SmallSpan& span) {
        // projection baked into the candidate test
        SmallSpan xspan;
        for (int i = 0; i < span.cnt; ++i)
            if (!xspan.insert(span.piv[size_t(i)] & maskn)) return;
        if (xspan.cnt != n) return;
        uint32_t p = w;
        int cnt = 0;
        if (graph[p & maskn] == p) ++cnt;
        for (uint32_t it = 1; it < (1u << n); ++it) {
            p ^= span.piv[size_t(std::countr_zero(it))];
            if (graph[p & maskn] == p) ++cnt;
        }
        consider(cnt, w, std::span<const uint32_t>(span.piv.data(), size_t(n)));
    }

    void scan(uint32_t w) {
        out = ScanOutcome{};
        out.center = w;
        used = 0;

        std::vector<std::array<uint32_t, 3>> leaves;
        const uint32_t sz = uint32_t(graph.size());
        for (uint32_t i = 0; i < sz; ++i) {
            uint32_t gi = graph[i];
            for (uint32_t j = i + 1; j < sz; ++j) {
                uint32_t z = gi ^ graph[j] ^ w;
                uint32_t xz = z & maskn;
                if (graph[xz] != z || xz <= j) continue;
                std::array<uint32_t, 3> leaf{gi, graph[j], z};
                std::sort(leaf.begin(), leaf.end());
                leaves.push_back(leaf);
            }
        }
        std::sort(leaves.begin(), leaves.end());
        if (int(leaves.size()) < t) return;

        rec(w, leaves, 0, 0, SmallSpan{});
    }

    void rec(uint32_t w, const std::vector<std::array<uint32_t, 3>>& leaves, size_t from,
             int depth, const SmallSpan& span) {
        if (used >= budget) return;
        if (depth == t) {
            ++used;
            if (span_is_full)
                full_span_candidate(w, span);
            return;
        }
        const size_t need = size_t(t - depth);
        const bool last_with_shared_rem = (!span_is_full && depth == t - 1);
        if (last_with_shared_rem)
            for (size_t g = 0; g < graph.size(); ++g)
                rem_prev[g] = span.reduce(graph[g] ^ w);

        for (size_t i = from; i + need <= leaves.size() && used < budget; ++i) {
            SmallSpan sp = span;
            if (!sp.insert(leaves[i][0] ^ w)) continue;
            if (!sp.insert(leaves[i][1] ^ w)) continue;
            if (last_with_shared_rem) {
                ++used;
                extended_from_shared(w, sp);
            } else {
                rec(w, leaves, i + 1, depth + 1, sp);
            }
        }
    }

    // rem_prev holds every graph point reduced by the first t-1 leaves;
    // only the two pivots of the final leaf are applied per candidate
    void extended_from_shared(uint32_t w, const SmallSpan& sp) {
        uint32_t q1 = sp.piv[size_t(sp.cnt - 2)], q2 = sp.piv[size_t(sp.cnt - 1)];
        int h1 = sp.hb[size_t(sp.cnt - 2)], h2 = sp.hb[size_t(sp.cnt - 1)];

        SmallSpan xspan;
        int xrank = 0;
        for (int i = 0; i < sp.cnt; ++i)
            if (xspan.insert(sp.piv[size_t(i)] & maskn)) ++xrank;
        if (xrank < n - 1) return;

        rc.clear();
        int c0 = 0;
        for (size_t g = 0; g < graph.size(); ++g) {
            uint32_t r = rem_prev[g];
            if ((r >> h1) & 1) r ^= q1;
            if ((r >> h2) & 1) r ^= q2;
            if (r == 0)
                ++c0;
            else
                rc.add(r);
        }
        std::vector<uint32_t> dirs(sp.piv.begin(), sp.piv.begin() + sp.cnt);
        dirs.push_back(0);
        bool found_any = false;
        for (uint32_t slot : rc.touched) {
            uint32_t r = rc.key[slot];
            if (xspan.reduce(r & maskn) == 0) continue;
            found_any = true;
            dirs.back() = r;
            consider(c0 + rc.cnt[slot], w, dirs);
        }
        if (!found_any) {
            for (int i = 0; i < n; ++i)
                if (xspan.reduce(1u << i)) {
                    uint32_t v = sp.reduce(1u << i);
                    dirs.back() = v;
                    int extra = 0;
                    for (uint32_t slot : rc.touched)
                        if (rc.key[slot] == v) { extra = rc.cnt[slot]; break; }
                    consider(c0 + extra, w, dirs);
                    break;
                }
        }
    }
};

struct LicenseRow {
    int n, min_target, t;
};

const LicenseRow* license_for(int n) {
    // minimum target sizes for which every qualifying intersection set
    // necessarily contains a scanned configuration of the given size
    static const LicenseRow rows[] = {{6, 9, 3}, {7, 12, 3}, {8, 17, 4}, {9, 22, 4}};
    for (const auto& r : rows)
        if (r.n == n) return &r;
    return nullptr;
}

}  // namespace

namespace {

std::string checkpoint_key(const VBF& f, int target, int t, size_t ncenters) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (uint16_t v : f.table) mix(v);
    mix(uint64_t(target));
    mix(uint64_t(t));
    mix(uint64_t(ncenters));
    std::ostringstream os;
    os << f.n << ':' << target << ':' << t << ':' << std::hex << h;
    return os.str();
}

struct CheckpointState {
    std::set<uint32_t> done;
    bool any_hit = false;
    int witnessed_max = 0;
    std::optional<AffineMap> witness;
};

CheckpointState load_checkpoint(const std::string& path, const std::string& key);
void store_checkpoint(const std::string& path, const std::string& key,
                      const CheckpointState& st);

}  // namespace

ScanCertificate gerbera_scan(const VBF& f, int target, int t, const ScanCenters& centers,
                             int threads, const ScanProgress& progress,
                             const std::string& checkpoint) {
    auto t0 = Clock::now();
    if (f.n != f.m) throw std::invalid_argument("gerbera_scan: requires n == m");
    const LicenseRow* lic = license_for(f.n);
    if (!lic || lic->t != t || target < lic->min_target) {
        std::ostringstream os;
        os << "gerbera_scan: (n=" << f.n << ", target=" << target << ", t=" << t
           << ") is not a licensed combination; allowed: (6,>=9,3), (7,>=12,3), (8,>=17,4), (9,>=22,4)";
        throw std::invalid_argument(os.str());
    }
    if (!is_apn(f))
        throw std::invalid_argument("gerbera_scan: input must be APN (graph must be Sidon)");

    const std::vector<uint32_t> graph = graph_of(f);

    std::atomic<size_t> next{0};
    std::mutex merge_mtx;
    ScanCertificate cert;
    cert.n = f.n;
    cert.truth_table = f.table;
    cert.target = target;
    cert.gerbera_size = t;
    cert.orbit_mode = !centers.group.empty();
    cert.exhaustive = centers.exhaustive;
    cert.centers_scanned = centers.list.size();
    cert.total_centers = centers.total_centers;
    cert.group = centers.group;
    cert.threads = std::max(1, threads);
    if (cert.orbit_mode || centers.list.size() <= 4096) cert.centers = centers.list;

    ScanOutcome best;
    bool have_best = false;
    bool any_hit = false;

    const std::string ck_key =
        checkpoint.empty() ? std::string{} : checkpoint_key(f, target, t, centers.list.size());
    CheckpointState ck;
    std::vector<uint32_t> todo = centers.list;
    if (!checkpoint.empty()) {
        ck = load_checkpoint(checkpoint, ck_key);
        if (!ck.done.empty()) {
            todo.clear();
            for (uint32_t w : centers.list)
                if (!ck.done.count(w)) todo.push_back(w);
            any_hit = ck.any_hit;
            best.max_count = ck.witnessed_max;
            best.witness = ck.witness;
            have_best = true;
        }
    }

    auto worker = [&]() {
        CenterContext ctx(f, graph, target, t);
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= todo.size()) break;
            ctx.scan(todo[idx]);
            std::lock_guard<std::mutex> lk(merge_mtx);
            if (progress) progress(ctx.out);
            if (ctx.out.hit) any_hit = true;
            bool take;
            if (!have_best)
                take = true;
            else if (ctx.out.max_count != best.max_count)
                take = ctx.out.max_count > best.max_count && ctx.out.witness.has_value();
            else if (ctx.out.witness && best.witness)
                take = ctx.out.witness->key() < best.witness->key();
            else
                take = ctx.out.witness.has_value();
            if (take) {
                best = ctx.out;
                have_best = true;
            }
            if (!checkpoint.empty()) {
                ck.done.insert(ctx.out.center);
                ck.any_hit = any_hit;
                ck.witnessed_max = best.max_count;
                ck.witness = best.witness;
                store_checkpoint(checkpoint, ck_key, ck);
            }
        }
    };

    if (cert.threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < cert.threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    cert.witnessed_max = best.max_count;
    cert.witness = best.witness;
    cert.absent = !any_hit;
    if (cert.witness) {
        int check = intersection_count(f, *cert.witness);
        if (check != cert.witnessed_max)
            throw std::logic_error("gerbera_scan: witness count mismatch");
    }
    cert.wall_ms = ms_since(t0);
    return cert;
}

// ----- witness search --------------------------------------------------------

WitnessResult witness_search(const VBF& f, uint64_t seed, int restarts) {
    if (f.n != f.m || f.n > 9)
        throw std::invalid_argument("witness_search: requires n == m <= 9");
    const int n = f.n;
    std::mt19937_64 rng(seed);
    WitnessResult best{AffineMap::identity(n), 0};
    best.intersection = intersection_count(f, best.map);
    const int cap = (n >= 2) ? max_complete_sidon_size(n) : (1 << n);

    auto take = [&](const AffineMap& m, int cnt) {
        if (cnt > best.intersection ||
            (cnt == best.intersection && m.key() < best.map.key())) {
            best.map = m;
            best.intersection = cnt;
        }
    };

    // gerbera-seeded candidates from random centers; spans of size n/2
    // collections extend to affine-map graphs
    bool apn = (n >= 2) && is_apn(f);
    if (apn && n >= 3) {
        const int t = n / 2;   // 2t is n or n-1
        auto graph = graph_of(f);
        CenterContext ctx(f, graph, /*target*/ 1 << n, t);
        // bound the per-center work at the larger degrees
        ctx.budget = n <= 7 ? UINT64_MAX : (n == 8 ? 200000 : 50000);
        int centers = n <= 7 ? restarts : std::min(restarts, 8);
        for (int r = 0; r < centers && best.intersection < cap; ++r) {
            uint32_t u = uint32_t(rng() & ((1u << (2 * n)) - 1));
            if ((u >> n) == f.table[u & ((1u << n) - 1)]) continue;   // graph point
            ctx.scan(u | (1u << (2 * n)));
            if (ctx.out.witness) take(*ctx.out.witness, ctx.out.max_count);
        }
    }

    // steepest-ascent bit flips over (matrix, offset)
    const int bits = n * n + n;
    for (int r = 0; r < restarts && best.intersection < cap; ++r) {
        AffineMap cur(AffineMap::identity(n));
        if (r > 0) {
            BitMatrix mat(n, n);
            for (int i = 0; i < n; ++i)
                mat.set_row(i, rng() & ((1u << n) - 1));
            cur = AffineMap{std::move(mat), uint32_t(rng() & ((1u << n) - 1))};
        } else {
            cur = best.map;
        }
        int cnt = intersection_count(f, cur);
        bool improved = true;
        while (improved) {
            improved = false;
            int best_bit = -1, best_cnt = cnt;
            for (int bflip = 0; bflip < bits; ++bflip) {
                AffineMap cand = cur;
                if (bflip < n * n)
                    cand.matrix.set(bflip / n, bflip % n, 1 - cand.matrix.at(bflip / n, bflip % n));
                else
                    cand.offset ^= 1u << (bflip - n * n);
                int c = intersection_count(f, cand);
                if (c > best_cnt) { best_cnt = c; best_bit = bflip; }
            }
            if (best_bit >= 0) {
                if (best_bit < n * n)
                    cur.matrix.set(best_bit / n, best_bit % n,
                                   1 - cur.matrix.at(best_bit / n, best_bit % n));
                else
                    cur.offset ^= 1u << (best_bit - n * n);
                cnt = best_cnt;
                improved = true;
            }
        }
        take(cur, cnt);
    }
    return best;
}

// ----- aggregated report -----------------------------------------------------

const char* to_string(LmcStatus s) {
    switch (s) {
        case LmcStatus::consistent: return "consistent";
        case LmcStatus::violated: return "violated";
        default: return "undetermined";
    }
}

static LmcStatus lmc_status(const DistanceBounds& b, int lower, int upper) {
    double conj = b.conjecture_value;
    if (b.conjecture_apn) conj = std::min(conj, *b.conjecture_apn);
    if (double(lower) > conj + 1e-9) return LmcStatus::violated;
    if (double(upper) <= conj + 1e-9) return LmcStatus::consistent;
    return LmcStatus::undetermined;
}

DistanceReport distance_report(const VBF& f, const DistanceOptions& opt) {
    auto t0 = Clock::now();
    DistanceReport r;
    r.id = opt.id;
    r.n = f.n;
    r.m = f.m;
    r.bounds = bounds_report(f);
    r.lower = r.bounds.best_lower;
    r.upper = r.bounds.best_upper;

    const bool feasible = distance_exact_feasible(f.n, f.m);
    if (opt.strategy == "exact" || (opt.strategy == "auto" && feasible)) {
        ExactDistance e = distance_exact_witnessed(f, opt.threads);
        r.exact = e.distance;
        r.lower = r.upper = e.distance;
        r.witness = e.witness;
        r.witness_intersection = (1 << f.n) - e.distance;
        r.strategy_used = "exact";
        r.lmc = lmc_status(r.bounds, r.lower, r.upper);
        r.wall_ms = ms_since(t0);
        return r;
    }
    if (opt.strategy == "exact")
        throw std::invalid_argument("distance_report: exact strategy infeasible for this size");

    r.strategy_used = "bounds";
    if (f.n == f.m && f.n <= 9) {
        WitnessResult w = witness_search(f, opt.seed);
        r.witness = w.map;
        r.witness_intersection = w.intersection;
        r.upper = std::min(r.upper, (1 << f.n) - w.intersection);
        r.strategy_used = "witness";

        const LicenseRow* lic = license_for(f.n);
        bool want_cert = opt.strategy == "certify" ||
                         (opt.strategy == "auto" && lic && r.bounds.apn);
        bool pinched = (r.lower >= r.upper);
        if (want_cert && lic && r.bounds.apn && (!pinched || f.n == 6)) {
            // the heavy certificates (degree 8 without a quadratic structure,
            // and everything at degree 9) stay behind the long-scan switch
            bool heavy = (f.n == 9) || (f.n == 8 && !is_quadratic(f));
            if (!heavy || opt.long_scans) {
                ScanCenters centers;
                std::optional<uint64_t> d = opt.power;
                FieldSpec k = opt.field.value_or(FieldSpec::standard(f.n));
                if (!d) d = detect_power(f, k);
                if (d && f.n >= 7)
                    centers = center_orbit_representatives(k, *d);
                else
                    centers = all_centers(f);
                // rescan with a raised target until the scan reports absence,
                // so the certificate pins the exact maximum it witnessed
                int target = std::max(lic->min_target, r.witness_intersection + 1);
                for (int round = 0; round < 3; ++round) {
                    ScanCertificate cert = gerbera_scan(f, target, lic->t, centers, opt.threads,
                                                        {}, opt.checkpoint);
                    cert.function_id = r.id;
                    if (cert.witness && cert.witnessed_max > r.witness_intersection) {
                        r.witness = cert.witness;
                        r.witness_intersection = cert.witnessed_max;
                        r.upper = std::min(r.upper, (1 << f.n) - cert.witnessed_max);
                    }
                    if (cert.absent)
                        r.lower = std::max(r.lower, (1 << f.n) - cert.target + 1);
                    bool done = cert.absent;
                    int next_target = cert.witnessed_max + 1;
                    r.certificate = std::move(cert);
                    if (done || next_target <= target) break;
                    target = next_target;
                }
                r.strategy_used = "witness+scan";
            }
        }
    }
    if (r.lower == r.upper) r.exact = r.lower;
    r.lmc = lmc_status(r.bounds, r.lower, r.upper);
    r.wall_ms = ms_since(t0);
    return r;
}

// ----- JSON ------------------------------------------------------------------

static json affine_to_json(const AffineMap& a) {
    json rows = json::array();
    char buf[32];
    for (int i = 0; i < a.in_dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%llx", (unsigned long long)a.matrix.row(i));
        rows.push_back(buf);
    }
    return json{{"n", a.in_dim()}, {"m", a.out_dim()}, {"rows", rows}, {"offset", a.offset}};
}

static AffineMap affine_from_json(const json& j) {
    int n = j.at("n").get<int>();
    int m = j.at("m").get<int>();
    BitMatrix mat(n, m);
    auto rows = j.at("rows");
    for (int i = 0; i < n; ++i)
        mat.set_row(i, std::stoull(rows.at(size_t(i)).get<std::string>(), nullptr, 16));
    return AffineMap{std::move(mat), j.at("offset").get<uint32_t>()};
}

namespace {

CheckpointState load_checkpoint(const std::string& path, const std::string& key) {
    CheckpointState st;
    std::ifstream is(path);
    if (!is) return st;
    try {
        json j = json::parse(is);
        if (j.value("key", "") != key) return st;   // different scan, start over
        for (const auto& v : j.at("done"))
            st.done.insert(uint32_t(std::stoul(v.get<std::string>(), nullptr, 16)));
        st.any_hit = j.at("any_hit").get<bool>();
        st.witnessed_max = j.at("witnessed_max").get<int>();
        if (j.contains("witness")) st.witness = affine_from_json(j.at("witness"));
    } catch (const std::exception&) {
        return CheckpointState{};
    }
    return st;
}

void store_checkpoint(const std::string& path, const std::string& key,
                      const CheckpointState& st) {
    json done = json::array();
    char buf[16];
    for (uint32_t w : st.done) {
        std::snprintf(buf, sizeof buf, "%x", unsigned(w));
        done.push_back(buf);
    }
    json j{{"kind", "gerbera-scan-checkpoint"},
           {"key", key},
           {"done", done},
           {"any_hit", st.any_hit},
           {"witnessed_max", st.witnessed_max}};
    if (st.witness) j["witness"] = affine_to_json(*st.witness);
    std::ofstream os(path + ".tmp");
    os << j.dump() << '\n';
    os.close();
    std::rename((path + ".tmp").c_str(), path.c_str());
}

}  // namespace

static json bounds_to_json(const DistanceBounds& b) {
    json j{{"n", b.n},
           {"m", b.m},
           {"delta", b.delta},
           {"apn", b.apn},
           {"vectorial_bent", b.vectorial_bent},
           {"trivial_upper", b.trivial_upper},
           {"uniformity_lower",
            {{"formula", b.uniformity_lower.formula()},
             {"value", b.uniformity_lower.value()},
             {"usable", b.uniformity_lower.usable()}}},
           {"conjecture_value", b.conjecture_value},
           {"best_lower", b.best_lower},
           {"best_upper", b.best_upper}};
    if (b.bent_interval) j["bent_interval"] = {b.bent_interval->first, b.bent_interval->second};
    if (b.conjecture_apn) j["conjecture_apn"] = *b.conjecture_apn;
    if (b.sidon_lower) j["sidon_lower"] = *b.sidon_lower;
    if (b.family_lower)
        j["family_lower"] = {{"formula", b.family_lower->formula()},
                             {"value", b.family_lower->value()},
                             {"usable", b.family_lower->usable()}};
    if (b.family_upper) j["family_upper"] = *b.family_upper;
    return j;
}

static json certificate_to_json_obj(const ScanCertificate& c) {
    json tt = json::array();
    char buf[16];
    for (uint16_t v : c.truth_table) {
        std::snprintf(buf, sizeof buf, "%x", unsigned(v));
        tt.push_back(buf);
    }
    json centers = json::array();
    for (uint32_t w : c.centers) {
        std::snprintf(buf, sizeof buf, "%x", unsigned(w));
        centers.push_back(buf);
    }
    json j{{"kind", "gerbera-scan-certificate"},
           {"function_id", c.function_id},
           {"n", c.n},
           {"truth_table", tt},
           {"target", c.target},
           {"gerbera_size", c.gerbera_size},
           {"orbit_mode", c.orbit_mode},
           {"exhaustive", c.exhaustive},
           {"centers_scanned", c.centers_scanned},
           {"total_centers", c.total_centers},
           {"centers", centers},
           {"group", c.group},
           {"conclusion",
            c.absent ? "no affine map meets the target intersection" : "target intersection found"},
           {"absent", c.absent},
           {"witnessed_max", c.witnessed_max},
           {"threads", c.threads},
           {"wall_ms", c.wall_ms}};
    if (c.witness) j["witness"] = affine_to_json(*c.witness);
    return j;
}

std::string certificate_to_json(const ScanCertificate& c) {
    return certificate_to_json_obj(c).dump(2);
}

std::string report_to_json(const DistanceReport& r) {
    json j{{"kind", "distance-report"},
           {"id", r.id},
           {"n", r.n},
           {"m", r.m},
           {"lower", r.lower},
           {"upper", r.upper},
           {"bounds", bounds_to_json(r.bounds)},
           {"witness_intersection", r.witness_intersection},
           {"lmc", to_string(r.lmc)},
           {"strategy", r.strategy_used},
           {"wall_ms", r.wall_ms}};
    if (r.exact) j["exact"] = *r.exact;
    if (r.witness) j["witness"] = affine_to_json(*r.witness);
    if (r.certificate) j["certificate"] = certificate_to_json_obj(*r.certificate);
    return j.dump(2);
}

ScanCertificate certificate_from_json(const std::string& text) {
    json j = json::parse(text);
    ScanCertificate c;
    c.function_id = j.value("function_id", "");
    c.n = j.at("n").get<int>();
    for (const auto& v : j.at("truth_table"))
        c.truth_table.push_back(uint16_t(std::stoul(v.get<std::string>(), nullptr, 16)));
    c.target = j.at("target").get<int>();
    c.gerbera_size = j.at("gerbera_size").get<int>();
    c.orbit_mode = j.at("orbit_mode").get<bool>();
    c.exhaustive = j.at("exhaustive").get<bool>();
    c.centers_scanned = j.at("centers_scanned").get<size_t>();
    c.total_centers = j.at("total_centers").get<size_t>();
    for (const auto& v : j.at("centers"))
        c.centers.push_back(uint32_t(std::stoul(v.get<std::string>(), nullptr, 16)));
    for (const auto& v : j.at("group")) c.group.push_back(v.get<std::string>());
    c.absent = j.at("absent").get<bool>();
    c.witnessed_max = j.at("witnessed_max").get<int>();
    c.threads = j.value("threads", 1);
    c.wall_ms = j.value("wall_ms", 0.0);
    if (j.contains("witness")) c.witness = affine_from_json(j.at("witness"));
    return c;
}

void save_certificate(const std::string& path, const ScanCertificate& c) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << certificate_to_json(c) << '\n';
}

ScanCertificate load_certificate(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return certificate_from_json(ss.str());
}

VerifyResult verify_certificate(const ScanCertificate& c) {
    VerifyResult out;
    if (c.truth_table.size() != size_t(1) << c.n) {
        out.message = "truth table length does not match n";
        return out;
    }
    VBF f = vbf_from_table(c.n, c.n, c.truth_table);
    const LicenseRow* lic = license_for(c.n);
    if (!lic || lic->t != c.gerbera_size || c.target < lic->min_target) {
        out.message = "unlicensed (n, target, t) combination";
        return out;
    }
    if (!is_apn(f)) {
        out.message = "function is not APN";
        return out;
    }
    if (c.absent && c.witnessed_max >= c.target) {
        out.message = "inconsistent: witnessed maximum meets the target but absence claimed";
        return out;
    }
    if (c.witness) {
        int got = intersection_count(f, *c.witness);
        if (got != c.witnessed_max) {
            out.message = "witness does not reproduce the claimed intersection";
            return out;
        }
    }
    if (c.exhaustive && !c.orbit_mode) {
        size_t want = (size_t(1) << (2 * c.n)) - (size_t(1) << c.n);
        if (c.total_centers != want || c.centers_scanned != want) {
            out.message = "exhaustive claim does not cover all centers";
            return out;
        }
    }
    if (c.orbit_mode) {
        FieldSpec k = FieldSpec::standard(c.n);
        auto d = detect_power(f, k);
        if (d) {
            ScanCenters reps = center_orbit_representatives(k, *d);
            if (reps.list != c.centers) {
                out.message = "orbit representatives do not match a recomputation";
                return out;
            }
        }
    }
    out.ok = true;
    out.message = "certificate verified";
    return out;
}

}  // namespace affdist
