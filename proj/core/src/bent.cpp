#include "affdist/bent.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace affdist {

std::string QuasifieldViolation::describe() const {
    std::ostringstream os;
    switch (axiom) {
        case 1: os << "axiom 1 (x*0 = 0*x = 0) fails at x=" << x; break;
        case 2: os << "axiom 2 (left distributivity) fails at x=" << x << " y=" << y << " z=" << z; break;
        default: os << "axiom 3 (translations bijective) fails at a=" << x; break;
    }
    return os.str();
}

std::optional<QuasifieldViolation> validate_prequasifield(const PreQuasifield& q) {
    const uint32_t sz = q.size();
    if (q.star.size() != size_t(sz) * sz)
        throw std::invalid_argument("quasifield: table shape must be 2^m x 2^m");
    for (uint32_t x = 0; x < sz; ++x)
        if (q.mul(x, 0) != 0 || q.mul(0, x) != 0)
            return QuasifieldViolation{1, x, 0, 0};
    for (uint32_t a = 1; a < sz; ++a) {
        std::vector<char> seenR(sz, 0), seenL(sz, 0);
        for (uint32_t x = 0; x < sz; ++x) {
            uint16_t r = q.mul(x, a);
            uint16_t l = q.mul(a, x);
            if (seenR[r] || seenL[l]) return QuasifieldViolation{3, a, 0, 0};
            seenR[r] = seenL[l] = 1;
        }
    }
    for (uint32_t x = 0; x < sz; ++x) {
        const uint16_t* row = q.star.data() + (size_t(x) << q.m);
        for (uint32_t y = 0; y < sz; ++y)
            for (uint32_t z = y; z < sz; ++z)
                if (row[y ^ z] != (row[y] ^ row[z]))
                    return QuasifieldViolation{2, x, y, z};
    }
    return std::nullopt;
}

PreQuasifield field_quasifield(const FieldSpec& k) {
    PreQuasifield q{k.n, "field", {}};
    q.star.resize(size_t(k.size()) * k.size());
    for (uint32_t a = 0; a < k.size(); ++a)
        for (uint32_t b = 0; b < k.size(); ++b)
            q.star[(a << k.n) | b] = uint16_t(gf_mul(k, a, b));
    return q;
}

PreQuasifield twisted_quasifield(const FieldSpec& k, int e) {
    if (std::gcd(e, k.n) != 1)
        throw std::invalid_argument("twisted_quasifield: gcd(e,m) must be 1");
    PreQuasifield q{k.n, "twisted", {}};
    q.star.resize(size_t(k.size()) * k.size());
    for (uint32_t b = 0; b < k.size(); ++b) {
        uint32_t be = gf_pow(k, b, uint64_t(1) << e);
        for (uint32_t a = 0; a < k.size(); ++a)
            q.star[(a << k.n) | b] = uint16_t(gf_mul(k, a, be));
    }
    return q;
}

uint32_t star_divide(const PreQuasifield& q, uint32_t x, uint32_t y) {
    if (y == 0) return 0;
    // x -> x * y is a bijection, so exactly one row matches
    for (uint32_t a = 0; a < q.size(); ++a)
        if (q.mul(a, y) == x) return a;
    throw std::logic_error("star_divide: no solution, table is not a quasifield");
}

uint32_t BentSpec::apply_tau(uint32_t z) const {
    uint32_t out = 0;
    for (int i = 0; i < t; ++i)
        out |= uint32_t(parity64(tau.row(i) & z)) << i;
    return out;
}

BentSpec default_bent_spec(int m, int t) {
    if (t < 1 || t > m) throw std::invalid_argument("BentSpec: need 1 <= t <= m");
    BentSpec s;
    s.m = m;
    s.t = t;
    s.tau = BitMatrix(t, m);
    for (int i = 0; i < t; ++i) s.tau.set(i, i, 1);   // truncation to t bits
    s.gamma.resize(size_t(1) << m);
    for (uint32_t x = 0; x < (1u << m); ++x) s.gamma[x] = uint16_t(x & ((1u << t) - 1));
    s.sigma.resize(size_t(1) << m);
    s.pi.resize(size_t(1) << m);
    for (uint32_t x = 0; x < (1u << m); ++x) s.sigma[x] = s.pi[x] = uint16_t(x);
    s.h.assign(size_t(1) << m, 0);
    return s;
}

void require_balanced(const std::vector<uint16_t>& tbl, int m, int t, const char* what) {
    if (tbl.size() != size_t(1) << m)
        throw std::invalid_argument(std::string(what) + ": table length must be 2^m");
    std::vector<int> cnt(size_t(1) << t, 0);
    for (uint16_t v : tbl) {
        if (v >> t) throw std::invalid_argument(std::string(what) + ": value out of range");
        ++cnt[v];
    }
    int want = 1 << (m - t);
    for (int c : cnt)
        if (c != want)
            throw std::invalid_argument(std::string(what) + " must be balanced");
}

void require_invertible(const std::vector<uint16_t>& tbl, int m, const char* what) {
    if (tbl.size() != size_t(1) << m)
        throw std::invalid_argument(std::string(what) + ": table length must be 2^m");
    std::vector<char> seen(size_t(1) << m, 0);
    for (uint16_t v : tbl) {
        if (v >> m || seen[v])
            throw std::invalid_argument(std::string(what) + " must be invertible");
        seen[v] = 1;
    }
}

void require_surjective_linear(const BitMatrix& tau, int m, int t) {
    if (tau.rows() != t || tau.cols() != m)
        throw std::invalid_argument("tau: matrix must be t x m");
    if (tau.rank() != t)
        throw std::invalid_argument("tau must be surjective linear (rank t)");
}

static VBF assemble(int m, int t, const std::function<uint16_t(uint32_t, uint32_t)>& val) {
    std::vector<uint16_t> table(size_t(1) << (2 * m));
    for (uint32_t y = 0; y < (1u << m); ++y)
        for (uint32_t x = 0; x < (1u << m); ++x)
            table[(y << m) | x] = val(x, y);
    return VBF{2 * m, t, std::move(table)};
}

VBF construct_mm(const FieldSpec& k, const BentSpec& spec) {
    if (k.n != spec.m) throw std::invalid_argument("construct_mm: field degree != m");
    require_surjective_linear(spec.tau, spec.m, spec.t);
    require_invertible(spec.pi, spec.m, "pi");
    return assemble(spec.m, spec.t, [&](uint32_t x, uint32_t y) {
        return uint16_t(spec.apply_tau(gf_mul(k, x, spec.pi[y])) ^ spec.h[y]);
    });
}

VBF construct_ps(const PreQuasifield& q, const BentSpec& spec) {
    if (q.m != spec.m) throw std::invalid_argument("construct_ps: quasifield size != m");
    require_balanced(spec.gamma, spec.m, spec.t, "gamma");
    // precompute division table: div[(x<<m)|y] = a with x = a*y
    std::vector<uint16_t> div(size_t(1) << (2 * spec.m), 0);
    for (uint32_t a = 0; a < q.size(); ++a)
        for (uint32_t y = 1; y < q.size(); ++y)
            div[(uint32_t(q.mul(a, y)) << spec.m) | y] = uint16_t(a);
    return assemble(spec.m, spec.t, [&](uint32_t x, uint32_t y) {
        return spec.gamma[div[(x << spec.m) | y]];
    });
}

VBF construct_qf(const PreQuasifield& q, const BentSpec& spec) {
    if (q.m != spec.m) throw std::invalid_argument("construct_qf: quasifield size != m");
    require_surjective_linear(spec.tau, spec.m, spec.t);
    require_invertible(spec.sigma, spec.m, "sigma");
    return assemble(spec.m, spec.t, [&](uint32_t x, uint32_t y) {
        return uint16_t(spec.apply_tau(q.mul(spec.sigma[y], x)) ^ spec.h[y]);
    });
}

bool is_vectorial_bent(const VBF& f) {
    if (f.n & 1) throw std::invalid_argument("is_vectorial_bent: n must be even");
    int32_t want = int32_t(1) << (f.n / 2);
    for (uint32_t b = 1; b < (1u << f.m); ++b)
        for (int32_t v : walsh_row(f, b))
            if (v != want && v != -want) return false;
    return true;
}

void write_quasifield(std::ostream& os, const PreQuasifield& q) {
    os << q.m << '\n';
    for (uint32_t a = 0; a < q.size(); ++a) {
        for (uint32_t b = 0; b < q.size(); ++b)
            os << std::hex << q.mul(a, b) << std::dec << (b + 1 < q.size() ? ' ' : '\n');
    }
}

PreQuasifield read_quasifield(std::istream& is) {
    int m = 0;
    if (!(is >> m) || m < 1 || m > 8) throw std::runtime_error("quasifield: bad header");
    PreQuasifield q{m, "file", {}};
    q.star.resize(size_t(1) << (2 * m));
    for (auto& e : q.star) {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("quasifield: truncated");
        unsigned long v = std::stoul(tok, nullptr, 16);
        if (v >> m) throw std::runtime_error("quasifield: entry out of range");
        e = uint16_t(v);
    }
    if (auto bad = validate_prequasifield(q))
        throw std::runtime_error("quasifield: " + bad->describe());
    return q;
}

PreQuasifield load_quasifield(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_quasifield(is);
}

}  // namespace affdist
