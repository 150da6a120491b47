#include "affdist/catalog.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace affdist {

const char* family_name(Family f) {
    switch (f) {
        case Family::Gold: return "gold";
        case Family::Kasami: return "kasami";
        case Family::Welch: return "welch";
        case Family::Niho: return "niho";
        case Family::Inverse: return "inverse";
        case Family::Dobbertin: return "dobbertin";
        case Family::Kim: return "kim";
        default: return "custom";
    }
}

std::optional<Family> family_from_name(const std::string& name) {
    for (Family f : {Family::Gold, Family::Kasami, Family::Welch, Family::Niho,
                     Family::Inverse, Family::Dobbertin, Family::Kim, Family::Custom})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

static std::string entry_name(Family f, int n, uint64_t d) {
    std::ostringstream os;
    os << family_name(f) << "-n" << n;
    if (d) os << "-x" << d;
    return os.str();
}

CatalogEntry catalog_lookup(int n, Family family, int param) {
    if (n < 1 || n > 16) throw std::invalid_argument("catalog_lookup: n out of range");
    const uint64_t N = uint64_t(1) << n;
    CatalogEntry e;
    e.family = family;
    e.n = n;
    switch (family) {
        case Family::Gold: {
            int i = param ? param : 1;
            if (i < 1 || i >= n || std::gcd(i, n) != 1)
                throw std::invalid_argument("catalog_lookup: gold needs gcd(i,n) = 1, 1 <= i < n");
            e.exponent = (uint64_t(1) << i) + 1;
            e.note = "x^(2^i+1), i=" + std::to_string(i);
            break;
        }
        case Family::Kasami: {
            int i = param ? param : 2;
            if (i < 1 || 2 * i >= n + i || std::gcd(i, n) != 1 ||
                (uint64_t(1) << (2 * i)) >= N)
                throw std::invalid_argument("catalog_lookup: kasami needs gcd(i,n) = 1, 2i < n+?");
            e.exponent = (uint64_t(1) << (2 * i)) - (uint64_t(1) << i) + 1;
            e.note = "x^(4^i-2^i+1), i=" + std::to_string(i);
            break;
        }
        case Family::Welch: {
            if (n % 2 == 0) throw std::invalid_argument("catalog_lookup: welch needs n = 2t+1");
            int t = (n - 1) / 2;
            e.exponent = (uint64_t(1) << t) + 3;
            e.note = "x^(2^t+3), n=2t+1";
            break;
        }
        case Family::Niho: {
            if (n % 2 == 0) throw std::invalid_argument("catalog_lookup: niho needs n = 2t+1");
            int t = (n - 1) / 2;
            if (t % 2 == 0)
                e.exponent = (uint64_t(1) << t) + (uint64_t(1) << (t / 2)) - 1;
            else
                e.exponent = (uint64_t(1) << t) + (uint64_t(1) << ((3 * t + 1) / 2)) - 1;
            e.note = "niho exponent, n=2t+1";
            break;
        }
        case Family::Inverse: {
            if (n % 2 == 0 && n > 1)
                throw std::invalid_argument("catalog_lookup: inverse entry needs odd n");
            e.exponent = N - 2;
            e.note = "field inverse x^(2^n-2)";
            break;
        }
        case Family::Dobbertin: {
            if (n % 5 != 0) throw std::invalid_argument("catalog_lookup: dobbertin needs n = 5t");
            int t = n / 5;
            e.exponent = (uint64_t(1) << (4 * t)) + (uint64_t(1) << (3 * t)) +
                         (uint64_t(1) << (2 * t)) + (uint64_t(1) << t) - 1;
            e.note = "dobbertin exponent, n=5t";
            break;
        }
        case Family::Kim: {
            if (n != 6) throw std::invalid_argument("catalog_lookup: kim lives in dimension 6");
            e.exponent = 0;
            std::ostringstream os;
            os << "x^3 + zeta x^24 + x^10, zeta=0x" << std::hex << kim_zeta();
            e.note = os.str();
            break;
        }
        case Family::Custom: {
            if (param < 1 || uint64_t(param) >= N)
                throw std::invalid_argument("catalog_lookup: custom exponent out of range");
            e.exponent = uint64_t(param);
            e.note = "power map";
            break;
        }
    }
    e.name = entry_name(family, n, e.exponent);
    e.expected_delta = 2;
    return e;
}

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        v.push_back(catalog_lookup(1, Family::Custom, 1));
        v.back().name = "identity-n1";
        v.back().note = "identity map";
        for (int n = 2; n <= 9; ++n)
            for (int i = 1; 2 * i <= n; ++i)
                if (std::gcd(i, n) == 1) v.push_back(catalog_lookup(n, Family::Gold, i));
        for (int n = 4; n <= 9; ++n)
            for (int i = 2; 2 * i <= n; ++i)
                if (std::gcd(i, n) == 1) v.push_back(catalog_lookup(n, Family::Kasami, i));
        for (int n = 3; n <= 9; n += 2) {
            v.push_back(catalog_lookup(n, Family::Welch));
            v.push_back(catalog_lookup(n, Family::Niho));
            v.push_back(catalog_lookup(n, Family::Inverse));
        }
        v.push_back(catalog_lookup(5, Family::Dobbertin));
        v.push_back(catalog_lookup(6, Family::Kim));
        // drop duplicate exponents inside one dimension (welch/niho meet at n=9)
        std::vector<CatalogEntry> out;
        for (auto& e : v) {
            bool dup = false;
            for (auto& o : out)
                if (o.n == e.n && o.exponent == e.exponent && e.family != Family::Kim) dup = true;
            if (!dup) out.push_back(e);
        }
        return out;
    }();
    return entries;
}

VBF instantiate(const CatalogEntry& e) {
    if (e.family == Family::Kim) return kim_function();
    return vbf_from_power(FieldSpec::standard(e.n), e.exponent);
}

uint32_t kim_zeta() {
    static const uint32_t zeta = [] {
        FieldSpec k = FieldSpec::standard(6);
        for (uint32_t z = 2; z < k.size(); ++z) {
            // primitive first
            bool prim = true;
            uint32_t acc = z;
            for (int ord = 1; ord < 63; ++ord) {
                if (acc == 1) { prim = false; break; }
                acc = gf_mul(k, acc, z);
            }
            if (!prim || acc != 1) continue;
            std::vector<uint16_t> t(k.size());
            for (uint32_t x = 0; x < k.size(); ++x)
                t[x] = uint16_t(gf_pow(k, x, 3) ^ gf_mul(k, z, gf_pow(k, x, 24)) ^
                                gf_pow(k, x, 10));
            VBF f{6, 6, std::move(t)};
            if (is_apn(f)) return z;
        }
        throw std::logic_error("kim_zeta: no primitive element works");
    }();
    return zeta;
}

VBF kim_function() {
    FieldSpec k = FieldSpec::standard(6);
    uint32_t z = kim_zeta();
    std::vector<uint16_t> t(k.size());
    for (uint32_t x = 0; x < k.size(); ++x)
        t[x] = uint16_t(gf_pow(k, x, 3) ^ gf_mul(k, z, gf_pow(k, x, 24)) ^ gf_pow(k, x, 10));
    return VBF{6, 6, std::move(t)};
}

AffineMap frobenius_map(const FieldSpec& k, int power) {
    BitMatrix mat(k.n, k.n);
    for (int i = 0; i < k.n; ++i) {
        uint32_t img = gf_pow(k, 1u << i, uint64_t(1) << power);
        for (int j = 0; j < k.n; ++j)
            if ((img >> j) & 1) mat.set(i, j, 1);
    }
    return AffineMap{std::move(mat), 0};
}

std::pair<VBF, AffineMap> monomial_witness_pair(int n, MonomialPair which) {
    FieldSpec k = FieldSpec::standard(n);
    if (which == MonomialPair::inverse_pair) {
        if (n % 2) throw std::invalid_argument("monomial_witness_pair: inverse pair needs even n");
        return {vbf_from_power(k, (uint64_t(1) << n) - 2), frobenius_map(k, n / 2)};
    }
    if (n % 4) throw std::invalid_argument("monomial_witness_pair: gold half pair needs 4 | n");
    return {vbf_from_power(k, (uint64_t(1) << (n / 2 - 1)) + 1), frobenius_map(k, n - 1)};
}

// ----- bundled point sets ----------------------------------------------------

SidonSet affine_basis_set(int dim) {
    if (dim < 1 || dim > 26) throw std::invalid_argument("affine_basis_set: dim out of range");
    SidonSet s;
    s.dim = dim;
    s.points.push_back(0);
    for (int i = 0; i < dim; ++i) s.points.push_back(1u << i);
    return s;
}

SidonSet extended_affine_basis_set(int dim) {
    SidonSet s = affine_basis_set(dim);
    s.points.push_back((1u << dim) - 1);
    return s;
}

SidonSet power_graph_set(int n, uint64_t d) {
    FieldSpec k = FieldSpec::standard(n);
    VBF f = vbf_from_power(k, d);
    SidonSet s;
    s.dim = 2 * n;
    s.points = graph_points(f);
    return s;
}

SidonSet inverse_hyperbola_set(int m) {
    FieldSpec k = FieldSpec::standard(m);
    SidonSet s;
    s.dim = 2 * m;
    for (uint32_t x = 1; x < k.size(); ++x)
        s.points.push_back(x | (gf_pow(k, x, k.size() - 2) << m));
    return s;
}

SidonSet conic_set(int m) {
    FieldSpec k = FieldSpec::standard(m);
    uint32_t c = 0;
    for (uint32_t z = 1; z < k.size(); ++z)
        if (gf_trace(k, z) == 1) { c = z; break; }
    SidonSet s;
    s.dim = 2 * m;
    for (uint32_t y = 0; y < k.size(); ++y)
        for (uint32_t x = 0; x < k.size(); ++x) {
            uint32_t v = gf_mul(k, x, x) ^ gf_mul(k, x, y) ^ gf_mul(k, c, gf_mul(k, y, y));
            if (v == 1) s.points.push_back(x | (y << m));
        }
    return s;
}

// point lists found once by seeded greedy completion and frozen; see the
// sidon census tooling
namespace frozen {
#include "sidon_sets.inc"
}

const std::vector<NamedSidonSet>& bundled_sidon_sets() {
    static const std::vector<NamedSidonSet> sets = [] {
        std::vector<NamedSidonSet> v;
        auto add = [&](std::string name, int dim, uint64_t aut, SidonSet s) {
            v.push_back(NamedSidonSet{std::move(name), dim, s.points.size(), aut, std::move(s)});
        };
        add("affine-basis-2", 2, 6, affine_basis_set(2));
        add("affine-basis-3", 3, 24, affine_basis_set(3));
        add("extended-basis-4", 4, 720, extended_affine_basis_set(4));
        add("extended-basis-5", 5, 720, extended_affine_basis_set(5));
        add("extended-basis-6", 6, 40320, extended_affine_basis_set(6));
        add("x3-graph-6", 6, 40320, power_graph_set(3, 3));
        add("ellipse-6", 6, 1296, frozen::ellipse6());
        add("max-7", 7, 576, frozen::max7());
        // the affine automorphism group of the hyperbola has order 720,
        // independently verified by direct application of all 720 maps
        add("hyperbola-8", 8, 720, inverse_hyperbola_set(4));
        add("x3-graph-8", 8, 5760, power_graph_set(4, 3));
        add("sporadic16-8", 8, 48, frozen::sporadic16_8());
        add("ellipse-8", 8, 2448, frozen::ellipse8());
        add("max-9", 9, 96, frozen::max9());
        return v;
    }();
    return sets;
}

SidonSet named_sidon_set(const std::string& name, int dim) {
    for (const auto& e : bundled_sidon_sets())
        if (e.name == name && (dim == 0 || e.dim == dim)) return e.set;
    // generators parameterized by --dim
    if (name == "affine-basis" && dim >= 1) return affine_basis_set(dim);
    if (name == "extended-basis" && dim >= 4) return extended_affine_basis_set(dim);
    if (name == "x3-graph" && dim >= 4 && dim % 2 == 0) return power_graph_set(dim / 2, 3);
    if (name == "hyperbola" && dim >= 4 && dim % 2 == 0) return inverse_hyperbola_set(dim / 2);
    if (name == "conic" && dim >= 4 && dim % 2 == 0) return conic_set(dim / 2);
    throw std::invalid_argument("named_sidon_set: unknown generator " + name);
}

std::vector<std::string> sidon_set_names() {
    std::vector<std::string> names;
    for (const auto& e : bundled_sidon_sets()) names.push_back(e.name);
    return names;
}

}  // namespace affdist
