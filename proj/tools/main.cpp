// affdist: distance-to-affine analysis of vectorial Boolean functions,
// Sidon set tooling, and bent-function constructions.
//
// Exit codes: 0 success, 1 input error, 2 budget exceeded, 3 verification
// failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "affdist/bent.hpp"
#include "affdist/catalog.hpp"
#include "affdist/distance.hpp"
#include "affdist/gf2.hpp"
#include "affdist/sidon.hpp"
#include "affdist/sidon_iso.hpp"
#include "affdist/vbf.hpp"

using namespace affdist;
using json = nlohmann::json;

namespace {

struct FunctionArgs {
    int n = 0;
    uint64_t power = 0;
    bool kim = false;
    std::string file;
    uint32_t modulus = 0;   // 0: standard
};

void add_function_flags(CLI::App* cmd, FunctionArgs& fa) {
    cmd->add_option("--n", fa.n, "input dimension");
    cmd->add_option("--power", fa.power, "exponent d of the power map x^d");
    cmd->add_flag("--kim", fa.kim, "the Kim function over GF(2^6)");
    cmd->add_option("--file", fa.file, "truth table file (format: 'n m' then 2^n hex entries)");
    cmd->add_option("--modulus", fa.modulus, "irreducible modulus overriding the default");
}

FieldSpec field_for(const FunctionArgs& fa, int n) {
    if (fa.modulus) {
        if (!gf2_poly_irreducible(fa.modulus, n))
            throw std::invalid_argument("modulus is not irreducible of the right degree");
        return FieldSpec{n, fa.modulus};
    }
    return FieldSpec::standard(n);
}

VBF make_function(const FunctionArgs& fa, std::string& id, std::optional<uint64_t>& power,
                  FieldSpec& field) {
    if (!fa.file.empty()) {
        id = fa.file;
        VBF f = load_truth_table(fa.file);
        field = (f.n >= 1 && f.n <= 16) ? field_for(fa, f.n) : FieldSpec{};
        return f;
    }
    if (fa.kim) {
        id = "kim-n6";
        field = FieldSpec::standard(6);
        return kim_function();
    }
    if (fa.power && fa.n) {
        std::ostringstream os;
        os << "x^" << fa.power << "-n" << fa.n;
        id = os.str();
        field = field_for(fa, fa.n);
        power = fa.power;
        return vbf_from_power(field, fa.power);
    }
    throw std::invalid_argument("specify --file, --kim, or --power with --n");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open " + out_path);
        os << text << '\n';
        std::cout << "wrote " << out_path << '\n';
    }
}

json analyze_json(const VBF& f) {
    DistanceBounds b = bounds_report(f);
    int nl = nonlinearity(f);
    int32_t wmax = 0;
    for (uint32_t bb = 1; bb < (1u << f.m); ++bb)
        for (int32_t v : walsh_row(f, bb)) wmax = std::max(wmax, v < 0 ? -v : v);
    json j{{"n", f.n},
           {"m", f.m},
           {"nonlinearity", nl},
           {"walsh_max_abs", wmax},
           {"delta", b.delta},
           {"apn", b.apn},
           {"vectorial_bent", b.vectorial_bent},
           {"bounds",
            {{"trivial_upper", b.trivial_upper},
             {"uniformity_lower", b.uniformity_lower.usable()},
             {"conjecture_value", b.conjecture_value},
             {"best_lower", b.best_lower},
             {"best_upper", b.best_upper}}}};
    if (b.sidon_lower) j["bounds"]["sidon_lower"] = *b.sidon_lower;
    if (b.bent_interval) j["bounds"]["bent_interval"] = {b.bent_interval->first, b.bent_interval->second};
    return j;
}

int run_analyze(const FunctionArgs& fa, const std::string& out, bool as_json) {
    std::string id;
    std::optional<uint64_t> power;
    FieldSpec field;
    VBF f = make_function(fa, id, power, field);
    json j = analyze_json(f);
    j["id"] = id;
    if (as_json) {
        emit(j.dump(2), out);
    } else {
        std::ostringstream os;
        os << id << ": (" << f.n << "," << f.m << ")-function\n"
           << "  nonlinearity     " << j["nonlinearity"] << "\n"
           << "  walsh max |W|    " << j["walsh_max_abs"] << "\n"
           << "  uniformity       " << j["delta"] << (j["apn"].get<bool>() ? "  (APN)" : "")
           << "\n"
           << "  vectorial bent   " << (j["vectorial_bent"].get<bool>() ? "yes" : "no") << "\n"
           << "  distance bounds  [" << j["bounds"]["best_lower"] << ", "
           << j["bounds"]["best_upper"] << "]";
        emit(os.str(), out);
    }
    return 0;
}

int run_distance(const FunctionArgs& fa, DistanceOptions opt, const std::string& out,
                 const std::string& cert_path, const std::string& verify_path) {
    if (!verify_path.empty()) {
        ScanCertificate cert = load_certificate(verify_path);
        VerifyResult v = verify_certificate(cert);
        std::cout << (v.ok ? "OK: " : "FAIL: ") << v.message << '\n';
        return v.ok ? 0 : 3;
    }
    std::string id;
    std::optional<uint64_t> power;
    FieldSpec field;
    VBF f = make_function(fa, id, power, field);
    opt.id = id;
    opt.power = power;
    if (field.n == f.n) opt.field = field;
    if (opt.strategy == "exact" && !distance_exact_feasible(f.n, f.m)) {
        std::cerr << "exact computation exceeds the step budget for (" << f.n << "," << f.m
                  << "); use the auto or certify strategy\n";
        return 2;
    }
    DistanceReport r = distance_report(f, opt);
    emit(report_to_json(r), out);
    if (!cert_path.empty()) {
        if (!r.certificate) {
            std::cerr << "no certificate produced (strategy " << r.strategy_used << ")\n";
            return 2;
        }
        save_certificate(cert_path, *r.certificate);
    }
    if (!r.exact && opt.strategy == "exact") return 2;
    return 0;
}

SidonSet load_or_generate(const std::string& file, const std::string& gen, int dim) {
    if (!file.empty()) return load_sidon_set(file);
    if (!gen.empty()) return named_sidon_set(gen, dim);
    throw std::invalid_argument("specify --file or --gen");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distance to affine functions, Sidon sets, bent constructions"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "spectral and differential analysis");
    FunctionArgs an_fa;
    add_function_flags(analyze, an_fa);
    std::string an_out;
    bool an_json = false;
    analyze->add_option("--out", an_out, "output path");
    analyze->add_flag("--json", an_json, "JSON output");

    // distance
    auto* distance = app.add_subcommand("distance", "distance to affine maps, with certificates");
    FunctionArgs d_fa;
    add_function_flags(distance, d_fa);
    DistanceOptions d_opt;
    std::string d_out, d_cert, d_verify;
    distance->add_option("--strategy", d_opt.strategy, "auto | exact | witness | certify");
    distance->add_option("--seed", d_opt.seed, "seed for the witness search");
    distance->add_option("--threads", d_opt.threads, "worker threads");
    distance->add_flag("--long", d_opt.long_scans, "enable the heavy certificate scans");
    distance->add_option("--out", d_out, "report path");
    distance->add_option("--cert", d_cert, "certificate path");
    distance->add_option("--verify", d_verify, "recheck a stored certificate and exit");
    distance->add_option("--checkpoint", d_opt.checkpoint,
                         "resume file: finished scan centers are skipped on restart");

    // sidon
    auto* sidon = app.add_subcommand("sidon", "Sidon set analysis");
    sidon->require_subcommand(1);
    auto* s_check = sidon->add_subcommand("check", "Sidon / completeness flags");
    auto* s_aut = sidon->add_subcommand("aut", "automorphism group");
    auto* s_isom = sidon->add_subcommand("isom", "isomorphism between two sets");
    auto* s_census = sidon->add_subcommand("census", "greedy completion census");
    auto* s_complete = sidon->add_subcommand("complete", "greedy-complete a set");
    std::string sc_file, sc_gen;
    int sc_dim = 0;
    for (auto* c : {s_check, s_aut, s_complete}) {
        c->add_option("--file", sc_file, "sidon set file");
        c->add_option("--gen", sc_gen, "bundled generator name");
        c->add_option("--dim", sc_dim, "ambient dimension for parameterized generators");
    }
    std::string si_a, si_b, si_out;
    s_isom->add_option("a", si_a, "first set file")->required();
    s_isom->add_option("b", si_b, "second set file")->required();
    s_isom->add_option("--out", si_out, "certificate path");
    int cen_dim = 6;
    uint64_t cen_seeds = 100;
    uint64_t cen_seed0 = 0;
    s_census->add_option("--dim", cen_dim, "dimension")->required();
    s_census->add_option("--seeds", cen_seeds, "number of seeds");
    s_census->add_option("--seed0", cen_seed0, "first seed");
    uint64_t comp_seed = 0;
    std::string comp_out;
    s_complete->add_option("--seed", comp_seed, "seed");
    s_complete->add_option("--out", comp_out, "output set path");

    // bent
    auto* bent = app.add_subcommand("bent", "bent constructions from pre-quasifields");
    bent->require_subcommand(1);
    std::string b_kind_names[] = {"mm", "ps", "qf"};
    struct BentArgs {
        int m = 0, t = 0;
        std::string quasifield = "field";
        std::string qf_file;
        std::string out;
        bool verify_distance = false;
        uint64_t seed = 0;
        bool randomize = false;
    } b_args;
    std::vector<CLI::App*> bent_cmds;
    for (auto& name : b_kind_names) {
        auto* c = bent->add_subcommand(name, "construction " + name);
        c->add_option("--m", b_args.m, "half input dimension")->required();
        c->add_option("--t", b_args.t, "output dimension")->required();
        c->add_option("--quasifield", b_args.quasifield, "field | twisted");
        c->add_option("--qf-file", b_args.qf_file, "quasifield table file");
        c->add_option("--out", b_args.out, "truth table output path");
        c->add_flag("--check-distance", b_args.verify_distance,
                    "verify the closed-form distance when within budget");
        c->add_flag("--randomize", b_args.randomize, "randomize the ingredient maps");
        c->add_option("--seed", b_args.seed, "seed for --randomize");
        bent_cmds.push_back(c);
    }

    // catalog
    auto* catalog = app.add_subcommand("catalog", "bundled functions and point sets");
    catalog->require_subcommand(1);
    auto* c_list = catalog->add_subcommand("list", "list bundled entries");
    bool cl_json = false;
    c_list->add_flag("--json", cl_json, "JSON output");
    auto* c_export = catalog->add_subcommand("export", "write a bundled truth table");
    int ce_n = 0;
    std::string ce_family = "gold", ce_out;
    int ce_param = 0;
    c_export->add_option("--n", ce_n, "dimension")->required();
    c_export->add_option("--family", ce_family, "gold|kasami|welch|niho|inverse|dobbertin|kim");
    c_export->add_option("--param", ce_param, "family index where applicable");
    c_export->add_option("--out", ce_out, "output path")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "recheck a certificate file");
    std::string v_path;
    verify->add_option("path", v_path, "certificate JSON")->required();

    try {
        app.parse(argc, argv);

        if (analyze->parsed()) return run_analyze(an_fa, an_out, an_json);

        if (distance->parsed()) return run_distance(d_fa, d_opt, d_out, d_cert, d_verify);

        if (sidon->parsed()) {
            if (s_check->parsed()) {
                SidonSet s = load_or_generate(sc_file, sc_gen, sc_dim);
                bool sid = is_sidon(s);
                std::cout << "dim " << s.dim << ", " << s.points.size() << " points, sidon "
                          << (sid ? "yes" : "no");
                if (sid) std::cout << ", complete " << (is_complete_sidon(s) ? "yes" : "no");
                std::cout << '\n';
                return 0;
            }
            if (s_aut->parsed()) {
                SidonSet s = load_or_generate(sc_file, sc_gen, sc_dim);
                SidonAutGroup g = aut_sidon(s);
                std::cout << "automorphism group order " << u128_to_string(g.order) << '\n';
                return 0;
            }
            if (s_isom->parsed()) {
                SidonSet a = load_sidon_set(si_a), b = load_sidon_set(si_b);
                auto iso = isom_sidon(a, b);
                if (!iso) {
                    std::cout << "not isomorphic\n";
                    return 0;
                }
                if (!verify_isomorphism(a, b, *iso)) {
                    std::cout << "internal verification failed\n";
                    return 3;
                }
                std::ostringstream os;
                write_isomorphism(os, *iso);
                emit(os.str(), si_out);
                return 0;
            }
            if (s_census->parsed()) {
                std::map<size_t, int> hist;
                for (uint64_t s = cen_seed0; s < cen_seed0 + cen_seeds; ++s)
                    ++hist[greedy_complete(SidonSet{cen_dim, {}}, s).points.size()];
                for (auto [sz, cnt] : hist) std::cout << sz << ": " << cnt << '\n';
                return 0;
            }
            if (s_complete->parsed()) {
                SidonSet s = load_or_generate(sc_file, sc_gen, sc_dim);
                SidonSet done = greedy_complete(s, comp_seed);
                std::ostringstream os;
                write_sidon_set(os, done);
                emit(os.str(), comp_out);
                return 0;
            }
        }

        if (bent->parsed()) {
            FieldSpec k = FieldSpec::standard(b_args.m);
            BentSpec spec = default_bent_spec(b_args.m, b_args.t);
            if (b_args.randomize) {
                std::mt19937_64 rng(b_args.seed);
                std::shuffle(spec.gamma.begin(), spec.gamma.end(), rng);
                std::shuffle(spec.sigma.begin(), spec.sigma.end(), rng);
                std::shuffle(spec.pi.begin(), spec.pi.end(), rng);
                for (auto& v : spec.h) v = uint16_t(rng() & ((1u << b_args.t) - 1));
            }
            PreQuasifield q = !b_args.qf_file.empty() ? load_quasifield(b_args.qf_file)
                              : b_args.quasifield == "twisted" ? twisted_quasifield(k, 1)
                                                               : field_quasifield(k);
            VBF f;
            if (bent_cmds[0]->parsed()) f = construct_mm(k, spec);
            if (bent_cmds[1]->parsed()) f = construct_ps(q, spec);
            if (bent_cmds[2]->parsed()) f = construct_qf(q, spec);
            bool ok = is_vectorial_bent(f);
            std::cout << "(" << f.n << "," << f.m << ")-function, vectorial bent: "
                      << (ok ? "yes" : "no") << '\n';
            if (b_args.verify_distance) {
                if (!distance_exact_feasible(f.n, f.m)) {
                    std::cerr << "distance check exceeds the exact budget\n";
                    return 2;
                }
                int d = distance_exact(f, 2);
                int want = ((1 << f.n) - (1 << (f.n / 2))) / (1 << f.m) * ((1 << f.m) - 1);
                std::cout << "distance " << d << " (closed form " << want << ")\n";
                if (d != want) return 3;
            }
            if (!b_args.out.empty()) {
                save_truth_table(b_args.out, f);
                std::cout << "wrote " << b_args.out << '\n';
            }
            return ok ? 0 : 3;
        }

        if (catalog->parsed()) {
            if (c_list->parsed()) {
                if (cl_json) {
                    json arr = json::array();
                    for (const auto& e : catalog_entries())
                        arr.push_back(json{{"name", e.name},
                                           {"family", family_name(e.family)},
                                           {"n", e.n},
                                           {"exponent", e.exponent},
                                           {"delta", e.expected_delta},
                                           {"note", e.note}});
                    std::cout << arr.dump(2) << '\n';
                } else {
                    for (const auto& e : catalog_entries())
                        std::cout << e.name << "  (delta " << e.expected_delta << ")  " << e.note
                                  << '\n';
                    for (const auto& s : bundled_sidon_sets())
                        std::cout << s.name << "  sidon set, dim " << s.dim << ", " << s.size
                                  << " points, aut order " << s.aut_order << '\n';
                }
                return 0;
            }
            if (c_export->parsed()) {
                auto fam = family_from_name(ce_family);
                if (!fam) throw std::invalid_argument("unknown family " + ce_family);
                CatalogEntry e = catalog_lookup(ce_n, *fam, ce_param);
                save_truth_table(ce_out, instantiate(e));
                std::cout << "wrote " << ce_out << " (" << e.name << ")\n";
                return 0;
            }
        }

        if (verify->parsed()) {
            ScanCertificate cert = load_certificate(v_path);
            VerifyResult v = verify_certificate(cert);
            std::cout << (v.ok ? "OK: " : "FAIL: ") << v.message << '\n';
            return v.ok ? 0 : 3;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
