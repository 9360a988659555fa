// torsionkit command-line driver: build surface complexes, compute homology
// and torsion, emit pants decompositions, and run the identity verifiers.
// One JSON document per invocation on stdout, human-readable summary on
// stderr. Exit codes: 0 success/equal, 1 verified-unequal, 2 usage or input
// error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "torsionkit/formulas.hpp"
#include "torsionkit/json_io.hpp"

namespace {

using namespace torsionkit;

constexpr int kExitOk = 0;
constexpr int kExitUnequal = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

SurfaceComplex build_named(const std::string& name) {
    if (name == "circle") return circle();
    if (name == "cylinder") return cylinder();
    if (name == "pants") return pants();
    throw std::invalid_argument("unknown constructor '" + name + "' (circle|cylinder|pants)");
}

int run_build(const std::vector<std::string>& args) {
    Json doc;
    if (args.size() == 1) {
        doc = surface_to_json(build_named(args[0]));
        std::cerr << "built " << args[0] << "\n";
    } else {
        const int g = std::stoi(args[0]);
        const int n = std::stoi(args[1]);
        auto sw = build_surface(g, n);
        doc = surface_to_json(sw.surface);
        doc["genus"] = g;
        doc["boundary_count"] = n;
        std::cerr << "built Sigma_{" << g << "," << n << "}: chi="
                  << euler_characteristic(sw.surface.complex) << ", "
                  << sw.decomposition.pieces.size() << " pants\n";
    }
    emit(doc);
    return kExitOk;
}

int run_homology(const std::vector<std::string>& args) {
    BasedChainComplex c;
    std::string what;
    if (args.size() == 2) {
        const int g = std::stoi(args[0]);
        const int n = std::stoi(args[1]);
        c = build_surface(g, n).surface.complex;
        what = "Sigma_{" + args[0] + "," + args[1] + "}";
    } else {
        c = complex_from_string(read_file(args[0]));
        what = args[0];
    }
    Json doc = homology_report(c);
    std::cerr << "homology of " << what << ": betti " << doc["betti"].dump() << "\n";
    emit(doc);
    return kExitOk;
}

int run_torsion(const std::string& path, std::uint64_t seed) {
    const BasedChainComplex c = complex_from_string(read_file(path));
    const HomologyData hd = homology(c);
    const GradedBases h = canonical_bases(hd);
    const TorsionValue def = torsion(c, h, default_choices(c, hd, h));
    const TorsionValue rnd = torsion(c, h, random_choices(c, hd, h, seed));

    Json doc;
    doc["betti"] = betti_to_json(hd);
    doc["default"] = torsion_value_to_json(def);
    doc["random"] = torsion_value_to_json(rnd);
    doc["random"]["seed"] = seed;
    const bool independent = def.abs() == rnd.abs();
    doc["independent"] = independent;
    std::cerr << "torsion abs = " << to_string(def.abs())
              << (independent ? "" : "  [MISMATCH ACROSS CHOICES]") << "\n";
    emit(doc);
    return independent ? kExitOk : kExitUnequal;
}

int run_decompose(int g, int n) {
    const Json doc = decomposition_to_json(pants_decomposition(g, n));
    std::cerr << "Sigma_{" << g << "," << n << "}: " << doc["piece_count"] << " pants, "
              << doc["circles"].size() << " circles\n";
    emit(doc);
    return kExitOk;
}

int finish_verification(const VerificationReport& r) {
    Json doc;
    doc["identity"] = r.identity;
    doc["lhs"] = to_string(r.lhs);
    doc["rhs"] = to_string(r.rhs);
    doc["equal"] = r.equal;
    doc["witness"] = r.witness;
    std::cerr << r.identity << ": lhs = " << to_string(r.lhs) << ", rhs = " << to_string(r.rhs)
              << (r.equal ? "  [equal]" : "  [NOT EQUAL]") << "\n";
    emit(doc);
    return r.equal ? kExitOk : kExitUnequal;
}

std::size_t default_trials() {
    if (const char* env = std::getenv("TORSIONKIT_TRIALS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 25;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Reidemeister-Franz torsion of surface complexes"};
    app.require_subcommand(1);

    std::vector<std::string> build_args;
    auto* build = app.add_subcommand("build", "emit a surface complex as JSON");
    build->add_option("spec", build_args,
                      "either 'g n' or one of circle|cylinder|pants")
        ->expected(1, 2);

    std::vector<std::string> homology_args;
    auto* hom = app.add_subcommand("homology", "betti numbers and bases");
    hom->add_option("input", homology_args, "a complex/surface JSON file, or 'g n'")
        ->expected(1, 2);

    std::string torsion_file;
    std::uint64_t torsion_seed = 0;
    auto* tor = app.add_subcommand("torsion", "torsion report for a complex");
    tor->add_option("file", torsion_file, "complex or surface JSON file")->required();
    tor->add_option("--seed", torsion_seed, "seed for the randomized choices (default 0)");

    int dg = 0, dn = 0;
    auto* dec = app.add_subcommand("decompose", "pants decomposition of Sigma_{g,n}");
    dec->add_option("g", dg)->required();
    dec->add_option("n", dn)->required();

    auto* verify = app.add_subcommand("verify", "run an identity check");
    verify->require_subcommand(1);
    auto* vthm1 = verify->add_subcommand("thm1", "pants torsion vs period matrix");
    int t2g = 0, t2n = 0;
    std::uint64_t t2seed = 0;
    auto* vthm2 = verify->add_subcommand("thm2", "product over the pants decomposition");
    vthm2->add_option("g", t2g)->required();
    vthm2->add_option("n", t2n)->required();
    vthm2->add_option("--seed", t2seed, "seed for the covariance re-run (default 0)");
    int c3g = 2;
    auto* vcase3 = verify->add_subcommand("case3", "genus splitting of a closed surface");
    vcase3->add_option("g", c3g)->required();
    int mvg = 2, mvn = 0;
    auto* vmv = verify->add_subcommand("mv", "Mayer-Vietoris checks for Sigma_{g,n}");
    vmv->add_option("g", mvg)->required();
    vmv->add_option("n", mvn)->required();
    std::string ind_file;
    std::uint64_t ind_seed = 0;
    std::size_t ind_trials = 0;
    auto* vind = verify->add_subcommand("independence", "torsion choice independence");
    vind->add_option("file", ind_file, "complex or surface JSON file")->required();
    vind->add_option("--trials", ind_trials, "number of seeds (default TORSIONKIT_TRIALS or 25)");
    vind->add_option("--seed", ind_seed, "base seed (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*build) return run_build(build_args);
        if (*hom) return run_homology(homology_args);
        if (*tor) return run_torsion(torsion_file, torsion_seed);
        if (*dec) return run_decompose(dg, dn);
        if (*vthm1) return finish_verification(thm1_verify());
        if (*vthm2) return finish_verification(thm2_verify(t2g, t2n, t2seed));
        if (*vcase3) return finish_verification(case3_verify(c3g));
        if (*vmv) return finish_verification(mv_verify(mvg, mvn));
        if (*vind) {
            const std::size_t trials = ind_trials > 0 ? ind_trials : default_trials();
            const BasedChainComplex c = complex_from_string(read_file(ind_file));
            return finish_verification(independence_verify(c, trials, ind_seed));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
