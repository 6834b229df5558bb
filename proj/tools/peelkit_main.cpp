// Command-line front end: peel polytopes, certify decompositions, replay the
// staged proof simulation, run brute-force cross-checks, render SVGs.
//
// Exit codes: 0 success, 1 input error, 2 certification breach,
// 3 simulation claim failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "peelkit/json_io.hpp"
#include "peelkit/lattice_sim.hpp"
#include "peelkit/peeling.hpp"
#include "peelkit/svg_render.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitCertification = 2;
constexpr int kExitClaim = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Atomic write: temp file in the target directory, then rename.
void write_file(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

struct Options {
    std::string input;
    std::string output;
    double rho = 1.0;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int samples = 10000;
    int max_stages = 1000000;
    int n = 2;
    std::int64_t m = 1;
    std::optional<int> nil_const;
    std::optional<int> nil_random;
    std::string format = "svg";
    int width = 800;
    int height = 800;
    double stroke_scale = 1.0;
};

std::uint64_t effective_seed(const Options& opt) {
    if (opt.seed_given) return opt.seed;
    if (const char* env = std::getenv("PEELKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::runtime_error("PEELKIT_SEED is not a valid integer");
        }
    }
    return opt.seed;
}

peelkit::PeelParams make_params(const Options& opt) {
    peelkit::PeelParams p;
    p.rho = opt.rho;
    p.tol = opt.tol;
    p.max_stages = opt.max_stages;
    p.seed = effective_seed(opt);
    p.coverage_samples = opt.samples;
    p.suffix_samples = std::max(1, opt.samples / 10);
    return p;
}

peelkit::sim::NilOracle make_oracle(const Options& opt) {
    peelkit::sim::NilOracle oracle;
    if (opt.nil_const && opt.nil_random)
        throw std::runtime_error("choose either --nil-const or --nil-random");
    if (opt.nil_random) {
        oracle.kind = peelkit::sim::NilOracle::Kind::Random;
        oracle.max_index = *opt.nil_random;
        if (oracle.max_index < 1) throw std::runtime_error("--nil-random must be >= 1");
        oracle.seed = effective_seed(opt);
    } else {
        oracle.kind = peelkit::sim::NilOracle::Kind::Constant;
        oracle.k = opt.nil_const.value_or(2);
        if (oracle.k < 1) throw std::runtime_error("--nil-const must be >= 1");
    }
    return oracle;
}

int cmd_peel(const Options& opt) {
    peelkit::Polytope P = peelkit::polytope_from_json(read_file(opt.input));
    peelkit::PeelParams params = make_params(opt);
    peelkit::PeelDecomposition dec = peelkit::peel(P, params);
    write_file(opt.output, peelkit::decomposition_to_json(dec));
    peelkit::PeelCertificate cert = peelkit::certify_peel(P, dec, params);
    std::cout << "wrote " << opt.output << " (" << dec.pieces.size() << " pieces, certificate "
              << (cert.pass ? "pass" : "FAIL") << ")\n";
    return cert.pass ? kExitOk : kExitCertification;
}

int cmd_certify(const Options& opt) {
    peelkit::PeelDecomposition dec = peelkit::decomposition_from_json(read_file(opt.input));
    // The peeled polytope is the union of the pieces, so its vertex set is
    // recoverable from the decomposition itself.
    std::vector<peelkit::Vec> all;
    for (const peelkit::PeelPiece& pc : dec.pieces)
        for (const peelkit::Vec& v : pc.body.verts) all.push_back(pc.body.hull.embed(v));
    peelkit::Polytope P = peelkit::from_vertices(all, dec.params.tol);
    peelkit::PeelParams params = make_params(opt);
    params.rho = dec.params.rho;
    params.tol = dec.params.tol;
    peelkit::PeelCertificate cert = peelkit::certify_peel(P, dec, params);
    if (!opt.output.empty()) write_file(opt.output, peelkit::certificate_to_json(cert));
    std::cout << (cert.pass ? "certificate pass" : "certificate FAIL") << "\n";
    return cert.pass ? kExitOk : kExitCertification;
}

int cmd_simulate(const Options& opt) {
    if (std::abs(opt.rho - 1.0) > 1e-12)
        throw std::runtime_error("simulate requires rho = 1 (the paper's constant)");
    peelkit::sim::NilOracle oracle = make_oracle(opt);
    peelkit::PeelParams params = make_params(opt);
    peelkit::sim::ProofTrace trace = peelkit::sim::run_main_proof(opt.n, opt.m, oracle, params);
    if (!opt.output.empty()) write_file(opt.output, peelkit::trace_to_json(trace));
    if (trace.contradiction && trace.failure.empty()) {
        std::cout << "contradiction reached: 1 is nilpotent (" << trace.stages.size()
                  << " stages)\n";
        return kExitOk;
    }
    std::cerr << "claim failed: " << trace.failure << "\n";
    return kExitClaim;
}

int cmd_expand(const Options& opt) {
    peelkit::PeelParams params = make_params(opt);
    const int stage_limit = std::min(opt.max_stages, 2);
    peelkit::sim::Expansion e = peelkit::sim::brute_force_expand(
        opt.n, opt.m, opt.nil_const.value_or(2), std::max(1, stage_limit), params);
    if (!opt.output.empty()) write_file(opt.output, peelkit::expansion_to_json(e));
    std::cout << (e.agrees_with_trace ? "expansion agrees with the symbolic trace"
                                      : "expansion DISAGREES with the symbolic trace")
              << " (" << e.detail << ")\n";
    return e.agrees_with_trace ? kExitOk : kExitClaim;
}

int cmd_render(const Options& opt) {
    peelkit::PeelDecomposition dec = peelkit::decomposition_from_json(read_file(opt.input));
    std::string out;
    if (opt.format == "svg") {
        out = peelkit::render_decomposition_svg(dec, opt.width, opt.height, opt.stroke_scale);
    } else if (opt.format == "json") {
        out = peelkit::decomposition_summary_json(dec);
    } else {
        throw std::runtime_error("unknown --format (expected json or svg)");
    }
    write_file(opt.output, out);
    std::cout << "wrote " << opt.output << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"peelkit: certified polytope peeling and proof-skeleton simulation"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool io_input, bool io_output) {
        if (io_input) sub->add_option("--input", opt.input, "input file")->required();
        if (io_output) sub->add_option("--output", opt.output, "output file");
        sub->add_option("--rho", opt.rho, "target piece radius");
        sub->add_option("--tol", opt.tol, "tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "sampling seed (default 0; PEELKIT_SEED overrides)")
            ->each([&](const std::string&) { opt.seed_given = true; });
        sub->add_option("--samples", opt.samples, "certification sample count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-stages", opt.max_stages, "stage guard / expansion stage limit")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* peel = app.add_subcommand("peel", "peel a polytope into radius-rho pieces");
    add_common(peel, true, false);
    peel->add_option("--output", opt.output, "decomposition JSON")->required();

    CLI::App* certify = app.add_subcommand("certify", "re-certify a decomposition file");
    add_common(certify, true, true);

    CLI::App* simulate = app.add_subcommand("simulate", "replay the staged proof simulation");
    add_common(simulate, false, true);
    simulate->add_option("--n", opt.n, "number of monomial coordinates")->required();
    simulate->add_option("--m", opt.m, "degree of the homogeneous representation")->required();
    simulate->add_option("--nil-const", [&](const std::vector<std::string>& v) {
        opt.nil_const = std::stoi(v.at(0));
        return true;
    }, "constant nilpotency index");
    simulate->add_option("--nil-random", [&](const std::vector<std::string>& v) {
        opt.nil_random = std::stoi(v.at(0));
        return true;
    }, "random nilpotency indices in 1..K");

    CLI::App* expand = app.add_subcommand("expand", "brute-force expansion cross-check");
    add_common(expand, false, true);
    expand->add_option("--n", opt.n, "number of monomial coordinates")->required();
    expand->add_option("--m", opt.m, "degree of the homogeneous representation")->required();
    expand->add_option("--nil-const", [&](const std::vector<std::string>& v) {
        opt.nil_const = std::stoi(v.at(0));
        return true;
    }, "constant nilpotency index");

    CLI::App* render = app.add_subcommand("render", "render a decomposition (SVG or summary JSON)");
    add_common(render, true, false);
    render->add_option("--output", opt.output, "output file")->required();
    render->add_option("--format", opt.format, "json|svg (default svg)");
    render->add_option("--width", opt.width, "SVG width")->check(CLI::PositiveNumber);
    render->add_option("--height", opt.height, "SVG height")->check(CLI::PositiveNumber);
    render->add_option("--stroke-scale", opt.stroke_scale, "stroke width multiplier")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (peel->parsed()) return cmd_peel(opt);
        if (certify->parsed()) return cmd_certify(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (expand->parsed()) return cmd_expand(opt);
        if (render->parsed()) return cmd_render(opt);
    } catch (const peelkit::CertificationError& e) {
        std::cerr << "certification breach: " << e.what() << "\n";
        return kExitCertification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
