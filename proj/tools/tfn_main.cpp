// tfn: command-line front end for the topical-function toolkit.
//
// Subcommands operate on .tfn files and print one JSON document per input
// file (DOT for the graph commands when --dot is given). Diagnostics go to
// stderr. Exit codes: 0 success, 1 solver non-convergence, 2 input error.

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "topical/expr.hpp"
#include "topical/graphs.hpp"
#include "topical/json_writer.hpp"
#include "topical/metrics.hpp"
#include "topical/recession.hpp"
#include "topical/serialize.hpp"
#include "topical/solver.hpp"

using namespace topical;

namespace {

struct Options {
    double tol = 1e-9;
    int k_max = 10000;
    std::uint64_t seed = 0;
    int samples = 64;
    std::optional<double> lambda;
    std::optional<double> mu;
    bool dot = false;
    bool json = false;  // accepted for symmetry; JSON is already the default
    int jobs = 1;
    std::string point;
    bool additive_point = false;
};

struct FileResult {
    std::string out;     // stdout payload (JSON line or DOT)
    std::string err;     // stderr diagnostics
    int exit_code = 0;   // 0 ok, 1 non-convergence, 2 input error
};

Json scc_json(const SccPartition& part, const Digraph& g) {
    Json comps = Json::array();
    for (const auto& mem : part.members) {
        std::vector<int> coords;
        for (int v : mem)
            for (int c : g.sigma[v]) coords.push_back(c);
        std::sort(coords.begin(), coords.end());
        comps.push(Json::int_vec(coords));
    }
    Json j = Json::object();
    j.set("components", std::move(comps));
    j.set("strongly_connected", Json::boolean(part.n_comps == 1));
    return j;
}

std::string run_graph(const TopicalFn& f, const Options& opt, const std::string& file) {
    Digraph assoc = associated_graph(f);
    if (opt.dot) return to_dot(assoc);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("dim", Json::integer(f.dim));
    j.set("associated", graph_json(assoc));
    j.set("dual", graph_json(dual_graph(f)));
    j.set("syntactic", graph_json(syntactic_graph(f)));
    j.set("scc", scc_json(scc_condense(assoc), assoc));
    return j.dump() + "\n";
}

std::string run_aggregate(const TopicalFn& f, const Options& opt, const std::string& file) {
    AggregationTower tw = aggregate(f);
    if (opt.dot) {
        std::string out;
        for (size_t k = 0; k < tw.levels.size(); ++k)
            out += to_dot(tw.levels[k], "G" + std::to_string(k + 1));
        return out;
    }
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("stabilized_at", Json::integer(tw.stabilized_at));
    Json levels = Json::array();
    for (const auto& g : tw.levels) levels.push(graph_json(g));
    j.set("levels", std::move(levels));
    return j.dump() + "\n";
}

std::string run_check(const TopicalFn& f, const std::string& file) {
    AggregationTower tw = aggregate(f);
    IndecomposabilityResult dec = is_indecomposable(f);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("strongly_connected", Json::boolean(strongly_connected(tw.levels.front())));
    j.set("indecomposable", Json::boolean(dec.indecomposable));
    j.set("stabilized_at", Json::integer(tw.stabilized_at));
    j.set("convex_syntactic", Json::boolean(is_convex_syntactic(f)));
    if (dec.witness) {
        Json w = Json::object();
        w.set("I", Json::int_vec(dec.witness->I));
        w.set("J", Json::int_vec(dec.witness->J));
        j.set("witness", std::move(w));
    }
    return j.dump() + "\n";
}

std::string run_eigen(const TopicalFn& f, const Options& opt, const std::string& file,
                      int& exit_code) {
    EigenReport rep = eigen_solve(f, opt.tol, opt.k_max);
    if (rep.status != SolveStatus::converged) exit_code = std::max(exit_code, 1);
    Json j = Json::object();
    j.set("file", Json::str(file));
    eigen_report_fields(j, rep);
    return j.dump() + "\n";
}

std::string run_cycletime(const TopicalFn& f, const Options& opt, const std::string& file) {
    CycleTimes ct = cycle_times(f, opt.k_max);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("k_max", Json::integer(ct.k_max));
    j.set("chi_upper", Json::number(ct.upper_at_kmax));
    j.set("chi_lower", Json::number(ct.lower_at_kmax));
    j.set("chi_upper_tail", Json::number(ct.upper_tail));
    j.set("chi_lower_tail", Json::number(ct.lower_tail));
    return j.dump() + "\n";
}

std::string run_cw(const TopicalFn& f, const Options& opt, const std::string& file) {
    EigenReport rep = eigen_solve(f, opt.tol, opt.k_max);
    std::optional<Vec> anchor;
    if (rep.status == SolveStatus::converged) anchor = rep.eigenvector;
    double up = collatz_wielandt_upper(f, opt.samples, opt.seed, anchor);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("samples", Json::integer(opt.samples));
    j.set("seed", Json::integer(static_cast<long long>(opt.seed)));
    j.set("anchored", Json::boolean(anchor.has_value()));
    j.set("cw_upper", Json::number(up));
    return j.dump() + "\n";
}

std::string run_recession(const TopicalFn& f, const std::string& file) {
    SliceCertificate cert = slice_bounded_certificate(f);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("fhat", Json::str(pretty_print(cert.rec.fhat)));
    j.set("numeric_agreement", Json::number(cert.rec.numeric_agreement));
    j.set("bounded_certified", Json::boolean(cert.bounded_certified));
    if (cert.witness) j.set("witness", Json::number_vec(*cert.witness));
    return j.dump() + "\n";
}

std::string run_slice_cert(const TopicalFn& f, const std::string& file) {
    SliceCertificate cert = slice_bounded_certificate(f);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("bounded_certified", Json::boolean(cert.bounded_certified));
    j.set("fhat", Json::str(pretty_print(cert.rec.fhat)));
    if (cert.witness) j.set("witness", Json::number_vec(*cert.witness));
    return j.dump() + "\n";
}

std::string run_diameter(const TopicalFn& f, const Options& opt, const std::string& file) {
    DiameterBound b = super_diameter_bound(f, *opt.lambda);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("lambda", Json::number(*opt.lambda));
    j.set("strongly_connected", Json::boolean(b.bounded));
    j.set("bounded", Json::boolean(b.bounded));
    if (b.bounded) j.set("bound", Json::number(b.bound));
    return j.dump() + "\n";
}

Vec parse_point(const std::string& text, int dim, bool additive) {
    Vec x;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        double v = std::stod(item, &pos);
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) throw std::invalid_argument("malformed --point entry '" + item + "'");
        x.push_back(v);
    }
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("--point has " + std::to_string(x.size()) +
                                    " coordinates, function needs " + std::to_string(dim));
    if (!additive) x = log_vec(x);
    return x;
}

std::string run_member(const TopicalFn& f, const Options& opt, const std::string& file) {
    Vec x = parse_point(opt.point, f.dim, opt.additive_point);
    Membership m = membership(f, x, opt.lambda, opt.mu);
    Json j = Json::object();
    j.set("file", Json::str(file));
    j.set("point_additive", Json::number_vec(x));
    if (opt.lambda) j.set("lambda", Json::number(*opt.lambda));
    if (opt.mu) j.set("mu", Json::number(*opt.mu));
    if (m.in_super) j.set("in_super", Json::boolean(*m.in_super));
    if (m.in_sub) j.set("in_sub", Json::boolean(*m.in_sub));
    if (m.in_slice) j.set("in_slice", Json::boolean(*m.in_slice));
    j.set("slack", Json::number_vec(m.slack));
    return j.dump() + "\n";
}

FileResult process_file(const std::string& command, const std::string& file,
                        const Options& opt) {
    FileResult res;
    try {
        TopicalFn f = parse_file(file);
        if (command == "graph") {
            res.out = run_graph(f, opt, file);
        } else if (command == "aggregate") {
            res.out = run_aggregate(f, opt, file);
        } else if (command == "check") {
            res.out = run_check(f, file);
        } else if (command == "eigen") {
            res.out = run_eigen(f, opt, file, res.exit_code);
        } else if (command == "cycletime") {
            res.out = run_cycletime(f, opt, file);
        } else if (command == "cw") {
            res.out = run_cw(f, opt, file);
        } else if (command == "recession") {
            res.out = run_recession(f, file);
        } else if (command == "slice-cert") {
            res.out = run_slice_cert(f, file);
        } else if (command == "diameter") {
            res.out = run_diameter(f, opt, file);
        } else if (command == "member") {
            res.out = run_member(f, opt, file);
        }
    } catch (const std::exception& e) {
        res.err = std::string("tfn: ") + file + ": " + e.what() + "\n";
        res.exit_code = 2;
    }
    return res;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analysis of homogeneous monotone functions on the positive cone"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    std::vector<std::string> files;

    struct Cmd {
        const char* name;
        const char* help;
    };
    const Cmd cmds[] = {
        {"graph", "associated, dual and syntactic graphs plus SCC condensation"},
        {"aggregate", "aggregated graph tower up to its stable level"},
        {"check", "strong connectivity, indecomposability, convexity shortcuts"},
        {"eigen", "eigenvalue/eigenvector search from bounded orbits"},
        {"cycletime", "upper/lower cycle time estimates from the orbit of 0"},
        {"cw", "sampled Collatz-Wielandt upper bound"},
        {"recession", "recession function plus boundedness certificate"},
        {"slice-cert", "slice-space boundedness certificate"},
        {"diameter", "Hilbert diameter bound for a super-eigenspace (needs --lambda)"},
        {"member", "super/sub-eigenspace membership of --point"},
    };
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("files", files, "input .tfn files")->required()->expected(-1);
        sub->callback([&command, name = std::string(c.name)]() { command = name; });
        sub->fallthrough();  // global flags may follow the subcommand
    }

    app.add_option("--tol", opt.tol, "solver tolerance")->check(CLI::PositiveNumber);
    app.add_option("--k-max", opt.k_max, "iteration budget")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "sampling seed");
    app.add_option("--samples", opt.samples, "sample count for cw")->check(CLI::PositiveNumber);
    app.add_option("--lambda", opt.lambda, "super-eigenspace level (additive)");
    app.add_option("--mu", opt.mu, "sub-eigenspace level (additive)");
    app.add_flag("--dot", opt.dot, "DOT output (graph/aggregate)");
    app.add_flag("--json", opt.json, "JSON output (default)");
    app.add_option("--jobs", opt.jobs, "process input files in parallel")
        ->check(CLI::PositiveNumber);
    app.add_option("--point", opt.point, "comma-separated point for member");
    app.add_flag("--additive", opt.additive_point,
                 "interpret --point additively instead of multiplicatively");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // flag conflicts
    if (opt.dot && command != "graph" && command != "aggregate") {
        std::cerr << "tfn: --dot is only valid for graph and aggregate\n";
        return 2;
    }
    if (command == "diameter" && !opt.lambda) {
        std::cerr << "tfn: diameter needs --lambda\n";
        return 2;
    }
    if (command == "member") {
        if (opt.point.empty()) {
            std::cerr << "tfn: member needs --point\n";
            return 2;
        }
        if (!opt.lambda && !opt.mu) {
            std::cerr << "tfn: member needs --lambda and/or --mu\n";
            return 2;
        }
    }

    std::vector<FileResult> results(files.size());
    int jobs = std::min<int>(opt.jobs, static_cast<int>(files.size()));
    if (jobs <= 1) {
        for (size_t i = 0; i < files.size(); ++i)
            results[i] = process_file(command, files[i], opt);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= files.size()) return;
                    results[i] = process_file(command, files[i], opt);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    int exit_code = 0;
    for (const auto& r : results) {
        std::cout << r.out;
        std::cerr << r.err;
        exit_code = std::max(exit_code, r.exit_code);
    }
    std::cout.flush();
    return exit_code;
}
