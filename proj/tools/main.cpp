// Command-line driver: generate surfaces from Weierstrass chain configs,
// verify the geometric properties of the associated ruled immersion, and
// export meshes for inspection.
//
// Exit codes: 0 pass, 1 check failure, 2 config error, 3 seed-constraint
// violation, 4 degenerate sampling.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "austere/io.hpp"

using namespace austere;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int cmd_generate(const std::string& config_path, const std::string& out_path) {
    json cfg = load_json(config_path);
    const json& spec = cfg.contains("surface") ? cfg["surface"] : cfg;
    Surface s = build_surface_from_spec(spec);
    write_text(out_path, surface_to_json(s).dump(2) + "\n");
    std::cout << "wrote " << out_path << " (N = " << s.N << ")\n";
    return 0;
}

int cmd_verify(const std::string& surface_path, const std::string& config_path,
               const std::string& report_path, const std::string& table_path,
               const std::string& checks_arg, double tol_fd, std::int64_t seed_arg) {
    json sj = load_json(surface_path);
    Surface s = surface_from_json(sj);
    json cj = load_json(config_path);
    // allow the surface file itself to carry the generating spec
    if (!cj.contains("surface") && sj.contains("provenance"))
        cj["surface"] = sj["provenance"];
    RunConfig cfg = parse_run_config(cj);
    if (tol_fd > 0) cfg.tol.fd = tol_fd;
    if (seed_arg >= 0) cfg.sampling.seed = static_cast<std::uint64_t>(seed_arg);
    if (!checks_arg.empty()) {
        cfg.checks.clear();
        auto known = known_checks();
        std::string item;
        std::stringstream ss(checks_arg);
        while (std::getline(ss, item, ',')) {
            if (std::find(known.begin(), known.end(), item) == known.end())
                throw ConfigError("--checks", "unknown check '" + item + "'");
            cfg.checks.push_back(item);
        }
    }

    std::vector<CheckResult> results;
    for (const auto& name : cfg.checks) {
        CheckResult r = run_check(name, s, cfg.sampling, cfg.tol, cfg.expect);
        std::cout << (r.pass ? "PASS " : "FAIL ") << name << "  worst=" << r.worst
                  << (r.evaluated ? "" : "  [recorded]")
                  << (r.note.empty() ? "" : "  (" + r.note + ")") << "\n";
        results.push_back(std::move(r));
    }
    json report = report_to_json(results, cj, cfg.sampling.seed);
    write_text(report_path, report.dump(2) + "\n");
    std::string tpath = table_path;
    if (tpath.empty()) {
        tpath = report_path;
        auto dot = tpath.rfind('.');
        if (dot != std::string::npos) tpath.resize(dot);
        tpath += ".csv";
    }
    std::ostringstream csv;
    write_csv(csv, results);
    write_text(tpath, csv.str());
    bool all = report["overall_pass"].get<bool>();
    std::cout << (all ? "all checks passed" : "some checks failed") << "; report " << report_path
              << ", table " << tpath << "\n";
    return all ? 0 : 1;
}

int cmd_export(const std::string& surface_path, const std::string& what,
               const std::string& slice_arg, const std::string& out_path) {
    json sj = load_json(surface_path);
    Surface s = surface_from_json(sj);
    json slice_json = json::object();
    if (!slice_arg.empty()) {
        if (slice_arg[0] == '{')
            slice_json = json::parse(slice_arg);
        else
            slice_json = load_json(slice_arg);
    }
    SliceSpec slice = parse_slice_spec(slice_json, s.N - 2);
    std::ostringstream os;
    std::string hash = sj.value("config_hash", std::string("unknown"));
    export_mesh(os, s, what, slice, hash);
    write_text(out_path, os.str());
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weierstrass-chain isotropic surfaces and austere ruled immersions"};
    app.require_subcommand(1);

    std::string config_path, out_path, surface_path, report_path, table_path;
    std::string checks_arg, what = "surface", slice_arg;
    double tol_fd = -1;
    std::int64_t seed_arg = -1;

    auto* gen = app.add_subcommand("generate", "build a surface artifact from a config");
    gen->add_option("--config", config_path, "JSON config")->required();
    gen->add_option("--out", out_path, "output surface file")->required();

    auto* ver = app.add_subcommand("verify", "run verification checks on a surface");
    ver->add_option("--surface", surface_path, "surface artifact file")->required();
    ver->add_option("--config", config_path, "JSON run config")->required();
    ver->add_option("--report", report_path, "output report JSON")->required();
    ver->add_option("--table", table_path, "output residual CSV (default: report stem + .csv)");
    ver->add_option("--checks", checks_arg, "comma-separated subset of checks");
    ver->add_option("--tol-fd", tol_fd, "override finite-difference tolerance");
    ver->add_option("--seed", seed_arg, "override sampling seed");

    auto* exp = app.add_subcommand("export", "export a tessellated OBJ mesh");
    exp->add_option("--surface", surface_path, "surface artifact file")->required();
    exp->add_option("--what", what, "surface | immersion | lagrangian")->required();
    exp->add_option("--slice", slice_arg, "slice spec (JSON file or inline object)");
    exp->add_option("--out", out_path, "output OBJ path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(config_path, out_path);
        if (ver->parsed())
            return cmd_verify(surface_path, config_path, report_path, table_path, checks_arg,
                              tol_fd, seed_arg);
        if (exp->parsed()) return cmd_export(surface_path, what, slice_arg, out_path);
    } catch (const SeedConstraintError& e) {
        std::cerr << "seed constraint: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AllSamplesDegenerate& e) {
        std::cerr << "degenerate sampling: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
