#include "austere/io.hpp"

#include <cinttypes>
#include <cstdio>

#include "austere/frames.hpp"
#include "austere/ruled.hpp"

namespace austere {

using nlohmann::json;

namespace {

const json& need(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
    return *it;
}

double need_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

Complex complex_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(path, "expected a complex number as [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

CPoly poly_from(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected a coefficient array");
    std::vector<Complex> c;
    for (size_t k = 0; k < j.size(); ++k)
        c.push_back(complex_from(j[k], path + "[" + std::to_string(k) + "]"));
    return CPoly(std::move(c));
}

HoloCurve curve_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of polynomials");
    std::vector<CPoly> comps;
    for (size_t k = 0; k < j.size(); ++k)
        comps.push_back(poly_from(j[k], path + "[" + std::to_string(k) + "]"));
    return HoloCurve(std::move(comps));
}

json poly_to_json(const CPoly& p) {
    json out = json::array();
    for (const auto& c : p.coeffs) out.push_back({c.real(), c.imag()});
    return out;
}

json curve_to_json(const HoloCurve& c) {
    json out = json::array();
    for (const auto& p : c.components) out.push_back(poly_to_json(p));
    return out;
}

}  // namespace

Surface build_surface_from_spec(const json& spec) {
    json resolved = spec;
    Expectations dummy;
    if (spec.contains("preset")) {
        std::string name = spec["preset"].get<std::string>();
        auto names = preset_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw ConfigError("surface.preset", "unknown preset '" + name + "'");
        Surface s = preset_surface(name);
        s.provenance = spec.dump();
        return s;
    }
    std::string kind = need(spec, "surface", "kind").get<std::string>();
    if (kind == "chain") {
        ChainConfig cfg;
        cfg.N = static_cast<int>(need_number(need(spec, "surface", "N"), "surface.N"));
        cfg.steps = spec.value("steps", 2);
        cfg.seed = curve_from(need(spec, "surface", "seed"), "surface.seed");
        cfg.seed_isotropic = spec.value("seed_isotropic", true);
        if (spec.contains("z0")) cfg.z0 = complex_from(spec["z0"], "surface.z0");
        const json& betas = need(spec, "surface", "betas");
        if (!betas.is_array() || static_cast<int>(betas.size()) != cfg.steps)
            throw ConfigError("surface.betas", "need exactly one beta per step");
        for (size_t k = 0; k < betas.size(); ++k) {
            CPoly b = poly_from(betas[k], "surface.betas[" + std::to_string(k) + "]");
            if (b.is_zero())
                throw ConfigError("surface.betas[" + std::to_string(k) + "]",
                                  "beta must be nonzero");
            cfg.betas.push_back(std::move(b));
        }
        if (cfg.seed.is_zero()) throw ConfigError("surface.seed", "seed must be nonzero");
        if (cfg.seed.dim() != cfg.N - 2 * cfg.steps)
            throw ConfigError("surface.seed", "seed dimension must equal N - 2*steps");
        if (cfg.seed_isotropic) {
            CPoly d = bdot(cfg.seed, cfg.seed);
            if (max_abs_coeff(d) > 1e-12 * std::max(bdot_scale(cfg.seed, cfg.seed), 1.0))
                throw SeedConstraintError("isotropic seed requested but bdot(seed, seed) != 0");
        }
        Surface s = build_chain_surface(cfg);
        s.provenance = spec.dump();
        return s;
    }
    if (kind == "holomorphic") {
        HoloCurveConfig cfg;
        cfg.eta = curve_from(need(spec, "surface", "eta"), "surface.eta");
        if (cfg.eta.dim() < 3)
            throw ConfigError("surface.eta", "need at least 3 components (N = 2m >= 6)");
        Surface s;
        try {
            s = build_holomorphic_surface(cfg);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("surface.eta", e.what());
        }
        s.provenance = spec.dump();
        return s;
    }
    throw ConfigError("surface.kind", "expected 'chain' or 'holomorphic'");
}

RunConfig parse_run_config(const json& j) {
    RunConfig cfg;
    cfg.surface_spec = need(j, "config", "surface");
    (void)build_surface_from_spec(cfg.surface_spec);  // validate early

    const json& sampling = need(j, "config", "sampling");
    if (!sampling.contains("seed"))
        throw ConfigError("sampling.seed", "RNG seed is mandatory for reproducible reports");
    cfg.sampling.seed = sampling["seed"].get<std::uint64_t>();
    if (sampling.contains("domain")) {
        const json& d = sampling["domain"];
        if (!d.is_array() || d.size() != 2 || d[0].size() != 2 || d[1].size() != 2)
            throw ConfigError("sampling.domain", "expected [[u_min,u_max],[v_min,v_max]]");
        cfg.sampling.box.u_min = d[0][0].get<double>();
        cfg.sampling.box.u_max = d[0][1].get<double>();
        cfg.sampling.box.v_min = d[1][0].get<double>();
        cfg.sampling.box.v_max = d[1][1].get<double>();
        if (cfg.sampling.box.u_min >= cfg.sampling.box.u_max ||
            cfg.sampling.box.v_min >= cfg.sampling.box.v_max)
            throw ConfigError("sampling.domain", "empty domain");
    }
    cfg.sampling.box.t_box = sampling.value("t_box", 1.5);
    cfg.sampling.box.s_box = sampling.value("s_box", 1.0);
    cfg.sampling.surface_samples = sampling.value("surface_samples", 200);
    cfg.sampling.immersion_samples = sampling.value("immersion_samples", 50);
    cfg.sampling.directions = sampling.value("directions", 16);
    cfg.sampling.kaehler_samples = sampling.value("kaehler_samples", 6);
    cfg.sampling.lagrangian_samples = sampling.value("lagrangian_samples", 4);
    cfg.sampling.connection_samples = sampling.value("connection_samples", 10);
    cfg.sampling.pair_samples = sampling.value("pair_samples", 20);

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        cfg.tol.exact = t.value("exact", cfg.tol.exact);
        cfg.tol.fd = t.value("fd", cfg.tol.fd);
        cfg.tol.eigen_zero = t.value("eigen_zero", cfg.tol.eigen_zero);
        cfg.tol.fd_step = t.value("fd_step", cfg.tol.fd_step);
        cfg.tol.circle = t.value("circle", cfg.tol.circle);
        for (double v : {cfg.tol.exact, cfg.tol.fd, cfg.tol.eigen_zero, cfg.tol.fd_step})
            if (!(v > 0)) throw ConfigError("tolerances", "all tolerances must be positive");
    }

    if (cfg.surface_spec.contains("preset"))
        cfg.expect = preset_expectations(cfg.surface_spec["preset"].get<std::string>());
    if (j.contains("expected")) {
        const json& e = j["expected"];
        if (e.contains("isotropy")) cfg.expect.isotropy = e["isotropy"].get<int>();
        if (e.contains("austere")) cfg.expect.austere = e["austere"].get<bool>();
        if (e.contains("kaehler")) cfg.expect.kaehler = e["kaehler"].get<bool>();
    }

    if (j.contains("checks")) {
        auto known = known_checks();
        for (const auto& c : j["checks"]) {
            std::string name = c.get<std::string>();
            if (std::find(known.begin(), known.end(), name) == known.end())
                throw ConfigError("checks", "unknown check '" + name + "'");
            cfg.checks.push_back(name);
        }
    } else {
        cfg.checks = known_checks();
    }
    return cfg;
}

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const json& j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a_hash(j.dump()));
    return buf;
}

json surface_to_json(const Surface& s) {
    json out;
    out["version"] = kVersion;
    out["N"] = s.N;
    out["alpha"] = curve_to_json(s.alpha);
    out["phi"] = curve_to_json(s.phi);
    json prov = s.provenance.empty() ? json::object() : json::parse(s.provenance);
    out["provenance"] = prov;
    out["config_hash"] = config_hash_hex(prov);
    return out;
}

Surface surface_from_json(const json& j) {
    Surface s;
    s.N = static_cast<int>(need_number(need(j, "surface", "N"), "surface.N"));
    s.alpha = curve_from(need(j, "surface", "alpha"), "surface.alpha");
    s.phi = curve_from(need(j, "surface", "phi"), "surface.phi");
    if (j.contains("provenance")) s.provenance = j["provenance"].dump();
    if (s.alpha.dim() != s.N || s.phi.dim() != s.N)
        throw ConfigError("surface", "alpha/phi dimension mismatch with N");
    // phi' = alpha must hold for a valid artifact
    HoloCurve d = derivative(s.phi);
    for (int k = 0; k < s.N; ++k)
        if (max_abs_coeff(d.components[k] - s.alpha.components[k]) >
            1e-12 * std::max(1.0, max_abs_coeff(s.alpha.components[k])))
            throw ConfigError("surface.phi", "phi' != alpha");
    return s;
}

json report_to_json(const std::vector<CheckResult>& results, const json& config_echo,
                    std::uint64_t seed) {
    json out;
    out["version"] = kVersion;
    out["config"] = config_echo;
    out["config_hash"] = config_hash_hex(config_echo);
    out["seed"] = seed;
    bool all = true;
    json checks = json::array();
    for (const auto& r : results) {
        json c;
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["evaluated"] = r.evaluated;
        c["worst_residual"] = r.worst;
        c["degenerate_count"] = r.degenerate_count;
        if (!r.note.empty()) c["note"] = r.note;
        // worst row and every failing row carry sample coordinates
        const CheckRow* worst = nullptr;
        json fails = json::array();
        for (const auto& row : r.rows) {
            if (!worst || std::abs(row.value) > std::abs(worst->value)) worst = &row;
            if (!row.pass)
                fails.push_back({{"metric", row.metric},
                                 {"sample", row.sample},
                                 {"u", row.u},
                                 {"v", row.v},
                                 {"t_norm", row.t_norm},
                                 {"value", row.value},
                                 {"threshold", row.threshold}});
        }
        if (worst)
            c["worst_sample"] = {{"metric", worst->metric}, {"sample", worst->sample},
                                 {"u", worst->u},           {"v", worst->v},
                                 {"t_norm", worst->t_norm}, {"value", worst->value}};
        c["failures"] = fails;
        checks.push_back(std::move(c));
        all = all && r.pass;
    }
    out["checks"] = checks;
    out["overall_pass"] = all;
    return out;
}

void write_csv(std::ostream& os, const std::vector<CheckResult>& results) {
    os << "# austere residual table, schema v1 (see docs/csv_schema.md)\n";
    os << "check,metric,sample,u,v,t_norm,value,threshold,pass\n";
    char buf[512];
    for (const auto& r : results)
        for (const auto& row : r.rows) {
            std::snprintf(buf, sizeof buf, "%s,%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                          r.name.c_str(), row.metric.c_str(), row.sample, row.u, row.v,
                          row.t_norm, row.value, row.threshold, row.pass ? 1 : 0);
            os << buf;
        }
}

SliceSpec parse_slice_spec(const json& j, int n) {
    SliceSpec s;
    s.t_fixed = Eigen::VectorXd::Zero(std::max(0, n - 2));
    if (j.contains("free")) {
        for (const auto& f : j["free"]) s.free_params.push_back(f.get<std::string>());
    } else {
        s.free_params = {"u", "v"};
    }
    if (s.free_params.size() < 2 || s.free_params[0] != "u" || s.free_params[1] != "v")
        throw ConfigError("slice.free", "free parameters must start with [\"u\", \"v\"]");
    if (s.free_params.size() > 3) throw ConfigError("slice.free", "at most 3 free parameters");
    if (s.free_params.size() == 3) {
        const std::string& f = s.free_params[2];
        if (f.size() < 2 || f[0] != 't') throw ConfigError("slice.free", "third parameter must be t<k>");
        int k = std::atoi(f.c_str() + 1);
        if (k < 1 || k > n - 2) throw ConfigError("slice.free", "t index out of range");
    }
    if (j.contains("grid")) {
        for (const auto& g : j["grid"]) s.grid.push_back(g.get<int>());
    } else {
        s.grid.assign(s.free_params.size(), 32);
    }
    if (s.grid.size() != s.free_params.size())
        throw ConfigError("slice.grid", "grid size must match the number of free parameters");
    for (int g : s.grid)
        if (g < 2 || g > 1024) throw ConfigError("slice.grid", "grid entries must be in [2, 1024]");
    if (j.contains("fixed")) {
        const json& f = j["fixed"];
        if (f.contains("t")) {
            if (static_cast<int>(f["t"].size()) != n - 2)
                throw ConfigError("slice.fixed.t", "expected n-2 entries");
            for (int k = 0; k < n - 2; ++k) s.t_fixed(k) = f["t"][k].get<double>();
        }
        if (f.contains("s")) {
            if (f["s"].size() != 2) throw ConfigError("slice.fixed.s", "expected 2 entries");
            s.s_fixed << f["s"][0].get<double>(), f["s"][1].get<double>();
        }
    }
    if (j.contains("axes")) {
        if (j["axes"].size() != 3) throw ConfigError("slice.axes", "expected 3 projection axes");
        for (int k = 0; k < 3; ++k) s.axes[k] = j["axes"][k].get<int>();
    }
    if (j.contains("domain")) {
        const json& d = j["domain"];
        s.u_min = d[0][0].get<double>();
        s.u_max = d[0][1].get<double>();
        s.v_min = d[1][0].get<double>();
        s.v_max = d[1][1].get<double>();
    }
    s.t_span = j.value("t_span", 1.0);
    return s;
}

void export_mesh(std::ostream& os, const Surface& s, const std::string& what,
                 const SliceSpec& slice, const std::string& hash) {
    int n = s.N - 2;
    for (int ax : slice.axes) {
        int limit = what == "lagrangian" ? 2 * s.N : s.N;
        if (ax < 0 || ax >= limit) throw ConfigError("slice.axes", "projection axis out of range");
    }
    int gu = slice.grid[0], gv = slice.grid[1];
    int sheets = slice.free_params.size() == 3 ? slice.grid[2] : 1;
    int t_free = slice.free_params.size() == 3 ? std::atoi(slice.free_params[2].c_str() + 1) - 1 : -1;
    if (slice.free_params.size() == 3 && what != "immersion")
        throw ConfigError("slice.free", "a free t parameter requires --what immersion");

    std::optional<FrameField> field;
    if (what == "immersion" || what == "lagrangian")
        field.emplace(s, 0.5 * (slice.u_min + slice.u_max), 0.5 * (slice.v_min + slice.v_max),
                      (s.N - 2) / 2 + 1);

    os << "# austere " << what << " export\n";
    os << "# config " << hash << "\n";
    os << "# slice free=[";
    for (size_t i = 0; i < slice.free_params.size(); ++i)
        os << (i ? "," : "") << slice.free_params[i];
    os << "] grid=[";
    for (size_t i = 0; i < slice.grid.size(); ++i) os << (i ? "," : "") << slice.grid[i];
    os << "] axes=[" << slice.axes[0] << "," << slice.axes[1] << "," << slice.axes[2] << "]\n";

    char buf[256];
    for (int sh = 0; sh < sheets; ++sh) {
        Eigen::VectorXd t = slice.t_fixed;
        if (t_free >= 0 && sheets > 1)
            t(t_free) = -slice.t_span + 2.0 * slice.t_span * sh / (sheets - 1);
        for (int i = 0; i < gu; ++i) {
            double u = slice.u_min + (slice.u_max - slice.u_min) * i / (gu - 1);
            for (int j = 0; j < gv; ++j) {
                double v = slice.v_min + (slice.v_max - slice.v_min) * j / (gv - 1);
                Eigen::VectorXd pos;
                if (what == "surface") {
                    pos = surface_jet(s, u, v, 1).partial(0, 0);
                } else if (what == "immersion") {
                    Eigen::MatrixXd E = field->ruling_raw(u, v);
                    pos = surface_jet(s, u, v, 1).partial(0, 0) + E * t;
                } else if (what == "lagrangian") {
                    MPoint p{u, v, t};
                    // anchor the frame field at each vertex: the sweep spans
                    // the whole domain, a single gauge will not
                    FrameField local(s, u, v, (s.N - 2) / 2 + 1);
                    ImmersionJet jet = evaluate_immersion(s, p, local);
                    pos.resize(2 * s.N);
                    pos.head(s.N) = jet.F;
                    pos.tail(s.N) = jet.nu * slice.s_fixed;
                } else {
                    throw ConfigError("what", "expected surface|immersion|lagrangian");
                }
                std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", pos(slice.axes[0]),
                              pos(slice.axes[1]), pos(slice.axes[2]));
                os << buf;
            }
        }
    }
    for (int sh = 0; sh < sheets; ++sh) {
        int base = sh * gu * gv;
        for (int i = 0; i + 1 < gu; ++i)
            for (int j = 0; j + 1 < gv; ++j) {
                int a = base + i * gv + j + 1;  // OBJ indices are 1-based
                int b = a + gv;
                os << "f " << a << " " << b << " " << b + 1 << " " << a + 1 << "\n";
            }
    }
}

}  // namespace austere
