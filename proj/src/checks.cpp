#include "austere/checks.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include "austere/frames.hpp"
#include "austere/ruled.hpp"
#include "austere/structure.hpp"

namespace austere {

void parallel_for(int count, const std::function<void(int)>& fn) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AUSTERE_WORKERS")) workers = std::atoi(env);
    workers = std::max(1, std::min({workers, count, 16}));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

namespace {

double t_norm(const MPoint& p) { return p.t.size() ? p.t.norm() : 0.0; }

void add_row(CheckResult& res, const std::string& metric, int sample, double u, double v,
             double tn, double value, double threshold, bool pass) {
    res.rows.push_back({metric, sample, u, v, tn, value, threshold, pass});
    if (!pass) res.pass = false;
    res.worst = std::max(res.worst, std::abs(value));
}

CheckResult check_conformal(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol) {
    CheckResult res{"conformal"};
    auto pts = sample_surface_points(spec.box, spec.surface_samples, spec.seed);
    for (int i = 0; i < (int)pts.size(); ++i) {
        auto [u, v] = pts[i];
        SurfaceJet jet = surface_jet(s, u, v, 1);
        Eigen::VectorXd gu = jet.partial(1, 0), gv = jet.partial(0, 1);
        double thr = tol.conformal * jet.lambda2;
        add_row(res, "ortho", i, u, v, 0, std::abs(gu.dot(gv)), thr,
                std::abs(gu.dot(gv)) < thr);
        double iso = std::abs(gu.squaredNorm() - gv.squaredNorm());
        add_row(res, "equal_norm", i, u, v, 0, iso, thr, iso < thr);
    }
    return res;
}

CheckResult check_minimal(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol) {
    CheckResult res{"minimal"};
    auto pts = sample_surface_points(spec.box, spec.surface_samples, spec.seed);
    for (int i = 0; i < (int)pts.size(); ++i) {
        auto [u, v] = pts[i];
        SurfaceJet jet = surface_jet(s, u, v, 2);
        Eigen::VectorXd gu = jet.partial(1, 0), gv = jet.partial(0, 1);
        Eigen::VectorXd tr = jet.partial(2, 0) + jet.partial(0, 2);
        tr -= tr.dot(gu) / gu.squaredNorm() * gu;
        tr -= tr.dot(gv) / gv.squaredNorm() * gv;
        double lam = std::sqrt(jet.lambda2);
        double val = tr.norm() / jet.lambda2;  // |alpha(e1,e1)+alpha(e2,e2)|
        double thr = tol.minimal * lam;
        add_row(res, "trace_II", i, u, v, 0, val, thr, val < thr);
    }
    return res;
}

CheckResult check_isotropy(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol,
                           const Expectations& expect) {
    CheckResult res{"isotropy"};
    auto pts = sample_surface_points(spec.box, spec.surface_samples / 4 + 5, spec.seed);
    IsotropyResult r1 = isotropy_order(s, pts, tol.exact);
    auto pts2 = sample_surface_points(spec.box, spec.surface_samples / 4 + 5, spec.seed + 1);
    IsotropyResult r2 = isotropy_order(s, pts2, tol.exact);
    res.degenerate_count = r1.skipped_samples;
    res.note = "measured order " + std::to_string(r1.order);
    for (int i = 0; i < (int)r1.table.size(); ++i) {
        auto [u, v] = pts[i];
        for (const auto& er : r1.table[i]) {
            bool within = er.order > r1.order || er.is_circle;
            add_row(res, "circle_dot_k" + std::to_string(er.order), i, u, v, 0,
                    std::abs(er.dot_resid), tol.circle, within || std::abs(er.dot_resid) >= 0);
            add_row(res, "circle_norm_k" + std::to_string(er.order), i, u, v, 0,
                    std::abs(er.norm_resid), tol.circle, true);
        }
    }
    res.pass = (r1.order == r2.order);  // stability across seeds
    if (!res.pass) res.note += " (unstable across seeds)";
    if (expect.isotropy) {
        res.pass = res.pass && (r1.order == *expect.isotropy);
        if (r1.order != *expect.isotropy)
            res.note += ", expected " + std::to_string(*expect.isotropy);
    } else {
        res.evaluated = false;
    }
    res.worst = r1.order;
    return res;
}

CheckResult check_austere(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol,
                          const Expectations& expect) {
    CheckResult res{"austere"};
    int n = s.N - 2;
    auto pts = sample_m_points(spec.box, spec.immersion_samples, n, spec.seed);
    AustereReport rep = austere_report(s, pts, spec.directions, tol.fd, tol.eigen_zero,
                                       tol.fd_step);
    res.degenerate_count = rep.degenerate_count;
    int fail_big = 0, good = 0;
    for (int i = 0; i < (int)rep.samples.size(); ++i) {
        const auto& r = rep.samples[i];
        if (r.degenerate) continue;
        ++good;
        if (r.odd_resid > tol.distinguish) ++fail_big;
        add_row(res, "odd_power_sum", i, r.p.u, r.p.v, t_norm(r.p), r.odd_resid, tol.fd,
                r.odd_resid < tol.fd);
        add_row(res, "eig_pair_rel", i, r.p.u, r.p.v, t_norm(r.p), r.pair_rel, tol.pair_eig,
                r.pair_rel < tol.pair_eig);
        add_row(res, "rank", i, r.p.u, r.p.v, t_norm(r.p), r.rank, 4, true);
        add_row(res, "minimality_F", i, r.p.u, r.p.v, t_norm(r.p), r.minimality, tol.fd,
                r.minimality < tol.fd);
    }
    if (good == 0) throw AllSamplesDegenerate("austere: all samples degenerate");
    res.worst = rep.worst_odd;
    if (!expect.austere) {
        res.evaluated = false;
        res.pass = true;
        res.note = "recorded";
        return res;
    }
    if (*expect.austere) {
        res.pass = rep.pass && rep.worst_pair_rel < tol.pair_eig &&
                   rep.worst_minimality < tol.fd && rep.rank4_fraction >= 0.95;
        res.note = "rank-4 fraction " + std::to_string(rep.rank4_fraction);
    } else {
        res.pass = fail_big >= (9 * good) / 10;
        res.note = "non-austere control, " + std::to_string(fail_big) + "/" +
                   std::to_string(good) + " samples above floor";
        for (auto& row : res.rows) row.pass = true;  // rows are informational here
    }
    return res;
}

CheckResult check_nullity(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol) {
    CheckResult res{"nullity"};
    int n = s.N - 2;
    if (n <= 4) {
        res.note = "V0 trivial (n = 4)";
        return res;
    }
    auto pts = sample_m_points(spec.box, spec.immersion_samples / 4 + 4, n, spec.seed);
    double worst_v0 = 0;
    for (int i = 0; i < (int)pts.size(); ++i) {
        try {
            NullityAlignment na = nullity_alignment(s, pts[i], tol.fd_step);
            add_row(res, "v0_annihilated", i, pts[i].u, pts[i].v, t_norm(pts[i]), na.v0_resid,
                    tol.nullity, na.v0_resid < tol.nullity);
            add_row(res, "v1_control", i, pts[i].u, pts[i].v, t_norm(pts[i]), na.v1_resid, 1e-3,
                    na.v1_resid > 1e-3);
            worst_v0 = std::max(worst_v0, na.v0_resid);
        } catch (const std::runtime_error&) {
            ++res.degenerate_count;
        }
    }
    if (res.rows.empty()) throw AllSamplesDegenerate("nullity: all samples degenerate");
    res.worst = worst_v0;
    return res;
}

CheckResult check_kaehler(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol,
                          const Expectations& expect) {
    CheckResult res{"kaehler"};
    int n = s.N - 2;
    auto pts = sample_m_points(spec.box, spec.kaehler_samples, n, spec.seed);
    std::vector<double> resid(pts.size(), -1.0);
    std::vector<double> gap(pts.size(), -1.0);
    bool want_cert = expect.kaehler && *expect.kaehler;
    parallel_for((int)pts.size(), [&](int i) {
        try {
            resid[i] = kaehler_residual(s, pts[i]);
            if (want_cert) gap[i] = nonholomorphy_certificate(s, pts[i]);
        } catch (const std::runtime_error&) {
        }
    });
    int good = 0;
    double worst_par = 0;
    for (int i = 0; i < (int)pts.size(); ++i) {
        if (resid[i] < 0) {
            ++res.degenerate_count;
            continue;
        }
        ++good;
        bool ok = !expect.kaehler ||
                  (*expect.kaehler ? resid[i] < tol.fd : resid[i] > tol.distinguish);
        add_row(res, "parallelism", i, pts[i].u, pts[i].v, t_norm(pts[i]), resid[i],
                expect.kaehler && !*expect.kaehler ? tol.distinguish : tol.fd, ok);
        worst_par = std::max(worst_par, resid[i]);
        if (want_cert && gap[i] >= 0)
            add_row(res, "nonholo_gap", i, pts[i].u, pts[i].v, t_norm(pts[i]), gap[i],
                    tol.distinguish, gap[i] > tol.distinguish);
    }
    if (good == 0) throw AllSamplesDegenerate("kaehler: all samples degenerate");
    res.worst = worst_par;
    res.evaluated = expect.kaehler.has_value();
    if (!res.evaluated) {
        for (auto& row : res.rows) row.pass = true;
        res.pass = true;
    }
    return res;
}

CheckResult check_lemma(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol,
                        const Expectations& expect) {
    CheckResult res{"lemma"};
    int n = s.N - 2;
    std::optional<bool> iso2;
    if (expect.isotropy) iso2 = *expect.isotropy >= 2;
    auto pts = sample_m_points(spec.box, spec.immersion_samples / 4 + 4, n, spec.seed);
    for (int i = 0; i < (int)pts.size(); ++i) {
        try {
            ImmersionJet jet = evaluate_immersion(s, pts[i], tol.fd_step);
            TCommutationResult r = t_commutation_test(jet);
            bool ok = !iso2 || (*iso2 ? r.resid < tol.fd : r.resid > tol.distinguish);
            add_row(res, "t_commutation", i, pts[i].u, pts[i].v, t_norm(pts[i]), r.resid,
                    iso2 && !*iso2 ? tol.distinguish : tol.fd, ok);
        } catch (const std::runtime_error&) {
            ++res.degenerate_count;
        }
    }
    if (res.rows.empty()) throw AllSamplesDegenerate("lemma: all samples degenerate");
    res.evaluated = iso2.has_value();
    if (!res.evaluated) res.pass = true;
    return res;
}

CheckResult check_lagrangian(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol,
                             const Expectations& expect) {
    CheckResult res{"lagrangian"};
    int n = s.N - 2;
    HaltonSampler hs(2, spec.seed + 17);
    auto pts = sample_m_points(spec.box, spec.lagrangian_samples, n, spec.seed);
    std::vector<LagrangianResiduals> rs(pts.size());
    std::vector<char> ok(pts.size(), 0);
    std::vector<Eigen::Vector2d> s12s(pts.size());
    for (int i = 0; i < (int)pts.size(); ++i) {
        Eigen::VectorXd q = hs.next();
        s12s[i] = Eigen::Vector2d(spec.box.s_box * (2 * q(0) - 1), spec.box.s_box * (2 * q(1) - 1));
    }
    parallel_for((int)pts.size(), [&](int i) {
        try {
            rs[i] = lagrangian_lift(s, pts[i], s12s[i]);
            ok[i] = 1;
        } catch (const std::runtime_error&) {
        }
    });
    for (int i = 0; i < (int)pts.size(); ++i) {
        if (!ok[i]) {
            ++res.degenerate_count;
            continue;
        }
        add_row(res, "symplectic", i, pts[i].u, pts[i].v, t_norm(pts[i]), rs[i].symplectic,
                tol.symplectic, rs[i].symplectic < tol.symplectic);
        bool mc_ok = true;
        double thr = tol.lagrangian_mc;
        if (expect.austere) {
            mc_ok = *expect.austere ? rs[i].mean_curv < tol.lagrangian_mc
                                    : rs[i].mean_curv > tol.distinguish;
            thr = *expect.austere ? tol.lagrangian_mc : tol.distinguish;
        }
        add_row(res, "mean_curvature", i, pts[i].u, pts[i].v, t_norm(pts[i]), rs[i].mean_curv,
                thr, mc_ok);
    }
    if (res.rows.empty()) throw AllSamplesDegenerate("lagrangian: all samples degenerate");
    return res;
}

CheckResult check_pair(const Surface& s, const SamplingSpec& spec, const ToleranceSet& tol,
                       const Expectations& expect) {
    CheckResult res{"pair"};
    int n = s.N - 2;
    auto pts = sample_m_points(spec.box, spec.pair_samples, n, spec.seed);
    bool expect_austere = expect.austere.value_or(false);
    std::vector<double> odd(pts.size(), -1.0);
    parallel_for((int)pts.size(), [&](int i) {
        try {
            SecondFundamental sf = associated_pair(s, pts[i], M_PI / 4, tol.fd_step);
            odd[i] = odd_residual_sweep(sf, 2 * spec.directions, spec.seed + i);
        } catch (const std::runtime_error&) {
        }
    });
    for (int i = 0; i < (int)pts.size(); ++i) {
        if (odd[i] < 0) {
            ++res.degenerate_count;
            continue;
        }
        add_row(res, "pair_odd", i, pts[i].u, pts[i].v, t_norm(pts[i]), odd[i], tol.fd,
                !expect_austere || odd[i] < tol.fd);
    }
    if (res.rows.empty()) throw AllSamplesDegenerate("pair: all samples degenerate");
    // ruling coincidence of F_0 and F_{pi/2}
    Surface conj = rotate_surface(s, M_PI / 2);
    auto spts = sample_surface_points(spec.box, 10, spec.seed + 3);
    for (int i = 0; i < (int)spts.size(); ++i) {
        auto [u, v] = spts[i];
        double r = (ruling_projector(s, u, v) - ruling_projector(conj, u, v))
                       .cwiseAbs()
                       .maxCoeff();
        add_row(res, "ruling_coincide", i, u, v, 0, r, tol.projector, r < tol.projector);
    }
    res.evaluated = expect.austere.has_value();
    return res;
}

CheckResult check_connection_forms(const Surface& s, const SamplingSpec& spec,
                                   const ToleranceSet& tol, const Expectations& expect) {
    CheckResult res{"connection-forms"};
    bool holo = expect.kaehler.value_or(false);  // identities proved for holomorphic g
    auto pts = sample_surface_points(spec.box, spec.connection_samples, spec.seed);
    for (int i = 0; i < (int)pts.size(); ++i) {
        auto [u, v] = pts[i];
        try {
            ConnectionFormReport rep = connection_form_residuals(s, u, v);
            add_row(res, "omega_identities", i, u, v, 0, rep.worst, tol.fd,
                    !holo || rep.worst < tol.fd);
        } catch (const std::runtime_error&) {
            ++res.degenerate_count;
        }
    }
    if (res.rows.empty()) throw AllSamplesDegenerate("connection-forms: all samples degenerate");
    res.evaluated = holo;
    if (!holo) res.note = "recorded (identities proved only for holomorphic g)";
    return res;
}

}  // namespace

std::vector<std::string> known_checks() {
    return {"conformal", "minimal", "isotropy",   "austere", "nullity",
            "kaehler",   "lemma",   "lagrangian", "pair",    "connection-forms"};
}

Expectations preset_expectations(const std::string& preset) {
    Expectations e;
    if (preset == "n4-canonical") {
        e.isotropy = 2;
        e.austere = true;
        e.kaehler = true;
    } else if (preset == "n6-canonical") {
        e.isotropy = 2;
        e.austere = true;
        e.kaehler = false;
    } else if (preset == "literal-recipe") {
        e.isotropy = 1;
        e.austere = false;
        e.kaehler = false;
    } else if (preset == "holo-n4") {
        e.isotropy = 2;
        e.austere = true;
        e.kaehler = true;
    } else if (preset == "holo-n6") {
        e.isotropy = 3;
        e.austere = true;
        e.kaehler = true;
    }
    return e;
}

CheckResult run_check(const std::string& name, const Surface& s, const SamplingSpec& spec,
                      const ToleranceSet& tol, const Expectations& expect) {
    if (name == "conformal") return check_conformal(s, spec, tol);
    if (name == "minimal") return check_minimal(s, spec, tol);
    if (name == "isotropy") return check_isotropy(s, spec, tol, expect);
    if (name == "austere") return check_austere(s, spec, tol, expect);
    if (name == "nullity") return check_nullity(s, spec, tol);
    if (name == "kaehler") return check_kaehler(s, spec, tol, expect);
    if (name == "lemma") return check_lemma(s, spec, tol, expect);
    if (name == "lagrangian") return check_lagrangian(s, spec, tol, expect);
    if (name == "pair") return check_pair(s, spec, tol, expect);
    if (name == "connection-forms") return check_connection_forms(s, spec, tol, expect);
    throw std::invalid_argument("unknown check: " + name);
}

}  // namespace austere
