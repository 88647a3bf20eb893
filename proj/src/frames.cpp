#include "austere/frames.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace austere {

namespace {

constexpr double kTiny = 1e-300;

// Gram-Schmidt step: orthogonalize v against the columns of basis (count
// columns), return the residual.
Eigen::VectorXd project_off(const Eigen::MatrixXd& basis, int count, const Eigen::VectorXd& v) {
    Eigen::VectorXd w = v;
    for (int i = 0; i < count; ++i) {
        const auto e = basis.col(i);
        w -= w.dot(e) * e;
    }
    return w;
}

}  // namespace

std::vector<Eigen::VectorXd> derivative_list(const SurfaceJet& jet, int max_order) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(2 * max_order);
    for (int k = 1; k <= max_order; ++k) {
        out.push_back(jet.partial(k, 0));
        out.push_back(jet.partial(k - 1, 1));
    }
    return out;
}

AdaptedFrame adapted_frame(const Surface& s, double u, double v, int depth, double pivot_tol) {
    int max_order = depth + 1;
    SurfaceJet jet = surface_jet(s, u, v, max_order);
    auto dl = derivative_list(jet, max_order);

    AdaptedFrame fr;
    fr.e.resize(s.N, static_cast<int>(dl.size()));
    int count = 0;
    for (const auto& vec : dl) {
        Eigen::VectorXd w = project_off(fr.e, count, vec);
        double nrm = w.norm();
        if (nrm < pivot_tol * std::max(vec.norm(), kTiny)) {
            fr.degenerate = true;
            break;
        }
        fr.e.col(count++) = w / nrm;
    }
    fr.e.conservativeResize(Eigen::NoChange, count);
    for (int b = 0; 2 * b < count; ++b)
        fr.split.emplace_back(2 * b, std::min(2 * b + 2, count));
    return fr;
}

namespace {

// shared core: flag basis built order by order; forms = projected pure/mixed
// derivatives of the next order.
std::vector<HigherFormData> forms_from_jet(const SurfaceJet& jet, int max_order,
                                           const std::vector<Eigen::VectorXd>& pure,
                                           const std::vector<Eigen::VectorXd>& mixed) {
    double lam = std::sqrt(jet.lambda2);
    Eigen::MatrixXd basis(jet.N, 2 * max_order);
    int count = 0;
    auto add = [&](const Eigen::VectorXd& vec) {
        Eigen::VectorXd w = project_off(basis, count, vec);
        double nrm = w.norm();
        if (nrm > 1e-12 * std::max(vec.norm(), kTiny)) basis.col(count++) = w / nrm;
    };
    add(pure[0]);
    add(mixed[0]);
    std::vector<HigherFormData> out;
    for (int s = 2; s <= max_order; ++s) {
        HigherFormData f;
        f.order = s;
        double scale = std::pow(lam, s);
        f.A = project_off(basis, count, pure[s - 1]) / scale;
        f.B = project_off(basis, count, mixed[s - 1]) / scale;
        f.kappa = f.A.norm();
        out.push_back(std::move(f));
        add(pure[s - 1]);
        add(mixed[s - 1]);
    }
    return out;
}

}  // namespace

std::vector<HigherFormData> higher_forms(const Surface& s, double u, double v, int max_order) {
    SurfaceJet jet = surface_jet(s, u, v, max_order);
    std::vector<Eigen::VectorXd> pure, mixed;
    for (int k = 1; k <= max_order; ++k) {
        pure.push_back(jet.partial(k, 0));
        mixed.push_back(jet.partial(k - 1, 1));
    }
    return forms_from_jet(jet, max_order, pure, mixed);
}

std::vector<HigherFormData> higher_forms_rotated(const Surface& s, double u, double v,
                                                 int max_order, double theta) {
    SurfaceJet jet = surface_jet(s, u, v, max_order);
    double c = std::cos(theta), sn = std::sin(theta);
    // directional derivatives along w = cos e_u + sin e_v and its normal,
    // D_w^k g and D_w^{k-1} D_{w-perp} g from the full jet by binomials
    auto dir_deriv = [&](int k, int perp) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(jet.N);
        // expand (c du + sn dv)^{k-perp} (-sn du + c dv)^{perp} with perp in {0,1}
        for (int j = 0; j <= k - perp; ++j) {
            double coef = 1.0;
            // binomial C(k-perp, j) c^{k-perp-j} sn^j
            for (int i = 0; i < j; ++i) coef *= double(k - perp - i) / double(i + 1);
            coef *= std::pow(c, k - perp - j) * std::pow(sn, j);
            if (perp == 0) {
                acc += coef * jet.partial(k - j, j);
            } else {
                acc += coef * (-sn * jet.partial(k - j, j) + c * jet.partial(k - 1 - j, j + 1));
            }
        }
        return acc;
    };
    std::vector<Eigen::VectorXd> pure, mixed;
    for (int k = 1; k <= max_order; ++k) {
        pure.push_back(dir_deriv(k, 0));
        mixed.push_back(dir_deriv(k, 1));
    }
    return forms_from_jet(jet, max_order, pure, mixed);
}

EllipseReport ellipse_report(const Surface& s, double u, double v, int k, double tol) {
    auto forms = higher_forms(s, u, v, k + 1);
    const HigherFormData& f = forms.back();
    EllipseReport r;
    r.order = k;
    double na = f.A.norm(), nb = f.B.norm();
    // degenerate when the projection annihilates both generators
    SurfaceJet jet = surface_jet(s, u, v, k + 1);
    double raw = jet.partial(k + 1, 0).norm() / std::pow(std::sqrt(jet.lambda2), k + 1);
    r.degenerate = std::max(na, nb) < 1e-9 * std::max(raw, kTiny);
    r.dot_resid = f.A.dot(f.B) / (na * nb + kTiny);
    r.norm_resid = (na - nb) / (na + nb + kTiny);
    double q = na * na + nb * nb;
    r.axis_resid = std::sqrt(std::pow(na * na - nb * nb, 2) + 4 * std::pow(f.A.dot(f.B), 2)) /
                   std::max(q, kTiny);
    r.is_circle = !r.degenerate && std::abs(r.dot_resid) < tol && std::abs(r.norm_resid) < tol;
    return r;
}

ThirdFormComponents third_form_components(const Surface& s, double u, double v) {
    AdaptedFrame fr = adapted_frame(s, u, v, 2);
    if (fr.degenerate || fr.e.cols() < 6)
        throw std::domain_error("third_form_components: degenerate frame through N_2");
    auto forms = higher_forms(s, u, v, 3);
    double kappa1 = forms[0].kappa;
    double scale = std::max({forms[0].A.norm(), forms[1].A.norm(), forms[1].B.norm()});
    if (kappa1 < 1e-12 * std::max(scale, kTiny))
        throw std::domain_error("third_form_components: flat point (kappa_1 ~ 0)");
    ThirdFormComponents c;
    c.kappa1 = kappa1;
    c.a1 = forms[1].A.dot(fr.e.col(4)) / kappa1;
    c.b1 = forms[1].A.dot(fr.e.col(5)) / kappa1;
    c.a2 = forms[1].B.dot(fr.e.col(4)) / kappa1;
    c.b2 = forms[1].B.dot(fr.e.col(5)) / kappa1;
    return c;
}

IsotropyResult isotropy_order(const Surface& s,
                              const std::vector<std::pair<double, double>>& samples,
                              double tol) {
    int m_max = (s.N - 2) / 2;
    IsotropyResult res;
    res.table.reserve(samples.size());
    std::vector<int> per_sample_order;
    for (const auto& [u, v] : samples) {
        std::vector<EllipseReport> row;
        int order = 0;
        bool usable = true;
        for (int k = 1; k <= m_max; ++k) {
            EllipseReport r = ellipse_report(s, u, v, k, tol);
            row.push_back(r);
            if (k == 1 && r.degenerate) usable = false;  // flat sample
            if (r.degenerate) break;                     // ellipse chain ends here
            if (!r.is_circle) break;
            order = k;
        }
        if (!usable) {
            ++res.skipped_samples;
            continue;
        }
        per_sample_order.push_back(order);
        res.table.push_back(std::move(row));
    }
    if (per_sample_order.empty()) {
        res.order = 0;
        return res;
    }
    res.order = *std::min_element(per_sample_order.begin(), per_sample_order.end());
    return res;
}

// ---------------------------------------------------------------------------

FrameField::FrameField(const Surface& s, double uc, double vc, int max_order, double pivot_tol)
    : surf_(&s), max_order_(max_order), pivot_tol_(pivot_tol) {
    SurfaceJet jet = surface_jet(s, uc, vc, max_order);
    auto dl = derivative_list(jet, max_order);
    skip_.assign(dl.size(), 0);
    Eigen::MatrixXd basis(s.N, s.N);
    int count = 0;
    for (size_t i = 0; i < dl.size(); ++i) {
        if (count == s.N) {
            skip_[i] = 1;
            continue;
        }
        Eigen::VectorXd w = project_off(basis, count, dl[i]);
        double nrm = w.norm();
        if (nrm < pivot_tol * std::max(dl[i].norm(), kTiny)) {
            skip_[i] = 1;
            continue;
        }
        basis.col(count++) = w / nrm;
    }
    flag_rank_ = count;
    if (count < 4)
        throw std::runtime_error("FrameField: degenerate point (flag rank < 4)");
    // completion axes by descending residual norm, frozen for the field
    std::vector<std::pair<double, int>> resid;
    for (int ax = 0; ax < s.N; ++ax) {
        Eigen::VectorXd w = project_off(basis, count, Eigen::VectorXd::Unit(s.N, ax));
        resid.emplace_back(-w.norm(), ax);
    }
    std::sort(resid.begin(), resid.end());
    for (auto& [negn, ax] : resid) completion_.push_back(ax);
    ref_ = eval_raw(uc, vc);
}

Eigen::MatrixXd FrameField::eval_raw(double u, double v) const {
    const Surface& s = *surf_;
    SurfaceJet jet = surface_jet(s, u, v, max_order_);
    auto dl = derivative_list(jet, max_order_);
    Eigen::MatrixXd basis(s.N, s.N);
    int count = 0;
    for (size_t i = 0; i < dl.size(); ++i) {
        if (skip_[i] || count == s.N) continue;
        Eigen::VectorXd w = project_off(basis, count, dl[i]);
        double nrm = w.norm();
        if (nrm < 1e-13 * std::max(dl[i].norm(), kTiny))
            throw std::runtime_error("FrameField: pivot collapsed away from center");
        basis.col(count++) = w / nrm;
    }
    for (int ax : completion_) {
        if (count == s.N) break;
        Eigen::VectorXd w = project_off(basis, count, Eigen::VectorXd::Unit(s.N, ax));
        double nrm = w.norm();
        if (nrm < 1e-6) continue;
        basis.col(count++) = w / nrm;
    }
    if (count != s.N) throw std::runtime_error("FrameField: completion failed");
    return basis;
}

Eigen::MatrixXd FrameField::eval(double u, double v) const {
    Eigen::MatrixXd fr = eval_raw(u, v);
    for (int c = 0; c < fr.cols(); ++c) {
        double d = fr.col(c).dot(ref_.col(c));
        if (std::abs(d) < 0.5)
            throw std::runtime_error("FrameField: gauge discontinuity, use a smaller step");
        if (d < 0) fr.col(c) = -fr.col(c);
    }
    return fr;
}

Eigen::MatrixXd FrameField::ruling(double u, double v) const {
    Eigen::MatrixXd fr = eval(u, v);
    return fr.rightCols(fr.cols() - 4);
}

Eigen::MatrixXd FrameField::ruling_raw(double u, double v) const {
    Eigen::MatrixXd fr = eval_raw(u, v);
    return fr.rightCols(fr.cols() - 4);
}

// ---------------------------------------------------------------------------

ConnectionFormReport connection_form_residuals(const Surface& s, double u, double v, double h) {
    int n = s.N - 2;
    int smax = n / 2;
    FrameField field(s, u, v, (s.N - 2) / 2 + 1);

    Eigen::MatrixXd E0 = field.eval(u, v);
    auto fm = [&](double uu, double vv) { return field.eval(uu, vv); };
    Eigen::MatrixXd Eu =
        (-fm(u + 2 * h, v) + 8 * fm(u + h, v) - 8 * fm(u - h, v) + fm(u - 2 * h, v)) / (12 * h);
    Eigen::MatrixXd Ev =
        (-fm(u, v + 2 * h) + 8 * fm(u, v + h) - 8 * fm(u, v - h) + fm(u, v - 2 * h)) / (12 * h);

    SurfaceJet jet = surface_jet(s, u, v, 1);
    double lam = std::sqrt(jet.lambda2);
    auto omega = [&](int k, int i, int j) {  // 1-based frame indices
        const Eigen::MatrixXd& D = (k == 1) ? Eu : Ev;
        return D.col(i - 1).dot(E0.col(j - 1)) / lam;
    };

    auto forms = higher_forms(s, u, v, smax + 1);
    ConnectionFormReport rep;
    double kappa_prev = 1.0;
    for (int sdx = 1; sdx <= smax; ++sdx) {
        double kappa_s = forms[sdx - 1].kappa;  // kappa_s = |A_{s+1}|
        double tau = kappa_s / std::max(kappa_prev, kTiny);
        kappa_prev = kappa_s;
        int i1 = 2 * sdx - 1, i2 = 2 * sdx, j1 = 2 * sdx + 1, j2 = 2 * sdx + 2;
        double rs[8] = {omega(1, i1, j1) - tau, omega(2, i1, j1),
                        omega(1, i2, j2) - tau, omega(2, i2, j2),
                        omega(2, i1, j2) - tau, omega(1, i1, j2),
                        omega(2, i2, j1) + tau, omega(1, i2, j1)};
        double worst = 0;
        for (double r : rs) worst = std::max(worst, std::abs(r));
        worst /= (1.0 + std::abs(tau));
        rep.per_order.push_back(worst);
        rep.tau.push_back(tau);
        rep.worst = std::max(rep.worst, worst);
    }
    return rep;
}

}  // namespace austere
