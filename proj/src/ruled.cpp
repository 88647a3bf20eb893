#include "austere/ruled.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace austere {

namespace {

constexpr double kTiny = 1e-300;

Eigen::MatrixXd orthonormalize(std::vector<Eigen::VectorXd> vecs, int N) {
    Eigen::MatrixXd basis(N, static_cast<int>(vecs.size()));
    int count = 0;
    for (auto& v : vecs) {
        for (int i = 0; i < count; ++i) v -= v.dot(basis.col(i)) * basis.col(i);
        double n = v.norm();
        if (n > 1e-12) basis.col(count++) = v / n;
    }
    basis.conservativeResize(Eigen::NoChange, count);
    return basis;
}

}  // namespace

Eigen::MatrixXd ruling_projector(const Surface& s, double u, double v) {
    SurfaceJet jet = surface_jet(s, u, v, 2);
    Eigen::MatrixXd V = orthonormalize(
        {jet.partial(1, 0), jet.partial(0, 1), jet.partial(2, 0), jet.partial(1, 1)}, s.N);
    if (V.cols() != 4) throw std::runtime_error("ruling_projector: degenerate point");
    return Eigen::MatrixXd::Identity(s.N, s.N) - V * V.transpose();
}

FrameField make_ruling_field(const Surface& s, double uc, double vc) {
    return FrameField(s, uc, vc, (s.N - 2) / 2 + 1);
}

RulingFrame ruling_frame(const Surface& s, double u, double v) {
    FrameField field = make_ruling_field(s, u, v);
    Eigen::MatrixXd fr = field.eval(u, v);
    RulingFrame out;
    out.basis = fr.rightCols(s.N - 4);
    out.n1_pair = fr.middleCols(2, 2);

    // complex-span oracle: Lambda_g projector + projector onto the
    // realification of span_C{alpha, alpha_z} must be the identity
    CJet cj = eval_jet(s.alpha, Complex(u, v), 1);
    Eigen::MatrixXd R = orthonormalize({cj.values[0].real(), cj.values[0].imag(),
                                        cj.values[1].real(), cj.values[1].imag()},
                                       s.N);
    Eigen::MatrixXd P = out.basis * out.basis.transpose() + R * R.transpose();
    out.span_resid = (P - Eigen::MatrixXd::Identity(s.N, s.N)).cwiseAbs().maxCoeff();
    return out;
}

ImmersionJet evaluate_immersion(const Surface& s, const MPoint& p, const FrameField& field,
                                double h) {
    int N = s.N;
    int n = N - 2;
    if (p.t.size() != n - 2) throw std::invalid_argument("evaluate_immersion: t size != n-2");
    SurfaceJet jet = surface_jet(s, p.u, p.v, 2);

    auto ruling = [&](double uu, double vv) -> Eigen::MatrixXd {
        return field.ruling(uu, vv);  // N x (n-2)
    };
    Eigen::MatrixXd E0 = ruling(p.u, p.v);
    auto d1 = [&](auto f) {
        return ((-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h)).eval();
    };
    auto d2c = [&](auto f) {
        return ((-f(2) + 16 * f(1) - 30 * f(0) + 16 * f(-1) - f(-2)) / (12 * h * h)).eval();
    };
    Eigen::MatrixXd Eu = d1([&](int j) { return ruling(p.u + j * h, p.v); });
    Eigen::MatrixXd Ev = d1([&](int j) { return ruling(p.u, p.v + j * h); });
    Eigen::MatrixXd Euu = d2c([&](int j) { return ruling(p.u + j * h, p.v); });
    Eigen::MatrixXd Evv = d2c([&](int j) { return ruling(p.u, p.v + j * h); });
    Eigen::MatrixXd Euv = d1([&](int i) {
        return d1([&](int j) { return ruling(p.u + i * h, p.v + j * h); });
    });

    ImmersionJet out;
    out.ruling0 = E0;
    out.F = jet.partial(0, 0) + E0 * p.t;
    out.dF.resize(N, n);
    out.dF.col(0) = jet.partial(1, 0) + Eu * p.t;
    out.dF.col(1) = jet.partial(0, 1) + Ev * p.t;
    out.dF.rightCols(n - 2) = E0;
    out.G = out.dF.transpose() * out.dF;
    out.d2uu = jet.partial(2, 0) + Euu * p.t;
    out.d2uv = jet.partial(1, 1) + Euv * p.t;
    out.d2vv = jet.partial(0, 2) + Evv * p.t;
    out.d2ut = Eu;
    out.d2vt = Ev;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.dF, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    out.cond = sv(0) / std::max(sv(n - 1), kTiny);
    if (out.cond > 1e8) throw std::runtime_error("evaluate_immersion: near-singular dF");
    out.nu = svd.matrixU().rightCols(2);
    for (int i = 0; i < 2; ++i) {  // deterministic sign
        int k;
        out.nu.col(i).cwiseAbs().maxCoeff(&k);
        if (out.nu(k, i) < 0) out.nu.col(i) = -out.nu.col(i);
    }

    for (int i = 0; i < 2; ++i) {
        Eigen::MatrixXd Bi = Eigen::MatrixXd::Zero(n, n);
        const auto nu = out.nu.col(i);
        Bi(0, 0) = out.d2uu.dot(nu);
        Bi(0, 1) = Bi(1, 0) = out.d2uv.dot(nu);
        Bi(1, 1) = out.d2vv.dot(nu);
        for (int j = 0; j < n - 2; ++j) {
            Bi(0, 2 + j) = Bi(2 + j, 0) = out.d2ut.col(j).dot(nu);
            Bi(1, 2 + j) = Bi(2 + j, 1) = out.d2vt.col(j).dot(nu);
        }
        out.B[i] = std::move(Bi);
    }
    return out;
}

ImmersionJet evaluate_immersion(const Surface& s, const MPoint& p, double h) {
    FrameField field = make_ruling_field(s, p.u, p.v);
    return evaluate_immersion(s, p, field, h);
}

Eigen::VectorXd shape_spectrum(const ImmersionJet& jet, double phi) {
    Eigen::MatrixXd Bphi = std::cos(phi) * jet.B[0] + std::sin(phi) * jet.B[1];
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Bphi, jet.G);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("shape_spectrum: metric not positive definite");
    return es.eigenvalues();
}

namespace {

struct SpectrumStats {
    double odd = 0, pair = 0, lmax = 0;
};

void accumulate_spectrum(const Eigen::VectorXd& lam, SpectrumStats& st) {
    int n = static_cast<int>(lam.size());
    st.lmax = std::max(st.lmax, lam.cwiseAbs().maxCoeff());
    double p1 = lam.sum();
    double p2 = lam.squaredNorm();
    double p3 = lam.array().cube().sum();
    if (p2 > 1e-30) {
        st.odd = std::max(st.odd, std::abs(p1) / std::sqrt(p2));
        st.odd = std::max(st.odd, std::abs(p3) / std::pow(p2, 1.5));
    }
    for (int i = 0; i < n; ++i)
        st.pair = std::max(st.pair, std::abs(lam(i) + lam(n - 1 - i)));
}

}  // namespace

AustereReport austere_report(const Surface& s, const std::vector<MPoint>& samples,
                             int directions, double tol, double eigen_zero, double h) {
    int n = s.N - 2;
    AustereReport rep;
    for (const auto& p : samples) {
        AustereSample row;
        row.p = p;
        try {
            ImmersionJet jet = evaluate_immersion(s, p, h);
            Eigen::LLT<Eigen::MatrixXd> llt(jet.G);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("metric not positive definite");
            Eigen::MatrixXd Li = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
            SpectrumStats st;
            Eigen::MatrixXd stacked(2 * n, n);
            for (int i = 0; i < 2; ++i)
                stacked.middleRows(i * n, n) = Li * jet.B[i] * Li.transpose();
            for (int k = 0; k < directions; ++k) {
                double phi = M_PI * k / directions;
                Eigen::MatrixXd S = std::cos(phi) * stacked.topRows(n) +
                                    std::sin(phi) * stacked.bottomRows(n);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
                accumulate_spectrum(es.eigenvalues(), st);
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
            const auto& sv = svd.singularValues();
            row.nullity = 0;
            for (int i = 0; i < n; ++i)
                if (sv(i) < eigen_zero * sv(0)) ++row.nullity;
            row.rank = n - row.nullity;
            row.odd_resid = st.odd;
            row.pair_resid = st.pair;
            row.pair_rel = st.pair / std::max(st.lmax, kTiny);
            for (int i = 0; i < 2; ++i) {
                double tr = (jet.G.ldlt().solve(jet.B[i])).trace();
                row.minimality = std::max(row.minimality, std::abs(tr));
            }
        } catch (const std::runtime_error&) {
            row.degenerate = true;
        }
        rep.samples.push_back(std::move(row));
    }
    int good = 0, rank4 = 0;
    for (const auto& r : rep.samples) {
        if (r.degenerate) {
            ++rep.degenerate_count;
            continue;
        }
        ++good;
        if (r.rank == 4 && r.nullity == n - 4) ++rank4;
        rep.worst_odd = std::max(rep.worst_odd, r.odd_resid);
        rep.worst_pair_rel = std::max(rep.worst_pair_rel, r.pair_rel);
        rep.worst_minimality = std::max(rep.worst_minimality, r.minimality);
    }
    if (good == 0) throw std::runtime_error("austere_report: all samples degenerate");
    rep.rank4_fraction = double(rank4) / double(good);
    rep.pass = rep.worst_odd < tol && rep.rank4_fraction >= 0.95;
    return rep;
}

NullityAlignment nullity_alignment(const Surface& s, const MPoint& p, double h) {
    int n = s.N - 2;
    NullityAlignment out;
    if (n <= 4) return out;  // V^0 trivial
    ImmersionJet jet = evaluate_immersion(s, p, h);
    double scale = std::max(jet.B[0].norm(), jet.B[1].norm());
    for (int j = 0; j < n - 2; ++j) {
        double r = 0;
        for (int i = 0; i < 2; ++i) r = std::max(r, jet.B[i].col(2 + j).norm());
        r /= std::max(scale, kTiny);
        if (j < 2)
            out.v1_resid = std::max(out.v1_resid, r);
        else
            out.v0_resid = std::max(out.v0_resid, r);
    }
    return out;
}

SecondFundamental associated_pair(const Surface& s, const MPoint& p, double phi, double h) {
    int N = s.N;
    int n = N - 2;
    FrameField field = make_ruling_field(s, p.u, p.v);
    ImmersionJet j0 = evaluate_immersion(s, p, field, h);

    // conjugate surface, same ruling field (Lambda_g is rotation invariant)
    Surface conj = rotate_surface(s, M_PI / 2);
    SurfaceJet cjet = surface_jet(conj, p.u, p.v, 2);
    auto ruling = [&](double uu, double vv) { return field.ruling(uu, vv); };
    auto d1 = [&](auto f) { return ((-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h)).eval(); };
    auto d2c = [&](auto f) {
        return ((-f(2) + 16 * f(1) - 30 * f(0) + 16 * f(-1) - f(-2)) / (12 * h * h)).eval();
    };
    Eigen::MatrixXd E0 = ruling(p.u, p.v);
    Eigen::MatrixXd Eu = d1([&](int j) { return ruling(p.u + j * h, p.v); });
    Eigen::MatrixXd Ev = d1([&](int j) { return ruling(p.u, p.v + j * h); });
    Eigen::MatrixXd Euu = d2c([&](int j) { return ruling(p.u + j * h, p.v); });
    Eigen::MatrixXd Evv = d2c([&](int j) { return ruling(p.u, p.v + j * h); });
    Eigen::MatrixXd Euv = d1([&](int i) {
        return d1([&](int j) { return ruling(p.u + i * h, p.v + j * h); });
    });

    double c = std::cos(phi), sn = std::sin(phi);
    Eigen::MatrixXd dF(2 * N, n);
    dF.topRows(N) = c * j0.dF;
    dF.block(N, 0, N, 1) = sn * (cjet.partial(1, 0) + Eu * p.t);
    dF.block(N, 1, N, 1) = sn * (cjet.partial(0, 1) + Ev * p.t);
    dF.block(N, 2, N, n - 2) = sn * E0;

    std::vector<Eigen::VectorXd> d2(n * n, Eigen::VectorXd::Zero(2 * N));
    auto put = [&](int a, int b, const Eigen::VectorXd& top, const Eigen::VectorXd& bot) {
        Eigen::VectorXd w(2 * N);
        w.head(N) = c * top;
        w.tail(N) = sn * bot;
        d2[a * n + b] = w;
        d2[b * n + a] = w;
    };
    put(0, 0, j0.d2uu, cjet.partial(2, 0) + Euu * p.t);
    put(0, 1, j0.d2uv, cjet.partial(1, 1) + Euv * p.t);
    put(1, 1, j0.d2vv, cjet.partial(0, 2) + Evv * p.t);
    for (int j = 0; j < n - 2; ++j) {
        put(0, 2 + j, j0.d2ut.col(j), Eu.col(j));
        put(1, 2 + j, j0.d2vt.col(j), Ev.col(j));
    }

    SecondFundamental sf;
    sf.G = dF.transpose() * dF;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dF, Eigen::ComputeFullU);
    Eigen::MatrixXd nu = svd.matrixU().rightCols(2 * N - n);
    sf.B.resize(2 * N - n);
    for (int i = 0; i < 2 * N - n; ++i) {
        Eigen::MatrixXd Bi(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) Bi(a, b) = d2[a * n + b].dot(nu.col(i));
        sf.B[i] = std::move(Bi);
    }
    return sf;
}

double odd_residual_sweep(const SecondFundamental& sf, int ndirs, std::uint64_t seed) {
    int n = static_cast<int>(sf.G.rows());
    int m = static_cast<int>(sf.B.size());
    Eigen::LLT<Eigen::MatrixXd> llt(sf.G);
    Eigen::MatrixXd Li = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SpectrumStats st;
    for (int k = 0; k < ndirs; ++k) {
        Eigen::VectorXd w(m);
        for (int i = 0; i < m; ++i) w(i) = gauss(rng);
        w.normalize();
        Eigen::MatrixXd Bw = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < m; ++i) Bw += w(i) * sf.B[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Li * Bw * Li.transpose());
        accumulate_spectrum(es.eigenvalues(), st);
    }
    return st.odd;
}

}  // namespace austere
