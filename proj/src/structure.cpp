#include "austere/structure.hpp"

#include <cmath>
#include <stdexcept>

namespace austere {

namespace {
constexpr double kTiny = 1e-300;
}

Eigen::MatrixXd t_operator(int n) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    T(0, 1) = 1;
    T(1, 0) = -1;  // T E_1 = -E_2, T E_2 = E_1
    T(2, 3) = -1;
    T(3, 2) = 1;   // T E_3 = E_4, T E_4 = -E_3
    for (int k = 4; k < n; ++k) T(k, k) = 1.0;
    return T;
}

Eigen::MatrixXd j_operator(int n, int eps) {
    if (n % 2 != 0) throw std::invalid_argument("j_operator: n must be even");
    Eigen::MatrixXd J = t_operator(n);
    J(2, 3) = -eps;
    J(3, 2) = eps;
    for (int k = 4; k < n; ++k) J(k, k) = 0.0;
    for (int k = 4; k + 1 < n; k += 2) {  // J E_k = E_{k+1}, J E_{k+1} = -E_k
        J(k, k + 1) = -1.0;
        J(k + 1, k) = 1.0;
    }
    return J;
}

Eigen::MatrixXd tangent_basis(const ImmersionJet& jet) {
    int n = static_cast<int>(jet.G.rows());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n - 2; ++j) C(2 + j, 2 + j) = 1.0;
    auto gdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(jet.G * b);
    };
    for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(n, k);
        for (int j = 0; j < n - 2; ++j) e -= gdot(e, C.col(2 + j)) * C.col(2 + j);
        if (k == 1) e -= gdot(e, C.col(0)) * C.col(0);
        C.col(k) = e / std::sqrt(gdot(e, e));
    }
    return C;
}

TCommutationResult t_commutation_test(const ImmersionJet& jet) {
    int n = static_cast<int>(jet.G.rows());
    Eigen::MatrixXd C = tangent_basis(jet);
    std::array<Eigen::MatrixXd, 2> A;
    for (int i = 0; i < 2; ++i) A[i] = C.transpose() * jet.B[i] * C;

    TCommutationResult out;
    if (n > 4) {
        int nv0 = n - 4;
        Eigen::MatrixXd M(2 * n, n - 2);  // action on the ruling block
        M.topRows(n) = A[0].rightCols(n - 2);
        M.bottomRows(n) = A[1].rightCols(n - 2);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(1) < 10 * sv(2) && sv(2) > 1e-4 * sv(0))
            throw std::runtime_error("t_commutation: ambiguous splitting");
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, nv0);
        K.bottomRows(n - 2) = svd.matrixV().rightCols(nv0);
        Eigen::MatrixXd PK = K * K.transpose();

        Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n);
        bool ok = true;
        for (int j = 0; j < 2; ++j) {  // V^1 gauge aligned to dt_1, dt_2
            Eigen::VectorXd w = Eigen::VectorXd::Unit(n, 2 + j);
            w -= PK * w;
            for (int i = 0; i < j; ++i) w -= w.dot(R.col(2 + i)) * R.col(2 + i);
            double nw = w.norm();
            if (nw < 1e-3) {
                ok = false;
                break;
            }
            R.col(2 + j) = w / nw;
        }
        if (ok) {
            for (int j = 0; j < nv0; ++j) R.col(4 + j) = K.col(j);
            for (int i = 0; i < 2; ++i) A[i] = R.transpose() * A[i] * R;
        } else {
            out.structural_fallback = true;  // keep coordinate (N_2 pair) split
        }
    }
    Eigen::MatrixXd T = t_operator(n);
    for (int i = 0; i < 2; ++i) {
        double r = (A[i] * T + T * A[i]).norm() / std::max(A[i].norm(), kTiny);
        out.resid = std::max(out.resid, r);
    }
    return out;
}

namespace {

// pushforwards of the adapted tangent frame: columns of dF * C
Eigen::MatrixXd pushed_frame(const Surface& s, const FrameField& field, double u, double v,
                             const Eigen::VectorXd& t) {
    MPoint p{u, v, t};
    ImmersionJet jet = evaluate_immersion(s, p, field);
    return jet.dF * tangent_basis(jet);
}

}  // namespace

double kaehler_residual(const Surface& s, const MPoint& p, double h,
                        std::optional<int> eps_sign) {
    int n = s.N - 2;
    FrameField field = make_ruling_field(s, p.u, p.v);
    ImmersionJet jet0 = evaluate_immersion(s, p, field);
    Eigen::MatrixXd C0 = tangent_basis(jet0);
    Eigen::MatrixXd W0 = jet0.dF * C0;

    // derivative of the pushed frame along the E_k chart line
    auto DW = [&](int k) {
        Eigen::VectorXd w = C0.col(k);
        auto at = [&](int j) {
            Eigen::MatrixXd Wj =
                pushed_frame(s, field, p.u + j * h * w(0), p.v + j * h * w(1),
                             p.t + j * h * w.tail(n - 2));
            for (int c = 0; c < n; ++c)
                if (Wj.col(c).dot(W0.col(c)) < 0) Wj.col(c) = -Wj.col(c);
            return Wj;
        };
        return ((-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h)).eval();
    };
    Eigen::MatrixXd M1 = DW(0).transpose() * W0;
    Eigen::MatrixXd M2 = DW(1).transpose() * W0;

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> signs = eps_sign ? std::vector<int>{*eps_sign} : std::vector<int>{1, -1};
    for (int eps : signs) {
        Eigen::MatrixXd J = j_operator(n, eps);
        double worst = 0, scale = 0;
        for (const Eigen::MatrixXd& M : {M1, M2}) {
            Eigen::MatrixXd MJ = J.transpose() * M * J;
            scale = std::max(scale, M.cwiseAbs().maxCoeff());
            worst = std::max(worst, (M - MJ).cwiseAbs().maxCoeff());
        }
        best = std::min(best, worst / std::max(1.0, scale));
    }
    return best;
}

double nonholomorphy_certificate(const Surface& s, const MPoint& p) {
    int n = s.N - 2;
    ImmersionJet jet = evaluate_immersion(s, p);
    Eigen::MatrixXd C = tangent_basis(jet);
    std::array<Eigen::MatrixXd, 2> A;
    for (int i = 0; i < 2; ++i) A[i] = C.transpose() * jet.B[i] * C;

    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 16; ++k) {
        double chi = M_PI * k / 16;
        Eigen::MatrixXd A1 = std::cos(chi) * A[0] + std::sin(chi) * A[1];
        Eigen::MatrixXd A2 = -std::sin(chi) * A[0] + std::cos(chi) * A[1];
        for (int eps : {1, -1}) {
            Eigen::MatrixXd J = j_operator(n, eps);
            for (int sgn : {1, -1}) {
                double r = (A2 - double(sgn) * J * A1).norm() / std::max(A1.norm(), kTiny);
                best = std::min(best, r);
            }
        }
    }
    return best;
}

double surface_certificate(const Surface& s, double u, double v) {
    AdaptedFrame fr = adapted_frame(s, u, v, 1);
    if (fr.degenerate || fr.e.cols() < 4)
        throw std::runtime_error("surface_certificate: degenerate frame");
    SurfaceJet jet = surface_jet(s, u, v, 2);
    auto shape = [&](int col) {
        Eigen::Matrix2d A;
        A(0, 0) = jet.partial(2, 0).dot(fr.e.col(col)) / jet.lambda2;
        A(0, 1) = A(1, 0) = jet.partial(1, 1).dot(fr.e.col(col)) / jet.lambda2;
        A(1, 1) = jet.partial(0, 2).dot(fr.e.col(col)) / jet.lambda2;
        return A;
    };
    Eigen::Matrix2d A3 = shape(2), A4 = shape(3);
    Eigen::Matrix2d J;
    J << 0, -1, 1, 0;
    double r = std::min((A4 - J * A3).norm(), (A4 + J * A3).norm());
    return r / std::max(A3.norm(), kTiny);
}

// ---------------------------------------------------------------------------

namespace {

struct LiftChart {
    const Surface* s;
    const FrameField* field;
    int N, n;
    Eigen::MatrixXd nuref;

    ImmersionJet jet_at(const Eigen::VectorXd& x) const {
        MPoint p{x(0), x(1), x.segment(2, n - 2)};
        return evaluate_immersion(*s, p, *field);
    }

    Eigen::MatrixXd normals(const ImmersionJet& jet) const {
        // smooth gauge: project reference normals, Gram-Schmidt
        Eigen::MatrixXd dG = jet.G.ldlt().solve(jet.dF.transpose());
        Eigen::VectorXd n1 = nuref.col(0) - jet.dF * (dG * nuref.col(0));
        n1.normalize();
        Eigen::VectorXd n2 = nuref.col(1) - jet.dF * (dG * nuref.col(1));
        n2 -= n2.dot(n1) * n1;
        n2.normalize();
        Eigen::MatrixXd nu(N, 2);
        nu.col(0) = n1;
        nu.col(1) = n2;
        return nu;
    }

    Eigen::VectorXd psi(const Eigen::VectorXd& x) const {
        ImmersionJet jet = jet_at(x.head(n));
        Eigen::MatrixXd nu = normals(jet);
        Eigen::VectorXd out(2 * N);
        out.head(N) = jet.F;
        out.tail(N) = nu * x.tail(2);
        return out;
    }

    // w_a(x) = <dF_a, s * nu>; identically zero by normality, used for the
    // antisymmetrized symplectic terms
    Eigen::VectorXd wfield(const Eigen::VectorXd& x) const {
        ImmersionJet jet = jet_at(x.head(n));
        Eigen::MatrixXd nu = normals(jet);
        Eigen::VectorXd snu = nu * x.tail(2);
        return jet.dF.transpose() * snu;  // n entries
    }
};

}  // namespace

LagrangianResiduals lagrangian_lift(const Surface& s, const MPoint& p,
                                    const Eigen::Vector2d& s12, double h) {
    int N = s.N, n = N - 2, m = n + 2;
    FrameField field = make_ruling_field(s, p.u, p.v);
    LiftChart chart{&s, &field, N, n, Eigen::MatrixXd()};
    ImmersionJet jet0 = evaluate_immersion(s, p, field);
    chart.nuref = jet0.nu;

    Eigen::VectorXd x0(m);
    x0 << p.u, p.v, p.t, s12(0), s12(1);

    auto d1 = [&](auto f) { return ((-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h)).eval(); };
    auto d2c = [&](auto f) {
        return ((-f(2) + 16 * f(1) - 30 * f(0) + 16 * f(-1) - f(-2)) / (12 * h * h)).eval();
    };

    Eigen::MatrixXd dpsi(2 * N, m);
    for (int a = 0; a < m; ++a) {
        dpsi.col(a) = d1([&](int j) {
            Eigen::VectorXd x = x0;
            x(a) += j * h;
            return chart.psi(x);
        });
    }

    LagrangianResiduals out;
    // symplectic form omega((a,b),(c,d)) = -<b,c> + <a,d>
    Eigen::MatrixXd nu0 = chart.normals(jet0);
    auto xnorm = [&](int a) { return std::max(dpsi.col(a).norm(), kTiny); };
    // x-x pairs via the antisymmetrized w-field (pointwise-zero scalars)
    Eigen::MatrixXd dw(n, n);  // dw(:,a) = D_a w
    for (int a = 0; a < n; ++a) {
        dw.col(a) = d1([&](int j) {
            Eigen::VectorXd x = x0;
            x(a) += j * h;
            return chart.wfield(x);
        });
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double om = dw(a, b) - dw(b, a);  // d_b w_a - d_a w_b
            out.symplectic = std::max(out.symplectic, std::abs(om) / (xnorm(a) * xnorm(b)));
        }
    // x-s pairs: <dF_a, nu_i> (normality, exact at the point)
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < 2; ++i) {
            double om = jet0.dF.col(a).dot(nu0.col(i));
            out.symplectic =
                std::max(out.symplectic, std::abs(om) / (xnorm(a) * xnorm(n + i)));
        }
    // s-s pair is identically zero by the block structure

    // mean curvature: trace of the second fundamental form of psi
    Eigen::MatrixXd Gpsi = dpsi.transpose() * dpsi;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Gpsi);
    Eigen::MatrixXd Ginv = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::VectorXd H = Eigen::VectorXd::Zero(2 * N);
    double scale = 0;
    auto accumulate = [&](int a, int b, const Eigen::VectorXd& d2v) {
        Eigen::VectorXd perp = d2v - dpsi * ldlt.solve(dpsi.transpose() * d2v);
        double wgt = Ginv(a, b) * (a == b ? 1.0 : 2.0);
        H += wgt * perp;
        scale += std::abs(wgt) * d2v.norm();
    };
    for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
            if (a >= n && b >= n) continue;  // psi affine in s
            Eigen::VectorXd d2v;
            if (a == b) {
                d2v = d2c([&](int j) {
                    Eigen::VectorXd x = x0;
                    x(a) += j * h;
                    return chart.psi(x);
                });
            } else {
                d2v = d1([&](int i) {
                    return d1([&](int j) {
                        Eigen::VectorXd x = x0;
                        x(a) += i * h;
                        x(b) += j * h;
                        return chart.psi(x);
                    });
                });
            }
            accumulate(a, b, d2v);
        }
    }
    out.mean_curv_abs = H.norm();
    out.mean_curv = H.norm() / std::max(scale, kTiny);
    return out;
}

}  // namespace austere
