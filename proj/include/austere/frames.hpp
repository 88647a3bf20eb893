#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "austere/surface.hpp"

namespace austere {

// Orthonormal ambient frame at a surface point realizing the splitting
// tangent + N_1 + N_2 + ...  Columns of e: e_1 = g_u/lambda, e_2 = g_v/lambda,
// then one pair per normal block, signs fixed by positive Gram-Schmidt pivots
// on the ordered derivative list (g_u, g_v, g_uu, g_uv, g_uuu, g_uuv, ...).
struct AdaptedFrame {
    Eigen::MatrixXd e;                          // N x count
    std::vector<std::pair<int, int>> split;     // [begin, end) column range per block
    bool degenerate = false;                    // truncated before requested depth
};

struct HigherFormData {
    int order = 0;          // s: A = alpha^s(e_1..e_1), B = alpha^s(e_1..e_1,e_2)
    Eigen::VectorXd A;
    Eigen::VectorXd B;
    double kappa = 0;       // |A| = kappa_{s-1}
};

struct EllipseReport {
    int order = 0;
    double dot_resid = 0;    // <A,B>/(|A||B| + eps)
    double norm_resid = 0;   // (|A|-|B|)/(|A|+|B| + eps)
    double axis_resid = 0;   // gauge-invariant combination, 0 iff circle
    bool is_circle = false;
    bool degenerate = false;  // both generators vanish at projection accuracy
};

struct ThirdFormComponents {
    double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    double kappa1 = 0;
};

struct IsotropyResult {
    int order = 0;
    int skipped_samples = 0;
    // residual table: [sample][k-1] ellipse reports
    std::vector<std::vector<EllipseReport>> table;
};

// Ordered exact derivative list at (u,v): (g_u, g_v, g_uu, g_uv, ...),
// pairs (d_u^k g, d_u^{k-1} d_v g) for k = 1..max_order.
std::vector<Eigen::VectorXd> derivative_list(const SurfaceJet& jet, int max_order);

AdaptedFrame adapted_frame(const Surface& s, double u, double v, int depth,
                           double pivot_tol = 1e-9);

// Jet-projection higher forms: A_s = lambda^{-s} proj(d_u^s g) off the span
// of all lower-order derivatives, B_s likewise for the mixed derivative.
// Orders s = 2..max_order. The covariant-derivative induction is kept as a
// test oracle.
std::vector<HigherFormData> higher_forms(const Surface& s, double u, double v, int max_order);

// Same forms evaluated on the rotated tangent frame e(theta); used by the
// gauge-invariance tests.
std::vector<HigherFormData> higher_forms_rotated(const Surface& s, double u, double v,
                                                 int max_order, double theta);

EllipseReport ellipse_report(const Surface& s, double u, double v, int k, double tol = 1e-8);

// Components of alpha^3_111/kappa_1 and alpha^3_112/kappa_1 against (e_5, e_6).
// Throws std::domain_error at flat points (kappa_1 below scale).
ThirdFormComponents third_form_components(const Surface& s, double u, double v);

// Largest m such that ellipse orders 1..m are circles at every sample.
IsotropyResult isotropy_order(const Surface& s,
                              const std::vector<std::pair<double, double>>& samples,
                              double tol = 1e-8);

// Smooth field of full ambient frames over (u,v). The Gram-Schmidt skip
// pattern and the completion axes (used when the derivative flag does not
// span R^N) are frozen at the center point so the field is smooth on a
// neighborhood; evaluations are sign-aligned against the center frame and
// throw std::runtime_error on a gauge discontinuity.
class FrameField {
  public:
    FrameField(const Surface& s, double uc, double vc, int max_order, double pivot_tol = 1e-9);

    // full N x N frame, aligned to the center frame
    Eigen::MatrixXd eval(double u, double v) const;
    // columns 4..N-1 (ambient e_5..e_{N}), an orthonormal basis of Lambda_g
    Eigen::MatrixXd ruling(double u, double v) const;
    // unaligned variant for whole-domain sweeps (export); deterministic but
    // the gauge may jump across degeneracies
    Eigen::MatrixXd ruling_raw(double u, double v) const;

    int flag_rank() const { return flag_rank_; }
    const Surface& surface() const { return *surf_; }

  private:
    Eigen::MatrixXd eval_raw(double u, double v) const;

    const Surface* surf_;
    int max_order_;
    double pivot_tol_;
    std::vector<char> skip_;      // per derivative-list index
    std::vector<int> completion_;
    int flag_rank_ = 0;
    Eigen::MatrixXd ref_;
};

struct ConnectionFormReport {
    // per s = 1..smax, worst residual of the two displayed identities,
    // normalized by 1 + |tau_s|
    std::vector<double> per_order;
    std::vector<double> tau;
    double worst = 0;
};

// omega^k_{ij} = <D_k e_i, e_j> by 4th-order central differences of the
// adapted frame field; residuals of omega_{2s-1,2s+1} = omega_{2s,2s+2} =
// tau_s omega_1 and omega_{2s-1,2s+2} = -omega_{2s,2s+1} = tau_s omega_2.
ConnectionFormReport connection_form_residuals(const Surface& s, double u, double v,
                                               double h = 1e-3);

}  // namespace austere
