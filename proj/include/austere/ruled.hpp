#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "austere/frames.hpp"
#include "austere/surface.hpp"

namespace austere {

// Point of M^n = L^2 x R^{n-2} in the global coordinates (u, v, t).
struct MPoint {
    double u = 0, v = 0;
    Eigen::VectorXd t;
};

struct RulingFrame {
    Eigen::MatrixXd basis;        // N x (n-2), orthonormal basis of Lambda_g
    Eigen::MatrixXd n1_pair;      // N x 2, the N_1 block (bookkeeping)
    double span_resid = 0;        // projector vs realified span_C{alpha, alpha_z}
};

// First/second derivatives of F(u,v,t) = g(u,v) + sum_j t_j E_j(u,v).
// Ruling-frame derivatives by 4th-order central differences with step h;
// the g-part jets are exact; F is affine in t so all t-t second partials
// vanish identically and are not stored.
struct ImmersionJet {
    Eigen::VectorXd F;
    Eigen::MatrixXd dF;     // N x n, columns (u, v, t_1..t_{n-2})
    Eigen::MatrixXd G;      // induced metric
    Eigen::VectorXd d2uu, d2uv, d2vv;
    Eigen::MatrixXd d2ut, d2vt;  // N x (n-2)
    Eigen::MatrixXd nu;          // N x 2 orthonormal normal frame
    std::array<Eigen::MatrixXd, 2> B;  // <d2 F, nu_i>
    Eigen::MatrixXd ruling0;     // frame values at the point
    double cond = 0;
};

RulingFrame ruling_frame(const Surface& s, double u, double v);

// Orthogonal projector onto Lambda_g(u,v).
Eigen::MatrixXd ruling_projector(const Surface& s, double u, double v);

FrameField make_ruling_field(const Surface& s, double uc, double vc);

ImmersionJet evaluate_immersion(const Surface& s, const MPoint& p, const FrameField& field,
                                double h = 2e-3);
ImmersionJet evaluate_immersion(const Surface& s, const MPoint& p, double h = 2e-3);

// Eigenvalues (ascending) of the shape operator for cos(phi) nu1 + sin(phi) nu2,
// via Cholesky reduction of the generalized symmetric problem B x = lambda G x.
Eigen::VectorXd shape_spectrum(const ImmersionJet& jet, double phi);

struct AustereSample {
    MPoint p;
    int rank = 0;
    int nullity = 0;
    double odd_resid = 0;      // odd power sums, p2-normalized
    double pair_resid = 0;     // max |l_i + l_{n+1-i}|
    double pair_rel = 0;       // pair_resid / max|l|
    double minimality = 0;     // |trace(G^-1 B_i)| worst
    bool degenerate = false;
};

struct AustereReport {
    std::vector<AustereSample> samples;
    int degenerate_count = 0;
    double worst_odd = 0;
    double worst_pair_rel = 0;
    double worst_minimality = 0;
    double rank4_fraction = 0;  // fraction of good samples with rank 4, nullity n-4
    bool pass = false;
};

AustereReport austere_report(const Surface& s, const std::vector<MPoint>& samples,
                             int directions, double tol, double eigen_zero = 1e-6,
                             double h = 2e-3);

struct NullityAlignment {
    double v0_resid = 0;  // ruling directions from N_3 and beyond: should be annihilated
    double v1_resid = 0;  // N_2 pair: control, not annihilated
};

NullityAlignment nullity_alignment(const Surface& s, const MPoint& p, double h = 2e-3);

// Second-fundamental data of an immersion with arbitrary normal rank,
// used for the associated pair G in R^{2n+4}.
struct SecondFundamental {
    Eigen::MatrixXd G;
    std::vector<Eigen::MatrixXd> B;  // one per normal direction
};

// Jet of G = (cos(phi) F_0, sin(phi) F_{pi/2}) over the shared ruling field.
SecondFundamental associated_pair(const Surface& s, const MPoint& p, double phi,
                                  double h = 2e-3);

// Worst odd power-sum residual over a deterministic sweep of normal
// directions (ndirs pseudo-random unit vectors for rank > 2).
double odd_residual_sweep(const SecondFundamental& sf, int ndirs, std::uint64_t seed);

}  // namespace austere
