#pragma once

#include <Eigen/Dense>
#include <optional>

#include "austere/ruled.hpp"

namespace austere {

// T in the adapted tangent frame (E_1,E_2 | E_3,E_4 | E_5..E_n):
// rotation blocks on H and V^1 (opposite senses), identity on V^0.
Eigen::MatrixXd t_operator(int n);

// Almost complex structure: equals T on H + V^1 (with sign eps on the V^1
// block), consecutive-pair rotation on V^0. Requires n even.
Eigen::MatrixXd j_operator(int n, int eps = 1);

// G-orthonormal tangent basis columns adapted to H | rulings:
// E_1, E_2 = projections of du, dv off the t-block, E_{j+2} = dt_j.
Eigen::MatrixXd tangent_basis(const ImmersionJet& jet);

struct TCommutationResult {
    double resid = 0;          // max_i |A_i T + T A_i| / |A_i|
    bool structural_fallback = false;  // rank-4 kernel split unavailable
};

// Lemma test: residual of A_i T + T A_i, with V^0 the (n-4) weakest
// directions of the shape operators restricted to the ruling block and V^1
// its complement within the rulings, gauge-aligned to (dt_1, dt_2). Falls
// back to the structural split (N_2 ruling pair) when the rank-4 premise
// fails. Throws std::runtime_error on a genuinely ambiguous splitting.
TCommutationResult t_commutation_test(const ImmersionJet& jet);

// Theorem-2 test: max over k in {1,2} and all i,j of
// |<D_k F_* E_i, F_* E_j> - <D_k F_* JE_i, F_* JE_j>|, derivatives by
// 4th-order central differences along the E_1, E_2 chart lines, normalized
// by the largest entry. Tries both signs of J|_{V^1} and keeps the better.
double kaehler_residual(const Surface& s, const MPoint& p, double h = 1e-3,
                        std::optional<int> eps_sign = std::nullopt);

// Certifies that A_eta = +-J A_xi fails for the ruled immersion: minimum
// over normal-frame gauge angles and both signs of |A' -+ J A| / |A|.
double nonholomorphy_certificate(const Surface& s, const MPoint& p);

// Control: the same relation for a surface treated as its own immersion
// (trivial ruling) in the adapted N_1 frame; ~0 for any minimal surface.
double surface_certificate(const Surface& s, double u, double v);

struct LagrangianResiduals {
    double symplectic = 0;   // max normalized |omega(X,Y)| over tangent pairs
    double mean_curv = 0;    // |trace II| / scale
    double mean_curv_abs = 0;
};

// Normal-bundle lift psi(u,v,t,s) = (F(x), s1 nu1(x) + s2 nu2(x)) in R^{2N};
// residuals by central differences over the (n+2)-parameter chart.
LagrangianResiduals lagrangian_lift(const Surface& s, const MPoint& p,
                                    const Eigen::Vector2d& s12, double h = 5e-3);

}  // namespace austere
