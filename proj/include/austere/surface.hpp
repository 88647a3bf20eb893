#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "austere/holocurve.hpp"

namespace austere {

// Configuration of the iterated Weierstrass chain. The seed has complex
// dimension N - 2*steps; each step phi_k = int alpha_k, alpha_{k+1} =
// beta*(1 - phi_k^2, i(1 + phi_k^2), 2 phi_k) adds two dimensions.
struct ChainConfig {
    int N = 6;
    HoloCurve seed;
    bool seed_isotropic = true;
    std::vector<CPoly> betas;  // one per step
    Complex z0{0.0, 0.0};
    int steps = 2;
};

struct HoloCurveConfig {
    HoloCurve eta;
};

// Minimal surface g = Re phi in isothermal coordinates, phi' = alpha,
// bdot(alpha, alpha) = 0 at coefficient level.
struct Surface {
    HoloCurve alpha;
    HoloCurve phi;
    int N = 0;
    std::string provenance;  // JSON echo of the generating config
};

// Position and partials of g at (u,v): partial(a,b) = d_u^a d_v^b g,
// computed exactly from the holomorphic side as Re(i^b phi^(a+b)).
struct SurfaceJet {
    double u = 0, v = 0;
    int order = 0;
    int N = 0;
    std::vector<Eigen::VectorXd> data;  // triangular storage
    double lambda2 = 0;                 // <g_u, g_u>

    const Eigen::VectorXd& partial(int a, int b) const;
    Eigen::VectorXd& partial(int a, int b);
};

// One chain iteration. Throws std::invalid_argument on zero beta.
HoloCurve chain_step(const HoloCurve& phi_prev, const CPoly& beta);

Surface build_chain_surface(const ChainConfig& cfg);

// Realification of a holomorphic curve eta in C^m: phi interleaved as
// (eta_1, -i eta_1, eta_2, -i eta_2, ...), N = 2m.
Surface build_holomorphic_surface(const HoloCurveConfig& cfg);

SurfaceJet surface_jet(const Surface& s, double u, double v, int order);

// Surface over the rotated holomorphic data e^{i theta} alpha.
Surface rotate_surface(const Surface& s, double theta);

// Named presets used throughout the test suites.
//   n4-canonical    N=6 chain, seed (1, i)
//   n6-canonical    N=8 chain, seed (1 - z^2, i(1 + z^2), 2z, 0)
//   literal-recipe  N=8 chain, seed (1, 0, 0, 0), non-isotropic
//   holo-n4         realified eta = (z, z^2, z^3)
//   holo-n6         realified eta = (z, z^2, z^3, z^4)
Surface preset_surface(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace austere
