#include "austere/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace austere {

const Eigen::VectorXd& SurfaceJet::partial(int a, int b) const {
    // triangular layout: block for total order m starts at m(m+1)/2, entry b
    int m = a + b;
    if (m > order || a < 0 || b < 0) throw std::out_of_range("SurfaceJet::partial");
    return data[m * (m + 1) / 2 + b];
}

Eigen::VectorXd& SurfaceJet::partial(int a, int b) {
    int m = a + b;
    if (m > order || a < 0 || b < 0) throw std::out_of_range("SurfaceJet::partial");
    return data[m * (m + 1) / 2 + b];
}

HoloCurve chain_step(const HoloCurve& phi_prev, const CPoly& beta) {
    if (beta.is_zero()) throw std::invalid_argument("chain_step: beta must be nonzero");
    CPoly s = bdot(phi_prev, phi_prev);
    CPoly one = CPoly::constant(1.0);
    std::vector<CPoly> comps;
    comps.reserve(phi_prev.dim() + 2);
    comps.push_back(beta * (one - s));
    comps.push_back(Complex(0, 1) * (beta * (one + s)));
    for (const auto& p : phi_prev.components) comps.push_back(Complex(2, 0) * (beta * p));
    return HoloCurve(std::move(comps));
}

Surface build_chain_surface(const ChainConfig& cfg) {
    if (cfg.seed.is_zero()) throw std::invalid_argument("chain: seed must be nonzero");
    if (cfg.steps < 1) throw std::invalid_argument("chain: steps must be >= 1");
    if (static_cast<int>(cfg.betas.size()) != cfg.steps)
        throw std::invalid_argument("chain: need one beta per step");
    if (cfg.seed.dim() != cfg.N - 2 * cfg.steps)
        throw std::invalid_argument("chain: seed dimension must be N - 2*steps");
    if (cfg.seed_isotropic) {
        CPoly d = bdot(cfg.seed, cfg.seed);
        double scale = bdot_scale(cfg.seed, cfg.seed);
        if (max_abs_coeff(d) > 1e-12 * std::max(scale, 1.0))
            throw std::invalid_argument("chain: isotropic seed requested but bdot(seed,seed) != 0");
    }
    HoloCurve alpha = cfg.seed;
    for (int k = 0; k < cfg.steps; ++k) {
        HoloCurve phi = antiderivative(alpha, cfg.z0);
        alpha = chain_step(phi, cfg.betas[k]);
    }
    Surface s;
    s.alpha = alpha;
    s.phi = antiderivative(alpha, cfg.z0);
    s.N = alpha.dim();
    return s;
}

Surface build_holomorphic_surface(const HoloCurveConfig& cfg) {
    bool constant = true;
    for (const auto& p : cfg.eta.components)
        if (p.degree() >= 1) constant = false;
    if (constant) throw std::invalid_argument("holomorphic surface: eta must be nonconstant");
    std::vector<CPoly> phi;
    phi.reserve(2 * cfg.eta.dim());
    for (const auto& p : cfg.eta.components) {
        phi.push_back(p);
        phi.push_back(Complex(0, -1) * p);
    }
    Surface s;
    s.phi = HoloCurve(std::move(phi));
    s.alpha = derivative(s.phi);
    s.N = s.phi.dim();
    return s;
}

SurfaceJet surface_jet(const Surface& s, double u, double v, int order) {
    if (order < 1) throw std::invalid_argument("surface_jet: order must be >= 1");
    CJet cj = eval_jet(s.phi, Complex(u, v), order);
    SurfaceJet jet;
    jet.u = u;
    jet.v = v;
    jet.order = order;
    jet.N = s.N;
    jet.data.resize((order + 1) * (order + 2) / 2);
    Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int m = 0; m <= order; ++m) {
        for (int b = 0; b <= m; ++b) {
            Eigen::VectorXcd w = ipow[b % 4] * cj.values[m];
            jet.data[m * (m + 1) / 2 + b] = w.real();
        }
    }
    jet.lambda2 = jet.partial(1, 0).squaredNorm();
    return jet;
}

Surface rotate_surface(const Surface& s, double theta) {
    Surface r;
    r.alpha = rotate(s.alpha, theta);
    r.phi = rotate(s.phi, theta);
    r.N = s.N;
    r.provenance = s.provenance;
    return r;
}

namespace {

CPoly mono(int k, Complex c) {
    std::vector<Complex> v(k + 1, Complex(0, 0));
    v[k] = c;
    return CPoly(std::move(v));
}

}  // namespace

Surface preset_surface(const std::string& name) {
    if (name == "n4-canonical") {
        ChainConfig cfg;
        cfg.N = 6;
        cfg.seed = HoloCurve({CPoly::constant(1.0), CPoly::constant(Complex(0, 1))});
        cfg.betas = {CPoly::constant(1.0), CPoly::constant(1.0)};
        return build_chain_surface(cfg);
    }
    if (name == "n6-canonical") {
        ChainConfig cfg;
        cfg.N = 8;
        CPoly one_minus_z2({Complex(1, 0), Complex(0, 0), Complex(-1, 0)});
        CPoly i_one_plus_z2({Complex(0, 1), Complex(0, 0), Complex(0, 1)});
        cfg.seed = HoloCurve({one_minus_z2, i_one_plus_z2, mono(1, 2.0), CPoly::zero()});
        cfg.betas = {CPoly::constant(1.0), CPoly::constant(1.0)};
        return build_chain_surface(cfg);
    }
    if (name == "literal-recipe") {
        ChainConfig cfg;
        cfg.N = 8;
        cfg.seed = HoloCurve({CPoly::constant(1.0), CPoly::zero(), CPoly::zero(), CPoly::zero()});
        cfg.seed_isotropic = false;
        cfg.betas = {CPoly::constant(1.0), CPoly::constant(1.0)};
        return build_chain_surface(cfg);
    }
    if (name == "holo-n4") {
        HoloCurveConfig cfg;
        cfg.eta = HoloCurve({mono(1, 1.0), mono(2, 1.0), mono(3, 1.0)});
        return build_holomorphic_surface(cfg);
    }
    if (name == "holo-n6") {
        HoloCurveConfig cfg;
        cfg.eta = HoloCurve({mono(1, 1.0), mono(2, 1.0), mono(3, 1.0), mono(4, 1.0)});
        return build_holomorphic_surface(cfg);
    }
    throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"n4-canonical", "n6-canonical", "literal-recipe", "holo-n4", "holo-n6"};
}

}  // namespace austere
