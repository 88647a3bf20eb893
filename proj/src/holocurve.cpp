#include "austere/holocurve.hpp"

#include <cmath>

namespace austere {

bool HoloCurve::is_zero() const {
    for (const auto& p : components)
        if (!p.is_zero()) return false;
    return true;
}

Eigen::VectorXcd HoloCurve::operator()(Complex z) const {
    Eigen::VectorXcd v(dim());
    for (int j = 0; j < dim(); ++j) v[j] = components[j](z);
    return v;
}

HoloCurve derivative(const HoloCurve& c) {
    std::vector<CPoly> r;
    r.reserve(c.components.size());
    for (const auto& p : c.components) r.push_back(derivative(p));
    return HoloCurve(std::move(r));
}

HoloCurve antiderivative(const HoloCurve& c, Complex z0) {
    std::vector<CPoly> r;
    r.reserve(c.components.size());
    for (const auto& p : c.components) r.push_back(antiderivative(p, z0));
    return HoloCurve(std::move(r));
}

CJet eval_jet(const HoloCurve& curve, Complex z, int order) {
    if (order < 0) throw std::invalid_argument("eval_jet: order must be >= 0");
    CJet jet;
    jet.z = z;
    jet.values.reserve(order + 1);
    HoloCurve cur = curve;
    for (int k = 0; k <= order; ++k) {
        jet.values.push_back(cur(z));
        if (k < order) cur = derivative(cur);
    }
    return jet;
}

CPoly bdot(const HoloCurve& a, const HoloCurve& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("bdot: dimension mismatch");
    CPoly r;
    for (int j = 0; j < a.dim(); ++j) r = r + a.components[j] * b.components[j];
    return r;
}

double bdot_scale(const HoloCurve& a, const HoloCurve& b) {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j)
        s = std::max(s, product_coeff_scale(a.components[j], b.components[j]));
    return s;
}

HoloCurve rotate(const HoloCurve& curve, double theta) {
    Complex w = std::polar(1.0, theta);
    std::vector<CPoly> r;
    r.reserve(curve.components.size());
    for (const auto& p : curve.components) r.push_back(w * p);
    return HoloCurve(std::move(r));
}

HoloCurve scale(const HoloCurve& curve, const CPoly& p) {
    std::vector<CPoly> r;
    r.reserve(curve.components.size());
    for (const auto& q : curve.components) r.push_back(p * q);
    return HoloCurve(std::move(r));
}

}  // namespace austere
