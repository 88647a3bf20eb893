#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "austere/complexpoly.hpp"

namespace austere {

// Vector of complex polynomials in one variable; the ambient complex
// dimension equals the number of components.
struct HoloCurve {
    std::vector<CPoly> components;

    HoloCurve() = default;
    explicit HoloCurve(std::vector<CPoly> comps) : components(std::move(comps)) {}

    int dim() const { return static_cast<int>(components.size()); }
    bool is_zero() const;
    Eigen::VectorXcd operator()(Complex z) const;
};

// Derivative stack at a base point: values[k] = k-th complex derivative.
struct CJet {
    Complex z;
    std::vector<Eigen::VectorXcd> values;

    int order() const { return static_cast<int>(values.size()) - 1; }
};

HoloCurve derivative(const HoloCurve& c);
HoloCurve antiderivative(const HoloCurve& c, Complex z0);

// Exact k-th derivatives at z, k = 0..order, by formal differentiation
// plus Horner evaluation.
CJet eval_jet(const HoloCurve& curve, Complex z, int order);

// Bilinear (non-Hermitian) dot product sum_j a_j * b_j.
// Throws std::invalid_argument on dimension mismatch.
CPoly bdot(const HoloCurve& a, const HoloCurve& b);

// Coefficient-magnitude scale of bdot(a,b), for scaled zero tests.
double bdot_scale(const HoloCurve& a, const HoloCurve& b);

// Multiply every coefficient by e^{i theta} (associated family input).
HoloCurve rotate(const HoloCurve& curve, double theta);

HoloCurve scale(const HoloCurve& curve, const CPoly& p);

}  // namespace austere
