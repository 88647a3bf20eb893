#include "austere/complexpoly.hpp"

#include <algorithm>
#include <cmath>

namespace austere {

namespace {
void trim(std::vector<Complex>& c) {
    while (!c.empty() && c.back() == Complex(0.0, 0.0)) c.pop_back();
}
}  // namespace

CPoly::CPoly(std::vector<Complex> c) : coeffs(std::move(c)) { trim(coeffs); }

CPoly CPoly::constant(Complex c) { return CPoly{{c}}; }

Complex CPoly::operator()(Complex z) const {
    Complex r(0.0, 0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * z + *it;
    return r;
}

CPoly operator+(const CPoly& a, const CPoly& b) {
    std::vector<Complex> r(std::max(a.coeffs.size(), b.coeffs.size()), Complex(0, 0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) r[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) r[i] += b.coeffs[i];
    return CPoly(std::move(r));
}

CPoly operator-(const CPoly& a, const CPoly& b) { return a + (-b); }

CPoly operator-(const CPoly& p) {
    std::vector<Complex> r = p.coeffs;
    for (auto& c : r) c = -c;
    return CPoly(std::move(r));
}

CPoly operator*(const CPoly& a, const CPoly& b) {
    if (a.is_zero() || b.is_zero()) return CPoly{};
    std::vector<Complex> r(a.coeffs.size() + b.coeffs.size() - 1, Complex(0, 0));
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j) r[i + j] += a.coeffs[i] * b.coeffs[j];
    return CPoly(std::move(r));
}

CPoly operator*(Complex s, const CPoly& p) {
    std::vector<Complex> r = p.coeffs;
    for (auto& c : r) c *= s;
    return CPoly(std::move(r));
}

bool operator==(const CPoly& a, const CPoly& b) { return a.coeffs == b.coeffs; }

CPoly derivative(const CPoly& p) {
    if (p.coeffs.size() <= 1) return CPoly{};
    std::vector<Complex> r(p.coeffs.size() - 1);
    for (size_t k = 1; k < p.coeffs.size(); ++k) r[k - 1] = double(k) * p.coeffs[k];
    return CPoly(std::move(r));
}

CPoly antiderivative(const CPoly& p, Complex z0) {
    if (p.is_zero()) return CPoly{};
    std::vector<Complex> r(p.coeffs.size() + 1, Complex(0, 0));
    for (size_t k = 0; k < p.coeffs.size(); ++k) r[k + 1] = p.coeffs[k] / double(k + 1);
    CPoly q(std::move(r));
    q.coeffs[0] = -q(z0);
    return CPoly(std::move(q.coeffs));
}

double max_abs_coeff(const CPoly& p) {
    double m = 0.0;
    for (const auto& c : p.coeffs) m = std::max(m, std::abs(c));
    return m;
}

double product_coeff_scale(const CPoly& a, const CPoly& b) {
    if (a.is_zero() || b.is_zero()) return 0.0;
    std::vector<double> r(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            r[i + j] += std::abs(a.coeffs[i]) * std::abs(b.coeffs[j]);
    return *std::max_element(r.begin(), r.end());
}

}  // namespace austere
