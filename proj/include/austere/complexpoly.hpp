#pragma once

#include <complex>
#include <vector>

namespace austere {

using Complex = std::complex<double>;

// Polynomial in one complex variable, coeffs[k] = coefficient of z^k.
// Trailing zero coefficients are trimmed; the empty vector is the zero
// polynomial. Trimming is exact (no epsilon), so algebraic identities can
// be checked at coefficient level.
struct CPoly {
    std::vector<Complex> coeffs;

    CPoly() = default;
    explicit CPoly(std::vector<Complex> c);
    CPoly(std::initializer_list<Complex> c) : CPoly(std::vector<Complex>(c)) {}
    static CPoly constant(Complex c);
    static CPoly zero() { return CPoly{}; }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex operator()(Complex z) const;
};

CPoly operator+(const CPoly& a, const CPoly& b);
CPoly operator-(const CPoly& a, const CPoly& b);
CPoly operator*(const CPoly& a, const CPoly& b);
CPoly operator*(Complex s, const CPoly& p);
CPoly operator-(const CPoly& p);
bool operator==(const CPoly& a, const CPoly& b);

CPoly derivative(const CPoly& p);

// Antiderivative vanishing at z0.
CPoly antiderivative(const CPoly& p, Complex z0);

// Largest |coefficient|, 0 for the zero polynomial.
double max_abs_coeff(const CPoly& p);

// Scale bound for the coefficients of a*b: max_m sum_{k+l=m} |a_k||b_l|.
// Used to express "zero at coefficient level" tolerances.
double product_coeff_scale(const CPoly& a, const CPoly& b);

}  // namespace austere
