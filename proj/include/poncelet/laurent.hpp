#pragma once

// Multivariate Laurent polynomials with exact rational coefficients: the
// coefficient space for separable potentials. Exponents may be negative;
// zero coefficients are never stored.

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "poncelet/rational.hpp"

namespace poncelet::potential {

using Exponents = std::vector<int>;

class LaurentPolynomial {
public:
    LaurentPolynomial() = default;
    explicit LaurentPolynomial(int nvars) : nvars_(nvars) {}

    static LaurentPolynomial monomial(Exponents e, Rational c);
    static LaurentPolynomial constant(int nvars, Rational c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    Rational coefficient(const Exponents& e) const;

    void add_term(const Exponents& e, const Rational& c);

    LaurentPolynomial& operator+=(const LaurentPolynomial& other);
    LaurentPolynomial& operator-=(const LaurentPolynomial& other);
    LaurentPolynomial operator+(const LaurentPolynomial& other) const;
    LaurentPolynomial operator-(const LaurentPolynomial& other) const;
    LaurentPolynomial operator*(const LaurentPolynomial& other) const;
    LaurentPolynomial operator*(const Rational& s) const;
    LaurentPolynomial operator-() const;

    LaurentPolynomial partial_derivative(int var) const;
    // sum_k x_k dV/dx_k: scales each term by its total degree
    LaurentPolynomial euler() const;
    // multiply by the monomial x^e (shift exponents)
    LaurentPolynomial shifted(const Exponents& e) const;
    // terms of one total degree (the Z-grading used to invert the Euler field)
    LaurentPolynomial graded_part(int degree) const;
    std::vector<int> occurring_degrees() const;

    int min_exponent() const;
    int max_exponent() const;
    bool polynomial() const { return min_exponent() >= 0; }

    double eval(const Eigen::VectorXd& x) const;
    Rational eval_exact(const std::vector<Rational>& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

    // one term per line: "i_1 i_2 ... i_d : p/q"
    std::string serialize() const;
    static LaurentPolynomial deserialize(const std::string& text, int nvars);
    // human-readable rendering, e.g. "x1^2 - 2 x1^-4 x2^2"
    std::string pretty() const;

    bool operator==(const LaurentPolynomial& other) const;

private:
    int nvars_ = 0;
    std::map<Exponents, Rational> terms_;
};

}  // namespace poncelet::potential
