#pragma once

// Confocal quadric families Q_t : sum_i x_i^2/(b_i - t) = 1, elliptic
// coordinates, caustics of lines, the Beltrami-Klein hyperbolic metric and
// the Minkowski-model -> Beltrami-Klein coordinate map.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "poncelet/rational.hpp"

namespace poncelet::confocal {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ConfocalFamily {
    int d = 0;
    std::vector<double> b;           // b_1 > b_2 > ... > b_d > 0
    std::vector<Rational> b_exact;   // populated iff exact
    bool exact = false;
    bool symmetric_ok = false;       // relaxed flag: permits b_i ties (simulation only)

    static ConfocalFamily from_doubles(std::vector<double> b, bool symmetric_ok = false);
    static ConfocalFamily from_rationals(std::vector<Rational> b, bool symmetric_ok = false);
};

struct BoundaryQuadric {
    ConfocalFamily family;
    double c = 0;                    // 0 < c < b_d, boundary is Q_c
    std::optional<Rational> c_exact;

    static BoundaryQuadric make(ConfocalFamily family, double c);
    static BoundaryQuadric make_exact(ConfocalFamily family, Rational c);

    // boundary residual sum x_i^2/(b_i - c) - 1
    double residual(const VectorXd& x) const;
    // gradient covector of the residual
    VectorXd normal(const VectorXd& x) const;
};

struct MinkowskiEllipsoid {
    std::vector<double> a;           // a_0 > a_1 >= ... >= a_d > 0
    std::vector<double> mu;          // d-1 caustic parameters, each != 0
    std::vector<Rational> a_exact;
    std::vector<Rational> mu_exact;
    bool exact = false;

    int dim() const { return static_cast<int>(a.size()) - 1; }

    static MinkowskiEllipsoid from_doubles(std::vector<double> a, std::vector<double> mu);
    static MinkowskiEllipsoid from_rationals(std::vector<Rational> a, std::vector<Rational> mu);
};

struct EllipticCoords {
    VectorXd lambda;                 // descending, interlacing with b
    bool degenerate = false;
    std::vector<bool> degenerate_flags;  // lambda_j pinned to some b_i
};

struct CausticSet {
    std::vector<double> params;      // descending, with multiplicity (d-1 of them)
    std::vector<bool> degenerate_flags;  // parameter coincides with some b_i
};

// Roots of gamma(lambda) = 1 isolated in the interlacing intervals
// (bisection brackets, Newton polish). Coordinates that are exactly zero
// collapse roots onto the corresponding b_i; those come back flagged.
EllipticCoords to_elliptic(const ConfocalFamily& family, const VectorXd& x);

// Classical product formula x_i^2 = prod_j (b_i - lambda_j) / prod_{j != i} (b_i - b_j).
VectorXd from_elliptic(const ConfocalFamily& family, const EllipticCoords& lambda,
                       const std::vector<int>& signs);

// Caustic parameters of the line x0 + t v: roots of the cleared tangency
// discriminant, of degree exactly d-1 after the known factor prod(b_i - mu)
// is removed.
CausticSet line_caustics(const ConfocalFamily& family, const VectorXd& x0, const VectorXd& v);

// The monic caustic polynomial over Q (exact Chasles invariant of the line).
QVector caustic_polynomial_exact(const std::vector<Rational>& b,
                                 const std::vector<Rational>& x0,
                                 const std::vector<Rational>& v);

// Image of the Lobachevsky model data in the Beltrami-Klein picture.
struct KleinModel {
    ConfocalFamily family;       // Lambda: b_i = c a_0 / (a_0 - a_i)
    BoundaryQuadric boundary;    // Gamma: shift c
    double a0 = 0;
    double c = 0;

    // confocal shift of the image of quadric (4) with parameter mu
    double caustic_shift(double mu) const { return c * a0 / (a0 - mu); }
};

// x_i = alpha_i y_i with alpha_i^2 = c a_0/(a_0 - a_i); confocality of every
// caustic image is verified by direct substitution before returning.
KleinModel minkowski_to_klein(const MinkowskiEllipsoid& e, double c);
KleinModel minkowski_to_klein_exact(const MinkowskiEllipsoid& e, const Rational& c);

// Pi(x) = (f B^{-1} + B^{-1}x (B^{-1}x)^T) / (det B f^2), f = 1 - sum x_i^2/b_i.
MatrixXd hyperbolic_metric_at(const ConfocalFamily& family, const VectorXd& x);

// f(x) = 1 - sum x_i^2 / b_i
double model_gauge(const ConfocalFamily& family, const VectorXd& x);

}  // namespace poncelet::confocal
