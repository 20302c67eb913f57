#pragma once

// Separable potential machinery: the separability PDE system in residual
// form, the coefficient recurrence, basis generation by exact linear solve,
// elliptic-coordinate forms via divided differences, and the companion
// integral fields f_i with grad f_i = S_i grad V.

#include <memory>
#include <optional>
#include <utility>

#include "poncelet/confocal.hpp"
#include "poncelet/hierarchy.hpp"
#include "poncelet/laurent.hpp"

namespace poncelet::potential {

using confocal::ConfocalFamily;
using confocal::EllipticCoords;

struct BasisSpec {
    enum class Kind { V, W };
    Kind kind = Kind::V;
    int k = 1;    // degree index >= 1
    int axis = 0; // W only: 0-based axis index
};

// Exact separability residual per pair i < j:
//   (b_i - b_j) d2V/dx_i dx_j - (x_i d_j - x_j d_i)(2V + sum_k x_k dV/dx_k).
// V is separable iff every residual is identically zero.
struct PairResidual {
    int i = 0, j = 0;
    LaurentPolynomial residual;
};
std::vector<PairResidual> separability_residual(const LaurentPolynomial& v,
                                                const ConfocalFamily& family);
bool is_separable(const LaurentPolynomial& v, const ConfocalFamily& family);

// Coefficient-space route: every instantiation of the difference system
//   (b_k - b_l) i_k i_l p_I = |I| (i_l p_{I-2e_k} - i_k p_{I-2e_l})
// over the support and its shifted neighborhood, checked exactly.
struct RecurrenceViolation {
    Exponents index;
    int k = 0, l = 0;
    Rational lhs, rhs;
};
struct RecurrenceReport {
    bool satisfied = true;
    std::optional<RecurrenceViolation> first_violation;
};
RecurrenceReport recurrence_check(const LaurentPolynomial& v,
                                  const ConfocalFamily& family);

// Basis element by exact solve of the recurrence over the support lattice.
// V-kind pinning: pure x_1 powers follow the axis slice x^2 (b_1 - x^2)^{k-1}
// and the constant term vanishes. W-kind pinning: coefficient 1 on x_i^{-2k}
// and no pure lower powers of x_i. An unexpected solution-space dimension
// raises UnderdeterminedNormalization.
LaurentPolynomial basis_potential(const BasisSpec& spec, const ConfocalFamily& family);

// Independent construction of the V-kind element through elliptic
// symmetric-function algebra: the divided-difference potential of
// v(t) = -t^{k-1} prod_i (t - b_i), constant term removed. Test oracle.
LaurentPolynomial elliptic_route_potential(int k, const ConfocalFamily& family);

// Elliptic-coordinate evaluator: V(lambda) = (d-1)-st divided difference of
// v(t), with v = sum alpha_j t^{d-1+j} (V-kind) or sum beta_j (t-b_i)^{-j}
// (W-kind). The proportionality constants are calibrated once against the
// Cartesian route at generic reference points.
class EllipticForm {
public:
    EllipticForm(const BasisSpec& spec, const ConfocalFamily& family);

    double operator()(const Eigen::VectorXd& lambda) const;
    const std::vector<double>& calibrated_coefficients() const { return coeff_; }

private:
    double v_derivative(double t, int order) const;  // v^{(order)}(t)/order!

    BasisSpec spec_;
    ConfocalFamily family_;
    std::vector<double> coeff_;  // alpha_0..alpha_k resp. beta_1..beta_k
};

double elliptic_form_eval(const BasisSpec& spec, const ConfocalFamily& family,
                          const Eigen::VectorXd& lambda);

// S_i(x) as exact polynomial matrices (adjugate recursion over the Laurent
// coefficient ring).
std::vector<std::vector<std::vector<LaurentPolynomial>>> symbolic_s_tensors(
    const ConfocalFamily& family);

// f_i with grad f_i = S_i grad V, recovered exactly by inverting the Euler
// grading of x . (S_i grad V); raises NotSeparable when the field is not a
// gradient (curl or log obstruction).
struct IntegralField {
    int index = 0;
    LaurentPolynomial f;  // symbolic antiderivative, f(reference) = 0
};
IntegralField solve_f(const ConfocalFamily& family, const LaurentPolynomial& v, int i);

// Numeric line integral of S_i grad V from `from` to `to` (Gauss-Legendre
// along the straight segment); the tests build staircase paths and closed
// loops from it.
double field_line_integral(const ConfocalFamily& family, const LaurentPolynomial& v,
                           int i, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                           int panels = 64);

// Adapter so Laurent potentials can drive the billiard flows.
class LaurentPotentialEvaluator : public hierarchy::PotentialEvaluator {
public:
    LaurentPotentialEvaluator(LaurentPolynomial v, std::string tag)
        : v_(std::move(v)), tag_(std::move(tag)) {}
    double value(const Eigen::VectorXd& x) const override { return v_.eval(x); }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
        return v_.gradient(x);
    }
    std::string tag() const override { return tag_; }
    const LaurentPolynomial& poly() const { return v_; }

private:
    LaurentPolynomial v_;
    std::string tag_;
};

}  // namespace poncelet::potential
