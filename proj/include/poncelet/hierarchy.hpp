#pragma once

// Geodesically equivalent metric hierarchy over the Klein model: the tensor
// L = B - x (x)T, the adjugate expansion tensors S_0..S_{d-1}, the metrics
// g_k = <L^k dx,dx> and gbar_k = <Pi L^k dx,dx>, their quadratic first
// integrals J_i^k = <S_i L^{-k} p,p>, Poisson brackets, and the Maupertuis
// rescaling (h - V) g.

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "poncelet/confocal.hpp"

namespace poncelet::hierarchy {

using confocal::ConfocalFamily;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct HierarchyContext {
    ConfocalFamily family;
    int k = 0;
};

// L(x) = B - x x^T and its coordinate derivatives.
MatrixXd tensor_L(const ConfocalFamily& family, const VectorXd& x);
std::vector<MatrixXd> tensor_L_jacobian(const VectorXd& x);

// Integer matrix power; negative powers solve against L and throw SingularL
// near the model boundary where det L -> 0.
MatrixXd matrix_int_power(const MatrixXd& l, int m);

// Adjugate expansion adj(L + a I) = sum_l S_l a^l by the Faddeev-LeVerrier
// recursion; S.back() == I and L S_0 = det(L) I (checked by tests, exact on
// rationals).
struct STensors {
    std::vector<MatrixXd> S;          // S_0 .. S_{d-1}
    std::vector<double> elementary;   // e_1 .. e_d of L
};
STensors char_tensors(const ConfocalFamily& family, const VectorXd& x);

// Same recursion over exact rationals (x rational); used by the exact tests.
struct STensorsExact {
    std::vector<QMatrix> S;
    std::vector<Rational> elementary;
};
STensorsExact char_tensors_exact(const std::vector<Rational>& b,
                                 const std::vector<Rational>& x);

// Closed form of the adjugate, det(B_a) ((1 - <B_a^{-1}x, x>) B_a^{-1} +
// (B_a^{-1}x)(B_a^{-1}x)^T) with B_a = B + a I; kept separate so tests can
// compare it against the recursion.
MatrixXd closed_form_adjugate_at(const ConfocalFamily& family, const VectorXd& x,
                                 double alpha);

enum class Branch { euclidean, hyperbolic };

// dg_k^2 resp. dgbar_k^2 as a matrix at x.
MatrixXd metric_at(const HierarchyContext& ctx, const VectorXd& x, Branch which);

// J_i^k(p, x) = <S_i L^{-k} p, p>.
double integral_J(const HierarchyContext& ctx, const VectorXd& x, const VectorXd& p,
                  int i);

// Phase-space functions with analytic gradients (canonical coordinates).
class PhaseFunction {
public:
    virtual ~PhaseFunction() = default;
    virtual double value(const VectorXd& x, const VectorXd& p) const = 0;
    virtual VectorXd grad_x(const VectorXd& x, const VectorXd& p) const = 0;
    virtual VectorXd grad_p(const VectorXd& x, const VectorXd& p) const = 0;
};

// J_i^k as a PhaseFunction; gradients come from the differentiated
// Faddeev-LeVerrier recursion, not finite differences.
class QuadraticIntegral : public PhaseFunction {
public:
    QuadraticIntegral(HierarchyContext ctx, int i) : ctx_(std::move(ctx)), i_(i) {}
    double value(const VectorXd& x, const VectorXd& p) const override;
    VectorXd grad_x(const VectorXd& x, const VectorXd& p) const override;
    VectorXd grad_p(const VectorXd& x, const VectorXd& p) const override;
    MatrixXd quadratic_form(const VectorXd& x) const;  // S_i L^{-k}, symmetrized

private:
    HierarchyContext ctx_;
    int i_;
};

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                       const VectorXd& x, const VectorXd& p);

// Central-difference bracket, the test oracle for the analytic gradients.
double poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g,
                          const VectorXd& x, const VectorXd& p, double h = 1e-5);

// --- metric evaluators for the flows -------------------------------------

class PotentialEvaluator {
public:
    virtual ~PotentialEvaluator() = default;
    virtual double value(const VectorXd& x) const = 0;
    virtual VectorXd gradient(const VectorXd& x) const = 0;
    virtual std::string tag() const = 0;
};

class MetricEvaluator {
public:
    virtual ~MetricEvaluator() = default;
    virtual int dim() const = 0;
    virtual std::string tag() const = 0;
    virtual bool flat() const { return false; }  // true only for g_0
    virtual bool in_domain(const VectorXd& x) const = 0;
    virtual MatrixXd metric(const VectorXd& x) const = 0;
    virtual MatrixXd inverse_metric(const VectorXd& x) const = 0;
    virtual std::vector<MatrixXd> inverse_metric_jacobian(const VectorXd& x) const = 0;
};

std::shared_ptr<MetricEvaluator> make_hierarchy_metric(const ConfocalFamily& family,
                                                       int k, Branch which);

// (h - V(x)) g; throws EnergyBelowPotential wherever h <= V.
std::shared_ptr<MetricEvaluator> maupertuis_scale(std::shared_ptr<MetricEvaluator> base,
                                                  std::shared_ptr<PotentialEvaluator> v,
                                                  double h);

}  // namespace poncelet::hierarchy
