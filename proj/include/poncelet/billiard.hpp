#pragma once

// Trajectory generation: chord billiards (which by the model equivalence are
// also the Lobachevsky billiard's point-set trajectories), geodesic
// integration for the hierarchy metrics, motion in separable potentials,
// the reflection law, and closure detection.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poncelet/confocal.hpp"
#include "poncelet/hierarchy.hpp"

namespace poncelet::billiard {

using confocal::BoundaryQuadric;
using confocal::CausticSet;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using hierarchy::MetricEvaluator;
using hierarchy::PotentialEvaluator;

struct PhasePoint {
    VectorXd x;
    VectorXd p;
};

struct Bounce {
    VectorXd x;
    VectorXd p_in;
    VectorXd p_out;
};

struct PathSample {
    double t = 0;
    VectorXd x;
    VectorXd p;
};

struct Trajectory {
    VectorXd launch_x;
    VectorXd launch_p;                       // outgoing momentum at launch
    bool launch_on_boundary = false;
    std::vector<Bounce> bounces;
    std::vector<CausticSet> segment_caustics;  // chord runs only
    std::vector<std::vector<PathSample>> arcs; // ODE runs, when recorded
    std::string metric_tag;
    double energy = 0;
    double max_energy_drift = 0;             // ODE runs
};

inline constexpr double kGrazingThreshold = 1e-12;
inline constexpr double kBoundaryTol = 1e-10;

// Billiard law: |p_+| = |p_-| in the metric, p_+ - p_- conormal to Gamma.
VectorXd reflect(const BoundaryQuadric& boundary, const MetricEvaluator& metric,
                 const VectorXd& x, const VectorXd& p_minus);

// Euclidean fast path.
VectorXd reflect_euclidean(const BoundaryQuadric& boundary, const VectorXd& x,
                           const VectorXd& p_minus);

// The elliptic-coordinate form of the same map (sign flip of p_{lambda_d});
// an independent route kept for cross-checking. Needs all x_i != 0.
VectorXd reflect_elliptic(const BoundaryQuadric& boundary, const VectorXd& x,
                          const VectorXd& p_minus);

// Straight-chord billiard. Caustic parameters are recorded per segment.
Trajectory trace_chords(const BoundaryQuadric& boundary, const VectorXd& x0,
                        const VectorXd& v0, int n_bounces);

struct FlowOptions {
    double tol = 1e-9;
    bool record_path = true;
    double max_time = 1e6;
};

// Hamiltonian flow of H = (1/2) <G^{-1} p, p>, adaptive dopri5.
std::vector<PathSample> geodesic_flow(const MetricEvaluator& metric,
                                      const PhasePoint& start, double t_end,
                                      const FlowOptions& opt = {});

// Billiard with geodesic arcs of the given metric: integrate to the boundary,
// reflect, repeat. Used to check the chord/geodesic equivalence.
Trajectory trace_geodesic_billiard(const BoundaryQuadric& boundary,
                                   std::shared_ptr<MetricEvaluator> metric,
                                   const VectorXd& x0, const VectorXd& v0,
                                   int n_bounces, const FlowOptions& opt = {});

// Same, with a potential term: H = (1/2) <G^{-1} p, p> + V(x).
Trajectory trace_with_potential(const BoundaryQuadric& boundary,
                                std::shared_ptr<MetricEvaluator> metric,
                                std::shared_ptr<PotentialEvaluator> v,
                                const PhasePoint& start, int n_bounces,
                                const FlowOptions& opt = {});

// State recurrence after n bounces: |x_n - x_0| + |p^_n - p^_0| < eps with
// unit-normalized outgoing momenta. The launch must sit on the boundary.
bool closure_check(const Trajectory& traj, int n, double eps);
double closure_residual(const Trajectory& traj, int n);

// Boundary point from a direction on the unit sphere.
VectorXd boundary_point(const BoundaryQuadric& boundary, const VectorXd& unit);

// Inward unit directions at x0 whose line is tangent to the confocal quadric
// Q_t (family parametrization). d = 2 only; empty when x0 does not see Q_t.
std::vector<VectorXd> tangent_directions(const BoundaryQuadric& boundary,
                                         const VectorXd& x0, double t_caustic);

// Directions at x0 along the generatrices of the ruled quadric Q_t through
// x0 (d = 3, x0 on Q_t); empty when Q_t is not ruled at x0.
std::vector<VectorXd> generatrix_directions(const confocal::ConfocalFamily& family,
                                            const VectorXd& x0, double t);

double max_distance_to_segment(const std::vector<PathSample>& arc, const VectorXd& a,
                               const VectorXd& b);

}  // namespace poncelet::billiard
