#include "poncelet/billiard.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace poncelet::billiard {

namespace {

VectorXd reflect_impl(const BoundaryQuadric& boundary, const MatrixXd& ginv,
                      const VectorXd& x, const VectorXd& p) {
    double res = boundary.residual(x);
    if (std::abs(res) > kBoundaryTol)
        throw Error(ErrorCode::NotOnBoundary, "reflection point is off the boundary");
    VectorXd nu = boundary.normal(x);
    double nn = nu.dot(ginv * nu);
    double np = nu.dot(ginv * p);
    double pp = p.dot(ginv * p);
    if (nn <= 0 || pp <= 0)
        throw Error(ErrorCode::Internal, "reflection metric is not positive here");
    double transversality = std::abs(np) / std::sqrt(nn * pp);
    if (transversality < kGrazingThreshold)
        throw Error(ErrorCode::TangentialImpact, "grazing impact");
    return p - (2.0 * np / nn) * nu;
}

}  // namespace

VectorXd reflect(const BoundaryQuadric& boundary, const MetricEvaluator& metric,
                 const VectorXd& x, const VectorXd& p_minus) {
    return reflect_impl(boundary, metric.inverse_metric(x), x, p_minus);
}

VectorXd reflect_euclidean(const BoundaryQuadric& boundary, const VectorXd& x,
                           const VectorXd& p_minus) {
    const int d = boundary.family.d;
    return reflect_impl(boundary, MatrixXd::Identity(d, d), x, p_minus);
}

VectorXd reflect_elliptic(const BoundaryQuadric& boundary, const VectorXd& x,
                          const VectorXd& p_minus) {
    const int d = boundary.family.d;
    for (int i = 0; i < d; ++i)
        if (x[i] == 0.0)
            throw Error(ErrorCode::DegenerateChart,
                        "elliptic reflection needs all x_i != 0");
    confocal::EllipticCoords lam = confocal::to_elliptic(boundary.family, x);
    if (std::abs(lam.lambda[d - 1] - boundary.c) > 1e-8 * std::max(1.0, boundary.c))
        throw Error(ErrorCode::NotOnBoundary, "lambda_d != c at reflection point");
    MatrixXd jac(d, d);  // dx_i / dlambda_j = -x_i / (2 (b_i - lambda_j))
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            jac(i, j) = -x[i] / (2.0 * (boundary.family.b[i] - lam.lambda[j]));
    MatrixXd jt = jac.transpose();
    VectorXd p_lam = jt * p_minus;
    p_lam[d - 1] = -p_lam[d - 1];
    return jt.fullPivLu().solve(p_lam);
}

namespace {

// Forward boundary-intersection parameter for the chord x + t v (stable
// sign-matched quadratic roots; long orbits amplify cancellation otherwise).
double chord_step(const BoundaryQuadric& boundary, const VectorXd& x, const VectorXd& v) {
    const auto& b = boundary.family.b;
    const double c = boundary.c;
    double qa = 0, qb = 0, qc = boundary.residual(x);
    for (int i = 0; i < boundary.family.d; ++i) {
        qa += v[i] * v[i] / (b[i] - c);
        qb += x[i] * v[i] / (b[i] - c);
    }
    double disc = qb * qb - qa * qc;
    if (disc <= 0)
        throw Error(ErrorCode::GrazingSegment, "chord does not cross the boundary");
    double sd = std::sqrt(disc);
    double q = -(qb + std::copysign(sd, qb));
    double t1 = q / qa;
    double t2 = (q != 0) ? qc / q : t1;
    double t = std::max(t1, t2);
    if (!(t > 1e-12))
        throw Error(ErrorCode::GrazingSegment, "vanishing chord length");
    // one Newton polish on the exact quadratic
    double f = (qa * t + 2 * qb) * t + qc;
    double df = 2 * (qa * t + qb);
    if (df != 0) t -= f / df;
    return t;
}

}  // namespace

Trajectory trace_chords(const BoundaryQuadric& boundary, const VectorXd& x0,
                        const VectorXd& v0, int n_bounces) {
    if (v0.norm() == 0)
        throw Error(ErrorCode::BadParameter, "launch direction must be nonzero");
    double res0 = boundary.residual(x0);
    if (res0 > kBoundaryTol)
        throw Error(ErrorCode::BadParameter, "launch point is outside the boundary");

    Trajectory tr;
    tr.launch_x = x0;
    tr.launch_p = v0;
    tr.launch_on_boundary = std::abs(res0) <= kBoundaryTol;
    tr.metric_tag = "euclidean-chord";
    tr.energy = 0.5 * v0.squaredNorm();

    VectorXd x = x0, v = v0;
    for (int k = 0; k < n_bounces; ++k) {
        tr.segment_caustics.push_back(confocal::line_caustics(boundary.family, x, v));
        try {
            double t = chord_step(boundary, x, v);
            VectorXd xb = x + t * v;
            Bounce bounce;
            bounce.x = xb;
            bounce.p_in = v;
            bounce.p_out = reflect_euclidean(boundary, xb, v);
            tr.bounces.push_back(bounce);
            x = xb;
            v = bounce.p_out;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::TangentialImpact)
                throw Error(ErrorCode::GrazingSegment, e.what());
            throw;
        }
    }
    return tr;
}

namespace {

using State = std::vector<double>;

struct HamiltonianSystem {
    const MetricEvaluator* metric;
    const PotentialEvaluator* pot;  // may be null
    int d;

    void operator()(const State& s, State& dsdt, double) const {
        VectorXd x(d), p(d);
        for (int i = 0; i < d; ++i) {
            x[i] = s[i];
            p[i] = s[d + i];
        }
        MatrixXd ginv = metric->inverse_metric(x);
        auto dginv = metric->inverse_metric_jacobian(x);
        VectorXd w = ginv * p;
        VectorXd dv = pot ? pot->gradient(x) : VectorXd::Zero(d);
        dsdt.resize(2 * d);
        for (int i = 0; i < d; ++i) dsdt[i] = w[i];
        for (int j = 0; j < d; ++j)
            dsdt[d + j] = -0.5 * p.dot(dginv[j] * p) - dv[j];
    }
};

double hamiltonian(const MetricEvaluator& metric, const PotentialEvaluator* pot,
                   const VectorXd& x, const VectorXd& p) {
    double h = 0.5 * p.dot(metric.inverse_metric(x) * p);
    if (pot) h += pot->value(x);
    return h;
}

PathSample to_sample(double t, const State& s, int d) {
    PathSample ps;
    ps.t = t;
    ps.x.resize(d);
    ps.p.resize(d);
    for (int i = 0; i < d; ++i) {
        ps.x[i] = s[i];
        ps.p[i] = s[d + i];
    }
    return ps;
}

}  // namespace

std::vector<PathSample> geodesic_flow(const MetricEvaluator& metric,
                                      const PhasePoint& start, double t_end,
                                      const FlowOptions& opt) {
    const int d = metric.dim();
    std::vector<PathSample> out;
    if (metric.flat()) {
        // Euclidean k = 0: the flow is the straight line, exactly.
        int n = 64;
        for (int i = 0; i <= n; ++i) {
            double t = t_end * i / n;
            PathSample ps;
            ps.t = t;
            ps.x = start.x + t * start.p;
            ps.p = start.p;
            out.push_back(std::move(ps));
        }
        return out;
    }
    if (!metric.in_domain(start.x))
        throw Error(ErrorCode::LeftModel, "start point outside the metric domain");

    namespace ode = boost::numeric::odeint;
    HamiltonianSystem sys{&metric, nullptr, d};
    State s(2 * d);
    for (int i = 0; i < d; ++i) {
        s[i] = start.x[i];
        s[d + i] = start.p[i];
    }
    auto stepper = ode::make_dense_output(opt.tol, opt.tol,
                                          ode::runge_kutta_dopri5<State>());
    stepper.initialize(s, 0.0, std::min(1e-3, t_end));
    out.push_back(to_sample(0.0, s, d));
    while (stepper.current_time() < t_end) {
        stepper.do_step(sys);
        if (stepper.current_time() >= t_end) break;
        out.push_back(to_sample(stepper.current_time(), stepper.current_state(), d));
    }
    State sf(2 * d);
    stepper.calc_state(t_end, sf);
    out.push_back(to_sample(t_end, sf, d));
    return out;
}

namespace {

// Integrate one billiard arc until the boundary is hit; returns the polished
// boundary state. Event detection arms once the path is safely inside.
PathSample integrate_to_boundary(const BoundaryQuadric& boundary,
                                 const HamiltonianSystem& sys, PathSample from,
                                 const FlowOptions& opt,
                                 std::vector<PathSample>* arc) {
    namespace ode = boost::numeric::odeint;
    const int d = sys.d;
    State s(2 * d);
    for (int i = 0; i < d; ++i) {
        s[i] = from.x[i];
        s[d + i] = from.p[i];
    }
    auto stepper = ode::make_dense_output(opt.tol, opt.tol,
                                          ode::runge_kutta_dopri5<State>());
    stepper.initialize(s, 0.0, 1e-4);
    if (arc) arc->push_back(from);

    auto phi = [&](const State& st) {
        VectorXd x(d);
        for (int i = 0; i < d; ++i) x[i] = st[i];
        return boundary.residual(x);
    };

    bool armed = phi(s) < -1e-9;
    double t_prev = 0.0;
    double phi_prev = phi(s);
    while (stepper.current_time() < opt.max_time) {
        stepper.do_step(sys);
        double t_cur = stepper.current_time();
        double phi_cur = phi(stepper.current_state());
        if (!armed && phi_cur < -1e-9) armed = true;
        if (armed && phi_cur >= 0.0) {
            // bisect the crossing with dense output
            double lo = t_prev, hi = t_cur;
            State tmp(2 * d);
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, tmp);
                (phi(tmp) < 0 ? lo : hi) = mid;
                if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
            }
            stepper.calc_state(hi, tmp);
            PathSample hit = to_sample(hi, tmp, d);
            // radial polish onto the quadric
            double scale = 0;
            for (int i = 0; i < d; ++i)
                scale += hit.x[i] * hit.x[i] / (boundary.family.b[i] - boundary.c);
            hit.x /= std::sqrt(scale);
            if (arc) arc->push_back(hit);
            return hit;
        }
        if (arc) arc->push_back(to_sample(t_cur, stepper.current_state(), d));
        t_prev = t_cur;
        phi_prev = phi_cur;
        (void)phi_prev;
    }
    throw Error(ErrorCode::Internal, "billiard arc never reached the boundary");
}

Trajectory trace_flow_billiard(const BoundaryQuadric& boundary,
                               std::shared_ptr<MetricEvaluator> metric,
                               std::shared_ptr<PotentialEvaluator> pot,
                               const PhasePoint& start, int n_bounces,
                               const FlowOptions& opt) {
    const int d = metric->dim();
    HamiltonianSystem sys{metric.get(), pot.get(), d};

    Trajectory tr;
    tr.launch_x = start.x;
    tr.launch_p = start.p;
    tr.launch_on_boundary = std::abs(boundary.residual(start.x)) <= kBoundaryTol;
    tr.metric_tag = metric->tag() + (pot ? "+" + pot->tag() : "");
    double h0 = hamiltonian(*metric, pot.get(), start.x, start.p);
    tr.energy = h0;

    PathSample cur;
    cur.t = 0;
    cur.x = start.x;
    cur.p = start.p;
    for (int k = 0; k < n_bounces; ++k) {
        std::vector<PathSample> arc;
        PathSample hit = integrate_to_boundary(boundary, sys, cur, opt,
                                               opt.record_path ? &arc : nullptr);
        for (const auto& ps : arc) {
            double h = hamiltonian(*metric, pot.get(), ps.x, ps.p);
            tr.max_energy_drift =
                std::max(tr.max_energy_drift, std::abs(h - h0) / std::max(1.0, std::abs(h0)));
        }
        Bounce bounce;
        bounce.x = hit.x;
        bounce.p_in = hit.p;
        bounce.p_out = reflect(boundary, *metric, hit.x, hit.p);
        tr.bounces.push_back(bounce);
        if (opt.record_path) tr.arcs.push_back(std::move(arc));
        cur.t = 0;
        cur.x = hit.x;
        cur.p = bounce.p_out;
    }
    return tr;
}

}  // namespace

Trajectory trace_geodesic_billiard(const BoundaryQuadric& boundary,
                                   std::shared_ptr<MetricEvaluator> metric,
                                   const VectorXd& x0, const VectorXd& v0,
                                   int n_bounces, const FlowOptions& opt) {
    PhasePoint start;
    start.x = x0;
    start.p = metric->metric(x0) * v0;  // velocity -> covector
    return trace_flow_billiard(boundary, std::move(metric), nullptr, start, n_bounces,
                               opt);
}

Trajectory trace_with_potential(const BoundaryQuadric& boundary,
                                std::shared_ptr<MetricEvaluator> metric,
                                std::shared_ptr<PotentialEvaluator> v,
                                const PhasePoint& start, int n_bounces,
                                const FlowOptions& opt) {
    return trace_flow_billiard(boundary, std::move(metric), std::move(v), start,
                               n_bounces, opt);
}

double closure_residual(const Trajectory& traj, int n) {
    if (!traj.launch_on_boundary)
        throw Error(ErrorCode::BadParameter,
                    "closure needs a boundary launch point");
    if (n < 1 || static_cast<int>(traj.bounces.size()) < n)
        throw Error(ErrorCode::BadParameter, "trajectory has fewer than n bounces");
    const Bounce& last = traj.bounces[n - 1];
    VectorXd p0 = traj.launch_p.normalized();
    VectorXd pn = last.p_out.normalized();
    return (last.x - traj.launch_x).norm() + (pn - p0).norm();
}

bool closure_check(const Trajectory& traj, int n, double eps) {
    return closure_residual(traj, n) < eps;
}

VectorXd boundary_point(const BoundaryQuadric& boundary, const VectorXd& unit) {
    const int d = boundary.family.d;
    VectorXd x(d);
    for (int i = 0; i < d; ++i)
        x[i] = std::sqrt(boundary.family.b[i] - boundary.c) * unit[i];
    return x;
}

std::vector<VectorXd> tangent_directions(const BoundaryQuadric& boundary,
                                         const VectorXd& x0, double t_caustic) {
    const auto& b = boundary.family.b;
    if (boundary.family.d != 2)
        throw Error(ErrorCode::BadParameter, "tangent launch construction is 2-d");
    Eigen::Vector2d dvec(1.0 / (b[0] - t_caustic), 1.0 / (b[1] - t_caustic));
    Eigen::Vector2d nvec(x0[0] * dvec[0], x0[1] * dvec[1]);
    double cq = x0[0] * x0[0] * dvec[0] + x0[1] * x0[1] * dvec[1] - 1.0;
    Eigen::Matrix2d m = nvec * nvec.transpose();
    m(0, 0) -= cq * dvec[0];
    m(1, 1) -= cq * dvec[1];
    double disc = m(0, 1) * m(0, 1) - m(0, 0) * m(1, 1);
    if (disc < 0) return {};
    double sd = std::sqrt(disc);
    std::vector<Eigen::Vector2d> lines;
    if (std::abs(m(1, 1)) > 1e-14 * std::max(std::abs(m(0, 0)), 1.0)) {
        for (int sgn : {+1, -1}) {
            double r = (-m(0, 1) + sgn * sd) / m(1, 1);
            lines.push_back(Eigen::Vector2d(1.0, r).normalized());
        }
    } else {
        lines.push_back(Eigen::Vector2d(0.0, 1.0));
        if (std::abs(m(0, 0)) > 1e-14)
            lines.push_back(Eigen::Vector2d(-2 * m(0, 1) / m(0, 0), 1.0).normalized());
    }
    VectorXd nu = boundary.normal(x0);
    std::vector<VectorXd> out;
    for (auto& v : lines) {
        VectorXd w(2);
        w << v[0], v[1];
        double inward = nu.dot(w);
        if (std::abs(inward) < 1e-12) continue;  // grazing along the boundary
        if (inward > 0) w = -w;
        out.push_back(w);
    }
    return out;
}

std::vector<VectorXd> generatrix_directions(const confocal::ConfocalFamily& family,
                                            const VectorXd& x0, double t) {
    const int d = family.d;
    if (d != 3)
        throw Error(ErrorCode::BadParameter, "generatrix construction is 3-d");
    Eigen::Vector3d dvec;
    for (int i = 0; i < d; ++i) dvec[i] = 1.0 / (family.b[i] - t);
    // gradient of Q_t at x0 spans the normal; build a tangent-plane basis
    Eigen::Vector3d grad;
    for (int i = 0; i < d; ++i) grad[i] = 2.0 * x0[i] * dvec[i];
    Eigen::Vector3d g = grad.normalized();
    Eigen::Vector3d u1 = g.unitOrthogonal();
    Eigen::Vector3d u2 = g.cross(u1).normalized();
    auto q = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& bvec) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += a[i] * bvec[i] * dvec[i];
        return s;
    };
    double q11 = q(u1, u1), q12 = q(u1, u2), q22 = q(u2, u2);
    double disc = q12 * q12 - q11 * q22;
    if (disc < 0) return {};
    double sd = std::sqrt(disc);
    std::vector<Eigen::Vector3d> dirs;
    if (std::abs(q22) > 1e-14) {
        for (int sgn : {+1, -1}) {
            double r = (-q12 + sgn * sd) / q22;
            dirs.push_back((u1 + r * u2).normalized());
        }
    } else {
        dirs.push_back(u2);
        if (std::abs(q12) > 1e-14)
            dirs.push_back((u1 - (q11 / (2 * q12)) * u2).normalized());
    }
    std::vector<VectorXd> out;
    for (const auto& v : dirs) {
        VectorXd w(3);
        w << v[0], v[1], v[2];
        out.push_back(std::move(w));
    }
    return out;
}

double max_distance_to_segment(const std::vector<PathSample>& arc, const VectorXd& a,
                               const VectorXd& b) {
    VectorXd ab = b - a;
    double len2 = ab.squaredNorm();
    double worst = 0;
    for (const auto& ps : arc) {
        double s = len2 > 0 ? (ps.x - a).dot(ab) / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        worst = std::max(worst, (ps.x - (a + s * ab)).norm());
    }
    return worst;
}

}  // namespace poncelet::billiard
