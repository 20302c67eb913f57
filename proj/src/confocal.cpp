#include "poncelet/confocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "poncelet/polynomial.hpp"

namespace poncelet::confocal {

namespace {

void check_ordering(const std::vector<double>& b, bool symmetric_ok) {
    if (b.size() < 2)
        throw Error(ErrorCode::BadParameter, "confocal family needs d >= 2");
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        bool ok = symmetric_ok ? b[i] >= b[i + 1] : b[i] > b[i + 1];
        if (!ok)
            throw Error(ErrorCode::NonStrictFamily,
                        "semi-axis parameters must be strictly decreasing");
    }
    if (b.back() <= 0)
        throw Error(ErrorCode::BadParameter, "semi-axis parameters must be positive");
}

}  // namespace

ConfocalFamily ConfocalFamily::from_doubles(std::vector<double> b, bool symmetric_ok) {
    check_ordering(b, symmetric_ok);
    ConfocalFamily f;
    f.d = static_cast<int>(b.size());
    f.b = std::move(b);
    f.exact = false;
    f.symmetric_ok = symmetric_ok;
    return f;
}

ConfocalFamily ConfocalFamily::from_rationals(std::vector<Rational> bq, bool symmetric_ok) {
    std::vector<double> b(bq.size());
    for (std::size_t i = 0; i < bq.size(); ++i) b[i] = to_double(bq[i]);
    for (std::size_t i = 0; i + 1 < bq.size(); ++i) {
        bool ok = symmetric_ok ? bq[i] >= bq[i + 1] : bq[i] > bq[i + 1];
        if (!ok)
            throw Error(ErrorCode::NonStrictFamily,
                        "semi-axis parameters must be strictly decreasing");
    }
    ConfocalFamily f = from_doubles(std::move(b), symmetric_ok);
    f.b_exact = std::move(bq);
    f.exact = true;
    return f;
}

BoundaryQuadric BoundaryQuadric::make(ConfocalFamily family, double c) {
    if (!(c > 0 && c < family.b.back()))
        throw Error(ErrorCode::BadParameter, "boundary shift must satisfy 0 < c < b_d");
    BoundaryQuadric q;
    q.family = std::move(family);
    q.c = c;
    return q;
}

BoundaryQuadric BoundaryQuadric::make_exact(ConfocalFamily family, Rational c) {
    BoundaryQuadric q = make(std::move(family), to_double(c));
    q.c_exact = std::move(c);
    return q;
}

double BoundaryQuadric::residual(const VectorXd& x) const {
    double s = -1.0;
    for (int i = 0; i < family.d; ++i) s += x[i] * x[i] / (family.b[i] - c);
    return s;
}

VectorXd BoundaryQuadric::normal(const VectorXd& x) const {
    VectorXd n(family.d);
    for (int i = 0; i < family.d; ++i) n[i] = 2.0 * x[i] / (family.b[i] - c);
    return n;
}

MinkowskiEllipsoid MinkowskiEllipsoid::from_doubles(std::vector<double> a,
                                                    std::vector<double> mu) {
    if (a.size() < 3)
        throw Error(ErrorCode::BadParameter, "need a_0..a_d with d >= 2");
    if (mu.size() + 2 != a.size())
        throw Error(ErrorCode::BadParameter, "need exactly d-1 caustic parameters");
    if (!(a[0] > a[1]))
        throw Error(ErrorCode::OrderingViolated, "a_0 > a_1 required");
    for (std::size_t i = 1; i + 1 < a.size(); ++i)
        if (!(a[i] >= a[i + 1]))
            throw Error(ErrorCode::OrderingViolated, "a_1 >= ... >= a_d required");
    if (!(a.back() > 0))
        throw Error(ErrorCode::BadParameter, "a_d > 0 required");
    for (double m : mu)
        if (m == 0.0)
            throw Error(ErrorCode::ZeroParameter, "caustic parameter mu = 0");
    MinkowskiEllipsoid e;
    e.a = std::move(a);
    e.mu = std::move(mu);
    return e;
}

MinkowskiEllipsoid MinkowskiEllipsoid::from_rationals(std::vector<Rational> aq,
                                                      std::vector<Rational> muq) {
    std::vector<double> a(aq.size()), mu(muq.size());
    for (std::size_t i = 0; i < aq.size(); ++i) a[i] = to_double(aq[i]);
    for (std::size_t i = 0; i < muq.size(); ++i) mu[i] = to_double(muq[i]);
    for (const auto& m : muq)
        if (m == 0)
            throw Error(ErrorCode::ZeroParameter, "caustic parameter mu = 0");
    MinkowskiEllipsoid e = from_doubles(std::move(a), std::move(mu));
    e.a_exact = std::move(aq);
    e.mu_exact = std::move(muq);
    e.exact = true;
    return e;
}

namespace {

// gamma(lambda) - 1 and its lambda-derivative; increasing between poles.
double gauge_fn(const std::vector<double>& b, const VectorXd& x, double lam) {
    double s = -1.0;
    for (std::size_t i = 0; i < b.size(); ++i) s += x[i] * x[i] / (b[i] - lam);
    return s;
}

double gauge_fn_deriv(const std::vector<double>& b, const VectorXd& x, double lam) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        double t = b[i] - lam;
        s += x[i] * x[i] / (t * t);
    }
    return s;
}

// One simple root of gamma=1 in (lo, hi), where gamma-1 goes -inf -> +inf.
double refine_root(const std::vector<double>& b, const VectorXd& x, double lo, double hi) {
    // bisection until safely bracketed away from the poles, then Newton
    double flo = gauge_fn(b, x, lo);
    double fhi = gauge_fn(b, x, hi);
    // the open-interval limits are -inf (at lo+) and +inf (at hi-); nudge
    // inward until signs are usable
    double span = hi - lo;
    double a = lo + 1e-14 * span, fa = gauge_fn(b, x, a);
    double c = hi - 1e-14 * span, fc = gauge_fn(b, x, c);
    int guard = 0;
    while (fa > 0 && guard++ < 60) { a = lo + 0.5 * (a - lo); fa = gauge_fn(b, x, a); }
    guard = 0;
    while (fc < 0 && guard++ < 60) { c = hi - 0.5 * (hi - c); fc = gauge_fn(b, x, c); }
    (void)flo;
    (void)fhi;
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + c);
        double fm = gauge_fn(b, x, m);
        if (fm < 0) a = m; else c = m;
        if (c - a < 1e-13 * std::max(1.0, std::abs(m))) break;
    }
    double r = 0.5 * (a + c);
    for (int it = 0; it < 6; ++it) {
        double f = gauge_fn(b, x, r);
        double df = gauge_fn_deriv(b, x, r);
        if (df == 0) break;
        double step = f / df;
        double next = r - step;
        if (next <= a || next >= c) break;  // keep the bracket
        r = next;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    return r;
}

}  // namespace

EllipticCoords to_elliptic(const ConfocalFamily& family, const VectorXd& x) {
    const int d = family.d;
    if (x.size() != d)
        throw Error(ErrorCode::BadParameter, "point dimension mismatch");
    for (int i = 0; i + 1 < d; ++i)
        if (family.b[i] == family.b[i + 1])
            throw Error(ErrorCode::NonStrictFamily, "elliptic chart needs strict ordering");

    std::vector<int> zero_idx, live_idx;
    for (int i = 0; i < d; ++i)
        (x[i] == 0.0 ? zero_idx : live_idx).push_back(i);

    EllipticCoords out;
    if (zero_idx.empty()) {
        std::vector<double> lam(d);
        for (int j = 0; j < d; ++j) {
            double hi = family.b[j];
            double lo;
            if (j + 1 < d) {
                lo = family.b[j + 1];
            } else {
                // lambda_d lives below b_d; expand the bracket downward
                double width = std::max(1.0, family.b[0] - family.b[d - 1]);
                lo = family.b[d - 1] - width;
                while (gauge_fn(family.b, x, lo) > 0) {
                    width *= 2;
                    lo = family.b[d - 1] - width;
                    if (width > 1e30)
                        throw Error(ErrorCode::Internal, "to_elliptic: runaway bracket");
                }
            }
            lam[j] = refine_root(family.b, x, lo, hi);
        }
        out.lambda = Eigen::Map<VectorXd>(lam.data(), d);
        out.degenerate_flags.assign(d, false);
        return out;
    }

    // Degenerate chart: zero coordinates pin roots at the matching b_i; the
    // rest solve the reduced system on the symmetry plane.
    std::vector<double> b_red;
    VectorXd x_red(static_cast<int>(live_idx.size()));
    for (std::size_t k = 0; k < live_idx.size(); ++k) {
        b_red.push_back(family.b[live_idx[k]]);
        x_red[static_cast<int>(k)] = x[live_idx[k]];
    }
    std::vector<std::pair<double, bool>> merged;  // (lambda, pinned?)
    for (int i : zero_idx) merged.push_back({family.b[i], true});
    if (live_idx.size() == 1) {
        merged.push_back({b_red[0] - x_red[0] * x_red[0], false});
    } else if (live_idx.size() >= 2) {
        ConfocalFamily red = ConfocalFamily::from_doubles(b_red);
        EllipticCoords sub = to_elliptic(red, x_red);
        for (int j = 0; j < sub.lambda.size(); ++j)
            merged.push_back({sub.lambda[j], false});
    }
    std::sort(merged.begin(), merged.end(),
              [](const auto& p, const auto& q) { return p.first > q.first; });
    out.lambda.resize(d);
    out.degenerate_flags.resize(d);
    for (int j = 0; j < d; ++j) {
        out.lambda[j] = merged[j].first;
        out.degenerate_flags[j] = merged[j].second;
    }
    out.degenerate = true;
    return out;
}

VectorXd from_elliptic(const ConfocalFamily& family, const EllipticCoords& coords,
                       const std::vector<int>& signs) {
    const int d = family.d;
    const VectorXd& lam = coords.lambda;
    if (lam.size() != d || static_cast<int>(signs.size()) != d)
        throw Error(ErrorCode::BadParameter, "from_elliptic: dimension mismatch");
    for (int j = 0; j < d; ++j) {
        double upper = family.b[j];
        double lower = (j + 1 < d) ? family.b[j + 1] : -std::numeric_limits<double>::infinity();
        if (!(lam[j] < upper && lam[j] > lower))
            throw Error(ErrorCode::InterlacingViolated,
                        "elliptic coordinates must interlace the semi-axes strictly");
    }
    VectorXd x(d);
    for (int i = 0; i < d; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < d; ++j) num *= family.b[i] - lam[j];
        for (int j = 0; j < d; ++j)
            if (j != i) den *= family.b[i] - family.b[j];
        double sq = num / den;
        if (sq < 0) {
            if (sq < -1e-12)
                throw Error(ErrorCode::Internal, "from_elliptic: negative square");
            sq = 0;
        }
        x[i] = (signs[i] >= 0 ? 1.0 : -1.0) * std::sqrt(sq);
    }
    return x;
}

namespace {

// Cleared tangency discriminant F(mu) = (B~)^2 - (A~)(C~) where
// A~ = sum v_i^2 prod_{j != i}(b_j - mu), etc. F always carries the factor
// prod_i (b_i - mu); the quotient has degree exactly d-1 (leading coeff |v|^2).
template <typename T>
Poly<T> caustic_poly_impl(const std::vector<T>& b, const std::vector<T>& x0,
                          const std::vector<T>& v) {
    const std::size_t d = b.size();
    std::vector<Poly<T>> partial(d);  // prod_{j != i} (b_j - mu)
    Poly<T> full{T(1)};
    for (std::size_t i = 0; i < d; ++i) {
        Poly<T> p{T(1)};
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) p = poly_mul(p, Poly<T>{b[j], T(-1)});
        partial[i] = std::move(p);
    }
    for (std::size_t j = 0; j < d; ++j) full = poly_mul(full, Poly<T>{b[j], T(-1)});

    Poly<T> bp{T(0)}, ap{T(0)}, cp{T(0)};
    for (std::size_t i = 0; i < d; ++i) {
        T xv = x0[i] * v[i];
        T vv = v[i] * v[i];
        T xx = x0[i] * x0[i];
        bp = poly_add(bp, poly_scale(partial[i], xv));
        ap = poly_add(ap, poly_scale(partial[i], vv));
        cp = poly_add(cp, poly_scale(partial[i], xx));
    }
    cp = poly_add(cp, poly_scale(full, T(-1)));

    Poly<T> f = poly_add(poly_mul(bp, bp), poly_scale(poly_mul(ap, cp), T(-1)));
    Poly<T> rem;
    Poly<T> g = poly_divmod(f, full, &rem);
    return g;  // remainder vanishes identically; float path checks it in tests
}

}  // namespace

QVector caustic_polynomial_exact(const std::vector<Rational>& b,
                                 const std::vector<Rational>& x0,
                                 const std::vector<Rational>& v) {
    QVector g = caustic_poly_impl<Rational>(b, x0, v);
    int deg = poly_degree(g);
    if (deg < 0)
        throw Error(ErrorCode::DegenerateLine, "caustic polynomial vanished");
    Rational lead = g[deg];
    for (auto& c : g) c /= lead;
    g.resize(deg + 1);
    return g;
}

CausticSet line_caustics(const ConfocalFamily& family, const VectorXd& x0,
                         const VectorXd& v) {
    const int d = family.d;
    if (v.norm() == 0)
        throw Error(ErrorCode::BadParameter, "line direction must be nonzero");
    std::vector<double> b = family.b, p(d), w(d);
    for (int i = 0; i < d; ++i) {
        p[i] = x0[i];
        w[i] = v[i];
    }
    Poly<double> g = caustic_poly_impl<double>(b, p, w);

    int deg = poly_degree(g);
    double scale = 0;
    for (double c : g) scale = std::max(scale, std::abs(c));
    if (deg < d - 1 || std::abs(g[d - 1]) < 1e-12 * scale)
        throw Error(ErrorCode::DegenerateLine,
                    "cleared caustic polynomial dropped degree");
    g.resize(d);

    std::vector<double> roots;
    if (d == 2) {
        roots.push_back(-g[0] / g[1]);
    } else if (d == 3) {
        // stable quadratic
        double a = g[2], bq = g[1], c = g[0];
        double disc = bq * bq - 4 * a * c;
        if (disc < 0 && disc > -1e-10 * std::max(1.0, bq * bq)) disc = 0;
        if (disc < 0)
            throw Error(ErrorCode::Internal, "complex caustic parameters");
        double sq = std::sqrt(disc);
        double q = -0.5 * (bq + (bq >= 0 ? sq : -sq));
        double r1 = q / a;
        double r2 = (q != 0) ? c / q : r1;
        roots = {r1, r2};
    } else {
        // companion matrix for higher d
        MatrixXd comp = MatrixXd::Zero(d - 1, d - 1);
        for (int i = 1; i < d - 1; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < d - 1; ++i) comp(i, d - 2) = -g[i] / g[d - 1];
        Eigen::EigenSolver<MatrixXd> es(comp);
        for (int i = 0; i < d - 1; ++i) roots.push_back(es.eigenvalues()[i].real());
    }
    std::sort(roots.begin(), roots.end(), std::greater<double>());

    CausticSet cs;
    cs.params = roots;
    cs.degenerate_flags.resize(roots.size(), false);
    double width = std::max(1.0, std::abs(family.b.front()));
    for (std::size_t k = 0; k < roots.size(); ++k)
        for (double bi : family.b)
            if (std::abs(roots[k] - bi) < 1e-9 * width) cs.degenerate_flags[k] = true;
    return cs;
}

namespace {

// Verify alpha_i^2 (a_i - mu) == (b_i - t(mu)) (a_0 - mu) as a polynomial
// identity in mu, i.e. the image of quadric (4) is confocal with shift t(mu).
void verify_confocality(const std::vector<double>& a, const std::vector<double>& b,
                        double c) {
    double a0 = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        double alpha2 = b[i - 1];
        // constant coefficient and mu coefficient of the residual
        double k0 = b[i - 1] * a0 - c * a0 - alpha2 * a[i];
        double k1 = -b[i - 1] + alpha2;
        double scale = std::max({std::abs(b[i - 1] * a0), std::abs(c * a0), 1.0});
        if (std::abs(k0) > 1e-12 * scale || std::abs(k1) > 1e-12 * scale)
            throw Error(ErrorCode::Internal,
                        "minkowski_to_klein: confocality identity failed");
    }
}

}  // namespace

KleinModel minkowski_to_klein(const MinkowskiEllipsoid& e, double c) {
    if (!(c > 0))
        throw Error(ErrorCode::BadParameter, "boundary shift c must be positive");
    const double a0 = e.a[0];
    std::vector<double> b;
    for (std::size_t i = 1; i < e.a.size(); ++i) {
        double denom = a0 - e.a[i];
        if (!(denom > 0))
            throw Error(ErrorCode::OrderingViolated, "a_0 must exceed every a_i");
        b.push_back(c * a0 / denom);
    }
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        if (e.a[i + 1] > e.a[i + 2] && !(b[i] > b[i + 1]))
            throw Error(ErrorCode::OrderingViolated,
                        "mapped family lost strict ordering");
    verify_confocality(e.a, b, c);

    bool ties = false;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) ties |= !(b[i] > b[i + 1]);

    KleinModel km;
    km.family = ConfocalFamily::from_doubles(b, ties);
    km.boundary = BoundaryQuadric::make(km.family, c);
    km.a0 = a0;
    km.c = c;
    return km;
}

KleinModel minkowski_to_klein_exact(const MinkowskiEllipsoid& e, const Rational& c) {
    if (!e.exact)
        throw Error(ErrorCode::BadParameter, "exact map needs exact parameters");
    if (!(c > 0))
        throw Error(ErrorCode::BadParameter, "boundary shift c must be positive");
    const Rational a0 = e.a_exact[0];
    std::vector<Rational> b;
    for (std::size_t i = 1; i < e.a_exact.size(); ++i) {
        Rational denom = a0 - e.a_exact[i];
        if (!(denom > 0))
            throw Error(ErrorCode::OrderingViolated, "a_0 must exceed every a_i");
        b.push_back(c * a0 / denom);
    }
    // exact confocality: b_i a_0 - c a_0 - b_i a_i == 0 and t-coefficient match
    for (std::size_t i = 0; i < b.size(); ++i) {
        Rational k0 = b[i] * a0 - c * a0 - b[i] * e.a_exact[i + 1];
        if (k0 != 0)
            throw Error(ErrorCode::Internal,
                        "minkowski_to_klein_exact: confocality identity failed");
    }
    bool ties = false;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) ties |= !(b[i] > b[i + 1]);

    KleinModel km;
    km.family = ConfocalFamily::from_rationals(b, ties);
    km.boundary = BoundaryQuadric::make_exact(km.family, c);
    km.a0 = to_double(a0);
    km.c = to_double(c);
    return km;
}

double model_gauge(const ConfocalFamily& family, const VectorXd& x) {
    double f = 1.0;
    for (int i = 0; i < family.d; ++i) f -= x[i] * x[i] / family.b[i];
    return f;
}

MatrixXd hyperbolic_metric_at(const ConfocalFamily& family, const VectorXd& x) {
    const int d = family.d;
    double f = model_gauge(family, x);
    if (!(f > 0))
        throw Error(ErrorCode::OutsideModel, "point is not strictly inside Lambda");
    double detB = 1.0;
    for (double bi : family.b) detB *= bi;
    VectorXd u(d);
    for (int i = 0; i < d; ++i) u[i] = x[i] / family.b[i];
    MatrixXd pi = MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) pi(i, i) = f / family.b[i];
    pi += u * u.transpose();
    pi /= detB * f * f;
    return pi;
}

}  // namespace poncelet::confocal
