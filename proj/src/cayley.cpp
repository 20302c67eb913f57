#include "poncelet/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "poncelet/billiard.hpp"

namespace poncelet::cayley {

const char* degeneracy_name(Degeneracy d) {
    switch (d) {
        case Degeneracy::none: return "none";
        case Degeneracy::case_i: return "case_i";
        case Degeneracy::case_ii: return "case_ii";
        case Degeneracy::case_iii: return "case_iii";
    }
    return "?";
}

namespace {

// Exact degeneracy classification. Case (i) wins: the caustic degenerates
// into a hyperplane and the test must be re-run one dimension lower.
Degeneracy classify(const std::vector<Rational>& a, const std::vector<Rational>& mu) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (const auto& m : mu)
            if (a[i] == m) return Degeneracy::case_i;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] == a[j]) return Degeneracy::case_ii;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = i + 1; j < mu.size(); ++j)
            if (mu[i] == mu[j]) return Degeneracy::case_iii;
    return Degeneracy::none;
}

std::vector<Rational> exact_parameters(const MinkowskiEllipsoid& e, bool mu_part) {
    if (e.exact) return mu_part ? e.mu_exact : e.a_exact;
    // float inputs: snap to exact doubles (dyadic rationals); ties within
    // 1e-12 relative are treated as exact ties first
    const std::vector<double>& src = mu_part ? e.mu : e.a;
    std::vector<Rational> out;
    for (double v : src) {
        Rational q(v);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

void snap_float_ties(std::vector<Rational>& a, std::vector<Rational>& mu) {
    auto snap = [](std::vector<Rational>& v, std::vector<Rational>& w) {
        for (auto& x : v)
            for (auto& y : w) {
                if (x == y) continue;
                double dx = to_double(x), dy = to_double(y);
                double scale = std::max({std::abs(dx), std::abs(dy), 1.0});
                if (std::abs(dx - dy) < 1e-12 * scale) y = x;
            }
    };
    snap(a, a);
    snap(mu, mu);
    snap(a, mu);
}

}  // namespace

SpectralCurveSpec SpectralCurveSpec::from_ellipsoid(const MinkowskiEllipsoid& e) {
    std::vector<Rational> a = exact_parameters(e, false);
    std::vector<Rational> mu = exact_parameters(e, true);
    if (!e.exact) snap_float_ties(a, mu);
    for (const auto& q : a)
        if (q == 0) throw Error(ErrorCode::ZeroParameter, "a_i = 0");
    for (const auto& q : mu)
        if (q == 0) throw Error(ErrorCode::ZeroParameter, "mu_j = 0");

    SpectralCurveSpec spec;
    spec.roots = a;
    spec.roots.insert(spec.roots.end(), mu.begin(), mu.end());
    spec.genus = static_cast<int>(a.size()) - 2;  // g = d - 1
    spec.degeneracy = classify(a, mu);

    std::map<Rational, int> mult;
    for (const auto& r : spec.roots) mult[r] += 1;
    for (const auto& [root, m] : mult) {
        spec.distinct_roots.push_back(root);
        spec.multiplicity.push_back(m);
        // case (i) never reaches the rank test, so its multiplicities are
        // irrelevant; elsewhere only ordinary double points are handled
        if (m >= 3 && spec.degeneracy != Degeneracy::case_i)
            throw Error(ErrorCode::UnsupportedSingularity,
                        "root '" + to_string(root) +
                            "' has multiplicity " + std::to_string(m) +
                            "; only ordinary double points are handled");
    }
    return spec;
}

QMatrix hankel_matrix(const RationalSeries& series, int n, int d) {
    if (n < d)
        throw Error(ErrorCode::BadParameter, "hankel matrix needs n >= d");
    if (series.order < 2 * n - 1)
        throw Error(ErrorCode::InsufficientOrder,
                    "series order must reach 2n-1 = " + std::to_string(2 * n - 1));
    QMatrix m(n - 1, QVector(n - d + 1));
    for (int r = 1; r <= n - 1; ++r)
        for (int j = 0; j <= n - d; ++j)
            m[r - 1][j] = series.coeffs[n + r - j];
    return m;
}

Eigen::MatrixXd hankel_matrix_f(const SqrtSeries<double>& series, int n, int d) {
    if (n < d)
        throw Error(ErrorCode::BadParameter, "hankel matrix needs n >= d");
    if (series.order < 2 * n - 1)
        throw Error(ErrorCode::InsufficientOrder, "series order too small");
    Eigen::MatrixXd m(n - 1, n - d + 1);
    for (int r = 1; r <= n - 1; ++r)
        for (int j = 0; j <= n - d; ++j)
            m(r - 1, j) = series.coeffs[n + r - j];
    return m;
}

namespace {

PeriodicityVerdict make_base_verdict(const MinkowskiEllipsoid& e, int n,
                                     Degeneracy deg) {
    PeriodicityVerdict v;
    v.n = n;
    v.d = e.dim();
    v.threshold = n - v.d + 1;
    v.degeneracy = deg;
    return v;
}

}  // namespace

PeriodicityVerdict cayley_condition(const MinkowskiEllipsoid& e, int n) {
    if (n < 1)
        throw Error(ErrorCode::BadParameter, "period must be >= 1");
    SpectralCurveSpec spec = SpectralCurveSpec::from_ellipsoid(e);
    PeriodicityVerdict v = make_base_verdict(e, n, spec.degeneracy);

    if (spec.degeneracy == Degeneracy::case_i) {
        v.note = "a_i = mu_j: the caustic degenerates into a hyperplane; "
                 "re-run the criterion at dimension d-1";
        return v;
    }
    if (n < e.dim()) {
        v.note = "no trajectories with period below d";
        return v;
    }
    RationalSeries series = sqrt_series(poly_from_roots(spec.roots), 2 * n - 1);
    QMatrix m = hankel_matrix(series, n, e.dim());
    v.rank = rank_exact(m);
    v.rank_tested = true;
    v.periodic = v.rank < v.threshold;
    return v;
}

PeriodicityVerdict cayley_condition_normalized(const MinkowskiEllipsoid& e, int n) {
    if (n < 1)
        throw Error(ErrorCode::BadParameter, "period must be >= 1");
    SpectralCurveSpec spec = SpectralCurveSpec::from_ellipsoid(e);
    PeriodicityVerdict v = make_base_verdict(e, n, spec.degeneracy);
    if (spec.degeneracy == Degeneracy::case_i) {
        v.note = "case (i): undefined at this dimension";
        return v;
    }

    // P = S^2 * P~ with P~ squarefree; every stripped root is a node.
    std::vector<Rational> simple, nodes;
    for (std::size_t i = 0; i < spec.distinct_roots.size(); ++i) {
        if (spec.multiplicity[i] == 1)
            simple.push_back(spec.distinct_roots[i]);
        else
            nodes.push_back(spec.distinct_roots[i]);
    }
    if (simple.size() < 2)
        throw Error(ErrorCode::UnsupportedSingularity,
                    "normalized curve degenerates (fewer than two simple roots)");
    int g_tilde = static_cast<int>(simple.size()) / 2 - 1;
    if (n <= g_tilde) {
        v.note = "n <= genus of the normalized curve";
        return v;
    }

    RationalSeries tilde = sqrt_series(poly_from_roots(simple), 2 * n);
    const int cols = 1 + (n - g_tilde);
    QMatrix m;
    for (int j = 0; j < n; ++j) {
        QVector row(cols, Rational(0));
        if (j == 0) row[0] = 1;
        for (int k = 1; k <= n - g_tilde; ++k)
            row[k] = tilde.coeffs[g_tilde + k + j];
        m.push_back(std::move(row));
    }
    for (const auto& s : nodes) {
        QVector row(cols, Rational(0));
        Rational pw = 1;
        for (int k = n - g_tilde; k >= 1; --k) {
            row[k] = pw;
            pw *= s;
        }
        m.push_back(std::move(row));
    }
    v.rank = rank_exact(m);
    v.rank_tested = true;
    v.threshold = cols;
    v.periodic = v.rank < cols;
    v.note = "normalized-curve route";
    return v;
}

double period_indicator(const std::vector<double>& a, const std::vector<double>& mu,
                        int n) {
    const int d = static_cast<int>(a.size()) - 1;
    if (n < d)
        throw Error(ErrorCode::BadParameter, "period indicator needs n >= d");
    for (double v : a)
        if (v == 0) throw Error(ErrorCode::ZeroParameter, "a_i = 0");
    for (double v : mu)
        if (v == 0) throw Error(ErrorCode::ZeroParameter, "mu_j = 0");
    std::vector<double> roots = a;
    roots.insert(roots.end(), mu.begin(), mu.end());
    SqrtSeries<double> series = sqrt_series(poly_from_roots(roots), 2 * n - 1);
    Eigen::MatrixXd m = hankel_matrix_f(series, n, d);
    if (m.cols() == 1) return m.norm() / std::sqrt(static_cast<double>(m.rows()));
    for (int j = 0; j < m.cols(); ++j) {
        double nrm = m.col(j).norm();
        if (nrm > 0) m.col(j) /= nrm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double period_indicator(const MinkowskiEllipsoid& e, int n) {
    return period_indicator(e.a, e.mu, n);
}

namespace {

// Closure re-verification: map to the Klein model, launch a chord tangent to
// the image caustic, and measure recurrence after n bounces.
double verify_closure(const std::vector<double>& a, const std::vector<double>& mu,
                      int n, double c) {
    MinkowskiEllipsoid e = MinkowskiEllipsoid::from_doubles(a, mu);
    confocal::KleinModel km = confocal::minkowski_to_klein(e, c);
    if (km.family.d != 2) return std::numeric_limits<double>::infinity();
    double t_star = km.caustic_shift(mu[0]);
    double best = std::numeric_limits<double>::infinity();
    for (double theta : {0.37, 1.11, 1.93, 2.71, 4.05, 5.33}) {
        Eigen::VectorXd u(2);
        u << std::cos(theta), std::sin(theta);
        Eigen::VectorXd x0 = billiard::boundary_point(km.boundary, u);
        for (const auto& v0 : billiard::tangent_directions(km.boundary, x0, t_star)) {
            try {
                billiard::Trajectory tr = billiard::trace_chords(km.boundary, x0, v0, n);
                best = std::min(best, billiard::closure_residual(tr, n));
            } catch (const Error&) {
                continue;  // grazing or degenerate launches just skip
            }
        }
    }
    return best;
}

}  // namespace

std::vector<CausticWitness> find_periodic_caustic(const std::vector<double>& a, int n,
                                                  double lo, double hi,
                                                  const CausticSearchOptions& opt) {
    const int d = static_cast<int>(a.size()) - 1;
    if (d < 2)
        throw Error(ErrorCode::BadParameter, "need a_0..a_d with d >= 2");
    std::vector<double> mu = opt.fixed_mu;
    if (mu.empty()) {
        if (d != 2)
            throw Error(ErrorCode::BadParameter,
                        "d > 2 needs fixed_mu with one free slot");
        mu.assign(1, 0.0);
    }
    if (static_cast<int>(mu.size()) != d - 1)
        throw Error(ErrorCode::BadParameter, "fixed_mu must have d-1 entries");
    if (!(lo < hi))
        throw Error(ErrorCode::BadParameter, "empty bracket");

    double scale = std::max(1.0, std::abs(a[0]));
    auto in_degenerate_window = [&](double m) {
        if (std::abs(m) < opt.degeneracy_window * scale) return true;
        for (double ai : a)
            if (std::abs(m - ai) < opt.degeneracy_window * scale) return true;
        for (int j = 0; j < d - 1; ++j)
            if (j != opt.free_index &&
                std::abs(m - mu[j]) < opt.degeneracy_window * scale)
                return true;
        return false;
    };
    auto indicator_at = [&](double m) {
        std::vector<double> mv = mu;
        mv[opt.free_index] = m;
        return period_indicator(a, mv, n);
    };

    // grid scan for local minima
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i <= opt.grid; ++i) {
        double m = lo + (hi - lo) * i / opt.grid;
        if (in_degenerate_window(m)) continue;
        grid.push_back({m, indicator_at(m)});
    }
    if (grid.size() < 3)
        throw Error(ErrorCode::NoRootInBracket,
                    "bracket lies inside a degenerate region");

    std::vector<CausticWitness> out;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(grid[i].second <= grid[i - 1].second &&
              grid[i].second <= grid[i + 1].second))
            continue;
        // golden-section refinement of the bracketed minimum
        double a1 = grid[i - 1].first, b1 = grid[i + 1].first;
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = b1 - kInvPhi * (b1 - a1), x2 = a1 + kInvPhi * (b1 - a1);
        double f1 = indicator_at(x1), f2 = indicator_at(x2);
        while (b1 - a1 > 1e-13 * std::max(1.0, std::abs(b1))) {
            if (f1 < f2) {
                b1 = x2;
                x2 = x1;
                f2 = f1;
                x1 = b1 - kInvPhi * (b1 - a1);
                f1 = indicator_at(x1);
            } else {
                a1 = x1;
                x1 = x2;
                f1 = f2;
                x2 = a1 + kInvPhi * (b1 - a1);
                f2 = indicator_at(x2);
            }
        }
        CausticWitness w;
        w.mu = 0.5 * (a1 + b1);
        w.indicator = indicator_at(w.mu);
        if (w.indicator > opt.indicator_threshold) continue;
        if (in_degenerate_window(w.mu)) continue;
        bool dup = false;
        for (const auto& prev : out)
            if (std::abs(prev.mu - w.mu) < 1e-9 * scale) dup = true;
        if (dup) continue;

        std::vector<double> mv = mu;
        mv[opt.free_index] = w.mu;
        if (d == 2) {
            w.closure_residual = verify_closure(a, mv, n, opt.klein_c);
            w.closure_verified = w.closure_residual < opt.closure_eps;
        } else {
            w.closure_residual = std::numeric_limits<double>::infinity();
            w.closure_verified = false;
        }
        out.push_back(w);
    }
    if (out.empty())
        throw Error(ErrorCode::NoRootInBracket,
                    "no indicator root in the bracket");
    std::sort(out.begin(), out.end(),
              [](const CausticWitness& p, const CausticWitness& q) { return p.mu < q.mu; });
    return out;
}

}  // namespace poncelet::cayley
