#include "poncelet/io.hpp"

#include <cmath>
#include <sstream>

namespace poncelet::io {

namespace {

json rational_or_double(bool exact, const Rational& q, double v) {
    if (exact) return to_string(q);
    return v;
}

std::vector<Rational> rationals_from(const json& arr) {
    std::vector<Rational> out;
    for (const auto& item : arr) {
        if (item.is_string())
            out.push_back(parse_rational(item.get<std::string>()));
        else
            throw Error(ErrorCode::IoError, "expected 'p/q' strings");
    }
    return out;
}

bool all_strings(const json& arr) {
    for (const auto& item : arr)
        if (!item.is_string()) return false;
    return !arr.empty();
}

}  // namespace

json family_to_json(const confocal::ConfocalFamily& f) {
    json j;
    j["schema"] = "poncelet/family-v1";
    j["d"] = f.d;
    json b = json::array();
    for (int i = 0; i < f.d; ++i)
        b.push_back(rational_or_double(f.exact, f.exact ? f.b_exact[i] : Rational(0),
                                       f.b[i]));
    j["b"] = b;
    j["exact"] = f.exact;
    return j;
}

confocal::ConfocalFamily family_from_json(const json& j) {
    const auto& b = j.at("b");
    if (all_strings(b)) return confocal::ConfocalFamily::from_rationals(rationals_from(b));
    std::vector<double> v;
    for (const auto& item : b) v.push_back(item.get<double>());
    return confocal::ConfocalFamily::from_doubles(v);
}

json minkowski_to_json(const confocal::MinkowskiEllipsoid& e) {
    json j;
    j["schema"] = "poncelet/minkowski-v1";
    j["d"] = e.dim();
    json a = json::array(), mu = json::array();
    for (std::size_t i = 0; i < e.a.size(); ++i)
        a.push_back(rational_or_double(e.exact, e.exact ? e.a_exact[i] : Rational(0),
                                       e.a[i]));
    for (std::size_t i = 0; i < e.mu.size(); ++i)
        mu.push_back(rational_or_double(e.exact, e.exact ? e.mu_exact[i] : Rational(0),
                                        e.mu[i]));
    j["a"] = a;
    j["mu"] = mu;
    j["exact"] = e.exact;
    return j;
}

confocal::MinkowskiEllipsoid minkowski_from_json(const json& j) {
    const auto& a = j.at("a");
    const auto& mu = j.at("mu");
    if (all_strings(a) && (mu.empty() || all_strings(mu)))
        return confocal::MinkowskiEllipsoid::from_rationals(rationals_from(a),
                                                            rationals_from(mu));
    std::vector<double> av, mv;
    for (const auto& item : a) av.push_back(item.get<double>());
    for (const auto& item : mu) mv.push_back(item.get<double>());
    return confocal::MinkowskiEllipsoid::from_doubles(av, mv);
}

json boundary_to_json(const confocal::BoundaryQuadric& q) {
    json j = family_to_json(q.family);
    j["schema"] = "poncelet/boundary-v1";
    if (q.c_exact)
        j["c"] = to_string(*q.c_exact);
    else
        j["c"] = q.c;
    return j;
}

confocal::BoundaryQuadric boundary_from_json(const json& j) {
    confocal::ConfocalFamily fam = family_from_json(j);
    const auto& c = j.at("c");
    if (c.is_string() && fam.exact)
        return confocal::BoundaryQuadric::make_exact(fam, parse_rational(c.get<std::string>()));
    double cv = c.is_string() ? to_double(parse_rational(c.get<std::string>()))
                              : c.get<double>();
    return confocal::BoundaryQuadric::make(fam, cv);
}

json verdict_to_json(const cayley::PeriodicityVerdict& v) {
    json j;
    j["schema"] = "poncelet/verdict-v1";
    j["n"] = v.n;
    j["d"] = v.d;
    j["periodic"] = v.periodic;
    j["rank"] = v.rank;
    j["threshold"] = v.threshold;
    j["degeneracy"] = cayley::degeneracy_name(v.degeneracy);
    j["rank_tested"] = v.rank_tested;
    j["curve_constant"] = to_string(v.curve_constant);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

std::string series_dump(const cayley::RationalSeries& s) {
    std::ostringstream os;
    for (const auto& t : s.coeffs) os << to_string(t) << '\n';
    return os.str();
}

std::string trajectory_table(const billiard::Trajectory& t) {
    std::ostringstream os;
    os.precision(17);
    const int d = static_cast<int>(t.launch_x.size());
    os << "bounce";
    for (int i = 0; i < d; ++i) os << "\tx" << i + 1;
    for (int i = 0; i < d; ++i) os << "\tp" << i + 1;
    int ncaustic = t.segment_caustics.empty()
                       ? 0
                       : static_cast<int>(t.segment_caustics[0].params.size());
    for (int i = 0; i < ncaustic; ++i) os << "\tcaustic" << i + 1;
    os << '\n';

    auto row = [&](int idx, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                   const confocal::CausticSet* cs) {
        os << idx;
        for (int i = 0; i < d; ++i) os << '\t' << x[i];
        Eigen::VectorXd ph = p.normalized();
        for (int i = 0; i < d; ++i) os << '\t' << ph[i];
        if (cs)
            for (double m : cs->params) os << '\t' << m;
        else
            for (int i = 0; i < ncaustic; ++i) os << '\t' << "nan";
        os << '\n';
    };

    row(0, t.launch_x, t.launch_p,
        t.segment_caustics.empty() ? nullptr : &t.segment_caustics[0]);
    for (std::size_t k = 0; k < t.bounces.size(); ++k) {
        const confocal::CausticSet* cs =
            (k + 1 < t.segment_caustics.size()) ? &t.segment_caustics[k + 1] : nullptr;
        row(static_cast<int>(k + 1), t.bounces[k].x, t.bounces[k].p_out, cs);
    }
    return os.str();
}

json trajectory_summary(const billiard::Trajectory& t) {
    json j;
    j["schema"] = "poncelet/trajectory-v1";
    j["metric"] = t.metric_tag;
    j["bounces"] = t.bounces.size();
    j["energy"] = t.energy;
    j["max_energy_drift"] = t.max_energy_drift;
    if (!t.segment_caustics.empty()) {
        // Chasles drift: spread of each caustic parameter along the run
        std::size_t m = t.segment_caustics[0].params.size();
        double drift = 0;
        for (std::size_t c = 0; c < m; ++c) {
            double lo = t.segment_caustics[0].params[c], hi = lo;
            for (const auto& cs : t.segment_caustics) {
                if (cs.params.size() != m) continue;
                lo = std::min(lo, cs.params[c]);
                hi = std::max(hi, cs.params[c]);
            }
            drift = std::max(drift, hi - lo);
        }
        j["caustic_drift"] = drift;
        j["caustics"] = t.segment_caustics[0].params;
    }
    if (t.launch_on_boundary && !t.bounces.empty()) {
        json res = json::array();
        for (std::size_t n = 1; n <= t.bounces.size(); ++n)
            res.push_back(billiard::closure_residual(t, static_cast<int>(n)));
        j["closure_residuals"] = res;
    }
    return j;
}

}  // namespace poncelet::io
