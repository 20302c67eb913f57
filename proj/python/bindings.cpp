// pybind11 surface over the main operations: confocal geometry, the
// periodicity test and caustic search, chord billiards with closure, the
// hierarchy checks, and the separable-potential engine. Exact rationals
// cross the boundary as "p/q" strings.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poncelet/billiard.hpp"
#include "poncelet/cayley.hpp"
#include "poncelet/confocal.hpp"
#include "poncelet/hierarchy.hpp"
#include "poncelet/io.hpp"
#include "poncelet/potentials.hpp"
#include "poncelet/scenario.hpp"

namespace py = pybind11;
using namespace poncelet;

namespace {

confocal::ConfocalFamily family_from(const std::vector<std::string>& b) {
    bool exact = !b.empty();
    for (const auto& s : b) exact &= is_rational_literal(s);
    if (exact) {
        std::vector<Rational> q;
        for (const auto& s : b) q.push_back(parse_rational(s));
        return confocal::ConfocalFamily::from_rationals(q);
    }
    std::vector<double> v;
    for (const auto& s : b) v.push_back(std::stod(s));
    return confocal::ConfocalFamily::from_doubles(v);
}

confocal::MinkowskiEllipsoid ellipsoid_from(const std::vector<std::string>& a,
                                            const std::vector<std::string>& mu) {
    bool exact = true;
    for (const auto& s : a) exact &= is_rational_literal(s);
    for (const auto& s : mu) exact &= is_rational_literal(s);
    if (exact) {
        std::vector<Rational> aq, mq;
        for (const auto& s : a) aq.push_back(parse_rational(s));
        for (const auto& s : mu) mq.push_back(parse_rational(s));
        return confocal::MinkowskiEllipsoid::from_rationals(aq, mq);
    }
    std::vector<double> av, mv;
    for (const auto& s : a) av.push_back(std::stod(s));
    for (const auto& s : mu) mv.push_back(std::stod(s));
    return confocal::MinkowskiEllipsoid::from_doubles(av, mv);
}

potential::BasisSpec basis_spec(const std::string& name, int axis) {
    if (name.size() < 2 || (name[0] != 'V' && name[0] != 'W'))
        throw Error(ErrorCode::BadParameter, "basis must look like V3 or W2");
    potential::BasisSpec spec;
    spec.kind = name[0] == 'V' ? potential::BasisSpec::Kind::V
                               : potential::BasisSpec::Kind::W;
    spec.k = std::stoi(name.substr(1));
    spec.axis = axis;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Confocal billiards, Cayley-type periodicity conditions, and "
              "geodesically equivalent metric hierarchies.";

    py::register_exception<Error>(m, "PonceletError");

    m.def(
        "to_elliptic",
        [](const std::vector<std::string>& b, const Eigen::VectorXd& x) {
            auto ec = confocal::to_elliptic(family_from(b), x);
            py::dict out;
            out["lam"] = ec.lambda;
            out["degenerate"] = ec.degenerate;
            out["degenerate_flags"] = ec.degenerate_flags;
            return out;
        },
        py::arg("b"), py::arg("x"),
        "Elliptic coordinates of a point for the family b (entries are 'p/q' "
        "or plain number strings).");

    m.def(
        "from_elliptic",
        [](const std::vector<std::string>& b, const Eigen::VectorXd& lam,
           const std::vector<int>& signs) {
            confocal::EllipticCoords ec;
            ec.lambda = lam;
            return confocal::from_elliptic(family_from(b), ec, signs);
        },
        py::arg("b"), py::arg("lam"), py::arg("signs"));

    m.def(
        "line_caustics",
        [](const std::vector<std::string>& b, const Eigen::VectorXd& x0,
           const Eigen::VectorXd& v) {
            auto cs = confocal::line_caustics(family_from(b), x0, v);
            py::dict out;
            out["params"] = cs.params;
            out["degenerate_flags"] = cs.degenerate_flags;
            return out;
        },
        py::arg("b"), py::arg("x0"), py::arg("dir"));

    m.def(
        "minkowski_to_klein",
        [](const std::vector<std::string>& a, const std::vector<std::string>& mu,
           double c) {
            auto e = ellipsoid_from(a, mu);
            auto km = confocal::minkowski_to_klein(e, c);
            py::dict out;
            out["b"] = km.family.b;
            out["c"] = km.c;
            std::vector<double> shifts;
            for (double m_ : e.mu) shifts.push_back(km.caustic_shift(m_));
            out["caustic_shifts"] = shifts;
            return out;
        },
        py::arg("a"), py::arg("mu"), py::arg("c") = 1.0);

    m.def(
        "hyperbolic_metric_at",
        [](const std::vector<std::string>& b, const Eigen::VectorXd& x) {
            return confocal::hyperbolic_metric_at(family_from(b), x);
        },
        py::arg("b"), py::arg("x"));

    m.def(
        "sqrt_series",
        [](const std::vector<std::string>& roots, int order) {
            std::vector<Rational> r;
            for (const auto& s : roots) r.push_back(parse_rational(s));
            auto series = sqrt_series(poly_from_roots(r), order);
            std::vector<std::string> coeffs;
            for (const auto& c : series.coeffs) coeffs.push_back(to_string(c));
            py::dict out;
            out["coeffs"] = coeffs;
            out["b0_squared"] = to_string(series.b0_squared);
            return out;
        },
        py::arg("roots"), py::arg("order"),
        "Exact series sqrt(P/P(0)) for P with the given rational roots.");

    m.def(
        "cayley_condition",
        [](const std::vector<std::string>& a, const std::vector<std::string>& mu,
           int n) {
            auto v = cayley::cayley_condition(ellipsoid_from(a, mu), n);
            py::dict out;
            out["periodic"] = v.periodic;
            out["n"] = v.n;
            out["d"] = v.d;
            out["rank"] = v.rank;
            out["threshold"] = v.threshold;
            out["degeneracy"] = cayley::degeneracy_name(v.degeneracy);
            out["rank_tested"] = v.rank_tested;
            if (!v.note.empty()) out["note"] = v.note;
            return out;
        },
        py::arg("a"), py::arg("mu"), py::arg("n"));

    m.def(
        "period_indicator",
        [](const std::vector<double>& a, const std::vector<double>& mu, int n) {
            return cayley::period_indicator(a, mu, n);
        },
        py::arg("a"), py::arg("mu"), py::arg("n"));

    m.def(
        "find_periodic_caustic",
        [](const std::vector<double>& a, int n, double lo, double hi) {
            auto ws = cayley::find_periodic_caustic(a, n, lo, hi);
            py::list out;
            for (const auto& w : ws) {
                py::dict jw;
                jw["mu"] = w.mu;
                jw["indicator"] = w.indicator;
                jw["closure_residual"] = w.closure_residual;
                jw["verified"] = w.closure_verified;
                out.append(jw);
            }
            return out;
        },
        py::arg("a"), py::arg("n"), py::arg("lo"), py::arg("hi"));

    m.def(
        "trace_chords",
        [](const std::vector<std::string>& b, double c, const Eigen::VectorXd& x0,
           const Eigen::VectorXd& v0, int bounces) {
            auto q = confocal::BoundaryQuadric::make(family_from(b), c);
            auto tr = billiard::trace_chords(q, x0, v0, bounces);
            py::dict out;
            std::vector<Eigen::VectorXd> pts;
            for (const auto& bn : tr.bounces) pts.push_back(bn.x);
            out["bounces"] = pts;
            out["launch_on_boundary"] = tr.launch_on_boundary;
            if (tr.launch_on_boundary) {
                std::vector<double> res;
                for (int n = 1; n <= bounces; ++n)
                    res.push_back(billiard::closure_residual(tr, n));
                out["closure_residuals"] = res;
            }
            if (!tr.segment_caustics.empty())
                out["caustics"] = tr.segment_caustics.front().params;
            return out;
        },
        py::arg("b"), py::arg("c"), py::arg("x0"), py::arg("dir"), py::arg("bounces"));

    m.def(
        "tangent_directions",
        [](const std::vector<std::string>& b, double c, const Eigen::VectorXd& x0,
           double t_caustic) {
            auto q = confocal::BoundaryQuadric::make(family_from(b), c);
            return billiard::tangent_directions(q, x0, t_caustic);
        },
        py::arg("b"), py::arg("c"), py::arg("x0"), py::arg("t_caustic"));

    m.def(
        "integral_J",
        [](const std::vector<std::string>& b, int k, const Eigen::VectorXd& x,
           const Eigen::VectorXd& p, int i) {
            hierarchy::HierarchyContext ctx{family_from(b), k};
            return hierarchy::integral_J(ctx, x, p, i);
        },
        py::arg("b"), py::arg("k"), py::arg("x"), py::arg("p"), py::arg("i"));

    m.def(
        "poisson_bracket_J",
        [](const std::vector<std::string>& b, int k, int i, int j,
           const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
            hierarchy::HierarchyContext ctx{family_from(b), k};
            hierarchy::QuadraticIntegral fi(ctx, i), fj(ctx, j);
            return hierarchy::poisson_bracket(fi, fj, x, p);
        },
        py::arg("b"), py::arg("k"), py::arg("i"), py::arg("j"), py::arg("x"),
        py::arg("p"));

    m.def(
        "basis_potential",
        [](const std::string& name, const std::vector<std::string>& b, int axis) {
            auto fam = family_from(b);
            auto v = potential::basis_potential(basis_spec(name, axis), fam);
            py::dict out;
            out["pretty"] = v.pretty();
            out["terms"] = v.serialize();
            out["residual_zero"] = potential::is_separable(v, fam);
            return out;
        },
        py::arg("basis"), py::arg("b"), py::arg("axis") = 0);

    m.def(
        "separability_residual_zero",
        [](const std::string& terms, const std::vector<std::string>& b) {
            auto fam = family_from(b);
            auto v = potential::LaurentPolynomial::deserialize(terms, fam.d);
            return potential::is_separable(v, fam);
        },
        py::arg("laurent_terms"), py::arg("b"),
        "Terms in the line format 'i_1 ... i_d : p/q'.");

    m.def(
        "elliptic_form_eval",
        [](const std::string& name, const std::vector<std::string>& b,
           const Eigen::VectorXd& lam, int axis) {
            auto fam = family_from(b);
            return potential::elliptic_form_eval(basis_spec(name, axis), fam, lam);
        },
        py::arg("basis"), py::arg("b"), py::arg("lam"), py::arg("axis") = 0);

    m.def(
        "solve_f",
        [](const std::string& terms, const std::vector<std::string>& b, int i) {
            auto fam = family_from(b);
            auto v = potential::LaurentPolynomial::deserialize(terms, fam.d);
            auto field = potential::solve_f(fam, v, i);
            py::dict out;
            out["pretty"] = field.f.pretty();
            out["terms"] = field.f.serialize();
            return out;
        },
        py::arg("laurent_terms"), py::arg("b"), py::arg("i"));

    m.def(
        "run_scenario",
        [](const std::vector<std::string>& args) {
            harness::Scenario s = harness::parse_scenario(args);
            harness::Report r = harness::execute(s);
            py::dict out;
            out["report"] = r.doc.dump(2);
            out["table"] = r.table;
            return out;
        },
        py::arg("args"), "Run a CLI scenario in-process; returns the report JSON.");
}
