#include "poncelet/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "poncelet/billiard.hpp"
#include "poncelet/cayley.hpp"
#include "poncelet/io.hpp"
#include "poncelet/potentials.hpp"
#include "poncelet/rng.hpp"

namespace poncelet::harness {

const char* command_name(Command c) {
    switch (c) {
        case Command::cayley: return "cayley";
        case Command::scan_periods: return "scan-periods";
        case Command::caustics: return "caustics";
        case Command::elliptic: return "elliptic";
        case Command::simulate: return "simulate";
        case Command::compare_models: return "compare-models";
        case Command::hierarchy_check: return "hierarchy-check";
        case Command::potential: return "potential";
    }
    return "?";
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool all_exact(const std::vector<std::string>& v) {
    if (v.empty()) return false;
    for (const auto& s : v)
        if (!is_rational_literal(s)) return false;
    return true;
}

double parse_double(const std::string& s, const std::string& key) {
    if (is_rational_literal(s)) return to_double(parse_rational(s));
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::BadParameter,
                    "parameter '" + key + "': expected a number or p/q, got '" + s + "'");
    }
}

std::vector<double> parse_doubles(const std::vector<std::string>& v,
                                  const std::string& key) {
    std::vector<double> out;
    for (const auto& s : v) out.push_back(parse_double(s, key));
    return out;
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& v,
                                      const std::string& key) {
    std::vector<Rational> out;
    for (const auto& s : v) {
        if (!is_rational_literal(s))
            throw Error(ErrorCode::BadParameter,
                        "parameter '" + key + "': '" + s + "' is not exact");
        out.push_back(parse_rational(s));
    }
    return out;
}

}  // namespace

Scenario parse_scenario(const std::vector<std::string>& args) {
    if (args.empty())
        throw Error(ErrorCode::UnknownCommand, "no command given");

    CLI::App app{"confocal billiards, periodicity conditions, and metric hierarchies"};
    app.require_subcommand(1);
    app.set_config("--config");

    Scenario s;
    std::string a_csv, mu_csv, b_csv, start_csv, dir_csv, x_csv, lambda_csv, bracket_csv;

    auto add_common = [&](CLI::App* sub) {
        sub->configurable();
        sub->add_option("--seed", s.seed, "rng seed (logged in every report)");
        sub->add_option("--output", s.output_dir, "output directory");
        sub->add_option("--format", s.format, "report | table");
    };

    CLI::App* cay = app.add_subcommand("cayley", "periodicity rank test");
    cay->add_option("--a", a_csv, "a_0,...,a_d")->required();
    cay->add_option("--mu", mu_csv, "mu_1,...,mu_{d-1}")->required();
    cay->add_option("--n", s.n, "period")->required();
    add_common(cay);

    CLI::App* scan = app.add_subcommand("scan-periods", "caustic search for period n");
    scan->add_option("--a", a_csv)->required();
    scan->add_option("--n", s.n)->required();
    scan->add_option("--bracket", bracket_csv, "lo,hi")->required();
    scan->add_option("--mu", mu_csv, "fixed caustics, 0 in the free slot (d > 2)");
    add_common(scan);

    CLI::App* cau = app.add_subcommand("caustics", "caustic parameters of a line");
    cau->add_option("--b", b_csv)->required();
    cau->add_option("--x0", x_csv)->required();
    cau->add_option("--dir", dir_csv)->required();
    add_common(cau);

    CLI::App* ell = app.add_subcommand("elliptic", "elliptic coordinates of a point");
    ell->add_option("--b", b_csv)->required();
    ell->add_option("--x", x_csv)->required();
    add_common(ell);

    CLI::App* sim = app.add_subcommand("simulate", "chord billiard trajectory");
    sim->add_option("--b", b_csv)->required();
    sim->add_option("--c", s.c)->required();
    sim->add_option("--start", start_csv)->required();
    sim->add_option("--dir", dir_csv)->required();
    sim->add_option("--bounces", s.bounces);
    add_common(sim);

    CLI::App* cmp = app.add_subcommand("compare-models",
                                       "chord vs hyperbolic-geodesic billiard");
    cmp->add_option("--b", b_csv)->required();
    cmp->add_option("--c", s.c)->required();
    cmp->add_option("--start", start_csv)->required();
    cmp->add_option("--dir", dir_csv)->required();
    cmp->add_option("--bounces", s.bounces);
    cmp->add_option("--tol", s.tol);
    add_common(cmp);

    CLI::App* hier = app.add_subcommand("hierarchy-check",
                                        "involution / conservation / reflection suite");
    hier->add_option("--b", b_csv)->required();
    hier->add_option("--c", s.c);
    hier->add_option("--k", s.ks, "hierarchy indices");
    hier->add_option("--samples", s.samples);
    hier->add_option("--tol", s.tol);
    add_common(hier);

    CLI::App* pot = app.add_subcommand("potential", "separable basis potentials");
    pot->add_option("--b", b_csv)->required();
    pot->add_option("--basis", s.basis, "V<k> or W<k>")->required();
    pot->add_option("--axis", s.axis, "1-based axis for W-kind");
    add_common(pot);

    // --config may be written anywhere; CLI11 wants it ahead of the subcommand
    std::vector<std::string> ordered;
    std::vector<std::string> hoisted;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            hoisted.push_back(args[i]);
            hoisted.push_back(args[i + 1]);
            ++i;
        } else {
            ordered.push_back(args[i]);
        }
    }
    ordered.insert(ordered.begin(), hoisted.begin(), hoisted.end());
    std::vector<std::string> reversed(ordered.rbegin(), ordered.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (app.get_subcommands().empty())
            throw Error(ErrorCode::UnknownCommand, e.what());
        throw Error(ErrorCode::BadParameter, e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    if (name == "cayley") s.command = Command::cayley;
    else if (name == "scan-periods") s.command = Command::scan_periods;
    else if (name == "caustics") s.command = Command::caustics;
    else if (name == "elliptic") s.command = Command::elliptic;
    else if (name == "simulate") s.command = Command::simulate;
    else if (name == "compare-models") s.command = Command::compare_models;
    else if (name == "hierarchy-check") s.command = Command::hierarchy_check;
    else if (name == "potential") s.command = Command::potential;

    s.a = split_csv(a_csv);
    s.mu = split_csv(mu_csv);
    s.b = split_csv(b_csv);
    s.start = split_csv(start_csv);
    s.dir = split_csv(dir_csv);
    s.x = split_csv(x_csv);
    s.lambda = split_csv(lambda_csv);
    if (!bracket_csv.empty()) {
        auto parts = split_csv(bracket_csv);
        if (parts.size() != 2)
            throw Error(ErrorCode::BadParameter, "bracket must be 'lo,hi'");
        s.bracket_lo = parse_double(parts[0], "bracket");
        s.bracket_hi = parse_double(parts[1], "bracket");
        s.has_bracket = true;
    }

    if ((s.command == Command::cayley || s.command == Command::scan_periods) && s.n < 1)
        throw Error(ErrorCode::BadParameter, "n must be >= 1");
    if (s.bounces < 1)
        throw Error(ErrorCode::BadParameter, "bounces must be >= 1");
    if (s.format != "report" && s.format != "table")
        throw Error(ErrorCode::BadParameter, "format must be 'report' or 'table'");

    // arithmetic mode: exact iff every numeric input is an exact literal
    std::vector<std::string> numerics;
    for (const auto* vec : {&s.a, &s.mu, &s.b, &s.start, &s.dir, &s.x})
        numerics.insert(numerics.end(), vec->begin(), vec->end());
    if (!s.c.empty()) numerics.push_back(s.c);
    s.exact_mode = !numerics.empty() &&
                   std::all_of(numerics.begin(), numerics.end(), is_rational_literal);
    return s;
}

namespace {

using confocal::BoundaryQuadric;
using confocal::ConfocalFamily;
using confocal::MinkowskiEllipsoid;
using nlohmann::json;

ConfocalFamily family_from_params(const std::vector<std::string>& b) {
    if (all_exact(b)) return ConfocalFamily::from_rationals(parse_rationals(b, "b"));
    return ConfocalFamily::from_doubles(parse_doubles(b, "b"));
}

Eigen::VectorXd vector_from(const std::vector<std::string>& v, const std::string& key,
                            int expect) {
    if (static_cast<int>(v.size()) != expect)
        throw Error(ErrorCode::BadParameter,
                    "parameter '" + key + "' needs " + std::to_string(expect) +
                        " components");
    Eigen::VectorXd out(expect);
    auto d = parse_doubles(v, key);
    for (int i = 0; i < expect; ++i) out[i] = d[i];
    return out;
}

json base_doc(const Scenario& s) {
    json j;
    j["schema"] = "poncelet/report-v1";
    j["command"] = command_name(s.command);
    j["mode"] = s.exact_mode ? "exact" : "float";
    j["seed"] = s.seed;
    return j;
}

// interior point at relative radius rho in direction u
Eigen::VectorXd interior_point(const confocal::ConfocalFamily& fam,
                               const Eigen::VectorXd& u, double rho) {
    Eigen::VectorXd x(fam.d);
    for (int i = 0; i < fam.d; ++i) x[i] = rho * std::sqrt(fam.b[i]) * u[i];
    return x;
}

Report run_cayley(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    MinkowskiEllipsoid e =
        all_exact(s.a) && all_exact(s.mu)
            ? MinkowskiEllipsoid::from_rationals(parse_rationals(s.a, "a"),
                                                 parse_rationals(s.mu, "mu"))
            : MinkowskiEllipsoid::from_doubles(parse_doubles(s.a, "a"),
                                               parse_doubles(s.mu, "mu"));
    cayley::PeriodicityVerdict v = cayley::cayley_condition(e, s.n);
    r.doc["verdict"] = io::verdict_to_json(v);
    if (v.degeneracy != cayley::Degeneracy::case_i && s.n >= e.dim())
        r.doc["indicator"] = cayley::period_indicator(e, s.n);
    if (!v.rank_tested && s.n < e.dim()) r.doc["reason"] = "n<d";
    if (e.exact && v.rank_tested) {
        std::vector<Rational> roots = e.a_exact;
        roots.insert(roots.end(), e.mu_exact.begin(), e.mu_exact.end());
        r.files["series.txt"] =
            io::series_dump(sqrt_series(poly_from_roots(roots), 2 * s.n - 1));
    }
    return r;
}

Report run_scan_periods(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    if (!s.has_bracket)
        throw Error(ErrorCode::BadParameter, "scan-periods needs --bracket");
    cayley::CausticSearchOptions opt;
    if (!s.mu.empty()) {
        opt.fixed_mu = parse_doubles(s.mu, "mu");
        for (std::size_t i = 0; i < opt.fixed_mu.size(); ++i)
            if (opt.fixed_mu[i] == 0.0) opt.free_index = static_cast<int>(i);
    }
    auto witnesses = cayley::find_periodic_caustic(parse_doubles(s.a, "a"), s.n,
                                                   s.bracket_lo, s.bracket_hi, opt);
    json arr = json::array();
    for (const auto& w : witnesses) {
        json jw;
        jw["mu"] = w.mu;
        jw["indicator"] = w.indicator;
        jw["closure_residual"] = w.closure_residual;
        jw["verified"] = w.closure_verified;
        arr.push_back(jw);
    }
    r.doc["witnesses"] = arr;
    return r;
}

Report run_caustics(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    ConfocalFamily fam = family_from_params(s.b);
    Eigen::VectorXd x0 = vector_from(s.x, "x0", fam.d);
    Eigen::VectorXd dir = vector_from(s.dir, "dir", fam.d);
    confocal::CausticSet cs = confocal::line_caustics(fam, x0, dir);
    r.doc["caustics"] = cs.params;
    r.doc["degenerate_flags"] = cs.degenerate_flags;
    if (fam.exact && all_exact(s.x) && all_exact(s.dir)) {
        QVector poly = confocal::caustic_polynomial_exact(
            fam.b_exact, parse_rationals(s.x, "x0"), parse_rationals(s.dir, "dir"));
        json coeffs = json::array();
        for (const auto& c : poly) coeffs.push_back(to_string(c));
        r.doc["monic_polynomial"] = coeffs;
    }
    return r;
}

Report run_elliptic(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    ConfocalFamily fam = family_from_params(s.b);
    Eigen::VectorXd x = vector_from(s.x, "x", fam.d);
    confocal::EllipticCoords ec = confocal::to_elliptic(fam, x);
    r.doc["lambda"] = std::vector<double>(ec.lambda.data(), ec.lambda.data() + fam.d);
    r.doc["degenerate"] = ec.degenerate;
    r.doc["degenerate_flags"] = ec.degenerate_flags;
    return r;
}

Report run_simulate(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    ConfocalFamily fam = family_from_params(s.b);
    BoundaryQuadric boundary = BoundaryQuadric::make(fam, parse_double(s.c, "c"));
    Eigen::VectorXd x0 = vector_from(s.start, "start", fam.d);
    Eigen::VectorXd dir = vector_from(s.dir, "dir", fam.d);
    billiard::Trajectory tr = billiard::trace_chords(boundary, x0, dir, s.bounces);
    r.doc["summary"] = io::trajectory_summary(tr);
    r.table = io::trajectory_table(tr);
    return r;
}

Report run_compare_models(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    ConfocalFamily fam = family_from_params(s.b);
    BoundaryQuadric boundary = BoundaryQuadric::make(fam, parse_double(s.c, "c"));
    Eigen::VectorXd x0 = vector_from(s.start, "start", fam.d);
    Eigen::VectorXd dir = vector_from(s.dir, "dir", fam.d);

    billiard::Trajectory chords = billiard::trace_chords(boundary, x0, dir, s.bounces);
    auto metric = hierarchy::make_hierarchy_metric(fam, 0, hierarchy::Branch::hyperbolic);
    billiard::FlowOptions opt;
    opt.tol = s.tol;
    billiard::Trajectory geo =
        billiard::trace_geodesic_billiard(boundary, metric, x0, dir, s.bounces, opt);

    double max_dev = 0, max_bounce_delta = 0;
    for (std::size_t k = 0; k < geo.arcs.size() && k < chords.bounces.size(); ++k) {
        Eigen::VectorXd a = k == 0 ? x0 : chords.bounces[k - 1].x;
        Eigen::VectorXd b = chords.bounces[k].x;
        max_dev = std::max(max_dev, billiard::max_distance_to_segment(geo.arcs[k], a, b));
        max_bounce_delta =
            std::max(max_bounce_delta, (geo.bounces[k].x - chords.bounces[k].x).norm());
    }
    r.doc["max_point_deviation"] = max_dev;
    r.doc["max_bounce_delta"] = max_bounce_delta;
    r.doc["energy_drift"] = geo.max_energy_drift;
    r.doc["bounces"] = geo.bounces.size();
    return r;
}

Report run_hierarchy_check(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    ConfocalFamily fam = family_from_params(s.b);
    double c = s.c.empty() ? fam.b.back() / 2 : parse_double(s.c, "c");
    BoundaryQuadric boundary = BoundaryQuadric::make(fam, c);
    const int d = fam.d;
    Rng rng(s.seed);

    json rows = json::array();
    for (int k : s.ks) {
        hierarchy::HierarchyContext ctx{fam, k};
        double max_bracket = 0, max_refl = 0;
        // involution over random interior states
        for (int t = 0; t < s.samples; ++t) {
            Eigen::VectorXd u = rng.unit_vector(d);
            double rho = 0.9 * std::pow(rng.uniform01(), 1.0 / d);
            Eigen::VectorXd x = interior_point(fam, u, rho);
            Eigen::VectorXd p = rng.unit_vector(d) * (0.5 + rng.uniform01());
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) {
                    hierarchy::QuadraticIntegral fi(ctx, i), fj(ctx, j);
                    max_bracket = std::max(
                        max_bracket, std::abs(hierarchy::poisson_bracket(fi, fj, x, p)));
                }
        }
        // reflection invariance at random boundary states
        auto metric = hierarchy::make_hierarchy_metric(fam, k, hierarchy::Branch::euclidean);
        for (int t = 0; t < s.samples; ++t) {
            Eigen::VectorXd u = rng.unit_vector(d);
            Eigen::VectorXd xb = billiard::boundary_point(boundary, u);
            Eigen::VectorXd p = rng.unit_vector(d);
            try {
                Eigen::VectorXd p_out = billiard::reflect(boundary, *metric, xb, p);
                for (int i = 0; i < d; ++i) {
                    double before = hierarchy::integral_J(ctx, xb, p, i);
                    double after = hierarchy::integral_J(ctx, xb, p_out, i);
                    max_refl = std::max(max_refl,
                                        std::abs(after - before) /
                                            std::max(1.0, std::abs(before)));
                }
            } catch (const Error&) {
                continue;  // grazing sample
            }
        }
        // conservation along geodesics of g_k; flows that reach the model
        // boundary in finite time are resampled
        double max_drift = 0;
        int flows = 0;
        for (int attempt = 0; attempt < 20 && flows < 2; ++attempt) {
            Eigen::VectorXd x0 = interior_point(fam, rng.unit_vector(d), 0.4);
            Eigen::VectorXd p0 = rng.unit_vector(d);
            billiard::PhasePoint start{x0, p0};
            billiard::FlowOptions fopt;
            fopt.tol = s.tol;
            std::vector<billiard::PathSample> path;
            try {
                path = billiard::geodesic_flow(*metric, start, 1.0, fopt);
            } catch (const Error&) {
                continue;
            }
            ++flows;
            std::vector<double> j0(d);
            for (int i = 0; i < d; ++i) j0[i] = hierarchy::integral_J(ctx, x0, p0, i);
            for (const auto& ps : path)
                for (int i = 0; i < d; ++i) {
                    double ji = hierarchy::integral_J(ctx, ps.x, ps.p, i);
                    max_drift = std::max(
                        max_drift,
                        std::abs(ji - j0[i]) / std::max(1.0, std::abs(j0[i])));
                }
        }
        json row;
        row["k"] = k;
        row["max_involution_residual"] = max_bracket;
        row["max_reflection_residual"] = max_refl;
        row["max_conservation_drift"] = max_drift;
        rows.push_back(row);
    }
    // adjugate closed form (corrected dyad) against the recursion
    double closed_form_dev = 0;
    for (int t2 = 0; t2 < 32; ++t2) {
        Eigen::VectorXd x = interior_point(fam, rng.unit_vector(d), 0.8);
        hierarchy::STensors st = hierarchy::char_tensors(fam, x);
        for (double alpha : {0.5, 1.5}) {
            Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
            double ap = 1;
            for (int mdx = 0; mdx < d; ++mdx) {
                sum += ap * st.S[mdx];
                ap *= alpha;
            }
            Eigen::MatrixXd closed = hierarchy::closed_form_adjugate_at(fam, x, alpha);
            closed_form_dev =
                std::max(closed_form_dev, (sum - closed).norm() / closed.norm());
        }
    }
    r.doc["results"] = rows;
    r.doc["samples"] = s.samples;
    r.doc["closed_form_adjugate_max_deviation"] = closed_form_dev;
    r.doc["closed_form_adjugate_matches"] = closed_form_dev < 1e-10;
    std::ostringstream table;
    table << "k\tinvolution\treflection\tconservation\n";
    for (const auto& row : rows)
        table << row["k"] << '\t' << row["max_involution_residual"].get<double>() << '\t'
              << row["max_reflection_residual"].get<double>() << '\t'
              << row["max_conservation_drift"].get<double>() << '\n';
    r.table = table.str();
    return r;
}

Report run_potential(const Scenario& s) {
    Report r;
    r.doc = base_doc(s);
    ConfocalFamily fam = family_from_params(s.b);
    if (s.basis.size() < 2 || (s.basis[0] != 'V' && s.basis[0] != 'W'))
        throw Error(ErrorCode::BadParameter, "basis must look like V3 or W2");
    potential::BasisSpec spec;
    spec.kind = s.basis[0] == 'V' ? potential::BasisSpec::Kind::V
                                  : potential::BasisSpec::Kind::W;
    spec.k = std::stoi(s.basis.substr(1));
    spec.axis = s.axis - 1;
    potential::LaurentPolynomial v = potential::basis_potential(spec, fam);
    r.doc["basis"] = s.basis;
    r.doc["pretty"] = v.pretty();
    r.doc["terms"] = v.serialize();
    bool zero = potential::is_separable(v, fam);
    r.doc["residual"] = zero ? "zero (exact)" : "NONZERO";
    r.doc["recurrence"] = potential::recurrence_check(v, fam).satisfied;
    return r;
}

}  // namespace

Report execute(const Scenario& s) {
    switch (s.command) {
        case Command::cayley: return run_cayley(s);
        case Command::scan_periods: return run_scan_periods(s);
        case Command::caustics: return run_caustics(s);
        case Command::elliptic: return run_elliptic(s);
        case Command::simulate: return run_simulate(s);
        case Command::compare_models: return run_compare_models(s);
        case Command::hierarchy_check: return run_hierarchy_check(s);
        case Command::potential: return run_potential(s);
    }
    throw Error(ErrorCode::UnknownCommand, "unhandled command");
}

void emit_report(const Report& r, const Scenario& s) {
    std::string dir = s.output_dir;
    if (dir.empty()) {
        const char* env = std::getenv("PONCELET_OUT");
        if (env) dir = env;
    }
    if (dir.empty()) {
        std::cout << r.doc.dump(2) << std::endl;
        if (s.format == "table" && !r.table.empty()) std::cout << r.table;
        return;
    }
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/report.json");
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + dir + "/report.json");
        out << r.doc.dump(2) << '\n';
    }
    if (!r.table.empty()) {
        std::ofstream out(dir + "/table.tsv");
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + dir + "/table.tsv");
        out << r.table;
    }
    for (const auto& [name, content] : r.files) {
        std::ofstream out(dir + "/" + name);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + dir + "/" + name);
        out << content;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        Scenario s = parse_scenario(args);
        Report r = execute(s);
        emit_report(r, s);
        return 0;
    } catch (const Error& e) {
        nlohmann::json err;
        err["error"] = error_name(e.code());
        err["message"] = e.what();
        err["exit_code"] = e.exit_code();
        std::cerr << err.dump(2) << std::endl;
        return e.exit_code();
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = "Internal";
        err["message"] = e.what();
        std::cerr << err.dump(2) << std::endl;
        return static_cast<int>(ErrorCode::Internal);
    }
}

}  // namespace poncelet::harness
