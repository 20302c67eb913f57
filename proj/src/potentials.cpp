#include "poncelet/potentials.hpp"

#include "poncelet/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace poncelet::potential {

namespace {

std::vector<Rational> family_rationals(const ConfocalFamily& family) {
    if (family.exact) return family.b_exact;
    std::vector<Rational> b;
    for (double v : family.b) {
        Rational q(v);
        q.canonicalize();
        b.push_back(q);
    }
    return b;
}

LaurentPolynomial x_times(const LaurentPolynomial& p, int var) {
    Exponents shift(p.nvars() == 0 ? 0 : p.nvars(), 0);
    if (p.nvars() == 0) return p;
    shift[var] = 1;
    return p.shifted(shift);
}

}  // namespace

std::vector<PairResidual> separability_residual(const LaurentPolynomial& v,
                                                const ConfocalFamily& family) {
    const int d = family.d;
    std::vector<Rational> b = family_rationals(family);
    LaurentPolynomial w = v * Rational(2) + v.euler();  // 2V + sum x_k dV/dx_k
    std::vector<PairResidual> out;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            LaurentPolynomial mixed = v.partial_derivative(i).partial_derivative(j);
            LaurentPolynomial rotational =
                x_times(w.partial_derivative(j), i) - x_times(w.partial_derivative(i), j);
            PairResidual pr;
            pr.i = i;
            pr.j = j;
            pr.residual = mixed * (b[i] - b[j]) - rotational;
            out.push_back(std::move(pr));
        }
    }
    return out;
}

bool is_separable(const LaurentPolynomial& v, const ConfocalFamily& family) {
    for (const auto& pr : separability_residual(v, family))
        if (!pr.residual.is_zero()) return false;
    return true;
}

RecurrenceReport recurrence_check(const LaurentPolynomial& v,
                                  const ConfocalFamily& family) {
    const int d = family.d;
    std::vector<Rational> b = family_rationals(family);
    RecurrenceReport rep;
    for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
            std::set<Exponents> sites;
            for (const auto& [e, c] : v.terms()) {
                sites.insert(e);
                Exponents ek = e, el = e;
                ek[k] += 2;
                el[l] += 2;
                sites.insert(ek);
                sites.insert(el);
            }
            for (const auto& idx : sites) {
                int total = 0;
                for (int ei : idx) total += ei;
                Exponents mk = idx, ml = idx;
                mk[k] -= 2;
                ml[l] -= 2;
                Rational lhs = (b[k] - b[l]) * idx[k] * idx[l] * v.coefficient(idx);
                Rational rhs = Rational(total) * (Rational(idx[l]) * v.coefficient(mk) -
                                                  Rational(idx[k]) * v.coefficient(ml));
                if (lhs != rhs) {
                    rep.satisfied = false;
                    if (!rep.first_violation)
                        rep.first_violation =
                            RecurrenceViolation{idx, k, l, lhs, rhs};
                }
            }
        }
    }
    return rep;
}

namespace {

// All even exponent vectors for the two support lattices (stored as the
// actual exponents, not half-exponents).
void enumerate_even(int nvars, int var, Exponents& cur,
                    const std::function<bool(const Exponents&)>& admit,
                    std::vector<Exponents>& out, int lo, int hi) {
    if (var == nvars) {
        if (admit(cur)) out.push_back(cur);
        return;
    }
    for (int e = lo; e <= hi; e += 2) {
        cur[var] = e;
        enumerate_even(nvars, var + 1, cur, admit, out, lo, hi);
    }
    cur[var] = 0;
}

std::vector<Exponents> support_lattice(const BasisSpec& spec, int d) {
    std::vector<Exponents> out;
    Exponents cur(d, 0);
    if (spec.kind == BasisSpec::Kind::V) {
        auto admit = [&](const Exponents& e) {
            int total = 0;
            for (int ei : e) {
                if (ei < 0) return false;
                total += ei;
            }
            return total >= 2 && total <= 2 * spec.k;
        };
        enumerate_even(d, 0, cur, admit, out, 0, 2 * spec.k);
    } else {
        auto admit = [&](const Exponents& e) {
            if (e[spec.axis] > -2 || e[spec.axis] < -2 * spec.k) return false;
            int total = 0;
            for (int i = 0; i < d; ++i) {
                if (i != spec.axis && e[i] < 0) return false;
                total += e[i];
            }
            return total <= -2 && total >= -2 * spec.k;
        };
        enumerate_even(d, 0, cur, admit, out, -2 * spec.k, 2 * spec.k);
    }
    return out;
}

Rational binom(int n, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r *= rational_of(n - i, i + 1);
    return r;
}

}  // namespace

LaurentPolynomial basis_potential(const BasisSpec& spec, const ConfocalFamily& family) {
    const int d = family.d;
    std::vector<Rational> b = family_rationals(family);
    if (spec.k < 1)
        throw Error(ErrorCode::BadParameter, "basis degree index must be >= 1");
    if (spec.kind == BasisSpec::Kind::W && (spec.axis < 0 || spec.axis >= d))
        throw Error(ErrorCode::BadParameter, "W-kind axis out of range");

    std::vector<Exponents> support = support_lattice(spec, d);
    std::map<Exponents, int> col;
    for (const auto& e : support) col[e] = static_cast<int>(col.size());
    const int ncols = static_cast<int>(col.size());

    // recurrence rows over the support and its shifted neighborhood
    QMatrix rows;
    QVector rhs;
    std::set<Exponents> sites;
    for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
            sites.clear();
            for (const auto& e : support) {
                sites.insert(e);
                Exponents ek = e, el = e;
                ek[k] += 2;
                el[l] += 2;
                sites.insert(ek);
                sites.insert(el);
            }
            for (const auto& idx : sites) {
                QVector row(ncols, Rational(0));
                bool nontrivial = false;
                int total = 0;
                for (int ei : idx) total += ei;
                auto put = [&](const Exponents& e, const Rational& c) {
                    if (c == 0) return;
                    auto it = col.find(e);
                    if (it == col.end()) return;
                    row[it->second] += c;
                    nontrivial = true;
                };
                put(idx, (b[k] - b[l]) * idx[k] * idx[l]);
                Exponents mk = idx, ml = idx;
                mk[k] -= 2;
                ml[l] -= 2;
                put(mk, Rational(-total) * idx[l]);
                put(ml, Rational(total) * idx[k]);
                if (nontrivial) {
                    rows.push_back(std::move(row));
                    rhs.push_back(Rational(0));
                }
            }
        }
    }

    // solution-space dimension of the bare recurrence must match the basis
    // count below this one
    int expected_kernel = (spec.kind == BasisSpec::Kind::V) ? spec.k : spec.k;
    {
        int rank = rank_exact(rows);
        int kernel = ncols - rank;
        if (kernel != expected_kernel)
            throw Error(ErrorCode::UnderdeterminedNormalization,
                        "recurrence solution space has dimension " +
                            std::to_string(kernel) + ", expected " +
                            std::to_string(expected_kernel));
    }

    // pinning rows
    auto pin = [&](const Exponents& e, const Rational& value) {
        QVector row(ncols, Rational(0));
        auto it = col.find(e);
        if (it == col.end())
            throw Error(ErrorCode::Internal, "pinned exponent outside the lattice");
        row[it->second] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(value);
    };
    if (spec.kind == BasisSpec::Kind::V) {
        // axis slice x^2 (b_1 - x^2)^{k-1}: coefficient of x^{2m} is
        // binom(k-1, m-1) b_1^{k-m} (-1)^{m-1}
        for (int m = 1; m <= spec.k; ++m) {
            Exponents e(d, 0);
            e[0] = 2 * m;
            Rational c = binom(spec.k - 1, m - 1);
            for (int t = 0; t < spec.k - m; ++t) c *= b[0];
            if ((m - 1) % 2 == 1) c = -c;
            pin(e, c);
        }
    } else {
        Exponents low(d, 0);
        low[spec.axis] = -2 * spec.k;
        pin(low, Rational(1));
        for (int m = 1; m < spec.k; ++m) {
            Exponents e(d, 0);
            e[spec.axis] = -2 * m;
            pin(e, Rational(0));
        }
    }

    QVector sol = solve_exact(rows, rhs);
    LaurentPolynomial out(d);
    for (const auto& [e, c] : col)
        if (sol[c] != 0) out.add_term(e, sol[c]);

    if (!is_separable(out, family))
        throw Error(ErrorCode::Internal, "generated basis element fails the residual");
    return out;
}

namespace {

// polynomial in an auxiliary variable with Laurent-polynomial coefficients
using LPoly = std::vector<LaurentPolynomial>;

LPoly lp_mul(const LPoly& a, const LPoly& b, int nvars) {
    LPoly c(a.size() + b.size() - 1, LaurentPolynomial(nvars));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

LaurentPolynomial elliptic_route_potential(int k, const ConfocalFamily& family) {
    const int d = family.d;
    std::vector<Rational> b = family_rationals(family);
    auto lconst = [&](const Rational& c) { return LaurentPolynomial::constant(d, c); };

    // chi(t) = prod_j (t - lambda_j) = (-1)^d [prod(b_i - t) - sum x_i^2 prod_{j!=i}(b_j - t)]
    LPoly chi{lconst(Rational(1))};
    for (int i = 0; i < d; ++i)
        chi = lp_mul(chi, LPoly{lconst(b[i]), lconst(Rational(-1))}, d);
    for (int i = 0; i < d; ++i) {
        LPoly part{LaurentPolynomial(d)};
        part[0] = lconst(Rational(1));
        for (int j = 0; j < d; ++j)
            if (j != i) part = lp_mul(part, LPoly{lconst(b[j]), lconst(Rational(-1))}, d);
        Exponents e(d, 0);
        e[i] = 2;
        LaurentPolynomial xi2 = LaurentPolynomial::monomial(e, Rational(1));
        for (std::size_t m = 0; m < part.size(); ++m) chi[m] -= xi2 * part[m];
    }
    if (d % 2 == 1)
        for (auto& c : chi) c = -c;

    // e_m(lambda) = (-1)^m chi coefficient of t^{d-m}
    std::vector<LaurentPolynomial> el(d + 1, LaurentPolynomial(d));
    el[0] = lconst(Rational(1));
    for (int m = 1; m <= d; ++m)
        el[m] = (m % 2 == 0) ? chi[d - m] : -chi[d - m];

    // h_j = sum_{m=1}^{min(j,d)} (-1)^{m-1} e_m h_{j-m}
    std::vector<LaurentPolynomial> h{lconst(Rational(1))};
    for (int j = 1; j <= k; ++j) {
        LaurentPolynomial acc(d);
        for (int m = 1; m <= std::min(j, d); ++m) {
            LaurentPolynomial term = el[m] * h[j - m];
            acc += (m % 2 == 1) ? term : -term;
        }
        h.push_back(std::move(acc));
    }

    // v(t) = -t^{k-1} prod_i (t - b_i); powers below t^{d-1} contribute nothing
    Poly<Rational> vpoly = poly_from_roots(b);
    Poly<Rational> shifted(vpoly.size() + k - 1, Rational(0));
    for (std::size_t m = 0; m < vpoly.size(); ++m) shifted[m + k - 1] = -vpoly[m];
    LaurentPolynomial out(d);
    for (std::size_t m = d - 1; m < shifted.size(); ++m)
        if (shifted[m] != 0) out += h[m - (d - 1)] * shifted[m];
    out -= out.graded_part(0);
    return out;
}

std::vector<std::vector<std::vector<LaurentPolynomial>>> symbolic_s_tensors(
    const ConfocalFamily& family) {
    const int d = family.d;
    std::vector<Rational> b = family_rationals(family);
    using LMat = std::vector<std::vector<LaurentPolynomial>>;
    auto zero = [&]() { return LMat(d, std::vector<LaurentPolynomial>(d, LaurentPolynomial(d))); };
    auto identity = [&]() {
        LMat m = zero();
        for (int i = 0; i < d; ++i) m[i][i] = LaurentPolynomial::constant(d, Rational(1));
        return m;
    };
    auto mul = [&](const LMat& p, const LMat& q) {
        LMat r = zero();
        for (int i = 0; i < d; ++i)
            for (int kk = 0; kk < d; ++kk)
                for (int j = 0; j < d; ++j) r[i][j] += p[i][kk] * q[kk][j];
        return r;
    };

    LMat l = zero();
    for (int i = 0; i < d; ++i) {
        l[i][i] += LaurentPolynomial::constant(d, b[i]);
        for (int j = 0; j < d; ++j) {
            Exponents e(d, 0);
            e[i] += 1;
            e[j] += 1;
            l[i][j] += LaurentPolynomial::monomial(e, Rational(-1));
        }
    }

    std::vector<LMat> s(d, zero());
    LMat a = identity();
    s[d - 1] = a;
    for (int m = 1; m < d; ++m) {
        LMat la = mul(l, a);
        LaurentPolynomial tr(d);
        for (int i = 0; i < d; ++i) tr += la[i][i];
        LaurentPolynomial em = tr * rational_of(1, m);
        a = zero();
        for (int i = 0; i < d; ++i) {
            a[i][i] += em;
            for (int j = 0; j < d; ++j) a[i][j] -= la[i][j];
        }
        s[d - 1 - m] = a;
    }
    return s;
}

IntegralField solve_f(const ConfocalFamily& family, const LaurentPolynomial& v, int i) {
    const int d = family.d;
    if (i < 0 || i >= d)
        throw Error(ErrorCode::BadParameter, "tensor index out of range");
    if (!is_separable(v, family))
        throw Error(ErrorCode::NotSeparable,
                    "potential fails the separability residual");

    auto s = symbolic_s_tensors(family);
    std::vector<LaurentPolynomial> grad(d, LaurentPolynomial(d));
    for (int r = 0; r < d; ++r) grad[r] = v.partial_derivative(r);
    std::vector<LaurentPolynomial> w(d, LaurentPolynomial(d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) w[r] += s[i][r][c] * grad[c];

    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c)
            if (!(w[r].partial_derivative(c) == w[c].partial_derivative(r)))
                throw Error(ErrorCode::NotSeparable,
                            "S_i grad V is not curl-free");

    // coordinate-by-coordinate integration of the closed field: at step k
    // the residual k-component no longer depends on x_1..x_{k-1}, so each
    // monomial integrates termwise; an exponent -1 would mean a logarithmic
    // antiderivative outside the Laurent class
    LaurentPolynomial f(d);
    std::vector<LaurentPolynomial> residual = w;
    for (int k = 0; k < d; ++k) {
        LaurentPolynomial g(d);
        for (const auto& [e, c] : residual[k].terms()) {
            if (e[k] == -1)
                throw Error(ErrorCode::NotSeparable,
                            "logarithmic obstruction in the antiderivative");
            Exponents up = e;
            up[k] += 1;
            g.add_term(up, c * rational_of(1, up[k]));
        }
        f += g;
        for (int r = 0; r < d; ++r) residual[r] -= g.partial_derivative(r);
    }
    for (int r = 0; r < d; ++r)
        if (!residual[r].is_zero())
            throw Error(ErrorCode::NotSeparable, "field is not an exact gradient");

    for (int r = 0; r < d; ++r)
        if (!(f.partial_derivative(r) == w[r]))
            throw Error(ErrorCode::Internal, "antiderivative check failed");

    IntegralField out;
    out.index = i;
    out.f = f;
    return out;
}

double field_line_integral(const ConfocalFamily& family, const LaurentPolynomial& v,
                           int i, const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                           int panels) {
    // 8-point Gauss-Legendre on [0,1] per panel
    static const double nodes[4] = {0.1834346424956498, 0.5255324099163290,
                                    0.7966664774136267, 0.9602898564975363};
    static const double weights[4] = {0.3626837833783620, 0.3137066458778873,
                                      0.2223810344533745, 0.1012285362903763};
    Eigen::VectorXd dx = (to - from) / panels;
    double acc = 0;
    for (int p = 0; p < panels; ++p) {
        Eigen::VectorXd a = from + static_cast<double>(p) * dx;
        auto weval = [&](double s) {
            Eigen::VectorXd x = a + s * dx;
            hierarchy::STensors st = hierarchy::char_tensors(family, x);
            Eigen::VectorXd g = v.gradient(x);
            Eigen::VectorXd w = st.S[i] * g;
            return w.dot(dx);
        };
        for (int q = 0; q < 4; ++q) {
            double t1 = 0.5 * (1 - nodes[q]), t2 = 0.5 * (1 + nodes[q]);
            acc += 0.5 * weights[q] * (weval(t1) + weval(t2));
        }
    }
    return acc;
}

// --- elliptic-coordinate forms --------------------------------------------

EllipticForm::EllipticForm(const BasisSpec& spec, const ConfocalFamily& family)
    : spec_(spec), family_(family) {
    const int d = family.d;
    const int nc = (spec.kind == BasisSpec::Kind::V) ? spec.k + 1 : spec.k;
    LaurentPolynomial cart = basis_potential(spec, family);

    // generic reference interior points, away from axes and from each other
    std::vector<Eigen::VectorXd> refs;
    for (int r = 0; r < nc; ++r) {
        Eigen::VectorXd x(d);
        for (int i = 0; i < d; ++i)
            x[i] = std::sqrt(family.b[i]) * (0.17 + 0.09 * i + 0.31 * r / nc) /
                   std::sqrt(static_cast<double>(d)) / 1.6;
        refs.push_back(x);
    }

    Eigen::MatrixXd a(nc, nc);
    Eigen::VectorXd rhs(nc);
    for (int r = 0; r < nc; ++r) {
        confocal::EllipticCoords lam = confocal::to_elliptic(family, refs[r]);
        for (int j = 0; j < nc; ++j) {
            // basis member j alone
            std::vector<double> unit(nc, 0.0);
            unit[j] = 1.0;
            coeff_ = unit;
            a(r, j) = (*this)(lam.lambda);
        }
        rhs[r] = cart.eval(refs[r]);
    }
    Eigen::VectorXd alpha = a.fullPivLu().solve(rhs);
    coeff_.assign(alpha.data(), alpha.data() + nc);
}

double EllipticForm::v_derivative(double t, int order) const {
    const int d = family_.d;
    double acc = 0;
    if (spec_.kind == BasisSpec::Kind::V) {
        // v(t) = sum_j alpha_j t^{d-1+j}, j = 0..k
        for (int j = 0; j < static_cast<int>(coeff_.size()); ++j) {
            int p = d - 1 + j;
            if (order > p) continue;
            double c = coeff_[j];
            // binom(p, order) t^{p-order}
            double bin = 1;
            for (int m = 0; m < order; ++m) bin = bin * (p - m) / (m + 1);
            acc += c * bin * std::pow(t, p - order);
        }
    } else {
        double bi = family_.b[spec_.axis];
        for (int j = 1; j <= static_cast<int>(coeff_.size()); ++j) {
            // d^m/dt^m (t-b)^{-j} / m! = (-1)^m binom(j+m-1, m) (t-b)^{-j-m}
            double bin = 1;
            for (int m = 0; m < order; ++m) bin = bin * (j + m) / (m + 1);
            double sign = (order % 2 == 0) ? 1.0 : -1.0;
            acc += coeff_[j - 1] * sign * bin * std::pow(t - bi, -j - order);
        }
    }
    return acc;
}

double EllipticForm::operator()(const Eigen::VectorXd& lambda) const {
    const int d = family_.d;
    if (lambda.size() != d)
        throw Error(ErrorCode::BadParameter, "lambda dimension mismatch");
    if (spec_.kind == BasisSpec::Kind::W) {
        double bi = family_.b[spec_.axis];
        for (int j = 0; j < d; ++j)
            if (lambda[j] == bi)
                throw Error(ErrorCode::CoincidentLambdas,
                            "lambda hits the pole of the W-kind v(t)");
    }
    // Hermite divided-difference table: ties filled with v^{(m)}/m!
    std::vector<double> z(lambda.data(), lambda.data() + d);
    std::sort(z.begin(), z.end());
    std::vector<std::vector<double>> dd(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) dd[i][i] = v_derivative(z[i], 0);
    for (int len = 1; len < d; ++len) {
        for (int i = 0; i + len < d; ++i) {
            int j = i + len;
            if (z[j] == z[i])
                dd[i][j] = v_derivative(z[i], len);
            else
                dd[i][j] = (dd[i + 1][j] - dd[i][j - 1]) / (z[j] - z[i]);
        }
    }
    return dd[0][d - 1];
}

double elliptic_form_eval(const BasisSpec& spec, const ConfocalFamily& family,
                          const Eigen::VectorXd& lambda) {
    EllipticForm form(spec, family);
    return form(lambda);
}

}  // namespace poncelet::potential
