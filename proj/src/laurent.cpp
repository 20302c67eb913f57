#include "poncelet/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace poncelet::potential {

LaurentPolynomial LaurentPolynomial::monomial(Exponents e, Rational c) {
    LaurentPolynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

LaurentPolynomial LaurentPolynomial::constant(int nvars, Rational c) {
    return monomial(Exponents(nvars, 0), std::move(c));
}

Rational LaurentPolynomial::coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPolynomial::add_term(const Exponents& e, const Rational& c) {
    if (nvars_ == 0) nvars_ = static_cast<int>(e.size());
    if (static_cast<int>(e.size()) != nvars_)
        throw Error(ErrorCode::BadParameter, "laurent term arity mismatch");
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& other) const {
    LaurentPolynomial r = *this;
    r += other;
    return r;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& other) const {
    LaurentPolynomial r = *this;
    r -= other;
    return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& other) const {
    LaurentPolynomial r(std::max(nvars_, other.nvars_));
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : other.terms_) {
            Exponents e = e1;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
            r.add_term(e, c1 * c2);
        }
    }
    return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const Rational& s) const {
    LaurentPolynomial r(nvars_);
    if (s == 0) return r;
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
}

LaurentPolynomial LaurentPolynomial::operator-() const { return *this * Rational(-1); }

LaurentPolynomial LaurentPolynomial::partial_derivative(int var) const {
    LaurentPolynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        r.add_term(d, c * e[var]);
    }
    return r;
}

LaurentPolynomial LaurentPolynomial::euler() const {
    LaurentPolynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        int total = 0;
        for (int ei : e) total += ei;
        if (total != 0) r.add_term(e, c * total);
    }
    return r;
}

LaurentPolynomial LaurentPolynomial::shifted(const Exponents& shift) const {
    LaurentPolynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        Exponents s = e;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += shift[i];
        r.add_term(s, c);
    }
    return r;
}

LaurentPolynomial LaurentPolynomial::graded_part(int degree) const {
    LaurentPolynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        int total = 0;
        for (int ei : e) total += ei;
        if (total == degree) r.add_term(e, c);
    }
    return r;
}

std::vector<int> LaurentPolynomial::occurring_degrees() const {
    std::vector<int> ds;
    for (const auto& [e, c] : terms_) {
        int total = 0;
        for (int ei : e) total += ei;
        if (std::find(ds.begin(), ds.end(), total) == ds.end()) ds.push_back(total);
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

int LaurentPolynomial::min_exponent() const {
    int m = 0;
    for (const auto& [e, c] : terms_)
        for (int ei : e) m = std::min(m, ei);
    return m;
}

int LaurentPolynomial::max_exponent() const {
    int m = 0;
    for (const auto& [e, c] : terms_)
        for (int ei : e) m = std::max(m, ei);
    return m;
}

double LaurentPolynomial::eval(const Eigen::VectorXd& x) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (x[i] == 0.0 && e[i] < 0)
                return std::numeric_limits<double>::infinity();
            t *= std::pow(x[i], e[i]);
        }
        acc += t;
    }
    return acc;
}

Rational LaurentPolynomial::eval_exact(const std::vector<Rational>& x) const {
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars_; ++i) {
            int ei = e[i];
            if (ei == 0) continue;
            if (x[i] == 0)
                throw Error(ErrorCode::BadParameter, "pole at evaluation point");
            Rational p = x[i];
            if (ei < 0) {
                p = 1 / p;
                ei = -ei;
            }
            for (int k = 0; k < ei; ++k) t *= p;
        }
        acc += t;
    }
    return acc;
}

Eigen::VectorXd LaurentPolynomial::gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(nvars_);
    for (int i = 0; i < nvars_; ++i) g[i] = partial_derivative(i).eval(x);
    return g;
}

std::string LaurentPolynomial::serialize() const {
    std::ostringstream os;
    for (const auto& [e, c] : terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) os << e[i] << ' ';
        os << ": " << to_string(c) << '\n';
    }
    return os.str();
}

LaurentPolynomial LaurentPolynomial::deserialize(const std::string& text, int nvars) {
    LaurentPolynomial p(nvars);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Exponents e(nvars);
        for (int i = 0; i < nvars; ++i)
            if (!(ls >> e[i]))
                throw Error(ErrorCode::IoError, "bad laurent line: " + line);
        std::string colon, coeff;
        if (!(ls >> colon >> coeff) || colon != ":")
            throw Error(ErrorCode::IoError, "bad laurent line: " + line);
        p.add_term(e, parse_rational(coeff));
    }
    return p;
}

std::string LaurentPolynomial::pretty() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        } else {
            if (a < 0) {
                os << "-";
                a = -a;
            }
            first = false;
        }
        bool has_vars = false;
        for (int ei : e) has_vars |= ei != 0;
        if (a != 1 || !has_vars) os << to_string(a);
        bool printed = a != 1 || !has_vars;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (printed) os << ' ';
            os << 'x' << i + 1;
            if (e[i] != 1) os << '^' << e[i];
            printed = true;
        }
    }
    return os.str();
}

bool LaurentPolynomial::operator==(const LaurentPolynomial& other) const {
    return terms_ == other.terms_;
}

}  // namespace poncelet::potential
