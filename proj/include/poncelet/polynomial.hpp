#pragma once

// Dense univariate polynomials with ascending coefficients, templated so the
// exact (Rational) and float paths share one implementation.

#include <vector>

namespace poncelet {

template <typename T>
using Poly = std::vector<T>;  // p[k] multiplies x^k

template <typename T>
Poly<T> poly_mul(const Poly<T>& a, const Poly<T>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<T> c(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

template <typename T>
Poly<T> poly_add(Poly<T> a, const Poly<T>& b) {
    if (a.size() < b.size()) a.resize(b.size(), T(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

template <typename T>
Poly<T> poly_scale(Poly<T> a, const T& s) {
    for (auto& c : a) c *= s;
    return a;
}

template <typename T>
Poly<T> poly_from_roots(const std::vector<T>& roots) {
    Poly<T> p{T(1)};
    for (const T& r : roots) {
        Poly<T> q(p.size() + 1, T(0));
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] -= r * p[i];
            q[i + 1] += p[i];
        }
        p = std::move(q);
    }
    return p;
}

template <typename T>
T poly_eval(const Poly<T>& p, const T& x) {
    T acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

template <typename T>
Poly<T> poly_derivative(const Poly<T>& p) {
    if (p.size() <= 1) return {T(0)};
    Poly<T> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * T(static_cast<int>(i));
    return d;
}

// Exact division; remainder returned through rem (empty coefficients == 0).
template <typename T>
Poly<T> poly_divmod(Poly<T> num, const Poly<T>& den, Poly<T>* rem = nullptr) {
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    while (dd >= 0 && den[dd] == T(0)) --dd;
    Poly<T> q(dn - dd >= 0 ? dn - dd + 1 : 0, T(0));
    for (int k = dn - dd; k >= 0; --k) {
        T f = num[k + dd] / den[dd];
        q[k] = f;
        for (int j = 0; j <= dd; ++j) num[k + j] -= f * den[j];
    }
    if (rem) {
        num.resize(dd >= 0 ? dd : 0);
        *rem = std::move(num);
    }
    return q;
}

template <typename T>
int poly_degree(const Poly<T>& p) {
    for (std::size_t i = p.size(); i-- > 0;)
        if (!(p[i] == T(0))) return static_cast<int>(i);
    return -1;
}

}  // namespace poncelet
