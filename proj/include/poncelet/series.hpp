#pragma once

// Truncated power series square root. The returned coefficients T_k are the
// expansion of sqrt(P(x)/P(0)), so all arithmetic stays in the coefficient
// field; the irrational factor sqrt(P(0)) never materializes. The true
// constant term squared, P(0), is carried alongside.

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

#include "poncelet/errors.hpp"
#include "poncelet/polynomial.hpp"

namespace poncelet {

template <typename T>
struct SqrtSeries {
    std::vector<T> coeffs;  // T_0 = 1, ..., T_order
    T b0_squared;           // P(0): B_k = sqrt(P(0)) * T_k
    int order = 0;
};

namespace detail {

template <typename T>
std::vector<T> series_mul(const std::vector<T>& a, const std::vector<T>& b, int n) {
    std::vector<T> c(n + 1, T(0));
    for (int i = 0; i <= n && i < static_cast<int>(a.size()); ++i) {
        if (a[i] == T(0)) continue;
        for (int j = 0; j + i <= n && j < static_cast<int>(b.size()); ++j)
            c[i + j] += a[i] * b[j];
    }
    return c;
}

// Direct recurrence: 2 T_k = q_k - sum_{j=1}^{k-1} T_j T_{k-j}.
template <typename T>
std::vector<T> sqrt_by_recurrence(const std::vector<T>& q, int n) {
    std::vector<T> t(n + 1, T(0));
    t[0] = T(1);
    for (int k = 1; k <= n; ++k) {
        T acc = k < static_cast<int>(q.size()) ? q[k] : T(0);
        for (int j = 1; j < k; ++j) acc -= t[j] * t[k - j];
        t[k] = acc / T(2);
    }
    return t;
}

// Newton iteration on the inverse square root, z <- z(3 - q z^2)/2, which is
// division free; the square root is then q*z. Precision doubles per step.
template <typename T>
std::vector<T> sqrt_by_newton(const std::vector<T>& q, int n) {
    std::vector<T> z{T(1)};
    int prec = 1;
    while (prec <= n) {
        prec = std::min(2 * prec, n + 1);
        int m = prec - 1;
        auto z2 = series_mul(z, z, m);
        auto qz2 = series_mul(q, z2, m);
        std::vector<T> three_minus(m + 1, T(0));
        three_minus[0] = T(3);
        for (int i = 0; i <= m; ++i) three_minus[i] -= qz2[i];
        z = series_mul(z, three_minus, m);
        for (auto& c : z) c /= T(2);
    }
    return series_mul(q, z, n);
}

}  // namespace detail

// Series sqrt of P/P(0) to order n. P is given by ascending coefficients.
// Newton is the production path; the direct recurrence and a final exact
// squaring check guard it (the identity (sum T_k x^k)^2 = P/P(0) mod x^{n+1}
// must hold exactly in the coefficient field).
template <typename T>
SqrtSeries<T> sqrt_series(const Poly<T>& p, int n) {
    if (poly_degree(p) < 1)
        throw Error(ErrorCode::BadParameter, "sqrt_series: polynomial degree < 1");
    if (p.empty() || p[0] == T(0))
        throw Error(ErrorCode::ZeroAtOrigin,
                    "sqrt_series: P(0) = 0, a branch point sits over x = 0");
    std::vector<T> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] / p[0];
    q.resize(n + 1, T(0));

    auto t = detail::sqrt_by_newton(q, n);
    auto check = detail::sqrt_by_recurrence(q, n);
    auto sq = detail::series_mul(t, t, n);
    if constexpr (std::is_floating_point_v<T>) {
        for (int k = 0; k <= n; ++k) {
            // cancellation scale: the terms entering the k-th convolution
            T scale = T(1);
            for (int j = 0; j <= k; ++j) scale += std::abs(t[j] * t[k - j]);
            if (std::abs(t[k] - check[k]) > T(1e-10) * scale ||
                std::abs(sq[k] - q[k]) > T(1e-10) * scale)
                throw Error(ErrorCode::Internal, "sqrt_series: float self-check failed");
        }
    } else {
        for (int k = 0; k <= n; ++k)
            if (!(t[k] == check[k]) || !(sq[k] == q[k]))
                throw Error(ErrorCode::Internal, "sqrt_series: exact self-check failed");
    }

    SqrtSeries<T> out;
    out.coeffs = std::move(t);
    out.b0_squared = p[0];
    out.order = n;
    return out;
}

}  // namespace poncelet
