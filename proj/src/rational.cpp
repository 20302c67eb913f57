#include "poncelet/rational.hpp"

#include <algorithm>
#include <cctype>

namespace poncelet {

namespace {

bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

bool is_rational_literal(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return is_integer_literal(text);
    return is_integer_literal(text.substr(0, slash)) &&
           is_integer_literal(text.substr(slash + 1));
}

Rational parse_rational(const std::string& text) {
    if (!is_rational_literal(text))
        throw Error(ErrorCode::BadParameter,
                    "not an exact rational literal: '" + text + "'");
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw Error(ErrorCode::BadParameter, "unparsable rational: '" + text + "'");
    if (q.get_den() == 0)
        throw Error(ErrorCode::BadParameter, "zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

namespace {

// Clear denominators row by row; rank is unchanged.
std::vector<std::vector<mpz_class>> to_integer_rows(const QMatrix& m) {
    std::vector<std::vector<mpz_class>> z;
    z.reserve(m.size());
    for (const auto& row : m) {
        mpz_class lcm = 1;
        for (const auto& q : row) {
            Rational c = q;
            c.canonicalize();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
        }
        std::vector<mpz_class> zr;
        zr.reserve(row.size());
        for (const auto& q : row) {
            Rational c = q;
            c.canonicalize();
            zr.push_back(c.get_num() * (lcm / c.get_den()));
        }
        z.push_back(std::move(zr));
    }
    return z;
}

}  // namespace

int rank_exact(const QMatrix& m) {
    if (m.empty() || m[0].empty()) return 0;
    auto a = to_integer_rows(m);
    const int rows = static_cast<int>(a.size());
    const int cols = static_cast<int>(a[0].size());

    mpz_class prev = 1;
    int rank = 0;
    std::vector<int> col_perm(cols);
    for (int j = 0; j < cols; ++j) col_perm[j] = j;

    for (int k = 0; k < std::min(rows, cols); ++k) {
        // full pivoting: pick the nonzero entry of smallest bit size
        int pr = -1, pc = -1;
        std::size_t best = 0;
        for (int i = k; i < rows; ++i) {
            for (int j = k; j < cols; ++j) {
                const mpz_class& v = a[i][col_perm[j]];
                if (v == 0) continue;
                std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
                if (pr < 0 || bits < best) {
                    pr = i;
                    pc = j;
                    best = bits;
                }
            }
        }
        if (pr < 0) break;
        std::swap(a[k], a[pr]);
        std::swap(col_perm[k], col_perm[pc]);
        ++rank;

        const mpz_class pivot = a[k][col_perm[k]];
        for (int i = k + 1; i < rows; ++i) {
            for (int j = k + 1; j < cols; ++j) {
                mpz_class t = a[i][col_perm[j]] * pivot - a[i][col_perm[k]] * a[k][col_perm[j]];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][col_perm[j]] = t;
            }
            a[i][col_perm[k]] = 0;
        }
        prev = pivot;
    }
    return rank;
}

std::vector<QVector> nullspace_exact(const QMatrix& m) {
    if (m.empty()) return {};
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    QMatrix a = m;

    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(a[r], a[pr]);
        Rational inv = 1 / a[r][c];
        for (int j = c; j < cols; ++j) a[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }

    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;

    std::vector<QVector> basis;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        QVector v(cols, Rational(0));
        v[c] = 1;
        for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
            v[pivot_col[i]] = -a[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

QVector solve_exact(QMatrix m, QVector rhs) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    if (rows == 0 || cols == 0)
        throw Error(ErrorCode::Internal, "solve_exact: empty system");

    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(m[r], m[pr]);
        std::swap(rhs[r], rhs[pr]);
        Rational inv = 1 / m[r][c];
        for (int j = c; j < cols; ++j) m[r][j] *= inv;
        rhs[r] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (static_cast<int>(pivot_col.size()) < cols)
        throw Error(ErrorCode::Internal, "solve_exact: underdetermined system");
    for (int i = r; i < rows; ++i)
        if (rhs[i] != 0)
            throw Error(ErrorCode::Internal, "solve_exact: inconsistent system");

    QVector x(cols, Rational(0));
    for (int i = 0; i < cols; ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

}  // namespace poncelet
