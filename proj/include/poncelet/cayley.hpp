#pragma once

// Algebraic periodicity test for the Lobachevsky elliptical billiard: the
// spectral-curve polynomial P(x) = prod (x - a_i) prod (x - mu_j), the
// square-root series over Q, the rank condition on the Hankel-type matrix of
// series coefficients, singular-curve handling through the normalized curve,
// a floating indicator, and the caustic period search.

#include <optional>
#include <string>
#include <vector>

#include "poncelet/confocal.hpp"
#include "poncelet/rational.hpp"
#include "poncelet/series.hpp"

namespace poncelet::cayley {

using confocal::MinkowskiEllipsoid;

using RationalSeries = SqrtSeries<Rational>;

enum class Degeneracy { none, case_i, case_ii, case_iii };

const char* degeneracy_name(Degeneracy d);

struct SpectralCurveSpec {
    std::vector<Rational> roots;          // a_0..a_d, mu_1..mu_{d-1}
    std::vector<int> multiplicity;        // aligned with distinct_roots
    std::vector<Rational> distinct_roots;
    int genus = 0;                        // arithmetic genus d-1
    Degeneracy degeneracy = Degeneracy::none;

    static SpectralCurveSpec from_ellipsoid(const MinkowskiEllipsoid& e);
};

struct PeriodicityVerdict {
    bool periodic = false;
    int n = 0;
    int d = 0;
    int rank = -1;                        // -1 when the rank test did not run
    int threshold = 0;                    // n - d + 1
    Degeneracy degeneracy = Degeneracy::none;
    bool rank_tested = false;
    std::string note;
    // free scale of the spectral-curve normalization; it rescales y only
    // and cannot move the rank, so it is fixed and merely recorded.
    Rational curve_constant = 1;
};

// Hankel-type matrix of the rank test, shape (n-1) x (n-d+1): entry (r, j) is
// T_{n + r - j}, r = 1..n-1, j = 0..n-d. The common factor B_0 scales every
// entry, so T_k stands in for B_k.
QMatrix hankel_matrix(const RationalSeries& series, int n, int d);
Eigen::MatrixXd hankel_matrix_f(const SqrtSeries<double>& series, int n, int d);

// Full periodicity test on exact input. Case (i) short-circuits with a
// degenerate verdict; cases (ii)/(iii) run the same rank test on the
// singular curve. Triple-or-higher root coincidences are rejected.
PeriodicityVerdict cayley_condition(const MinkowskiEllipsoid& e, int n);

// The same condition evaluated through the normalization of the singular
// curve (strip the squared factor, add one value-matching row per node);
// must agree with cayley_condition wherever both apply.
PeriodicityVerdict cayley_condition_normalized(const MinkowskiEllipsoid& e, int n);

// Smallest singular value of the column-normalized rank-test matrix; zero
// exactly at the rank condition. The single-column case (n = d) uses the
// RMS of the entries instead, which is the continuous analogue there.
double period_indicator(const MinkowskiEllipsoid& e, int n);
double period_indicator(const std::vector<double>& a, const std::vector<double>& mu,
                        int n);

struct CausticWitness {
    double mu = 0;
    double indicator = 0;
    double closure_residual = 0;   // simulation re-verification
    bool closure_verified = false;
};

struct CausticSearchOptions {
    int grid = 2048;
    double indicator_threshold = 1e-10;
    double closure_eps = 1e-6;
    double klein_c = 1.0;             // boundary shift for the verification map
    double degeneracy_window = 1e-7;  // relative half-width skipped around a_i and 0
    std::vector<double> fixed_mu;     // d > 2: all caustic slots; free_index scanned
    int free_index = 0;
};

// Roots of the period indicator in the bracket, each re-verified by chord
// closure in the Klein image. Throws NoRootInBracket when the scan finds
// nothing at all.
std::vector<CausticWitness> find_periodic_caustic(const std::vector<double>& a, int n,
                                                  double lo, double hi,
                                                  const CausticSearchOptions& opt = {});

}  // namespace poncelet::cayley
