#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "denjoy/diffeo.hpp"

namespace denjoy {

/// Structured outcome of one named check. For sup-type checks
/// passed == (statistic <= threshold); direction is otherwise documented in
/// the notes.
struct CheckReport {
    std::string name;
    bool passed = false;
    double statistic = 0.0;
    double threshold = 0.0;
    std::int64_t samples = 0;
    std::map<std::string, double> details;
    std::map<std::string, std::string> notes;
};

/// Bounded fundamental ratios A over the scheme, with a radius-stability
/// threshold (64K for herman_v, matching the closed-form bound).
CheckReport check_fundamental_estimate(const DiffeoAction& act, int radius);

/// |(F^n(x0) - x0)/n - theta_s| against 1/n + 10 tol.
CheckReport check_rotation_number(const DiffeoAction& act, Generator s, std::int64_t n,
                                  double x0);

/// inf over i <= i_max of i * alpha(l_i) stays positive with no decay trend
/// (raw d = 1 scheme values).
CheckReport check_alpha_lower_bound(const BlowupModel& model, int i_max);

/// Integrability of alpha^{-1}(t)/t^{d+1} near zero (classifier verdict).
CheckReport check_integral_inverse(const Modulus& alpha, int d, double tol);

/// Interval lengths inside a window, sorted decreasing, with neighbour
/// ratios. Evidence tables only.
struct RatioSpectrum {
    std::vector<double> lambdas;       // sorted descending
    std::vector<double> ratios;        // lambda_i / lambda_{i+1}, first top_m
    double tail_decade_max = 0.0;      // max ratio over the last decade of indices
};
RatioSpectrum ratio_spectrum(const BlowupModel& model, double win_lo, double win_hi, int top_m);
CheckReport check_ratio_spectrum(const BlowupModel& model, int top_m);

/// Iterated images of the identity interval stay disjoint from it and land
/// on the indexed translates within n * tol.
CheckReport check_wandering(const DiffeoAction& act, Generator s, int n_max);

/// sup over a uniform grid of |f(x) - (x + theta)| (circle metric) and
/// |f'(x) - 1|.
struct C1Distance {
    double c0 = 0.0;
    double c1 = 0.0;
};
C1Distance c1_distance(const DiffeoAction& act, Generator s, int grid_n);

/// Stratified alpha-norm estimate of f': dyadic-separation pairs inside the
/// largest intervals plus uniform cross pairs.
double alpha_norm_estimate(const DiffeoAction& act, Generator s, int top_intervals,
                           int cross_pairs, std::uint64_t seed);

/// Run the named checks ("all" expands to every suite entry). Throws
/// std::invalid_argument on an unknown or empty suite.
std::vector<CheckReport> run_suite(const std::vector<std::string>& names,
                                   const DiffeoAction& act, std::uint64_t seed,
                                   std::int64_t rotation_n);

/// Per-sample series behind a named check (running rotation estimates,
/// ratio sweeps by norm, ...), as CSV. Unknown names throw.
void write_check_samples(const DiffeoAction& act, const std::string& name,
                         std::int64_t rotation_n, std::ostream& out);

}  // namespace denjoy
