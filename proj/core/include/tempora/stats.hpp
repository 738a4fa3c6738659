// Nonparametric test battery: Shapiro-Wilk normality screen, Kruskal-Wallis
// omnibus with Dunn-Bonferroni post-hoc, Mann-Whitney U, Wilcoxon signed-rank
// and Pearson chi-square, plus exact one-sample binomial power search.
// U and signed-rank switch to exact enumeration for small samples; tie
// corrections follow the standard rank-test formulas. No continuity
// corrections anywhere.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempora/errors.hpp"

namespace tempora {

struct TestResult {
    std::string method;
    std::string statistic_name;  // H, U, W, Z or X2
    double statistic = 0.0;
    std::optional<double> df;
    double p_value = 1.0;
    std::optional<double> z;  // normal approximation, where one exists
};

namespace num {

// Standard normal CDF / survival / quantile (AS 241) and the regularized
// upper incomplete gamma backing the chi-square tail.
double normal_cdf(double z);
double normal_sf(double z);
double normal_quantile(double p);  // throws InvalidParams outside (0,1)
double gamma_q(double a, double x);
double chi_square_sf(double x, double df);

// Midranks of a sample (average rank for ties) plus tie-group sizes.
struct RankedData {
    std::vector<double> ranks;
    std::vector<std::size_t> tie_groups;  // sizes > 1 only
    double tie_sum_cubed = 0.0;           // sum of (t^3 - t)
};
RankedData midranks(std::span<const double> values);

}  // namespace num

// Samples with more observations than this use the normal approximation;
// at or below it, U and signed-rank p-values come from exact enumeration.
constexpr std::size_t kExactEnumerationLimit = 12;

// W in (0, 1] with Royston's p approximation. Requires 3 <= n <= 5000
// (SampleTooSmall otherwise); a constant sample is DegenerateSample.
TestResult shapiro_wilk(std::span<const double> sample);

// Tie-corrected H, df = groups - 1, chi-square upper-tail p.
TestResult kruskal_wallis(std::span<const std::vector<double>> groups);

struct DunnResult {
    std::size_t group_a = 0;
    std::size_t group_b = 0;
    double z = 0.0;
    double p_value = 1.0;
    double p_adjusted = 1.0;  // min(1, p * number_of_pairs)
};

// Pairwise Dunn z from pooled ranks with tie correction, Bonferroni-adjusted.
std::vector<DunnResult> dunn_bonferroni(std::span<const std::vector<double>> groups);

// U = min(U_a, U_b); two-sided p. Exact enumeration over all C(n, n_a)
// group assignments when n_a + n_b <= kExactEnumerationLimit, else
// tie-corrected normal approximation.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Zero differences are dropped. W = min(W+, W-); exact over all 2^n sign
// assignments when the effective n is small, else normal approximation with
// tie correction. All-zero differences -> DegenerateSample.
TestResult wilcoxon_signed_rank(std::span<const double> diffs);
TestResult wilcoxon_signed_rank(std::span<const double> before,
                                std::span<const double> after);

// Pearson statistic without continuity correction, df = (r-1)(c-1).
// Any zero row or column total -> DegenerateTable.
TestResult chi_square_independence(
    std::span<const std::vector<double>> table);

// Smallest n whose exact one-sided binomial test of p0 at level alpha
// reaches `power` under p1. Throws InvalidParams for out-of-domain inputs or
// when no n up to `n_cap` suffices.
std::int64_t sample_size_one_proportion(double alpha, double power, double p0,
                                        double p1, std::int64_t n_cap = 20000);

}  // namespace tempora
