#include "tempora/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace tempora {
namespace num {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

double normal_sf(double z) { return 0.5 * std::erfc(z / 1.4142135623730951); }

// Wichura's algorithm AS 241 (PPND16).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidParams("normal_quantile requires p in (0,1)");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        x = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        x = num / den;
    }
    return q < 0.0 ? -x : x;
}

namespace {

// Regularized lower incomplete gamma by series expansion.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by continued fraction (modified Lentz).
double gamma_q_cf(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0) throw InvalidParams("gamma_q requires a > 0");
    if (x < 0.0) throw InvalidParams("gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(df / 2.0, x / 2.0);
}

RankedData midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    RankedData out;
    out.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = rank;
        const std::size_t t = j - i + 1;
        if (t > 1) {
            out.tie_groups.push_back(t);
            const double td = static_cast<double>(t);
            out.tie_sum_cubed += td * td * td - td;
        }
        i = j + 1;
    }
    return out;
}

}  // namespace num

// ---------------------------------------------------------------------------
// Shapiro-Wilk (Royston 1995 approximation coefficients).
// ---------------------------------------------------------------------------

namespace {

double poly(std::span<const double> c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

}  // namespace

TestResult shapiro_wilk(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 3 || n > 5000) {
        throw SampleTooSmall("shapiro_wilk requires 3 <= n <= 5000, got " +
                             std::to_string(n));
    }
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back()) {
        throw DegenerateSample("shapiro_wilk on a constant sample");
    }

    const std::size_t n2 = n / 2;
    const double nd = static_cast<double>(n);
    std::vector<double> m(n2);  // lower-half expected normal order statistics
    double summ2 = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
        m[i] = num::normal_quantile((static_cast<double>(i + 1) - 0.375) / (nd + 0.25));
        summ2 += 2.0 * m[i] * m[i];
    }
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(nd);

    static constexpr double kC1[6] = {0.0, 0.221157, -0.147981,
                                      -2.071190, 4.434685, -2.706056};
    static constexpr double kC2[6] = {0.0, 0.042981, -0.293762,
                                      -1.752461, 5.682633, -3.582633};

    // Positive weights for the lower half, largest magnitude first.
    std::vector<double> a(n2);
    a[0] = n == 3 ? std::sqrt(0.5) : poly(kC1, rsn) - m[0] / ssumm2;
    std::size_t i1;
    double fac;
    if (n > 5) {
        i1 = 2;
        a[1] = -m[1] / ssumm2 + poly(kC2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                        (1.0 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]));
    } else {
        i1 = 1;
        if (n > 3) {
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a[0] * a[0]));
        } else {
            fac = 1.0;
        }
    }
    for (std::size_t i = i1; i < n2; ++i) a[i] = -m[i] / fac;

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= nd;
    double ssq = 0.0;
    for (double v : x) ssq += (v - mean) * (v - mean);

    double num_sum = 0.0;  // sum a_i * (x_(n+1-i) - x_(i)) over the lower half
    for (std::size_t i = 0; i < n2; ++i) num_sum += a[i] * (x[n - 1 - i] - x[i]);

    double w = num_sum * num_sum / ssq;
    if (w > 1.0) w = 1.0;

    TestResult r;
    r.method = "shapiro_wilk";
    r.statistic_name = "W";
    r.statistic = w;
    if (n == 3) {
        constexpr double kPi6 = 1.90985931710274;    // 6/pi
        constexpr double kStqr = 1.04719755119660;   // asin(sqrt(3/4))
        double p = kPi6 * (std::asin(std::sqrt(w)) - kStqr);
        r.p_value = std::clamp(p, 0.0, 1.0);
        return r;
    }
    double zval;
    if (n <= 11) {
        const double gamma = -2.273 + 0.459 * nd;
        const double y = -std::log(gamma - std::log1p(-w));
        const double mu = 0.5440 - 0.39978 * nd + 0.025054 * nd * nd -
                          0.0006714 * nd * nd * nd;
        const double sigma = std::exp(1.3822 - 0.77857 * nd + 0.062767 * nd * nd -
                                      0.0020322 * nd * nd * nd);
        zval = (y - mu) / sigma;
    } else {
        const double ln_n = std::log(nd);
        const double y = std::log1p(-w);
        const double mu = -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n * ln_n +
                          0.0038915 * ln_n * ln_n * ln_n;
        const double sigma =
            std::exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n * ln_n);
        zval = (y - mu) / sigma;
    }
    r.z = zval;
    r.p_value = std::clamp(num::normal_sf(zval), 0.0, 1.0);
    return r;
}

// ---------------------------------------------------------------------------
// Kruskal-Wallis and Dunn-Bonferroni.
// ---------------------------------------------------------------------------

namespace {

struct PooledRanks {
    num::RankedData ranked;
    std::vector<double> group_rank_sums;
    std::vector<std::size_t> group_sizes;
    std::size_t total = 0;
};

PooledRanks pool_and_rank(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) {
        throw TooFewGroups("need at least 2 groups, got " +
                           std::to_string(groups.size()));
    }
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw EmptyInput("empty group in rank test");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    if (pooled.size() < 3) throw SampleTooSmall("rank test needs total n >= 3");

    PooledRanks out;
    out.total = pooled.size();
    out.ranked = num::midranks(pooled);
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) sum += out.ranked.ranks[offset + i];
        out.group_rank_sums.push_back(sum);
        out.group_sizes.push_back(g.size());
        offset += g.size();
    }
    return out;
}

}  // namespace

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
    const PooledRanks pr = pool_and_rank(groups);
    const double n = static_cast<double>(pr.total);

    double sum_term = 0.0;
    for (std::size_t g = 0; g < pr.group_sizes.size(); ++g) {
        sum_term += pr.group_rank_sums[g] * pr.group_rank_sums[g] /
                    static_cast<double>(pr.group_sizes[g]);
    }
    double h = 12.0 / (n * (n + 1.0)) * sum_term - 3.0 * (n + 1.0);

    const double tie_divisor = 1.0 - pr.ranked.tie_sum_cubed / (n * n * n - n);
    if (tie_divisor <= 0.0) {
        throw DegenerateSample("kruskal_wallis: all pooled values identical");
    }
    h /= tie_divisor;

    TestResult r;
    r.method = "kruskal_wallis";
    r.statistic_name = "H";
    r.statistic = h;
    r.df = static_cast<double>(groups.size() - 1);
    r.p_value = num::chi_square_sf(h, *r.df);
    return r;
}

std::vector<DunnResult> dunn_bonferroni(std::span<const std::vector<double>> groups) {
    const PooledRanks pr = pool_and_rank(groups);
    const double n = static_cast<double>(pr.total);
    // Dunn's tie-corrected variance term.
    const double tie_term = pr.ranked.tie_sum_cubed / (12.0 * (n - 1.0));
    const double base_var = n * (n + 1.0) / 12.0 - tie_term;

    const std::size_t g = pr.group_sizes.size();
    const double m = static_cast<double>(g * (g - 1) / 2);
    std::vector<DunnResult> results;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            const double ni = static_cast<double>(pr.group_sizes[i]);
            const double nj = static_cast<double>(pr.group_sizes[j]);
            const double mean_i = pr.group_rank_sums[i] / ni;
            const double mean_j = pr.group_rank_sums[j] / nj;
            const double sd = std::sqrt(base_var * (1.0 / ni + 1.0 / nj));
            DunnResult d;
            d.group_a = i;
            d.group_b = j;
            d.z = sd > 0.0 ? (mean_i - mean_j) / sd : 0.0;
            d.p_value = sd > 0.0 ? 2.0 * num::normal_sf(std::fabs(d.z)) : 1.0;
            d.p_adjusted = std::min(1.0, d.p_value * m);
            results.push_back(d);
        }
    }
    return results;
}

// ---------------------------------------------------------------------------
// Mann-Whitney U.
// ---------------------------------------------------------------------------

namespace {

// Doubled midranks are integers even under ties, so the exact-enumeration
// comparisons stay in integer arithmetic.
std::vector<std::int64_t> doubled_ranks(const num::RankedData& rd) {
    std::vector<std::int64_t> out(rd.ranks.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::int64_t>(std::llround(2.0 * rd.ranks[i]));
    }
    return out;
}

// Exact two-sided p: share of all C(n, n_a) assignments whose min(U_a, U_b)
// is at or below the observed one.
double mwu_exact_p(const std::vector<std::int64_t>& rank2, std::size_t na,
                   std::int64_t observed_min_u2) {
    const std::size_t n = rank2.size();
    std::vector<std::size_t> pick(na);
    std::iota(pick.begin(), pick.end(), 0);
    const std::int64_t base = static_cast<std::int64_t>(na) *
                              (static_cast<std::int64_t>(na) + 1);
    const std::int64_t u2_total = 2 * static_cast<std::int64_t>(na) *
                                  static_cast<std::int64_t>(n - na);
    std::int64_t count = 0;
    std::int64_t total = 0;
    while (true) {
        std::int64_t r2 = 0;
        for (std::size_t idx : pick) r2 += rank2[idx];
        const std::int64_t u2a = r2 - base;
        const std::int64_t min_u2 = std::min(u2a, u2_total - u2a);
        if (min_u2 <= observed_min_u2) ++count;
        ++total;

        // next combination
        std::size_t i = na;
        while (i-- > 0) {
            if (pick[i] + (na - i) < n) {
                ++pick[i];
                for (std::size_t j = i + 1; j < na; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) {
                return static_cast<double>(count) / static_cast<double>(total);
            }
        }
    }
}

}  // namespace

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInput("mann_whitney_u on empty sample");
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const num::RankedData rd = num::midranks(pooled);
    const auto rank2 = doubled_ranks(rd);

    std::int64_t r2a = 0;
    for (std::size_t i = 0; i < na; ++i) r2a += rank2[i];
    const std::int64_t u2a =
        r2a - static_cast<std::int64_t>(na) * (static_cast<std::int64_t>(na) + 1);
    const std::int64_t u2_total =
        2 * static_cast<std::int64_t>(na) * static_cast<std::int64_t>(nb);
    const std::int64_t min_u2 = std::min(u2a, u2_total - u2a);

    TestResult r;
    r.method = "mann_whitney_u";
    r.statistic_name = "U";
    r.statistic = static_cast<double>(min_u2) / 2.0;

    const double nad = static_cast<double>(na);
    const double nbd = static_cast<double>(nb);
    const double nd = static_cast<double>(n);
    const double mu = nad * nbd / 2.0;
    const double var = nad * nbd / 12.0 *
                       ((nd + 1.0) - rd.tie_sum_cubed / (nd * (nd - 1.0)));
    if (var > 0.0) {
        r.z = (r.statistic - mu) / std::sqrt(var);
    } else {
        r.z = 0.0;
    }

    if (n <= kExactEnumerationLimit) {
        r.p_value = mwu_exact_p(rank2, na, min_u2);
    } else if (var > 0.0) {
        r.p_value = std::min(1.0, 2.0 * num::normal_cdf(*r.z));
    } else {
        r.p_value = 1.0;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank.
// ---------------------------------------------------------------------------

TestResult wilcoxon_signed_rank(std::span<const double> diffs) {
    std::vector<double> abs_d;
    std::vector<bool> negative;
    for (double d : diffs) {
        if (d == 0.0) continue;  // zero differences drop out
        abs_d.push_back(std::fabs(d));
        negative.push_back(d < 0.0);
    }
    if (abs_d.empty()) {
        throw DegenerateSample("wilcoxon_signed_rank: all differences zero");
    }
    const std::size_t n = abs_d.size();
    const num::RankedData rd = num::midranks(abs_d);
    const auto rank2 = doubled_ranks(rd);

    std::int64_t w2_minus = 0;
    std::int64_t w2_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        w2_total += rank2[i];
        if (negative[i]) w2_minus += rank2[i];
    }
    const std::int64_t w2_min = std::min(w2_minus, w2_total - w2_minus);

    TestResult r;
    r.method = "wilcoxon_signed_rank";
    r.statistic_name = "W";
    r.statistic = static_cast<double>(w2_min) / 2.0;

    const double nd = static_cast<double>(n);
    const double mu = nd * (nd + 1.0) / 4.0;
    const double var =
        nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - rd.tie_sum_cubed / 48.0;
    r.z = var > 0.0 ? (r.statistic - mu) / std::sqrt(var) : 0.0;

    if (n <= kExactEnumerationLimit) {
        // Exact two-sided p over all 2^n sign assignments.
        std::int64_t count = 0;
        const std::uint64_t total = 1ULL << n;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            std::int64_t w2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1ULL << i)) w2 += rank2[i];
            }
            if (std::min(w2, w2_total - w2) <= w2_min) ++count;
        }
        r.p_value = static_cast<double>(count) / static_cast<double>(total);
    } else if (var > 0.0) {
        r.p_value = std::min(1.0, 2.0 * num::normal_cdf(*r.z));
    } else {
        r.p_value = 1.0;
    }
    return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> before,
                                std::span<const double> after) {
    if (before.size() != after.size()) {
        throw InvalidParams("wilcoxon_signed_rank: pair length mismatch");
    }
    std::vector<double> diffs(before.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = after[i] - before[i];
    return wilcoxon_signed_rank(diffs);
}

// ---------------------------------------------------------------------------
// Chi-square independence.
// ---------------------------------------------------------------------------

TestResult chi_square_independence(std::span<const std::vector<double>> table) {
    const std::size_t rows = table.size();
    if (rows < 2) throw DegenerateTable("need at least 2 rows");
    const std::size_t cols = table[0].size();
    if (cols < 2) throw DegenerateTable("need at least 2 columns");

    std::vector<double> row_tot(rows, 0.0), col_tot(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (table[i].size() != cols) throw DegenerateTable("ragged table");
        for (std::size_t j = 0; j < cols; ++j) {
            if (table[i][j] < 0.0) throw DegenerateTable("negative count");
            row_tot[i] += table[i][j];
            col_tot[j] += table[i][j];
            total += table[i][j];
        }
    }
    for (double t : row_tot) {
        if (t <= 0.0) throw DegenerateTable("zero row total");
    }
    for (double t : col_tot) {
        if (t <= 0.0) throw DegenerateTable("zero column total");
    }

    double x2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double expected = row_tot[i] * col_tot[j] / total;
            const double d = table[i][j] - expected;
            x2 += d * d / expected;
        }
    }

    TestResult r;
    r.method = "chi_square_independence";
    r.statistic_name = "X2";
    r.statistic = x2;
    r.df = static_cast<double>((rows - 1) * (cols - 1));
    r.p_value = num::chi_square_sf(x2, *r.df);
    return r;
}

// ---------------------------------------------------------------------------
// Exact one-sample binomial power search.
// ---------------------------------------------------------------------------

namespace {

// P(X >= k) and P(X <= k) for X ~ Bin(n, p), via log-space pmf.
double binom_pmf(std::int64_t n, std::int64_t k, double p) {
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double logc = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                        std::lgamma(nd - kd + 1.0);
    return std::exp(logc + kd * std::log(p) + (nd - kd) * std::log1p(-p));
}

double binom_sf_geq(std::int64_t n, std::int64_t k, double p) {
    double acc = 0.0;
    for (std::int64_t i = k; i <= n; ++i) acc += binom_pmf(n, i, p);
    return std::min(acc, 1.0);
}

double binom_cdf_leq(std::int64_t n, std::int64_t k, double p) {
    double acc = 0.0;
    for (std::int64_t i = 0; i <= k; ++i) acc += binom_pmf(n, i, p);
    return std::min(acc, 1.0);
}

}  // namespace

std::int64_t sample_size_one_proportion(double alpha, double power, double p0,
                                        double p1, std::int64_t n_cap) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0) ||
        !(p0 > 0.0 && p0 < 1.0) || !(p1 > 0.0 && p1 < 1.0) || p0 == p1) {
        throw InvalidParams("sample_size_one_proportion: parameters out of domain");
    }
    const bool upper = p1 > p0;
    for (std::int64_t n = 1; n <= n_cap; ++n) {
        if (upper) {
            // Smallest k with P(X >= k | p0) <= alpha.
            std::int64_t k = -1;
            for (std::int64_t kk = 0; kk <= n; ++kk) {
                if (binom_sf_geq(n, kk, p0) <= alpha) {
                    k = kk;
                    break;
                }
            }
            if (k < 0) continue;
            if (binom_sf_geq(n, k, p1) >= power) return n;
        } else {
            // Largest k with P(X <= k | p0) <= alpha.
            std::int64_t k = -1;
            for (std::int64_t kk = n; kk >= 0; --kk) {
                if (binom_cdf_leq(n, kk, p0) <= alpha) {
                    k = kk;
                    break;
                }
            }
            if (k < 0) continue;
            if (binom_cdf_leq(n, k, p1) >= power) return n;
        }
    }
    throw InvalidParams("sample_size_one_proportion: no n up to cap " +
                        std::to_string(n_cap) + " reaches the target power");
}

}  // namespace tempora
