#include "reqclass/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace reqclass {

namespace {

// Two-sided alpha = 0.05, n = 5..30.
constexpr std::array<int, 26> kWilcoxonTable{-1, 0,  2,  3,  5,  8,  10, 13, 17, 21,  25,  29,  34,
                                             40, 46, 52, 58, 65, 73, 81, 89, 98, 107, 116, 126, 137};

// alpha = 0.05, n = 4..10; 0 marks "not attainable".
constexpr std::array<double, 7> kSpearmanTwoSided{0.0, 1.000, 0.886, 0.786, 0.738, 0.700, 0.648};
constexpr std::array<double, 7> kSpearmanOneSided{1.000, 0.900, 0.829, 0.714, 0.643, 0.600, 0.564};

std::optional<double> exact_wilcoxon_critical(std::size_t n) {
    const std::size_t max_sum = n * (n + 1) / 2;
    std::vector<long double> p(max_sum + 1, 0.0L);
    p[0] = 1.0L;
    // Descending s so p[s - r] still holds the previous round.
    for (std::size_t r = 1; r <= n; ++r)
        for (auto s = static_cast<std::ptrdiff_t>(max_sum); s >= 0; --s) {
            const auto u = static_cast<std::size_t>(s);
            p[u] = 0.5L * (p[u] + (u >= r ? p[u - r] : 0.0L));
        }
    std::optional<double> crit;
    long double cumulative = 0.0L;
    for (std::size_t w = 0; w <= max_sum; ++w) {
        cumulative += p[w];
        if (2.0L * cumulative > kAlpha) break;
        crit = static_cast<double>(w);
    }
    return crit;
}

}  // namespace

std::vector<double> mid_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] - values[order[j - 1]] <= kTieTolerance) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

std::optional<double> wilcoxon_critical_value(std::size_t n) {
    if (n < 5) return std::nullopt;
    if (n <= 30) {
        const int v = kWilcoxonTable[n - 5];
        return v < 0 ? std::nullopt : std::optional<double>(v);
    }
    return exact_wilcoxon_critical(n);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> diffs;
    for (const auto& [x, y] : pairs) {
        const double d = x - y;
        if (std::abs(d) > kTieTolerance) diffs.push_back(d);
    }
    if (diffs.size() < 5)
        throw DomainError("Wilcoxon test needs at least 5 nonzero differences, got " + std::to_string(diffs.size()));

    std::vector<double> magnitudes(diffs.size());
    std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
    const auto ranks = mid_ranks(magnitudes);

    WilcoxonResult r;
    r.n = diffs.size();
    for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? r.t_plus : r.t_minus) += ranks[i];
    r.w = std::min(r.t_plus, r.t_minus);
    r.critical_value = wilcoxon_critical_value(r.n);
    r.significant = r.critical_value && r.w <= *r.critical_value;
    return r;
}

std::optional<double> spearman_critical_value(std::size_t n, bool two_sided) {
    if (n < 4) return std::nullopt;
    if (n <= 10) {
        const double v = (two_sided ? kSpearmanTwoSided : kSpearmanOneSided)[n - 4];
        return v > 0.0 ? std::optional<double>(v) : std::nullopt;
    }
    const double df = static_cast<double>(n - 2);
    boost::math::students_t dist(df);
    const double t = boost::math::quantile(dist, two_sided ? 1.0 - kAlpha / 2.0 : 1.0 - kAlpha);
    return t / std::sqrt(df + t * t);
}

SpearmanResult spearman_rho(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DomainError("Spearman: series lengths differ");
    if (xs.size() < 4) throw DomainError("Spearman: need at least 4 paired observations");
    const auto rx = mid_ranks(xs);
    const auto ry = mid_ranks(ys);
    const double n = static_cast<double>(rx.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean, dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("Spearman: rho is undefined for a constant series");

    SpearmanResult r;
    r.n = rx.size();
    r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    constexpr double eps = 1e-12;
    r.critical_value = spearman_critical_value(r.n, true);
    r.significant = r.critical_value && std::abs(r.rho) + eps >= *r.critical_value;
    r.critical_value_one_sided = spearman_critical_value(r.n, false);
    r.significant_one_sided = r.critical_value_one_sided && std::abs(r.rho) + eps >= *r.critical_value_one_sided;
    return r;
}

}  // namespace reqclass
