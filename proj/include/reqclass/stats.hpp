#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "reqclass/error.hpp"

namespace reqclass {

inline constexpr double kAlpha = 0.05;

/// Paired-difference values closer than this are tied; |d| below it counts as zero.
inline constexpr double kTieTolerance = 1e-9;

struct WilcoxonResult {
    double t_plus = 0.0;
    double t_minus = 0.0;
    double w = 0.0;  // min(t_plus, t_minus)
    std::size_t n = 0;  // pairs left after dropping zero differences
    std::optional<double> critical_value;  // two-sided, alpha 0.05; none when unreachable
    bool significant = false;  // w <= critical_value
};

struct SpearmanResult {
    double rho = 0.0;
    std::size_t n = 0;
    std::optional<double> critical_value;  // two-sided, alpha 0.05
    bool significant = false;               // |rho| >= critical_value
    std::optional<double> critical_value_one_sided;
    bool significant_one_sided = false;     // in the direction of rho's sign
};

/// Mid-ranks (1-based) with values within kTieTolerance treated as equal.
std::vector<double> mid_ranks(std::span<const double> values);

/// Largest W with two-sided P(W <= w) <= alpha for n untied pairs; nullopt if none.
/// Published table for n = 5..30, exact null distribution beyond.
std::optional<double> wilcoxon_critical_value(std::size_t n);

/// Differences are d = first - second. Requires >= 5 nonzero differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

/// Critical |rho| at alpha 0.05. Table for n = 4..10, Student-t approximation beyond.
std::optional<double> spearman_critical_value(std::size_t n, bool two_sided = true);

/// Pearson correlation of mid-ranks. Requires equal lengths >= 4 and non-constant series.
SpearmanResult spearman_rho(std::span<const double> xs, std::span<const double> ys);

}  // namespace reqclass
