#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "mdexp/biseries.hpp"
#include "mdexp/errors.hpp"
#include "mdexp/kernels.hpp"

namespace mdexp {

// Amplitude sequence alpha_2..alpha_K as exact truncated series in p and w.
// At any iterate, every term of entries[k] has p-power i >= k and w-power j
// with ceil(i/2) <= j <= i - 1.
struct AlphaSymbolic {
    std::map<int, BiSeries> entries; // k -> series
    int p_trunc = 0;

    static AlphaSymbolic zero(int p_trunc, int k_max) {
        AlphaSymbolic a;
        a.p_trunc = p_trunc;
        for (int k = 2; k <= k_max; ++k) {
            a.entries.emplace(k, BiSeries(p_trunc));
        }
        return a;
    }

    int k_max() const { return entries.empty() ? 1 : entries.rbegin()->first; }

    friend bool operator==(const AlphaSymbolic& a, const AlphaSymbolic& b) {
        return a.entries == b.entries;
    }
};

// Amplitude sequence at a fixed (p, d); values[idx] holds alpha_{idx + 2}.
struct AlphaNumeric {
    std::vector<double> values;
    double p_val = 0.0;
    int d_val = 1;

    static AlphaNumeric zero(std::size_t count, double p, int d) {
        return AlphaNumeric{std::vector<double>(count, 0.0), p, d};
    }

    int k_max() const { return static_cast<int>(values.size()) + 1; }

    double at_k(int k) const {
        return values[static_cast<std::size_t>(k - 2)];
    }
};

struct IterationReport {
    int iterations = 0;
    double residual = 0.0;  // numeric mode
    int stable_order = -1;  // symbolic mode: p-order through which stability held
    bool converged = false;
};

struct AlphaSupportViolation {
    int k;
    int p_power;
    int w_power;
};

// Weighted sequence norm sum_k 2^k |alpha_k|.
inline double weighted_alpha_norm(const std::vector<double>& values) {
    double total = 0.0;
    double weight = 4.0; // 2^2
    for (double v : values) {
        total += weight * std::fabs(v);
        weight *= 2.0;
    }
    return total;
}

inline double weighted_diff_norm(const std::vector<double>& a,
                                 const std::vector<double>& b) {
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff[i] = a[i] - b[i];
    }
    return weighted_alpha_norm(diff);
}

// One pass of the master recursion in exact arithmetic:
//   alpha'_k = (J_k p^k) * (1 - 2 sigma)^{-2k} * (1 - 2 sigma / p)^k,
// with sigma = sum_i i * alpha_i taken from the previous iterate
// (simultaneous substitution). Entries violating the p-power >= k structure
// surface as NotDivisibleByP from the sigma / p factor.
inline AlphaSymbolic apply_master1_symbolic(const KernelTable& table,
                                            const AlphaSymbolic& alpha) {
    const int p_trunc = alpha.p_trunc;
    BiSeries sigma(p_trunc);
    for (const auto& [k, series] : alpha.entries) {
        sigma = sigma + series * Rat(k);
    }
    const BiSeries one = BiSeries::constant(Rat(1), p_trunc);
    const BiSeries base = one - sigma * Rat(2);
    const BiSeries base_over_p = one - div_by_p(sigma) * Rat(2);

    AlphaSymbolic next;
    next.p_trunc = p_trunc;
    for (const auto& [k, series] : alpha.entries) {
        const BiSeries kernel = table.kernel_series(k, p_trunc);
        if (kernel.is_zero()) {
            next.entries.emplace(k, BiSeries(p_trunc));
            continue;
        }
        BiSeries value = kernel * BiSeries::monomial(Rat(1), k, 0, p_trunc);
        value = value * geom_inverse(pow(base, 2 * k));
        value = value * pow(base_over_p, k);
        next.entries.emplace(k, std::move(value));
    }
    return next;
}

// Iterates the recursion from the all-zero sequence until two consecutive
// iterates agree exactly as rational series. Each pass fixes one further
// p-order, so stability arrives within p_trunc passes; a miss after
// p_trunc + 2 passes indicates a bug.
inline std::pair<AlphaSymbolic, IterationReport>
iterate_to_stability(const KernelTable& table, int p_trunc) {
    const int k_max = p_trunc >= 2 ? p_trunc : 2;
    AlphaSymbolic current = AlphaSymbolic::zero(p_trunc, k_max);
    IterationReport report;
    for (int pass = 1; pass <= p_trunc + 2; ++pass) {
        AlphaSymbolic next = apply_master1_symbolic(table, current);
        report.iterations = pass;
        if (next == current) {
            report.converged = true;
            report.stable_order = p_trunc;
            return {std::move(next), report};
        }
        current = std::move(next);
    }
    throw InternalError("symbolic iteration failed to stabilize");
}

// Numeric counterpart of the recursion at fixed (p, d). The input vector may
// be longer than the kernel coverage; sigma is formed from every entry while
// absent kernels produce zero amplitudes.
inline AlphaNumeric apply_master1_numeric(const KernelTable& table,
                                          const AlphaNumeric& alpha) {
    AlphaNumeric next = AlphaNumeric::zero(alpha.values.size(), alpha.p_val,
                                           alpha.d_val);
    if (alpha.p_val == 0.0) {
        return next;
    }
    double sigma = 0.0;
    for (std::size_t idx = 0; idx < alpha.values.size(); ++idx) {
        sigma += static_cast<double>(idx + 2) * alpha.values[idx];
    }
    const double denom = 1.0 - 2.0 * sigma;
    if (denom <= 0.0) {
        throw OutsideDomain("denominator 1 - 2 sigma is not positive");
    }
    const double ratio_factor = 1.0 - 2.0 * sigma / alpha.p_val;
    for (std::size_t idx = 0; idx < alpha.values.size(); ++idx) {
        const int k = static_cast<int>(idx) + 2;
        if (!table.has_kernel(k)) {
            continue;
        }
        const double kernel = rat_to_double(table.eval_at_d(k, alpha.d_val));
        const double value = kernel * std::pow(alpha.p_val, k) *
                             std::pow(denom, -2 * k) *
                             std::pow(ratio_factor, k);
        if (!std::isfinite(value)) {
            throw OutsideDomain("amplitude update is not finite");
        }
        next.values[idx] = value;
    }
    return next;
}

inline constexpr int kDefaultNumericIterationCap = 10000;
inline constexpr int kDefaultNumericKMax = 32;
inline constexpr double kDefaultNumericTol = 1e-13;

// Fixed-point iteration from a given start until the weighted norm of the
// update falls below tol. Returns the final iterate and the residual
// ||f(alpha) - alpha|| actually reached.
inline std::pair<AlphaNumeric, IterationReport>
iterate_numeric_from(const KernelTable& table, AlphaNumeric start, double tol,
                     int max_iterations = kDefaultNumericIterationCap) {
    if (tol <= 0) {
        throw DomainError("tolerance must be positive");
    }
    if (start.p_val < 0) {
        throw DomainError("p must be nonnegative");
    }
    AlphaNumeric current = std::move(start);
    IterationReport report;
    for (int pass = 1; pass <= max_iterations; ++pass) {
        AlphaNumeric next = apply_master1_numeric(table, current);
        report.iterations = pass;
        report.residual = weighted_diff_norm(next.values, current.values);
        current = std::move(next);
        if (report.residual < tol) {
            report.converged = true;
            return {std::move(current), report};
        }
    }
    throw MaxIterationsExceeded("numeric fixed-point iteration hit the cap");
}

inline std::pair<AlphaNumeric, IterationReport>
iterate_numeric(const KernelTable& table, double p, int d, double tol,
                int max_iterations = kDefaultNumericIterationCap,
                int k_max = kDefaultNumericKMax) {
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    const int k_top = std::max(2, std::min(k_max, table.max_k()));
    AlphaNumeric start =
        AlphaNumeric::zero(static_cast<std::size_t>(k_top - 1), p, d);
    return iterate_numeric_from(table, std::move(start), tol, max_iterations);
}

// Support-window audit of a symbolic iterate: every term must satisfy
// i >= k (i == k exactly in strict mode, which holds for a first iterate)
// and ceil(i/2) <= j <= i - 1.
inline std::vector<AlphaSupportViolation>
support_check(const AlphaSymbolic& alpha, bool strict_first_iterate = false) {
    std::vector<AlphaSupportViolation> violations;
    for (const auto& [k, series] : alpha.entries) {
        for (const auto& [key, c] : series.terms()) {
            const auto [i, j] = key;
            const auto window = support_window(i);
            const bool i_ok = strict_first_iterate ? (i == k) : (i >= k);
            if (!i_ok || j < window.lo || j > window.hi) {
                violations.push_back({k, i, j});
            }
        }
    }
    return violations;
}

} // namespace mdexp
