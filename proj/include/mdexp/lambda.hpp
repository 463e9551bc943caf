#pragma once

#include <cmath>
#include <map>

#include "mdexp/biseries.hpp"
#include "mdexp/errors.hpp"
#include "mdexp/fixpoint.hpp"
#include "mdexp/kernels.hpp"

namespace mdexp {

// lambda_d(p) - S regrouped as a power series in p: g maps the p-order s to
// an exact polynomial in w = 1/d whose support sits in the window
// ceil(s/2) <= j <= s - 1.
struct LambdaExpansion {
    std::map<int, BiSeries> g; // s -> w-polynomial (p_trunc 0)
    int p_trunc = 0;

    BiSeries g_poly(int s) const {
        auto it = g.find(s);
        return it == g.end() ? BiSeries(0) : it->second;
    }
};

namespace detail {

inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

// sum_{k>=2} x^k / k = -ln(1-x) - x, evaluated stably: direct series
// summation for small |x| avoids the cancellation of ln(1-x) + x.
inline double log_tail_value(double x) {
    if (x >= 1.0) {
        throw OutsideDomain("logarithm argument is not positive");
    }
    if (std::fabs(x) < 0.125) {
        double total = 0.0;
        double power = x;
        for (int k = 2; k <= 64; ++k) {
            power *= x;
            const double term = power / k;
            total += term;
            if (std::fabs(term) < 1e-30 * (1.0 + std::fabs(total))) {
                break;
            }
        }
        return total;
    }
    return -std::log1p(-x) - x;
}

} // namespace detail

// Entropy term S = (p/2) ln(2d) - (p/2) ln p - (1-p) ln(1-p) - p/2, with the
// convention 0 ln 0 = 0 at both endpoints.
inline double s_eval(double p, int d) {
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    if (p < 0.0 || p > 1.0) {
        throw DomainError("s_eval requires p in [0, 1]");
    }
    return 0.5 * p * std::log(2.0 * d) - 0.5 * detail::xlogx(p) -
           detail::xlogx(1.0 - p) - 0.5 * p;
}

// Assembles lambda - S from a solved amplitude sequence:
//   sum_i alpha_i - log_tail(2 sigma) + (p/2) log_tail(2 sigma / p),
// then reads off the g_s. Throws ExpansionSupportViolation if any resulting term falls
// outside the support window.
inline LambdaExpansion assemble_symbolic(const AlphaSymbolic& alpha) {
    const int p_trunc = alpha.p_trunc;
    BiSeries sigma(p_trunc);
    BiSeries alpha_sum(p_trunc);
    for (const auto& [k, series] : alpha.entries) {
        alpha_sum = alpha_sum + series;
        sigma = sigma + series * Rat(k);
    }
    const BiSeries half_p = BiSeries::monomial(Rat(1, 2), 1, 0, p_trunc);
    const BiSeries lambda_minus_s = alpha_sum - log_tail(sigma * Rat(2)) +
                                    half_p * log_tail(div_by_p(sigma) * Rat(2));

    LambdaExpansion expansion;
    expansion.p_trunc = p_trunc;
    for (const auto& [key, c] : lambda_minus_s.terms()) {
        const auto [s, j] = key;
        const auto window = support_window(s);
        if (j < window.lo || j > window.hi) {
            throw ExpansionSupportViolation("assembled term p^" + std::to_string(s) +
                                  " w^" + std::to_string(j) +
                                  " is outside the support window");
        }
        auto [it, inserted] = expansion.g.emplace(s, BiSeries(0));
        it->second = it->second + BiSeries::monomial(c, 0, j, 0);
    }
    return expansion;
}

// a_s(d): the g_s evaluated exactly at w = 1/d, for s = 2..p_trunc.
inline std::map<int, Rat> a_table(const LambdaExpansion& expansion, int d) {
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    std::map<int, Rat> values;
    for (int s = 2; s <= expansion.p_trunc; ++s) {
        Rat value(0);
        auto it = expansion.g.find(s);
        if (it != expansion.g.end()) {
            for (const auto& [key, c] : it->second.terms()) {
                value += c * rat_pow(Rat(1, d), static_cast<unsigned>(key.second));
            }
        }
        values.emplace(s, std::move(value));
    }
    return values;
}

// Regroups the (p-order, w-order) grid by w-power: c_k(p) collects the
// coefficient of w^k across all retained p-orders.
inline std::map<int, std::map<int, Rat>> c_table(const LambdaExpansion& expansion,
                                                 int k_max) {
    std::map<int, std::map<int, Rat>> table;
    for (int k = 1; k <= k_max; ++k) {
        table.emplace(k, std::map<int, Rat>{});
    }
    for (const auto& [s, poly] : expansion.g) {
        for (const auto& [key, c] : poly.terms()) {
            const int k = key.second;
            if (k >= 1 && k <= k_max) {
                table[k].emplace(s, c);
            }
        }
    }
    return table;
}

// lambda_d(p) through the numeric fixed point:
//   S + sum alpha_i + ln(1 - 2 sigma) + 2 sigma
//     + (p/2)(-ln(1 - 2 sigma / p) - 2 sigma / p).
// The two tail sums are evaluated by the stable closed form above.
inline double eval_numeric(const KernelTable& table, double p, int d,
                           double tol = kDefaultNumericTol) {
    if (p < 0.0 || p > 1.0) {
        throw DomainError("eval_numeric requires p in [0, 1]");
    }
    if (p == 0.0) {
        return 0.0;
    }
    auto [alpha, report] = iterate_numeric(table, p, d, tol);
    double sigma = 0.0;
    double alpha_sum = 0.0;
    for (std::size_t idx = 0; idx < alpha.values.size(); ++idx) {
        sigma += static_cast<double>(idx + 2) * alpha.values[idx];
        alpha_sum += alpha.values[idx];
    }
    const double x_whole = 2.0 * sigma;
    const double x_over_p = 2.0 * sigma / p;
    if (x_whole >= 1.0 || x_over_p >= 1.0) {
        throw OutsideDomain("fixed point is outside the logarithm domain");
    }
    return s_eval(p, d) + alpha_sum - detail::log_tail_value(x_whole) +
           0.5 * p * detail::log_tail_value(x_over_p);
}

} // namespace mdexp
