#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "mdexp/biseries.hpp"
#include "mdexp/errors.hpp"

namespace mdexp {

// Admissible w-power window for the index-k kernel (and for the p^i terms of
// the amplitudes): ceil(k/2) <= j <= k - 1. Empty at k = 1, which is why the
// whole machinery starts at k = 2.
struct SupportWindow {
    int lo;
    int hi;
};

inline SupportWindow support_window(int k) { return {(k + 1) / 2, k - 1}; }

struct SupportViolation {
    int k;       // kernel / amplitude index
    int w_power; // offending exponent
};

// Uniform growth bound 4e: the cluster-kernel magnitudes obey
// |J_k(1/d)| <= (4e)^k for every dimension d.
inline double uniform_kernel_growth_bound() { return 4.0 * std::numbers::e; }

// The sequence of cluster-expansion kernels J_2..J_K as exact polynomials in
// w = 1/d, together with a growth bound B meant to dominate |J_k(1/d)| by
// B^k. Indices not present count as zero. Immutable.
class KernelTable {
public:
    KernelTable() : bound_b_(uniform_kernel_growth_bound()) {}

    KernelTable(std::map<int, BiSeries> kernels, double bound_b)
        : kernels_(std::move(kernels)), bound_b_(bound_b) {
        if (bound_b_ <= 0) {
            throw DomainError("kernel bound must be positive");
        }
        for (const auto& [k, poly] : kernels_) {
            if (k < 2) {
                throw DomainError("kernel indices start at 2");
            }
            for (const auto& [key, c] : poly.terms()) {
                if (key.first != 0) {
                    throw DomainError("kernels must be polynomials in w only");
                }
            }
        }
    }

    const std::map<int, BiSeries>& kernels() const noexcept { return kernels_; }
    double bound_b() const noexcept { return bound_b_; }

    bool has_kernel(int k) const { return kernels_.count(k) != 0; }

    int max_k() const {
        return kernels_.empty() ? 1 : kernels_.rbegin()->first;
    }

    // J_k lifted into the working truncation order (zero when absent).
    BiSeries kernel_series(int k, int p_trunc) const {
        auto it = kernels_.find(k);
        if (it == kernels_.end()) {
            return BiSeries(p_trunc);
        }
        return it->second.with_p_trunc(p_trunc);
    }

    // Exact evaluation of J_k at w = 1/d.
    Rat eval_at_d(int k, int d) const {
        if (d < 1) {
            throw DomainError("dimension must be a positive integer");
        }
        Rat value(0);
        auto it = kernels_.find(k);
        if (it == kernels_.end()) {
            return value;
        }
        for (const auto& [key, c] : it->second.terms()) {
            value += c * rat_pow(Rat(1, d), static_cast<unsigned>(key.second));
        }
        return value;
    }

private:
    std::map<int, BiSeries> kernels_;
    double bound_b_;
};

// The published power-series coefficients a_k(d), k = 2..6, as exact
// polynomials in w = 1/d.
class ATable {
public:
    ATable() = default;

    explicit ATable(std::map<int, BiSeries> coeffs) : coeffs_(std::move(coeffs)) {
        for (const auto& [k, poly] : coeffs_) {
            if (k < 2) {
                throw DomainError("coefficient indices start at 2");
            }
            for (const auto& [key, c] : poly.terms()) {
                if (key.first != 0) {
                    throw DomainError("a_k must be polynomials in w only");
                }
            }
        }
    }

    const std::map<int, BiSeries>& coeffs() const noexcept { return coeffs_; }

    int max_k() const { return coeffs_.empty() ? 1 : coeffs_.rbegin()->first; }

    BiSeries coeff_poly(int k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? BiSeries(0) : it->second;
    }

private:
    std::map<int, BiSeries> coeffs_;
};

// The five known coefficients:
//   a_2 = (1/8) w
//   a_3 = (1/48) w^2
//   a_4 = (1/32) w^2 - (5/192) w^3
//   a_5 = (1/16) w^3 - (39/640) w^4
//   a_6 = (1/24) w^3 - (1/32) w^4 - (19/1920) w^5
inline ATable published_a_table() {
    auto mono = [](long num, long den, int j) {
        return BiSeries::monomial(Rat(num, den), 0, j, 0);
    };
    std::map<int, BiSeries> coeffs;
    coeffs.emplace(2, mono(1, 8, 1));
    coeffs.emplace(3, mono(1, 48, 2));
    coeffs.emplace(4, mono(1, 32, 2) + mono(-5, 192, 3));
    coeffs.emplace(5, mono(1, 16, 3) + mono(-39, 640, 4));
    coeffs.emplace(6, mono(1, 24, 3) + mono(-1, 32, 4) + mono(-19, 1920, 5));
    return ATable(std::move(coeffs));
}

// Reports every kernel term whose w-power falls outside the support window.
// Violations are data, not errors.
inline std::vector<SupportViolation> validate_support(const KernelTable& table) {
    std::vector<SupportViolation> violations;
    for (const auto& [k, poly] : table.kernels()) {
        const auto window = support_window(k);
        for (const auto& [key, c] : poly.terms()) {
            if (key.second < window.lo || key.second > window.hi) {
                violations.push_back({k, key.second});
            }
        }
    }
    return violations;
}

// Sum of |v| = 1/d over all nearest-neighbor dimers of Z^d overlapping a
// fixed dimer {0, e_1}, the fixed dimer included. Direct enumeration; the
// result is (4d - 1)/d and in particular never exceeds 4.
inline double u_norm(int d) {
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    using Site = std::vector<int>;
    const Site origin(static_cast<std::size_t>(d), 0);
    Site partner = origin;
    partner[0] = 1;

    std::set<std::pair<Site, Site>> overlapping;
    for (const Site& site : {origin, partner}) {
        for (int axis = 0; axis < d; ++axis) {
            for (int step : {-1, 1}) {
                Site neighbor = site;
                neighbor[static_cast<std::size_t>(axis)] += step;
                overlapping.insert(std::minmax(site, neighbor));
            }
        }
    }
    const double total =
        static_cast<double>(overlapping.size()) / static_cast<double>(d);
    if (total > 4.0 + 1e-12) {
        throw InternalError("dimer overlap weight exceeded 4");
    }
    return total;
}

// Sum of |v(i, j)| over all neighbors j of a fixed site i: 2d edges at
// weight 1/d each.
inline double site_weight_sum(int d) {
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    int neighbors = 0;
    for (int axis = 0; axis < d; ++axis) {
        neighbors += 2;
    }
    return static_cast<double>(neighbors) / static_cast<double>(d);
}

// True iff |J_k(1/d)| <= B^k for every stored kernel and every listed d.
inline bool kernel_bound_check(const KernelTable& table, double bound,
                               const std::vector<int>& d_list) {
    for (const auto& [k, poly] : table.kernels()) {
        const double cap = std::pow(bound, k);
        for (int d : d_list) {
            const double value = std::fabs(rat_to_double(table.eval_at_d(k, d)));
            if (value > cap) {
                return false;
            }
        }
    }
    return true;
}

} // namespace mdexp
