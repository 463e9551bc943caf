#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mdexp/errors.hpp"
#include "mdexp/fixpoint.hpp"
#include "mdexp/kernels.hpp"

namespace mdexp {

// Convergence certificate: with kernel growth bound B and admissible
// epsilon, the recursion maps the ball ||alpha|| <= p*eps into its half for
// every p <= p0, hence contracts to a unique fixed point there.
struct Certificate {
    double bound_b = 0.0;
    double epsilon = 0.0;
    double p0 = 0.0;
    int binding_k = 0; // index attaining the radius minimum; 0 means the k->infinity limit
    double map_margin = 0.0;
    std::optional<double> contraction_ratio;
};

// Largest epsilon in (0, 1/2) satisfying both admissibility conditions
//   (1/2) (1 + 2 eps) / (1 - 2 eps)^2 <= 1   and   6 eps / (1 - 2 eps) <= 1.
// The first rearranges to 8 eps^2 - 10 eps + 1 >= 0 with lower root
// (5 - sqrt(17))/8, the second to eps <= 1/8; the smaller of the two wins.
inline double eps_max() {
    const double quadratic_root = (5.0 - std::sqrt(17.0)) / 8.0;
    return std::min(0.125, quadratic_root);
}

// Left-hand side of the ball-mapping admissibility condition.
inline double eps_condition_lhs(double eps) {
    const double denom = 1.0 - 2.0 * eps;
    return 0.5 * (1.0 + 2.0 * eps) / (denom * denom);
}

// Left-hand side of the contraction admissibility condition.
inline double eps_contraction_lhs(double eps) {
    return 6.0 * eps / (1.0 - 2.0 * eps);
}

// Certified radius: the largest p with p^{k-1} B^k <= eps / 8^k for every
// k >= 2, i.e. min_k eps^{1/(k-1)} (8B)^{-k/(k-1)}, scanned over k = 2..64
// and compared against the k->infinity limit 1/(8B). Returns the radius and
// the minimizing k (0 when the limit itself binds).
inline std::pair<double, int> p0(double bound_b, double eps) {
    if (bound_b <= 0) {
        throw DomainError("kernel bound must be positive");
    }
    if (eps <= 0 || eps >= 0.5) {
        throw DomainError("epsilon must lie in (0, 1/2)");
    }
    const double limit = 1.0 / (8.0 * bound_b);
    double best = limit;
    int binding_k = 0;
    for (int k = 2; k <= 64; ++k) {
        const double exponent = 1.0 / (k - 1.0);
        const double term = std::pow(eps, exponent) *
                            std::pow(8.0 * bound_b, -k * exponent);
        if (term < best) {
            best = term;
            binding_k = k;
        }
    }
    return {best, binding_k};
}

// Weighted sequence norm sum_k 2^k |alpha_k| (numbers).
inline double alpha_norm(const AlphaNumeric& alpha) {
    return weighted_alpha_norm(alpha.values);
}

// The same norm for a symbolic sequence evaluated at (p, 1/d), using the
// coefficient-absolute-value polynomial norm per entry.
inline double alpha_norm(const AlphaSymbolic& alpha, double p_val, int d_val) {
    double total = 0.0;
    for (const auto& [k, series] : alpha.entries) {
        total += std::pow(2.0, k) * series.p_norm_at(p_val, d_val);
    }
    return total;
}

inline constexpr int kMembershipScanKMax = 16;

// One application of the recursion from the worst corners of the ball
// ||alpha|| <= p*eps (all mass on a single signed coordinate, every k
// scanned) and from zero; certifies ||alpha'|| <= p*eps/2. Leaving the
// domain of the equations counts as a violation: the ball is then certainly
// not carried into itself.
inline Certificate certify_membership(const KernelTable& table, double p, int d,
                                      double eps) {
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    if (p < 0) {
        throw DomainError("p must be nonnegative");
    }
    // the certificate only means something for an admissible epsilon
    if (eps_condition_lhs(eps) > 1.0 + 1e-9 ||
        eps_contraction_lhs(eps) > 1.0 + 1e-9) {
        throw DomainError("epsilon fails the admissibility conditions");
    }
    auto [radius, binding_k] = p0(table.bound_b(), eps);
    if (p > radius) {
        throw DomainError("p exceeds the certified radius for this bound");
    }

    const double ball = p * eps;
    const int k_scan = std::max(kMembershipScanKMax, table.max_k());
    const std::size_t count = static_cast<std::size_t>(k_scan - 1);

    double worst = 0.0;
    int worst_k = 0;
    auto probe = [&](const AlphaNumeric& start, int source_k) {
        AlphaNumeric image;
        try {
            image = apply_master1_numeric(table, start);
        } catch (const OutsideDomain& e) {
            throw MembershipViolated(
                std::string("ball corner left the domain: ") + e.what());
        }
        const double norm = alpha_norm(image);
        if (norm > worst) {
            worst = norm;
            worst_k = source_k;
        }
    };

    probe(AlphaNumeric::zero(count, p, d), 0);
    for (int k = 2; k <= k_scan; ++k) {
        for (double sign : {1.0, -1.0}) {
            AlphaNumeric corner = AlphaNumeric::zero(count, p, d);
            corner.values[static_cast<std::size_t>(k - 2)] =
                sign * ball / std::pow(2.0, k);
            probe(corner, k);
        }
    }

    if (worst > 0.5 * ball) {
        throw MembershipViolated(
            "image norm " + std::to_string(worst) + " exceeds p*eps/2 = " +
            std::to_string(0.5 * ball) + " (worst corner k = " +
            std::to_string(worst_k) + ")");
    }

    Certificate cert;
    cert.bound_b = table.bound_b();
    cert.epsilon = eps;
    cert.p0 = radius;
    cert.binding_k = binding_k;
    cert.map_margin = 0.5 * ball - worst;
    return cert;
}

// Maximum ratio ||alpha^{n+1} - alpha^n|| / ||alpha^n - alpha^{n-1}|| over a
// fixed-point run from zero. Exactly coinciding iterates report ratio 0.
inline double empirical_contraction(const KernelTable& table, double p, int d,
                                    int n_iters) {
    if (n_iters < 1) {
        throw DomainError("need at least one iteration");
    }
    if (d < 1) {
        throw DomainError("dimension must be a positive integer");
    }
    const int k_top = std::max(2, table.max_k());
    AlphaNumeric current =
        AlphaNumeric::zero(static_cast<std::size_t>(k_top - 1), p, d);
    double previous_step = -1.0;
    double worst_ratio = 0.0;
    for (int pass = 0; pass < n_iters; ++pass) {
        AlphaNumeric next = apply_master1_numeric(table, current);
        const double step = weighted_diff_norm(next.values, current.values);
        current = std::move(next);
        if (step == 0.0) {
            return worst_ratio;
        }
        if (previous_step > 0.0) {
            worst_ratio = std::max(worst_ratio, step / previous_step);
        }
        previous_step = step;
    }
    return worst_ratio;
}

} // namespace mdexp
