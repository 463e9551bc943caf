#pragma once

#include <map>
#include <string>
#include <utility>

#include "mdexp/errors.hpp"
#include "mdexp/fixpoint.hpp"
#include "mdexp/kernels.hpp"
#include "mdexp/lambda.hpp"

namespace mdexp {

// Reconstructs the kernels J_2..J_K from the published coefficients a_2..a_K
// by a triangular sweep. At stage s the pipeline is run with the kernels
// solved so far and J_s..J_K = 0; the missing kernel enters g_s linearly
// with unit coefficient (the amplitude alpha_s contributes J_s p^s at
// leading order and nothing else reaches order p^s), so
//   J_s = a_s - g_s(J_2, ..., J_{s-1}).
// A stage fails if the residual polynomial leaves the admissible support
// window, which would make the resulting table inadmissible.
inline KernelTable solve_from_a_table(const ATable& a, int p_trunc) {
    const int k_top = a.max_k();
    if (k_top < 2) {
        throw SolveFailure(2, "coefficient table is empty");
    }
    if (p_trunc < k_top) {
        throw DomainError("p_trunc must cover every coefficient index");
    }
    for (int k = 2; k <= k_top; ++k) {
        if (a.coeffs().count(k) == 0) {
            throw SolveFailure(k, "coefficient table must cover k = 2.." +
                                      std::to_string(k_top) + " contiguously");
        }
    }

    std::map<int, BiSeries> solved;
    for (int s = 2; s <= k_top; ++s) {
        KernelTable partial(solved, uniform_kernel_growth_bound());
        auto [alpha, report] = iterate_to_stability(partial, p_trunc);
        const LambdaExpansion expansion = assemble_symbolic(alpha);
        const BiSeries residual = a.coeff_poly(s) - expansion.g_poly(s);

        const auto window = support_window(s);
        for (const auto& [key, c] : residual.terms()) {
            if (key.second < window.lo || key.second > window.hi) {
                throw SolveFailure(
                    s, "stage " + std::to_string(s) +
                           " residual leaves the support window at w^" +
                           std::to_string(key.second));
            }
        }
        if (!residual.is_zero()) {
            solved.emplace(s, residual);
        }
    }
    return KernelTable(std::move(solved), uniform_kernel_growth_bound());
}

} // namespace mdexp
