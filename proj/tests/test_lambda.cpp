#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mdexp/kernel_solve.hpp"
#include "mdexp/lambda.hpp"
#include "mdexp/lattice.hpp"
#include "test_support.hpp"

using namespace mdexp;

namespace {

const KernelTable& solved_table() {
    static const KernelTable table = solve_from_a_table(published_a_table(), 6);
    return table;
}

const LambdaExpansion& solved_expansion(int p_trunc) {
    static std::map<int, LambdaExpansion> cache;
    auto it = cache.find(p_trunc);
    if (it == cache.end()) {
        auto [alpha, report] = iterate_to_stability(solved_table(), p_trunc);
        it = cache.emplace(p_trunc, assemble_symbolic(alpha)).first;
    }
    return it->second;
}

double series_lambda(const LambdaExpansion& expansion, double p, int d) {
    double total = s_eval(p, d);
    for (const auto& [s, value] : a_table(expansion, d)) {
        total += rat_to_double(value) * std::pow(p, s);
    }
    return total;
}

} // namespace

TEST_CASE("entropy term") {
    CHECK(s_eval(0.0, 3) == 0.0);
    CHECK_THAT(s_eval(1.0, 1),
               Catch::Matchers::WithinAbs((std::log(2.0) - 1.0) / 2.0, 1e-15));
    CHECK_THAT(s_eval(0.5, 1),
               Catch::Matchers::WithinAbs(std::log(2.0) - 0.25, 1e-15));
    CHECK_THROWS_AS(s_eval(-0.1, 1), DomainError);
    CHECK_THROWS_AS(s_eval(1.1, 1), DomainError);
    CHECK_THROWS_AS(s_eval(0.5, 0), DomainError);
}

TEST_CASE("assembly of the pressure expansion") {
    SECTION("zero amplitudes give an empty expansion") {
        const LambdaExpansion empty =
            assemble_symbolic(AlphaSymbolic::zero(6, 6));
        CHECK(empty.g.empty());
    }
    SECTION("solved kernels reproduce the published coefficients") {
        const LambdaExpansion& L = solved_expansion(8);
        const ATable a = published_a_table();
        for (int s = 2; s <= 6; ++s) {
            CHECK(L.g_poly(s) == a.coeff_poly(s));
        }
        // spot the two ends of the table explicitly
        CHECK(L.g_poly(2) == BiSeries::monomial(Rat(1, 8), 0, 1, 0));
        CHECK(L.g_poly(6).coeff(0, 3) == Rat(1, 24));
        CHECK(L.g_poly(6).coeff(0, 4) == Rat(-1, 32));
        CHECK(L.g_poly(6).coeff(0, 5) == Rat(-19, 1920));
    }
    SECTION("support violations are rejected") {
        AlphaSymbolic bad = AlphaSymbolic::zero(4, 4);
        // p^2 w^0 sits below the admissible w window and survives into the sum
        bad.entries.at(2) = BiSeries::monomial(Rat(1, 3), 2, 0, 4);
        CHECK_THROWS_AS(assemble_symbolic(bad), ExpansionSupportViolation);
    }
}

TEST_CASE("coefficient grid holds the published value at (4, 3)") {
    const LambdaExpansion& L = solved_expansion(8);
    CHECK(L.g_poly(4).coeff(0, 3) == Rat(-5, 192));
}

TEST_CASE("a-table evaluation") {
    const LambdaExpansion& L = solved_expansion(8);
    const auto a1 = a_table(L, 1);
    CHECK(a1.at(2) == Rat(1, 8));
    CHECK(a1.at(3) == Rat(1, 48));
    CHECK(a1.at(4) == Rat(1, 192));
    CHECK(a1.at(5) == Rat(1, 640));
    CHECK(a1.at(6) == Rat(1, 1920));
    CHECK(a_table(L, 2).at(2) == Rat(1, 16));
    CHECK_THROWS_AS(a_table(L, 0), DomainError);
}

TEST_CASE("w-regrouped coefficients match the inverse-dimension data") {
    const auto c = c_table(solved_expansion(8), 3);
    CHECK(c.at(1).at(2) == Rat(1, 8));
    CHECK(c.at(1).size() == 1);
    CHECK(c.at(2).at(3) == Rat(2, 96));
    CHECK(c.at(2).at(4) == Rat(3, 96));
    CHECK(c.at(3).at(4) == Rat(-5, 192));
    CHECK(c.at(3).at(5) == Rat(12, 192));
    CHECK(c.at(3).at(6) == Rat(8, 192));
}

TEST_CASE("numeric pressure evaluation") {
    const KernelTable& t = solved_table();
    SECTION("empty cover at p = 0") {
        CHECK(eval_numeric(t, 0.0, 3) == 0.0);
    }
    SECTION("one dimension against the closed form") {
        // The fixed point resums kernels only through k = 6, so the gap to
        // the closed form is the missing-kernel term ~ |J_7(1)| p^7.
        for (double p : {0.05, 0.1, 0.2}) {
            CHECK(std::fabs(eval_numeric(t, p, 1, 1e-15) - lambda1_exact(p)) <=
                  0.5 * std::pow(p, 7));
        }
        // The truncated series itself sits within the exact tail bound.
        double tail = 0.0;
        for (int k = 7; k <= 400; ++k) {
            tail += std::pow(0.1, k) / (static_cast<double>(k) * (k - 1));
        }
        CHECK(std::fabs(series_lambda(solved_expansion(6), 0.2, 1) -
                        lambda1_exact(0.2)) <= tail + 1e-12);
    }
    SECTION("tiny p: the correction is the leading series term") {
        const double p = 1e-5;
        const LambdaExpansion& L = solved_expansion(6);
        const double corr = eval_numeric(t, p, 3, 1e-18) - s_eval(p, 3);
        const double leading = rat_to_double(a_table(L, 3).at(2)) * p * p;
        double full = 0.0;
        for (const auto& [s, value] : a_table(L, 3)) {
            full += rat_to_double(value) * std::pow(p, s);
        }
        // The next series term is ~5.6e-7 relative; the double-precision
        // floor on extracting lambda - S is ~2e-9 relative.
        CHECK(std::fabs(corr - leading) / leading < 1e-6);
        CHECK(std::fabs(corr - full) / full < 1e-8);
    }
}

TEST_CASE("truncation stability of the regrouped coefficients") {
    for (int s = 2; s <= 6; ++s) {
        CHECK(solved_expansion(s).g_poly(s) == solved_expansion(s + 2).g_poly(s));
    }
}

TEST_CASE("partial sums decay geometrically inside the certified radius") {
    const LambdaExpansion& L = solved_expansion(6);
    const double p = 1.4e-5;
    for (int d = 1; d <= 5; ++d) {
        const auto a = a_table(L, d);
        double previous = -1.0;
        for (int s = 2; s <= 6; ++s) {
            const double increment =
                std::fabs(rat_to_double(a.at(s))) * std::pow(p, s);
            if (previous > 0.0) {
                CHECK(increment <= 0.5 * previous);
            }
            if (increment > 0.0) {
                previous = increment;
            }
        }
    }
}

TEST_CASE("resummation difference scales like the first dropped order") {
    // At p below ~1e-2 the difference between the fixed-point route and the
    // truncated series sinks into double rounding noise, so the slope is
    // measured on [8e-3, 6.4e-2].
    const KernelTable& t = solved_table();
    const LambdaExpansion& L = solved_expansion(6);
    for (int d : {1, 2, 3}) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double p : {8e-3, 1.6e-2, 3.2e-2, 6.4e-2}) {
            const double diff = std::fabs(eval_numeric(t, p, d, 1e-16) -
                                          series_lambda(L, p, d));
            REQUIRE(diff > 0.0);
            const double x = std::log(p);
            const double y = std::log(diff);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope >= 6.0 + 1.0 - 0.1); // p_trunc + 1 - 0.1
    }
}
