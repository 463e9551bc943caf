#include <catch2/catch_amalgamated.hpp>

#include "mdexp/biseries.hpp"
#include "test_support.hpp"

using namespace mdexp;

namespace {

BiSeries mono(long num, long den, int i, int j, int p_trunc) {
    return BiSeries::monomial(Rat(num, den), i, j, p_trunc);
}

} // namespace

TEST_CASE("rational parsing and rendering") {
    CHECK(rat_from_string("1/8") == Rat(1, 8));
    CHECK(rat_from_string("-5/192") == Rat(-5, 192));
    CHECK(rat_from_string("3") == Rat(3));
    CHECK(rat_to_string(Rat(-2, 4)) == "-1/2");
    CHECK_THROWS_AS(rat_from_string("1/0"), DomainError);
    CHECK_THROWS_AS(rat_from_string("zebra"), DomainError);
}

TEST_CASE("series addition") {
    const int T = 4;
    CHECK((mono(1, 1, 1, 0, T) + mono(-1, 1, 1, 0, T)).is_zero());
    CHECK(mono(1, 8, 1, 1, T) + mono(1, 8, 1, 1, T) == mono(1, 4, 1, 1, T));

    BiSeries disj = mono(1, 1, 2, 0, 3) + mono(1, 1, 1, 1, 3) + mono(1, 1, 3, 0, 3);
    CHECK(disj.coeff(2, 0) == 1);
    CHECK(disj.coeff(1, 1) == 1);
    CHECK(disj.coeff(3, 0) == 1);
    CHECK(disj.terms().size() == 3);

    CHECK_THROWS_AS(BiSeries(3) + BiSeries(4), TruncationMismatch);
}

TEST_CASE("series multiplication") {
    const int T = 4;
    const BiSeries one = BiSeries::constant(Rat(1), T);
    // (1 + pw)(1 - pw) = 1 - p^2 w^2
    CHECK((one + mono(1, 1, 1, 1, T)) * (one - mono(1, 1, 1, 1, T)) ==
          one - mono(1, 1, 2, 2, T));
    // p * p truncates away at p_trunc = 1
    CHECK((mono(1, 1, 1, 0, 1) * mono(1, 1, 1, 0, 1)).is_zero());
    CHECK(mono(2, 1, 1, 0, T) * mono(3, 1, 1, 1, T) == mono(6, 1, 2, 1, T));
    CHECK_THROWS_AS(BiSeries(3) * BiSeries(4), TruncationMismatch);
}

TEST_CASE("series powers") {
    const int T = 3;
    const BiSeries one = BiSeries::constant(Rat(1), T);
    CHECK(pow(one + mono(1, 1, 1, 0, T), 0) == one);
    CHECK(pow(mono(1, 1, 1, 0, T), 3) == mono(1, 1, 3, 0, T));
    // (1 - 2p)^2 = 1 - 4p + 4p^2
    CHECK(pow(one - mono(2, 1, 1, 0, T), 2) ==
          one + mono(-4, 1, 1, 0, T) + mono(4, 1, 2, 0, T));
    CHECK_THROWS_AS(pow(one, -1), DomainError);
}

TEST_CASE("geometric inverse") {
    const BiSeries one3 = BiSeries::constant(Rat(1), 3);
    CHECK(geom_inverse(one3) == one3);
    // 1/(1 - p) = 1 + p + p^2 + p^3
    CHECK(geom_inverse(one3 - mono(1, 1, 1, 0, 3)) ==
          one3 + mono(1, 1, 1, 0, 3) + mono(1, 1, 2, 0, 3) + mono(1, 1, 3, 0, 3));
    // 1/(1 - 2p^2 w) = 1 + 2 p^2 w + 4 p^4 w^2 at p_trunc = 4
    const BiSeries one4 = BiSeries::constant(Rat(1), 4);
    CHECK(geom_inverse(one4 - mono(2, 1, 2, 1, 4)) ==
          one4 + mono(2, 1, 2, 1, 4) + mono(4, 1, 4, 2, 4));

    CHECK_THROWS_AS(geom_inverse(mono(2, 1, 0, 0, 3)), NotAUnit);
    // constant term 1 but a p-free w term blocks the expansion
    CHECK_THROWS_AS(geom_inverse(one3 + mono(1, 1, 0, 1, 3)), NotAUnit);
}

TEST_CASE("logarithm tail") {
    CHECK(log_tail(BiSeries(5)).is_zero());
    // log_tail(p) at p_trunc=4: p^2/2 + p^3/3 + p^4/4
    CHECK(log_tail(mono(1, 1, 1, 0, 4)) ==
          mono(1, 2, 2, 0, 4) + mono(1, 3, 3, 0, 4) + mono(1, 4, 4, 0, 4));
    // log_tail(2p^2) at p_trunc=5: only the square survives
    CHECK(log_tail(mono(2, 1, 2, 0, 5)) == mono(2, 1, 4, 0, 5));
    CHECK_THROWS_AS(log_tail(BiSeries::constant(Rat(1), 4)), NotNilpotent);
}

TEST_CASE("division by p") {
    CHECK(div_by_p(mono(1, 1, 2, 1, 4)) == mono(1, 1, 1, 1, 4));
    CHECK(div_by_p(mono(1, 1, 3, 0, 4) + mono(1, 1, 2, 0, 4)) ==
          mono(1, 1, 2, 0, 4) + mono(1, 1, 1, 0, 4));
    CHECK_THROWS_AS(
        div_by_p(BiSeries::constant(Rat(1), 4) + mono(1, 1, 1, 0, 4)),
        NotDivisibleByP);
}

TEST_CASE("coefficient extraction") {
    const BiSeries s = mono(1, 8, 2, 1, 4);
    CHECK(coeff_at(s, 2, 1) == Rat(1, 8));
    CHECK(coeff_at(s, 3, 1) == 0);
}

TEST_CASE("polynomial norm at a point") {
    // |p - p^2| at p=0.1, d=1: 0.1 + 0.01
    const BiSeries f = mono(1, 1, 1, 0, 4) - mono(1, 1, 2, 0, 4);
    CHECK_THAT(f.p_norm_at(0.1, 1), Catch::Matchers::WithinAbs(0.11, 1e-15));
    CHECK(BiSeries(4).p_norm_at(0.3, 2) == 0.0);
    // (1/8) p^2 w at p=0.5, d=2
    CHECK_THAT(mono(1, 8, 2, 1, 4).p_norm_at(0.5, 2),
               Catch::Matchers::WithinAbs(0.015625, 1e-18));
    CHECK_THROWS_AS(f.p_norm_at(-0.1, 1), DomainError);
}

TEST_CASE("ring axioms up to truncation") {
    auto rng = testing::make_rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const int T = 5;
        const BiSeries a = testing::random_biseries(rng, T);
        const BiSeries b = testing::random_biseries(rng, T);
        const BiSeries c = testing::random_biseries(rng, T);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("geometric inverse multiplies back to one") {
    auto rng = testing::make_rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        const int T = 6;
        BiSeries tail(T);
        std::uniform_int_distribution<int> p_pow(1, T);
        std::uniform_int_distribution<int> w_pow(0, 3);
        for (int t = 0; t < 4; ++t) {
            tail = tail + BiSeries::monomial(testing::random_rat(rng), p_pow(rng),
                                             w_pow(rng), T);
        }
        const BiSeries a = BiSeries::constant(Rat(1), T) + tail;
        CHECK(a * geom_inverse(a) == BiSeries::constant(Rat(1), T));
    }
}

TEST_CASE("log tail equals the directly summed series") {
    auto rng = testing::make_rng(303);
    for (int trial = 0; trial < 50; ++trial) {
        const int T = 6;
        BiSeries x(T);
        std::uniform_int_distribution<int> p_pow(1, T);
        std::uniform_int_distribution<int> w_pow(0, 3);
        for (int t = 0; t < 3; ++t) {
            x = x + BiSeries::monomial(testing::random_rat(rng), p_pow(rng),
                                       w_pow(rng), T);
        }
        BiSeries direct(T);
        for (int k = 2; k <= T; ++k) {
            direct = direct + pow(x, k) * Rat(1, k);
        }
        CHECK(log_tail(x) == direct);
    }
}

TEST_CASE("norm axioms at a fixed point") {
    auto rng = testing::make_rng(404);
    std::uniform_real_distribution<double> p_dist(0.0, 0.9);
    std::uniform_int_distribution<int> d_dist(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const int T = 5;
        const BiSeries f = testing::random_biseries(rng, T);
        const BiSeries g = testing::random_biseries(rng, T);
        const Rat c = testing::random_rat(rng);
        const double p = p_dist(rng);
        const int d = d_dist(rng);
        const double fn = f.p_norm_at(p, d);
        const double gn = g.p_norm_at(p, d);
        CHECK_THAT((f * c).p_norm_at(p, d),
                   Catch::Matchers::WithinAbs(std::fabs(rat_to_double(c)) * fn,
                                              1e-12 * (1.0 + fn)));
        CHECK((f + g).p_norm_at(p, d) <= fn + gn + 1e-12);
        CHECK((f * g).p_norm_at(p, d) <= fn * gn + 1e-12);
    }
}

TEST_CASE("multiplying by p then dividing is the identity") {
    auto rng = testing::make_rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const int T = 6;
        // headroom: keep p-powers at most T - 1 before the shift up
        BiSeries a(T);
        std::uniform_int_distribution<int> p_pow(0, T - 1);
        std::uniform_int_distribution<int> w_pow(0, 3);
        for (int t = 0; t < 4; ++t) {
            a = a + BiSeries::monomial(testing::random_rat(rng), p_pow(rng),
                                       w_pow(rng), T);
        }
        const BiSeries p = BiSeries::monomial(Rat(1), 1, 0, T);
        CHECK(div_by_p(a * p) == a);
    }
}

TEST_CASE("re-truncation") {
    const BiSeries a = mono(1, 1, 1, 0, 4) + mono(1, 1, 4, 2, 4);
    CHECK(a.with_p_trunc(2) == mono(1, 1, 1, 0, 2));
    CHECK(a.with_p_trunc(6) == a);
    CHECK(a.with_p_trunc(6).p_trunc() == 6);
}
