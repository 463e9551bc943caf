#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "mdexp/errors.hpp"
#include "mdexp/rational.hpp"

namespace mdexp {

// Truncated bivariate power series in the dimer density p and w = 1/d, with
// exact rational coefficients.
//
// Terms are kept in a map from the exponent pair (i = power of p, j = power
// of w) to a nonzero rational. Truncation is by p-power only: every stored i
// satisfies 0 <= i <= p_trunc, while w-powers are unbounded. The zero series
// is the empty map, so exact equality of term maps is a canonical equality
// test. Two series are equal iff their term maps are identical; the
// truncation order is context, not value.
//
// All values are immutable after construction and every operation is a pure
// function, so instances can be shared freely across threads.
class BiSeries {
public:
    using Key = std::pair<int, int>; // (p-power, w-power)
    using TermMap = std::map<Key, Rat>;

    explicit BiSeries(int p_trunc) : p_trunc_(p_trunc) {
        if (p_trunc < 0) {
            throw DomainError("p_trunc must be nonnegative");
        }
    }

    static BiSeries constant(const Rat& c, int p_trunc) {
        BiSeries s(p_trunc);
        s.add_term(0, 0, c);
        return s;
    }

    // c * p^i * w^j; silently truncated away when i > p_trunc.
    static BiSeries monomial(const Rat& c, int i, int j, int p_trunc) {
        BiSeries s(p_trunc);
        if (i < 0 || j < 0) {
            throw DomainError("exponents must be nonnegative");
        }
        s.add_term(i, j, c);
        return s;
    }

    int p_trunc() const noexcept { return p_trunc_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    // Stored coefficient at (i, j), or exact zero.
    Rat coeff(int i, int j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Copy re-truncated to a new p order (drops terms when shrinking).
    BiSeries with_p_trunc(int new_trunc) const {
        BiSeries out(new_trunc);
        for (const auto& [key, c] : terms_) {
            out.add_term(key.first, key.second, c);
        }
        return out;
    }

    BiSeries operator+(const BiSeries& rhs) const {
        require_same_trunc(rhs);
        BiSeries out(*this);
        for (const auto& [key, c] : rhs.terms_) {
            out.add_term(key.first, key.second, c);
        }
        return out;
    }

    BiSeries operator-() const {
        BiSeries out(p_trunc_);
        for (const auto& [key, c] : terms_) {
            out.terms_.emplace(key, -c);
        }
        return out;
    }

    BiSeries operator-(const BiSeries& rhs) const { return *this + (-rhs); }

    // Cauchy product; any product term with p-power > p_trunc is discarded.
    BiSeries operator*(const BiSeries& rhs) const {
        require_same_trunc(rhs);
        BiSeries out(p_trunc_);
        for (const auto& [ka, ca] : terms_) {
            for (const auto& [kb, cb] : rhs.terms_) {
                const int i = ka.first + kb.first;
                if (i > p_trunc_) {
                    continue;
                }
                out.add_term(i, ka.second + kb.second, ca * cb);
            }
        }
        return out;
    }

    BiSeries operator*(const Rat& scalar) const {
        BiSeries out(p_trunc_);
        if (scalar == 0) {
            return out;
        }
        for (const auto& [key, c] : terms_) {
            out.terms_.emplace(key, c * scalar);
        }
        return out;
    }

    friend BiSeries operator*(const Rat& scalar, const BiSeries& s) {
        return s * scalar;
    }

    friend bool operator==(const BiSeries& a, const BiSeries& b) {
        return a.terms_ == b.terms_;
    }

    // The coefficient-absolute-value polynomial norm at a fixed evaluation
    // point: substitute w = 1/d_val exactly, then sum |a_i| * p_val^i over
    // the p-coefficients a_i. Only this final fold is done in floating point.
    double p_norm_at(double p_val, int d_val) const {
        if (p_val < 0) {
            throw DomainError("p_norm_at requires p_val >= 0");
        }
        if (d_val < 1) {
            throw DomainError("p_norm_at requires d_val >= 1");
        }
        double total = 0.0;
        auto it = terms_.begin();
        while (it != terms_.end()) {
            const int i = it->first.first;
            Rat p_coeff(0);
            for (; it != terms_.end() && it->first.first == i; ++it) {
                p_coeff += it->second * rat_pow(Rat(1, d_val),
                                                static_cast<unsigned>(it->first.second));
            }
            total += rat_to_double(rat_abs(p_coeff)) * std::pow(p_val, i);
        }
        return total;
    }

private:
    friend BiSeries pow(const BiSeries& base, int exponent);
    friend BiSeries geom_inverse(const BiSeries& a);
    friend BiSeries log_tail(const BiSeries& x);
    friend BiSeries div_by_p(const BiSeries& a);

    void require_same_trunc(const BiSeries& rhs) const {
        if (p_trunc_ != rhs.p_trunc_) {
            throw TruncationMismatch("series have different truncation orders");
        }
    }

    // Accumulates c into (i, j), dropping zeros and over-truncation terms.
    void add_term(int i, int j, const Rat& c) {
        if (i > p_trunc_ || c == 0) {
            return;
        }
        auto [it, inserted] = terms_.emplace(Key{i, j}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    int p_trunc_;
    TermMap terms_;
};

// base^exponent by repeated truncating multiplication; exponent 0 gives 1.
inline BiSeries pow(const BiSeries& base, int exponent) {
    if (exponent < 0) {
        throw DomainError("series pow requires a nonnegative exponent");
    }
    BiSeries result = BiSeries::constant(Rat(1), base.p_trunc());
    for (int n = 0; n < exponent; ++n) {
        result = result * base;
    }
    return result;
}

// Truncated reciprocal of a series with constant term exactly 1, computed by
// the geometric expansion sum_m (1 - a)^m. Every non-constant term of `a`
// must carry a p-power >= 1, otherwise the expansion does not terminate.
inline BiSeries geom_inverse(const BiSeries& a) {
    if (a.coeff(0, 0) != 1) {
        throw NotAUnit("geom_inverse requires constant term exactly 1");
    }
    BiSeries h = BiSeries::constant(Rat(1), a.p_trunc()) - a;
    for (const auto& [key, c] : h.terms()) {
        if (key.first == 0) {
            throw NotAUnit("geom_inverse requires all non-constant terms to carry p");
        }
    }
    BiSeries result = BiSeries::constant(Rat(1), a.p_trunc());
    BiSeries acc = BiSeries::constant(Rat(1), a.p_trunc());
    for (int m = 1; m <= a.p_trunc(); ++m) {
        acc = acc * h;
        if (acc.is_zero()) {
            break;
        }
        result = result + acc;
    }
    return result;
}

// sum_{k>=2} x^k / k, truncated; equals -ln(1-x) - x as a formal series.
// Requires every term of x to carry a p-power >= 1.
inline BiSeries log_tail(const BiSeries& x) {
    for (const auto& [key, c] : x.terms()) {
        if (key.first == 0) {
            throw NotNilpotent("log_tail requires an argument with no p-free term");
        }
    }
    BiSeries result(x.p_trunc());
    BiSeries acc = x;
    for (int k = 2; k <= x.p_trunc(); ++k) {
        acc = acc * x;
        if (acc.is_zero()) {
            break;
        }
        result = result + acc * Rat(1, k);
    }
    return result;
}

// Shifts every exponent pair (i, j) to (i-1, j). The truncation order is
// kept; the caller's context is responsible for the lost top order.
inline BiSeries div_by_p(const BiSeries& a) {
    BiSeries out(a.p_trunc());
    for (const auto& [key, c] : a.terms()) {
        if (key.first == 0) {
            throw NotDivisibleByP("series has a term with p-power 0");
        }
        out.terms_.emplace(BiSeries::Key{key.first - 1, key.second}, c);
    }
    return out;
}

// Free-function spellings of the member operations.
inline BiSeries series_add(const BiSeries& a, const BiSeries& b) { return a + b; }
inline BiSeries series_mul(const BiSeries& a, const BiSeries& b) { return a * b; }
inline BiSeries series_pow(const BiSeries& a, int n) { return pow(a, n); }
inline Rat coeff_at(const BiSeries& a, int i, int j) { return a.coeff(i, j); }
inline double p_norm_at(const BiSeries& a, double p_val, int d_val) {
    return a.p_norm_at(p_val, d_val);
}

} // namespace mdexp
