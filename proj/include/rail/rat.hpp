#pragma once

#include <cstdint>
#include <memory>
#include <numeric>

#include "rail/rational.hpp"

namespace rail {

// Exact rational scalar for the zone algebra. Values live in a pair of
// machine words while they fit (which they essentially always do for
// translated railway models) and promote to GMP storage on overflow, so
// arithmetic is exact unconditionally.
class Rat {
public:
    Rat() = default;
    Rat(int v) : n_(v) {}
    Rat(long v) : n_(v) {}
    Rat(const Rational& q) { assign_mpq(q); }

    bool is_small() const { return big_ == nullptr; }

    Rational to_mpq() const {
        if (big_) return *big_;
        return make_rational(n_, d_);
    }

    int sign() const {
        if (big_) return sgn(*big_);
        return n_ > 0 ? 1 : (n_ < 0 ? -1 : 0);
    }
    bool is_zero() const { return big_ ? *big_ == 0 : n_ == 0; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.is_small() && b.is_small()) {
            if (a.d_ == 1 && b.d_ == 1) {
                __int128 n = static_cast<__int128>(a.n_) + b.n_;
                if (fits(n)) return Rat(static_cast<int64_t>(n), 1, normalized_tag{});
            } else {
                __int128 n = static_cast<__int128>(a.n_) * b.d_ +
                             static_cast<__int128>(b.n_) * a.d_;
                __int128 d = static_cast<__int128>(a.d_) * b.d_;
                Rat r;
                if (r.set_reduced(n, d)) return r;
            }
        }
        return Rat(Rational(a.to_mpq() + b.to_mpq()));
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    Rat operator-() const {
        if (is_small() && n_ != INT64_MIN) return Rat(-n_, d_, normalized_tag{});
        return Rat(Rational(-to_mpq()));
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        if (a.is_small() && b.is_small()) {
            if (a.n_ == 0 || b.n_ == 0) return Rat();
            if (a.d_ == 1 && b.d_ == 1) {
                __int128 n = static_cast<__int128>(a.n_) * b.n_;
                if (fits(n)) return Rat(static_cast<int64_t>(n), 1, normalized_tag{});
            } else {
                __int128 n = static_cast<__int128>(a.n_) * b.n_;
                __int128 d = static_cast<__int128>(a.d_) * b.d_;
                Rat r;
                if (r.set_reduced(n, d)) return r;
            }
        }
        return Rat(Rational(a.to_mpq() * b.to_mpq()));
    }
    friend Rat operator/(const Rat& a, const Rat& b) { return a * b.inverse(); }
    Rat inverse() const {
        if (is_small() && n_ != 0 && n_ != INT64_MIN) {
            if (n_ > 0) return Rat(d_, n_, normalized_tag{});
            return Rat(-d_, -n_, normalized_tag{});
        }
        return Rat(Rational(1 / to_mpq()));
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    friend int rat_cmp(const Rat& a, const Rat& b) {
        if (a.is_small() && b.is_small()) {
            __int128 l = static_cast<__int128>(a.n_) * b.d_;
            __int128 r = static_cast<__int128>(b.n_) * a.d_;
            return l < r ? -1 : (l > r ? 1 : 0);
        }
        return cmp(a.to_mpq(), b.to_mpq());
    }
    friend bool operator==(const Rat& a, const Rat& b) {
        if (a.is_small() && b.is_small()) return a.n_ == b.n_ && a.d_ == b.d_;
        return rat_cmp(a, b) == 0;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return rat_cmp(a, b) < 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return rat_cmp(a, b) > 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return rat_cmp(a, b) <= 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return rat_cmp(a, b) >= 0; }

    // exposed for fast conversion into the solver scalar
    int64_t small_num() const { return n_; }
    int64_t small_den() const { return d_; }

private:
    struct normalized_tag {};
    Rat(int64_t n, int64_t d, normalized_tag) : n_(n), d_(d) {}

    static bool fits(__int128 v) { return v <= INT64_MAX && v >= INT64_MIN; }

    static uint64_t uabs128(__int128 v) {
        __int128 a = v < 0 ? -v : v;
        return a > INT64_MAX ? UINT64_MAX : static_cast<uint64_t>(a);
    }

    // nonzero num assumed reduced here only after gcd; returns false when the
    // reduced value does not fit the small representation
    bool set_reduced(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            n_ = 0;
            d_ = 1;
            big_.reset();
            return true;
        }
        uint64_t an = uabs128(n), ad = uabs128(d);
        if (an == UINT64_MAX || ad == UINT64_MAX) return false;
        uint64_t g = std::gcd(an, ad);
        n /= static_cast<__int128>(g);
        d /= static_cast<__int128>(g);
        if (!fits(n) || !fits(d)) return false;
        n_ = static_cast<int64_t>(n);
        d_ = static_cast<int64_t>(d);
        big_.reset();
        return true;
    }

    void assign_mpq(const Rational& q) {
        if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
            n_ = q.get_num().get_si();
            d_ = q.get_den().get_si();
            big_.reset();
        } else {
            big_ = std::make_shared<const Rational>(q);
        }
    }

    int64_t n_ = 0;
    int64_t d_ = 1;  // > 0
    std::shared_ptr<const Rational> big_;
};

inline int sgn(const Rat& r) { return r.sign(); }

}  // namespace rail
