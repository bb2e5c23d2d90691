#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

#include "lpc/errors.hpp"

namespace lpc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Arbitrary-precision reduced fraction. Denominator is always positive and
/// coprime to the numerator; every comparison is exact. All capital values,
/// count bounds and decoder intervals live in this type -- no floating point
/// ever enters a codec path.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}           // NOLINT: implicit on purpose
    Rational(std::int64_t n) : v_(n) {}  // NOLINT
    explicit Rational(const BigInt& n) : v_(n) {}
    explicit Rational(const BigRat& v) : v_(v) {}

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw ParameterError("rational: zero denominator");
        // cpp_rational reduces but insists on a positive denominator
        if (den < 0) v_ = BigRat(-num, -den);
        else v_ = BigRat(num, den);
    }
    Rational(std::int64_t num, std::int64_t den)
        : Rational(BigInt(num), BigInt(den)) {}

    // Parses "p", "-p" or "p/q".
    static Rational from_string(const std::string& text);

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw ParameterError("rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
    friend Rational operator-(const Rational& a) { return Rational(BigRat(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    /// Largest integer <= value.
    BigInt floor() const;

    /// 2^k for k possibly negative.
    static Rational pow2(long k);

    double to_double() const { return v_.convert_to<double>(); }

    /// "p/q" (always includes the denominator, also when it is 1).
    std::string to_fraction_string() const;
    /// "p" when q == 1, else "p/q".
    std::string to_string() const;

private:
    BigRat v_;
};

inline Rational rat(std::int64_t num, std::int64_t den) { return Rational(num, den); }

} // namespace lpc
