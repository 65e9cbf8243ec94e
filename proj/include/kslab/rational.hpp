#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace kslab {

/// Raised when a caller violates an interface contract (dimension mismatch,
/// bad precondition). Distinct from truncation_error, which signals a query
/// for data lost to series truncation.
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

class truncation_error : public std::runtime_error {
public:
    explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

/*
 * Arbitrary-precision rational, always in lowest terms with positive
 * denominator (0 is stored as 0/1). Thin value wrapper over GMP's mpq_class;
 * GMP keeps results canonical as long as inputs are, so only construction
 * paths need an explicit canonicalize().
 */
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(int n) : v_(n) {}
    Rational(long num, long den) {
        if (den == 0) throw contract_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parses "p" or "p/q" with q a positive integer literal.
    static Rational parse(const std::string& text);

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_), already_canonical{}); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw contract_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational inverse() const {
        if (is_zero()) throw contract_error("Rational: inverse of zero");
        return Rational(mpq_class(1) / v_, already_canonical{});
    }

    /// Renders as "p/q", or just "p" when the denominator is 1.
    std::string str() const;

private:
    struct already_canonical {};
    Rational(mpq_class v, already_canonical) : v_(std::move(v)) {}

    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace kslab
