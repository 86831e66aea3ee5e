#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hhsheaf {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The ground field: the rationals, or a prime field F_p.
struct Field {
    std::int64_t p = 0;  // 0 means Q

    static Field rationals() { return Field{0}; }
    static Field prime(std::int64_t p);

    bool is_rationals() const { return p == 0; }
    bool operator==(const Field&) const = default;

    std::string name() const { return p == 0 ? "Q" : "F" + std::to_string(p); }
};

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Field Field::prime(std::int64_t p) {
    if (!is_prime(p)) throw FieldError("Field::prime: " + std::to_string(p) + " is not prime");
    return Field{p};
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator (cpp_rational guarantees this); F_p residues in [0, p).
class Scalar {
public:
    Scalar() : field_(Field::rationals()), q_(0) {}
    Scalar(const Field& f, BigRational v) : field_(f) {
        if (f.is_rationals()) {
            q_ = std::move(v);
        } else {
            // reduce a rational to F_p: numerator * denominator^{-1} mod p
            BigInt num = boost::multiprecision::numerator(v) % f.p;
            BigInt den = boost::multiprecision::denominator(v) % f.p;
            if (den == 0) throw FieldError("denominator divisible by p");
            std::int64_t n = static_cast<std::int64_t>(num);
            std::int64_t d = static_cast<std::int64_t>(den);
            r_ = mod(n, f.p);
            r_ = mulmod(r_, invmod(mod(d, f.p), f.p), f.p);
        }
    }
    Scalar(const Field& f, std::int64_t v) : Scalar(f, BigRational(v)) {}

    static Scalar zero(const Field& f) { return Scalar(f, 0); }
    static Scalar one(const Field& f) { return Scalar(f, 1); }

    const Field& field() const { return field_; }
    bool is_zero() const { return field_.is_rationals() ? q_ == 0 : r_ == 0; }

    const BigRational& rational() const {
        if (!field_.is_rationals()) throw FieldError("not a rational");
        return q_;
    }
    std::int64_t residue() const {
        if (field_.is_rationals()) throw FieldError("not a residue");
        return r_;
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.field_.is_rationals()) return make(a.field_, a.q_ + b.q_);
        return makep(a.field_, mod(a.r_ + b.r_, a.field_.p));
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.field_.is_rationals()) return make(a.field_, a.q_ - b.q_);
        return makep(a.field_, mod(a.r_ - b.r_, a.field_.p));
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.field_.is_rationals()) return make(a.field_, a.q_ * b.q_);
        return makep(a.field_, mulmod(a.r_, b.r_, a.field_.p));
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (b.is_zero()) throw FieldError("division by zero");
        if (a.field_.is_rationals()) return make(a.field_, a.q_ / b.q_);
        return makep(a.field_, mulmod(a.r_, invmod(b.r_, a.field_.p), a.field_.p));
    }
    Scalar operator-() const {
        if (field_.is_rationals()) return make(field_, -q_);
        return makep(field_, mod(-r_, field_.p));
    }
    Scalar inv() const { return one(field_) / *this; }

    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    bool operator==(const Scalar& b) const {
        check(*this, b);
        return field_.is_rationals() ? q_ == b.q_ : r_ == b.r_;
    }

    std::string str() const {
        if (field_.is_rationals()) return q_.str();
        return std::to_string(r_);
    }

private:
    static Scalar make(const Field& f, BigRational v) {
        Scalar s;
        s.field_ = f;
        s.q_ = std::move(v);
        return s;
    }
    static Scalar makep(const Field& f, std::int64_t r) {
        Scalar s;
        s.field_ = f;
        s.r_ = r;
        return s;
    }
    static void check(const Scalar& a, const Scalar& b) {
        if (!(a.field_ == b.field_)) throw FieldError("field mismatch");
    }
    static std::int64_t mod(std::int64_t a, std::int64_t p) {
        std::int64_t r = a % p;
        return r < 0 ? r + p : r;
    }
    static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
        return static_cast<std::int64_t>((__int128)a * b % p);
    }
    static std::int64_t invmod(std::int64_t a, std::int64_t p) {
        if (a == 0) throw FieldError("inverse of zero mod p");
        // extended Euclid
        std::int64_t t = 0, nt = 1, r = p, nr = a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::swap(t -= q * nt, nt);
            std::swap(r -= q * nr, nr);
        }
        return t < 0 ? t + p : t;
    }

    Field field_;
    BigRational q_;
    std::int64_t r_ = 0;
};

/// Parses "a/b" or "a" into a rational.
inline BigRational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRational(BigInt(s));
    return BigRational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace hhsheaf
