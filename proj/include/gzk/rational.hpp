#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gzk {

/// Exact rational arithmetic for the closed-form exponent calculators.
/// Small numerators/denominators only; overflow throws rather than wraps.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend Rational operator+(Rational a, Rational b) { return Rational(mul_chk(a.num, b.den) + mul_chk(b.num, a.den), mul_chk(a.den, b.den)); }
    friend Rational operator-(Rational a, Rational b) { return Rational(mul_chk(a.num, b.den) - mul_chk(b.num, a.den), mul_chk(a.den, b.den)); }
    friend Rational operator*(Rational a, Rational b) { return Rational(mul_chk(a.num, b.num), mul_chk(a.den, b.den)); }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(mul_chk(a.num, b.den), mul_chk(a.den, b.num));
    }
    Rational operator-() const { Rational r; r.num = -num; r.den = den; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mul_chk(a.num, b.den) < mul_chk(b.num, a.den); }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  private:
    static std::int64_t mul_chk(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
        return r;
    }
};

/// Parse "p/q", "p", or a plain integer-pair string.  Used by CLI/config.
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text));
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

}  // namespace gzk
