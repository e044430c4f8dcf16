#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace expcost {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::size_t hash_bigint(const BigInt& z) {
    return boost::multiprecision::hash_value(z);
}

inline std::size_t hash_rational(const Rational& q) {
    std::size_t h = hash_bigint(numerator(q));
    h ^= hash_bigint(denominator(q)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// Canonical display: integers bare, otherwise "p/q".
inline std::string rational_str(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

// "p/q", integers, and plain decimals ("1.25", "-0.5") all parse exactly.
inline std::optional<Rational> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::string t = s;
    bool neg = false;
    std::size_t i = 0;
    if (t[i] == '+' || t[i] == '-') {
        neg = t[i] == '-';
        ++i;
    }
    auto digits = [&](std::size_t& j) {
        std::string d;
        while (j < t.size() && t[j] >= '0' && t[j] <= '9') d += t[j++];
        return d;
    };
    std::string ip = digits(i);
    BigInt num = 0, den = 1;
    if (i < t.size() && t[i] == '/') {
        ++i;
        std::string dp = digits(i);
        if (ip.empty() || dp.empty() || i != t.size()) return std::nullopt;
        num = BigInt(ip);
        den = BigInt(dp);
        if (den == 0) return std::nullopt;
    } else if (i < t.size() && t[i] == '.') {
        ++i;
        std::string fp = digits(i);
        if ((ip.empty() && fp.empty()) || i != t.size()) return std::nullopt;
        num = BigInt(ip.empty() ? "0" : ip);
        for (char c : fp) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
    } else {
        if (ip.empty() || i != t.size()) return std::nullopt;
        num = BigInt(ip);
    }
    Rational q(num, den);
    if (neg) q = -q;
    return q;
}

// log2(n) for n >= 1 when n is a power of two; nullopt otherwise.
inline std::optional<long> exact_log2(const BigInt& n) {
    if (n < 1) return std::nullopt;
    BigInt m = n;
    long k = 0;
    while (m % 2 == 0) {
        m /= 2;
        ++k;
    }
    if (m == 1) return k;
    return std::nullopt;
}

// A probability: exact rational in [0, 1].
class Prob {
public:
    Prob() : q_(0) {}
    explicit Prob(Rational q) : q_(std::move(q)) {
        if (q_ < 0 || q_ > 1) throw std::invalid_argument("Prob out of [0,1]: " + rational_str(q_));
    }
    static Prob zero() { return Prob(); }
    static Prob one() { return Prob(Rational(1)); }
    const Rational& value() const { return q_; }
    double approx() const { return to_double(q_); }
    friend bool operator==(const Prob& a, const Prob& b) { return a.q_ == b.q_; }
    friend bool operator<(const Prob& a, const Prob& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Prob& a, const Prob& b) { return a.q_ <= b.q_; }

private:
    Rational q_;
};

}  // namespace expcost
