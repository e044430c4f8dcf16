#pragma once

#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "expcost/rational.hpp"

namespace expcost {

// Finite-support discrete subdistribution with exact rational weights.
// Entries keep first-insertion order so downstream iteration is deterministic;
// only strictly positive weights are stored and the total mass is <= 1.
template <typename T, typename Hash = std::hash<T>, typename Eq = std::equal_to<T>>
class Dist {
public:
    using Entry = std::pair<T, Rational>;

    Dist() = default;

    static Dist zero() { return Dist(); }

    static Dist ret(T a) {
        Dist d;
        d.add(std::move(a), Rational(1));
        return d;
    }

    void add(T a, Rational w) {
        if (w < 0) throw std::invalid_argument("negative weight");
        if (w == 0) return;
        mass_ += w;
        if (mass_ > 1) throw std::invalid_argument("distribution mass exceeds 1: " + rational_str(mass_));
        auto it = index_.find(a);
        if (it != index_.end()) {
            entries_[it->second].second += w;
        } else {
            index_.emplace(a, entries_.size());
            entries_.emplace_back(std::move(a), std::move(w));
        }
    }

    Rational weight(const T& a) const {
        auto it = index_.find(a);
        return it == index_.end() ? Rational(0) : entries_[it->second].second;
    }

    Prob mass() const { return Prob(mass_); }

    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    // Expectation of a nonnegative double-valued random variable; summed in
    // entry order so results are reproducible.
    double expectation(const std::function<double(const T&)>& rv) const {
        double acc = 0.0;
        for (const auto& [a, w] : entries_) acc += to_double(w) * rv(a);
        return acc;
    }

    // Exact expectation for rational-valued random variables.
    Rational expectation_exact(const std::function<Rational(const T&)>& rv) const {
        Rational acc = 0;
        for (const auto& [a, w] : entries_) acc += w * rv(a);
        return acc;
    }

    // Order-insensitive equality (same support, same weights).
    friend bool operator==(const Dist& x, const Dist& y) {
        if (x.entries_.size() != y.entries_.size()) return false;
        for (const auto& [a, w] : x.entries_)
            if (y.weight(a) != w) return false;
        return true;
    }

private:
    std::vector<Entry> entries_;
    std::unordered_map<T, std::size_t, Hash, Eq> index_;
    Rational mass_ = 0;
};

template <typename T>
Dist<T> dret(T a) {
    return Dist<T>::ret(std::move(a));
}

// Monadic bind: (mu >>= f)(b) = sum_a mu(a) * f(a)(b), exact arithmetic.
template <typename A, typename HA, typename EA, typename F>
auto dbind(const Dist<A, HA, EA>& mu, F f) -> decltype(f(std::declval<const A&>())) {
    decltype(f(std::declval<const A&>())) out;
    for (const auto& [a, w] : mu.entries()) {
        const auto da = f(a);
        for (const auto& [b, wb] : da.entries()) out.add(b, w * wb);
    }
    return out;
}

inline Dist<long> uniform_longs(long lo, long hi) {
    Dist<long> d;
    Rational w(1, hi - lo + 1);
    for (long v = lo; v <= hi; ++v) d.add(v, w);
    return d;
}

}  // namespace expcost
