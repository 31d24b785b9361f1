#pragma once

#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "rg/errors.hpp"

namespace rg {

/// Exact rational multiple of pi. The stored value is (num/den)*pi,
/// reduced and normalized into [0, 2pi). Addition is mod 2pi.
class Phase {
public:
    Phase() : num_(0), den_(1) {}

    Phase(std::int64_t num, std::int64_t den) {
        if (den <= 0) throw InputError("Phase denominator must be positive");
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        num %= 2 * den;
        if (num < 0) num += 2 * den;
        num_ = num;
        den_ = den;
    }

    static Phase zero() { return Phase(); }
    static Phase pi() { return Phase(1, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_pi() const { return num_ == 1 && den_ == 1; }

    Phase operator+(const Phase& o) const {
        std::int64_t l = std::lcm(den_, o.den_);
        return Phase(num_ * (l / den_) + o.num_ * (l / o.den_), l);
    }

    Phase operator-() const { return Phase(-num_, den_); }

    Phase operator-(const Phase& o) const { return *this + (-o); }

    bool operator==(const Phase& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Phase& o) const { return !(*this == o); }
    bool operator<(const Phase& o) const {
        // compare num_/den_ < o.num_/o.den_ exactly
        return num_ * o.den_ < o.num_ * den_;
    }

    double radians() const {
        return std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string str() const {
        if (num_ == 0) return "0";
        if (den_ == 1) return num_ == 1 ? "pi" : std::to_string(num_) + "pi";
        return std::to_string(num_) + "pi/" + std::to_string(den_);
    }

private:
    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace rg
