#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "defs.hpp"
#include "errors.hpp"

namespace linkgap {

/// Convexity gauge f: strictly increasing, strictly convex, f(0) = 0, with
/// f^{-1} summable on geometric sequences. Two families are supported:
/// pure powers x^p with p > 1 and polynomials sum_{j>=2} a_j x^j with
/// nonnegative coefficients, at least one positive.
class Gauge {
  public:
    static Gauge power(double p) {
        require(p > 1.0, Errc::ParameterOutOfRange, "power gauge needs p > 1");
        Gauge f;
        f.is_power_ = true;
        f.p_ = p;
        return f;
    }

    /// coeffs maps exponent (>= 2) to coefficient (>= 0, at least one > 0).
    static Gauge polynomial(const std::map<int, double>& coeffs) {
        Gauge f;
        f.is_power_ = false;
        bool positive = false;
        for (const auto& [exp, a] : coeffs) {
            require(exp >= 2, Errc::ParameterOutOfRange, "polynomial gauge exponents start at 2");
            require(a >= 0.0, Errc::ParameterOutOfRange, "polynomial gauge coefficients are >= 0");
            if (a > 0.0) {
                f.terms_.push_back({exp, a});
                positive = true;
            }
        }
        require(positive, Errc::ParameterOutOfRange, "polynomial gauge needs a positive term");
        return f;
    }

    bool is_power() const { return is_power_; }
    double power_exponent() const { return p_; }
    bool is_square() const { return is_power_ && p_ == 2.0; }

    /// Lowest exponent with nonzero coefficient; controls the f^{-1} tail:
    /// f^{-1}(C kappa^k) <= c kappa^{k/deg}.
    double lowest_exponent() const {
        if (is_power_) return p_;
        return static_cast<double>(terms_.front().first);
    }

    double operator()(double x) const {
        require(x >= 0.0, Errc::ParameterOutOfRange, "gauge argument must be >= 0");
        if (x == 0.0) return 0.0;
        if (is_power_) return std::pow(x, p_);
        double s = 0.0;
        for (const auto& [exp, a] : terms_) s += a * std::pow(x, exp);
        return s;
    }

    double derivative(double x) const {
        require(x >= 0.0, Errc::ParameterOutOfRange, "gauge argument must be >= 0");
        if (is_power_) return x == 0.0 ? 0.0 : p_ * std::pow(x, p_ - 1.0);
        double s = 0.0;
        for (const auto& [exp, a] : terms_) s += a * exp * std::pow(x, exp - 1);
        return s;
    }

    /// f^{-1} by bracket doubling plus safeguarded Newton iterations.
    double inverse(double y) const {
        require(y >= 0.0, Errc::ParameterOutOfRange, "gauge inverse argument must be >= 0");
        if (y == 0.0) return 0.0;
        if (is_power_) return std::pow(y, 1.0 / p_);
        double lo = 0.0, hi = 1.0;
        while ((*this)(hi) < y) {
            lo = hi;
            hi *= 2.0;
            require(hi < 1e300, Errc::NoConvergence, "gauge inverse bracket overflow");
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 60; ++it) {
            double fx = (*this)(x) - y;
            if (fx > 0.0)
                hi = x;
            else
                lo = x;
            double dfx = derivative(x);
            double nx = dfx > 0.0 ? x - fx / dfx : x;
            x = (nx > lo && nx < hi) ? nx : 0.5 * (lo + hi);
        }
        return x;
    }

  private:
    bool is_power_ = true;
    double p_ = 2.0;
    std::vector<std::pair<int, double>> terms_;  ///< (exponent, coefficient), ascending
};

}  // namespace linkgap
