#include "svdls/error.hpp"
#include "svdls/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace svdls {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

// Lower regularized P(a, x) by its power series; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxTerms; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized Q(a, x) by the Legendre continued fraction (modified
// Lentz); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0)) {
        throw ArgumentError("gamma_q needs a > 0");
    }
    if (std::isnan(x)) {
        throw ArgumentError("gamma_q of NaN");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    const double q = x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
    return std::clamp(q, 0.0, 1.0);
}

double chi2_sf(double x, std::size_t dof) {
    if (dof < 1) {
        throw ArgumentError("chi2_sf needs dof >= 1");
    }
    return gamma_q(0.5 * static_cast<double>(dof), 0.5 * x);
}

} // namespace svdls
