#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phi4/renorm.hpp"

namespace phi4 {
namespace {

using std::numbers::pi;
using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;

constexpr double kTailTarget = 1e-12;

void require_positive(double r, const char* where) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument(std::string(where) + ": r must be positive");
}

// sum_{|k| <= m} e^{-s w^2 k^2}
double theta(double s, double w2, int m) {
    double t = 1.0;
    for (int k = 1; k <= m; ++k) {
        const double term = std::exp(-s * w2 * k * k);
        t += 2.0 * term;
        if (term < 1e-17 * t) break;
    }
    return t;
}

}  // namespace

double a_closed(double r) {
    require_positive(r, "a_closed");
    return 1.0 / (4.0 * std::sqrt(2.0) * std::pow(pi, 1.5) * std::sqrt(r));
}

double b_closed(double r) {
    require_positive(r, "b_closed");
    return std::abs(std::log(r)) / (32.0 * pi * pi);
}

RenormConstants closed_constants(double r) {
    return {r, a_closed(r), b_closed(r), RenormConstants::Source::ClosedForm};
}

double galerkin_mode_sum(const Grid& grid, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("galerkin_mode_sum: r must be non-negative");
    const double w2 = grid.base_frequency() * grid.base_frequency();
    const int m = grid.n() / 2 - 1;
    const int d = grid.dim();
    // e^{-2 r lambda} / lambda = int_{2r}^inf e^{-s lambda} ds, and e^{-s lambda} factorizes over axes.
    auto integrand = [&](double s) { return std::exp(-s) * std::pow(theta(s, w2, m), d); };
    exp_sinh<double> integrator;
    const double tail = integrator.integrate([&](double t) { return integrand(2.0 * r + t); }, 1e-13);
    return tail / grid.volume();
}

int minimal_resolution(int dim, double period, double r) {
    require_positive(r, "minimal_resolution");
    if (dim < 1 || dim > 3) throw std::invalid_argument("minimal_resolution: dim must be 1, 2 or 3");
    const double w = 2.0 * pi / period;
    for (int n = 4; n > 0; n *= 2) {
        const double edge = n / 2 - 1;
        if (std::exp(-2.0 * r * (1.0 + w * w * edge * edge)) < kTailTarget) return n;
    }
    throw std::overflow_error("minimal_resolution: r too small to resolve");
}

double a_numeric(const Grid& grid, double r) {
    require_positive(r, "a_numeric");
    const int need = minimal_resolution(grid.dim(), grid.period(), r);
    if (grid.n() < need) {
        std::ostringstream os;
        os << "a_numeric: N = " << grid.n() << " does not resolve r = " << r << "; need N >= " << need;
        throw CutoffTooCoarse(os.str(), need);
    }
    return galerkin_mode_sum(grid, r);
}

double sunset_constant() {
    exp_sinh<double> outer, inner;
    return outer.integrate(
        [&](double x) {
            return inner.integrate([x](double y) { return std::pow(x + 1.0 + (y + 1.0) + (x + 1.0) * (y + 1.0), -1.5); },
                                   1e-13);
        },
        1e-12);
}

double sunset_truncated(double upper) {
    if (!(upper > 1.0)) throw std::invalid_argument("sunset_truncated: upper must exceed 1");
    auto inner = [upper](double x) {
        return gauss_kronrod<double, 61>::integrate([x](double y) { return std::pow(x + y + x * y, -1.5); }, 1.0,
                                                    upper, 10, 1e-13);
    };
    return gauss_kronrod<double, 61>::integrate(inner, 1.0, upper, 10, 1e-12);
}

double b_numeric(double r) {
    require_positive(r, "b_numeric");
    // For fixed (a, s1) the s2 integral is elementary; s1 runs over [c, inf) with c = a + 2r.
    auto over_s1 = [r](double a) {
        const double c = a + 2.0 * r;
        exp_sinh<double> integrator;
        return integrator.integrate(
            [a, c](double t) {
                const double s1 = c + t;
                return 2.0 / ((a + s1) * std::sqrt(c * (a + s1) + s1 * a));
            },
            1e-12);
    };
    // Substituting a = e^x resolves the scale a ~ r; below e^{-20} r the contribution is negligible.
    const double lo = std::log(r) - 20.0;
    const double integral = gauss_kronrod<double, 61>::integrate(
        [&](double x) {
            const double a = std::exp(x);
            return a * over_s1(a);
        },
        lo, 0.0, 15, 1e-11);
    return integral / std::pow(4.0 * pi, 3);
}

}  // namespace phi4
