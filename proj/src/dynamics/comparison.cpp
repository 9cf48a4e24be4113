#include <cmath>

#include "phi4/dynamics.hpp"

namespace phi4 {

ComparisonResult comparison_test(const std::vector<double>& times, const std::vector<double>& values, double lambda,
                                 double c) {
    if (times.size() != values.size() || times.size() < 2) {
        throw std::invalid_argument("comparison test: need at least two samples with matching values");
    }
    if (!(lambda > 1.0)) throw std::invalid_argument("comparison test: lambda must exceed 1");
    if (!(c > 0.0)) throw std::invalid_argument("comparison test: c must be positive");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("comparison test: times must increase");
        if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
            throw std::invalid_argument("comparison test: values must be finite and non-negative");
        }
    }

    // Cumulative trapezoid integral of F^lambda; the worst t for each s is the last sample.
    const std::size_t n = times.size();
    std::vector<double> cumulative(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cumulative[i] = cumulative[i - 1] + 0.5 * (times[i] - times[i - 1]) *
                                                (std::pow(values[i], lambda) + std::pow(values[i - 1], lambda));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double tail = cumulative[n - 1] - cumulative[i];
        if (tail > c * (values[i] + 1.0) * (1.0 + 1e-12)) {
            throw ComparisonRefused("comparison test: integral hypothesis fails on the sampled pair", times[i],
                                    times[n - 1]);
        }
    }

    const double t0 = times.front();
    const double horizon = times.back();
    const double k = std::pow(2.0, lambda / (lambda - 1.0)) *
                     std::pow(c / (1.0 - std::pow(2.0, -(lambda - 1.0))), 1.0 / (lambda - 1.0));

    ComparisonResult out;
    std::size_t idx = 0;
    out.partition.push_back(t0);
    while (true) {
        const double reach = times[idx] + c * std::pow(2.0, lambda) * std::pow(1.0 + values[idx], 1.0 - lambda);
        out.values.push_back(values[idx]);
        if (reach >= horizon || idx + 1 == n) {
            out.partition.push_back(horizon);
            break;
        }
        std::size_t next = idx + 1;
        for (std::size_t j = idx + 1; j < n && times[j] <= reach; ++j) {
            if (values[j] < values[next]) next = j;
        }
        idx = next;
        out.partition.push_back(times[idx]);
    }

    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double bound = 1.0 + k * std::pow(out.partition[i + 1] - t0, -1.0 / (lambda - 1.0));
        out.bounds.push_back(bound);
        out.worst_margin = std::min(out.worst_margin, bound - out.values[i]);
    }
    out.holds = out.worst_margin >= 0.0;
    return out;
}

}  // namespace phi4
