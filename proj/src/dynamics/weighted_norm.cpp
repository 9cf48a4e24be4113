#include <algorithm>
#include <cmath>

#include "phi4/dynamics.hpp"
#include "phi4/paraproduct.hpp"

namespace phi4 {

double weighted_norm(const std::vector<double>& times, const std::vector<Field>& fields, double alpha, double beta) {
    if (times.size() != fields.size() || times.empty()) {
        throw std::invalid_argument("weighted norm: times and fields must match and be non-empty");
    }
    double best = 0.0;
    std::vector<Field> weighted;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw std::invalid_argument("weighted norm: negative time");
        const double w = times[i] > 0.0 ? std::pow(times[i], alpha) : 0.0;
        if (times[i] > 0.0) best = std::max(best, w * besov_norm(fields[i], beta, kInfinity, kInfinity));
        weighted.push_back(w * fields[i]);
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            const double gap = std::abs(times[j] - times[i]);
            if (gap == 0.0) continue;
            best = std::max(best, max_abs_difference(weighted[i], weighted[j]) / std::pow(gap, beta / 2.0));
        }
    }
    return best;
}

}  // namespace phi4
