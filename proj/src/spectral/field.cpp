#include "phi4/field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "phi4/fft.hpp"

namespace phi4 {

struct Field::State {
    std::mutex mutex;
    std::optional<RealArray> physical;
    std::optional<SpectralArray> spectral;
};

Field::Field(const Grid& grid) : grid_(grid), state_(std::make_shared<State>()) {
    state_->physical = RealArray(grid.size(), 0.0);
}

Field::Field(const Grid& grid, std::shared_ptr<State> state) : grid_(grid), state_(std::move(state)) {}

Field Field::from_physical(const Grid& grid, RealArray values) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("Field::from_physical: expected " + std::to_string(grid.size()) +
                                    " values, got " + std::to_string(values.size()));
    }
    auto s = std::make_shared<State>();
    s->physical = std::move(values);
    return Field(grid, std::move(s));
}

Field Field::from_spectral(const Grid& grid, SpectralArray coefficients) {
    if (coefficients.size() != grid.spectral_size()) {
        throw std::invalid_argument("Field::from_spectral: expected " +
                                    std::to_string(grid.spectral_size()) + " coefficients, got " +
                                    std::to_string(coefficients.size()));
    }
    auto s = std::make_shared<State>();
    s->spectral = std::move(coefficients);
    return Field(grid, std::move(s));
}

Field Field::constant(const Grid& grid, double value) {
    return from_physical(grid, RealArray(grid.size(), value));
}

Field Field::from_function(const Grid& grid,
                           const std::function<double(const std::array<double, 3>&)>& fn) {
    RealArray v(grid.size());
    const int n = grid.n();
    const double h = grid.period() / n;
    std::array<int, 3> i{0, 0, 0};
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        std::size_t rem = idx;
        for (int a = grid.dim() - 1; a >= 0; --a) {
            i[a] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dim(); ++a) x[a] = h * i[a];
        v[idx] = fn(x);
    }
    return from_physical(grid, std::move(v));
}

const RealArray& Field::physical() const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    if (!state_->physical) state_->physical = fft::inverse(grid_, *state_->spectral);
    return *state_->physical;
}

const SpectralArray& Field::spectral() const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    if (!state_->spectral) state_->spectral = fft::forward(grid_, *state_->physical);
    return *state_->spectral;
}

double Field::mean() const { return spectral()[0].real(); }

double Field::max_abs() const {
    double m = 0.0;
    for (double x : physical()) m = std::max(m, std::abs(x));
    return m;
}

bool Field::all_finite() const {
    return std::all_of(physical().begin(), physical().end(), [](double x) { return std::isfinite(x); });
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

namespace {

Field combine(const Field& a, const Field& b, double sa, double sb) {
    require_same_grid(a, b, "field arithmetic");
    const auto& x = a.physical();
    const auto& y = b.physical();
    RealArray out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sa * x[i] + sb * y[i];
    return Field::from_physical(a.grid(), std::move(out));
}

}  // namespace

Field operator+(const Field& a, const Field& b) { return combine(a, b, 1.0, 1.0); }
Field operator-(const Field& a, const Field& b) { return combine(a, b, 1.0, -1.0); }
Field axpy(const Field& a, double s, const Field& b) { return combine(a, b, 1.0, s); }

Field operator-(const Field& a) { return -1.0 * a; }

Field operator*(double s, const Field& a) {
    RealArray out(a.physical());
    for (auto& x : out) x *= s;
    return Field::from_physical(a.grid(), std::move(out));
}

Field operator+(const Field& a, double c) {
    RealArray out(a.physical());
    for (auto& x : out) x += c;
    return Field::from_physical(a.grid(), std::move(out));
}

Field map_pointwise(const Field& f, const std::function<double(double)>& fn) {
    RealArray out(f.physical());
    for (auto& x : out) x = fn(x);
    return Field::from_physical(f.grid(), std::move(out));
}

double max_abs_difference(const Field& a, const Field& b) {
    require_same_grid(a, b, "max_abs_difference");
    const auto& x = a.physical();
    const auto& y = b.physical();
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace phi4
