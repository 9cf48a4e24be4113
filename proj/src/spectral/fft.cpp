#include "phi4/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace phi4::fft {
namespace {

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// FFTW's planner is not thread-safe, execution with new-array execute is.
// Plans use FFTW_ESTIMATE so that the chosen algorithm, and hence every bit of
// the output, does not depend on timing measurements.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, p] : plans_) {
            fftw_destroy_plan(p.r2c);
            fftw_destroy_plan(p.c2r);
        }
    }

    const PlanPair& get(int dim, int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_pair(dim, n);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<int> dims(static_cast<std::size_t>(dim), n);
        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
        const std::size_t half = total / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
        auto* real = fftw_alloc_real(total);
        auto* cplx = fftw_alloc_complex(half);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        PlanPair p;
        p.r2c = fftw_plan_dft_r2c(dim, dims.data(), real, cplx, flags);
        p.c2r = fftw_plan_dft_c2r(dim, dims.data(), cplx, real, flags);
        fftw_free(real);
        fftw_free(cplx);
        if (p.r2c == nullptr || p.c2r == nullptr) throw std::runtime_error("FFTW planning failed");
        return plans_.emplace(key, p).first->second;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

SpectralArray forward(const Grid& grid, const RealArray& values) {
    if (values.size() != grid.size()) throw std::invalid_argument("fft::forward: size mismatch");
    const auto& plan = cache().get(grid.dim(), grid.n());
    RealArray input(values);  // r2c may overwrite its input for multi-dimensional plans
    SpectralArray out(grid.spectral_size());
    fftw_execute_dft_r2c(plan.r2c, input.data(), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : out) c *= scale;
    return out;
}

RealArray inverse(const Grid& grid, const SpectralArray& coefficients) {
    if (coefficients.size() != grid.spectral_size()) {
        throw std::invalid_argument("fft::inverse: size mismatch");
    }
    const auto& plan = cache().get(grid.dim(), grid.n());
    SpectralArray input(coefficients);  // c2r always destroys its input
    RealArray out(grid.size());
    fftw_execute_dft_c2r(plan.c2r, reinterpret_cast<fftw_complex*>(input.data()), out.data());
    return out;
}

SpectralArray resample(const Grid& from, const SpectralArray& coefficients, const Grid& to) {
    if (from.dim() != to.dim() || from.period() != to.period()) {
        throw std::invalid_argument("fft::resample: incompatible grids");
    }
    if (coefficients.size() != from.spectral_size()) {
        throw std::invalid_argument("fft::resample: size mismatch");
    }
    SpectralArray out(to.spectral_size(), Complex(0.0, 0.0));
    const int keep = std::min(from.n(), to.n()) / 2;  // |k_i| < keep survives
    const int d = from.dim();
    const int nf = from.n();
    const int nt = to.n();
    const int hf = from.last_extent();
    const int ht = to.last_extent();
    auto src_index = [&](int k) { return k >= 0 ? k : k + nf; };
    auto dst_index = [&](int k) { return k >= 0 ? k : k + nt; };
    const int lo = -keep + 1;
    const int hi = keep - 1;
    const int r0 = d >= 3 ? lo : 0, s0 = d >= 3 ? hi : 0;
    const int r1 = d >= 2 ? lo : 0, s1 = d >= 2 ? hi : 0;
    for (int k0 = r0; k0 <= s0; ++k0) {
        for (int k1 = r1; k1 <= s1; ++k1) {
            std::size_t sbase = 0, dbase = 0;
            if (d == 3) {
                sbase = (static_cast<std::size_t>(src_index(k0)) * nf + src_index(k1)) * hf;
                dbase = (static_cast<std::size_t>(dst_index(k0)) * nt + dst_index(k1)) * ht;
            } else if (d == 2) {
                sbase = static_cast<std::size_t>(src_index(k1)) * hf;
                dbase = static_cast<std::size_t>(dst_index(k1)) * ht;
            }
            std::memcpy(static_cast<void*>(out.data() + dbase),
                        static_cast<const void*>(coefficients.data() + sbase),
                        sizeof(Complex) * static_cast<std::size_t>(hi + 1));
        }
    }
    return out;
}

}  // namespace phi4::fft
