#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/field.hpp"

namespace phi4 {

// Dyadic annuli with sharp cutoffs in the physical frequency xi = 2 pi k / L:
// A_{-1} = {|xi| <= 1}, A_j = {2^{j-1} < |xi| <= 2^j} for j >= 0.
int block_level(double xi_squared);

// Levels that intersect the grid's spectrum (Nyquist planes included), ascending.
std::vector<int> nonempty_levels(const Grid& grid);
int max_level(const Grid& grid);

Field lp_block(const Field& f, int level);

struct ParaproductSplit {
    Field low_high;   // a < b : sum_{j < k-1} D_j a D_k b
    Field resonant;   // a (.) b: sum_{|j-k| <= 1} D_j a D_k b
    Field high_low;   // a > b : sum_{j > k+1} D_j a D_k b
};

// All three pieces from one pass; products are alias-free, so the pieces add
// up to the Galerkin projection of ab.
ParaproductSplit paraproduct_split(const Field& a, const Field& b);
Field paraproduct(const Field& a, const Field& b);
Field resonant(const Field& a, const Field& b);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (integral |f|^p)^{1/p} with cell weight (L/n)^d; p = infinity gives max |f|.
double lp_norm_of(const Field& f, double p);

// l^q over j of 2^{j gamma} ||D_j f||_{L^p}.
double besov_norm(const Field& f, double gamma, double p, double q);

struct RegularityLevel {
    int level;
    double mean_square;
};

struct RegularityEstimate {
    std::vector<RegularityLevel> levels;  // every non-empty level
    int fit_min;
    int fit_max;
    double slope;
    double gamma_hat;  // -slope / 2
    double stderr_;    // jackknife over samples
};

class RegularityRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fits log2 E[(D_j u)(x)^2] against j over 2 <= j <= j_max - 2, where the
// expectation combines the sample average and the spatial average.
RegularityEstimate estimate_regularity(const std::vector<Field>& samples);

std::string regularity_csv(const RegularityEstimate& e);

}  // namespace phi4
