#include <map>

#include "phi4/paraproduct.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {
namespace {

// Physical values of every non-empty block of f on the padded grid.
std::map<int, RealArray> padded_blocks(const Field& f) {
    std::map<int, RealArray> out;
    for (int j : nonempty_levels(f.grid())) out.emplace(j, to_padded(lp_block(f, j)));
    return out;
}

}  // namespace

ParaproductSplit paraproduct_split(const Field& a, const Field& b) {
    require_same_grid(a, b, "paraproduct_split");
    const Grid& g = a.grid();
    const auto ba = padded_blocks(a);
    const auto bb = padded_blocks(b);
    const std::size_t m = ba.begin()->second.size();

    RealArray low(m, 0.0), res(m, 0.0), high(m, 0.0);
    for (const auto& [j, da] : ba) {
        for (const auto& [k, db] : bb) {
            RealArray& target = j < k - 1 ? low : (j > k + 1 ? high : res);
            for (std::size_t i = 0; i < m; ++i) target[i] += da[i] * db[i];
        }
    }
    return {from_padded(g, low), from_padded(g, res), from_padded(g, high)};
}

Field paraproduct(const Field& a, const Field& b) { return paraproduct_split(a, b).low_high; }

Field resonant(const Field& a, const Field& b) {
    require_same_grid(a, b, "resonant");
    const auto ba = padded_blocks(a);
    const auto bb = padded_blocks(b);
    RealArray res(ba.begin()->second.size(), 0.0);
    for (const auto& [j, da] : ba) {
        for (int k = j - 1; k <= j + 1; ++k) {
            const auto it = bb.find(k);
            if (it == bb.end()) continue;
            const RealArray& db = it->second;
            for (std::size_t i = 0; i < res.size(); ++i) res[i] += da[i] * db[i];
        }
    }
    return from_padded(a.grid(), res);
}

}  // namespace phi4
