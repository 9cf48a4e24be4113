#include <algorithm>
#include <cmath>
#include <functional>

#include "phi4/powercount.hpp"

namespace phi4::pc {
namespace {

struct NodeGraph {
    std::vector<std::pair<int, int>> ends;          // node endpoints per edge
    std::vector<std::vector<int>> incident;         // node -> edges
};

NodeGraph node_graph(const FeynmanGraph& g) {
    NodeGraph ng;
    ng.incident.resize(g.nodes.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const int a = g.points[static_cast<std::size_t>(g.edges[i].p)].node;
        const int b = g.points[static_cast<std::size_t>(g.edges[i].q)].node;
        ng.ends.emplace_back(a, b);
        ng.incident[static_cast<std::size_t>(a)].push_back(static_cast<int>(i));
        ng.incident[static_cast<std::size_t>(b)].push_back(static_cast<int>(i));
    }
    return ng;
}

// Tarjan low-link over the multigraph restricted to `in`; parallel edges are
// told apart by edge index.
bool has_bridge(const NodeGraph& ng, const std::vector<char>& in, int start) {
    const std::size_t n = ng.incident.size();
    std::vector<int> disc(n, -1), low(n, 0);
    int clock = 0;
    bool bridge = false;
    std::function<void(int, int)> dfs = [&](int u, int via) {
        disc[static_cast<std::size_t>(u)] = low[static_cast<std::size_t>(u)] = clock++;
        for (int e : ng.incident[static_cast<std::size_t>(u)]) {
            if (!in[static_cast<std::size_t>(e)] || e == via) continue;
            const auto [a, b] = ng.ends[static_cast<std::size_t>(e)];
            const int w = a == u ? b : a;
            if (disc[static_cast<std::size_t>(w)] < 0) {
                dfs(w, e);
                low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], low[static_cast<std::size_t>(w)]);
                if (low[static_cast<std::size_t>(w)] > disc[static_cast<std::size_t>(u)]) bridge = true;
            } else {
                low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], disc[static_cast<std::size_t>(w)]);
            }
        }
    };
    dfs(start, -1);
    return bridge;
}

}  // namespace

std::vector<EdgeSet> enumerate_relevant_subgraphs(const FeynmanGraph& g) {
    if (static_cast<int>(g.points.size()) > kMaxPoints) {
        const double estimate = std::ldexp(1.0, static_cast<int>(g.edges.size()));
        throw EnumerationRefused("graph has " + std::to_string(g.points.size()) + " points, above the cap of " +
                                     std::to_string(kMaxPoints) + "; about " + std::to_string(estimate) +
                                     " edge subsets would be examined",
                                 estimate);
    }
    const NodeGraph ng = node_graph(g);
    const int m = static_cast<int>(g.edges.size());
    std::vector<EdgeSet> out;
    std::vector<char> in(static_cast<std::size_t>(m), 0), banned(static_cast<std::size_t>(m), 0);

    // Each connected edge set is grown from its smallest edge; every edge in
    // the frontier is either taken or banned, so each set is reached once.
    std::function<void(int, std::vector<int>)> grow = [&](int root, std::vector<int> frontier) {
        if (frontier.empty()) {
            EdgeSet s;
            std::vector<char> touched(g.nodes.size(), 0);
            for (int e = 0; e < m; ++e) {
                if (!in[static_cast<std::size_t>(e)]) continue;
                s.push_back(e);
                touched[static_cast<std::size_t>(ng.ends[static_cast<std::size_t>(e)].first)] = 1;
                touched[static_cast<std::size_t>(ng.ends[static_cast<std::size_t>(e)].second)] = 1;
            }
            const long nodes = std::count(touched.begin(), touched.end(), 1);
            if (static_cast<long>(s.size()) - nodes + 1 > 0 &&
                !has_bridge(ng, in, ng.ends[static_cast<std::size_t>(root)].first)) {
                out.push_back(std::move(s));
            }
            return;
        }
        const int e = frontier.back();
        frontier.pop_back();

        banned[static_cast<std::size_t>(e)] = 1;
        grow(root, frontier);
        banned[static_cast<std::size_t>(e)] = 0;

        in[static_cast<std::size_t>(e)] = 1;
        std::vector<int> next = frontier;
        for (int node : {ng.ends[static_cast<std::size_t>(e)].first, ng.ends[static_cast<std::size_t>(e)].second}) {
            for (int f : ng.incident[static_cast<std::size_t>(node)]) {
                if (f > root && !in[static_cast<std::size_t>(f)] && !banned[static_cast<std::size_t>(f)] &&
                    std::find(next.begin(), next.end(), f) == next.end()) {
                    next.push_back(f);
                }
            }
        }
        grow(root, next);
        in[static_cast<std::size_t>(e)] = 0;
    };

    for (int root = 0; root < m; ++root) {
        in[static_cast<std::size_t>(root)] = 1;
        std::vector<int> frontier;
        for (int node : {ng.ends[static_cast<std::size_t>(root)].first, ng.ends[static_cast<std::size_t>(root)].second}) {
            for (int f : ng.incident[static_cast<std::size_t>(node)]) {
                if (f > root && std::find(frontier.begin(), frontier.end(), f) == frontier.end()) frontier.push_back(f);
            }
        }
        grow(root, frontier);
        in[static_cast<std::size_t>(root)] = 0;
    }
    std::sort(out.begin(), out.end(), [](const EdgeSet& a, const EdgeSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

}  // namespace phi4::pc
