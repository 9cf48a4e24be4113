#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phi4/powercount.hpp"

namespace phi4::pc {
namespace {

Verdict classify(const Rational& excess) {
    if (excess > 0) return Verdict::Convergent;
    if (excess >= -1) return Verdict::Renormalizable;
    return Verdict::Superdivergent;
}

int severity(Verdict v) {
    switch (v) {
        case Verdict::ShieldedExempt: return 0;
        case Verdict::Convergent: return 1;
        case Verdict::Renormalizable: return 2;
        case Verdict::Superdivergent: return 3;
    }
    return 3;
}

}  // namespace

Verdict SubgraphVerdict::at(const Rational& gamma) const {
    if (shielded) return Verdict::ShieldedExempt;
    Verdict worst = unmarked;
    if (a2) {
        const Rational excess = Rational(a2->constant + codim_marked) + Rational(a2->gamma_coefficient) * gamma;
        const Verdict marked = classify(excess);
        if (severity(marked) > severity(worst)) worst = marked;
    }
    return worst;
}

SubgraphVerdict verdict(const FeynmanGraph& g, const EdgeSet& edges) {
    SubgraphVerdict v;
    v.edges = edges;
    std::set<int> nodes;
    std::vector<int> degree(g.points.size(), 0);
    long kernel_sum = 0;
    bool marked_probe = false;
    for (int i : edges) {
        const Edge& e = g.edges[static_cast<std::size_t>(i)];
        nodes.insert(g.points[static_cast<std::size_t>(e.p)].node);
        nodes.insert(g.points[static_cast<std::size_t>(e.q)].node);
        ++degree[static_cast<std::size_t>(e.p)];
        ++degree[static_cast<std::size_t>(e.q)];
        if (e.probe) marked_probe = marked_probe || e.marked;
        else kernel_sum += e.homogeneity;
    }
    v.nodes.assign(nodes.begin(), nodes.end());
    v.loops = static_cast<int>(edges.size()) - static_cast<int>(nodes.size()) + 1;

    long triples = 0, space_points = 0, free_times = 0;
    bool any_pinned = false;
    for (int n : v.nodes) {
        const Node& node = g.nodes[static_cast<std::size_t>(n)];
        space_points += static_cast<long>(node.points.size());
        any_pinned = any_pinned || node.pinned;
        if (node.triple) {
            ++triples;
            for (int leg : {node.points[1], node.points[2]}) {
                if (degree[static_cast<std::size_t>(leg)] == 0) v.shielded = true;
            }
        } else if (!node.pinned) {
            ++free_times;
        }
    }

    v.a1 = -6 * triples - kernel_sum;
    v.codim_marked = 2 * free_times + 3 * space_points;
    v.codim_unmarked = any_pinned ? 2 * free_times + 3 * (space_points - 1) : 2 * (free_times - 1) + 3 * (space_points - 1);
    v.unmarked = classify(Rational(v.a1 + v.codim_unmarked));
    if (marked_probe) {
        v.a2 = Linear{v.a1 - 6, -2};
        v.gamma_bound = Rational(v.a1 - 6 + v.codim_marked, 2);
    }
    return v;
}

GammaRange gamma_range(const FeynmanGraph& g) {
    GammaRange out;
    for (const auto& s : enumerate_relevant_subgraphs(g)) out.subgraphs.push_back(verdict(g, s));
    for (std::size_t i = 0; i < out.subgraphs.size(); ++i) {
        const auto& v = out.subgraphs[i];
        if (v.shielded) continue;
        if (v.gamma_bound && (!out.gamma_max || *v.gamma_bound < *out.gamma_max)) out.gamma_max = v.gamma_bound;
        if (v.unmarked == Verdict::Renormalizable) out.renormalizable.push_back(static_cast<int>(i));
        if (v.unmarked == Verdict::Superdivergent) out.superdivergent.push_back(static_cast<int>(i));
    }
    return out;
}

std::string report_table(const FeynmanGraph& g, const GammaRange& range) {
    std::ostringstream os;
    os << "subgraph\tloops\ta1\ta2\tcodim_unmarked\tcodim_marked\tunmarked\tmarked\n";
    for (const auto& v : range.subgraphs) {
        os << describe_edges(g, v.edges) << '\t' << v.loops << '\t' << v.a1 << '\t' << (v.a2 ? v.a2->str() : "-") << '\t'
           << v.codim_unmarked << '\t' << v.codim_marked << '\t'
           << (v.shielded ? "shielded" : verdict_name(v.unmarked)) << '\t';
        if (v.shielded || !v.gamma_bound) os << '-';
        else os << "gamma < " << format_rational(*v.gamma_bound);
        os << '\n';
    }
    os << "gamma_max = " << (range.gamma_max ? format_rational(*range.gamma_max) : "inf") << '\n';
    return os.str();
}

std::string report_json(const FeynmanGraph& g, const GammaRange& range) {
    nlohmann::json j;
    j["triples"] = g.triple_count();
    j["edges"] = g.edges.size();
    j["loops"] = g.loop_number();
    j["gamma_max"] = range.gamma_max ? nlohmann::json(format_rational(*range.gamma_max)) : nlohmann::json(nullptr);
    auto& subs = j["subgraphs"] = nlohmann::json::array();
    for (const auto& v : range.subgraphs) {
        nlohmann::json s;
        s["edges"] = describe_edges(g, v.edges);
        s["loops"] = v.loops;
        s["a1"] = v.a1;
        s["a2"] = v.a2 ? nlohmann::json(v.a2->str()) : nlohmann::json(nullptr);
        s["codim_unmarked"] = v.codim_unmarked;
        s["codim_marked"] = v.codim_marked;
        s["shielded"] = v.shielded;
        s["unmarked_verdict"] = verdict_name(v.unmarked);
        s["gamma_bound"] = v.gamma_bound ? nlohmann::json(format_rational(*v.gamma_bound)) : nlohmann::json(nullptr);
        subs.push_back(s);
    }
    j["renormalizable"] = range.renormalizable;
    j["superdivergent"] = range.superdivergent;
    return j.dump(2);
}

}  // namespace phi4::pc
