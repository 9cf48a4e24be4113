#include <algorithm>
#include <sstream>

#include "phi4/powercount.hpp"

namespace phi4::pc {

KernelTable::KernelTable() {
    for (const auto& [name, a] : std::vector<std::pair<std::string, int>>{{"L", 3}, {"G1", 1}, {"G2", 2}, {"G3", 3}, {"DL", 5}}) {
        register_kernel(name, a);
    }
    kinds_["Q"] = KernelKind{"Q", 0, true};
}

void KernelTable::register_kernel(const std::string& name, int homogeneity) {
    if (name.empty() || name == "Q") throw std::invalid_argument("kernel name '" + name + "' is reserved or empty");
    kinds_[name] = KernelKind{name, homogeneity, false};
}

const KernelKind* KernelTable::find(const std::string& name) const {
    const auto it = kinds_.find(name);
    return it == kinds_.end() ? nullptr : &it->second;
}

int FeynmanGraph::triple_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.triple; }));
}

int FeynmanGraph::loop_number() const {
    return static_cast<int>(edges.size()) - static_cast<int>(nodes.size()) + 1;
}

std::optional<int> FeynmanGraph::probe_edge() const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].probe) return static_cast<int>(i);
    }
    return std::nullopt;
}

ParseError::ParseError(Kind kind, int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), kind_(kind), line_(line) {}

std::string Linear::str() const {
    std::ostringstream os;
    os << constant;
    if (gamma_coefficient != 0) {
        os << (gamma_coefficient < 0 ? " - " : " + ");
        const long c = std::abs(gamma_coefficient);
        if (c != 1) os << c;
        os << "gamma";
    }
    return os.str();
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Convergent: return "convergent";
        case Verdict::Renormalizable: return "renormalizable";
        case Verdict::ShieldedExempt: return "shielded";
        case Verdict::Superdivergent: return "superdivergent";
    }
    return "?";
}

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string describe_edges(const FeynmanGraph& g, const EdgeSet& edges) {
    std::string out = "{";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = g.edges[static_cast<std::size_t>(edges[i])];
        if (i) out += ", ";
        out += e.kind + "(" + g.points[static_cast<std::size_t>(e.p)].name + "," + g.points[static_cast<std::size_t>(e.q)].name + ")";
    }
    return out + "}";
}

}  // namespace phi4::pc
