#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "phi4/powercount.hpp"

namespace phi4::pc {
namespace {

using Kind = ParseError::Kind;

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(strip(item));
    return out;
}

struct PendingEdge {
    std::string kind, a, b;
    bool mark = false, time0 = false;
    int line;
};

}  // namespace

FeynmanGraph parse_graph(const std::string& text, const KernelTable& kernels) {
    static const std::regex vertex_re(R"(vertex\s+(\w+)\s*(?:\[?\s*time\s*=\s*(\w+)\s*\]?)?)");
    static const std::regex triple_re(R"(triple\s+(\w+)\s*=\s*\(\s*([^)]*)\))");
    static const std::regex edge_re(R"(edge\s+(\w+)\s+(\S+)\s+(\S+)((?:\s+\w+)*))");
    static const std::regex j_re(R"(J\s*=\s*\{([^}]*)\})");

    FeynmanGraph g;
    std::map<std::string, int> point_by_name;
    std::vector<PendingEdge> pending;
    std::vector<std::pair<std::string, int>> pinned;

    auto add_point = [&](const std::string& name, int node, int role, int line) {
        if (point_by_name.count(name)) throw ParseError(Kind::DuplicateName, line, "name '" + name + "' declared twice");
        point_by_name[name] = static_cast<int>(g.points.size());
        g.points.push_back({name, node, role});
        g.nodes[static_cast<std::size_t>(node)].points.push_back(point_by_name[name]);
    };

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        std::smatch m;
        if (std::regex_match(s, m, vertex_re)) {
            g.nodes.push_back({false, m[1], {}, m[2].matched});
            add_point(m[1], static_cast<int>(g.nodes.size()) - 1, -1, line);
        } else if (std::regex_match(s, m, triple_re)) {
            const auto names = split_names(m[2]);
            if (names.size() != 3) throw ParseError(Kind::Syntax, line, "a triple needs exactly three points");
            g.nodes.push_back({true, m[1], {}, true});
            const int node = static_cast<int>(g.nodes.size()) - 1;
            for (int role = 0; role < 3; ++role) add_point(names[static_cast<std::size_t>(role)], node, role, line);
        } else if (std::regex_match(s, m, edge_re)) {
            PendingEdge e{m[1], m[2], m[3], false, false, line};
            std::istringstream flags(m[4]);
            std::string flag;
            while (flags >> flag) {
                if (flag == "mark") e.mark = true;
                else if (flag == "time0") e.time0 = true;
                else throw ParseError(Kind::Syntax, line, "unknown edge flag '" + flag + "'");
            }
            pending.push_back(e);
        } else if (std::regex_match(s, m, j_re)) {
            for (const auto& name : split_names(m[1])) {
                if (!name.empty()) pinned.emplace_back(name, line);
            }
        } else {
            throw ParseError(Kind::Syntax, line, "cannot parse '" + s + "'");
        }
    }

    auto lookup = [&](const std::string& name, int at) {
        const auto it = point_by_name.find(name);
        if (it == point_by_name.end()) throw ParseError(Kind::DanglingReference, at, "unknown vertex '" + name + "'");
        return it->second;
    };

    for (const auto& [name, at] : pinned) {
        const Point& p = g.points[static_cast<std::size_t>(lookup(name, at))];
        g.nodes[static_cast<std::size_t>(p.node)].pinned = true;
    }

    std::set<std::pair<int, int>> seen;
    for (const auto& pe : pending) {
        const KernelKind* k = kernels.find(pe.kind);
        if (!k) throw ParseError(Kind::Syntax, pe.line, "unknown kernel '" + pe.kind + "'");
        Edge e;
        e.kind = pe.kind;
        e.homogeneity = k->homogeneity;
        e.probe = k->probe;
        e.marked = pe.mark;
        e.time0 = pe.time0;
        e.p = lookup(pe.a, pe.line);
        e.q = lookup(pe.b, pe.line);
        e.line = pe.line;
        if (pe.mark && !k->probe) throw ParseError(Kind::Syntax, pe.line, "only the probe edge can be marked");
        const Point& pa = g.points[static_cast<std::size_t>(e.p)];
        const Point& pb = g.points[static_cast<std::size_t>(e.q)];
        if (pa.node == pb.node) {
            throw ParseError(Kind::EdgeInsideTriple, pe.line, "edge " + pe.a + "-" + pe.b + " joins points of one triple");
        }
        const auto key = std::minmax(e.p, e.q);
        if (!seen.insert(key).second) {
            throw ParseError(Kind::ParallelEdges, pe.line, "second edge between " + pe.a + " and " + pe.b);
        }
        if (e.probe) {
            if (g.probe_edge()) throw ParseError(Kind::SecondProbe, pe.line, "a graph has at most one probe edge");
            for (const Point* p : {&pa, &pb}) {
                const Node& n = g.nodes[static_cast<std::size_t>(p->node)];
                const bool ok = p->role == 0 || (p->role == -1 && n.pinned);
                if (!ok) {
                    throw ParseError(Kind::BadProbe, pe.line,
                                     "probe endpoint '" + p->name + "' is neither a triple centre nor a pinned vertex");
                }
            }
        }
        g.edges.push_back(e);
    }
    return g;
}

}  // namespace phi4::pc
