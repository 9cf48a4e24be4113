#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace phi4::pc {

using Rational = boost::rational<long>;

// Homogeneity of an edge kernel. The probe kernel carries 6 + 2 gamma when
// marked and 0 otherwise; every other kernel has a fixed integer degree.
struct KernelKind {
    std::string name;
    int homogeneity = 0;
    bool probe = false;
};

class KernelTable {
public:
    KernelTable();  // L = 3, G1 = 1, G2 = 2, G3 = 3, DL = 5, Q = probe
    void register_kernel(const std::string& name, int homogeneity);
    const KernelKind* find(const std::string& name) const;

private:
    std::map<std::string, KernelKind> kinds_;
};

// A node is either a singleton point or a resonance triple of three points
// (centre, leg1, leg2). Points are addressed by name.
struct Point {
    std::string name;
    int node;
    int role;  // -1 singleton, 0 centre, 1 and 2 legs
};

struct Node {
    bool triple = false;
    std::string name;
    std::vector<int> points;  // 1 or 3 entries
    bool pinned = false;      // time fixed (triples always are)
};

struct Edge {
    std::string kind;
    int homogeneity = 0;
    bool probe = false;
    bool marked = false;
    bool time0 = false;
    int p = -1;  // point indices
    int q = -1;
    int line = 0;
};

struct FeynmanGraph {
    std::vector<Point> points;
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    int triple_count() const;
    int loop_number() const;  // |E| - nodes + 1 for a connected graph
    std::optional<int> probe_edge() const;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, ParallelEdges, EdgeInsideTriple, SecondProbe, DanglingReference, DuplicateName, BadProbe };
    ParseError(Kind kind, int line, const std::string& message);
    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

// One declaration per line:
//   vertex a [time=t]
//   triple T1 = (s1, l1, l2)
//   edge L a b
//   edge G2 l1 m1 time0
//   edge Q s1 s2 mark
//   J = {a, b}
// '#' starts a comment.
FeynmanGraph parse_graph(const std::string& text, const KernelTable& kernels = KernelTable());

// A subgraph is a set of edges; its nodes are the nodes those edges touch.
using EdgeSet = std::vector<int>;

class EnumerationRefused : public std::runtime_error {
public:
    EnumerationRefused(const std::string& what, double estimate) : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

constexpr int kMaxPoints = 14;

// Connected, bridgeless edge sets with positive loop number, sorted.
std::vector<EdgeSet> enumerate_relevant_subgraphs(const FeynmanGraph& g);

// Linear expression constant + gamma_coefficient * gamma.
struct Linear {
    long constant = 0;
    long gamma_coefficient = 0;
    std::string str() const;
};

enum class Verdict { Convergent, Renormalizable, ShieldedExempt, Superdivergent };
const char* verdict_name(Verdict v);

struct SubgraphVerdict {
    EdgeSet edges;
    std::vector<int> nodes;
    int loops = 0;
    long a1 = 0;
    std::optional<Linear> a2;  // only when the marked probe is in the subgraph
    long codim_unmarked = 0;
    long codim_marked = 0;
    bool shielded = false;
    Verdict unmarked;  // classification of a1 against the unmarked codimension
    // Marked diagonal converges iff gamma < gamma_bound.
    std::optional<Rational> gamma_bound;
    // Both diagonals at a given gamma.
    Verdict at(const Rational& gamma) const;
};

SubgraphVerdict verdict(const FeynmanGraph& g, const EdgeSet& edges);

struct GammaRange {
    std::optional<Rational> gamma_max;  // empty: unbounded
    std::vector<SubgraphVerdict> subgraphs;
    std::vector<int> renormalizable;  // indices into subgraphs with a case-(b) unmarked diagonal
    std::vector<int> superdivergent;
};

GammaRange gamma_range(const FeynmanGraph& g);

std::string describe_edges(const FeynmanGraph& g, const EdgeSet& edges);
std::string format_rational(const Rational& r);
std::string report_table(const FeynmanGraph& g, const GammaRange& range);
std::string report_json(const FeynmanGraph& g, const GammaRange& range);

}  // namespace phi4::pc
