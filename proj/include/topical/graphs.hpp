#pragma once

// The associated graph G(f), its dual and syntactic variants, SCC
// condensation, the aggregated tower G^1(f), ..., G^inf(f) and the
// indecomposability decision with a decomposition witness.
//
// Edges are decided symbolically on the AST, which is exact for the
// grammar: a limit f_i(u e_J) -> inf holds iff the divergence predicate
// recurses to true (Var in J; Scale inherits; Max/Lin/Geo need any child;
// Min/Har need all children).

#include <optional>
#include <string>
#include <vector>

#include "topical/expr.hpp"

namespace topical {

struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> adj;    // sorted out-neighbour lists
    std::vector<std::vector<int>> sigma;  // per-vertex sorted 1-based coordinate labels

    bool has_edge(int u, int v) const;
    std::vector<std::pair<int, int>> edges() const;
    int edge_count() const;
};

struct SccPartition {
    int n_comps = 0;
    std::vector<int> comp;                  // vertex -> component id, topological order
    std::vector<std::vector<int>> members;  // component -> sorted member vertices
    Digraph condensation;                   // DAG between distinct components
};

// Iterative Tarjan; component ids are renumbered into topological order
// (sources first) so the condensation's edges always go id-upward.
SccPartition scc_condense(const Digraph& g);

// True for a single vertex regardless of self-loop, matching the
// communication relation.
bool strongly_connected(const Digraph& g);

// Exact truth of lim_{u->inf} f_i(u e_J) = inf; i and J are 1-based.
bool diverges(const TopicalFn& f, int i, const std::vector<int>& J);

Digraph associated_graph(const TopicalFn& f);  // edge i->j iff diverges(f, i, {j})
Digraph dual_graph(const TopicalFn& f);        // associated graph of the dual function
Digraph syntactic_graph(const TopicalFn& f);   // edge i->j iff x_j occurs in f_i

struct AggregationTower {
    std::vector<Digraph> levels;  // G^1 .. G^N
    int stabilized_at = 0;        // N: first level whose SCCs are all singletons
};

// G^1 is the associated graph; level k+1 has the SCCs of level k as
// vertices and an edge I->J iff some i in sigma(I) has f_i(u e_sigma(J))
// unbounded. Stops at the first level with only singleton SCCs; N <= n.
AggregationTower aggregate(const TopicalFn& f);

struct DecompositionWitness {
    std::vector<int> I, J;  // disjoint, nonempty, I union J = {1..n}
};

struct IndecomposabilityResult {
    bool indecomposable = false;
    std::optional<DecompositionWitness> witness;  // present iff decomposable
};

// f is indecomposable iff G^inf(f) is strongly connected. When it is not,
// the witness takes J = sigma(X) for a source vertex X of G^inf and
// I = {1..n} \ J; diverges(f, i, J) is false for every i in I.
IndecomposabilityResult is_indecomposable(const TopicalFn& f);

std::string to_dot(const Digraph& g, const std::string& name = "G");
std::string sigma_label(const std::vector<int>& sigma);  // "{3,4}"

}  // namespace topical
