#include "topical/graphs.hpp"

#include <algorithm>
#include <stdexcept>

namespace topical {

bool Digraph::has_edge(int u, int v) const {
    const auto& row = adj[u];
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<std::pair<int, int>> Digraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) out.emplace_back(u, v);
    return out;
}

int Digraph::edge_count() const {
    int c = 0;
    for (const auto& row : adj) c += static_cast<int>(row.size());
    return c;
}

// ---------------------------------------------------------------------------
// SCC (iterative Tarjan)
// ---------------------------------------------------------------------------

SccPartition scc_condense(const Digraph& g) {
    const int n = g.n;
    std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    int n_comps = 0;

    struct Frame {
        int v;
        size_t child = 0;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root});
        while (!call.empty()) {
            Frame& fr = call.back();
            int v = fr.v;
            if (fr.child == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (fr.child < g.adj[v].size()) {
                int w = g.adj[v][fr.child++];
                if (index[w] == -1) {
                    call.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = n_comps;
                    if (w == v) break;
                }
                ++n_comps;
            }
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().v;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }

    // Tarjan emits components in reverse topological order; flip the ids so
    // sources come first.
    for (int v = 0; v < n; ++v) comp[v] = n_comps - 1 - comp[v];

    SccPartition part;
    part.n_comps = n_comps;
    part.comp = comp;
    part.members.assign(n_comps, {});
    for (int v = 0; v < n; ++v) part.members[comp[v]].push_back(v);

    Digraph cond;
    cond.n = n_comps;
    cond.adj.assign(n_comps, {});
    cond.sigma.assign(n_comps, {});
    for (int c = 0; c < n_comps; ++c) {
        std::vector<int> merged;
        for (int v : part.members[c])
            merged.insert(merged.end(), g.sigma[v].begin(), g.sigma[v].end());
        std::sort(merged.begin(), merged.end());
        cond.sigma[c] = std::move(merged);
    }
    for (int u = 0; u < n; ++u)
        for (int v : g.adj[u])
            if (comp[u] != comp[v]) cond.adj[comp[u]].push_back(comp[v]);
    for (auto& row : cond.adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    part.condensation = std::move(cond);
    return part;
}

bool strongly_connected(const Digraph& g) {
    if (g.n <= 1) return true;
    return scc_condense(g).n_comps == 1;
}

// ---------------------------------------------------------------------------
// Divergence predicate and graphs
// ---------------------------------------------------------------------------

namespace {

bool diverges_node(const ExprNode& e, const std::vector<bool>& in_J) {
    switch (e.kind) {
        case NodeKind::Var:
            return in_J[e.var - 1];
        case NodeKind::Scale:
            return diverges_node(e.children[0], in_J);
        case NodeKind::Max:
        case NodeKind::Lin:
        case NodeKind::Geo:
            for (const auto& c : e.children)
                if (diverges_node(c, in_J)) return true;
            return false;
        case NodeKind::Min:
        case NodeKind::Har:
            for (const auto& c : e.children)
                if (!diverges_node(c, in_J)) return false;
            return true;
    }
    return false;
}

std::vector<bool> mask_of(const std::vector<int>& J, int dim) {
    std::vector<bool> m(dim, false);
    for (int j : J) {
        if (j < 1 || j > dim) throw std::invalid_argument("coordinate set index out of range");
        m[j - 1] = true;
    }
    return m;
}

void collect_vars(const ExprNode& e, std::vector<bool>& seen) {
    if (e.kind == NodeKind::Var)
        seen[e.var - 1] = true;
    else
        for (const auto& c : e.children) collect_vars(c, seen);
}

Digraph singleton_graph(int n) {
    Digraph g;
    g.n = n;
    g.adj.assign(n, {});
    g.sigma.resize(n);
    for (int i = 0; i < n; ++i) g.sigma[i] = {i + 1};
    return g;
}

}  // namespace

bool diverges(const TopicalFn& f, int i, const std::vector<int>& J) {
    if (i < 1 || i > f.dim) throw std::invalid_argument("coordinate index out of range");
    if (J.empty()) throw std::invalid_argument("divergence set must be nonempty");
    return diverges_node(f.coords[i - 1], mask_of(J, f.dim));
}

Digraph associated_graph(const TopicalFn& f) {
    Digraph g = singleton_graph(f.dim);
    std::vector<bool> mask(f.dim, false);
    for (int i = 0; i < f.dim; ++i) {
        for (int j = 0; j < f.dim; ++j) {
            mask[j] = true;
            if (diverges_node(f.coords[i], mask)) g.adj[i].push_back(j);
            mask[j] = false;
        }
    }
    return g;
}

Digraph dual_graph(const TopicalFn& f) { return associated_graph(dual(f)); }

Digraph syntactic_graph(const TopicalFn& f) {
    Digraph g = singleton_graph(f.dim);
    for (int i = 0; i < f.dim; ++i) {
        std::vector<bool> seen(f.dim, false);
        collect_vars(f.coords[i], seen);
        for (int j = 0; j < f.dim; ++j)
            if (seen[j]) g.adj[i].push_back(j);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Aggregation tower
// ---------------------------------------------------------------------------

AggregationTower aggregate(const TopicalFn& f) {
    AggregationTower tower;
    tower.levels.push_back(associated_graph(f));
    while (true) {
        const Digraph& cur = tower.levels.back();
        SccPartition part = scc_condense(cur);
        bool all_singleton = true;
        for (const auto& m : part.members)
            if (m.size() > 1) {
                all_singleton = false;
                break;
            }
        if (all_singleton) {
            tower.stabilized_at = static_cast<int>(tower.levels.size());
            return tower;
        }
        // Next level: SCCs as vertices, edges re-tested against whole
        // components via the sigma images.
        Digraph next;
        next.n = part.n_comps;
        next.adj.assign(part.n_comps, {});
        next.sigma = part.condensation.sigma;
        for (int I = 0; I < part.n_comps; ++I) {
            for (int J = 0; J < part.n_comps; ++J) {
                std::vector<bool> mask(f.dim, false);
                for (int c : next.sigma[J]) mask[c - 1] = true;
                for (int c : next.sigma[I]) {
                    if (diverges_node(f.coords[c - 1], mask)) {
                        next.adj[I].push_back(J);
                        break;
                    }
                }
            }
        }
        tower.levels.push_back(std::move(next));
    }
}

IndecomposabilityResult is_indecomposable(const TopicalFn& f) {
    AggregationTower tower = aggregate(f);
    const Digraph& ginf = tower.levels.back();
    IndecomposabilityResult res;
    if (ginf.n == 1) {  // all SCCs of G^inf are singletons, so this is the iff
        res.indecomposable = true;
        return res;
    }
    res.indecomposable = false;

    // Sources of G^inf (no in-edge from a distinct vertex) are minimal in
    // the accessibility order; each yields a witness. Pick the one whose I
    // is lexicographically smallest.
    std::vector<bool> has_in(ginf.n, false);
    for (int u = 0; u < ginf.n; ++u)
        for (int v : ginf.adj[u])
            if (u != v) has_in[v] = true;

    std::optional<DecompositionWitness> best;
    for (int x = 0; x < ginf.n; ++x) {
        if (has_in[x]) continue;
        DecompositionWitness w;
        w.J = ginf.sigma[x];
        std::vector<bool> in_J(f.dim, false);
        for (int c : w.J) in_J[c - 1] = true;
        for (int c = 1; c <= f.dim; ++c)
            if (!in_J[c - 1]) w.I.push_back(c);
        for (int i : w.I)
            if (diverges(f, i, w.J))
                throw std::logic_error("decomposition witness failed its divergence check");
        if (!best || w.I < best->I) best = std::move(w);
    }
    if (!best) throw std::logic_error("no source vertex in a non-strongly-connected DAG");
    res.witness = std::move(best);
    return res;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

std::string sigma_label(const std::vector<int>& sigma) {
    std::string s = "{";
    for (size_t i = 0; i < sigma.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(sigma[i]);
    }
    s += "}";
    return s;
}

std::string to_dot(const Digraph& g, const std::string& name) {
    std::string out = "digraph " + name + " {\n";
    for (int v = 0; v < g.n; ++v)
        out += "  v" + std::to_string(v) + " [label=\"" + sigma_label(g.sigma[v]) + "\"];\n";
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            out += "  v" + std::to_string(u) + " -> v" + std::to_string(v) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace topical
