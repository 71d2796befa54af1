#pragma once

// Shared test helpers: deterministic random-function corpus, the numeric
// divergence probe used as an oracle against the symbolic edge test, and
// nonnegative-matrix utilities with an independent power-iteration oracle.

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "topical/expr.hpp"
#include "topical/metrics.hpp"

namespace testsupport {

using topical::ExprNode;
using topical::NodeKind;
using topical::TopicalFn;
using topical::Vec;

inline std::string data_path(const std::string& file) {
    return std::string(TOPICAL_DATA_DIR) + "/" + file;
}

inline TopicalFn load(const std::string& file) {
    return topical::parse_file(data_path(file));
}

// --------------------------------------------------------------------------
// Random DSL corpus
// --------------------------------------------------------------------------

struct CorpusOptions {
    int dim_max = 6;
    int depth_max = 3;
    bool convex_only = false;  // restrict to Max/Lin/Geo/Scale/Var
};

inline ExprNode random_node(std::mt19937_64& rng, int dim, int depth, bool convex_only) {
    std::uniform_int_distribution<int> var_pick(1, dim);
    std::uniform_real_distribution<double> coeff(0.1, 10.0);
    if (depth <= 0) return ExprNode::make_var(var_pick(rng));

    int hi = convex_only ? 4 : 6;
    std::uniform_int_distribution<int> kind_pick(0, hi);
    std::uniform_int_distribution<int> arity_pick(1, 3);
    int k = kind_pick(rng);
    auto children = [&](int m) {
        std::vector<ExprNode> ch;
        for (int i = 0; i < m; ++i) ch.push_back(random_node(rng, dim, depth - 1, convex_only));
        return ch;
    };
    auto weights = [&](int m) {
        std::vector<double> w(m);
        for (auto& v : w) v = coeff(rng);
        return w;
    };
    switch (k) {
        case 0: return ExprNode::make_var(var_pick(rng));
        case 1:
            return ExprNode::make_scale(coeff(rng), random_node(rng, dim, depth - 1, convex_only));
        case 2: return ExprNode::make_nary(NodeKind::Max, children(arity_pick(rng)));
        case 3: {
            int m = arity_pick(rng);
            return ExprNode::make_weighted(NodeKind::Lin, weights(m), children(m));
        }
        case 4: {
            int m = arity_pick(rng);
            std::vector<double> w = weights(m);
            double s = 0.0;
            for (double v : w) s += v;
            for (auto& v : w) v /= s;
            // renormalize so the sum is exactly 1 in floating point
            double s2 = 0.0;
            for (size_t i = 0; i + 1 < w.size(); ++i) s2 += w[i];
            w.back() = 1.0 - s2;
            return ExprNode::make_weighted(NodeKind::Geo, w, children(m));
        }
        case 5: return ExprNode::make_nary(NodeKind::Min, children(arity_pick(rng)));
        default: {
            int m = arity_pick(rng);
            return ExprNode::make_weighted(NodeKind::Har, weights(m), children(m));
        }
    }
}

inline TopicalFn random_fn(std::mt19937_64& rng, const CorpusOptions& opt = {}) {
    std::uniform_int_distribution<int> dim_pick(1, opt.dim_max);
    std::uniform_int_distribution<int> depth_pick(1, opt.depth_max);
    TopicalFn f;
    f.dim = dim_pick(rng);
    for (int i = 0; i < f.dim; ++i)
        f.coords.push_back(random_node(rng, f.dim, depth_pick(rng), opt.convex_only));
    topical::validate(f);
    return f;
}

inline Vec random_point(std::mt19937_64& rng, int dim, double lo = -5.0, double hi = 5.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec x(dim);
    for (auto& v : x) v = dist(rng);
    return x;
}

// --------------------------------------------------------------------------
// Numeric divergence probe (oracle for the symbolic edge test)
// --------------------------------------------------------------------------

// Monotone growth of f_i(u e_J) across u = 2^10, 2^20, 2^40; divergence
// iff the last increment exceeds 1.
inline bool diverges_probe(const TopicalFn& f, int i, const std::vector<int>& J) {
    auto value_at = [&](double u) {
        Vec x(f.dim, 0.0);
        for (int j : J) x[j - 1] = u;
        return topical::eval_additive_coord(f, i, x);
    };
    double v20 = value_at(std::ldexp(1.0, 20));
    double v40 = value_at(std::ldexp(1.0, 40));
    return v40 - v20 > 1.0;
}

// --------------------------------------------------------------------------
// Nonnegative matrices
// --------------------------------------------------------------------------

using Matrix = std::vector<std::vector<double>>;

// E(A) as a DSL function: coordinate i is lin over the nonzero entries.
inline TopicalFn fn_from_matrix(const Matrix& a) {
    int n = static_cast<int>(a.size());
    TopicalFn f;
    f.dim = n;
    for (int i = 0; i < n; ++i) {
        std::vector<double> w;
        std::vector<ExprNode> ch;
        for (int j = 0; j < n; ++j) {
            if (a[i][j] != 0.0) {
                w.push_back(a[i][j]);
                ch.push_back(ExprNode::make_var(j + 1));
            }
        }
        if (ch.empty()) throw std::invalid_argument("zero row: not a self-map of the cone");
        f.coords.push_back(
            ExprNode::make_weighted(NodeKind::Lin, std::move(w), std::move(ch)));
    }
    topical::validate(f);
    return f;
}

// Random irreducible nonnegative matrix: entries 0 or uniform [0.1, 1],
// with the cycle 1 -> 2 -> ... -> n -> 1 forced in.
inline Matrix random_irreducible(std::mt19937_64& rng, int n, double density = 0.5) {
    std::uniform_real_distribution<double> entry(0.1, 1.0);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    Matrix a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (pick(rng) < density) a[i][j] = entry(rng);
    for (int i = 0; i < n; ++i) a[i][(i + 1) % n] = std::max(a[i][(i + 1) % n], entry(rng));
    return a;
}

// Straightforward power iteration on A + I (primitive for irreducible A,
// so the iteration converges); returns {rho(A), Perron vector}.
inline std::pair<double, Vec> power_iteration_oracle(const Matrix& a, int iters = 200000,
                                                     double tol = 1e-14) {
    int n = static_cast<int>(a.size());
    Vec y(n, 1.0);
    double rho_shifted = 1.0;
    for (int it = 0; it < iters; ++it) {
        Vec z(n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) z[i] += a[i][j] * y[j];
            z[i] += y[i];  // the +I shift
        }
        double norm = 0.0;
        for (double v : z) norm += v;
        for (auto& v : z) v /= norm;
        double delta = 0.0;
        for (int i = 0; i < n; ++i) delta = std::max(delta, std::abs(z[i] - y[i]));
        y = z;
        rho_shifted = norm;
        if (delta < tol) break;
    }
    return {rho_shifted - 1.0, y};
}

}  // namespace testsupport
