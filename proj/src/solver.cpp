#include "topical/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

#include "topical/graphs.hpp"
#include "topical/metrics.hpp"

namespace topical {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

double mean(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

}  // namespace

const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::diverged_orbit: return "diverged_orbit";
        case SolveStatus::max_iter: return "max_iter";
    }
    return "?";
}

OrbitTrace orbit(const TopicalFn& f, const Vec& x0, int k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    OrbitTrace tr;
    tr.start = x0;
    tr.iterates.reserve(k_max + 1);
    tr.iterates.push_back(x0);
    tr.hilbert_diameters.push_back(hilbert_seminorm(x0));
    Vec x = x0;
    for (int k = 1; k <= k_max; ++k) {
        x = eval_additive(f, x);
        if (!all_finite(x)) {
            tr.finite = false;
            tr.first_nonfinite = k;
            break;
        }
        tr.iterates.push_back(x);
        SeminormReport sn = seminorms(x);
        tr.hilbert_diameters.push_back(sn.hilbert);
        tr.top_over_k.push_back(sn.top / k);
        tr.bot_over_k.push_back(sn.bot / k);
    }
    return tr;
}

namespace {

// Averaged tail slope: compare the mean of a over two windows of length q
// separated by the lag l. Window averaging cancels periodic components of
// a(k) - k*chi, which a two-point slope cannot.
double window_slope(const std::vector<double>& a, int k_max) {
    int q = std::max(1, k_max / 4);
    int l = std::max(1, k_max / 2);
    double hi = 0.0, lo = 0.0;
    for (int j = k_max - q + 1; j <= k_max; ++j) {
        hi += a[j];
        lo += a[j - l];
    }
    return (hi - lo) / (static_cast<double>(q) * l);
}

}  // namespace

CycleTimes cycle_times(const TopicalFn& f, int k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    Vec x(f.dim, 0.0);
    std::vector<double> tops(k_max + 1, 0.0), bots(k_max + 1, 0.0);
    for (int k = 1; k <= k_max; ++k) {
        x = eval_additive(f, x);
        SeminormReport sn = seminorms(x);
        tops[k] = sn.top;
        bots[k] = sn.bot;
    }
    CycleTimes ct;
    ct.k_max = k_max;
    ct.upper_at_kmax = tops[k_max] / k_max;
    ct.lower_at_kmax = bots[k_max] / k_max;
    if (k_max >= 8) {
        ct.upper_tail = window_slope(tops, k_max);
        ct.lower_tail = window_slope(bots, k_max);
    } else {
        ct.upper_tail = ct.upper_at_kmax;
        ct.lower_tail = ct.lower_at_kmax;
    }
    return ct;
}

namespace {

// Shared sampling for the Collatz-Wielandt bounds: 0, the anchor, then
// uniform points. Returns {min top(f(x)-x), max bot(f(x)-x)}.
std::pair<double, double> cw_scan(const TopicalFn& f, int samples, std::uint64_t seed,
                                  const std::optional<Vec>& anchor) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    double up = kInf, lo = -kInf;
    auto visit = [&](const Vec& x) {
        Vec d = eval_additive(f, x);
        for (int i = 0; i < f.dim; ++i) d[i] -= x[i];
        SeminormReport sn = seminorms(d);
        up = std::min(up, sn.top);
        lo = std::max(lo, sn.bot);
    };
    visit(Vec(f.dim, 0.0));
    if (anchor) visit(*anchor);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    Vec x(f.dim);
    for (int s = 0; s < samples; ++s) {
        for (auto& v : x) v = dist(rng);
        visit(x);
    }
    return {up, lo};
}

}  // namespace

double collatz_wielandt_upper(const TopicalFn& f, int samples, std::uint64_t seed,
                              const std::optional<Vec>& anchor) {
    return cw_scan(f, samples, seed, anchor).first;
}

double collatz_wielandt_lower(const TopicalFn& f, int samples, std::uint64_t seed,
                              const std::optional<Vec>& anchor) {
    return cw_scan(f, samples, seed, anchor).second;
}

// ---------------------------------------------------------------------------
// Eigenvector computation
// ---------------------------------------------------------------------------

namespace {

struct TailWindow {
    // keeps the last `cap` g-orbit points (step index, value)
    size_t cap;
    std::deque<std::pair<int, Vec>> items;

    void push(int step, const Vec& v) {
        items.emplace_back(step, v);
        if (items.size() > cap) items.pop_front();
    }

    // coordinatewise min of stored f-iterates shifted by -step*lambda
    Vec shifted_min(double lambda, int dim) const {
        Vec u(dim, kInf);
        for (const auto& [step, v] : items)
            for (int i = 0; i < dim; ++i) u[i] = std::min(u[i], v[i] - step * lambda);
        return u;
    }
};

}  // namespace

EigenReport eigen_solve(const TopicalFn& f, double tol, int k_max, double d_cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    const int n = f.dim;
    constexpr std::uint64_t cw_seed = 0x9e3779b97f4a7c15ull;

    EigenReport rep;
    rep.eigenvector.assign(n, 0.0);

    auto finish_cw = [&](const std::optional<Vec>& anchor) {
        auto [up, lo] = cw_scan(f, 32, cw_seed, anchor);
        rep.cw_upper = up;
        rep.cw_lower = lo;
    };

    // Phase 1: estimation orbit from 0. Tracks tops for the cycle-time
    // slope, the Hilbert spread for divergence detection, and a tail
    // window for the minimum construction. Exits early once successive
    // iterates differ by a constant vector (the orbit reached an eigenray).
    const int phase1 = std::min(k_max, std::max(100, k_max / 2));
    std::vector<double> tops(phase1 + 1, 0.0), diams(phase1 + 1, 0.0);
    TailWindow window{static_cast<size_t>(std::min(phase1 / 2 + 1, 20000)), {}};
    Vec x(n, 0.0), prev(n, 0.0);
    window.push(0, x);
    int steps = 0;
    bool on_ray = false;
    double lambda_hat = 0.0;
    for (int k = 1; k <= phase1; ++k) {
        prev = x;
        x = eval_additive(f, x);
        steps = k;
        if (!all_finite(x)) {
            rep.status = SolveStatus::diverged_orbit;
            rep.iterations = k;
            finish_cw(std::nullopt);
            return rep;
        }
        SeminormReport sn = seminorms(x);
        tops[k] = sn.top;
        diams[k] = sn.hilbert;
        if (sn.hilbert > d_cap) {
            rep.status = SolveStatus::diverged_orbit;
            rep.iterations = k;
            finish_cw(std::nullopt);
            return rep;
        }
        window.push(k, x);
        Vec step = x;
        for (int i = 0; i < n; ++i) step[i] -= prev[i];
        SeminormReport sd = seminorms(step);
        if (sd.hilbert <= 0.5 * tol) {
            on_ray = true;
            lambda_hat = mean(step);
            break;
        }
    }

    if (!on_ray) {
        // Monotone growth of the spread over the last quarter signals an
        // unbounded orbit (no eigenvector certificate at this horizon).
        if (steps >= 8) {
            int w0 = steps - steps / 4;
            bool monotone = true;
            for (int k = w0; k < steps && monotone; ++k)
                if (!(diams[k + 1] > diams[k])) monotone = false;
            if (monotone && diams[steps] - diams[w0] > 1e-4) {
                rep.status = SolveStatus::diverged_orbit;
                rep.iterations = steps;
                finish_cw(std::nullopt);
                return rep;
            }
        }
        lambda_hat = steps >= 8
                         ? (tops[steps] - tops[(3 * steps) / 4]) / (steps - (3 * steps) / 4)
                         : tops[steps] / steps;
    }

    // Phase 2: minimum over the tail window approximates the liminf of the
    // g-orbit; phase 3 polishes it. On stall, re-take the minimum of the
    // recent polish orbit (handles periodic raw orbits).
    Vec v = on_ray ? x : window.shifted_min(lambda_hat, n);
    int budget = k_max - steps;
    int used = steps;
    double best_rhil = kInf;
    Vec best_v = v;
    double best_lambda = lambda_hat;

    TailWindow polish_window{512, {}};
    int since_best = 0;
    const int stall_limit = std::max(128, std::min(budget / 4, 2000));

    while (true) {
        Vec fv = eval_additive(f, v);
        if (!all_finite(fv)) {
            rep.status = SolveStatus::diverged_orbit;
            rep.iterations = used;
            finish_cw(std::nullopt);
            return rep;
        }
        Vec d = fv;
        for (int i = 0; i < n; ++i) d[i] -= v[i];
        SeminormReport sd = seminorms(d);
        double rhil = sd.hilbert;
        if (rhil < best_rhil) {
            best_rhil = rhil;
            best_v = v;
            best_lambda = mean(d);
            since_best = 0;
        } else {
            ++since_best;
        }
        if (rhil <= tol) {
            double lambda = mean(d);
            rep.status = SolveStatus::converged;
            rep.eigenvalue_additive = lambda;
            rep.iterations = used;
            double shift = bot(v);
            rep.eigenvector = v;
            for (auto& c : rep.eigenvector) c -= shift;
            double rs = 0.0;
            for (int i = 0; i < n; ++i) rs = std::max(rs, std::abs(d[i] - lambda));
            rep.residual_sup = rs;
            finish_cw(rep.eigenvector);
            return rep;
        }
        if (budget <= 0) break;
        --budget;
        ++used;
        // g-step with the fixed estimate; drift along the diagonal is
        // harmless since convergence is tested on the spread of f(v) - v.
        for (int i = 0; i < n; ++i) v[i] = fv[i] - lambda_hat;
        if (hilbert_seminorm(v) > d_cap) {
            rep.status = SolveStatus::diverged_orbit;
            rep.iterations = used;
            finish_cw(std::nullopt);
            return rep;
        }
        polish_window.push(0, v);
        if (since_best >= stall_limit && polish_window.items.size() >= 2) {
            v = polish_window.shifted_min(0.0, n);
            polish_window.items.clear();
            since_best = 0;
        }
    }

    rep.status = SolveStatus::max_iter;
    rep.iterations = used;
    rep.eigenvalue_additive = best_lambda;
    double shift = bot(best_v);
    rep.eigenvector = best_v;
    for (auto& c : rep.eigenvector) c -= shift;
    rep.residual_sup = best_rhil;
    finish_cw(rep.eigenvector);
    return rep;
}

// ---------------------------------------------------------------------------
// Reductions, membership, diameter bound
// ---------------------------------------------------------------------------

Vec byk_reduce(const TopicalFn& f, const Vec& x, int k, double lambda) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const int n = f.dim;
    Vec y = x;
    Vec z = x;
    for (int l = 1; l <= k; ++l) {
        z = eval_additive(f, z);
        if (l < k) {
            double shift = static_cast<double>(l) * lambda / k;
            for (int i = 0; i < n; ++i) y[i] = std::min(y[i], z[i] - shift);
        }
    }
    for (int i = 0; i < n; ++i) {
        if (z[i] > lambda + x[i] + 1e-12)
            throw std::invalid_argument(
                "byk_reduce precondition f^k(x) <= lambda + x fails at coordinate " +
                std::to_string(i + 1) + " (excess " + std::to_string(z[i] - lambda - x[i]) + ")");
    }
    return y;
}

Membership membership(const TopicalFn& f, const Vec& x, std::optional<double> lambda,
                      std::optional<double> mu, double tol) {
    if (!lambda && !mu)
        throw std::invalid_argument("membership needs at least one of lambda, mu");
    Membership m;
    m.slack = eval_additive(f, x);
    for (size_t i = 0; i < m.slack.size(); ++i) m.slack[i] -= x[i];
    if (lambda) {
        bool ok = true;
        for (double s : m.slack)
            if (s > *lambda + tol) ok = false;
        m.in_super = ok;
    }
    if (mu) {
        bool ok = true;
        for (double s : m.slack)
            if (s < *mu - tol) ok = false;
        m.in_sub = ok;
    }
    if (lambda && mu) m.in_slice = *m.in_super && *m.in_sub;
    return m;
}

namespace {

// h^lambda_{w,u}(t) = sup{ s : f_u(s e_{w}) <= lambda + t }, evaluated by
// geometric bracket growth plus bisection; returns the conservative upper
// end of the final bracket. -inf when the sublevel set is empty.
double h_sup(const TopicalFn& f, int u, int w, double lambda, double t) {
    if (t == -kInf) return -kInf;
    const double c = lambda + t;
    Vec pt(f.dim, 0.0);
    auto g = [&](double s) {
        pt[w] = s;
        return eval_additive_coord(f, u + 1, pt);
    };
    double hi = std::max(1.0, std::abs(t) + 1.0);
    int guard = 0;
    while (g(hi) <= c) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("diameter bound: upper bracket failure");
    }
    double lo = -std::max(1.0, std::abs(t) + 1.0);
    while (g(lo) > c) {
        lo *= 2.0;
        if (std::abs(lo) > 1e30) return -kInf;  // f_u(s e_w) stays above c as s -> -inf
    }
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) <= c)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

DiameterBound super_diameter_bound(const TopicalFn& f, double lambda) {
    const int n = f.dim;
    Digraph g = associated_graph(f);
    if (!strongly_connected(g)) return DiameterBound{false, 0.0};

    // For each base vertex i (the coordinate where a bot-normalized point
    // vanishes) chain the h bounds along BFS shortest paths.
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> val(n, -kInf);
        std::vector<bool> seen(n, false);
        std::deque<int> queue;
        val[i] = 0.0;
        seen[i] = true;
        queue.push_back(i);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int w : g.adj[u]) {
                if (seen[w]) continue;
                seen[w] = true;
                val[w] = h_sup(f, u, w, lambda, val[u]);
                queue.push_back(w);
            }
        }
        for (int j = 0; j < n; ++j)
            if (j != i && std::isfinite(val[j])) bound = std::max(bound, val[j]);
    }
    return DiameterBound{true, bound};
}

RealizationCheck coordinate_realization_check(const TopicalFn& f, const Vec& x, int k_max,
                                              double tol) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    RealizationCheck rc;
    // A converged eigenvalue pins the cycle time to the solver residual;
    // otherwise fall back to the orbit estimate. Either way bias the
    // estimate down by tol/(2 k_max): the theorem's inequality holds for
    // the true cycle time, so only an overestimate can spoil the
    // certificate, and the bias is well inside the certified tolerance.
    EigenReport eig = eigen_solve(f, 1e-10, 20000);
    rc.chi = eig.status == SolveStatus::converged ? eig.eigenvalue_additive
                                                  : cycle_times(f, 20000).upper_tail;
    rc.chi -= 0.5 * tol / k_max;
    std::vector<bool> alive(f.dim, true);
    Vec y = x;
    for (int k = 1; k <= k_max; ++k) {
        y = eval_additive(f, y);
        for (int i = 0; i < f.dim; ++i)
            if (alive[i] && y[i] < x[i] + k * rc.chi - tol) alive[i] = false;
    }
    for (int i = 0; i < f.dim; ++i)
        if (alive[i]) {
            rc.coord = i + 1;
            break;
        }
    return rc;
}

}  // namespace topical
