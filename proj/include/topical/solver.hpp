#pragma once

// Orbit iteration and the eigenproblem machinery: cycle-time estimation,
// Collatz-Wielandt bounds, eigenvector computation from bounded orbits,
// the k-th root super-eigenspace reduction, eigenspace membership and
// super-eigenspace diameter bounds.

#include <cstdint>
#include <optional>

#include "topical/expr.hpp"

namespace topical {

struct OrbitTrace {
    Vec start;
    std::vector<Vec> iterates;             // iterates[k] = f^k(start), k = 0..k_max
    std::vector<double> hilbert_diameters; // spread top-bot of each iterate
    std::vector<double> top_over_k;        // top(f^k(start))/k, k = 1..k_max
    std::vector<double> bot_over_k;
    bool finite = true;                    // false if an iterate went non-finite
    int first_nonfinite = -1;
};

OrbitTrace orbit(const TopicalFn& f, const Vec& x0, int k_max);

struct CycleTimes {
    double upper_at_kmax;  // top(f^k(0))/k at k = k_max (>= chi_upper, nonincreasing limit)
    double lower_at_kmax;
    double upper_tail;     // tail-slope estimate over the last quarter of iterates
    double lower_tail;
    int k_max;
};

CycleTimes cycle_times(const TopicalFn& f, int k_max);

// min over sampled x of top(f(x) - x): an upper bound on the upper cycle
// time that is attained when an eigenvector is among the samples. Samples
// are 0, the optional anchor, and `samples` uniform points in [-10, 10]^n.
double collatz_wielandt_upper(const TopicalFn& f, int samples, std::uint64_t seed,
                              const std::optional<Vec>& anchor = std::nullopt);

// Dual bound: max over the same sample set of bot(f(x) - x).
double collatz_wielandt_lower(const TopicalFn& f, int samples, std::uint64_t seed,
                              const std::optional<Vec>& anchor = std::nullopt);

enum class SolveStatus { converged, diverged_orbit, max_iter };

const char* solve_status_name(SolveStatus s);

struct EigenReport {
    SolveStatus status = SolveStatus::max_iter;
    double eigenvalue_additive = 0.0;  // ln of the multiplicative eigenvalue
    Vec eigenvector;                   // additive coordinates, normalized to bot = 0
    double residual_sup = 0.0;         // ||f(v) - v - lambda||_inf
    int iterations = 0;
    double cw_lower = 0.0;
    double cw_upper = 0.0;
};

// Estimate lambda from the cycle time of the orbit of 0, then run the
// bounded-orbit construction: iterate g = f - lambda, take the
// coordinatewise minimum over a tail window, and polish that point until
// f(v) - v is constant to within tol. Growth of the orbit's Hilbert
// spread (monotone over the last quarter, or past d_cap) yields
// diverged_orbit; that is a missing certificate, not a non-existence claim.
EigenReport eigen_solve(const TopicalFn& f, double tol = 1e-9, int k_max = 10000,
                        double d_cap = 1e6);

// Given f^k(x) <= lambda + x (checked to 1e-12), returns
// y = min_l (f^l(x) - l*lambda/k), l = 0..k-1, which satisfies
// f(y) <= lambda/k + y. Throws std::invalid_argument naming the offending
// coordinate when the precondition fails.
Vec byk_reduce(const TopicalFn& f, const Vec& x, int k, double lambda);

struct Membership {
    std::optional<bool> in_super;  // f(x) <= lambda + x
    std::optional<bool> in_sub;    // mu + x <= f(x)
    std::optional<bool> in_slice;  // both (set only when both bounds given)
    Vec slack;                     // f(x) - x
};

Membership membership(const TopicalFn& f, const Vec& x, std::optional<double> lambda,
                      std::optional<double> mu, double tol = 0.0);

struct DiameterBound {
    bool bounded = false;  // false: G(f) not strongly connected, no claim made
    double bound = 0.0;    // valid when bounded: hilbert(x) <= bound for all x in S^lambda
};

// Path-composed bound from the h-function chains of the associated graph;
// each h is evaluated by geometric bracketing plus 80 bisection steps and
// the conservative end of the bracket is kept, so the bound stays sound.
DiameterBound super_diameter_bound(const TopicalFn& f, double lambda);

struct RealizationCheck {
    std::optional<int> coord;  // 1-based index i with f_i^k(x) >= x_i + k*chi - tol for k <= k_max
    double chi = 0.0;          // the cycle-time estimate used
};

RealizationCheck coordinate_realization_check(const TopicalFn& f, const Vec& x, int k_max,
                                              double tol = 1e-6);

}  // namespace topical
