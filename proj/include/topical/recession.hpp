#pragma once

// Recession functions f^(x) = lim t^-1 f(tx), computed symbolically
// (constants vanish, Lin -> Max, Har -> Min), the heuristic triviality
// test for the recession eigenspace, and the slice-space boundedness
// certificate built on it. Nontrivial witnesses are proofs; triviality is
// evidence backed by the exhaustive indicator-vector iteration.

#include <cstdint>
#include <optional>

#include "topical/expr.hpp"

namespace topical {

struct RecessionResult {
    TopicalFn fhat;
    double numeric_agreement = 0.0;  // max probe deviation, see recession()
};

// Symbolic recession plus a numeric cross-check: the probe compares
// fhat(x) against the t -> inf extrapolation of t^-1 f(tx) anchored at
// t = 2^10 on 20 seeded sample points and records the worst deviation.
RecessionResult recession(const TopicalFn& f);

ExprNode recession_node(const ExprNode& e);

struct TrivialityReport {
    bool certified_nontrivial = false;
    Vec witness;                      // valid when certified: fixed point with spread > 1e-6
    double witness_residual = 0.0;    // ||fhat(w) - w||_inf, <= 1e-9 when certified
};

// Fixed-point iteration of fhat (eigenvalue 0 by multiplicative
// homogeneity) from `trials` random starts plus the indicator vectors e_J
// of every nonempty proper J when n <= 12 (singletons, complements and
// random subsets beyond that). Any fixed point with Hilbert spread > 1e-6
// certifies a nontrivial eigenvector; otherwise the eigenspace looks
// trivial (heuristic, one-sided).
TrivialityReport trivial_eigenspace_check(const TopicalFn& fhat, int trials,
                                          std::uint64_t seed);

struct SliceCertificate {
    bool bounded_certified = false;  // implies every slice space of f is bounded
    RecessionResult rec;
    std::optional<Vec> witness;      // nontrivial recession eigenvector, when found
};

// bounded_certified requires the triviality evidence plus the exhaustive
// check that iteration from all 2^n - 2 indicator vectors collapses to
// constant vectors.
SliceCertificate slice_bounded_certificate(const TopicalFn& f);

}  // namespace topical
