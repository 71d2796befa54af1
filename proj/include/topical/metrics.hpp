#pragma once

// Top/bottom functionals, supremum norm, Hilbert semi-norm and the Hilbert
// projective metric. Everything operates on additive coordinates except
// hilbert_metric, which takes points of the positive cone.

#include "topical/expr.hpp"

namespace topical {

struct SeminormReport {
    double top;       // max coordinate
    double bot;       // min coordinate
    double sup_norm;  // max(top, -bot)
    double hilbert;   // top - bot (shift invariant)
};

SeminormReport seminorms(const Vec& x);  // throws std::invalid_argument on empty input

double top(const Vec& x);
double bot(const Vec& x);
double sup_norm(const Vec& x);
double hilbert_seminorm(const Vec& x);

// d_H(y, z) = hilbert(log y - log z); y, z strictly positive.
double hilbert_metric(const Vec& y, const Vec& z);

}  // namespace topical
