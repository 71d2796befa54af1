#include "topical/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace topical {

double top(const Vec& x) {
    if (x.empty()) throw std::invalid_argument("top of empty vector");
    return *std::max_element(x.begin(), x.end());
}

double bot(const Vec& x) {
    if (x.empty()) throw std::invalid_argument("bot of empty vector");
    return *std::min_element(x.begin(), x.end());
}

SeminormReport seminorms(const Vec& x) {
    if (x.empty()) throw std::invalid_argument("seminorms of empty vector");
    double t = x[0], b = x[0];
    for (double v : x) {
        t = std::max(t, v);
        b = std::min(b, v);
    }
    return SeminormReport{t, b, std::max(t, -b), t - b};
}

double sup_norm(const Vec& x) { return seminorms(x).sup_norm; }

double hilbert_seminorm(const Vec& x) { return seminorms(x).hilbert; }

double hilbert_metric(const Vec& y, const Vec& z) {
    if (y.size() != z.size()) throw std::invalid_argument("dimension mismatch");
    if (y.empty()) throw std::invalid_argument("hilbert_metric of empty vectors");
    double t = -std::numeric_limits<double>::infinity();
    double b = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0) || !(z[i] > 0.0))
            throw std::domain_error("hilbert_metric needs strictly positive points");
        double d = std::log(y[i]) - std::log(z[i]);
        t = std::max(t, d);
        b = std::min(b, d);
    }
    return t - b;
}

}  // namespace topical
