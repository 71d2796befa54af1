#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "topical/metrics.hpp"

using namespace topical;
using testsupport::random_point;

TEST_CASE("seminorms: pinned values") {
    SeminormReport a = seminorms({3.0, 1.0, 0.0});
    CHECK(a.top == 3.0);
    CHECK(a.bot == 0.0);
    CHECK(a.sup_norm == 3.0);
    CHECK(a.hilbert == 3.0);

    SeminormReport b = seminorms({2.5, 2.5, 2.5, 2.5});
    CHECK(b.hilbert == 0.0);

    SeminormReport c = seminorms({1.0, -2.0});
    CHECK(c.top == 1.0);
    CHECK(c.bot == -2.0);
    CHECK(c.sup_norm == 2.0);
    CHECK(c.hilbert == 3.0);

    CHECK_THROWS_AS(seminorms({}), std::invalid_argument);
}

TEST_CASE("seminorm report internal identities") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        Vec x = random_point(rng, 1 + static_cast<int>(rng() % 8));
        SeminormReport r = seminorms(x);
        CHECK(r.top >= r.bot);
        CHECK(r.sup_norm == std::max(r.top, -r.bot));
        CHECK(r.hilbert == r.top - r.bot);
        CHECK(r.hilbert <= 2.0 * r.sup_norm);
    }
}

TEST_CASE("hilbert seminorm shift invariance") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        Vec x = random_point(rng, 1 + static_cast<int>(rng() % 8));
        double h = random_point(rng, 1, -100.0, 100.0)[0];
        Vec shifted = x;
        for (auto& v : shifted) v += h;
        double scale = std::abs(h) + sup_norm(x) + 1.0;
        CHECK(std::abs(hilbert_seminorm(shifted) - hilbert_seminorm(x)) <= 1e-13 * scale);
    }
    // exactly invariant when the shift introduces no rounding
    Vec x = {1.0, -2.0, 0.5};
    Vec y = {1.0 + 4.0, -2.0 + 4.0, 0.5 + 4.0};
    CHECK(hilbert_seminorm(y) == hilbert_seminorm(x));
}

TEST_CASE("hilbert_metric: pinned values") {
    CHECK(hilbert_metric({2.0, 1.0}, {1.0, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    Vec z = {0.3, 1.7, 2.2};
    Vec y = z;
    for (auto& v : y) v *= 7.0;
    CHECK(hilbert_metric(y, z) <= 1e-14);
    CHECK(hilbert_metric({1.0, 4.0}, {4.0, 1.0}) ==
          doctest::Approx(std::log(16.0)).epsilon(1e-14));

    CHECK_THROWS_AS(hilbert_metric({1.0, -1.0}, {1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(hilbert_metric({1.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("hilbert_metric: metric axioms on rays") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.05, 50.0);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + static_cast<int>(rng() % 5);
        Vec a(n), b(n), c(n);
        for (int i = 0; i < n; ++i) {
            a[i] = pos(rng);
            b[i] = pos(rng);
            c[i] = pos(rng);
        }
        double ab = hilbert_metric(a, b);
        double ba = hilbert_metric(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(hilbert_metric(a, c) <= ab + hilbert_metric(b, c) + 1e-12);

        // projective invariance
        double lam = pos(rng), mu = pos(rng);
        Vec la = a, mb = b;
        for (auto& v : la) v *= lam;
        for (auto& v : mb) v *= mu;
        CHECK(std::abs(hilbert_metric(la, mb) - ab) <= 1e-12 * (1.0 + ab));
    }
}

TEST_CASE("zero distance iff proportional") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> pos(0.05, 50.0);
    for (int t = 0; t < 100; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        Vec a(n);
        for (auto& v : a) v = pos(rng);
        Vec b = a;
        for (auto& v : b) v *= 3.25;
        CHECK(hilbert_metric(a, b) <= 1e-10);
        b[0] *= 1.5;  // break proportionality
        CHECK(hilbert_metric(a, b) > 1e-10);
    }
}
