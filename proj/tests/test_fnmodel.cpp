#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "topical/expr.hpp"
#include "topical/metrics.hpp"

using namespace topical;
using testsupport::load;
using testsupport::random_fn;
using testsupport::random_point;

namespace {

TopicalFn two_coord(const std::string& expr1, const std::string& expr2) {
    return parse("dim 2\n1: " + expr1 + "\n2: " + expr2 + "\n");
}

}  // namespace

TEST_CASE("parse: paper examples and identity") {
    TopicalFn f = parse("dim 2\n1: max(x1, 0.5*x2)\n2: max(0.5*x1, x2)");
    CHECK(f.dim == 2);
    REQUIRE(f.coords[0].kind == NodeKind::Max);
    REQUIRE(f.coords[0].children.size() == 2);
    CHECK(f.coords[0].children[0].kind == NodeKind::Var);
    CHECK(f.coords[0].children[1].kind == NodeKind::Scale);
    CHECK(f.coords[0].children[1].coeff == 0.5);

    TopicalFn id = parse("dim 1\n1: x1");
    CHECK(id.dim == 1);
    CHECK(id.coords[0].kind == NodeKind::Var);

    TopicalFn ex2 = load("eq-example2.tfn");
    CHECK(ex2.dim == 4);
    CHECK(ex2.coords[2].kind == NodeKind::Scale);
    CHECK(ex2.coords[2].coeff == 8.0);
    CHECK(ex2.coords[2].children[0].kind == NodeKind::Geo);
}

TEST_CASE("parse: whitespace, comments, fractions") {
    TopicalFn f = parse("# leading comment\ndim 2\n\n2:min( x1 ,x2 )  # tail\n1: 3/2*x2\n");
    CHECK(f.coords[0].coeff == 1.5);
    CHECK(f.coords[1].kind == NodeKind::Min);
}

TEST_CASE("parse: errors carry positions") {
    CHECK_THROWS_AS(parse("dim 2\n1: max(x1\n2: x2"), ParseError);
    CHECK_THROWS_AS(parse("dim 1\n1: x1 x1"), ParseError);
    CHECK_THROWS_AS(parse("1: x1"), ParseError);                       // missing header
    CHECK_THROWS_AS(parse("dim 2\n1: x1"), ParseError);                // missing coordinate
    CHECK_THROWS_AS(parse("dim 2\n1: x1\n1: x2\n2: x1"), ParseError);  // duplicate
    CHECK_THROWS_AS(parse("dim 1\n1: 0*x1"), ParseError);              // nonpositive coefficient
    CHECK_THROWS_AS(parse("dim 1\n1: x2"), std::invalid_argument);     // var out of range
    CHECK_THROWS_AS(parse("dim 2\n1: geo(x1:0.5, x2:0.4)\n2: x2"),
                    std::invalid_argument);  // geo weights must sum to 1

    try {
        parse("dim 2\n1: max(x1,\n2: x2");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.col() > 0);
    }
}

TEST_CASE("pretty print round-trips structurally") {
    for (const char* file : {"eq-example2.tfn", "eq-xunq.tfn", "eq-example.tfn", "e-gex.tfn",
                             "e-ill.tfn", "e-ill2.tfn", "identity2.tfn", "linear-jordan.tfn"}) {
        TopicalFn f = load(file);
        TopicalFn g = parse(pretty_print(f));
        CHECK(equal_structure(f, g));
    }
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        TopicalFn f = random_fn(rng);
        TopicalFn g = parse(pretty_print(f));
        CHECK(equal_structure(f, g));
    }
}

TEST_CASE("eval_additive: pinned values") {
    TopicalFn id2 = load("identity2.tfn");
    Vec r = eval_additive(id2, {3.0, -1.0});
    CHECK(r[0] == 3.0);
    CHECK(r[1] == -1.0);

    // f(u) = 2u at u = (1,2,8,4), so additively f(log u) = log u + log 2
    TopicalFn ex2 = load("eq-example2.tfn");
    Vec x = {0.0, std::log(2.0), std::log(8.0), std::log(4.0)};
    Vec y = eval_additive(ex2, x);
    for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(x[i] + std::log(2.0)).epsilon(1e-14));

    // lin(1*x1, 1*x2) at 0 is log(1 + 1)
    TopicalFn sum = two_coord("lin(1*x1, 1*x2)", "x2");
    CHECK(eval_additive(sum, {0.0, 0.0})[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("eval_additive: no overflow for |x| <= 700 and non-finite input rejected") {
    TopicalFn f = parse(
        "dim 3\n1: lin(1*x1, 2*x2, 3*x3)\n2: har(1*x1, 1*x3)\n3: geo(x1:1/2, x2:1/2)");
    for (double s : {700.0, -700.0}) {
        Vec y = eval_additive(f, {s, s, s});
        for (double v : y) CHECK(std::isfinite(v));
    }
    Vec y = eval_additive(f, {700.0, -700.0, 350.0});
    for (double v : y) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(eval_additive(f, {std::nan(""), 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eval_additive(f, {0.0, 0.0}), std::invalid_argument);  // dim mismatch
}

TEST_CASE("eval_multiplicative: pinned values") {
    TopicalFn ex2 = load("eq-example2.tfn");
    Vec y = eval_multiplicative(ex2, {1.0, 2.0, 8.0, 4.0});
    CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(y[1] == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(y[2] == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(y[3] == doctest::Approx(8.0).epsilon(1e-13));

    TopicalFn id1 = load("identity1.tfn");
    CHECK(eval_multiplicative(id1, {5.0})[0] == doctest::Approx(5.0).epsilon(1e-15));

    // all geometric means of ones are 1
    TopicalFn gex = load("e-gex.tfn");
    Vec ones = eval_multiplicative(gex, {1.0, 1.0, 1.0});
    for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(eval_multiplicative(id1, {-1.0}), std::domain_error);
    CHECK_THROWS_AS(eval_multiplicative(id1, {0.0}), std::domain_error);
}

TEST_CASE("dual: structural examples") {
    TopicalFn maxf = two_coord("max(x1, x2)", "max(x1, x2)");
    TopicalFn minf = two_coord("min(x1, x2)", "min(x1, x2)");
    CHECK(equal_structure(dual(maxf), minf));
    CHECK(equal_structure(dual(minf), maxf));

    TopicalFn lin = two_coord("lin(1*x1, 2*x2)", "x2");
    TopicalFn har = two_coord("har(1*x1, 2*x2)", "x2");
    CHECK(equal_structure(dual(lin), har));

    TopicalFn id2 = load("identity2.tfn");
    CHECK(equal_structure(dual(id2), id2));
}

TEST_CASE("dual: -f(-x) identity and involution") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 60; ++t) {
        TopicalFn f = random_fn(rng);
        TopicalFn fd = dual(f);
        for (int s = 0; s < 5; ++s) {
            Vec x = random_point(rng, f.dim);
            Vec neg = x;
            for (auto& v : neg) v = -v;
            Vec lhs = eval_additive(fd, x);
            Vec rhs = eval_additive(f, neg);
            for (int i = 0; i < f.dim; ++i)
                CHECK(lhs[i] == doctest::Approx(-rhs[i]).epsilon(1e-12));
        }
        // involution: exact on the node structure, coefficients within 1 ulp
        TopicalFn fdd = dual(fd);
        Vec x = random_point(rng, f.dim);
        Vec a = eval_additive(fdd, x);
        Vec b = eval_additive(f, x);
        for (int i = 0; i < f.dim; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
    }
    // involution is bit-exact on the corpus files
    for (const char* file : {"eq-example2.tfn", "eq-xunq.tfn", "e-ill2.tfn", "e-gex.tfn"}) {
        TopicalFn f = load(file);
        CHECK(equal_structure(dual(dual(f)), f));
    }
}

TEST_CASE("is_convex_syntactic") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        auto a = testsupport::random_irreducible(rng, 4);
        CHECK(is_convex_syntactic(testsupport::fn_from_matrix(a)));
    }
    CHECK(is_convex_syntactic(load("eq-xunq.tfn")));
    CHECK_FALSE(is_convex_syntactic(load("eq-example2.tfn")));
}

TEST_CASE("property: additive homogeneity f(x+h) = f(x)+h") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        TopicalFn f = random_fn(rng);
        Vec x = random_point(rng, f.dim);
        double h = random_point(rng, 1)[0];
        Vec shifted = x;
        for (auto& v : shifted) v += h;
        Vec lhs = eval_additive(f, shifted);
        Vec rhs = eval_additive(f, x);
        for (int i = 0; i < f.dim; ++i) CHECK(std::abs(lhs[i] - (rhs[i] + h)) <= 1e-9);
    }
}

TEST_CASE("property: monotonicity") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 100; ++t) {
        TopicalFn f = random_fn(rng);
        Vec x = random_point(rng, f.dim);
        Vec y = x;
        std::uniform_real_distribution<double> bump(0.0, 3.0);
        for (auto& v : y) v += bump(rng);
        Vec fx = eval_additive(f, x);
        Vec fy = eval_additive(f, y);
        for (int i = 0; i < f.dim; ++i) CHECK(fx[i] <= fy[i] + 1e-12);
    }
}

TEST_CASE("property: nonexpansive in sup norm and Hilbert semi-norm") {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 100; ++t) {
        TopicalFn f = random_fn(rng);
        Vec x = random_point(rng, f.dim);
        Vec y = random_point(rng, f.dim);
        Vec fx = eval_additive(f, x);
        Vec fy = eval_additive(f, y);
        Vec dxy(f.dim), dfxy(f.dim);
        for (int i = 0; i < f.dim; ++i) {
            dxy[i] = x[i] - y[i];
            dfxy[i] = fx[i] - fy[i];
        }
        CHECK(sup_norm(dfxy) <= sup_norm(dxy) + 1e-9);
        CHECK(hilbert_seminorm(dfxy) <= hilbert_seminorm(dxy) + 1e-9);
    }
}

TEST_CASE("property: multiplicative view is the conjugated additive view") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 60; ++t) {
        TopicalFn f = random_fn(rng);
        Vec y(f.dim);
        std::uniform_real_distribution<double> pos(0.05, 20.0);
        for (auto& v : y) v = pos(rng);
        Vec direct = eval_multiplicative(f, y);
        Vec conj = exp_vec(eval_additive(f, log_vec(y)));
        for (int i = 0; i < f.dim; ++i)
            CHECK(direct[i] == doctest::Approx(conj[i]).epsilon(1e-12));
    }
}

TEST_CASE("compose matches pointwise composition") {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 40; ++t) {
        TopicalFn f = random_fn(rng);
        TopicalFn g;
        do {
            g = random_fn(rng);
        } while (g.dim != f.dim);
        TopicalFn fg = compose(f, g);
        Vec x = random_point(rng, f.dim);
        Vec expect = eval_additive(f, eval_additive(g, x));
        Vec got = eval_additive(fg, x);
        for (int i = 0; i < f.dim; ++i)
            CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    TopicalFn sq = iterate_fn(load("eq-xunq.tfn"), 2);
    CHECK(sq.dim == 2);
}
