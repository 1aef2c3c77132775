#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omt/tract_vector.hpp>

using namespace omt;

static TractVector vec(const Tract& f, int n, const char* text) {
    return TractVector::parse(f, n, text);
}

TEST_CASE("star and conjugation operators") {
    Tract f4 = Tract::finite_field(4);
    TractVector x = vec(f4, 2, "(2,1 | 0,3)");
    CHECK(x.at(0) == f4.parse("2"));
    CHECK(x.at(3) == f4.parse("3"));
    CHECK(x.star().at(0) == f4.parse("0"));
    CHECK(x.star().at(2) == f4.parse("2"));
    CHECK(x.star().star() == x);
    TractVector c = x.conjed();
    CHECK(c.at(0) == f4.parse("2"));  // unstarred coordinates unchanged
    CHECK(c.at(3) == f4.parse("2"));  // conj(3) = 2 in F4
    CHECK(c.conjed() == x);
    CHECK(x.support() == (elem_mask(0) | elem_mask(1) | elem_mask(3)));
}

TEST_CASE("inner product values over F3") {
    Tract f3 = Tract::finite_field(3);
    TractVector x = vec(f3, 2, "(1,2 | 0,1)");
    TractVector y = vec(f3, 2, "(0,1 | 2,2)");
    FormalSum xy = inner_product(x, y);
    CHECK(xy.sorted() == FormalSum({f3.parse("2"), f3.parse("2")}).sorted());
    CHECK_FALSE(f3.is_null(xy));

    CHECK(y.star() == vec(f3, 2, "(2,2 | 0,1)"));
    FormalSum xs = inner_product_star(x, y);
    CHECK(xs.sorted() ==
          FormalSum({f3.one(), f3.one(), f3.parse("2")}).sorted());
    CHECK(inner_product(x, y.star()).sorted() == xs.sorted());

    // <Y,X> = conj <X,Y>
    CHECK(inner_product(y, x).sorted() == conj_sum(f3, xy).sorted());
}

TEST_CASE("inner product respects a nontrivial involution") {
    Tract f4 = Tract::finite_field(4);
    TractVector x = vec(f4, 1, "(2 | 1)");
    TractVector y = vec(f4, 1, "(1 | 2)");
    FormalSum xy = inner_product(x, y);
    CHECK(xy.sorted() == FormalSum({f4.parse("2"), f4.parse("2")}).sorted());
    CHECK(f4.is_null(xy));
    CHECK(f4.is_null(inner_product(x, x)));
    CHECK(inner_product(y, x).sorted() ==
          FormalSum({f4.parse("3"), f4.parse("3")}).sorted());
    CHECK(inner_product(y, x).sorted() == conj_sum(f4, xy).sorted());
    CHECK(inner_product_star(x, y).sorted() == inner_product(x, y.star()).sorted());
}

TEST_CASE("the two inner product forms agree on a sweep") {
    for (const char* desc : {"F5", "F4", "R6"}) {
        Tract f = parse_tract(desc);
        int u = f.unit_count();
        for (int i = 0; i < u; ++i)
            for (int j = 0; j < u; ++j) {
                TractVector x(f, 2), y(f, 2);
                x.set(0, f.unit_at(i));
                x.set(3, f.unit_at(j));
                y.set(1, f.unit_at(j));
                y.set(2, f.unit_at(i));
                CHECK(inner_product(x, y.star()).sorted() ==
                      inner_product_star(x, y).sorted());
                CHECK(inner_product(y, x).sorted() ==
                      conj_sum(f, inner_product(x, y)).sorted());
            }
    }
}

TEST_CASE("field vector addition") {
    Tract f3 = Tract::finite_field(3);
    TractVector x = vec(f3, 2, "(1,2 | 0,1)");
    TractVector y = vec(f3, 2, "(2,2 | 1,2)");
    CHECK(add_field(x, y) == vec(f3, 2, "(0,1 | 1,0)"));
    CHECK_THROWS_AS(add_field(vec(Tract::sign(), 1, "(1 | 1)"),
                              vec(Tract::sign(), 1, "(1 | 1)")),
                    error);
}

TEST_CASE("normalization scales the least support coordinate to one") {
    Tract f5 = Tract::finite_field(5);
    TractVector x = vec(f5, 3, "(0,2,3 | 1,0,0)");
    CHECK(x.normalized() == vec(f5, 3, "(0,1,4 | 3,0,0)"));
    TractVector z(f5, 3);
    CHECK(z.normalized() == z);
    CHECK(vec(f5, 3, "(0,1,4 | 3,0,0)").normalized() == x.normalized());
}

TEST_CASE("span membership over a field with forced and free coefficients") {
    Tract f5 = Tract::finite_field(5);
    std::vector<TractVector> gens{vec(f5, 2, "(1,1 | 0,0)"), vec(f5, 2, "(0,1 | 1,0)")};
    SpanResult r = span_contains(f5, 2, vec(f5, 2, "(2,0 | 3,0)"), gens);
    REQUIRE(r.ok);
    CHECK(r.coeffs[0] == f5.parse("2"));
    CHECK(r.coeffs[1] == f5.parse("3"));
    CHECK_FALSE(span_contains(f5, 2, vec(f5, 2, "(2,1 | 3,0)"), gens).ok);

    // a generator reproduced exactly uses coefficient zero on the other one
    SpanResult single = span_contains(f5, 2, gens[0], gens);
    REQUIRE(single.ok);
    CHECK(single.coeffs[0] == f5.one());
    CHECK(is_zero(single.coeffs[1]));

    // zero target lies in every span
    CHECK(span_contains(f5, 2, TractVector(f5, 2), gens).ok);
}

TEST_CASE("span membership detects contradictory forced values") {
    Tract f5 = Tract::finite_field(5);
    std::vector<TractVector> gens{vec(f5, 2, "(1,2 | 0,0)")};
    CHECK(span_contains(f5, 2, vec(f5, 2, "(2,4 | 0,0)"), gens).ok);
    CHECK_FALSE(span_contains(f5, 2, vec(f5, 2, "(1,1 | 0,0)"), gens).ok);
}

TEST_CASE("span membership over the sign tract uses hyperfield nullity") {
    Tract s = Tract::sign();
    std::vector<TractVector> gens{vec(s, 2, "(1,1 | 0,0)"), vec(s, 2, "(0,1 | 1,0)")};
    CHECK(span_contains(s, 2, vec(s, 2, "(1,1 | 1,0)"), gens).ok);
    // forced c1 = 1, c2 = -1; the middle residual 1 + (-1) - (-1) is null
    CHECK(span_contains(s, 2, vec(s, 2, "(1,-1 | -1,0)"), gens).ok);
    // forced c1 = c2 = 1 leave residual 1 + 1 - (-1), all positive
    CHECK_FALSE(span_contains(s, 2, vec(s, 2, "(1,-1 | 1,0)"), gens).ok);
    CHECK_FALSE(span_contains(s, 2, vec(s, 2, "(1,0 | 1,0)"), gens).ok);
}

TEST_CASE("span membership over the tropical tract works when forced") {
    Tract t = Tract::tropical();
    std::vector<TractVector> gens{vec(t, 2, "(0,1 | inf,inf)")};
    CHECK(span_contains(t, 2, vec(t, 2, "(2,3 | inf,inf)"), gens).ok);
    CHECK_FALSE(span_contains(t, 2, vec(t, 2, "(2,5 | inf,inf)"), gens).ok);

    std::vector<TractVector> free_gens{vec(t, 2, "(0,0 | inf,inf)"),
                                       vec(t, 2, "(0,1 | inf,inf)")};
    CHECK_THROWS_AS(span_contains(t, 2, vec(t, 2, "(0,1 | inf,inf)"), free_gens), error);
}

TEST_CASE("format and parse round trips") {
    Tract p = Tract::product(Tract::finite_field(2), Tract::finite_field(3));
    TractVector x = vec(p, 2, "(1|2,0 | 1|1,0)");
    CHECK(TractVector::parse(p, 2, x.format()) == x);
    CHECK(x.format() == "(1|2,0 | 1|1,0)");

    Tract t = Tract::tropical();
    TractVector y = vec(t, 2, "(1/2,inf | -3,0)");
    CHECK(TractVector::parse(t, 2, y.format()) == y);

    CHECK_THROWS_AS(vec(t, 2, "(1,2,3 | 0,0)"), error);
    CHECK_THROWS_AS(vec(t, 2, "1,2 | 0,0"), error);
}
