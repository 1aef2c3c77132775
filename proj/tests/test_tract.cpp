#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omt/tract.hpp>

using namespace omt;

namespace {
FormalSum sum_of(const Tract& t, std::initializer_list<const char*> toks) {
    FormalSum s;
    for (const char* tok : toks) s.add(t.parse(tok));
    return s;
}
}  // namespace

TEST_CASE("Krasner tract: null iff length differs from one") {
    Tract k = Tract::krasner();
    CHECK(k.is_null(FormalSum{}));
    CHECK(!k.is_null(sum_of(k, {"1"})));
    CHECK(k.is_null(sum_of(k, {"1", "1"})));
    CHECK(k.is_null(sum_of(k, {"1", "1", "1"})));
    CHECK(k.eps() == k.one());
    CHECK(k.null_bound() == -1);
}

TEST_CASE("sign tract: null iff empty or mixed signs") {
    Tract s = Tract::sign();
    CHECK(s.is_null(FormalSum{}));
    CHECK(!s.is_null(sum_of(s, {"1", "1"})));
    CHECK(!s.is_null(sum_of(s, {"-1"})));
    CHECK(s.is_null(sum_of(s, {"1", "-1"})));
    CHECK(s.is_null(sum_of(s, {"1", "1", "-1"})));
    CHECK(s.eps() == s.parse("-1"));
    CHECK(s.mul(s.parse("-1"), s.parse("-1")) == s.one());
}

TEST_CASE("initial tract: null set is exactly {empty, 1 + (-1)}") {
    Tract i = Tract::initial();
    CHECK(i.is_null(FormalSum{}));
    CHECK(i.is_null(sum_of(i, {"1", "-1"})));
    CHECK(!i.is_null(sum_of(i, {"1", "1", "-1"})));
    CHECK(!i.is_null(sum_of(i, {"1", "1", "-1", "-1"})));
    CHECK(i.eps() == i.parse("-1"));
}

TEST_CASE("regular partial field: null iff the integer sum vanishes") {
    Tract u = Tract::regular();
    CHECK(u.is_null(sum_of(u, {"1", "1", "-1", "-1"})));
    CHECK(!u.is_null(sum_of(u, {"1", "1", "-1"})));
    CHECK(u.is_null(FormalSum{}));
    CHECK(!u.is_field());
}

TEST_CASE("tropical tract: exact rationals, null iff minimum is doubled") {
    Tract t = Tract::tropical();
    CHECK(t.parse("3/2") == t.parse("1.5"));
    CHECK(t.parse("0.5") == t.parse("1/2"));
    CHECK(t.parse("-2").a == -2);
    CHECK(is_zero(t.parse("inf")));
    CHECK(t.format(t.zero()) == "inf");
    CHECK(t.parse("0") == t.one());
    CHECK(t.mul(t.parse("3/2"), t.parse("1/2")) == t.parse("2"));
    CHECK(t.inv(t.parse("3")) == t.parse("-3"));
    CHECK(t.eps() == t.one());
    CHECK(t.is_null(sum_of(t, {"1", "1", "2"})));
    CHECK(!t.is_null(sum_of(t, {"1", "2", "2"})));
    CHECK(t.is_null(FormalSum{}));
    CHECK(!t.finite());
    CHECK_THROWS_AS(t.unit_count(), error);
}

TEST_CASE("prime fields") {
    Tract f5 = Tract::finite_field(5);
    CHECK(f5.eps() == f5.parse("4"));
    CHECK(f5.mul(f5.parse("2"), f5.parse("3")) == f5.parse("1"));
    CHECK(f5.inv(f5.parse("2")) == f5.parse("3"));
    CHECK(f5.is_null(sum_of(f5, {"2", "3"})));
    CHECK(!f5.is_null(sum_of(f5, {"2", "2"})));
    CHECK(f5.field_eval(sum_of(f5, {"4", "4", "4", "4"})) == f5.parse("1"));
    CHECK(f5.is_field());
    CHECK(f5.conj(f5.parse("3")) == f5.parse("3"));
    Tract f2 = Tract::finite_field(2);
    CHECK(f2.eps() == f2.one());
    CHECK(f2.is_null(sum_of(f2, {"1", "1"})));
    Tract f13 = Tract::finite_field(13);
    CHECK(f13.is_null(sum_of(f13, {"6", "7"})));
}

TEST_CASE("GF(4): x^2 + x + 1, Frobenius involution by default") {
    Tract f4 = Tract::finite_field(4);
    Elt a = f4.parse("2");
    CHECK(f4.mul(a, a) == f4.parse("3"));               // a^2 = a + 1
    CHECK(f4.is_null(FormalSum{f4.mul(a, a), a, f4.one()}));  // a^2 + a + 1 = 0
    CHECK(f4.conj(a) == f4.parse("3"));
    CHECK(f4.conj(f4.conj(a)) == a);
    CHECK(f4.eps() == f4.one());  // char 2
    CHECK(f4.name() == "F4");
    Tract f4id = Tract::finite_field(4, false, true);
    CHECK(f4id.name() == "F4:id");
    CHECK(f4id.conj(a) == a);
}

TEST_CASE("GF(8): x^3 + x + 1, no Frobenius involution available") {
    Tract f8 = Tract::finite_field(8);
    Elt x = f8.parse("2");
    CHECK(f8.mul(x, x) == f8.parse("4"));
    CHECK(f8.mul(f8.parse("4"), x) == f8.parse("3"));  // x^3 = x + 1
    for (int i = 0; i < f8.unit_count(); ++i) {
        Elt u = f8.unit_at(i);
        CHECK(f8.mul(u, f8.inv(u)) == f8.one());
    }
    CHECK_THROWS_AS(Tract::finite_field(8, true, true), error);
}

TEST_CASE("GF(9): x^2 + 1, optional Frobenius") {
    Tract f9 = Tract::finite_field(9);
    Elt x = f9.parse("3");
    CHECK(f9.mul(x, x) == f9.parse("2"));  // x^2 = -1
    CHECK(f9.conj(x) == x);                // identity by default
    Tract f9f = parse_tract("F9:frob");
    CHECK(f9f.conj(x) == f9f.parse("6"));  // x^3 = -x
    CHECK(f9f.conj(f9f.conj(x)) == x);
    CHECK(f9.eps() == f9.parse("2"));
}

TEST_CASE("sixth roots of unity") {
    Tract r = Tract::sixth_root();
    CHECK(r.eps() == r.parse("z^3"));  // z^3 = -1
    CHECK(r.mul(r.parse("z^4"), r.parse("z^5")) == r.parse("z^3"));
    CHECK(r.inv(r.parse("z^2")) == r.parse("z^4"));
    CHECK(r.conj(r.parse("z^1")) == r.parse("z^5"));
    CHECK(r.is_null(sum_of(r, {"z^0", "z^3"})));       // 1 + (-1)
    CHECK(r.is_null(sum_of(r, {"z^0", "z^2", "z^4"})));  // cube roots sum to 0
    CHECK(!r.is_null(sum_of(r, {"z^0", "z^2"})));
    CHECK(r.is_null(sum_of(r, {"z^1", "z^4"})));
    CHECK(!r.is_null(sum_of(r, {"z^0"})));
}

TEST_CASE("product tract: null componentwise") {
    Tract p = Tract::product(Tract::finite_field(2), Tract::finite_field(3));
    CHECK(p.unit_count() == 2);
    Elt u = p.parse("1|1"), v = p.parse("1|2");
    CHECK(p.is_null(FormalSum{u, v}));  // F2: 1+1 = 0, F3: 1+2 = 0
    CHECK(!p.is_null(FormalSum{u, u}));
    CHECK(!p.is_null(FormalSum{u}));
    CHECK(p.is_null(FormalSum{}));
    CHECK(p.eps() == v);
    CHECK(p.mul(v, v) == u);
    CHECK(p.format(v) == "1|2");
    CHECK(p.name() == "product(F2,F3)");
}

TEST_CASE("custom tract with an explicit bounded null list") {
    std::vector<std::string> units{"1"};
    std::vector<std::vector<int>> mul{{0}};
    Tract f = Tract::custom("w", units, mul, {{0, 0}, {0, 0, 0}}, 32);
    CHECK(f.is_null(FormalSum{}));
    CHECK(!f.is_null(FormalSum{f.one()}));
    CHECK(f.is_null(FormalSum{f.one(), f.one()}));
    CHECK(f.is_null(FormalSum{f.one(), f.one(), f.one()}));
    CHECK(!f.is_null(FormalSum{f.one(), f.one(), f.one(), f.one()}));
    CHECK(f.eps() == f.one());
    CHECK(f.null_bound() == 32);

    // queries beyond the declared bound are rejected
    Tract g = Tract::custom("tight", units, mul, {{0, 0}}, 2);
    FormalSum s3{g.one(), g.one(), g.one()};
    CHECK_THROWS_AS(g.is_null(s3), error);

    // axiom violations are rejected outright
    CHECK_THROWS_AS(Tract::custom("noeps", units, mul, {}, 8), error);
    CHECK_THROWS_AS(Tract::custom("unitnull", units, mul, {{0}, {0, 0}}, 8), error);
    std::vector<std::string> pm{"1", "-1"};
    std::vector<std::vector<int>> pmmul{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(Tract::custom("unscaled", pm, pmmul, {{0, 1}, {0, 0, 1}}, 8), error);
    CHECK(Tract::custom("ok", pm, pmmul, {{0, 1}, {0, 0, 1}, {0, 1, 1}}, 8).eps() ==
          Elt{1, 1});
}

TEST_CASE("descriptor parsing round trips") {
    for (const char* d : {"K", "S", "T", "I", "U0", "R6", "F2", "F3", "F4", "F5", "F7", "F8",
                          "F9", "F9:frob", "F4:id", "F13", "F25", "product(F3,F4)",
                          "product(F2,product(F3,F4))"}) {
        Tract t = parse_tract(d);
        CHECK(t.name() == d);
        CHECK(parse_tract(t.name()).same(t));
    }
    CHECK_THROWS_AS(parse_tract("F6"), error);
    CHECK_THROWS_AS(parse_tract("Q"), error);
    CHECK_THROWS_AS(parse_tract("custom:x"), error);  // no loader supplied
}

TEST_CASE("domain errors on foreign elements") {
    Tract f5 = Tract::finite_field(5);
    Tract f7 = Tract::finite_field(7);
    Elt six = f7.parse("6");
    CHECK_THROWS_AS(f5.mul(six, six), error);
    FormalSum s{six};
    CHECK_THROWS_AS(f5.is_null(s), error);
}

TEST_CASE("element text round trips per tract") {
    for (const char* d : {"K", "S", "I", "U0", "R6", "F5", "F9", "product(F2,F3)", "T"}) {
        Tract t = parse_tract(d);
        if (t.finite()) {
            for (int i = 0; i < t.unit_count(); ++i) {
                Elt u = t.unit_at(i);
                CHECK(t.parse(t.format(u)) == u);
            }
        }
        CHECK(is_zero(t.parse(t.format(t.zero()))));
    }
    Tract tro = Tract::tropical();
    for (const char* lit : {"3/2", "-7", "22/7"}) CHECK(tro.format(tro.parse(lit)) == lit);
}
