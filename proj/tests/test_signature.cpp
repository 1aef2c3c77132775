#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omt/signature.hpp>

using namespace omt;

// rank-2 values on 4 elements read off the F3 matrix [[1,0,1,1],[0,1,1,2]]
static GPFunction u24_gp(const Tract& f3) {
    std::map<mask_t, Elt> vals;
    auto set = [&](int a, int b, const char* v) {
        vals[elem_mask(a - 1) | elem_mask(b - 1)] = f3.parse(v);
    };
    set(1, 2, "1");
    set(1, 3, "1");
    set(1, 4, "2");
    set(2, 3, "2");
    set(2, 4, "2");
    set(3, 4, "1");
    return GPFunction(f3, 4, 2, vals);
}

// rank-2 values on 4 elements over the sixth-root tract, from the matrix
// [[1,0,1,1],[0,1,1,z]] with z a primitive sixth root of unity
static GPFunction u24_gp_r6(const Tract& r6) {
    std::map<mask_t, Elt> vals;
    auto set = [&](int a, int b, const char* v) {
        vals[elem_mask(a - 1) | elem_mask(b - 1)] = r6.parse(v);
    };
    set(1, 2, "z^0");
    set(1, 3, "z^0");
    set(1, 4, "z^1");
    set(2, 3, "z^3");
    set(2, 4, "z^3");
    set(3, 4, "z^2");
    return GPFunction(r6, 4, 2, vals);
}

// the one-unit tract whose null sums are the repeated-one sums of length 2..maxlen
static Tract ones_tract(int maxlen, int bound) {
    std::vector<std::vector<int>> nulls;
    for (int l = 2; l <= maxlen; ++l)
        nulls.push_back(std::vector<int>(static_cast<std::size_t>(l), 0));
    return Tract::custom("ones" + std::to_string(maxlen), {"1"}, {{0}}, nulls, bound);
}

// the eight-member family on 4 elements over a prime field, written with
// m = -1 and the two parameter values x and y = -x
static Signature eight_vector_family(const Tract& f, const char* m, const char* x,
                                     const char* y) {
    auto lit = [&](std::string s) { return TractVector::parse(f, 4, s); };
    std::vector<TractVector> vecs = {
        lit(std::string("(0,1,1,1 | 1,0,0,0)")),
        lit(std::string("(") + m + ",0,1," + m + " | 0,1,0,0)"),
        lit(std::string("(") + m + "," + m + ",0,1 | 0,0,1,0)"),
        lit(std::string("(") + m + ",1," + m + ",0 | 0,0,0,1)"),
        lit(std::string("(") + x + ",0,0,0 | 0,1,1,1)"),
        lit(std::string("(0,") + x + ",0,0 | " + m + ",0,1," + m + ")"),
        lit(std::string("(0,0,") + y + ",0 | 1,1,0," + m + ")"),
        lit(std::string("(0,0,0,") + y + " | 1," + m + ",1,0)"),
    };
    std::vector<mask_t> supports;
    for (const TractVector& v : vecs) supports.push_back(v.support());
    OrthoMatroid om = matroid_from_circuits(4, supports);
    return Signature(f, om, vecs);
}

TEST_CASE("matroid recovery from circuits") {
    for (const OrthoMatroid& m :
         {OrthoMatroid::lift(Matroid::uniform(2, 4)), OrthoMatroid::m3(), OrthoMatroid::m4(),
          OrthoMatroid::lift(Matroid::uniform(1, 3))}) {
        CHECK(matroid_from_circuits(m.n(), m.circuits()) == m);
    }

    // a family with a non-minimal member is not a circuit set
    CHECK_THROWS_AS(
        matroid_from_circuits(2, {elem_mask(0), elem_mask(0) | elem_mask(1)}), error);
    // every transversal hits {1} or {1*}
    CHECK_THROWS_AS(matroid_from_circuits(2, {elem_mask(0), elem_mask(2)}), error);

    OrthoMatroid two = matroid_from_circuits(2, {parse_set(2, "1 2"), parse_set(2, "1* 2*")});
    CHECK(two.bases() == std::vector<mask_t>{parse_set(2, "1* 2"), parse_set(2, "1 2*")});
}

TEST_CASE("circuit members of the rank-two instance") {
    Tract f3 = Tract::finite_field(3);
    WickFunction w = wick_from_gp(u24_gp(f3));
    Signature sig = circuits_from_wick(w);

    CHECK(sig.matroid() == OrthoMatroid::lift(Matroid::uniform(2, 4)));
    CHECK(sig.members().size() == 8);

    // kernel and row-space vectors of [[1,0,1,1],[0,1,1,2]]
    CHECK(sig.rep(parse_set(4, "1 2 3")) ==
          TractVector::parse(f3, 4, "(1,1,2,0 | 0,0,0,0)"));
    CHECK(sig.rep(parse_set(4, "1 2 4")) ==
          TractVector::parse(f3, 4, "(1,2,0,2 | 0,0,0,0)"));
    CHECK(sig.rep(parse_set(4, "1* 2* 3*")) ==
          TractVector::parse(f3, 4, "(0,0,0,0 | 1,1,2,0)"));

    for (OrthoAxiom ax : {OrthoAxiom::O, OrthoAxiom::OPrime, OrthoAxiom::Ot3, OrthoAxiom::Ot2})
        CHECK(check_orthogonality(sig, ax).ok);
    CHECK(check_axiom_L(sig).ok);
    CHECK(check_axiom_L1(sig).ok);
    CHECK(check_axiom_L2(sig).ok);
    CHECK(check_strong_circuit_set(sig).ok);
    CHECK(check_weak_circuit_set(sig).ok);
}

TEST_CASE("round trips between Wick functions and signatures") {
    std::vector<WickFunction> instances;
    Tract f3 = Tract::finite_field(3);
    instances.push_back(wick_from_gp(u24_gp(f3)));
    for (const char* d : {"F2", "F3", "K"})
        instances.push_back(WickFunction::indicator(parse_tract(d), OrthoMatroid::m4()));
    instances.push_back(WickFunction::indicator(Tract::krasner(), OrthoMatroid::m3()));

    for (const WickFunction& w : instances) {
        Signature sig = circuits_from_wick(w);
        WickFunction back = wick_from_circuits(sig);
        CHECK(back.equivalent(w));
        CHECK(circuits_from_wick(back).same_family(sig));
        CHECK(check_strong_circuit_set(sig).ok);
    }
}

TEST_CASE("transition coefficients follow the Wick values") {
    Tract f3 = Tract::finite_field(3);
    WickFunction w = wick_from_gp(u24_gp(f3));
    Signature sig = circuits_from_wick(w);
    const std::vector<mask_t>& bases = sig.matroid().bases();

    for (mask_t b1 : bases) {
        CHECK(gamma_coefficient(sig, b1, b1) == f3.one());
        for (mask_t b2 : bases) {
            if (popcount(b1 ^ b2) != 4) continue;
            Elt g = gamma_coefficient(sig, b1, b2);
            CHECK(g == f3.div(w.value(b2), w.value(b1)));
            CHECK(f3.mul(g, gamma_coefficient(sig, b2, b1)) == f3.one());
        }
    }
    // oriented triangles multiply to one
    for (mask_t b1 : bases)
        for (mask_t b2 : bases)
            for (mask_t b3 : bases) {
                if (popcount(b1 ^ b2) != 4 || popcount(b2 ^ b3) != 4 || popcount(b1 ^ b3) != 4)
                    continue;
                Elt prod = f3.mul(gamma_coefficient(sig, b1, b2),
                                  f3.mul(gamma_coefficient(sig, b2, b3),
                                         gamma_coefficient(sig, b3, b1)));
                CHECK(prod == f3.one());
            }

    // distance four and non-bases are rejected
    CHECK_THROWS_AS(
        gamma_coefficient(sig, parse_set(4, "1 2 3* 4*"), parse_set(4, "1* 2* 3 4")), error);
    CHECK_THROWS_AS(
        gamma_coefficient(sig, parse_set(4, "1 2 3 4*"), parse_set(4, "1 2 3* 4*")), error);
}

TEST_CASE("eight-vector family fails the four-term axioms but keeps the three-term ones") {
    struct Case {
        const char* field;
        const char* m;   // -1
        const char* x;   // the parameter
        const char* y;   // -x
    };
    for (Case c : {Case{"F5", "4", "1", "4"}, Case{"F7", "6", "2", "5"}}) {
        CAPTURE(c.field);
        Tract f = parse_tract(c.field);
        Signature sig = eight_vector_family(f, c.m, c.x, c.y);
        CHECK(sig.matroid().bases().size() == 8);
        CHECK(sig.matroid().is_basis(parse_set(4, "1 2 3 4")));
        CHECK(sig.matroid().is_basis(parse_set(4, "1* 2* 3* 4*")));

        CHECK(check_orthogonality(sig, OrthoAxiom::Ot2).ok);
        CHECK(check_orthogonality(sig, OrthoAxiom::Ot3).ok);
        CHECK(check_axiom_L1(sig).ok);
        CHECK_FALSE(check_orthogonality(sig, OrthoAxiom::OPrime).ok);
        CHECK_FALSE(check_orthogonality(sig, OrthoAxiom::O).ok);
        CHECK_FALSE(check_axiom_L2(sig).ok);
        CHECK_FALSE(check_axiom_L(sig).ok);
        CHECK_FALSE(check_strong_circuit_set(sig).ok);
        CHECK_FALSE(check_weak_circuit_set(sig).ok);

        WickFunction w = wick_from_circuits(sig);
        CHECK(w.value(parse_set(4, "1 2 3 4")) == f.one());
        CHECK(w.value(parse_set(4, "1* 2 3* 4")) == f.one());
        CHECK(w.value(parse_set(4, "1* 2* 3* 4*")) == f.parse(c.y));
        int minus_ones = 0;
        for (mask_t b : sig.matroid().bases()) {
            if (popcount(b & low_mask(4)) != 2) continue;
            if (b == parse_set(4, "1* 2 3* 4")) continue;
            CHECK(w.value(b) == f.parse(c.m));
            ++minus_ones;
        }
        CHECK(minus_ones == 5);

        for (WickLevel lv : {WickLevel::Strong, WickLevel::Moderate, WickLevel::Weak})
            CHECK_FALSE(check_wick(w, lv).ok);
        WickPairSum ps = wick_pair(w, parse_set(4, "1 2 3 4*"), parse_set(4, "1* 2* 3* 4"));
        CHECK(ps.divergence == 4);
        CHECK(ps.nonzero == 4);
        CHECK_FALSE(f.is_null(ps.sum));
        FormalSum expect = {f.parse(c.m), f.parse(c.m), f.parse(c.m), f.parse(c.y)};
        CHECK(ps.sum == expect);
    }
}

TEST_CASE("one-unit coefficients on the rank-three lift: weak circuit set only") {
    Tract f = ones_tract(3, 8);
    WickFunction w = WickFunction::indicator(f, OrthoMatroid::lift(Matroid::uniform(3, 6)));
    Signature sig = circuits_from_wick(w);

    CHECK(sig.members().size() == 30);
    CHECK(check_orthogonality(sig, OrthoAxiom::Ot2).ok);
    CHECK(check_axiom_L1(sig).ok);
    CHECK(check_axiom_L2(sig).ok);
    CHECK(check_weak_circuit_set(sig).ok);
    SigCheck op = check_orthogonality(sig, OrthoAxiom::OPrime);
    CHECK_FALSE(op.ok);
    CHECK_FALSE(check_orthogonality(sig, OrthoAxiom::O).ok);

    CHECK(wick_from_circuits(sig).equivalent(w));
}

TEST_CASE("duality and minors commute with the conversions") {
    Tract f3 = Tract::finite_field(3);
    WickFunction w = wick_from_gp(u24_gp(f3));
    Signature sig = circuits_from_wick(w);

    // Wick-side and member-side duality land on the same underlying matroid and
    // the same strength, but the two families differ by a coordinate rescaling
    // d with d(e) d(e*) = 1; here d = (1,2,1,2), so they are distinct families.
    Signature via_wick = circuits_from_wick(w.dual());
    Signature via_star = sig.dual();
    CHECK(via_wick.matroid() == sig.matroid().dual());
    CHECK(via_star.matroid() == sig.matroid().dual());
    CHECK(check_strong_circuit_set(via_wick).ok);
    CHECK(check_strong_circuit_set(via_star).ok);
    CHECK_FALSE(via_wick.same_family(via_star));
    CHECK(via_wick.rep(parse_set(4, "1 2 3")) ==
          TractVector::parse(f3, 4, "(1,2,2,0 | 0,0,0,0)"));
    CHECK(via_star.rep(parse_set(4, "1 2 3")) ==
          TractVector::parse(f3, 4, "(1,1,2,0 | 0,0,0,0)"));
    // Each path still round-trips with its own Wick class.
    CHECK(wick_from_circuits(via_wick).equivalent(w.dual()));
    CHECK(circuits_from_wick(wick_from_circuits(via_star)).same_family(via_star));
    CHECK(sig.dual().dual().same_family(sig));

    for (elem_t e : {elem_t{0}, elem_t{3}, elem_t{5}})
        CHECK(circuits_from_wick(w.minor(e)).same_family(sig.minor(e)));

    Signature folded = sig.minor_set(parse_set(4, "1 4"));
    CHECK(folded.same_family(sig.minor(3).minor(0)));
    CHECK(folded.matroid() == sig.matroid().minor_set(parse_set(4, "1 4")));
}

TEST_CASE("regular coefficients on the rank-one lift and its minor") {
    Tract u0 = Tract::regular();
    OrthoMatroid m = OrthoMatroid::lift(Matroid::uniform(1, 3));
    std::vector<TractVector> vecs = {
        TractVector::parse(u0, 3, "(1,-1,0 | 0,0,0)"),
        TractVector::parse(u0, 3, "(1,0,1 | 0,0,0)"),
        TractVector::parse(u0, 3, "(0,1,1 | 0,0,0)"),
        TractVector::parse(u0, 3, "(0,0,0 | 1,1,-1)"),
    };
    Signature sig(u0, m, vecs);
    CHECK(check_strong_circuit_set(sig).ok);
    CHECK(check_weak_circuit_set(sig).ok);

    Signature del = sig.minor(2);
    CHECK(del.matroid() == m.minor(2));
    CHECK(del.members().size() == 2);
    CHECK(del.rep(elem_mask(0)) == TractVector::parse(u0, 2, "(1,0 | 0,0)"));
    CHECK(del.rep(elem_mask(1)) == TractVector::parse(u0, 2, "(0,1 | 0,0)"));

    WickFunction w = wick_from_circuits(sig);
    CHECK(check_wick(w, WickLevel::Strong).ok);
    CHECK(circuits_from_wick(w).same_family(sig));

    auto h5 = find_hom(u0, Tract::finite_field(5));
    REQUIRE(h5.has_value());
    Signature sig5 = sig.pushforward(*h5);
    CHECK(sig5.tract().name() == "F5");
    CHECK(sig5.matroid() == m);
    CHECK(sig5.rep(elem_mask(0) | elem_mask(1)) ==
          TractVector::parse(sig5.tract(), 3, "(1,4,0 | 0,0,0)"));
    CHECK(check_strong_circuit_set(sig5).ok);
}

TEST_CASE("pushforward requires a homomorphism that respects the involutions") {
    Tract f2 = Tract::finite_field(2);
    Tract f4 = Tract::finite_field(4);          // Frobenius involution
    Tract f4id = Tract::finite_field(4, false, true);  // identity involution

    Signature sig2 = circuits_from_wick(WickFunction::indicator(f2, OrthoMatroid::m4()));
    auto up = find_hom(f2, f4);
    REQUIRE(up.has_value());
    CHECK(up->involution_compatible());
    Signature sig4 = sig2.pushforward(*up);
    CHECK(sig4.tract().name() == "F4");
    CHECK(check_strong_circuit_set(sig4).ok);

    std::vector<Elt> images;
    for (int i = 0; i < f4.unit_count(); ++i)
        images.push_back(f4id.parse(f4.format(f4.unit_at(i))));
    auto flat = TractHom::try_make(f4, f4id, images);
    REQUIRE(flat.has_value());
    CHECK_FALSE(flat->involution_compatible());
    CHECK_THROWS_AS(sig4.pushforward(*flat), error);
}

TEST_CASE("unit scaling preserves the checks for pure supports or trivial involutions") {
    auto invariant_under = [](const Signature& sig, bool conj_action) {
        const Tract& f = sig.tract();
        std::vector<Elt> units;
        for (int i = 0; i < f.unit_count(); ++i) units.push_back(f.unit_at(i));
        auto act = [&](const TractVector& x, Elt a) {
            return conj_action ? x.conj_scaled(a) : x.scaled(a);
        };
        const std::vector<TractVector>& v = sig.members();
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i; j < v.size(); ++j) {
                bool base = f.is_null(inner_product_star(v[i], v[j]));
                for (Elt a : units)
                    for (Elt b : units)
                        if (f.is_null(inner_product_star(act(v[i], a), act(v[j], b))) != base)
                            return false;
            }
        for (mask_t b : sig.matroid().bases()) {
            std::vector<TractVector> gens = fundamental_members(sig, b);
            for (const TractVector& x : v) {
                bool base = span_contains(f, sig.n(), x.conjed(), gens).ok;
                for (Elt a : units)
                    if (span_contains(f, sig.n(), act(x, a).conjed(), gens).ok != base)
                        return false;
            }
        }
        return true;
    };
    auto fully_invariant = [&](const Signature& sig) { return invariant_under(sig, false); };

    // A lifted family keeps each support entirely on the plain half or
    // entirely on the starred half, so scaling a member rescales its
    // conjugated coordinate profile uniformly and nullity is untouched.
    Tract r6 = Tract::sixth_root();
    WickFunction w6 = wick_from_gp(u24_gp_r6(r6));
    REQUIRE(check_wick(w6, WickLevel::Strong).ok);
    Signature lifted = circuits_from_wick(w6);
    CHECK_FALSE(involution_is_trivial(r6));
    CHECK(check_strong_circuit_set(lifted).ok);
    CHECK(fully_invariant(lifted));

    // Mixed supports under a trivial involution scale both halves alike.
    Tract f2 = Tract::finite_field(2);
    Tract f4id = Tract::finite_field(4, false, true);
    auto up_id = find_hom(f2, f4id);
    REQUIRE(up_id.has_value());
    Signature mixed_id =
        circuits_from_wick(WickFunction::indicator(f2, OrthoMatroid::m4()))
            .pushforward(*up_id);
    CHECK(involution_is_trivial(f4id));
    CHECK(check_strong_circuit_set(mixed_id).ok);
    CHECK(fully_invariant(mixed_id));

    // Mixed supports under a nontrivial involution: the representative family
    // passes every check, but scaling one member of a pair multiplies the two
    // halves of the pairing by conjugate factors, which can leave the null
    // set.  The checks are therefore defined on representatives.
    Tract f4 = Tract::finite_field(4);
    auto up = find_hom(f2, f4);
    REQUIRE(up.has_value());
    Signature mixed =
        circuits_from_wick(WickFunction::indicator(f2, OrthoMatroid::m4()))
            .pushforward(*up);
    CHECK_FALSE(involution_is_trivial(f4));
    CHECK(check_strong_circuit_set(mixed).ok);
    CHECK_FALSE(fully_invariant(mixed));

    // The involution-aware action keeps every instance invariant, including
    // the mixed one; plain scaling agrees with it in the other two cases.
    CHECK(invariant_under(lifted, true));
    CHECK(invariant_under(mixed_id, true));
    CHECK(invariant_under(mixed, true));
    TractVector ones = mixed.rep(parse_set(4, "1 2 3* 4*"));
    CHECK(ones.conj_scaled(f4.parse("2")) ==
          TractVector::parse(f4, 4, "(2,2,0,0 | 0,0,3,3)"));
    CHECK(ones.conj_scaled(f4.parse("2")).conj_normalized() == ones);

    TractVector x = mixed.rep(parse_set(4, "1 2 3* 4*"));
    TractVector y = mixed.rep(parse_set(4, "1 3 2* 4*"));
    Elt a = f4.parse("2");
    CHECK(f4.is_null(inner_product_star(x, y)));
    FormalSum twisted = inner_product_star(x, y.scaled(a));
    FormalSum expect = {f4.parse("3"), f4.parse("2")};
    CHECK(twisted == expect);
    CHECK_FALSE(f4.is_null(twisted));
}

TEST_CASE("family validation and ambiguity reporting") {
    Tract u0 = Tract::regular();
    OrthoMatroid m = OrthoMatroid::lift(Matroid::uniform(1, 3));
    std::vector<TractVector> vecs = {
        TractVector::parse(u0, 3, "(1,-1,0 | 0,0,0)"),
        TractVector::parse(u0, 3, "(1,0,1 | 0,0,0)"),
        TractVector::parse(u0, 3, "(0,1,1 | 0,0,0)"),
    };
    // one circuit has no member
    CHECK_THROWS_AS(Signature(u0, m, vecs), error);
    // zero members are rejected
    std::vector<TractVector> with_zero = vecs;
    with_zero.emplace_back(u0, 3);
    CHECK_THROWS_AS(Signature(u0, m, with_zero), error);
    // members must live in the announced tract
    std::vector<TractVector> wrong = vecs;
    wrong.push_back(TractVector::parse(Tract::finite_field(5), 3, "(0,0,0 | 1,1,4)"));
    CHECK_THROWS_AS(Signature(u0, m, wrong), error);

    // two members on one support are stored, and flagged on access
    Tract f5 = Tract::finite_field(5);
    OrthoMatroid two = matroid_from_circuits(2, {parse_set(2, "1 2"), parse_set(2, "1* 2*")});
    Signature dup(f5, two,
                  {TractVector::parse(f5, 2, "(1,1 | 0,0)"),
                   TractVector::parse(f5, 2, "(1,2 | 0,0)"),
                   TractVector::parse(f5, 2, "(0,0 | 1,1)")});
    CHECK(dup.members().size() == 3);
    CHECK_THROWS_AS(dup.rep(parse_set(2, "1 2")), error);
    CHECK(dup.rep(parse_set(2, "1* 2*")) == TractVector::parse(f5, 2, "(0,0 | 1,1)"));

    for (OrthoAxiom ax : {OrthoAxiom::O, OrthoAxiom::OPrime, OrthoAxiom::Ot3, OrthoAxiom::Ot2})
        CHECK(parse_ortho_axiom(ortho_axiom_name(ax)) == ax);
    CHECK_THROWS_AS(parse_ortho_axiom("Q"), error);
}
