#pragma once
//
// Circuit signatures of orthogonal matroids with coefficients in a tract:
// families of vectors whose supports are exactly the circuits, closed under
// unit scaling.  Provides the orthogonality axioms (O, O', Ot3, Ot2), the
// span axioms (L, L1, L2), strong/weak circuit-set checks, conversions to
// and from Wick functions, duality, elementary minors, and pushforward
// along tract homomorphisms.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ground_set.hpp"
#include "ortho_matroid.hpp"
#include "tract.hpp"
#include "tract_hom.hpp"
#include "tract_vector.hpp"
#include "wick.hpp"

namespace omt {

// Recover the orthogonal matroid whose circuit set is exactly the given
// family: bases are the transversals containing no listed set.  Throws if
// the family is not the circuit set of any orthogonal matroid.
inline OrthoMatroid matroid_from_circuits(int n, const std::vector<mask_t>& circuits) {
    require_n(n);
    std::vector<mask_t> fam = circuits;
    for (mask_t c : fam)
        if (c == 0 || (c & ~full_set(n)) != 0 || !is_admissible(n, c))
            throw error("circuit is not a nonempty admissible set: " + format_set(n, c));
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());

    std::vector<mask_t> bases;
    for (mask_t t : enumerate_transversals(n)) {
        bool contains = false;
        for (mask_t c : fam)
            if ((c & ~t) == 0) {
                contains = true;
                break;
            }
        if (!contains) bases.push_back(t);
    }
    if (bases.empty()) throw error("every transversal contains one of the given circuits");
    OrthoMatroid m(n, std::move(bases));
    if (m.circuits() != fam)
        throw error("the given family is not the circuit set of an orthogonal matroid");
    return m;
}

// A signature stores one normalized representative per scaling orbit; the
// family it describes is the closure of the members under conj_scaled, the
// scaling action that moves the conjugated profile uniformly.  That closure
// matches plain unit scaling whenever the involution is trivial or every
// support lies on one half of the ground set.
class Signature {
public:
    Signature(const Tract& f, const OrthoMatroid& m, const std::vector<TractVector>& members)
        : f_(f), m_(m) {
        for (const TractVector& x : members) {
            if (!f_.same(x.tract()))
                throw error("signature member belongs to tract " + x.tract().name() +
                            ", expected " + f_.name());
            if (x.n() != m_.n()) throw error("signature member has the wrong ground set size");
            if (x.is_zero_vector()) throw error("signature members must be nonzero");
            vecs_.push_back(x.conj_normalized());
        }
        auto before = [this](const TractVector& a, const TractVector& b) {
            if (a.support() != b.support()) return a.support() < b.support();
            for (elem_t e = 0; e < 2 * m_.n(); ++e)
                if (!(a.at(e) == b.at(e))) return a.at(e) < b.at(e);
            return false;
        };
        std::sort(vecs_.begin(), vecs_.end(), before);
        vecs_.erase(std::unique(vecs_.begin(), vecs_.end()), vecs_.end());

        std::vector<mask_t> supports;
        for (const TractVector& x : vecs_) supports.push_back(x.support());
        std::sort(supports.begin(), supports.end());
        supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
        if (supports != m_.circuits())
            throw error("member supports are not exactly the circuits of the matroid");
    }

    const Tract& tract() const { return f_; }
    int n() const { return m_.n(); }
    const OrthoMatroid& matroid() const { return m_; }
    const std::vector<TractVector>& members() const { return vecs_; }

    // The member supported on a given circuit.  Unique up to scaling when
    // the two-term orthogonality axiom holds; ambiguity is reported.
    const TractVector& rep(mask_t c) const {
        const TractVector* hit = nullptr;
        for (const TractVector& x : vecs_) {
            if (x.support() != c) continue;
            if (hit != nullptr)
                throw error("support " + format_set(n(), c) +
                            " carries more than one member up to scaling");
            hit = &x;
        }
        if (hit == nullptr) throw error("no member with support " + format_set(n(), c));
        return *hit;
    }

    bool same_family(const Signature& o) const {
        return f_.same(o.f_) && m_ == o.m_ && vecs_ == o.vecs_;
    }

    Signature dual() const {
        std::vector<TractVector> out;
        out.reserve(vecs_.size());
        for (const TractVector& x : vecs_) out.push_back(x.star());
        return Signature(f_, m_.dual(), out);
    }

    // Elementary minor at e: members vanishing at e* (other than one
    // supported on {e} alone) are projected off the coordinate pair of e,
    // and only those of minimal support are kept.
    Signature minor(elem_t e) const {
        const int n = m_.n();
        if (n == 0) throw error("minor of an empty ground set");
        if (e < 0 || e >= 2 * n) throw error("minor element out of range");
        const elem_t es = star_elem(n, e);
        std::vector<TractVector> projected;
        for (const TractVector& x : vecs_) {
            if (!is_zero(x.at(es))) continue;
            if (x.support() == elem_mask(e)) continue;
            projected.push_back(project_pair(x, e));
        }
        std::vector<TractVector> kept;
        for (std::size_t i = 0; i < projected.size(); ++i) {
            mask_t si = projected[i].support();
            bool minimal = true;
            for (std::size_t j = 0; j < projected.size() && minimal; ++j) {
                mask_t sj = projected[j].support();
                if (sj != si && (sj & ~si) == 0) minimal = false;
            }
            if (minimal) kept.push_back(projected[i]);
        }
        return Signature(f_, m_.minor(e), kept);
    }

    // Iterated elementary minor, removing higher positions first; rejects a
    // request naming both an element and its star.
    Signature minor_set(mask_t s) const {
        const int n = m_.n();
        if (s & ~full_set(n)) throw error("minor set outside ground set");
        if (((s & low_mask(n)) & (s >> n)) != 0)
            throw error("minor set names both an element and its star: " + format_set(n, s));
        std::vector<elem_t> elems = set_elems(s);
        std::sort(elems.begin(), elems.end(), [&](elem_t a, elem_t b) {
            return position_of(n, a) > position_of(n, b);
        });
        Signature cur = *this;
        int removed = 0;
        for (elem_t e : elems) {
            int p = position_of(n, e);
            elem_t in_cur = (e < n) ? p : p + (n - removed);
            cur = cur.minor(in_cur);
            ++removed;
        }
        return cur;
    }

    // Apply a tract homomorphism to every member.  The homomorphism must
    // commute with the involutions of its source and target.
    Signature pushforward(const TractHom& h) const {
        if (!f_.same(h.source()))
            throw error("pushforward homomorphism has source " + h.source().name() +
                        ", expected " + f_.name());
        if (!h.involution_compatible())
            throw error("pushforward of a signature needs a homomorphism that commutes "
                        "with the involutions");
        std::vector<TractVector> out;
        out.reserve(vecs_.size());
        for (const TractVector& x : vecs_) {
            TractVector y(h.target(), m_.n());
            for (elem_t e = 0; e < 2 * m_.n(); ++e) y.set(e, h.map(x.at(e)));
            out.push_back(y);
        }
        return Signature(h.target(), m_, out);
    }

private:
    Tract f_;
    OrthoMatroid m_;
    std::vector<TractVector> vecs_;
};

enum class OrthoAxiom { O, OPrime, Ot3, Ot2 };

inline std::string ortho_axiom_name(OrthoAxiom a) {
    switch (a) {
        case OrthoAxiom::O: return "O";
        case OrthoAxiom::OPrime: return "O'";
        case OrthoAxiom::Ot3: return "Ot3";
        case OrthoAxiom::Ot2: return "Ot2";
    }
    throw error("unknown orthogonality axiom");
}

inline OrthoAxiom parse_ortho_axiom(std::string_view s) {
    if (s == "O") return OrthoAxiom::O;
    if (s == "O'") return OrthoAxiom::OPrime;
    if (s == "Ot3") return OrthoAxiom::Ot3;
    if (s == "Ot2") return OrthoAxiom::Ot2;
    throw error("unknown orthogonality axiom: " + std::string(s));
}

struct SigCheck {
    bool ok = true;
    std::string reason;
};

// Pairs of members are tested for the nullity of <X, Y*> when their
// overlap |supp X n (supp Y)*| is in the range the axiom quantifies over:
// all sizes for O, at most four for O', at most three for Ot3, and exactly
// two for Ot2.
inline SigCheck check_orthogonality(const Signature& sig, OrthoAxiom ax) {
    const std::vector<TractVector>& v = sig.members();
    const Tract& f = sig.tract();
    const int n = sig.n();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            int ov = popcount(v[i].support() & star_set(n, v[j].support()));
            if (ov == 0) continue;
            bool applies = ax == OrthoAxiom::O || (ax == OrthoAxiom::OPrime && ov <= 4) ||
                           (ax == OrthoAxiom::Ot3 && ov <= 3) ||
                           (ax == OrthoAxiom::Ot2 && ov == 2);
            if (!applies) continue;
            FormalSum s = inner_product_star(v[i], v[j]);
            if (!f.is_null(s))
                return {false, "axiom " + ortho_axiom_name(ax) + " fails for X = " +
                                   v[i].format() + " and Y = " + v[j].format() +
                                   ": <X,Y*> = " + format_sum(f, s)};
        }
    return {};
}

inline bool involution_is_trivial(const Tract& f) {
    if (!f.finite()) return true;
    for (int i = 0; i < f.unit_count(); ++i) {
        Elt u = f.unit_at(i);
        if (!(f.conj(u) == u)) return false;
    }
    return true;
}

// Every check below is invariant under conj_scaled rescalings of the members:
// the conjugated profile of such a rescaling is a uniform unit multiple of the
// original, which moves pairings and span relations by a unit factor only.
// One stored representative per orbit therefore decides each axiom.

// Conjugated members supported on the fundamental circuits C(b, e), e
// ranging over the star of the basis b.
inline std::vector<TractVector> fundamental_members(const Signature& sig, mask_t b) {
    std::vector<TractVector> gens;
    const int n = sig.n();
    for (elem_t e : set_elems(star_set(n, b)))
        gens.push_back(sig.rep(sig.matroid().fundamental_circuit(b, e)).conjed());
    return gens;
}

// Axiom L: for every basis, the conjugation of every member lies in the
// span of the conjugated fundamental-circuit members of that basis.
inline SigCheck check_axiom_L(const Signature& sig) {
    const int n = sig.n();
    for (mask_t b : sig.matroid().bases()) {
        std::vector<TractVector> gens = fundamental_members(sig, b);
        for (const TractVector& x : sig.members())
            if (!span_contains(sig.tract(), n, x.conjed(), gens).ok)
                return {false, "axiom L fails at basis " + format_set(n, b) +
                                   " for member " + x.format()};
    }
    return {};
}

// Axiom L1: for a basis b and distinct e1, e2 in its star whose fundamental
// circuits have an admissible union, every common support element g admits
// a member vanishing at g whose conjugate lies in the span of the two
// conjugated fundamental-circuit members.
inline SigCheck check_axiom_L1(const Signature& sig) {
    const Tract& f = sig.tract();
    const int n = sig.n();
    const OrthoMatroid& m = sig.matroid();
    for (mask_t b : m.bases()) {
        std::vector<elem_t> outside = set_elems(star_set(n, b));
        for (std::size_t i = 0; i < outside.size(); ++i)
            for (std::size_t j = i + 1; j < outside.size(); ++j) {
                mask_t c1 = m.fundamental_circuit(b, outside[i]);
                mask_t c2 = m.fundamental_circuit(b, outside[j]);
                if (!is_admissible(n, c1 | c2)) continue;
                std::vector<TractVector> gens = {sig.rep(c1).conjed(), sig.rep(c2).conjed()};
                for (elem_t g : set_elems(c1 & c2)) {
                    bool found = false;
                    for (const TractVector& y : sig.members())
                        if (is_zero(y.at(g)) && span_contains(f, n, y.conjed(), gens).ok) {
                            found = true;
                            break;
                        }
                    if (!found)
                        return {false, "axiom L1 fails at basis " + format_set(n, b) + " for " +
                                           format_elem(n, outside[i]) + ", " +
                                           format_elem(n, outside[j]) + " at " +
                                           format_elem(n, g)};
                }
            }
    }
    return {};
}

// Axiom L2: for a basis b and distinct e1, e2, e3 in its star whose
// fundamental circuits have pairwise non-admissible unions, some member
// vanishing at e1*, e2*, e3* has its conjugate in the span of the three
// conjugated fundamental-circuit members.
inline SigCheck check_axiom_L2(const Signature& sig) {
    const Tract& f = sig.tract();
    const int n = sig.n();
    const OrthoMatroid& m = sig.matroid();
    for (mask_t b : m.bases()) {
        std::vector<elem_t> outside = set_elems(star_set(n, b));
        for (std::size_t i = 0; i < outside.size(); ++i)
            for (std::size_t j = i + 1; j < outside.size(); ++j)
                for (std::size_t k = j + 1; k < outside.size(); ++k) {
                    mask_t c1 = m.fundamental_circuit(b, outside[i]);
                    mask_t c2 = m.fundamental_circuit(b, outside[j]);
                    mask_t c3 = m.fundamental_circuit(b, outside[k]);
                    if (is_admissible(n, c1 | c2) || is_admissible(n, c1 | c3) ||
                        is_admissible(n, c2 | c3))
                        continue;
                    std::vector<TractVector> gens = {sig.rep(c1).conjed(), sig.rep(c2).conjed(),
                                                     sig.rep(c3).conjed()};
                    const elem_t g1 = star_elem(n, outside[i]);
                    const elem_t g2 = star_elem(n, outside[j]);
                    const elem_t g3 = star_elem(n, outside[k]);
                    bool found = false;
                    for (const TractVector& y : sig.members()) {
                        if (!is_zero(y.at(g1)) || !is_zero(y.at(g2)) || !is_zero(y.at(g3)))
                            continue;
                        if (span_contains(f, n, y.conjed(), gens).ok) {
                            found = true;
                            break;
                        }
                    }
                    if (!found)
                        return {false, "axiom L2 fails at basis " + format_set(n, b) + " for " +
                                           format_elem(n, outside[i]) + ", " +
                                           format_elem(n, outside[j]) + ", " +
                                           format_elem(n, outside[k])};
                }
    }
    return {};
}

inline SigCheck check_strong_circuit_set(const Signature& sig) {
    if (SigCheck c = check_orthogonality(sig, OrthoAxiom::Ot2); !c.ok) return c;
    return check_axiom_L(sig);
}

inline SigCheck check_weak_circuit_set(const Signature& sig) {
    if (SigCheck c = check_orthogonality(sig, OrthoAxiom::Ot2); !c.ok) return c;
    if (SigCheck c = check_axiom_L1(sig); !c.ok) return c;
    return check_axiom_L2(sig);
}

// Transversals containing the circuit c such that flipping any coordinate
// pair of c lands on a basis; the member construction below does not
// depend on which one is used.
inline std::vector<mask_t> circuit_transversals(const OrthoMatroid& m, mask_t c) {
    const int n = m.n();
    mask_t cpos = 0;
    for (elem_t x : set_elems(c)) cpos |= elem_mask(position_of(n, x));
    std::vector<int> freepos;
    for (int p = 0; p < n; ++p)
        if (!(cpos & elem_mask(p))) freepos.push_back(p);
    std::vector<mask_t> out;
    for (mask_t pick = 0; pick < (mask_t{1} << freepos.size()); ++pick) {
        mask_t t = c;
        for (std::size_t i = 0; i < freepos.size(); ++i)
            t |= elem_mask(freepos[i] + (((pick >> i) & 1) != 0 ? n : 0));
        bool good = true;
        for (elem_t x : set_elems(c))
            if (!m.is_basis(t ^ pair_mask(n, x))) {
                good = false;
                break;
            }
        if (good) out.push_back(t);
    }
    return out;
}

// The member supported on the circuit c read off from a Wick function
// through an extending transversal t: with f0 the least element of c, the
// conjugated coordinate at e is the signed ratio of the two basis values
// obtained by flipping e and f0, and the stored coordinate undoes the
// conjugation on the starred half.
inline TractVector circuit_member_from_wick(const WickFunction& w, mask_t c, mask_t t) {
    const Tract& f = w.tract();
    const int n = w.n();
    const elem_t f0 = least_elem(c);
    const Elt den = w.value(t ^ pair_mask(n, f0));
    if (is_zero(den)) throw error("transversal does not extend the circuit inside the support");
    TractVector x(f, n);
    for (elem_t e : set_elems(c)) {
        const Elt num = w.value(t ^ pair_mask(n, e));
        if (is_zero(num)) throw error("transversal does not extend the circuit inside the support");
        Elt cx = f.mul(f.sign_pow(interval_count(n, t, e, f0)), f.div(num, den));
        x.set(e, e < n ? cx : f.conj(cx));
    }
    return x;
}

inline Signature circuits_from_wick(const WickFunction& w) {
    OrthoMatroid m = w.underlying_matroid();
    std::vector<TractVector> members;
    for (mask_t c : m.circuits()) {
        std::vector<mask_t> ts = circuit_transversals(m, c);
        if (ts.empty())
            throw error("no transversal extends circuit " + format_set(m.n(), c) +
                        " with all coordinate flips landing on bases");
        std::optional<TractVector> first;
        for (mask_t t : ts) {
            TractVector x = circuit_member_from_wick(w, c, t);
            if (!first)
                first = x;
            else if (!(*first == x))
                throw error("member for circuit " + format_set(m.n(), c) +
                            " depends on the extending transversal");
        }
        members.push_back(*first);
    }
    return Signature(w.tract(), m, members);
}

namespace detail {

// One evaluation of the transition coefficient, with e taken from b1 and
// fe from b2 at the two diverging positions.
inline Elt gamma_choice(const Signature& sig, mask_t b1, mask_t b2, elem_t e, elem_t fe) {
    const int n = sig.n();
    const Tract& f = sig.tract();
    const OrthoMatroid& m = sig.matroid();
    const mask_t t = b1 ^ pair_mask(n, fe);
    const mask_t c = m.fundamental_circuit(b1, fe);
    if (c != m.fundamental_circuit(b2, e))
        throw error("transition circuits disagree between " + format_set(n, b1) + " and " +
                    format_set(n, b2));
    TractVector cx = sig.rep(c).conjed();
    return f.mul(f.sign_pow(interval_count(n, t, e, fe)), f.div(cx.at(e), cx.at(fe)));
}

}  // namespace detail

// Transition coefficient between bases whose symmetric difference has size
// four.  Both ways of pairing the diverging positions must agree; a
// disagreement means the signature violates two-term orthogonality.
inline Elt gamma_coefficient(const Signature& sig, mask_t b1, mask_t b2) {
    const int n = sig.n();
    const OrthoMatroid& m = sig.matroid();
    if (!m.is_basis(b1) || !m.is_basis(b2))
        throw error("transition coefficients are defined between bases");
    if (b1 == b2) return sig.tract().one();
    const mask_t dpos = (b1 ^ b2) & low_mask(n);
    if (popcount(b1 ^ b2) != 4 || popcount(dpos) != 2)
        throw error("transition coefficients need bases at symmetric difference four");
    const int p = least_elem(dpos);
    const int q = least_elem(dpos & ~elem_mask(p));
    auto elem_at = [&](mask_t b, int pos) {
        return (b & elem_mask(pos)) != 0 ? static_cast<elem_t>(pos)
                                         : static_cast<elem_t>(pos + n);
    };
    Elt g1 = detail::gamma_choice(sig, b1, b2, elem_at(b1, p), elem_at(b2, q));
    Elt g2 = detail::gamma_choice(sig, b1, b2, elem_at(b1, q), elem_at(b2, p));
    if (!(g1 == g2))
        throw error("transition coefficient between " + format_set(n, b1) + " and " +
                    format_set(n, b2) + " is not well-defined");
    return g1;
}

// Build a Wick function from a signature: value one on the least basis,
// every other basis valued through a chain of transition coefficients, and
// every adjacent pair of bases re-checked for consistency afterwards.
inline WickFunction wick_from_circuits(const Signature& sig) {
    const OrthoMatroid& m = sig.matroid();
    const Tract& f = sig.tract();
    const int n = sig.n();
    const std::vector<mask_t>& bases = m.bases();
    mask_t b0 = bases.front();
    for (mask_t b : bases)
        if (lex_less(b, b0)) b0 = b;
    auto layer = [&](mask_t b) { return popcount(b & ~b0); };
    int max_layer = 0;
    for (mask_t b : bases) max_layer = std::max(max_layer, layer(b));

    std::map<mask_t, Elt> vals;
    vals[b0] = f.one();
    for (int lay = 2; lay <= max_layer; lay += 2)
        for (mask_t b : bases) {
            if (layer(b) != lay) continue;
            bool placed = false;
            for (mask_t bp : bases) {
                if (layer(bp) != lay - 2 || popcount(b ^ bp) != 4) continue;
                vals[b] = f.mul(gamma_coefficient(sig, bp, b), vals.at(bp));
                placed = true;
                break;
            }
            if (!placed)
                throw error("basis " + format_set(n, b) +
                            " has no neighbor nearer the anchor basis");
        }
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            if (popcount(bases[i] ^ bases[j]) != 4) continue;
            Elt expect = f.mul(gamma_coefficient(sig, bases[i], bases[j]), vals.at(bases[i]));
            if (!(expect == vals.at(bases[j])))
                throw error("transition coefficients are inconsistent between " +
                            format_set(n, bases[i]) + " and " + format_set(n, bases[j]));
        }
    return WickFunction(f, n, vals);
}

}  // namespace omt
