#pragma once
//
// Explicit families of tract vectors on a ground set [n] ∪ [n]*: orthogonal
// complements computed by enumeration, elementary vectors, support bases,
// fundamental circuit forms, the vector-family axioms (V1, V2, V3),
// coordinate-pair minors, the Lagrangian-subspace test over fields, and
// conversions to and from circuit signatures.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ground_set.hpp"
#include "ortho_matroid.hpp"
#include "signature.hpp"
#include "tract.hpp"
#include "tract_hom.hpp"
#include "tract_vector.hpp"

namespace omt {

// Hard cap on full coordinate-space sweeps: (units + 1)^(2n) tuples.
inline constexpr std::uint64_t enumeration_bound = 100'000'000;

// Number of coordinate tuples over the tract, i.e. (units + 1)^(2n), with
// the product capped just past the enumeration bound to avoid overflow.
inline std::uint64_t coordinate_space_size(const Tract& f, int n) {
    require_n(n);
    if (!f.finite())
        throw error("coordinate enumeration requires a finite tract, got " + f.name());
    const std::uint64_t base = static_cast<std::uint64_t>(f.unit_count()) + 1;
    std::uint64_t total = 1;
    for (int i = 0; i < 2 * n; ++i) {
        if (total > enumeration_bound) return total;
        total *= base;
    }
    return total;
}

inline void require_enumerable(const Tract& f, int n) {
    if (coordinate_space_size(f, n) > enumeration_bound)
        throw error("coordinate space of " + f.name() + " on " + std::to_string(n) +
                    " element pairs exceeds the enumeration bound of " +
                    std::to_string(enumeration_bound) + " tuples");
}

// Visit every vector with entries in {0} ∪ units exactly once.  The argument
// passed to the visitor is reused between calls; copy it to keep it.
template <typename Fn>
void for_each_vector(const Tract& f, int n, Fn&& visit) {
    require_enumerable(f, n);
    const int width = 2 * n;
    const int base = f.unit_count() + 1;
    std::vector<Elt> values;
    values.push_back(f.zero());
    for (int i = 0; i + 1 < base; ++i) values.push_back(f.unit_at(i));

    std::vector<int> digits(static_cast<std::size_t>(width), 0);
    TractVector x(f, n);
    for (;;) {
        visit(static_cast<const TractVector&>(x));
        int p = 0;
        while (p < width) {
            int& d = digits[static_cast<std::size_t>(p)];
            if (++d < base) {
                x.set(p, values[static_cast<std::size_t>(d)]);
                break;
            }
            d = 0;
            x.set(p, values[0]);
            ++p;
        }
        if (p == width) return;
    }
}

// A finite family of vectors over one tract, held explicitly, deduplicated
// and sorted by support then coordinates.
class VectorFamily {
public:
    VectorFamily(const Tract& f, int n, std::vector<TractVector> members)
        : f_(f), n_(n), vecs_(std::move(members)) {
        require_n(n_);
        for (const TractVector& x : vecs_) {
            if (!f_.same(x.tract()))
                throw error("family member belongs to tract " + x.tract().name() +
                            ", expected " + f_.name());
            if (x.n() != n_) throw error("family member has the wrong ground set size");
        }
        std::sort(vecs_.begin(), vecs_.end(), coordinate_less);
        vecs_.erase(std::unique(vecs_.begin(), vecs_.end()), vecs_.end());
    }

    const Tract& tract() const { return f_; }
    int n() const { return n_; }
    const std::vector<TractVector>& members() const { return vecs_; }
    std::size_t size() const { return vecs_.size(); }

    bool contains(const TractVector& x) const {
        auto it = std::lower_bound(vecs_.begin(), vecs_.end(), x, coordinate_less);
        return it != vecs_.end() && *it == x;
    }

    bool operator==(const VectorFamily& o) const {
        return f_.same(o.f_) && n_ == o.n_ && vecs_ == o.vecs_;
    }

    // Number of distinct nonzero members up to the scaling action that moves
    // the conjugated profile uniformly; size() counts vectors one by one.
    std::size_t orbit_count() const {
        std::vector<TractVector> reps;
        for (const TractVector& x : vecs_)
            if (!x.is_zero_vector()) reps.push_back(x.conj_normalized());
        std::sort(reps.begin(), reps.end(), coordinate_less);
        reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
        return reps.size();
    }

    static bool coordinate_less(const TractVector& a, const TractVector& b) {
        if (a.support() != b.support()) return a.support() < b.support();
        for (elem_t e = 0; e < 2 * a.n(); ++e)
            if (!(a.at(e) == b.at(e))) return a.at(e) < b.at(e);
        return false;
    }

private:
    Tract f_;
    int n_;
    std::vector<TractVector> vecs_;
};

// Orthogonal complement {X : <X,Y*> null for every generator Y}, computed
// by sweeping the whole coordinate space.  Rescaling a generator by a unit,
// plainly or through the conjugation-aware action, multiplies every pairing
// by a unit, so a set of representatives cuts out the same complement as
// the full scaling closure it stands for.
inline VectorFamily perp(const Tract& f, int n, const std::vector<TractVector>& gens) {
    require_n(n);
    require_enumerable(f, n);
    for (const TractVector& y : gens) {
        if (!f.same(y.tract()))
            throw error("complement generator belongs to tract " + y.tract().name() +
                        ", expected " + f.name());
        if (y.n() != n) throw error("complement generator has the wrong ground set size");
    }
    // w[g][e] holds the conjugated profile of generator g at e*, so that
    // <X,Y*> is the sum over e of conj-profile(X)(e) * w[g][e].
    std::vector<std::vector<Elt>> w;
    for (const TractVector& y : gens) {
        TractVector cy = y.conjed();
        std::vector<Elt> row(static_cast<std::size_t>(2 * n));
        for (elem_t e = 0; e < 2 * n; ++e)
            row[static_cast<std::size_t>(e)] = cy.at(star_elem(n, e));
        w.push_back(std::move(row));
    }

    std::vector<TractVector> keep;
    for_each_vector(f, n, [&](const TractVector& x) {
        TractVector cx = x.conjed();
        for (const std::vector<Elt>& row : w) {
            FormalSum s;
            for (elem_t e = 0; e < 2 * n; ++e) {
                Elt a = cx.at(e), b = row[static_cast<std::size_t>(e)];
                if (!is_zero(a) && !is_zero(b)) s.add(f.mul(a, b));
            }
            if (!f.is_null(s)) return;
        }
        keep.push_back(x);
    });
    return VectorFamily(f, n, std::move(keep));
}

inline VectorFamily perp(const VectorFamily& v) { return perp(v.tract(), v.n(), v.members()); }

inline VectorFamily perp(const Signature& sig) {
    return perp(sig.tract(), sig.n(), sig.members());
}

// Members that are nonzero, of minimal support among nonzero members, and
// whose support contains no element together with its star.
inline std::vector<TractVector> elementary_vectors(const VectorFamily& v) {
    std::vector<mask_t> supports;
    for (const TractVector& x : v.members())
        if (!x.is_zero_vector()) supports.push_back(x.support());
    std::sort(supports.begin(), supports.end());
    supports.erase(std::unique(supports.begin(), supports.end()), supports.end());

    std::vector<TractVector> out;
    for (const TractVector& x : v.members()) {
        if (x.is_zero_vector()) continue;
        mask_t s = x.support();
        if (!is_admissible(v.n(), s)) continue;
        bool minimal = true;
        for (mask_t t : supports)
            if (t != s && (t & ~s) == 0) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(x);
    }
    return out;
}

// Transversals that contain the support of no nonzero member.
inline std::vector<mask_t> support_bases(const VectorFamily& v) {
    std::vector<mask_t> supports;
    for (const TractVector& x : v.members())
        if (!x.is_zero_vector()) supports.push_back(x.support());
    std::sort(supports.begin(), supports.end());
    supports.erase(std::unique(supports.begin(), supports.end()), supports.end());

    std::vector<mask_t> out;
    for (mask_t t : enumerate_transversals(v.n())) {
        bool spoiled = false;
        for (mask_t s : supports)
            if ((s & ~t) == 0) {
                spoiled = true;
                break;
            }
        if (!spoiled) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

struct FormSearch {
    bool ok = false;
    bool ambiguous = false;
    elem_t at = -1;                    // offending element when not ok
    std::vector<TractVector> forms;    // one per element of B*, ascending
};

inline FormSearch find_circuit_form(const VectorFamily& v, mask_t b) {
    const int n = v.n();
    const Tract& f = v.tract();
    if (!is_transversal(n, b))
        throw error("fundamental circuit form needs a transversal, got " + format_set(n, b));
    FormSearch res;
    for (elem_t e = 0; e < 2 * n; ++e) {
        if ((b >> e) & 1) continue;  // e runs over B*
        mask_t allowed = b ^ (elem_mask(e) | elem_mask(star_elem(n, e)));
        const TractVector* hit = nullptr;
        for (const TractVector& x : v.members()) {
            if ((x.support() & ~allowed) != 0) continue;
            if (!(x.at(e) == f.one())) continue;
            if (hit != nullptr && !(*hit == x)) {
                res.ambiguous = true;
                res.at = e;
                return res;
            }
            hit = &x;
        }
        if (hit == nullptr) {
            res.at = e;
            return res;
        }
        res.forms.push_back(*hit);
    }
    res.ok = true;
    return res;
}

}  // namespace detail

// Fundamental circuit form at a support basis B: for each element e of the
// complementary transversal B* (in ascending element order), the unique
// member supported inside B △ {e, e*} with value one at e.  Throws when a
// member is missing or when two distinct members qualify.
inline std::vector<TractVector> fundamental_circuit_form(const VectorFamily& v, mask_t b) {
    detail::FormSearch fs = detail::find_circuit_form(v, b);
    if (fs.ok) return std::move(fs.forms);
    const std::string where =
        "basis " + format_set(v.n(), b) + ", element " + format_elem(v.n(), fs.at);
    if (fs.ambiguous)
        throw error("fundamental circuit vector at " + where + " is not unique");
    throw error("no fundamental circuit vector at " + where);
}

struct VectorCheck {
    bool ok = true;
    std::string axiom;   // "V1", "V2" or "V3" when not ok
    std::string reason;
};

// Decide whether the family is closed under the three vector-family axioms:
//   V1  elementary vectors meeting in at most two support positions after
//       starring pair to a null sum,
//   V2  a support basis exists and every support basis carries a full
//       fundamental circuit form,
//   V3  the family is exactly the set of vectors whose conjugated profile
//       lies in the span of the conjugated fundamental circuit forms at
//       every support basis.
// The converse half of V3 sweeps the whole coordinate space, so the tract
// must be finite and small enough for the enumeration bound.
inline VectorCheck check_vector_set(const VectorFamily& v) {
    const Tract& f = v.tract();
    const int n = v.n();
    require_enumerable(f, n);

    std::vector<TractVector> elems = elementary_vectors(v);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i; j < elems.size(); ++j) {
            int overlap = popcount(elems[i].support() & star_set(n, elems[j].support()));
            if (overlap == 0 || overlap > 2) continue;
            if (!orthogonal_star(elems[i], elems[j]))
                return {false, "V1",
                        "elementary vectors " + elems[i].format() + " and " +
                            elems[j].format() + " pair to the non-null sum " +
                            format_sum(f, inner_product_star(elems[i], elems[j]))};
        }

    std::vector<mask_t> bases = support_bases(v);
    if (bases.empty()) return {false, "V2", "no support basis exists"};
    std::vector<std::vector<TractVector>> spans;  // conjugated forms per basis
    for (mask_t b : bases) {
        detail::FormSearch fs = detail::find_circuit_form(v, b);
        const std::string where =
            "basis " + format_set(n, b) + ", element " + format_elem(n, fs.at);
        if (fs.ambiguous)
            return {false, "V3", "fundamental circuit vector at " + where +
                                     " is not unique, so no span can cut out the family"};
        if (!fs.ok) return {false, "V2", "no fundamental circuit vector at " + where};
        std::vector<TractVector> gens;
        gens.reserve(fs.forms.size());
        for (const TractVector& x : fs.forms) gens.push_back(x.conjed());
        spans.push_back(std::move(gens));
    }

    for (const TractVector& x : v.members())
        for (std::size_t k = 0; k < bases.size(); ++k)
            if (!span_contains(f, n, x.conjed(), spans[k]).ok)
                return {false, "V3",
                        "member " + x.format() +
                            " is outside the span of the fundamental circuit form at basis " +
                            format_set(n, bases[k])};

    VectorCheck out;
    for_each_vector(f, n, [&](const TractVector& x) {
        if (!out.ok) return;
        for (const std::vector<TractVector>& gens : spans)
            if (!span_contains(f, n, x.conjed(), gens).ok) return;
        if (!v.contains(x))
            out = {false, "V3",
                   "vector " + x.format() +
                       " satisfies the span characterization at every support basis "
                       "but is not in the family"};
    });
    return out;
}

struct VectorMinor {
    VectorFamily family;
    VectorCheck check;  // whether the projected family still satisfies V1-V3
};

// Minor at e: members vanishing at e* are projected off the coordinate pair
// of e.  The projection can fail the vector-family axioms, so the result
// carries the verdict instead of throwing; when the axioms cannot be decided
// (tract too large to sweep), the verdict says so with ok = false.
inline VectorMinor vector_minor(const VectorFamily& v, elem_t e) {
    const int n = v.n();
    if (e < 0 || e >= 2 * n) throw error("minor element out of range");
    if (n == 1) throw error("minor would empty the ground set");
    const elem_t es = star_elem(n, e);
    std::vector<TractVector> kept;
    for (const TractVector& x : v.members())
        if (is_zero(x.at(es))) kept.push_back(project_pair(x, e));
    VectorFamily out(v.tract(), n - 1, std::move(kept));
    VectorCheck check;
    try {
        check = check_vector_set(out);
    } catch (const error& ex) {
        check = {false, "", std::string("axioms not decidable: ") + ex.what()};
    }
    return {std::move(out), std::move(check)};
}

// Componentwise image under a tract homomorphism, closed under unit scaling
// of the target through the conjugation-aware action.  The homomorphism must
// commute with the involutions.
inline VectorFamily pushforward(const TractHom& h, const VectorFamily& v) {
    if (!v.tract().same(h.source()))
        throw error("pushforward homomorphism has source " + h.source().name() +
                    ", expected " + v.tract().name());
    if (!h.involution_compatible())
        throw error("pushforward of a vector family needs a homomorphism that commutes "
                    "with the involutions");
    const Tract& g = h.target();
    const int n = v.n();
    std::vector<TractVector> out;
    for (const TractVector& x : v.members()) {
        TractVector y(g, n);
        for (elem_t e = 0; e < 2 * n; ++e) y.set(e, h.map(x.at(e)));
        for (int i = 0; i < g.unit_count(); ++i) out.push_back(y.conj_scaled(g.unit_at(i)));
    }
    return VectorFamily(g, n, std::move(out));
}

// Whether the family is a Lagrangian subspace of F^E over a field F: it
// contains zero, is closed under addition and scalar multiples, has exactly
// |F|^n members, and all starred pairings of members vanish.
inline bool is_lagrangian(const VectorFamily& v) {
    const Tract& f = v.tract();
    if (!f.is_field()) throw error("Lagrangian test requires a field, got " + f.name());
    const int n = v.n();
    if (!v.contains(TractVector(f, n))) return false;

    const std::uint64_t q = static_cast<std::uint64_t>(f.unit_count()) + 1;
    std::uint64_t expect = 1;
    for (int i = 0; i < n; ++i) {
        expect *= q;
        if (expect > enumeration_bound) throw error("Lagrangian size check would overflow");
    }
    if (v.size() != expect) return false;

    const std::vector<TractVector>& xs = v.members();
    for (const TractVector& x : xs)
        for (int i = 0; i < f.unit_count(); ++i)
            if (!v.contains(x.scaled(f.unit_at(i)))) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i; j < xs.size(); ++j) {
            if (!v.contains(add_field(xs[i], xs[j]))) return false;
            if (!orthogonal_star(xs[i], xs[j])) return false;
        }
    return true;
}

// The circuit signature whose members are the elementary vectors of the
// family; its matroid has the family's support bases as bases.  Throws when
// the support bases fail the basis exchange law or the elementary supports
// are not exactly the resulting circuits.
inline Signature elementary_signature(const VectorFamily& v) {
    std::vector<mask_t> bases = support_bases(v);
    if (bases.empty()) throw error("family has no support basis");
    OrthoMatroid m(v.n(), std::move(bases));
    return Signature(v.tract(), m, elementary_vectors(v));
}

}  // namespace omt
