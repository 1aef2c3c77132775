#pragma once

// Wick functions: transversal-indexed coordinate functions over a tract,
// the three nested exchange-relation checks, duality, minors, pushforwards,
// products, and the bridge to rank-indexed basis functions on lifts.

#include <map>
#include <string>
#include <vector>

#include "ground_set.hpp"
#include "ortho_matroid.hpp"
#include "tract.hpp"
#include "tract_hom.hpp"
#include "tract_vector.hpp"

namespace omt {

enum class WickLevel { Strong, Moderate, Weak };

inline std::string wick_level_name(WickLevel l) {
    switch (l) {
        case WickLevel::Strong: return "strong";
        case WickLevel::Moderate: return "moderate";
        case WickLevel::Weak: return "weak";
    }
    return "?";
}

class WickFunction {
    Tract f_;
    int n_ = 0;
    std::map<mask_t, Elt> vals_;  // nonzero entries only, scaled to 1 at the anchor

public:
    WickFunction(Tract f, int n, const std::map<mask_t, Elt>& vals) : f_(std::move(f)), n_(n) {
        if (n < 0 || n > max_n) throw error("ground set size out of range");
        if (vals.empty()) throw error("a Wick function cannot be identically zero");
        for (const auto& [t, v] : vals) {
            if (!is_transversal(n_, t))
                throw error("Wick support entry is not a transversal: " + format_set(n_, t));
            if (is_zero(v)) continue;
            f_.require_valid(v);
            vals_[t] = v;
        }
        if (vals_.empty()) throw error("a Wick function cannot be identically zero");
        Elt pivot = vals_.at(anchor());
        if (!(pivot == f_.one())) {
            Elt inv = f_.inv(pivot);
            for (auto& [t, v] : vals_) v = f_.mul(inv, v);
        }
    }

    static WickFunction indicator(const Tract& f, const OrthoMatroid& m) {
        std::map<mask_t, Elt> vals;
        for (mask_t b : m.bases()) vals[b] = f.one();
        return WickFunction(f, m.n(), vals);
    }

    const Tract& tract() const { return f_; }
    int n() const { return n_; }
    const std::map<mask_t, Elt>& entries() const { return vals_; }

    // the lexicographically least support transversal, where all values are
    // scaled so that this one reads 1
    mask_t anchor() const {
        mask_t best = vals_.begin()->first;
        for (const auto& [t, v] : vals_)
            if (lex_less(t, best)) best = t;
        return best;
    }

    Elt value(mask_t t) const {
        if (!is_transversal(n_, t))
            throw error("Wick functions are defined on transversals, got " + format_set(n_, t));
        auto it = vals_.find(t);
        return it == vals_.end() ? elt_zero : it->second;
    }

    std::vector<mask_t> support() const {
        std::vector<mask_t> out;
        out.reserve(vals_.size());
        for (const auto& [t, v] : vals_) out.push_back(t);
        return out;
    }

    bool equivalent(const WickFunction& o) const {
        return n_ == o.n_ && f_.same(o.f_) && vals_ == o.vals_;
    }

    OrthoMatroid underlying_matroid() const { return OrthoMatroid(n_, support()); }

    WickFunction dual() const {
        std::map<mask_t, Elt> vals;
        for (const auto& [t, v] : vals_) vals[star_set(n_, t)] = v;
        return WickFunction(f_, n_, vals);
    }

    // restriction to E minus {e,e*}: read off values with e pinned into the
    // transversal, redirecting to e* when e lies in no support transversal
    WickFunction minor(elem_t e) const {
        if (n_ == 0) throw error("minor of an empty ground set");
        if (e < 0 || e >= 2 * n_) throw error("minor element out of range");
        OrthoMatroid m = underlying_matroid();
        elem_t applied = m.singular(e) ? star_elem(n_, e) : e;
        int p = position_of(n_, applied);
        std::map<mask_t, Elt> vals;
        for (const auto& [t, v] : vals_)
            if (t & elem_mask(applied))
                vals[squeeze_position(n_, t & ~elem_mask(applied), p)] = v;
        return WickFunction(f_, n_ - 1, vals);
    }

    WickFunction minor_set(mask_t s) const {
        if (s & ~full_set(n_)) throw error("minor set outside ground set");
        if (((s & low_mask(n_)) & (s >> n_)) != 0)
            throw error("minor set names both an element and its star: " + format_set(n_, s));
        std::vector<elem_t> elems = set_elems(s);
        std::sort(elems.begin(), elems.end(), [&](elem_t a, elem_t b) {
            return position_of(n_, a) > position_of(n_, b);
        });
        WickFunction cur = *this;
        int removed = 0;
        for (elem_t e : elems) {
            int p = position_of(n_, e);
            elem_t in_cur = (e < n_) ? p : p + (n_ - removed);
            cur = cur.minor(in_cur);
            ++removed;
        }
        return cur;
    }

    WickFunction pushforward(const TractHom& h) const {
        if (!h.source().same(f_))
            throw error("pushforward hom expects source " + f_.name() + ", got " +
                        h.source().name());
        std::map<mask_t, Elt> vals;
        for (const auto& [t, v] : vals_) vals[t] = h.map(v);
        return WickFunction(h.target(), n_, vals);
    }
};

inline WickFunction product_wick(const WickFunction& a, const WickFunction& b) {
    if (a.n() != b.n()) throw error("product of Wick functions needs one ground set");
    if (a.support() != b.support())
        throw error("product of Wick functions needs equal supports");
    Tract p = Tract::product(a.tract(), b.tract());
    std::map<mask_t, Elt> vals;
    // pack componentwise: left index * right unit count + right index
    for (const auto& [t, v] : a.entries()) {
        int li = a.tract().index_of(v);
        int ri = b.tract().index_of(b.entries().at(t));
        vals[t] = p.unit_at(li * b.tract().unit_count() + ri);
    }
    return WickFunction(p, a.n(), vals);
}

struct WickPairSum {
    FormalSum sum;
    int divergence = 0;  // positions where the two transversals differ
    int nonzero = 0;     // terms with both factors nonzero
};

// the exchange relation sum between two transversals: over the divergent
// positions x_1 < ... < x_m, sum of (-1)^k phi(T1 ^ {x_k,x_k*}) phi(T2 ^ {x_k,x_k*})
inline WickPairSum wick_pair(const WickFunction& w, mask_t t1, mask_t t2) {
    if (!is_transversal(w.n(), t1) || !is_transversal(w.n(), t2))
        throw error("wick_pair expects transversals");
    WickPairSum out;
    mask_t d = (t1 ^ t2) & low_mask(w.n());
    out.divergence = popcount(d);
    int k = 0;
    for (elem_t p : set_elems(d)) {
        ++k;
        Elt u = w.value(t1 ^ pair_mask(w.n(), p));
        if (is_zero(u)) continue;
        Elt v = w.value(t2 ^ pair_mask(w.n(), p));
        if (is_zero(v)) continue;
        ++out.nonzero;
        out.sum.add(w.tract().mul(w.tract().sign_pow(k), w.tract().mul(u, v)));
    }
    return out;
}

struct WickCheck {
    bool ok = true;
    mask_t t1 = 0, t2 = 0;
    std::string reason;
};

// Strong: the relation sum is null for every transversal pair.
// Moderate: it is null whenever at most four terms are nonzero; requires the
//           support to be the basis family of an orthogonal matroid.
// Weak: it is null whenever exactly four positions diverge; same requirement.
inline WickCheck check_wick(const WickFunction& w, WickLevel level) {
    int n = w.n();
    if (level != WickLevel::Strong)
        w.underlying_matroid();  // throws when the support is not such a family

    // per-transversal mask of positions whose flip lands in the support
    std::vector<mask_t> active(std::size_t{1} << n, 0);
    for (mask_t lo = 0; lo <= low_mask(n) && n > 0; ++lo) {
        mask_t t = transversal_from_lo(n, lo);
        for (int p = 0; p < n; ++p)
            if (!is_zero(w.value(t ^ pair_mask(n, p)))) active[lo] |= elem_mask(p);
    }

    for (mask_t lo1 = 0; lo1 <= low_mask(n) && n > 0; ++lo1)
        for (mask_t lo2 = lo1 + 1; lo2 <= low_mask(n); ++lo2) {
            mask_t d = lo1 ^ lo2;
            mask_t act = active[lo1] & active[lo2] & d;
            bool must_hold = false;
            switch (level) {
                case WickLevel::Strong: must_hold = act != 0; break;
                case WickLevel::Moderate: must_hold = act != 0 && popcount(act) <= 4; break;
                case WickLevel::Weak: must_hold = act != 0 && popcount(d) == 4; break;
            }
            if (!must_hold) continue;
            mask_t t1 = transversal_from_lo(n, lo1), t2 = transversal_from_lo(n, lo2);
            WickPairSum ps = wick_pair(w, t1, t2);
            if (!w.tract().is_null(ps.sum)) {
                WickCheck bad;
                bad.ok = false;
                bad.t1 = t1;
                bad.t2 = t2;
                bad.reason = wick_level_name(level) + " relation fails for (" +
                             format_set(n, t1) + ", " + format_set(n, t2) +
                             "): " + format_sum(w.tract(), ps.sum);
                return bad;
            }
        }
    return {};
}

// rank-indexed basis function on [n]: values on r-subsets, alternating in
// argument order, zero on repeated arguments
class GPFunction {
    Tract f_;
    int n_ = 0, r_ = 0;
    std::map<mask_t, Elt> vals_;  // keys are subsets of [n] with popcount r

public:
    GPFunction(Tract f, int n, int r, const std::map<mask_t, Elt>& vals)
        : f_(std::move(f)), n_(n), r_(r) {
        if (n < 0 || n > max_n) throw error("ground set size out of range");
        if (r < 0 || r > n) throw error("rank out of range");
        for (const auto& [s, v] : vals) {
            if ((s & ~low_mask(n_)) != 0 || popcount(s) != r_)
                throw error("basis-function key is not an r-subset: " + format_set(n_, s));
            if (is_zero(v)) continue;
            f_.require_valid(v);
            vals_[s] = v;
        }
        if (vals_.empty()) throw error("a basis function cannot be identically zero");
    }

    const Tract& tract() const { return f_; }
    int n() const { return n_; }
    int rank() const { return r_; }
    const std::map<mask_t, Elt>& entries() const { return vals_; }

    Elt value_subset(mask_t s) const {
        auto it = vals_.find(s);
        return it == vals_.end() ? elt_zero : it->second;
    }

    // alternating evaluation on an argument sequence of elements of [n]
    Elt value(const std::vector<elem_t>& seq) const {
        if (static_cast<int>(seq.size()) != r_) throw error("argument count differs from rank");
        mask_t s = 0;
        int inversions = 0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            elem_t e = seq[i];
            if (e < 0 || e >= n_) throw error("argument outside [n]");
            if (s & elem_mask(e)) return elt_zero;  // repeated argument
            s |= elem_mask(e);
            for (std::size_t j = i + 1; j < seq.size(); ++j)
                if (seq[j] < e) ++inversions;
        }
        Elt v = value_subset(s);
        if (is_zero(v)) return v;
        return f_.mul(f_.sign_pow(inversions), v);
    }
};

// Wick function of a basis function: value at B u ([n] minus B)* is the value
// at B, zero off the constant-rank layer
inline WickFunction wick_from_gp(const GPFunction& g) {
    std::map<mask_t, Elt> vals;
    for (const auto& [s, v] : g.entries()) vals[transversal_from_lo(g.n(), s)] = v;
    return WickFunction(g.tract(), g.n(), vals);
}

// inverse direction; requires every support transversal to carry the same
// number of unstarred elements
inline GPFunction gp_from_wick(const WickFunction& w) {
    int r = -1;
    std::map<mask_t, Elt> vals;
    for (const auto& [t, v] : w.entries()) {
        mask_t s = t & low_mask(w.n());
        if (r < 0) r = popcount(s);
        if (popcount(s) != r)
            throw error("support is not on one rank layer: " + format_set(w.n(), t) +
                        " vs rank " + std::to_string(r));
        vals[s] = v;
    }
    return GPFunction(w.tract(), w.n(), r, vals);
}

}  // namespace omt
