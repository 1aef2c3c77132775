#pragma once

// Coordinate vectors over a tract on the ground set [n] u [n]*: star and
// conjugation operators, the two equivalent inner-product forms, and linear
// span membership by coefficient search with forced-value propagation.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ground_set.hpp"
#include "tract.hpp"

namespace omt {

class TractVector {
    Tract f_;
    int n_ = 0;
    std::vector<Elt> v_;

public:
    TractVector(Tract f, int n) : f_(std::move(f)), n_(n) {
        if (n < 0 || n > max_n) throw error("vector size out of range");
        v_.assign(static_cast<std::size_t>(2 * n), elt_zero);
    }
    TractVector(Tract f, int n, std::vector<Elt> vals) : f_(std::move(f)), n_(n), v_(std::move(vals)) {
        if (n < 0 || n > max_n) throw error("vector size out of range");
        if (static_cast<int>(v_.size()) != 2 * n) throw error("vector has wrong coordinate count");
        for (Elt x : v_) f_.require_valid(x);
    }

    const Tract& tract() const { return f_; }
    int n() const { return n_; }

    Elt at(elem_t e) const {
        if (e < 0 || e >= 2 * n_) throw error("vector coordinate out of range");
        return v_[static_cast<std::size_t>(e)];
    }
    void set(elem_t e, Elt x) {
        if (e < 0 || e >= 2 * n_) throw error("vector coordinate out of range");
        f_.require_valid(x);
        v_[static_cast<std::size_t>(e)] = x;
    }

    mask_t support() const {
        mask_t m = 0;
        for (elem_t e = 0; e < 2 * n_; ++e)
            if (!is_zero(v_[static_cast<std::size_t>(e)])) m |= elem_mask(e);
        return m;
    }
    bool is_zero_vector() const { return support() == 0; }

    // X*(i) = X(i*)
    TractVector star() const {
        TractVector out(f_, n_);
        for (elem_t e = 0; e < 2 * n_; ++e) out.v_[static_cast<std::size_t>(e)] = at(star_elem(n_, e));
        return out;
    }

    // identity on unstarred coordinates, the involution on starred ones
    TractVector conjed() const {
        TractVector out = *this;
        for (elem_t e = n_; e < 2 * n_; ++e)
            out.v_[static_cast<std::size_t>(e)] = f_.conj(out.v_[static_cast<std::size_t>(e)]);
        return out;
    }

    TractVector scaled(Elt c) const {
        f_.require_valid(c);
        TractVector out(f_, n_);
        if (is_zero(c)) return out;
        for (elem_t e = 0; e < 2 * n_; ++e)
            if (!is_zero(v_[static_cast<std::size_t>(e)]))
                out.v_[static_cast<std::size_t>(e)] = f_.mul(c, v_[static_cast<std::size_t>(e)]);
        return out;
    }

    // plain coordinates scaled by c and starred ones by the involution image
    // of c, so the conjugated profile conjed() is scaled uniformly by c; this
    // action keeps every pairing and span relation intact, and it coincides
    // with scaled(c) when the involution is trivial or the support lies on
    // one half of the ground set
    TractVector conj_scaled(Elt c) const {
        f_.require_valid(c);
        TractVector out(f_, n_);
        if (is_zero(c)) return out;
        Elt cc = f_.conj(c);
        for (elem_t e = 0; e < 2 * n_; ++e)
            if (!is_zero(v_[static_cast<std::size_t>(e)]))
                out.v_[static_cast<std::size_t>(e)] =
                    f_.mul(e < n_ ? c : cc, v_[static_cast<std::size_t>(e)]);
        return out;
    }

    // unit value at the least support element; the zero vector is unchanged
    TractVector normalized() const {
        mask_t s = support();
        if (s == 0) return *this;
        return scaled(f_.inv(at(least_elem(s))));
    }

    // unit value at the least support element via conj_scaled, which also
    // rewrites the rest of the vector's orbit consistently across both halves
    TractVector conj_normalized() const {
        mask_t s = support();
        if (s == 0) return *this;
        elem_t e0 = least_elem(s);
        Elt c = f_.inv(at(e0));
        if (e0 >= n_) c = f_.conj(c);
        return conj_scaled(c);
    }

    friend bool operator==(const TractVector& a, const TractVector& b) {
        return a.n_ == b.n_ && a.v_ == b.v_;
    }

    std::string format() const {
        std::string out = "(";
        for (elem_t e = 0; e < n_; ++e) {
            if (e) out += ",";
            out += f_.format(at(e));
        }
        out += " | ";
        for (elem_t e = n_; e < 2 * n_; ++e) {
            if (e > n_) out += ",";
            out += f_.format(at(e));
        }
        out += ")";
        return out;
    }

    static TractVector parse(const Tract& f, int n, std::string_view text) {
        std::string_view s = text;
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        if (s.size() < 2 || s.front() != '(' || s.back() != ')')
            throw error("vector literal must be parenthesized: " + std::string(text));
        s = s.substr(1, s.size() - 2);
        std::size_t bar = s.find(" | ");
        if (bar == std::string_view::npos)
            throw error("vector literal needs a ' | ' half separator: " + std::string(text));
        auto parse_half = [&](std::string_view part, std::vector<Elt>& out) {
            std::size_t pos = 0;
            while (pos <= part.size()) {
                std::size_t comma = part.find(',', pos);
                std::string_view tok =
                    part.substr(pos, comma == std::string_view::npos ? part.size() - pos : comma - pos);
                while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
                while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
                if (!tok.empty()) out.push_back(f.parse(tok));
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
        };
        std::vector<Elt> lo, hi;
        parse_half(s.substr(0, bar), lo);
        parse_half(s.substr(bar + 3), hi);
        if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
            throw error("vector literal has wrong coordinate count for n=" + std::to_string(n) +
                        ": " + std::string(text));
        lo.insert(lo.end(), hi.begin(), hi.end());
        return TractVector(f, n, std::move(lo));
    }
};

inline FormalSum conj_sum(const Tract& f, const FormalSum& s) {
    FormalSum out;
    for (Elt t : s.terms) out.add(f.conj(t));
    return out;
}

inline std::string format_sum(const Tract& f, const FormalSum& s) {
    if (s.terms.empty()) return "(empty)";
    std::string out;
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        if (i) out += " + ";
        out += f.format(s.terms[i]);
    }
    return out;
}

// <X,Y> = sum over i in [n] of X(i)·conj(Y(i)) + conj(X(i*))·Y(i*)
inline FormalSum inner_product(const TractVector& x, const TractVector& y) {
    if (x.n() != y.n()) throw error("inner product size mismatch");
    const Tract& f = x.tract();
    FormalSum s;
    for (elem_t i = 0; i < x.n(); ++i) {
        if (!is_zero(x.at(i)) && !is_zero(y.at(i))) s.add(f.mul(x.at(i), f.conj(y.at(i))));
        elem_t is = i + x.n();
        if (!is_zero(x.at(is)) && !is_zero(y.at(is))) s.add(f.mul(f.conj(x.at(is)), y.at(is)));
    }
    return s;
}

// <X,Y*> expanded directly: sum over e in E of conj(X)(e)·conj(Y)(e*)
inline FormalSum inner_product_star(const TractVector& x, const TractVector& y) {
    if (x.n() != y.n()) throw error("inner product size mismatch");
    TractVector cx = x.conjed(), cy = y.conjed();
    FormalSum s;
    for (elem_t e = 0; e < 2 * x.n(); ++e) {
        Elt a = cx.at(e), b = cy.at(star_elem(x.n(), e));
        if (!is_zero(a) && !is_zero(b)) s.add(x.tract().mul(a, b));
    }
    return s;
}

inline bool orthogonal_star(const TractVector& x, const TractVector& y) {
    return x.tract().is_null(inner_product_star(x, y));
}

// Drop the coordinate pair of e and squeeze the freed position, leaving a
// vector on a ground set with one element fewer.
inline TractVector project_pair(const TractVector& x, elem_t e) {
    const int n = x.n();
    if (n == 0) throw error("projection from an empty ground set");
    if (e < 0 || e >= 2 * n) throw error("projection element out of range");
    const int p = position_of(n, e);
    TractVector out(x.tract(), n - 1);
    for (elem_t g = 0; g < 2 * n; ++g) {
        if (position_of(n, g) == p) continue;
        int q = position_of(n, g);
        int nq = q > p ? q - 1 : q;
        out.set(g < n ? nq : nq + (n - 1), x.at(g));
    }
    return out;
}

inline TractVector add_field(const TractVector& x, const TractVector& y) {
    if (x.n() != y.n()) throw error("vector sum size mismatch");
    const Tract& f = x.tract();
    if (!f.is_field()) throw error("vector addition requires a field, got " + f.name());
    TractVector out(f, x.n());
    for (elem_t e = 0; e < 2 * x.n(); ++e) out.set(e, f.field_add(x.at(e), y.at(e)));
    return out;
}

struct SpanResult {
    bool ok = false;
    std::vector<Elt> coeffs;  // one per generator when ok
};

// Membership of target in the componentwise linear span of the generators:
// coefficients c_i (zero allowed) with sum_i c_i·G_i(e) - X(e) null at every
// coordinate e.  Coordinates where a single generator is the only nonzero one
// force its coefficient outright; any remaining free coefficients are searched
// exhaustively, which requires a finite unit group.
inline SpanResult span_contains(const Tract& f, int n, const TractVector& target,
                                const std::vector<TractVector>& gens) {
    int k = static_cast<int>(gens.size());
    for (const TractVector& g : gens)
        if (g.n() != n) throw error("span generator size mismatch");
    if (target.n() != n) throw error("span target size mismatch");

    std::vector<std::vector<int>> active(static_cast<std::size_t>(2 * n));
    for (elem_t e = 0; e < 2 * n; ++e)
        for (int i = 0; i < k; ++i)
            if (!is_zero(gens[static_cast<std::size_t>(i)].at(e)))
                active[static_cast<std::size_t>(e)].push_back(i);

    constexpr Elt unset{-1, -1};
    std::vector<Elt> coeff(static_cast<std::size_t>(k), unset);

    // residual nullity at one coordinate, defined only when every active
    // coefficient is known
    auto residual_null = [&](elem_t e) {
        FormalSum s;
        for (int i : active[static_cast<std::size_t>(e)]) {
            Elt c = coeff[static_cast<std::size_t>(i)];
            if (!is_zero(c)) s.add(f.mul(c, gens[static_cast<std::size_t>(i)].at(e)));
        }
        if (!is_zero(target.at(e))) s.add(f.mul(f.eps(), target.at(e)));
        return f.is_null(s);
    };

    // forced coefficients from solo coordinates
    for (elem_t e = 0; e < 2 * n; ++e) {
        if (active[static_cast<std::size_t>(e)].size() != 1) continue;
        int i = active[static_cast<std::size_t>(e)].front();
        Elt g = gens[static_cast<std::size_t>(i)].at(e);
        Elt want = is_zero(target.at(e)) ? elt_zero : f.div(target.at(e), g);
        if (coeff[static_cast<std::size_t>(i)] == unset) {
            coeff[static_cast<std::size_t>(i)] = want;
        } else if (!(coeff[static_cast<std::size_t>(i)] == want)) {
            return {};  // two solo coordinates force contradictory values
        }
    }

    std::vector<int> free_idx;
    for (int i = 0; i < k; ++i)
        if (coeff[static_cast<std::size_t>(i)] == unset) free_idx.push_back(i);
    if (!free_idx.empty() && !f.finite())
        throw error("span search over infinite tract " + f.name() +
                    " needs every coefficient forced by a solo coordinate");

    // coordinates become checkable once their last active generator (in the
    // free order) is assigned; pre-forced-only coordinates are checked first
    std::vector<int> when(static_cast<std::size_t>(2 * n), -1);
    for (elem_t e = 0; e < 2 * n; ++e)
        for (std::size_t d = 0; d < free_idx.size(); ++d)
            for (int i : active[static_cast<std::size_t>(e)])
                if (i == free_idx[d]) when[static_cast<std::size_t>(e)] = std::max(when[static_cast<std::size_t>(e)], static_cast<int>(d));
    for (elem_t e = 0; e < 2 * n; ++e)
        if (when[static_cast<std::size_t>(e)] < 0 && !residual_null(e)) return {};

    std::vector<Elt> candidates{elt_zero};
    if (f.finite())
        for (int i = 0; i < f.unit_count(); ++i) candidates.push_back(f.unit_at(i));

    SpanResult result;
    auto dfs = [&](auto&& self, std::size_t d) -> bool {
        if (d == free_idx.size()) return true;
        for (Elt c : candidates) {
            coeff[static_cast<std::size_t>(free_idx[d])] = c;
            bool ok = true;
            for (elem_t e = 0; e < 2 * n && ok; ++e)
                if (when[static_cast<std::size_t>(e)] == static_cast<int>(d) && !residual_null(e)) ok = false;
            if (ok && self(self, d + 1)) return true;
        }
        coeff[static_cast<std::size_t>(free_idx[d])] = unset;
        return false;
    };
    if (!dfs(dfs, 0)) return {};
    result.ok = true;
    result.coeffs = coeff;
    return result;
}

}  // namespace omt
