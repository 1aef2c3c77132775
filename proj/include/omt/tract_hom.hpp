#pragma once

// Homomorphisms between tracts: unit-group homomorphisms that carry null sums
// to null sums.  Construction validates multiplicativity exhaustively and
// null preservation over all unit multisets up to a length bound.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tract.hpp"

namespace omt {

inline constexpr int hom_check_length = 8;

class TractHom {
    Tract src_, tgt_;
    std::vector<Elt> images_;  // by source unit index
    std::string label_;

    void validate(int check_len) const {
        int m = src_.unit_count();
        if (static_cast<int>(images_.size()) != m) throw error("hom image list has wrong size");
        for (const Elt& im : images_)
            if (is_zero(im) || !tgt_.valid(im)) throw error("hom image is not a target unit");
        if (!(map(src_.one()) == tgt_.one())) throw error("hom does not fix 1");
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Elt prod = src_.mul(src_.unit_at(i), src_.unit_at(j));
                if (!(map(prod) == tgt_.mul(images_[i], images_[j])))
                    throw error("hom is not multiplicative");
            }
        // null preservation over all unit multisets of length <= bound
        int bound = check_len;
        if (src_.null_bound() >= 0) bound = std::min(bound, src_.null_bound());
        if (tgt_.null_bound() >= 0) bound = std::min(bound, tgt_.null_bound());
        std::vector<int> pick;
        check_multisets(pick, 0, bound);
    }

    void check_multisets(std::vector<int>& pick, int from, int remaining) const {
        if (!pick.empty()) {
            FormalSum s, t;
            for (int idx : pick) {
                s.add(src_.unit_at(idx));
                t.add(images_[idx]);
            }
            if (src_.is_null(s) && !tgt_.is_null(t))
                throw error("hom does not preserve null sums (length " +
                            std::to_string(pick.size()) + ")");
        }
        if (remaining == 0) return;
        for (int i = from; i < src_.unit_count(); ++i) {
            pick.push_back(i);
            check_multisets(pick, i, remaining - 1);
            pick.pop_back();
        }
    }

public:
    TractHom(Tract src, Tract tgt, std::vector<Elt> images, std::string label = "",
             int check_len = hom_check_length)
        : src_(std::move(src)), tgt_(std::move(tgt)), images_(std::move(images)),
          label_(std::move(label)) {
        if (!src_.finite()) {
            // only the terminal map can be certified from an infinite tract
            if (tgt_.name() != "K")
                throw error("homs from an infinite tract are limited to the terminal map");
            return;
        }
        validate(check_len);
    }

    static std::optional<TractHom> try_make(const Tract& src, const Tract& tgt,
                                            std::vector<Elt> images, std::string label = "",
                                            int check_len = hom_check_length) {
        try {
            return TractHom(src, tgt, std::move(images), std::move(label), check_len);
        } catch (const error&) {
            return std::nullopt;
        }
    }

    const Tract& source() const { return src_; }
    const Tract& target() const { return tgt_; }
    const std::string& label() const { return label_; }

    Elt map(Elt x) const {
        if (is_zero(x)) return elt_zero;
        if (!src_.finite()) return tgt_.one();  // terminal map
        return images_[src_.index_of(x)];
    }
    Elt operator()(Elt x) const { return map(x); }

    FormalSum map(const FormalSum& s) const {
        FormalSum out;
        for (Elt t : s.terms) out.add(map(t));
        return out;
    }

    bool involution_compatible() const {
        if (!src_.finite()) return true;
        for (int i = 0; i < src_.unit_count(); ++i) {
            Elt u = src_.unit_at(i);
            if (!(map(src_.conj(u)) == tgt_.conj(map(u)))) return false;
        }
        return true;
    }
};

inline TractHom identity_hom(const Tract& t) {
    std::vector<Elt> images;
    for (int i = 0; i < t.unit_count(); ++i) images.push_back(t.unit_at(i));
    return TractHom(t, t, std::move(images), "id");
}

inline TractHom terminal_hom(const Tract& src) {
    Tract k = Tract::krasner();
    std::vector<Elt> images;
    if (src.finite())
        images.assign(static_cast<std::size_t>(src.unit_count()), k.one());
    return TractHom(src, k, std::move(images), src.name() + "->K");
}

inline TractHom compose_hom(const TractHom& g, const TractHom& f) {
    if (!f.target().same(g.source()))
        throw error("hom composition mismatch: " + f.target().name() + " vs " + g.source().name());
    std::vector<Elt> images;
    for (int i = 0; i < f.source().unit_count(); ++i)
        images.push_back(g.map(f.map(f.source().unit_at(i))));
    return TractHom(f.source(), g.target(), std::move(images),
                    g.label() + " o " + f.label());
}

// projection of product(L,R) onto one factor
inline TractHom product_projection(const Tract& prod, int which) {
    auto* pi = dynamic_cast<const detail::ProductImpl*>(&prod.impl());
    if (!pi) throw error("product_projection needs a product tract");
    const Tract& fac = which == 0 ? pi->left() : pi->right();
    std::vector<Elt> images;
    for (int i = 0; i < prod.unit_count(); ++i) {
        auto [l, r] = pi->unpack(prod.unit_at(i));
        images.push_back(which == 0 ? l : r);
    }
    return TractHom(prod, fac, std::move(images), "proj" + std::to_string(which));
}

// pairing of f: F -> L and g: F -> R into F -> product(L,R)
inline TractHom product_pairing(const TractHom& f, const TractHom& g, const Tract& prod) {
    if (!f.source().same(g.source())) throw error("pairing requires a common source");
    auto* pi = dynamic_cast<const detail::ProductImpl*>(&prod.impl());
    if (!pi || !pi->left().same(f.target()) || !pi->right().same(g.target()))
        throw error("pairing target mismatch");
    std::vector<Elt> images;
    for (int i = 0; i < f.source().unit_count(); ++i) {
        Elt u = f.source().unit_at(i);
        images.push_back(pi->pack(f.map(u), g.map(u)));
    }
    return TractHom(f.source(), prod, std::move(images), "(" + f.label() + "," + g.label() + ")");
}

// Exhaustive search for a multiplicative, null-preserving map; optionally a
// bijection whose inverse also preserves null sums up to inverse_check_len.
// (A group isomorphism need not preserve nulls equally far in both
// directions; R6 -> F3 x F4 preserves sums of any length that arises here,
// while its inverse is only guaranteed for sums of length <= 3.)
inline std::optional<TractHom> hom_search(const Tract& src, const Tract& tgt,
                                          bool bijective = false,
                                          int check_len = 6,
                                          int inverse_check_len = -1) {
    if (!src.finite() || !tgt.finite()) return std::nullopt;
    if (inverse_check_len < 0) inverse_check_len = check_len;
    int m = src.unit_count(), mt = tgt.unit_count();
    if (bijective && m != mt) return std::nullopt;
    std::vector<int> img(m, -1);  // target unit indices
    std::vector<bool> used(mt, false);

    std::function<std::optional<TractHom>(int)> rec = [&](int k) -> std::optional<TractHom> {
        if (k == m) {
            std::vector<Elt> images;
            for (int i : img) images.push_back(tgt.unit_at(i));
            auto h = TractHom::try_make(src, tgt, images, src.name() + "->" + tgt.name(),
                                        check_len);
            if (!h) return std::nullopt;
            if (bijective) {
                std::vector<Elt> back(m);
                for (int i = 0; i < m; ++i) back[img[i]] = src.unit_at(i);
                if (!TractHom::try_make(tgt, src, back, "inverse", inverse_check_len))
                    return std::nullopt;
            }
            return h;
        }
        for (int c = 0; c < mt; ++c) {
            if (bijective && used[c]) continue;
            img[k] = c;
            // partial multiplicativity over already-assigned units
            bool ok = true;
            for (int i = 0; i <= k && ok; ++i)
                for (int j = 0; j <= k && ok; ++j) {
                    int pk = src.index_of(src.mul(src.unit_at(i), src.unit_at(j)));
                    if (pk <= k) {
                        Elt want = tgt.mul(tgt.unit_at(img[i]), tgt.unit_at(img[j]));
                        if (!(tgt.unit_at(img[pk]) == want)) ok = false;
                    }
                }
            if (ok) {
                used[c] = true;
                if (auto h = rec(k + 1)) return h;
                used[c] = false;
            }
        }
        img[k] = -1;
        return std::nullopt;
    };
    return rec(0);
}

// Builtin hom lookup by tract pair, used by the CLI's push verb.
inline std::optional<TractHom> find_hom(const Tract& src, const Tract& tgt) {
    if (src.same(tgt)) return identity_hom(src);
    if (tgt.name() == "K") return terminal_hom(src);
    std::string sn = src.name(), tn = tgt.name();
    // sign-like sources: 1 -> 1, -1 -> eps
    if (sn == "U0" || sn == "I" || sn == "S")
        return TractHom::try_make(src, tgt, {tgt.one(), tgt.eps()}, sn + "->" + tn);
    // prime subfield embeddings F_p -> F_{p^k} (payloads agree on residues)
    if (sn.size() >= 2 && sn[0] == 'F' && tn.size() >= 2 && tn[0] == 'F') {
        std::vector<Elt> images;
        bool ok = true;
        for (int i = 0; i < src.unit_count() && ok; ++i) {
            Elt u = src.unit_at(i);
            if (tgt.valid(u))
                images.push_back(u);
            else
                ok = false;
        }
        if (ok)
            if (auto h = TractHom::try_make(src, tgt, images, sn + "->" + tn)) return h;
    }
    // R6 -> F: send z to a root of x^2 - x + 1
    if (sn == "R6" && tgt.finite()) {
        for (int c = 0; c < tgt.unit_count(); ++c) {
            Elt x = tgt.unit_at(c);
            FormalSum rel{tgt.mul(x, x), tgt.mul(tgt.eps(), x), tgt.one()};
            if (!tgt.is_null(rel)) continue;
            std::vector<Elt> images;
            Elt pow = tgt.one();
            for (int k = 0; k < 6; ++k) {
                images.push_back(pow);
                pow = tgt.mul(pow, x);
            }
            if (auto h = TractHom::try_make(src, tgt, images, "R6->" + tn)) return h;
        }
        return std::nullopt;
    }
    // fall back to exhaustive search
    return hom_search(src, tgt);
}

// The unit groups of R6 and F3 x F4 are both cyclic of order 6, and the
// generator correspondence matches null sums exactly as far as each
// direction allows: every null sum of length <= 6 in R6 maps to a null sum
// in F3 x F4, while the reverse direction holds for length <= 3 and provably
// no further (1|1 + 1|1 + 2|2 + 2|2 is null componentwise, but its preimage
// 1 + 1 + z + z is not null in Z[z], and every generator choice hits an
// analogous sum). Both maps are discovered by exhaustive search over
// generator images and validated on construction; anything transported
// through to_r6 must be re-verified in full on the R6 side by the caller.
struct R6ProductIso {
    TractHom to_product;  // R6 -> F3 x F4, null-preserving for length <= 6
    TractHom to_r6;       // F3 x F4 -> R6, null-preserving for length <= 3
};

inline const R6ProductIso& r6_product_iso() {
    static const R6ProductIso iso = [] {
        Tract r6 = Tract::sixth_root();
        Tract prod = Tract::product(Tract::finite_field(3), Tract::finite_field(4));
        auto fwd = hom_search(r6, prod, /*bijective=*/true, /*check_len=*/6,
                              /*inverse_check_len=*/3);
        if (!fwd) throw error("no order-6 generator correspondence R6 <-> F3 x F4");
        std::vector<Elt> back(prod.unit_count());
        for (int i = 0; i < r6.unit_count(); ++i)
            back[prod.index_of(fwd->map(r6.unit_at(i)))] = r6.unit_at(i);
        auto inv = TractHom::try_make(prod, r6, back, "product(F3,F4)->R6", 3);
        if (!inv) throw error("R6 correspondence inverse failed length-3 validation");
        return R6ProductIso{*fwd, *inv};
    }();
    return iso;
}

}  // namespace omt
