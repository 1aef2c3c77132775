#pragma once

// Orthogonal matroids on [n] u [n]*: basis exchange axioms, circuits,
// fundamental circuits, duality, elementary minors, lifts of ordinary
// matroids, twisting, and isomorphism search.

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omt/ground_set.hpp"

namespace omt {

// mask of the divergence {x, x*} at the position of x
inline mask_t pair_mask(int n, elem_t x) {
    int p = position_of(n, x);
    return elem_mask(p) | elem_mask(p + n);
}

// drop position p (0-based) from a mask over [n] u [n]*, shifting higher
// positions down; the result lives on [n-1] u [n-1]*
inline mask_t squeeze_position(int n, mask_t m, int p) {
    mask_t lo = m & low_mask(n), hi = m >> n;
    auto drop = [p](mask_t v) { return (v & low_mask(p)) | ((v >> (p + 1)) << p); };
    return drop(lo) | (drop(hi) << (n - 1));
}

struct ExchangeWitness {
    mask_t b1 = 0, b2 = 0;
    elem_t x = -1;  // the divergence {x, x*} with no partner
};

struct BasisCheck {
    bool ok = true;
    ExchangeWitness witness;
};

// Symmetric exchange over a raw candidate family: every divergence of
// B1 ^ B2 must admit a different divergence whose double swap keeps B1 in
// the family. Throws on empty input or non-transversal members.
inline BasisCheck check_bases(int n, const std::vector<mask_t>& candidate) {
    if (candidate.empty()) throw error("basis family is empty");
    for (mask_t b : candidate)
        if (!is_transversal(n, b))
            throw error("not a transversal: " + format_set(n, b));
    auto member = [&](mask_t b) {
        return std::find(candidate.begin(), candidate.end(), b) != candidate.end();
    };
    for (mask_t b1 : candidate)
        for (mask_t b2 : candidate) {
            mask_t div = (b1 ^ b2) & low_mask(n);  // diverging positions
            for (mask_t dp = div; dp;) {
                int p = std::countr_zero(dp);
                dp &= dp - 1;
                bool found = false;
                for (mask_t dq = div; dq && !found;) {
                    int q = std::countr_zero(dq);
                    dq &= dq - 1;
                    if (q != p && member(b1 ^ pair_mask(n, p) ^ pair_mask(n, q)))
                        found = true;
                }
                if (!found) {
                    elem_t x = (b1 & elem_mask(p)) ? p : p + n;
                    return BasisCheck{false, {b1, b2, x}};
                }
            }
        }
    return BasisCheck{true, {}};
}

// ----------------------------------------------------------------------------
// Ordinary matroids on [n], given by bases (masks over the low n bits).

class Matroid {
public:
    Matroid(int n, std::vector<mask_t> bases) : n_(n), bases_(std::move(bases)) {
        require_n(n_);
        if (bases_.empty()) throw error("matroid basis family is empty");
        std::sort(bases_.begin(), bases_.end());
        bases_.erase(std::unique(bases_.begin(), bases_.end()), bases_.end());
        r_ = popcount(bases_[0]);
        for (mask_t b : bases_) {
            if (b & ~low_mask(n_)) throw error("matroid basis outside ground set");
            if (popcount(b) != r_) throw error("matroid bases of unequal size");
        }
        // basis exchange: for x in B1 \ B2 there is y in B2 \ B1 with
        // B1 - x + y a basis
        for (mask_t b1 : bases_)
            for (mask_t b2 : bases_)
                for (mask_t dx = b1 & ~b2; dx;) {
                    int x = std::countr_zero(dx);
                    dx &= dx - 1;
                    bool found = false;
                    for (mask_t dy = b2 & ~b1; dy && !found;) {
                        int y = std::countr_zero(dy);
                        dy &= dy - 1;
                        if (is_basis((b1 & ~elem_mask(x)) | elem_mask(y))) found = true;
                    }
                    if (!found)
                        throw error("matroid basis exchange fails for " +
                                    format_low_set(b1) + " and " + format_low_set(b2));
                }
    }

    static Matroid uniform(int r, int n) {
        require_n(n);
        if (r < 0 || r > n) throw error("uniform matroid rank out of range");
        std::vector<mask_t> bases;
        for (mask_t m = 0; m <= low_mask(n); ++m)
            if (popcount(m) == r) bases.push_back(m);
        return Matroid(n, std::move(bases));
    }

    // cycle matroid of the complete graph K4; edges labelled
    // 1:12 2:13 3:14 4:23 5:24 6:34, bases are the 16 spanning trees
    static Matroid k4_cycle() {
        const int triangles[4][3] = {{0, 1, 3}, {0, 2, 4}, {1, 2, 5}, {3, 4, 5}};
        std::vector<mask_t> bases;
        for (mask_t m = 0; m <= low_mask(6); ++m) {
            if (popcount(m) != 3) continue;
            bool tri = false;
            for (auto& t : triangles) {
                mask_t tm = elem_mask(t[0]) | elem_mask(t[1]) | elem_mask(t[2]);
                if (m == tm) tri = true;
            }
            if (!tri) bases.push_back(m);
        }
        return Matroid(6, std::move(bases));
    }

    // rank-3 matroid on 7 points whose non-bases are the 7 lines
    // {i, i+1, i+3} (mod 7)
    static Matroid fano() {
        std::vector<mask_t> lines;
        for (int i = 0; i < 7; ++i)
            lines.push_back(elem_mask(i) | elem_mask((i + 1) % 7) | elem_mask((i + 3) % 7));
        std::vector<mask_t> bases;
        for (mask_t m = 0; m <= low_mask(7); ++m) {
            if (popcount(m) != 3) continue;
            if (std::find(lines.begin(), lines.end(), m) == lines.end()) bases.push_back(m);
        }
        return Matroid(7, std::move(bases));
    }

    int n() const { return n_; }
    int rank() const { return r_; }
    const std::vector<mask_t>& bases() const { return bases_; }
    bool is_basis(mask_t m) const { return std::binary_search(bases_.begin(), bases_.end(), m); }
    bool independent(mask_t m) const {
        for (mask_t b : bases_)
            if ((m & ~b) == 0) return true;
        return false;
    }
    bool is_loop(int e) const {
        for (mask_t b : bases_)
            if (b & elem_mask(e)) return false;
        return true;
    }
    bool is_coloop(int e) const {
        for (mask_t b : bases_)
            if (!(b & elem_mask(e))) return false;
        return true;
    }

    Matroid dual() const {
        std::vector<mask_t> out;
        for (mask_t b : bases_) out.push_back(~b & low_mask(n_));
        return Matroid(n_, std::move(out));
    }

    // contraction by element e (0-based); a loop is deleted instead
    Matroid contract(int e) const {
        if (is_loop(e)) return remove(e);
        std::vector<mask_t> out;
        for (mask_t b : bases_)
            if (b & elem_mask(e)) out.push_back(drop_elem(b, e));
        return Matroid(n_ - 1, std::move(out));
    }

    // deletion of element e (0-based); a coloop is contracted instead
    Matroid remove(int e) const {
        if (is_coloop(e)) {
            std::vector<mask_t> out;
            for (mask_t b : bases_) out.push_back(drop_elem(b, e));
            return Matroid(n_ - 1, std::move(out));
        }
        std::vector<mask_t> out;
        for (mask_t b : bases_)
            if (!(b & elem_mask(e))) out.push_back(drop_elem(b, e));
        return Matroid(n_ - 1, std::move(out));
    }

    // minimal dependent subsets of [n]
    std::vector<mask_t> circuits() const {
        std::vector<mask_t> out;
        for (int sz = 1; sz <= std::min(n_, r_ + 1); ++sz)
            for (mask_t m = 0; m <= low_mask(n_); ++m) {
                if (popcount(m) != sz || independent(m)) continue;
                bool minimal = true;
                for (mask_t c : out)
                    if ((c & ~m) == 0) minimal = false;
                if (minimal) out.push_back(m);
            }
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<mask_t> cocircuits() const { return dual().circuits(); }

    bool operator==(const Matroid& o) const { return n_ == o.n_ && bases_ == o.bases_; }

private:
    static mask_t drop_elem(mask_t m, int e) {
        return (m & low_mask(e)) | ((m >> (e + 1)) << e);
    }
    std::string format_low_set(mask_t m) const {
        std::string out;
        for (int i = 0; i < n_; ++i)
            if (m & elem_mask(i)) {
                if (!out.empty()) out += ' ';
                out += std::to_string(i + 1);
            }
        return out.empty() ? "-" : out;
    }
    int n_, r_;
    std::vector<mask_t> bases_;
};

// ----------------------------------------------------------------------------

class OrthoMatroid {
public:
    OrthoMatroid(int n, std::vector<mask_t> bases) : n_(n), bases_(std::move(bases)) {
        if (n_ != 0) require_n(n_);
        std::sort(bases_.begin(), bases_.end());
        bases_.erase(std::unique(bases_.begin(), bases_.end()), bases_.end());
        BasisCheck chk = check_bases_internal();
        if (!chk.ok)
            throw error("symmetric exchange fails for " + format_set(n_, chk.witness.b1) +
                        " and " + format_set(n_, chk.witness.b2) + " at divergence {" +
                        format_elem(n_, chk.witness.x) + ", " +
                        format_elem(n_, star_elem(n_, chk.witness.x)) + "}");
    }

    // bases {a b c*}, {a b* c}, {a* b c} for abc = [3], plus {1* 2* 3*}
    static OrthoMatroid m3() {
        std::vector<mask_t> bases;
        for (int p = 0; p < 3; ++p)
            bases.push_back((low_mask(3) & ~elem_mask(p)) | elem_mask(p + 3));
        bases.push_back(low_mask(3) << 3);
        return OrthoMatroid(3, std::move(bases));
    }

    // bases {a b c d*} and {a* b* c* d} for abcd = [4]
    static OrthoMatroid m4() {
        std::vector<mask_t> bases;
        for (int p = 0; p < 4; ++p) {
            mask_t b = (low_mask(4) & ~elem_mask(p)) | elem_mask(p + 4);
            bases.push_back(b);
            bases.push_back(star_set(4, b));
        }
        return OrthoMatroid(4, std::move(bases));
    }

    // bases B u ([n] \ B)* over the bases B of an ordinary matroid
    static OrthoMatroid lift(const Matroid& m) {
        std::vector<mask_t> bases;
        for (mask_t b : m.bases()) bases.push_back(transversal_from_lo(m.n(), b));
        return OrthoMatroid(m.n(), std::move(bases));
    }

    int n() const { return n_; }
    const std::vector<mask_t>& bases() const { return bases_; }
    bool is_basis(mask_t m) const { return std::binary_search(bases_.begin(), bases_.end(), m); }

    bool independent(mask_t m) const {
        if (!is_admissible(n_, m)) return false;
        for (mask_t b : bases_)
            if ((m & ~b) == 0) return true;
        return false;
    }

    // minimal dependent admissible sets, enumerated by increasing size
    const std::vector<mask_t>& circuits() const {
        std::call_once(caches_->circuits_once, [&] {
            std::vector<mask_t> out;
            if (n_ > 0)
                for (mask_t m : enumerate_admissible(n_)) {
                    if (m == 0 || independent(m)) continue;
                    bool minimal = true;
                    for (mask_t c : out)
                        if ((c & ~m) == 0) minimal = false;
                    if (minimal) out.push_back(m);
                }
            std::sort(out.begin(), out.end());
            caches_->circuits = std::move(out);
        });
        return caches_->circuits;
    }

    bool singular(elem_t x) const {
        for (mask_t b : bases_)
            if (b & elem_mask(x)) return false;
        return true;
    }

    OrthoMatroid dual() const {
        std::vector<mask_t> out;
        for (mask_t b : bases_) out.push_back(star_set(n_, b));
        OrthoMatroid d(n_, std::move(out));
        return d;
    }

    // twisting by a *-closed subset: every basis is replaced by B ^ A
    OrthoMatroid twist(mask_t a) const {
        if (star_set(n_, a) != a)
            throw error("twist set must be closed under *: " + format_set(n_, a));
        std::vector<mask_t> out;
        for (mask_t b : bases_) out.push_back(b ^ a);
        return OrthoMatroid(n_, std::move(out));
    }

    // elementary minor at x; a singular x is redirected to x*, and every
    // step is recorded as (requested, applied) element text for inspection
    OrthoMatroid minor(elem_t x) const {
        if (n_ == 0) throw error("minor of an empty ground set");
        if (x < 0 || x >= 2 * n_) throw error("minor element out of range");
        elem_t applied = singular(x) ? star_elem(n_, x) : x;
        int p = position_of(n_, applied);
        std::vector<mask_t> out;
        for (mask_t b : bases_)
            if (b & elem_mask(applied)) out.push_back(squeeze_position(n_, b & ~elem_mask(applied), p));
        OrthoMatroid res(n_ - 1, std::move(out));
        res.minor_log_ = minor_log_;
        res.minor_log_.emplace_back(format_elem(n_, x), format_elem(n_, applied));
        return res;
    }

    // iterated elementary minor; rejects a request naming both x and x*
    OrthoMatroid minor_set(mask_t s) const {
        if (s & ~full_set(n_)) throw error("minor set outside ground set");
        if (((s & low_mask(n_)) & (s >> n_)) != 0)
            throw error("minor set names both an element and its star: " + format_set(n_, s));
        // remove higher positions first so lower positions keep their labels
        std::vector<elem_t> elems = set_elems(s);
        std::sort(elems.begin(), elems.end(), [&](elem_t a, elem_t b) {
            return position_of(n_, a) > position_of(n_, b);
        });
        OrthoMatroid cur = *this;
        int removed = 0;
        for (elem_t e : elems) {
            int p = position_of(n_, e);
            elem_t in_cur = (e < n_) ? p : p + (n_ - removed);
            cur = cur.minor(in_cur);
            ++removed;
        }
        return cur;
    }

    // the unique circuit inside B u {x}, by the double-swap membership test
    mask_t fundamental_circuit(mask_t b, elem_t x) const {
        if (!is_basis(b)) throw error("fundamental circuit requires a basis");
        if (x < 0 || x >= 2 * n_) throw error("element out of range");
        if (b & elem_mask(x))
            throw error("fundamental circuit requires x outside the basis, got " +
                        format_elem(n_, x));
        mask_t c = elem_mask(x);
        mask_t rest = b & ~elem_mask(star_elem(n_, x));
        for (elem_t e : set_elems(rest))
            if (is_basis(b ^ pair_mask(n_, e) ^ pair_mask(n_, x))) c |= elem_mask(e);
        return c;
    }

    // a transversal T containing the circuit C with T ^ {x,x*} a basis for
    // every x in C; built from a basis covering C minus one element
    mask_t extend_circuit_to_transversal(mask_t c) const {
        const std::vector<mask_t>& circ = circuits();
        if (!std::binary_search(circ.begin(), circ.end(), c))
            throw error("not a circuit: " + format_set(n_, c));
        for (elem_t y : set_elems(c)) {
            mask_t rest = c & ~elem_mask(y);
            for (mask_t b : bases_) {
                if ((rest & ~b) != 0) continue;
                if (b & elem_mask(y)) continue;  // C dependent, so y never in b
                mask_t t = b ^ pair_mask(n_, y);
                bool good = true;
                for (elem_t x : set_elems(c))
                    if (!is_basis(t ^ pair_mask(n_, x))) good = false;
                if (good) return t;
            }
        }
        throw error("no extending transversal found for " + format_set(n_, c));
    }

    // (requested, applied) element labels of every elementary minor taken
    const std::vector<std::pair<std::string, std::string>>& minor_log() const {
        return minor_log_;
    }

    // lexicographically least image of the sorted basis list over all
    // signed permutations; equal keys characterize isomorphism
    const std::vector<mask_t>& canonical_key() const;

    bool operator==(const OrthoMatroid& o) const { return n_ == o.n_ && bases_ == o.bases_; }

private:
    BasisCheck check_bases_internal() const {
        if (bases_.empty()) throw error("basis family is empty");
        for (mask_t b : bases_)
            if (!is_transversal(n_, b))
                throw error("not a transversal: " + format_set(n_, b));
        for (mask_t b1 : bases_)
            for (mask_t b2 : bases_) {
                mask_t div = (b1 ^ b2) & low_mask(n_);
                for (mask_t dp = div; dp;) {
                    int p = std::countr_zero(dp);
                    dp &= dp - 1;
                    bool found = false;
                    for (mask_t dq = div; dq && !found;) {
                        int q = std::countr_zero(dq);
                        dq &= dq - 1;
                        if (q != p && is_basis(b1 ^ pair_mask(n_, p) ^ pair_mask(n_, q)))
                            found = true;
                    }
                    if (!found) {
                        elem_t x = (b1 & elem_mask(p)) ? p : p + n_;
                        return BasisCheck{false, {b1, b2, x}};
                    }
                }
            }
        return BasisCheck{true, {}};
    }

    struct Caches {
        std::once_flag circuits_once, canon_once;
        std::vector<mask_t> circuits;
        std::vector<mask_t> canon;
    };

    int n_;
    std::vector<mask_t> bases_;
    std::vector<std::pair<std::string, std::string>> minor_log_;
    std::shared_ptr<Caches> caches_ = std::make_shared<Caches>();
};

// Strong form: the same partner divergence works from both bases at once.
// Valid inputs always pass; the function re-verifies rather than assumes.
inline bool check_strong_exchange(const OrthoMatroid& m) {
    int n = m.n();
    for (mask_t b1 : m.bases())
        for (mask_t b2 : m.bases()) {
            mask_t div = (b1 ^ b2) & low_mask(n);
            for (mask_t dp = div; dp;) {
                int p = std::countr_zero(dp);
                dp &= dp - 1;
                bool found = false;
                for (mask_t dq = div; dq && !found;) {
                    int q = std::countr_zero(dq);
                    dq &= dq - 1;
                    mask_t sw = pair_mask(n, p) ^ pair_mask(n, q);
                    if (q != p && m.is_basis(b1 ^ sw) && m.is_basis(b2 ^ sw)) found = true;
                }
                if (!found) return false;
            }
        }
    return true;
}

// ----------------------------------------------------------------------------
// Circuit axioms: the five conditions characterizing circuit families.

struct CircuitAxiomCheck {
    bool ok = true;
    std::string axiom;      // "C1".."C5" when ok is false
    mask_t a = 0, b = 0;    // offending sets where applicable
};

inline CircuitAxiomCheck check_circuit_axioms(int n, const std::vector<mask_t>& circuits) {
    require_n(n);
    for (mask_t c : circuits) {
        if (c == 0) return {false, "C1", c, 0};
        if (!is_admissible(n, c)) throw error("circuit not admissible: " + format_set(n, c));
    }
    for (mask_t c1 : circuits)
        for (mask_t c2 : circuits)
            if (c1 != c2 && (c1 & ~c2) == 0) return {false, "C2", c1, c2};
    auto has_subset = [&](mask_t u) {
        for (mask_t c : circuits)
            if ((c & ~u) == 0) return true;
        return false;
    };
    for (mask_t c1 : circuits)
        for (mask_t c2 : circuits) {
            if (c1 == c2) continue;
            mask_t u = c1 | c2;
            if (is_admissible(n, u)) {
                for (elem_t x : set_elems(c1 & c2))
                    if (!has_subset(u & ~elem_mask(x))) return {false, "C3", c1, c2};
            } else {
                int divergences = popcount((u >> n) & u & low_mask(n));
                if (divergences < 2) return {false, "C4", c1, c2};
            }
        }
    for (mask_t t : enumerate_transversals(n))
        for (elem_t x = 0; x < 2 * n; ++x) {
            if (t & elem_mask(x)) continue;
            if (!has_subset(t | elem_mask(x))) return {false, "C5", t, elem_mask(x)};
        }
    return {true, "", 0, 0};
}

// ----------------------------------------------------------------------------
// Isomorphism: bijections respecting * are signed permutations of positions.

struct SignedPerm {
    std::vector<int> to_pos;  // image position of each position
    mask_t flip = 0;          // positions whose star status toggles

    mask_t apply(int n, mask_t m) const {
        mask_t out = 0;
        for (int p = 0; p < n; ++p) {
            bool has_plain = (m & elem_mask(p)) != 0;
            bool has_star = (m & elem_mask(p + n)) != 0;
            bool flipped = (flip & elem_mask(p)) != 0;
            if (has_plain) out |= elem_mask(flipped ? to_pos[p] + n : to_pos[p]);
            if (has_star) out |= elem_mask(flipped ? to_pos[p] : to_pos[p] + n);
        }
        return out;
    }

    std::string describe(int n) const {
        std::string out;
        for (int p = 0; p < n; ++p) {
            if (!out.empty()) out += ' ';
            out += format_elem(n, p) + "->" +
                   format_elem(n, (flip & elem_mask(p)) ? to_pos[p] + n : to_pos[p]);
        }
        return out;
    }
};

inline const std::vector<mask_t>& OrthoMatroid::canonical_key() const {
    std::call_once(caches_->canon_once, [&] {
        std::vector<int> perm(n_);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<mask_t> best;
        do {
            for (mask_t flip = 0; flip <= (n_ ? low_mask(n_) : 0); ++flip) {
                SignedPerm sp{perm, flip};
                std::vector<mask_t> image;
                image.reserve(bases_.size());
                for (mask_t b : bases_) image.push_back(sp.apply(n_, b));
                std::sort(image.begin(), image.end());
                if (best.empty() || image < best) best = std::move(image);
                if (n_ == 0) break;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        caches_->canon = std::move(best);
    });
    return caches_->canon;
}

inline std::optional<SignedPerm> find_isomorphism(const OrthoMatroid& m1,
                                                  const OrthoMatroid& m2) {
    if (m1.n() != m2.n()) throw error("isomorphism requires equal ground set sizes");
    int n = m1.n();
    if (m1.bases().size() != m2.bases().size()) return std::nullopt;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (mask_t flip = 0; flip <= (n ? low_mask(n) : 0); ++flip) {
            SignedPerm sp{perm, flip};
            std::vector<mask_t> image;
            image.reserve(m1.bases().size());
            for (mask_t b : m1.bases()) image.push_back(sp.apply(n, b));
            std::sort(image.begin(), image.end());
            if (image == m2.bases()) return sp;
            if (n == 0) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

// true iff some iterated elementary minor of m is isomorphic to target
inline bool contains_minor(const OrthoMatroid& m, const OrthoMatroid& target) {
    if (target.n() > m.n()) return false;
    if (target.n() == m.n()) return m.canonical_key() == target.canonical_key();
    // choose which positions survive, then which element of each removed
    // position is named in the minor request
    int n = m.n(), k = n - target.n();
    std::vector<int> pick(k);
    std::function<bool(int, int)> rec = [&](int idx, int from) -> bool {
        if (idx == k) {
            mask_t pos_mask = 0;
            for (int p : pick) pos_mask |= elem_mask(p);
            for (mask_t stars = 0;; ++stars) {
                if (stars > low_mask(k)) break;
                mask_t s = 0;
                int bit = 0;
                for (int p : pick) {
                    s |= elem_mask((stars & elem_mask(bit)) ? p + n : p);
                    ++bit;
                }
                OrthoMatroid cand = m.minor_set(s);
                if (cand.canonical_key() == target.canonical_key()) return true;
            }
            return false;
        }
        for (int p = from; p < n; ++p) {
            pick[idx] = p;
            if (rec(idx + 1, p + 1)) return true;
        }
        return false;
    };
    return rec(0, 0);
}

}  // namespace omt
