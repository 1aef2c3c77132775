#pragma once

// Ground set [n] u [n]* for orthogonal matroids, encoded as bitmasks.
// Bit i   (0 <= i < n)  : element i+1
// Bit n+i (0 <= i < n)  : element (i+1)*
// Element order for "least"/lexicographic purposes is the bit order:
// 1 < 2 < ... < n < 1* < 2* < ... < n*.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace omt {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

using mask_t = std::uint32_t;
using elem_t = int;  // bit index into a mask, 0 .. 2n-1

constexpr int max_n = 16;

inline void require_n(int n) {
    if (n < 1 || n > max_n) throw error("ground set size out of range: " + std::to_string(n));
}

inline mask_t low_mask(int n) { return (mask_t{1} << n) - 1; }
inline mask_t full_set(int n) { return (mask_t{1} << (2 * n)) - 1; }

inline int popcount(mask_t m) { return std::popcount(m); }

inline elem_t star_elem(int n, elem_t e) { return e < n ? e + n : e - n; }

inline mask_t star_set(int n, mask_t m) {
    return ((m & low_mask(n)) << n) | (m >> n);
}

inline mask_t elem_mask(elem_t e) { return mask_t{1} << e; }

// position (0-based column in [n]) underlying an element
inline int position_of(int n, elem_t e) { return e < n ? e : e - n; }

inline bool is_admissible(int n, mask_t m) {
    return ((m & low_mask(n)) & (m >> n)) == 0;
}

inline bool is_transversal(int n, mask_t m) {
    return ((m & low_mask(n)) ^ (m >> n)) == low_mask(n);
}

// the unique transversal whose unstarred part is `lo`
inline mask_t transversal_from_lo(int n, mask_t lo) {
    return lo | ((~lo & low_mask(n)) << n);
}

inline std::vector<mask_t> enumerate_transversals(int n) {
    require_n(n);
    std::vector<mask_t> out;
    out.reserve(std::size_t{1} << n);
    for (mask_t lo = 0; lo <= low_mask(n); ++lo) out.push_back(transversal_from_lo(n, lo));
    return out;
}

// admissible subsets, grouped in order of increasing cardinality
inline std::vector<mask_t> enumerate_admissible(int n, int max_size = -1) {
    require_n(n);
    if (max_size < 0) max_size = n;
    std::vector<std::vector<mask_t>> by_size(static_cast<std::size_t>(max_size) + 1);
    by_size[0].push_back(0);
    for (int pos = 0; pos < n; ++pos) {
        for (int sz = std::min(pos, max_size - 1); sz >= 0; --sz) {
            for (mask_t m : by_size[sz]) {
                by_size[sz + 1].push_back(m | elem_mask(pos));
                by_size[sz + 1].push_back(m | elem_mask(pos + n));
            }
        }
    }
    std::vector<mask_t> out;
    for (auto& grp : by_size)
        for (mask_t m : grp) out.push_back(m);
    return out;
}

inline elem_t least_elem(mask_t m) {
    if (m == 0) throw error("least_elem of empty set");
    return std::countr_zero(m);
}

// lexicographic comparison of element sets under the bit order
inline bool lex_less(mask_t a, mask_t b) {
    while (a && b) {
        elem_t ea = std::countr_zero(a), eb = std::countr_zero(b);
        if (ea != eb) return ea < eb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

// |T n (|i|,|j|]| counting unstarred members of T in the half-open integer
// interval between the underlying positions of i and j
inline int interval_count(int n, mask_t T, elem_t i, elem_t j) {
    int a = position_of(n, i), b = position_of(n, j);
    if (a > b) std::swap(a, b);
    // 1-based interval (a+1, b+1] = bits a+1 .. b (0-based)
    mask_t window = low_mask(b + 1) & ~low_mask(a + 1);
    return popcount(T & window & low_mask(n));
}

inline std::string format_elem(int n, elem_t e) {
    if (e < n) return std::to_string(e + 1);
    return std::to_string(e - n + 1) + "*";
}

inline elem_t parse_elem(int n, std::string_view tok) {
    bool starred = false;
    if (!tok.empty() && tok.back() == '*') {
        starred = true;
        tok.remove_suffix(1);
    }
    if (tok.empty()) throw error("empty element token");
    int v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') throw error("bad element token");
        v = v * 10 + (c - '0');
    }
    if (v < 1 || v > n) throw error("element out of range: " + std::string(tok));
    return starred ? v - 1 + n : v - 1;
}

inline std::string format_set(int n, mask_t m) {
    if (m == 0) return "-";
    std::string out;
    for (mask_t r = m; r;) {
        elem_t e = std::countr_zero(r);
        r &= r - 1;
        if (!out.empty()) out += ' ';
        out += format_elem(n, e);
    }
    return out;
}

inline mask_t parse_set(int n, std::string_view text) {
    mask_t m = 0;
    std::size_t i = 0;
    bool any = false;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
        if (j > i) {
            std::string_view tok = text.substr(i, j - i);
            any = true;
            if (tok != "-") {
                elem_t e = parse_elem(n, tok);
                if (m & elem_mask(e)) throw error("repeated element in set");
                m |= elem_mask(e);
            }
        }
        i = j;
    }
    if (!any) throw error("empty set text");
    return m;
}

inline std::vector<elem_t> set_elems(mask_t m) {
    std::vector<elem_t> out;
    for (mask_t r = m; r;) {
        out.push_back(std::countr_zero(r));
        r &= r - 1;
    }
    return out;
}

}  // namespace omt
