/*
 * classdata.hpp — class polynomials of small modular invariants for the
 * imaginary quadratic orders used by the builder, reduction of their
 * coefficients (elements a + b*sqrt(-D) of the order) modulo p, a plain-text
 * table format with a strict parser, and invariant root extraction mod p.
 *
 * Invariant tags and the map back to j:
 *   g3e12   : x  ->  (x + 27)(x + 3)^3 / x
 *   g5e6    : x  ->  (x^2 + 10x + 5)^3 / x
 *   g7e4    : x  ->  (x^2 + 13x + 49)(x^2 + 5x + 1)^3 / x
 *   g11e4   : x  ->  gamma2 candidates via the level-11 quintic, j = gamma2^3
 *   gamma2  : x  ->  x^3
 *   weber_sq: x  ->  (x + 16)^3 / x
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#ifndef CMCARDINAL_CLASSDATA_HPP
#define CMCARDINAL_CLASSDATA_HPP

#include "modcurves.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cmcardinal {

/* Coefficient a + b * sqrt(-D) of a class polynomial. */
struct QuadCoeff {
    Int a, b;
    bool operator==(const QuadCoeff&) const = default;
};

struct ClassPolyEntry {
    Int D;
    std::string invariant_tag;
    std::vector<QuadCoeff> coeffs;  // ascending, monic: back() == {1, 0}
    bool operator==(const ClassPolyEntry&) const = default;
};

using TableKey = std::pair<Int, std::string>;
using ClassPolyTable = std::map<TableKey, ClassPolyEntry>;

inline bool valid_invariant_tag(const std::string& tag) {
    static const std::set<std::string> tags{"g3e12", "g5e6", "g7e4",
                                            "g11e4", "gamma2", "weber_sq"};
    return tags.count(tag) != 0;
}

inline bool entry_has_conjugate_coeffs(const ClassPolyEntry& e) {
    for (const auto& c : e.coeffs)
        if (c.b != 0) return true;
    return false;
}

/* The compiled-in table.  Exactly these eight entries; anything else must
 * arrive through a table file. */
inline const ClassPolyTable& builtin_table() {
    static const ClassPolyTable table = [] {
        ClassPolyTable t;
        auto put = [&t](int D, const char* tag, std::vector<QuadCoeff> cs) {
            ClassPolyEntry e{Int(D), tag, std::move(cs)};
            t.emplace(TableKey{e.D, e.invariant_tag}, std::move(e));
        };
        put(15, "g3e12", {{729, 0}, {81, 0}, {1, 0}});
        put(20, "g3e12", {{-239, -154}, {70, -22}, {1, 0}});
        put(35, "g5e6", {{125, 0}, {50, 0}, {1, 0}});
        put(40, "gamma2", {{20880, 0}, {-780, 0}, {1, 0}});
        put(91, "g5e6", {{-99, -8}, {130, -40}, {1, 0}});
        put(91, "g7e4", {{49, 0}, {77, 0}, {1, 0}});
        put(20, "g7e4", {{41, -6}, {15, -1}, {1, 0}});
        put(88, "g11e4", {{121, 0}, {-66, 0}, {1, 0}});
        return t;
    }();
    return table;
}

/* Reduce an entry modulo p at a chosen square root of -D.  For rational
 * entries (all b = 0) the branch is irrelevant and sqrtD is ignored; for
 * conjugate entries sqrtD^2 = -D mod p is verified. */
inline Poly reduce_entry_mod_p(const ClassPolyEntry& e, const Int& p, const Int& sqrtD) {
    if (p < 3 || p % 2 == 0)
        throw cm_error("reduce_entry_mod_p: modulus must be an odd prime");
    bool conj = entry_has_conjugate_coeffs(e);
    if (conj) {
        if (mod(e.D, p) == 0)
            throw cm_error("reduce_entry_mod_p: p divides D");
        if (mod(sqrtD * sqrtD + e.D, p) != 0)
            throw cm_error("reduce_entry_mod_p: sqrtD^2 != -D mod p");
    }
    Poly f(e.coeffs.size());
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        f[i] = mod(e.coeffs[i].a + e.coeffs[i].b * sqrtD, p);
    ptrim(f);
    return f;
}

/* Map an invariant value to j.  The g11e4 tag is excluded here (one value
 * fans out to several gamma2 candidates; use gamma2_from_w11). */
inline Int j_from_invariant(const std::string& tag, const Int& x_in, const Int& p) {
    Int x = mod(x_in, p);
    if (tag == "gamma2") return powmod(x, 3, p);
    if (x == 0) throw cm_error("j_from_invariant: invariant value 0 is degenerate");
    Int ix = invmod(x, p);
    if (tag == "g3e12")
        return mod(mod(x + 27, p) * powmod(x + 3, 3, p) % p * ix, p);
    if (tag == "g5e6")
        return mod(powmod(x * x + 10 * x + 5, 3, p) * ix, p);
    if (tag == "g7e4")
        return mod(mod(x * x + 13 * x + 49, p) * powmod(x * x + 5 * x + 1, 3, p) % p * ix, p);
    if (tag == "weber_sq")
        return mod(powmod(x + 16, 3, p) * ix, p);
    throw cm_error("j_from_invariant: unknown or unsupported tag '" + tag + "'");
}

/* Smallest root mod p of the (D, tag) class polynomial, taken over both
 * square-root branches for conjugate entries. */
inline Int find_invariant_root(const Int& D, const std::string& tag, const Int& p,
                               const ClassPolyTable& table, std::uint64_t seed = 1) {
    auto it = table.find(TableKey{D, tag});
    if (it == table.end())
        throw cm_error("find_invariant_root: no table entry for this (D, invariant)");
    const ClassPolyEntry& e = it->second;
    std::vector<Int> branches;
    if (entry_has_conjugate_coeffs(e)) {
        auto s = sqrt_mod(mod(-D, p), p);
        if (!s) throw cm_error("find_invariant_root: -D is not a square mod p");
        branches = {*s, mod(p - *s, p)};
    } else {
        branches = {Int(0)};
    }
    std::set<Int> roots;
    for (const Int& br : branches)
        for (const Int& r : proots(reduce_entry_mod_p(e, p, br), p, seed))
            roots.insert(r);
    if (roots.empty())
        throw cm_error("find_invariant_root: class polynomial has no root mod p");
    return *roots.begin();
}

/* ----------------------------------------------------- table file format */

/* One entry per line:
 *   D=<int> inv=<tag> deg=<int> coeffs=<c0>;<c1>;...;<cdeg>
 * where each ci is `a`, `a+b*s`, or `a-b*s` (s stands for sqrt(-D)), the
 * trailing coefficient is literally `1`, `#` starts a comment, and blank
 * lines are skipped. */

namespace detail {

inline bool parse_int_token(const std::string& s, std::size_t& pos, Int& out) {
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    std::size_t digits = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digits) { pos = start; return false; }
    out = Int(s.substr(start, pos - start));
    return true;
}

inline QuadCoeff parse_coeff(const std::string& tok, int lineno) {
    std::size_t pos = 0;
    QuadCoeff c{0, 0};
    auto fail = [&](const std::string& why) -> QuadCoeff {
        throw cm_error("table parse error at line " + std::to_string(lineno) +
                       ": bad coefficient '" + tok + "' (" + why + ")");
    };
    if (!parse_int_token(tok, pos, c.a)) return fail("expected integer");
    if (pos == tok.size()) return c;
    if (tok[pos] != '+' && tok[pos] != '-') return fail("expected + or - before b*s");
    if (!parse_int_token(tok, pos, c.b)) return fail("expected integer b");
    if (tok.compare(pos, 2, "*s") != 0 || pos + 2 != tok.size())
        return fail("expected trailing *s");
    return c;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) { out.push_back(cur); cur.clear(); }
        else cur.push_back(ch);
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

/* Parse a table stream on top of a base table (entries in the stream shadow
 * base entries with the same (D, tag) key).  Structural problems throw with
 * the offending line number. */
inline ClassPolyTable load_table(std::istream& in,
                                 const ClassPolyTable& base = builtin_table()) {
    ClassPolyTable table = base;
    std::set<TableKey> seen_here;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw cm_error("table parse error at line " + std::to_string(lineno) +
                       ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = line.substr(0, line.find('#'));
        std::istringstream fields(body);
        std::vector<std::string> toks;
        for (std::string t; fields >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() != 4) fail("expected 4 fields D= inv= deg= coeffs=");
        if (toks[0].rfind("D=", 0) != 0) fail("first field must be D=");
        if (toks[1].rfind("inv=", 0) != 0) fail("second field must be inv=");
        if (toks[2].rfind("deg=", 0) != 0) fail("third field must be deg=");
        if (toks[3].rfind("coeffs=", 0) != 0) fail("fourth field must be coeffs=");
        ClassPolyEntry e;
        {
            std::size_t pos = 0;
            std::string ds = toks[0].substr(2);
            if (!detail::parse_int_token(ds, pos, e.D) || pos != ds.size() || e.D <= 0)
                fail("D must be a positive integer");
        }
        e.invariant_tag = toks[1].substr(4);
        if (!valid_invariant_tag(e.invariant_tag))
            fail("unknown invariant tag '" + e.invariant_tag + "'");
        Int deg;
        {
            std::size_t pos = 0;
            std::string ds = toks[2].substr(4);
            if (!detail::parse_int_token(ds, pos, deg) || pos != ds.size() ||
                deg <= 0 || deg > 10000)
                fail("deg must be a positive integer (at most 10000)");
        }
        std::vector<std::string> parts = detail::split(toks[3].substr(7), ';');
        if (Int(parts.size()) != deg + 1)
            fail("degree mismatch: deg=" + deg.str() + " needs " +
                 Int(deg + 1).str() + " coefficients, got " +
                 std::to_string(parts.size()));
        for (const std::string& part : parts)
            e.coeffs.push_back(detail::parse_coeff(part, lineno));
        if (!(e.coeffs.back() == QuadCoeff{1, 0}) || parts.back() != "1")
            fail("entry is not monic (trailing coefficient must be literal 1)");
        TableKey key{e.D, e.invariant_tag};
        if (!seen_here.insert(key).second)
            fail("duplicate entry for D=" + e.D.str() + " inv=" + e.invariant_tag);
        table[key] = std::move(e);
    }
    return table;
}

/* Serialize in the same line format (plus a header comment documenting the
 * format and the modular equations); load_table round-trips the result. */
inline std::string serialize_table(const ClassPolyTable& table) {
    std::ostringstream out;
    out << "# class polynomial table\n"
           "# format: D=<int> inv=<tag> deg=<int> coeffs=<c0>;<c1>;...;<cdeg>\n"
           "#   each ci is a or a+b*s or a-b*s, with s = sqrt(-D)\n"
           "# modular equations tying an invariant X to the j-invariant J:\n"
           "#   ell=2: (X+16)^3 - J*X\n"
           "#   ell=3: (X+27)*(X+3)^3 - J*X\n"
           "#   ell=5: (X^2+10*X+5)^3 - J*X\n"
           "#   ell=7: (X^2+13*X+49)*(X^2+5*X+1)^3 - J*X\n";
    for (const auto& [key, e] : table) {
        out << "D=" << e.D.str() << " inv=" << e.invariant_tag
            << " deg=" << (e.coeffs.size() - 1) << " coeffs=";
        for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
            if (i) out << ';';
            out << e.coeffs[i].a.str();
            if (e.coeffs[i].b > 0)
                out << '+' << e.coeffs[i].b.str() << "*s";
            else if (e.coeffs[i].b < 0)
                out << '-' << Int(-e.coeffs[i].b).str() << "*s";
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cmcardinal

#endif  // CMCARDINAL_CLASSDATA_HPP
