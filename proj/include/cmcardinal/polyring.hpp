/*
 * polyring.hpp — dense univariate polynomial arithmetic over GF(p):
 * ring operations, gcd, modular exponentiation, root extraction,
 * resultants, distinct-/equal-degree factorization, inverses mod a
 * polynomial, and the splitting-type analyzer.
 *
 * Polynomials are coefficient vectors in ascending order (coeffs[i] is the
 * X^i coefficient) with no trailing zeros; the zero polynomial is the empty
 * vector.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#ifndef CMCARDINAL_POLYRING_HPP
#define CMCARDINAL_POLYRING_HPP

#include "modarith.hpp"

#include <algorithm>
#include <vector>

namespace cmcardinal {

using Poly = std::vector<Int>;

/* Drop trailing zero coefficients in place. */
inline void ptrim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

/* Reduce every coefficient mod p and trim. */
inline Poly pnorm(Poly f, const Int& p) {
    for (Int& c : f) c = mod(c, p);
    ptrim(f);
    return f;
}

inline int pdeg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly padd(const Poly& f, const Poly& g, const Int& p) {
    Poly r(std::max(f.size(), g.size()), 0);
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = mod(r[i] + g[i], p);
    for (std::size_t i = g.size(); i < f.size(); ++i) r[i] = mod(r[i], p);
    ptrim(r);
    return r;
}

inline Poly psub(const Poly& f, const Poly& g, const Int& p) {
    Poly r(std::max(f.size(), g.size()), 0);
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = mod(r[i] - g[i], p);
    for (std::size_t i = g.size(); i < f.size(); ++i) r[i] = mod(r[i], p);
    ptrim(r);
    return r;
}

inline Poly pscale(const Poly& f, const Int& c, const Int& p) {
    Poly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = mod(f[i] * c, p);
    ptrim(r);
    return r;
}

inline Poly pmul(const Poly& f, const Poly& g, const Int& p) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        for (std::size_t j = 0; j < g.size(); ++j)
            r[i + j] += f[i] * g[j] % p;
    }
    for (Int& c : r) c = mod(c, p);
    ptrim(r);
    return r;
}

/* Quotient and remainder; divisor must be nonzero. */
inline std::pair<Poly, Poly> pdivmod(const Poly& f, const Poly& g, const Int& p) {
    Poly gg = pnorm(g, p);
    if (gg.empty()) throw cm_error("pdivmod: division by zero polynomial");
    Poly r = pnorm(f, p);
    if (r.size() < gg.size()) return {Poly{}, r};
    const std::size_t dg = gg.size() - 1;
    Int inv_lc = invmod(gg.back(), p);
    Poly q(r.size() - gg.size() + 1, 0);
    for (std::size_t i = r.size() - 1;; --i) {
        Int c = mod(r[i] * inv_lc, p);
        if (c != 0) {
            q[i - dg] = c;
            for (std::size_t k = 0; k <= dg; ++k)
                r[i - dg + k] = mod(r[i - dg + k] - c * gg[k], p);
        }
        if (i == dg) break;
    }
    ptrim(q);
    ptrim(r);
    return {q, r};
}

inline Poly pmod(const Poly& f, const Poly& g, const Int& p) {
    return pdivmod(f, g, p).second;
}

/* Monic multiple of the gcd made monic; gcd with the zero polynomial is the
 * monic version of the other argument. */
inline Poly pmonic(const Poly& f, const Int& p) {
    Poly r = pnorm(f, p);
    if (r.empty()) return r;
    return pscale(r, invmod(r.back(), p), p);
}

inline Poly pgcd(Poly f, Poly g, const Int& p) {
    f = pnorm(std::move(f), p);
    g = pnorm(std::move(g), p);
    while (!g.empty()) {
        Poly r = pmod(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return pmonic(f, p);
}

inline Int peval(const Poly& f, const Int& x, const Int& p) {
    Int r = 0;
    for (std::size_t i = f.size(); i-- > 0;) r = mod(r * x + f[i], p);
    return r;
}

inline Poly pderiv(const Poly& f, const Int& p) {
    if (f.size() <= 1) return {};
    Poly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = mod(f[i] * i, p);
    ptrim(r);
    return r;
}

inline Poly pmulmod(const Poly& f, const Poly& g, const Poly& m, const Int& p) {
    return pmod(pmul(f, g, p), m, p);
}

/* f^e mod m; m must have degree >= 1. */
inline Poly polpowmod(Poly f, Int e, const Poly& m, const Int& p) {
    if (pdeg(m) < 1) throw cm_error("polpowmod: modulus must have degree >= 1");
    if (e < 0) throw cm_error("polpowmod: negative exponent");
    Poly r{1};
    f = pmod(f, m, p);
    while (e > 0) {
        if ((e & 1) != 0) r = pmulmod(r, f, m, p);
        f = pmulmod(f, f, m, p);
        e >>= 1;
    }
    return r;
}

/* X^e mod g (e defaults to p: the Frobenius image of X). */
inline Poly powmod_xp(const Poly& g, const Int& p, const Int& e) {
    if (pdeg(g) < 1) throw cm_error("powmod_xp: modulus must have degree >= 1");
    return polpowmod(Poly{0, 1}, e, g, p);
}

inline Poly powmod_xp(const Poly& g, const Int& p) { return powmod_xp(g, p, p); }

/* Inverse of f mod m by the extended Euclidean algorithm.  (Note that
 * f^(p-2) mod m is NOT the inverse once deg m > 1, so exponentiation is no
 * substitute.)  Throws when gcd(f, m) is nonconstant. */
inline Poly pinvmod(const Poly& f, const Poly& m, const Int& p) {
    Poly r0 = pnorm(m, p), r1 = pmod(f, m, p);
    Poly s0{}, s1{1};
    if (r1.empty()) throw cm_error("pinvmod: zero is not invertible");
    while (!r1.empty()) {
        auto [q, r2] = pdivmod(r0, r1, p);
        Poly s2 = psub(s0, pmul(q, s1, p), p);
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
    }
    if (pdeg(r0) != 0) throw cm_error("pinvmod: polynomial not invertible mod m");
    return pmod(pscale(s0, invmod(r0[0], p), p), m, p);
}

/* Resultant Res(f, g) over GF(p) by the Euclidean scheme with sign and
 * leading-coefficient bookkeeping. */
inline Int resultant(Poly f, Poly g, const Int& p) {
    f = pnorm(std::move(f), p);
    g = pnorm(std::move(g), p);
    if (f.empty() || g.empty()) return 0;
    Int r = 1;
    if (f.size() < g.size()) {
        if (pdeg(f) % 2 == 1 && pdeg(g) % 2 == 1) r = p - 1;
        std::swap(f, g);
    }
    while (true) {
        if (g.size() == 1) {  // constant: Res(f, c) = c^deg(f)
            r = mod(r * powmod(g[0], pdeg(f), p), p);
            return r;
        }
        Poly rem = pmod(f, g, p);
        if (rem.empty()) return 0;
        r = mod(r * powmod(g.back(), pdeg(f) - pdeg(rem), p), p);
        if (pdeg(f) % 2 == 1 && pdeg(g) % 2 == 1) r = mod(-r, p);
        f = std::move(g);
        g = std::move(rem);
    }
}

/* ------------------------------------------------------------ roots */

namespace detail {

/* Split a monic product of distinct linear factors into its roots
 * (Cantor–Zassenhaus with quadratic-formula and linear base cases). */
inline void split_linear_product(const Poly& f, const Int& p, SplitMix64& rng,
                                 std::vector<Int>& out) {
    int d = pdeg(f);
    if (d <= 0) return;
    if (d == 1) {
        out.push_back(mod(-f[0] * invmod(f[1], p), p));
        return;
    }
    if (d == 2) {
        Int b = mod(f[1] * invmod(f[2], p), p);
        Int c = mod(f[0] * invmod(f[2], p), p);
        Int disc = mod(b * b - 4 * c, p);
        auto s = sqrt_mod(disc, p);
        if (!s) throw cm_error("split_linear_product: quadratic does not split");
        Int half = invmod(2, p);
        out.push_back(mod((-b + *s) * half, p));
        out.push_back(mod((-b - *s) * half, p));
        return;
    }
    while (true) {
        Int a = rng.randrange(p);
        Poly h = polpowmod(Poly{a, 1}, (p - 1) / 2, f, p);
        Poly g = pgcd(psub(h, Poly{1}, p), f, p);
        if (pdeg(g) > 0 && pdeg(g) < d) {
            split_linear_product(g, p, rng, out);
            split_linear_product(pdivmod(f, g, p).first, p, rng, out);
            return;
        }
    }
}

}  // namespace detail

/* All roots of f in GF(p), ascending; multiplicities collapsed.  The result
 * is independent of the seed (the generator only drives splitting). */
inline std::vector<Int> proots(const Poly& f_in, const Int& p, std::uint64_t seed = 1) {
    if (p < 3 || p % 2 == 0) throw cm_error("proots: modulus must be an odd prime");
    Poly f = pnorm(f_in, p);
    if (f.empty()) throw cm_error("proots: zero polynomial has every root");
    if (pdeg(f) == 0) return {};
    f = pmonic(f, p);
    Poly xp = powmod_xp(f, p);                       // X^p mod f
    Poly lin = pgcd(psub(xp, Poly{0, 1}, p), f, p);  // product of distinct linear factors
    std::vector<Int> roots;
    SplitMix64 rng(seed ^ 0x243f6a8885a308d3ULL);
    detail::split_linear_product(lin, p, rng, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

/* -------------------------------------------------- factorization */

/* Distinct-degree factorization of a squarefree monic f: list of
 * (degree d, product of the irreducible factors of degree d), ascending in
 * d, degree-0 slices omitted.  With dmax > 0 the scan stops after degree
 * dmax and whatever remains unsplit is dropped (the slices up to dmax are
 * still exact). */
inline std::vector<std::pair<int, Poly>> factor_ddf(const Poly& f_in, const Int& p,
                                                    int dmax = 0) {
    Poly f = pmonic(f_in, p);
    if (f.empty()) throw cm_error("factor_ddf: zero polynomial");
    std::vector<std::pair<int, Poly>> out;
    Poly h{0, 1};  // X^(p^d) mod f, maintained incrementally
    int d = 0;
    while (pdeg(f) > 0) {
        ++d;
        if (dmax > 0 && d > dmax) break;
        if (pdeg(f) < 2 * d) {  // remainder has no room for two factors
            out.emplace_back(pdeg(f), f);
            break;
        }
        h = polpowmod(h, p, f, p);
        Poly g = pgcd(psub(h, Poly{0, 1}, p), f, p);
        if (pdeg(g) > 0) {
            out.emplace_back(d, g);
            f = pdivmod(f, g, p).first;
            h = pmod(h, f, p);
        }
    }
    return out;
}

/* Equal-degree factorization: split a monic product of distinct irreducible
 * degree-d factors into those factors (Cantor–Zassenhaus).  Deterministic
 * for a fixed seed; the factor SET is seed-independent. */
inline std::vector<Poly> factor_edf(const Poly& f_in, int d, const Int& p,
                                    std::uint64_t seed = 1) {
    Poly f = pmonic(f_in, p);
    if (pdeg(f) < d || pdeg(f) % d != 0)
        throw cm_error("factor_edf: degree is not a multiple of d");
    std::vector<Poly> out;
    SplitMix64 rng(seed ^ 0x13198a2e03707344ULL);
    Int pd = 1;
    for (int i = 0; i < d; ++i) pd *= p;
    Int e = (pd - 1) / 2;
    std::vector<Poly> stack{f};
    while (!stack.empty()) {
        Poly cur = std::move(stack.back());
        stack.pop_back();
        if (pdeg(cur) == d) {
            out.push_back(pmonic(cur, p));
            continue;
        }
        while (true) {
            Poly a(pdeg(cur));
            for (auto& c : a) c = rng.randrange(p);
            ptrim(a);
            if (pdeg(a) < 1) continue;
            Poly g = pgcd(a, cur, p);
            if (pdeg(g) > 0 && pdeg(g) < pdeg(cur)) {
                stack.push_back(g);
                stack.push_back(pdivmod(cur, g, p).first);
                break;
            }
            Poly b = polpowmod(a, e, cur, p);
            g = pgcd(psub(b, Poly{1}, p), cur, p);
            if (pdeg(g) > 0 && pdeg(g) < pdeg(cur)) {
                stack.push_back(g);
                stack.push_back(pdivmod(cur, g, p).first);
                break;
            }
        }
    }
    return out;
}

/* Degrees of the irreducible factors of a squarefree f, ascending (so a
 * multiset of factor degrees).  Throws when f is not squarefree (gcd with
 * its derivative nonconstant).  Determinism: the distinct-degree scan has no
 * random choices, so the seed is accepted only for interface uniformity. */
inline std::vector<int> splitting_type(const Poly& f_in, const Int& p,
                                       std::uint64_t /*seed*/ = 1) {
    Poly f = pnorm(f_in, p);
    if (pdeg(f) < 1) throw cm_error("splitting_type: need degree >= 1");
    Poly g = pgcd(f, pderiv(f, p), p);
    if (pdeg(g) != 0) throw cm_error("splitting_type: polynomial is not squarefree");
    std::vector<int> degs;
    for (const auto& [d, fd] : factor_ddf(f, p)) {
        int count = pdeg(fd) / d;
        for (int i = 0; i < count; ++i) degs.push_back(d);
    }
    std::sort(degs.begin(), degs.end());
    return degs;
}

}  // namespace cmcardinal

#endif  // CMCARDINAL_POLYRING_HPP
