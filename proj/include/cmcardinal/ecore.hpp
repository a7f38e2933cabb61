/*
 * ecore.hpp — short-Weierstrass elliptic curves over GF(p): the standard
 * j-invariant parametrization Y^2 = X^3 + 3kc^2 X + 2kc^3 with
 * k = j/(1728 - j), group law, scalar multiplication, quadratic twists,
 * division polynomials, exhaustive point counts for small p, and the
 * randomized order check used to certify group orders.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#ifndef CMCARDINAL_ECORE_HPP
#define CMCARDINAL_ECORE_HPP

#include "polyring.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cmcardinal {

struct Curve {
    Int p, a4, a6;
    /* (j, c) when the curve came from curve_from_j; twists need it. */
    std::optional<std::pair<Int, Int>> provenance;
};

struct Point {
    bool infinity;
    Int x, y;
    static Point at_infinity() { return {true, 0, 0}; }
    static Point affine(const Int& x, const Int& y) { return {false, x, y}; }
};

inline bool point_eq(const Point& P, const Point& Q) {
    if (P.infinity || Q.infinity) return P.infinity == Q.infinity;
    return P.x == Q.x && P.y == Q.y;
}

/* The curve E(j, c): Y^2 = X^3 + 3k c^2 X + 2k c^3, k = j/(1728 - j).
 * Varying c over a fixed square class leaves the isomorphism class alone;
 * changing the square class of c gives the quadratic twist.  j in {0, 1728}
 * is deliberately unsupported (extra automorphisms). */
inline Curve curve_from_j(const Int& j_in, const Int& c_in, const Int& p) {
    if (p < 5) throw cm_error("curve_from_j: need p >= 5");
    Int j = mod(j_in, p);
    Int c = mod(c_in, p);
    if (j == 0 || j == mod(1728, p))
        throw cm_error("curve_from_j: j = 0 and j = 1728 are unsupported");
    if (c == 0) throw cm_error("curve_from_j: twist scalar must be nonzero");
    Int k = mod(j * invmod(mod(1728 - j, p), p), p);
    Int a4 = mod(3 * k % p * c % p * c, p);
    Int a6 = mod(2 * k % p * c % p * c % p * c, p);
    return {p, a4, a6, std::make_pair(j, c)};
}

/* j = 1728 * 4 a4^3 / (4 a4^3 + 27 a6^2); throws on singular curves. */
inline Int j_of_curve(const Curve& E) {
    Int num = mod(4 * E.a4 % E.p * E.a4 % E.p * E.a4, E.p);
    Int den = mod(num + 27 * E.a6 % E.p * E.a6, E.p);
    if (den == 0) throw cm_error("j_of_curve: singular curve");
    return mod(1728 * num % E.p * invmod(den, E.p), E.p);
}

/* Discriminant -16 (4 a4^3 + 27 a6^2) of the Weierstrass model. */
inline Int curve_disc(const Curve& E) {
    Int t = mod(4 * E.a4 % E.p * E.a4 % E.p * E.a4 + 27 * E.a6 % E.p * E.a6, E.p);
    return mod(-16 * t, E.p);
}

inline bool point_on_curve(const Point& P, const Curve& E) {
    if (P.infinity) return true;
    Int lhs = mod(P.y * P.y, E.p);
    Int rhs = mod(P.x * P.x % E.p * P.x + E.a4 * P.x + E.a6, E.p);
    return lhs == rhs;
}

inline Point ec_neg(const Point& P, const Curve& E) {
    if (P.infinity) return P;
    return Point::affine(P.x, mod(-P.y, E.p));
}

namespace detail {

/* Group law without the on-curve precondition check (hot path). */
inline Point ec_add_unchecked(const Point& P, const Point& Q, const Curve& E) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const Int& p = E.p;
    if (P.x == Q.x) {
        if (mod(P.y + Q.y, p) == 0) return Point::at_infinity();
        // doubling (P == Q with y != 0)
        Int lam = mod((3 * P.x % p * P.x + E.a4) * invmod(2 * P.y % p, p), p);
        Int x3 = mod(lam * lam - 2 * P.x, p);
        Int y3 = mod(lam * (P.x - x3) - P.y, p);
        return Point::affine(x3, y3);
    }
    Int lam = mod((Q.y - P.y) * invmod(mod(Q.x - P.x, p), p), p);
    Int x3 = mod(lam * lam - P.x - Q.x, p);
    Int y3 = mod(lam * (P.x - x3) - P.y, p);
    return Point::affine(x3, y3);
}

}  // namespace detail

inline Point ec_add(const Point& P, const Point& Q, const Curve& E) {
    if (!point_on_curve(P, E) || !point_on_curve(Q, E))
        throw cm_error("ec_add: point not on curve");
    return detail::ec_add_unchecked(P, Q, E);
}

/* [k]P by double-and-add; k may be negative or zero. */
inline Point scalar_mul(Int k, Point P, const Curve& E) {
    if (!point_on_curve(P, E)) throw cm_error("scalar_mul: point not on curve");
    if (k < 0) { k = -k; P = ec_neg(P, E); }
    Point R = Point::at_infinity();
    while (k > 0) {
        if ((k & 1) != 0) R = detail::ec_add_unchecked(R, P, E);
        P = detail::ec_add_unchecked(P, P, E);
        k >>= 1;
    }
    return R;
}

/* Quadratic twist by c (multiplies the provenance scalar): square c keeps
 * the isomorphism class, nonresidue c swaps to the twist.  Requires the
 * curve to carry (j, c) provenance. */
inline Curve twist(const Curve& E, const Int& c) {
    if (!E.provenance)
        throw cm_error("twist: curve lacks (j, c) provenance");
    return curve_from_j(E.provenance->first,
                        mod(E.provenance->second * c, E.p), E.p);
}

/* ------------------------------------------------ division polynomials */

/* f_1..f_nmax with the abscissa normalization f_2 = 1: for n odd f_n is the
 * full division polynomial; for n even the full polynomial is 2Y * f_n.
 * Recurrences (c = X^3 + a4 X + a6):
 *   f_{2m}   = f_m (f_{m+2} f_{m-1}^2 - f_{m-2} f_{m+1}^2)
 *   f_{2m+1} = f_{m+2} f_m^3 - 16 c^2 f_{m-1} f_{m+1}^3   (m odd)
 *            = 16 c^2 f_{m+2} f_m^3 - f_{m-1} f_{m+1}^3   (m even)
 */
inline std::vector<Poly> division_polys_upto(const Curve& E, int nmax) {
    if (nmax < 1) throw cm_error("division_polys_upto: need nmax >= 1");
    const Int& p = E.p;
    const Int& a = E.a4;
    const Int& b = E.a6;
    std::vector<Poly> f(static_cast<std::size_t>(nmax) + 1);
    f[0] = {};
    f[1] = {1};
    if (nmax >= 2) f[2] = {1};
    if (nmax >= 3) f[3] = pnorm({mod(-a * a, p), 12 * b, 6 * a, 0, 3}, p);
    if (nmax >= 4)
        f[4] = pnorm({mod(-2 * a * a % p * a - 16 * b * b, p), mod(-8 * a * b, p),
                      mod(-10 * a * a, p), 40 * b, 10 * a, 0, 2}, p);
    Poly cubic = pnorm({b, a, 0, 1}, p);
    Poly c2 = pmul(cubic, cubic, p);
    Poly sixteen_c2 = pscale(c2, 16, p);
    for (int n = 5; n <= nmax; ++n) {
        if (n % 2 == 0) {
            int m = n / 2;
            Poly t1 = pmul(f[m + 2], pmul(f[m - 1], f[m - 1], p), p);
            Poly t2 = pmul(f[m - 2], pmul(f[m + 1], f[m + 1], p), p);
            f[n] = pmul(f[m], psub(t1, t2, p), p);
        } else {
            int m = (n - 1) / 2;
            Poly m3 = pmul(f[m], pmul(f[m], f[m], p), p);
            Poly p3 = pmul(f[m + 1], pmul(f[m + 1], f[m + 1], p), p);
            Poly t1 = pmul(f[m + 2], m3, p);
            Poly t2 = pmul(f[m - 1], p3, p);
            if (m % 2 == 1)
                f[n] = psub(t1, pmul(sixteen_c2, t2, p), p);
            else
                f[n] = psub(pmul(sixteen_c2, t1, p), t2, p);
        }
    }
    return f;
}

inline Poly division_poly(int n, const Curve& E) {
    if (n < 1) throw cm_error("division_poly: need n >= 1");
    return division_polys_upto(E, n).at(static_cast<std::size_t>(n));
}

/* Check the closed form of Disc(f_m) against a direct resultant
 * computation.  With Delta = -16(4a^3 + 27b^2):
 *   m odd:  Disc = (-1)^((m-1)/2) m^((m^2-3)/2) (-Delta)^((m^2-1)(m^2-3)/24)
 *   m even: Disc = 2^4 m^((m^2-12)/2) (-Delta)^((m^2-4)(m^2-6)/24)
 * Returns the comparison verdict; requires m >= 3, p > m, nonsingular E. */
inline bool division_poly_disc_check(int m, const Curve& E) {
    if (m < 3) throw cm_error("division_poly_disc_check: need m >= 3");
    if (E.p <= m) throw cm_error("division_poly_disc_check: need p > m");
    Int delta = curve_disc(E);
    if (delta == 0) throw cm_error("division_poly_disc_check: singular curve");
    const Int& p = E.p;
    Poly fm = division_poly(m, E);
    Poly dm = pderiv(fm, p);
    int n = pdeg(fm);
    Int res = resultant(fm, dm, p);
    Int disc = mod(res * invmod(fm.back(), p), p);
    if ((Int(n) * (n - 1) / 2) % 2 == 1) disc = mod(-disc, p);
    Int m2 = Int(m) * m;
    Int expect;
    if (m % 2 == 1) {
        expect = powmod(m, (m2 - 3) / 2, p) *
                 powmod(mod(-delta, p), (m2 - 1) * (m2 - 3) / 24, p) % p;
        if ((m - 1) / 2 % 2 == 1) expect = mod(-expect, p);
    } else {
        expect = 16 * powmod(m, (m2 - 12) / 2, p) % p *
                 powmod(mod(-delta, p), (m2 - 4) * (m2 - 6) / 24, p) % p;
    }
    return disc == mod(expect, p);
}

/* Discriminant of the parametrized curve E(j, 1) as a function of j alone:
 * Delta(E(j)) = 2^12 3^6 j^2 / (j - 1728)^3.  (Equal, coefficient for
 * coefficient, to -16(4 a4^3 + 27 a6^2) of curve_from_j(j, 1, p).) */
inline Int discriminant_Ej(const Int& j_in, const Int& p) {
    Int j = mod(j_in, p);
    if (j == 0 || j == mod(1728, p))
        throw cm_error("discriminant_Ej: j = 0 and j = 1728 are unsupported");
    Int num = mod(Int(4096) * 729 % p * j % p * j, p);
    Int den = powmod(mod(j - 1728, p), 3, p);
    return mod(num * invmod(den, p), p);
}

/* ------------------------------------------------------- point counting */

/* Exhaustive #E(GF(p)) for p <= 10^6 — the unconditional cardinality
 * oracle everything else is judged against. */
inline Int naive_count(const Curve& E) {
    if (E.p > 1000000) throw cm_error("naive_count: p too large for exhaustive count");
    const std::uint64_t up = E.p.convert_to<std::uint64_t>();
    const std::uint64_t a = mod(E.a4, E.p).convert_to<std::uint64_t>();
    const std::uint64_t b = mod(E.a6, E.p).convert_to<std::uint64_t>();
    std::vector<std::uint8_t> sq(up, 0);
    for (std::uint64_t x = 0; x <= (up - 1) / 2; ++x) sq[x * x % up] = 1;
    std::uint64_t count = up + 1;  // infinity plus one default per x below
    // For each x: s = x^3 + a x + b; s == 0 gives 1 point, square s gives 2,
    // nonsquare gives 0.  Start from "1 per x" and adjust by +-1.
    for (std::uint64_t x = 0; x < up; ++x) {
        std::uint64_t s = (x * x % up * x + a * x + b) % up;
        if (s == 0) continue;
        if (sq[s]) ++count; else --count;
    }
    return Int(count);
}

/* Uniform-ish random point (affine or 2-torsion) on E. */
inline Point sample_point(const Curve& E, SplitMix64& rng) {
    const Int& p = E.p;
    while (true) {
        Int x = rng.randrange(p);
        Int s = mod(x * x % p * x + E.a4 * x + E.a6, p);
        if (s == 0) return Point::affine(x, 0);
        if (legendre(s, p) == 1) return Point::affine(x, *sqrt_mod(s, p));
    }
}

/* Randomized annihilation test: do `trials` random points all satisfy
 * [m]P = O?  A "true" is probabilistic evidence, a "false" is a proof that
 * m is not the group order (assuming m was a candidate order). */
inline bool order_check(const Curve& E, const Int& m, int trials, SplitMix64& rng) {
    if (trials < 1) throw cm_error("order_check: need trials >= 1");
    for (int i = 0; i < trials; ++i) {
        Point P = sample_point(E, rng);
        if (!scalar_mul(m, P, E).infinity) return false;
    }
    return true;
}

inline bool order_check(const Curve& E, const Int& m, int trials, std::uint64_t seed) {
    SplitMix64 rng(seed ^ 0xa4093822299f31d0ULL);
    return order_check(E, m, trials, rng);
}

}  // namespace cmcardinal

#endif  // CMCARDINAL_ECORE_HPP
