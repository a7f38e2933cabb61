/*
 * modarith.hpp — exact arithmetic modulo an odd prime p: Legendre symbol,
 * Tonelli–Shanks square roots, cube roots of unity, the quadratic extension
 * field GF(p^2), Cornacchia's solver for 4p = U^2 + D V^2, and the seeded
 * deterministic RNG used everywhere randomness is called for.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#ifndef CMCARDINAL_MODARITH_HPP
#define CMCARDINAL_MODARITH_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cmcardinal {

using Int = boost::multiprecision::cpp_int;

/* Single exception type: every violated precondition or internal
 * inconsistency fails loudly with a message. */
struct cm_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Least nonnegative residue of a modulo p. */
inline Int mod(const Int& a, const Int& p) {
    Int r = a % p;
    if (r < 0) r += p;
    return r;
}

/* base^exp mod p for exp >= 0. */
inline Int powmod(const Int& base, const Int& exp, const Int& p) {
    if (exp < 0) throw cm_error("powmod: negative exponent");
    if (p == 1) return 0;
    return boost::multiprecision::powm(mod(base, p), exp, p);
}

/* Modular inverse by extended Euclid; throws when gcd(a, p) != 1. */
inline Int invmod(const Int& a, const Int& p) {
    Int r0 = p, r1 = mod(a, p), s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw cm_error("invmod: element not invertible");
    return mod(s0, p);
}

/* Legendre symbol (a/p) in {-1, 0, +1}; p must be an odd prime >= 3. */
inline int legendre(const Int& a, const Int& p) {
    if (p < 3 || p % 2 == 0)
        throw cm_error("legendre: modulus must be an odd prime");
    Int r = mod(a, p);
    if (r == 0) return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/* Square root mod p (Tonelli–Shanks).  Returns the root with even least
 * residue so that callers needing a single deterministic representative all
 * agree; consumers of "either root" must work for both choices.  Returns
 * nullopt exactly when a is a nonresidue. */
inline std::optional<Int> sqrt_mod(const Int& a_in, const Int& p) {
    Int a = mod(a_in, p);
    if (a == 0) return Int(0);
    if (legendre(a, p) != 1) return std::nullopt;
    Int r;
    if (p % 4 == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        Int q = p - 1;
        unsigned s = 0;
        while (q % 2 == 0) { q /= 2; ++s; }
        Int z = 2;
        while (legendre(z, p) != -1) ++z;
        Int c = powmod(z, q, p);
        r = powmod(a, (q + 1) / 2, p);
        Int t = powmod(a, q, p);
        unsigned m = s;
        while (t != 1) {
            unsigned i = 0;
            Int t2 = t;
            while (t2 != 1) { t2 = t2 * t2 % p; ++i; }
            Int b = c;
            for (unsigned k = 0; k + i + 1 < m; ++k) b = b * b % p;
            r = r * b % p;
            c = b * b % p;
            t = t * c % p;
            m = i;
        }
    }
    if (r % 2 == 1) r = p - r;
    return r;
}

/* Primitive cube root of unity mod p (p = 1 mod 3 required).  The candidate
 * scan is a fixed ascending order, so the result is deterministic and stable
 * across seeds; the seed parameter is accepted for interface uniformity. */
inline Int cube_root_of_unity(const Int& p, std::uint64_t /*seed*/ = 0) {
    if (p % 3 != 1) throw cm_error("cube_root_of_unity: need p = 1 mod 3");
    for (Int c = 2;; ++c) {
        Int z = powmod(c, (p - 1) / 3, p);
        if (z != 1) return z;  // z^3 = c^(p-1) = 1 and z != 1
    }
}

/* Integer square root (floor). */
inline Int isqrt(const Int& n) {
    if (n < 0) throw cm_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

/* Cornacchia: nonnegative (U, V) with 4p = U^2 + D V^2, or nullopt when no
 * representation exists.  U = 0 or V = 0 are returned as-is; resolving the
 * signs is the caller's job. */
inline std::optional<std::pair<Int, Int>> cornacchia(const Int& D, const Int& p) {
    if (D <= 0) throw cm_error("cornacchia: D must be positive");
    if (p <= D / 4 || p <= 3) {  // tiny p: direct search over V
        for (Int V = 0; D * V * V <= 4 * p; ++V) {
            Int t = 4 * p - D * V * V;
            Int U = isqrt(t);
            if (U * U == t) return std::make_pair(U, V);
        }
        return std::nullopt;
    }
    if (legendre(mod(-D, p), p) != 1) return std::nullopt;
    Int x = *sqrt_mod(mod(-D, p), p);
    if ((x - D) % 2 != 0) x = p - x;  // fix parity so the descent lands on U
    Int a = 2 * p, b = x;
    Int lim = isqrt(4 * p);
    while (b > lim) {
        Int r = a % b;
        a = b;
        b = r;
    }
    Int t = 4 * p - b * b;
    if (t % D != 0) return std::nullopt;
    Int w = t / D;
    Int s = isqrt(w);
    if (s * s != w) return std::nullopt;
    return std::make_pair(b, s);
}

/* Probabilistic primality check (Miller–Rabin); used only to guard CLI
 * input — library callers are responsible for the primality of p. */
inline bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    return boost::multiprecision::miller_rabin_test(n, 25);
}

/* ------------------------------------------------------------------ RNG */

/* splitmix64: tiny, deterministic, seedable; drives point sampling and
 * equal-degree splitting.  All externally visible results are required to be
 * independent of the seed (tested), so any fixed generator works. */
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /* Uniform-enough value in [0, n): 64 excess bits make the mod bias
     * negligible, and no consumer's correctness depends on uniformity. */
    Int randrange(const Int& n) {
        if (n <= 0) throw cm_error("randrange: empty range");
        std::size_t bits = boost::multiprecision::msb(n) + 1 + 64;
        Int acc = 0;
        for (std::size_t got = 0; got < bits; got += 64)
            acc = (acc << 64) | next();
        return acc % n;
    }
};

/* Low 64 bits of an Int, used for seed mixing. */
inline std::uint64_t low_bits(const Int& a) {
    Int m = a < 0 ? -a : a;
    return static_cast<std::uint64_t>(m & 0xFFFFFFFFFFFFFFFFULL);
}

/* --------------------------------------------- quadratic extension field */

/* Element a + b*w of GF(p^2), w^2 = d with d a quadratic nonresidue. */
struct QuadExt {
    Int a, b;
};

struct QuadCtx {
    Int p, d;

    QuadExt make(const Int& a, const Int& b = 0) const {
        return {mod(a, p), mod(b, p)};
    }
    bool eq(const QuadExt& x, const QuadExt& y) const {
        return x.a == y.a && x.b == y.b;
    }
    bool is_rational(const QuadExt& x) const { return x.b == 0; }
    QuadExt add(const QuadExt& x, const QuadExt& y) const {
        return {mod(x.a + y.a, p), mod(x.b + y.b, p)};
    }
    QuadExt sub(const QuadExt& x, const QuadExt& y) const {
        return {mod(x.a - y.a, p), mod(x.b - y.b, p)};
    }
    QuadExt mul(const QuadExt& x, const QuadExt& y) const {
        return {mod(x.a * y.a + d * x.b % p * y.b, p),
                mod(x.a * y.b + x.b * y.a, p)};
    }
    QuadExt inv(const QuadExt& x) const {
        Int n = mod(x.a * x.a - d * x.b % p * x.b, p);  // norm a^2 - d b^2
        if (n == 0) throw cm_error("QuadExt: inverse of zero");
        Int ni = invmod(n, p);
        return {mod(x.a * ni, p), mod(-x.b * ni, p)};
    }
    QuadExt pow(QuadExt x, Int e) const {
        if (e < 0) { x = inv(x); e = -e; }
        QuadExt r = make(1);
        while (e > 0) {
            if ((e & 1) != 0) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
};

/* Context with the canonical (smallest) quadratic nonresidue as d. */
inline QuadCtx make_quad_ctx(const Int& p) {
    Int d = 2;
    while (legendre(d, p) != -1) ++d;
    return {p, d};
}

/* Square root of a base-field element, landing in GF(p) (b-part zero) iff
 * legendre(a, p) >= 0, else in GF(p^2). */
inline QuadExt quadext_sqrt(const Int& a_in, const QuadCtx& K) {
    Int a = mod(a_in, K.p);
    if (a == 0) return K.make(0);
    if (legendre(a, K.p) == 1) return K.make(*sqrt_mod(a, K.p));
    // a nonresidue: a/d is a residue, sqrt(a) = sqrt(a/d) * w
    Int t = *sqrt_mod(mod(a * invmod(K.d, K.p), K.p), K.p);
    return K.make(0, t);
}

}  // namespace cmcardinal

#endif  // CMCARDINAL_MODARITH_HPP
