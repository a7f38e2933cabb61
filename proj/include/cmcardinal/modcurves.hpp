/*
 * modcurves.hpp — level-ell modular equations in canonical-invariant form
 * for ell in {2, 3, 5, 7}, rational kernel-polynomial templates attached to
 * their roots, the Skolem-resolvent solver for the level-3 equation, the
 * cube-root resolvent chain for the level-2 equation, and the explicit
 * 4-torsion abscissa polynomials.
 *
 * Conventions: Phi_ell(X, J) below is the "canonical" bivariate modular
 * equation relating the level-ell invariant X to the j-invariant J:
 *   ell = 2: (X + 16)^3 - J X
 *   ell = 3: (X + 27)(X + 3)^3 - J X
 *   ell = 5: (X^2 + 10X + 5)^3 - J X
 *   ell = 7: (X^2 + 13X + 49)(X^2 + 5X + 1)^3 - J X
 * A root v of Phi_ell(X, j(E)) singles out a rational ell-isogeny of E, and
 * the kernel templates express its kernel polynomial in terms of v.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#ifndef CMCARDINAL_MODCURVES_HPP
#define CMCARDINAL_MODCURVES_HPP

#include "ecore.hpp"

#include <array>
#include <utility>
#include <vector>

namespace cmcardinal {

/* Phi_ell(X, j) as a univariate polynomial in X over GF(p). */
inline Poly phi_ell_specialize(int ell, const Int& j_in, const Int& p) {
    Int j = mod(j_in, p);
    switch (ell) {
        case 2:
            return pnorm({4096, mod(768 - j, p), 48, 1}, p);
        case 3:
            return pnorm({729, mod(756 - j, p), 270, 36, 1}, p);
        case 5: {
            Poly q = pnorm({5, 10, 1}, p);
            Poly f = pmul(q, pmul(q, q, p), p);
            return psub(f, Poly{0, j}, p);
        }
        case 7: {
            Poly q1 = pnorm({49, 13, 1}, p);
            Poly q2 = pnorm({1, 5, 1}, p);
            Poly f = pmul(q1, pmul(q2, pmul(q2, q2, p), p), p);
            return psub(f, Poly{0, j}, p);
        }
        default:
            throw cm_error("phi_ell_specialize: supported levels are 2, 3, 5, 7");
    }
}

/* -------------------------------------------------- kernel templates */

/* Kernel abscissa of the 3-isogeny attached to a root v of Phi_3:
 * x3 = -(v + 27)(v + 3) / (v^2 + 18 v - 27). */
inline Int x3_from_v3(const Int& v_in, const Int& p) {
    Int v = mod(v_in, p);
    Int den = mod(v * v + 18 * v - 27, p);
    if (den == 0) throw cm_error("x3_from_v3: degenerate denominator");
    Int num = mod((v + 27) * (v + 3), p);
    return mod(-num * invmod(den, p), p);
}

/* Monic quadratic kernel polynomial of the 5-isogeny attached to a root v
 * of Phi_5.  With A = v^2 + 22v + 125, B = v^2 + 4v - 1, C = v^2 + 10v + 5:
 *   g5 = X^2 + 2(C/B) X + (1 - 36/A)(C/B)^2. */
inline Poly g5_normalized(const Int& v_in, const Int& p) {
    Int v = mod(v_in, p);
    Int A = mod(v * v + 22 * v + 125, p);
    Int B = mod(v * v + 4 * v - 1, p);
    Int C = mod(v * v + 10 * v + 5, p);
    if (A == 0 || B == 0) throw cm_error("g5_normalized: degenerate denominator");
    Int cb = mod(C * invmod(B, p), p);
    Int c1 = mod(2 * cb, p);
    Int c0 = mod(mod(1 - 36 * invmod(A, p), p) * cb % p * cb, p);
    return pnorm({c0, c1, 1}, p);
}

/* Monic cubic kernel polynomial of the 7-isogeny attached to a root v of
 * Phi_7, with A = v^4 + 14v^3 + 63v^2 + 70v - 7:
 *   c2 = 3 q1 q2 / A, c1 = 3 q3 q1 q2^2 / A^2, c0 = q1 q2^3 q4 / A^3,
 * where q1 = v^2+13v+49, q2 = v^2+5v+1, q3 = v^2+13v+33,
 *       q4 = v^4+26v^3+219v^2+778v+881. */
inline Poly g7_normalized(const Int& v_in, const Int& p) {
    Int v = mod(v_in, p);
    Int v2 = mod(v * v, p);
    Int v3 = mod(v2 * v, p);
    Int v4 = mod(v3 * v, p);
    Int A = mod(v4 + 14 * v3 + 63 * v2 + 70 * v - 7, p);
    if (A == 0) throw cm_error("g7_normalized: degenerate denominator");
    Int q1 = mod(v2 + 13 * v + 49, p);
    Int q2 = mod(v2 + 5 * v + 1, p);
    Int q3 = mod(v2 + 13 * v + 33, p);
    Int q4 = mod(v4 + 26 * v3 + 219 * v2 + 778 * v + 881, p);
    Int iA = invmod(A, p);
    Int c2 = mod(3 * q1 % p * q2 % p * iA, p);
    Int c1 = mod(3 * q3 % p * q1 % p * q2 % p * q2 % p * iA % p * iA, p);
    Int c0 = mod(q1 * q2 % p * q2 % p * q2 % p * q4 % p * iA % p * iA % p * iA, p);
    return pnorm({c0, c1, c2, 1}, p);
}

/* Kernel polynomial for the ell-isogeny attached to a root v of
 * Phi_ell(X, j); checks that v really is a root.  Degree (ell - 1) / 2. */
inline Poly kernel_factor(int ell, const Int& v, const Int& j, const Curve& E) {
    if (ell != 3 && ell != 5 && ell != 7)
        throw cm_error("kernel_factor: supported levels are 3, 5, 7");
    if (peval(phi_ell_specialize(ell, j, E.p), v, E.p) != 0)
        throw cm_error("kernel_factor: v is not a root of the modular equation");
    if (ell == 3) return pnorm({mod(-x3_from_v3(v, E.p), E.p), 1}, E.p);
    if (ell == 5) return g5_normalized(v, E.p);
    return g7_normalized(v, E.p);
}

/* ---------------------------------------------------------- 4-torsion */

/* P2(X; u): the quadratic whose roots are the abscissas of the two
 * 4-torsion points lying over a distinguished 2-torsion point of E(j(u)),
 * with j = (u + 16)^3 / u:
 *   P2 = X^2 + 2(u+16)/(u-8) X + (u-80)(u+16)^2 / ((u-8)^2 (u+64)). */
inline Poly four_torsion_P2(const Int& u_in, const Int& p) {
    Int u = mod(u_in, p);
    if (u == 0) throw cm_error("four_torsion_P2: u = 0 (j undefined)");
    if (u == mod(8, p) || u == mod(-64, p))
        throw cm_error("four_torsion_P2: degenerate denominator");
    Int u8 = mod(u - 8, p), u64 = mod(u + 64, p), u16 = mod(u + 16, p);
    Int c1 = mod(2 * u16 % p * invmod(u8, p), p);
    Int c0 = mod(mod(u - 80, p) * u16 % p * u16 % p *
                 invmod(u8 * u8 % p * u64 % p, p), p);
    return pnorm({c0, c1, 1}, p);
}

/* P4(X; u): the complementary monic quartic with f_4 = 2 P2 P4 on E(j(u)). */
inline Poly four_torsion_P4(const Int& u_in, const Int& p) {
    Int u = mod(u_in, p);
    if (u == 0) throw cm_error("four_torsion_P4: u = 0 (j undefined)");
    if (u == mod(8, p) || u == mod(-64, p))
        throw cm_error("four_torsion_P4: degenerate denominator");
    Int u8 = mod(u - 8, p), u64 = mod(u + 64, p), u16 = mod(u + 16, p);
    Int iu8 = invmod(u8, p), iu64 = invmod(u64, p);
    Int u16_2 = mod(u16 * u16, p);
    Int u16_3 = mod(u16_2 * u16, p);
    Int u16_4 = mod(u16_3 * u16, p);
    Int e3 = mod(-2 * u16 % p * iu8, p);
    Int e2 = mod(-12 * u16_2 % p * iu64 % p * iu8, p);
    Int e1 = mod(-2 * mod(7 * u + 16, p) % p * u16_3 % p * iu64 % p *
                 iu8 % p * iu8 % p * iu8, p);
    Int e0 = mod(-mod(5 * u * u + 640 * u - 256, p) * u16_4 % p *
                 iu64 % p * iu64 % p * iu8 % p * iu8 % p * iu8 % p * iu8, p);
    return pnorm({e0, e1, e2, e3, 1}, p);
}

/* Rational splitting P4 = G_a G_b under the substitution u = 64/(v^2 - 1):
 *   G_a = X^2 + 2(v^2+3)/(v(v+3)) X + (v^2+12v-9)(v^2+3)^2 / ((v+3)^2 (v-3)^2 v^2)
 *   G_b = X^2 + 2(v^2+3)/(v(v-3)) X + (v^2-12v-9)(v^2+3)^2 / ((v+3)^2 (v-3)^2 v^2)
 * and v -> -v swaps the two factors. */
inline std::pair<Poly, Poly> four_torsion_P4_split(const Int& v_in, const Int& p) {
    Int v = mod(v_in, p);
    if (v == 0 || v == mod(3, p) || v == mod(-3, p) || mod(v * v - 1, p) == 0)
        throw cm_error("four_torsion_P4_split: degenerate v");
    Int v2 = mod(v * v, p);
    Int t = mod(v2 + 3, p);
    Int den = mod(mod(v + 3, p) * mod(v + 3, p) % p * mod(v - 3, p) % p *
                  mod(v - 3, p) % p * v2, p);
    Int iden = invmod(den, p);
    Int a1 = mod(2 * t % p * invmod(v * mod(v + 3, p) % p, p), p);
    Int a0 = mod(mod(v2 + 12 * v - 9, p) * t % p * t % p * iden, p);
    Int b1 = mod(2 * t % p * invmod(v * mod(v - 3, p) % p, p), p);
    Int b0 = mod(mod(v2 - 12 * v - 9, p) * t % p * t % p * iden, p);
    return {pnorm({a0, a1, 1}, p), pnorm({b0, b1, 1}, p)};
}

/* --------------------------------------- level-3 Skolem resolvent solver */

/* Solve Phi_3(X, j) = 0 with j = gamma2^3 by radicals: with zeta a
 * primitive cube root of unity, the numbers
 *   y_i = 4 (zeta^{2i} gamma2^2 + 12 zeta^i gamma2 + 144),  i = 1, 2
 * are squares whose roots z_1, z_2 determine z_3 = 8 (j - 1728) / (z_1 z_2)
 * and a root X_1 = (z_1 + z_2 + z_3 - 36) / 4.  The square roots carry a
 * sign ambiguity, so the assignments are tried in a fixed order
 * (odd representative first, matching the classical normalization) until
 * one verifies against Phi_3. */
inline Int solve_phi3_skolem(const Int& gamma2_in, const Int& p,
                             std::uint64_t seed = 0) {
    Int g = mod(gamma2_in, p);
    Int j = powmod(g, 3, p);
    if (j == 0 || j == mod(1728, p))
        throw cm_error("solve_phi3_skolem: gamma2^3 in {0, 1728} is unsupported");
    Int zeta = cube_root_of_unity(p, seed);  // requires p = 1 mod 3
    Int z2 = mod(zeta * zeta, p);
    std::array<Int, 2> y{};
    for (int i = 1; i <= 2; ++i) {
        Int zi = (i == 1) ? zeta : z2;
        Int zi2 = mod(zi * zi, p);
        y[i - 1] = mod(4 * (zi2 * g % p * g + 12 * zi % p * g + 144), p);
        if (y[i - 1] == 0 || legendre(y[i - 1], p) != 1)
            throw cm_error("solve_phi3_skolem: resolvent value is not a nonzero square");
    }
    auto odd_rep = [&](const Int& r) { return r % 2 == 1 ? r : p - r; };
    Int r1 = *sqrt_mod(y[0], p), r2 = *sqrt_mod(y[1], p);
    Poly phi = phi_ell_specialize(3, j, p);
    Int quarter = invmod(4, p);
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            Int za = odd_rep(r1), zb = odd_rep(r2);
            if (s1) za = p - za;
            if (s2) zb = p - zb;
            Int zc = mod(8 * mod(j - 1728, p) % p * invmod(za * zb % p, p), p);
            Int X1 = mod((za + zb + zc - 36) * quarter, p);
            if (peval(phi, X1, p) == 0) return X1;
        }
    }
    throw cm_error("solve_phi3_skolem: no sign assignment verifies");
}

/* ------------------------------------- level-11 invariant to gamma2 */

/* gamma2 candidates attached to a root w of the level-11 invariant's class
 * polynomial: roots of the explicit quintic relation between gamma2 and w,
 * ascending.  (Some roots can be spurious — downstream consumers verify
 * anything they build from them.) */
inline std::vector<Int> gamma2_from_w11(const Int& w_in, const Int& p,
                                        std::uint64_t seed = 1) {
    Int w = mod(w_in, p);
    auto W = [&](int k) { return powmod(w, k, p); };
    Poly q = pnorm({mod(W(12) - 1980 * W(9) + 980078 * W(6) + 47066580 * W(3) + 121, p),
                    mod(880 * W(8) - 871200 * W(5) + 560560 * W(2), p),
                    mod(44 * W(7) + 150040 * W(4) + 1244 * w, p),
                    mod(-7865 * W(3), p),
                    mod(154 * W(2), p),
                    mod(-w, p)},
                   p);
    if (q.empty()) throw cm_error("gamma2_from_w11: zero polynomial");
    return proots(q, p, seed);
}

/* --------------------------------------- level-2 resolvent (cube roots) */

namespace detail {

/* Cube roots of rho in GF(p^2), via the 3-Sylow discrete-log method
 * (Adleman–Manders–Miller specialized to exponent 3).  Returns all roots
 * (zero or three of them). */
inline std::vector<QuadExt> quadext_cube_roots(const QuadExt& rho, const QuadCtx& K) {
    const Int& p = K.p;
    Int q1 = p * p - 1;  // group order of GF(p^2)*
    Int t = q1;
    int s = 0;
    while (t % 3 == 0) { t /= 3; ++s; }
    if (s == 0) throw cm_error("quadext_cube_roots: 3 does not divide p^2 - 1");
    if (!K.eq(K.pow(rho, q1 / 3), K.make(1))) return {};  // not a cube
    // Cube nonresidue eta: scan c + w, c = 0, 1, 2, ...  (deterministic).
    QuadExt eta = K.make(0, 1);
    for (Int c = 0;; ++c) {
        eta = K.make(c, 1);
        if (!K.eq(K.pow(eta, q1 / 3), K.make(1))) break;
    }
    QuadExt g = K.pow(eta, t);  // generator of the 3-Sylow subgroup (order 3^s)
    Int pw = 1;
    for (int i = 0; i < s - 1; ++i) pw *= 3;
    QuadExt omega = K.pow(g, pw);  // primitive cube root of unity
    // y = rho^a with 3a = 1 mod t, so y^3 / rho lies in the Sylow subgroup.
    Int a = (t % 3 == 1) ? Int((2 * t + 1) / 3) : Int((t + 1) / 3);
    if (mod(3 * a, t) != 1) throw cm_error("quadext_cube_roots: exponent arithmetic");
    QuadExt y = K.pow(rho, a);
    QuadExt D = K.mul(K.mul(y, K.mul(y, y)), K.inv(rho));
    // Base-3 discrete log of D to the base g inside the Sylow subgroup.
    Int m = 0, threei = 1;
    for (int i = 0; i < s; ++i) {
        QuadExt e = K.mul(D, K.inv(K.pow(g, m)));
        Int steps = 1;
        for (int k = 0; k < s - 1 - i; ++k) steps *= 3;
        QuadExt c = K.pow(e, steps);
        int digit;
        if (K.eq(c, K.make(1))) digit = 0;
        else if (K.eq(c, omega)) digit = 1;
        else digit = 2;
        m += digit * threei;
        threei *= 3;
    }
    if (m % 3 != 0) throw cm_error("quadext_cube_roots: claimed cube has odd 3-adic log");
    QuadExt z = K.mul(y, K.inv(K.pow(g, m / 3)));
    if (!K.eq(K.mul(z, K.mul(z, z)), rho))
        throw cm_error("quadext_cube_roots: verification failed");
    return {z, K.mul(z, omega), K.mul(z, K.mul(omega, omega))};
}

}  // namespace detail

/* All rational roots of Phi_2(X, J), computed by the resolvent chain:
 * substituting Y = X + 16 gives Y^3 - JY + 16J = 0; with alpha, beta the
 * roots of W^2 - 48W + J/3 (discriminant (-4/3)(J - 1728), possibly in
 * GF(p^2)), every rational root has the form Y = (beta z - alpha)/(z - 1)
 * for a cube root z of alpha/beta.  alpha = beta (J = 1728) cannot happen
 * here, and a repeated-root discriminant zero falls back to direct root
 * extraction.  Result ascending; agrees with proots of the cubic. */
inline std::vector<Int> solve_phi2_resolvent(const Int& J_in, const Int& p) {
    if (p <= 3) throw cm_error("solve_phi2_resolvent: need p > 3");
    Int J = mod(J_in, p);
    if (J == 0 || J == mod(1728, p))
        throw cm_error("solve_phi2_resolvent: J in {0, 1728} is unsupported");
    Poly phi = phi_ell_specialize(2, J, p);
    Int disc = mod(2304 - 4 * J % p * invmod(3, p), p);  // = (-4/3)(J - 1728)
    if (disc == 0) return proots(phi, p);  // z = 1 branch: direct fallback
    QuadCtx K = make_quad_ctx(p);
    QuadExt sd = quadext_sqrt(disc, K);
    Int half = invmod(2, p);
    QuadExt alpha = K.mul(K.add(K.make(48), sd), K.make(half));
    QuadExt beta = K.mul(K.sub(K.make(48), sd), K.make(half));
    QuadExt rho = K.mul(alpha, K.inv(beta));
    std::vector<Int> roots;
    for (const QuadExt& z : detail::quadext_cube_roots(rho, K)) {
        if (K.eq(z, K.make(1))) continue;
        QuadExt Y = K.mul(K.sub(K.mul(beta, z), alpha), K.inv(K.sub(z, K.make(1))));
        if (!K.is_rational(Y)) continue;
        Int X = mod(Y.a - 16, p);
        if (peval(phi, X, p) != 0)
            throw cm_error("solve_phi2_resolvent: chain produced a non-root");
        roots.push_back(X);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace cmcardinal

#endif  // CMCARDINAL_MODCURVES_HPP
