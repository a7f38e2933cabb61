/* Checks for the modular-curve layer: specialized modular equations,
 * kernel-polynomial templates for ell = 3, 5, 7, the 4-torsion quadratic/
 * quartic pair and its rational splitting, the radical solver for the
 * level-3 equation, the level-11 invariant-to-gamma2 quintic, and the
 * level-2 resolvent chain.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#include <cmcardinal/classdata.hpp>
#include <cmcardinal/modcurves.hpp>

#include "testutil.hpp"

#include <algorithm>

using namespace cmcardinal;
using testutil::batch;

static const char* tag_for(int ell) {
    switch (ell) {
        case 2: return "weber_sq";
        case 3: return "g3e12";
        case 5: return "g5e6";
        default: return "g7e4";
    }
}

static void test_phi_specialize() {
    // degrees: Phi_ell(X, j) has degree ell + 1 in X
    bool ok = true;
    for (int ell : {2, 3, 5, 7})
        ok = ok && pdeg(phi_ell_specialize(ell, 5, 101)) == ell + 1;
    batch(ok, "Phi_ell(X, j) has degree ell + 1");

    // the parametrization j(v) makes v a root of Phi_ell(X, j(v))
    ok = true;
    int tried = 0;
    for (Int p : {Int(101), Int(109), Int(139)}) {
        for (int ell : {2, 3, 5, 7}) {
            for (Int v = 1; v < 40; ++v) {
                Int j;
                try { j = j_from_invariant(tag_for(ell), v, p); }
                catch (const cm_error&) { continue; }
                ++tried;
                ok = ok && peval(phi_ell_specialize(ell, j, p), v, p) == 0;
            }
        }
    }
    batch(ok && tried > 400, "v is a root of Phi_ell(X, j(v)) across the parametrization",
          std::to_string(tried) + " pairs");
}

static void test_kernel_templates() {
    CHECKL(x3_from_v3(3, 109) == 104, "x3(v = 3) == 104 over GF(109)");
    CHECKL(x3_from_v3(109, 139) == 135, "x3(v = 109) == 135 over GF(139)");
    CHECKL(g5_normalized(163, 281) == Poly({198, 245, 1}),
           "g5(163) == X^2 + 245X + 198 over GF(281)");
    CHECKL(g5_normalized(76, 109) == Poly({13, 13, 1}),
           "g5(76) == X^2 + 13X + 13 over GF(109)");
    CHECKL(g5_normalized(216, 571) == Poly({412, 213, 1}),
           "g5(216) == X^2 + 213X + 412 over GF(571)");
    CHECKL(g7_normalized(62, 107) == Poly({73, 44, 104, 1}),
           "g7(62) == X^3 + 104X^2 + 44X + 73 over GF(107)");

    // kernel_factor divides the division polynomial of the same level
    bool ok = true;
    int tried = 0;
    for (Int p : {Int(109), Int(139), Int(281), Int(571)}) {
        for (int ell : {3, 5, 7}) {
            for (Int v = 2; v < 30; ++v) {
                Int j;
                try { j = j_from_invariant(tag_for(ell), v, p); }
                catch (const cm_error&) { continue; }
                if (j == 0 || j == mod(1728, p)) continue;
                Poly ker;
                try { ker = kernel_factor(ell, v, j, curve_from_j(j, 1, p)); }
                catch (const cm_error&) { continue; }  // degenerate template
                ++tried;
                Curve E = curve_from_j(j, 1, p);
                ok = ok && pdeg(ker) == (ell - 1) / 2;
                ok = ok && pmod(division_poly(ell, E), ker, p).empty();
            }
        }
    }
    batch(ok && tried > 200, "kernel_factor divides division_poly(ell, E(j(v)))",
          std::to_string(tried) + " triples");

    // a non-root v is rejected
    bool threw = false;
    try { kernel_factor(3, 1, 5, curve_from_j(5, 1, 101)); }
    catch (const cm_error&) { threw = true; }
    CHECKL(threw, "kernel_factor rejects v that is not a root of Phi_ell");
}

static void test_four_torsion() {
    {
        auto r = proots(four_torsion_P2(7, 29), 29);
        CHECKL(std::find(r.begin(), r.end(), Int(7)) != r.end(),
               "P2(u = 7) has root 7 over GF(29)");
        r = proots(four_torsion_P2(16, 41), 41);
        CHECKL(std::find(r.begin(), r.end(), Int(19)) != r.end(),
               "P2(u = 16) has root 19 over GF(41)");
        r = proots(four_torsion_P2(102, 409), 409);
        CHECKL(std::find(r.begin(), r.end(), Int(159)) != r.end(),
               "P2(u = 102) has root 159 over GF(409)");
    }
    // degenerate arguments
    {
        int thrown = 0;
        for (Int u : {Int(0), Int(8), Int(-64)}) {
            try { four_torsion_P2(u, 101); } catch (const cm_error&) { ++thrown; }
            try { four_torsion_P4(u, 101); } catch (const cm_error&) { ++thrown; }
        }
        CHECKL(thrown == 6, "P2/P4 reject u in {0, 8, -64}");
    }
    // f_4 == 2 P2 P4 on E(j(u)) and the P2 discriminant closed form
    bool ok = true;
    int tried = 0;
    for (Int p : {Int(101), Int(109), Int(409)}) {
        for (Int u = 1; u < 60; ++u) {
            if (u == mod(8, p) || u == mod(-64, p)) continue;
            Int j = j_from_invariant("weber_sq", u, p);
            if (j == 0 || j == mod(1728, p)) continue;
            ++tried;
            Curve E = curve_from_j(j, 1, p);
            Poly P2 = four_torsion_P2(u, p);
            Poly P4 = four_torsion_P4(u, p);
            Poly want = pscale(pmul(P2, P4, p), 2, p);
            ok = ok && division_poly(4, E) == want;
            // Disc(P2) = 576 (u+16)^2 / ((u-8)^2 (u+64))
            Int disc = mod(P2[1] * P2[1] - 4 * P2[0], p);
            Int num = mod(576 * mod(u + 16, p) % p * mod(u + 16, p), p);
            Int den = mod(mod(u - 8, p) * mod(u - 8, p) % p * mod(u + 64, p), p);
            ok = ok && mod(disc * den - num, p) == 0;
        }
    }
    batch(ok && tried > 150, "f_4 == 2 P2 P4 on E(j(u)); Disc(P2) closed form",
          std::to_string(tried) + " specializations");

    // rational splitting P4 = G_a G_b under u = 64 / (v^2 - 1)
    ok = true;
    tried = 0;
    for (Int p : {Int(101), Int(109)}) {
        for (Int v = 2; v < 50; ++v) {
            if (v == 3 || v == p - 3 || mod(v * v - 1, p) == 0) continue;
            Int u = mod(64 * invmod(mod(v * v - 1, p), p), p);
            if (u == 0 || u == mod(8, p) || u == mod(-64, p)) continue;
            ++tried;
            auto [ga, gb] = four_torsion_P4_split(v, p);
            ok = ok && pmul(ga, gb, p) == four_torsion_P4(u, p);
            auto [ga2, gb2] = four_torsion_P4_split(mod(-v, p), p);
            ok = ok && ga == gb2 && gb == ga2;  // v -> -v swaps the factors
        }
    }
    batch(ok && tried > 80, "P4 == G_a G_b, and v -> -v swaps the split",
          std::to_string(tried) + " specializations");
    int thrown = 0;
    for (Int v : {Int(0), Int(3), Int(-3), Int(1), Int(-1)}) {
        try { four_torsion_P4_split(v, 101); } catch (const cm_error&) { ++thrown; }
    }
    CHECKL(thrown == 5, "P4 split rejects v in {0, +-1, +-3}");
}

static void test_skolem() {
    CHECKL(solve_phi3_skolem(110, 139) == 109,
           "radical solution of Phi_3 at gamma2 = 110 over GF(139) is 109");
    bool ok = true;
    int solved = 0;
    for (Int p : {Int(103), Int(109), Int(139), Int(571)}) {
        if (p % 3 != 1) continue;
        for (Int g = 2; g < 70; ++g) {
            Int j = powmod(g, 3, p);
            if (j == 0 || j == mod(1728, p)) continue;
            Int x1;
            try { x1 = solve_phi3_skolem(g, p); }
            catch (const cm_error&) { continue; }  // resolvent not a square
            ++solved;
            ok = ok && peval(phi_ell_specialize(3, j, p), x1, p) == 0;
        }
    }
    batch(ok && solved > 40, "radical solutions verify against Phi_3",
          std::to_string(solved) + " solved");
}

static void test_gamma2_from_w11() {
    auto g2s = gamma2_from_w11(21, 103);
    CHECKL(std::find(g2s.begin(), g2s.end(), Int(63)) != g2s.end(),
           "gamma2 candidates of w = 21 over GF(103) contain 63");
    CHECKL(std::is_sorted(g2s.begin(), g2s.end()), "candidates are ascending");
}

static void test_phi2_resolvent() {
    bool ok = true;
    int agreed = 0;
    for (Int p : {Int(101), Int(103), Int(109)}) {
        for (Int J = 2; J < 60; ++J) {
            if (J == mod(1728, p)) continue;
            std::vector<Int> want = proots(phi_ell_specialize(2, J, p), p);
            std::vector<Int> got = solve_phi2_resolvent(J, p);
            ok = ok && got == want;
            if (!want.empty()) ++agreed;
        }
    }
    batch(ok && agreed > 50,
          "resolvent chain finds exactly the rational roots of Phi_2",
          std::to_string(agreed) + " nonempty root sets");
    int thrown = 0;
    try { solve_phi2_resolvent(0, 101); } catch (const cm_error&) { ++thrown; }
    try { solve_phi2_resolvent(1728 % 101, 101); } catch (const cm_error&) { ++thrown; }
    CHECKL(thrown == 2, "resolvent rejects J in {0, 1728}");
}

int main() {
    test_phi_specialize();
    test_kernel_templates();
    test_four_torsion();
    test_skolem();
    test_gamma2_from_w11();
    test_phi2_resolvent();
    return testutil::done("test_modcurves");
}
