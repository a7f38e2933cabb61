/*
 * cmcardinal.hpp — umbrella header for the cm-cardinal library: constructing
 * elliptic curves over GF(p) with complex multiplication by the imaginary
 * quadratic order of discriminant -D, and determining their exact group
 * order m = p + 1 - U_signed with the sign of U resolved through the
 * Frobenius action on small rational torsion.
 *
 * Part of cm-cardinal; see LICENSE at the repository root.
 */
#ifndef CMCARDINAL_HPP
#define CMCARDINAL_HPP

#include "cmcardinal/modarith.hpp"
#include "cmcardinal/polyring.hpp"
#include "cmcardinal/ecore.hpp"
#include "cmcardinal/modcurves.hpp"
#include "cmcardinal/classdata.hpp"
#include "cmcardinal/cmbuild.hpp"

#endif  // CMCARDINAL_HPP
