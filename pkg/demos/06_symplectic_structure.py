"""
Two pairings and what they forgive
==================================

Tangent deformations of a curve are profiles f along the tangent
direction.  Two antisymmetric pairings act on profiles: a first-order one
that ignores constants, and a curvature-weighted second-order one that
ignores the three deformations induced by unimodular maps of the plane.
Both are preserved by the transformations.
"""

import numpy as np

import centrokdv.backlund as bk
import centrokdv.curve_core as cc
import centrokdv.invariants as iv
import centrokdv.periodic_fn as pf

n = 128
rng = np.random.default_rng(5)
gamma = cc.random_projective(rng, n, strength=0.4)
Gamma = cc.lift(gamma)
pot = cc.curvature(Gamma)

f = pf.random_band_limited(rng, n, parity="periodic", max_mode=4)
g = pf.random_band_limited(rng, n, parity="periodic", max_mode=4)

# The first pairing integrates f g' dt; constants are in its kernel.
print("omega(f, g) =", iv.omega_pair(f, g))
print("omega(f, 1) =", iv.omega_pair(f, pf.constant(1.0, n)))

# The second pairing weights by the curvature; the three profiles induced
# by the unimodular symmetries span its kernel.
print("Omega(f, g) =", iv.big_omega_pair(pot, f, g))
for i, k in enumerate(iv.killing_fields(Gamma)):
    print(f"Omega(killing_{i + 1}, g) =", iv.big_omega_pair(pot, k, g))

# The same pairings computed purely in the angle chart differ by fixed
# constant factors: the first doubles, the second picks up -4.
first, second = iv.projective_forms(gamma, f, g)
print("chart factor checks:",
      abs(iv.omega_pair(f, g) - 0.5 * first),
      abs(iv.big_omega_pair(pot, f, g) + 0.25 * second))

# Pushing profiles through a transformation preserves both pairings; the
# second is evaluated at the image curvature.
res = bk.apply_tc(Gamma, 0.5, "minus")
ff = bk.pushforward_tangent(Gamma, 0.5, "minus", f, riccati=res.riccati)
gg = bk.pushforward_tangent(Gamma, 0.5, "minus", g, riccati=res.riccati)
print("omega invariance gap:", abs(iv.omega_pair(ff, gg) - iv.omega_pair(f, g)))
print("Omega invariance gap:",
      abs(iv.big_omega_pair(res.image_curvature, ff, gg) - iv.big_omega_pair(pot, f, g)))

# Differentiating the quadratic moments along a deformation recovers the
# first pairing against three fixed profiles, one per moment.
resid = iv.sl2_hamiltonian_check(Gamma, f)
print("moment derivative identities, worst residual:", max(resid.values()))
