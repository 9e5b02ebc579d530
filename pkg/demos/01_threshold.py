"""Reproduction number of a bounded habitat.

R0 on an interval decides whether a small population can persist there.
We compute it for a homogeneous habitat, where a closed form exists, and
then for a habitat with a breeding hot spot in the middle.
"""
import math

import numpy as np

from aedesfront import CoefficientProfile, ProfileSpec, compute_R0, threshold_report

# Homogeneous rates: r = gamma = mu2 = 1, mu1 = 0.25, D = 1.
hom = CoefficientProfile.homogeneous(1.0, 1.0, 0.25, 1.0, D=1.0)

# On an interval of length ell the exact value is
#   sqrt( r gamma/(mu2+gamma) / (D (pi/ell)^2 + nu^2/(4D) + mu1) )
ell = math.pi
exact = math.sqrt(0.5 / (1.0 + 0.25))
num = compute_R0((-ell / 2, ell / 2), hom, 512).R0
print(f"R0 on (-pi/2, pi/2): numeric {num:.8f}, exact {exact:.8f}")

# Longer intervals give larger R0, advection lowers it
for L in (1, 2, 4, 8):
    print(f"L = {L}: R0 = {compute_R0((-L, L), hom).R0:.4f}")
for nu in (0.0, 0.2, 0.4, 0.8):
    print(f"nu = {nu}: R0 on (-3, 3) = {compute_R0((-3, 3), hom.replace(nu=nu)).R0:.4f}")

# A hot spot: r is 50% higher around x = 0
hot = CoefficientProfile(ProfileSpec.bump(1.0, 0.5, 0.0, 1.0), ProfileSpec.constant(1.0),
                         ProfileSpec.constant(0.25), ProfileSpec.constant(1.0), D=1.0, nu=0.2)

# threshold_report also returns the principal eigenvalue lambda0;
# it is negative exactly when R0 > 1
for h0 in (1.5, 4.0):
    rep = threshold_report((-h0, h0), hot, 512)
    peak = rep.x[np.argmax(rep.eigen_M)]
    print(f"(-{h0}, {h0}): R0 = {rep.R0:.4f}, lambda0 = {rep.lambda0:+.4f}, "
          f"eigenfunction peaks at x = {peak:.2f}")
