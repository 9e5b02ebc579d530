"""Spreading or vanishing, and the critical expansion capability mu*.

Start on an interval too small to sustain the population (R0 < 1). Whether
the invasion succeeds then depends on mu: slow expanders die out, fast ones
reach a habitat large enough and spread. Bisection locates the switch.
"""
from aedesfront import (CoefficientProfile, InitialData, ProfileSpec, SolverConfig, compute_R0,
                        find_mu_star, simulate_and_classify)

profile = CoefficientProfile(ProfileSpec.bump(1.0, 0.5, 0.0, 1.0), ProfileSpec.constant(1.0),
                             ProfileSpec.constant(0.25), ProfileSpec.constant(1.0),
                             D=1.0, nu=0.2)
initial = InitialData.cosine(1.5, 0.5, 0.4)
print("R0 on the initial habitat:", round(compute_R0((-1.5, 1.5), profile).R0, 4))

# runs near mu* settle slowly; the classifier doubles the horizon when undecided
config = SolverConfig(N=256, dt=0.01, horizon=100.0)
for mu in (0.5, 2.0):
    out, _ = simulate_and_classify(initial, profile, config.replace(mu=mu))
    print(f"mu = {mu}: {out.label.value} at t = {out.stop_time:g} (rule {out.rule})")

# Tiny initial data on the same interval die out whatever mu is
out, _ = simulate_and_classify(initial.scaled(1e-3), profile, config.replace(mu=2.0))
print("scaled by 1e-3, mu = 2:", out.label.value)

res = find_mu_star(initial, profile, config, (0.5, 8.0), tol=0.05)
print(f"mu* lies in [{res.mu_lo:.4f}, {res.mu_hi:.4f}]")
for r in res.runs:
    print(f"  mu = {r['mu']:.4f}, horizon {r['horizon']:g}: {r['label']}")
