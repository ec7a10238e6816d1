"""Walkthrough of the one-shot game: characteristic SINRs, the selfish
equilibrium, and the equal-received-power profile that beats it.

Run:  python demos/closed_form_equilibria.py
"""

import numpy as np

from powergame import (
    ExponentialEfficiency,
    GameParams,
    beta_star,
    gamma_tilde,
    nash_powers,
    operating_point_powers,
    social_optimum,
    utility,
)

a = 0.2
eff = ExponentialEfficiency(a)
print(f"efficiency f(x) = exp(-{a}/x)")
print(f"selfish SINR target     beta* = {beta_star(eff):.6f}  (equals a)")
for k in (1, 2, 3, 5):
    print(f"equal-power SINR, k={k}:  {gamma_tilde(eff, k):.6f}"
          f"  (a / (1 + a(k-1)) = {a / (1 + a * (k - 1)):.6f})")

params = GameParams(3, eff, sigma2=1.0)
eta = np.array([2.0, 1.0, 0.5])
print(f"\nthree players, gains {eta.tolist()}, noise 1 W")

ne = nash_powers(params, eta)
op = operating_point_powers(params, eta)
so, so_welfare = social_optimum(params, eta, grid_size=20)

rows = [
    ("selfish equilibrium", ne),
    ("equal received power", op),
    ("welfare optimum (grid)", so),
]
print(f"\n{'profile':<24}{'powers (W)':<34}{'utilities (bit/J)'}")
for name, powers in rows:
    utils = utility(params, eta, powers)
    p_txt = " ".join(f"{p:8.4f}" for p in powers)
    u_txt = " ".join(f"{u:8.4f}" for u in utils)
    print(f"{name:<24}{p_txt:<34}{u_txt}")

gain = utility(params, eta, op) / utility(params, eta, ne)
print(f"\nevery player gains from coordination: ratios {np.round(gain, 4).tolist()}")
print(f"welfare at the grid optimum: {so_welfare:.4f} bit/J "
      f"(>= both profiles above by construction)")
