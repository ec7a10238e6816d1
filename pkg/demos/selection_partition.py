"""What a fixed player experiences under best-user selection: how often it
is recommended to transmit, and in how big a group.

Run:  python demos/selection_partition.py
"""

from powergame import (
    ExponentialEfficiency,
    GameParams,
    TruncatedRayleighSpec,
    build_model,
    config_partition,
)

K = 5
params = GameParams(K, ExponentialEfficiency(0.2))
model = build_model(TruncatedRayleighSpec(), K)
part = config_partition(params, model, horizon=100_000, seed=13)

print(f"{K} players, truncated-Rayleigh gains, a = 0.2, 10^5 stages, player 0\n")
print(f"{'group size k':>13} {'recommended':>13} {'left out':>10}")
for k, h1, h2 in zip(part.k, part.recommended_freq, part.not_recommended_freq):
    bar = "#" * int(round(60 * h1))
    print(f"{k:>13} {h1:>13.5f} {h2:>10.5f}  {bar}")

on_air = part.recommended_freq.sum()
print(f"\nplayer 0 transmits in {on_air:.1%} of stages; frequencies sum to "
      f"{on_air + part.not_recommended_freq.sum():.6f}")
print("Selection rarely runs the full house or a monopoly: mid-size groups"
      "\ncarry almost all the probability mass at this efficiency exponent.")
