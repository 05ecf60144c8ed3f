#!/usr/bin/env python3
"""Second moments under the real-plane version of the walk.

Means are preserved exactly, but the covariance diagonal grows by a factor
approaching 3 per step: the noise-free map has the closed form
[[a, b], [b, c]] -> [[a+2c, b], [b, c+2a]], and the full map adds a positive
matrix from the spread of the translated means.  There is no stationary
covariance; the state keeps delocalizing forever.
"""

from margulis import CovMatrix, MeanVector, f_map, g_map, gn_closed_form, growth_rate

gamma = CovMatrix(1.0, 0.0, 1.0)
mean = MeanVector(0.5, -0.25)

print("n    trace(g^n)     trace(f^n)     trace(g^n)/3^n")
cur_g = gamma
cur_f, cur_m = gamma, mean
for n in range(13):
    print(f"{n:<4d} {cur_g.trace():<14.6g} {cur_f.trace():<14.6g} "
          f"{cur_g.trace() / 3.0 ** n:.6f}")
    cur_g = g_map(cur_g)
    cur_f, cur_m = f_map(cur_f, cur_m)

print("\nmeans after 13 noisy steps:", cur_m, "(unchanged)")

closed = gn_closed_form(gamma, 12)
print(f"closed form at n=12: a = c = {closed.a:g} (3^12 = {3 ** 12})")

rate = growth_rate(CovMatrix(5.0, 1.0, 0.5), 30)
print("growth exponents at n=30 for a lopsided start:", rate.diagonal())
