"""
Compare the linear deviation bound B(n, d) * eps with the classical
27 * eps ** (1 / 2**n) bound.

The classical bound has a root that goes to one as n grows, so for small
epsilon the linear bound wins by orders of magnitude. The two cross at a
single epsilon, found here in closed form and again by bisection.

    python3 demos/bounds_vs_fickett.py
"""

from isostab import (
    bound_polynomial,
    build_constant_table,
    crossover_epsilon,
    crossover_epsilon_bisect,
    fickett_bound,
    linear_majorant,
    stability_bound_coefficient,
)

for n in (4, 5):
    table = build_constant_table(n)
    a, b, c = bound_polynomial(table)
    alpha, beta = linear_majorant(table)
    print(f"n = {n}: B^2 = {a} d^2 + {b} d + {c},  B < {alpha} d + {beta}")

n, d = 4, 1.0
table = build_constant_table(n)
coef = stability_bound_coefficient(n, d, table)
print(f"\nn = {n}, d = {d}: B = {coef:.4f}")
print(f"{'eps':>10} {'linear':>12} {'classical':>12} {'ratio':>10}")
for eps in (1e-2, 1e-3, 1e-4, 1e-6, 1e-8):
    new, old = coef * eps, fickett_bound(n, eps)
    print(f"{eps:10.0e} {new:12.4e} {old:12.4f} {new / old:10.3e}")

star = crossover_epsilon(n, d, table)
print(f"\ncrossover eps* = {star:.12f} (bisection: {crossover_epsilon_bisect(n, coef):.12f})")
print("the linear bound is only usable below eps_sup = 1/90, far left of eps*")
