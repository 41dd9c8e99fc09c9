"""
Build the coordinate-constant tables and the epsilon budget they imply.

The table is computed with exact rationals, row by row: each new subdiagonal
constant is the smallest integer that survives the current epsilon schedule,
and each diagonal constant is the smallest integer whose quadratic form
covers the squared row sum before it.

    python3 demos/constant_table.py
"""

from isostab import Mode, build_constant_table, epsilon_sup, sigma


def show(n, mode):
    table = build_constant_table(n, mode)
    print(f"n = {n}, mode = {mode.value}")
    for i, row in enumerate(table.rows, start=1):
        print(f"  row {i}: " + "  ".join(f"{c:2d}" for c in row))
    budget = epsilon_sup(table)
    print(f"  sigma = {sigma(table)}, eps_sup = {budget.eps_sup} (~{budget.eps_sup_float:.6f})\n")


for n in (4, 5):
    show(n, Mode.PAPER)

# The tight schedule accepts any epsilon it can, so its constants are never larger.
show(4, Mode.TIGHT)

# Past the first few rows, the subdiagonal settles to a constant value.
big = build_constant_table(32)
print("n = 32 subdiagonal:", big.subdiagonal)
print("sigma =", sigma(big))
