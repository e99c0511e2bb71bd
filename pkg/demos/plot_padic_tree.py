"""
p-adic digits and ball trees
============================

Build a few 2-adic numbers, look at their absolute values and Monna images,
and organize them into the tree of clopen balls.
"""

from fractions import Fraction

from scalefree.padic import PAdicNumber, build_ball_tree, monna_map, padic_abs

# %%
# Expansions are little-endian and stop at the last nonzero digit.

xs = [PAdicNumber.from_int(n, 2, precision=4) for n in (1, 3, 5, 12)]
for x in xs:
    print(f"{str(x.to_fraction()):>3}  r={x.r}  digits={x.digits}  |x|_2={padic_abs(x)}  "
          f"monna={monna_map(x):.4f}")

# %%
# Close numbers share long digit prefixes, so they sit in small balls.

tree = build_ball_tree(xs)
for a in xs:
    print([str(tree.distance(a, b)) for b in xs])

# %%
# The DOT export can be fed straight to graphviz.

print(tree.to_dot())

# %%
# Fractions with a unit denominator are fine too: 1/3 is a 2-adic integer.

third = PAdicNumber.from_fraction(Fraction(1, 3), 2, precision=12)
print(third.digits, (3 * third.unit) % 2**12)
