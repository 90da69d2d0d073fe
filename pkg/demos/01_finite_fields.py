"""Finite field arithmetic and the field-reduction view.

Builds the small fields the workbench runs on, shows the deterministic
modulus choices, and inspects the multiplication matrices that realize
F_{q^k} as k x k matrices over F_q.
"""

from qgeom.gf import arith, field_new, field_reduction

print("== canonical moduli ==")
for q in (4, 8, 9, 16):
    spec = field_new(q)
    terms = [f"x^{i}" if c == 1 and i > 1 else ("x" if c == 1 and i == 1 else str(c))
             for i, c in enumerate(spec.modulus) if c]
    print(f"F_{q} = F_{spec.p}[x] / ({' + '.join(reversed(terms))})")

print("\n== arithmetic in F_4 ==")
ops = arith(field_new(4))
names = {0: "0", 1: "1", 2: "x", 3: "x+1"}
for a in range(4):
    row = [names[ops.mul(a, b)].rjust(4) for b in range(4)]
    print(f"  {names[a]:>4} * | {' '.join(row)}")
assert ops.mul(2, 2) == 3, "x * x reduces to x + 1"

print("\n== F_4 over F_2 via multiplication matrices ==")
red = field_reduction(2, 2)
for a, mat in enumerate(red.mul_matrices):
    print(f"  element {a}: {mat}")
ident = ((1, 0), (0, 1))
assert red.mul_matrices[1] == ident
print("\nthe three nonzero matrices form a cyclic group of order 3:")
m = red.mul_matrices[2]


def matmul2(a, b):
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(2)) % 2
                 for j in range(2)) for i in range(2))


cur, seen = ident, []
for _ in range(3):
    cur = matmul2(cur, m)
    seen.append(cur)
print("  powers of M(x):", seen)
assert seen[-1] == ident

print("\n== F_8 over F_2: 7 invertible matrices out of 8 ==")
red8 = field_reduction(2, 3)
print(f"  {len(red8.mul_matrices)} matrices, modulus {red8.modulus}")
print("\nall demonstrations passed")
