#!/usr/bin/env python3
"""Brute-force recomputation of the golden micro-example values.

Independent of the Rust code: every quantity is counted by plain
enumeration with Python integers. Run it and compare against
crates/core/tests/golden.rs.
"""
from fractions import Fraction
from itertools import product


def energy(a, p):
    return sum(1 for x, y, z, w in product(a, repeat=4) if (x * y - z * w) % p == 0)


def diff_set(a, p):
    return {(x - y) % p for x, y in product(a, repeat=2)}


def partial(edges, p, op):
    out = set()
    for x, y in edges:
        if op == "-":
            out.add((x - y) % p)
        elif op == "/":
            out.add(x * pow(y, p - 2, p) % p)
        elif op == "+":
            out.add((x + y) % p)
        else:
            out.add(x * y % p)
    return out


def rudnev_ratio(a, p):
    e = energy(a, p)
    return e, len(diff_set(a, p)), Fraction(e**4, len(diff_set(a, p)) ** 7 * len(a) ** 4)


def partial_sumprod_ratio(a, b, edges, p):
    d = len(partial(edges, p, "-"))
    r = len(partial(edges, p, "/"))
    return Fraction(len(edges) ** 55, len(a) ** 36 * len(b) ** 37 * d**28 * r**8)


def main():
    print("E({1,2}) in F5 =", energy([1, 2], 5))
    print("E({1,2,4}) in F7 =", energy([1, 2, 4], 7))
    edges = [(1, 1), (2, 3)]
    for op in "-/+*":
        print(f"A {op}_G B, p=5, G={edges} =", sorted(partial(edges, 5, op)))
    e, d, ratio = rudnev_ratio([1, 2], 101)
    print(f"rudnev {{1,2}} in F101: E={e} |A-A|={d} ratio={e**4}/{d**7 * 16} = {ratio}")
    r = partial_sumprod_ratio([1, 2], [1, 3], edges, 5)
    print(f"partial sum-product ratio, two-edge grid = {r}; equals 2^-54: {r == Fraction(1, 2**54)}")
    print("singleton grid ratio =", partial_sumprod_ratio([1], [1], [(1, 1)], 7))


if __name__ == "__main__":
    main()
