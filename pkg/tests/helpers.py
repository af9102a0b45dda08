import itertools
from math import gcd

import sympy

from surgery_homology.abgroup import IntegerMatrix


def determinantal_divisors(rows):
    """gcd of all k x k minors for k = 1..min(m, n), via sympy determinants."""
    A = sympy.Matrix(rows)
    m, n = A.shape
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in itertools.combinations(range(m), k):
            for c in itertools.combinations(range(n), k):
                g = gcd(g, int(A.extract(list(r), list(c)).det()))
        out.append(g)
    return out


def oracle_factors(rows):
    """Nonzero invariant factors including units, from determinantal divisors."""
    prev, out = 1, []
    for d in determinantal_divisors(rows):
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return out


def mat(rows):
    return IntegerMatrix.from_rows(rows)
