#!/usr/bin/env python3
"""Coxeter data and preprojective algebras for the small Dynkin types.

Prints h, the exponents, the Nakayama permutation and the total dimension,
and checks the dimension against r h (h+1) / 6.
"""

from preproj.algebra import build_preprojective
from preproj.quiver import coxeter

TYPES = ["A2", "A3", "A4", "A5", "D4", "D5", "E6"]

print(f"{'type':<5} {'h':>3} {'exponents':<22} {'nu':<20} {'dim':>5}")
for t in TYPES:
    c = coxeter(t)
    A = build_preprojective(t)
    r = len(c.exponents)
    assert A.dim == r * c.h * (c.h + 1) // 6
    print(f"{t:<5} {c.h:>3} {str(list(c.exponents)):<22} {str(list(c.nu)):<20} {A.dim:>5}")
