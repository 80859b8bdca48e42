"""Shared fixtures: sample problems and a seeded random expression builder
used by both the hypothesis strategies and the acceptance property loops."""
from __future__ import annotations

from fractions import Fraction
from random import Random

from jetsym import (Characteristic, Dependent, Problem, Rat, Sym, add,
                    commutator, func, inverse, mul)
from jetsym.core import Expr


def scalar_problem() -> Problem:
    return Problem(coords=["x", "t"],
                   dependent=Dependent("u", "scalar", invertible=True),
                   constants=["lam"],
                   base_functions=["f", "h"])


def matrix_problem() -> Problem:
    return Problem(coords=["x", "t"],
                   dependent=Dependent("u", "matrix", invertible=True),
                   constants=["lam"],
                   matrices=[("A", False), ("B", True)],
                   base_functions=[("a", True), ("b", True), ("f", False)])


def _leaf(rng: Random, p: Problem, scalar_only: bool) -> Expr:
    choices = ["rat", "sym", "coord", "jet", "base"]
    if p.dependent.invertible and (p.dependent.kind == "scalar"
                                   or not scalar_only):
        choices.append("inv_u")
    if p.matrices and not scalar_only:
        choices.append("cmat")
    kind = rng.choice(choices)
    if kind == "rat":
        return Rat(Fraction(rng.randint(-3, 3), rng.choice([1, 1, 2, 3])))
    if kind == "sym":
        return Sym(p.constants[0])
    if kind == "coord":
        return p.coord(rng.choice([c.name for c in p.coordinates]))
    if kind == "jet":
        if scalar_only and p.dependent.kind != "scalar":
            return p.coord("x")
        order = rng.randint(0, 2)
        subs = "".join(rng.choice("xt") for _ in range(order))
        return p.jet(subs)
    if kind == "base":
        scalars = [n for n, b in p.base_functions.items() if not b.matrix]
        names = scalars if scalar_only else list(p.base_functions)
        return p.base(rng.choice(names)) if names else p.coord("t")
    if kind == "inv_u":
        return inverse(p.u)
    return p.cmat(rng.choice(list(p.matrices)))


def random_expr(rng: Random, p: Problem, depth: int = 4,
                scalar_only: bool = False) -> Expr:
    if depth <= 0 or rng.random() < 0.35:
        return _leaf(rng, p, scalar_only)
    kind = rng.choice(["add", "add", "mul", "mul", "comm", "fn"])
    if kind == "add":
        return add(*(random_expr(rng, p, depth - 1, scalar_only)
                     for _ in range(rng.randint(2, 3))))
    if kind == "mul":
        return mul(*(random_expr(rng, p, depth - 1, scalar_only)
                     for _ in range(rng.randint(2, 3))))
    if kind == "comm":
        return commutator(random_expr(rng, p, depth - 1, scalar_only),
                          random_expr(rng, p, depth - 1, scalar_only))
    return func(rng.choice(["sin", "cos", "exp"]),
                random_expr(rng, p, min(depth - 1, 2), scalar_only=True))


def random_characteristic(rng: Random, p: Problem, depth: int = 2
                          ) -> Characteristic:
    q = random_expr(rng, p, depth,
                    scalar_only=p.dependent.kind == "scalar")
    return Characteristic(f"Q{rng.randint(0, 10**6)}", q, p.dependent)
