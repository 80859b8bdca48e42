"""Total and characteristic derivative operators on jet-space expressions.

Both operators are derivations: they satisfy the Leibniz rule, act on
inverses through -w^-1 (Dw) w^-1, and distribute over commutators.  The
characteristic derivative acts only in the fiber space: it annihilates
base-space functions and constants, sends the dependent to the
characteristic Q, and commutes with every total derivative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (Add, Base, CMat, Comm, Coord, Coordinate, Dependent, Expr,
                   Fn, FUNC_DERIVATIVES, Inv, Jet, KindError, Mul,
                   NonlocalActionError, Pot, Problem, Rat, SCALAR, Sym, ZERO,
                   add, as_expr, commutator, mul, neg, rat)
from .normalize import collect_jets, nf, normal_form


@dataclass(frozen=True)
class Characteristic:
    """Named characteristic function Q[u] generating the derivative D_Q."""

    name: str
    q: Expr
    dependent: Dependent


def _fn_derivative(e: Fn, darg: Expr) -> Expr:
    coeff, newname = FUNC_DERIVATIVES[e.fname]
    return mul(Rat(coeff), Fn(newname, e.arg), darg)


def total_derivative(e: Expr, coord: Coordinate, problem: Problem) -> Expr:
    """D_i e, returned in normal form."""
    return normal_form(_total(as_expr(e), coord, problem))


def _total(e: Expr, c: Coordinate, p: Problem) -> Expr:
    if isinstance(e, (Rat, Sym, CMat)):
        return ZERO
    if isinstance(e, Coord):
        return rat(1) if e.coordinate == c else ZERO
    if isinstance(e, Jet):
        return Jet(e.dep, e.idx + (c.index,))
    if isinstance(e, Base):
        return Base(e.name, e.matrix, e.partials + (c.index,))
    if isinstance(e, Pot):
        return p.potentials[e.name].derivatives[c.name]
    if isinstance(e, Add):
        return add(*(_total(t, c, p) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        return add(*(mul(*fs[:i], _total(fs[i], c, p), *fs[i + 1:])
                     for i in range(len(fs))))
    if isinstance(e, Inv):
        return neg(mul(e, _total(e.base, c, p), e))
    if isinstance(e, Comm):
        return add(commutator(_total(e.lhs, c, p), e.rhs),
                   commutator(e.lhs, _total(e.rhs, c, p)))
    if isinstance(e, Fn):
        return _fn_derivative(e, _total(e.arg, c, p))
    raise TypeError(f"cannot differentiate node {type(e).__name__}")


def iterated_total(e: Expr, idx, problem: Problem) -> Expr:
    """D_J e for a multi-index of coordinate indices, applied in sorted
    order (totals commute, so the order is immaterial)."""
    out = as_expr(e)
    for i in sorted(i.index if isinstance(i, Coordinate) else i for i in idx):
        out = total_derivative(out, problem.coordinates[i], problem)
    return out


def char_derivative(e: Expr, Q: Characteristic, problem: Problem) -> Expr:
    """D_Q e, returned in normal form."""
    return normal_form(_char(as_expr(e), Q, problem))


def _char(e: Expr, Q: Characteristic, p: Problem) -> Expr:
    if isinstance(e, (Rat, Sym, Coord, Base, CMat)):
        return ZERO
    if isinstance(e, Jet):
        if e.dep != Q.dependent:
            raise KindError("characteristic declared for a different dependent")
        return iterated_total(Q.q, e.idx, p)
    if isinstance(e, Pot):
        images = p.potentials[e.name].char_images
        if Q.name not in images:
            raise NonlocalActionError(
                f"nonlocal action undefined: no image of potential "
                f"{e.name!r} under characteristic {Q.name!r}")
        return images[Q.name]
    if isinstance(e, Add):
        return add(*(_char(t, Q, p) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        return add(*(mul(*fs[:i], _char(fs[i], Q, p), *fs[i + 1:])
                     for i in range(len(fs))))
    if isinstance(e, Inv):
        return neg(mul(e, _char(e.base, Q, p), e))
    if isinstance(e, Comm):
        return add(commutator(_char(e.lhs, Q, p), e.rhs),
                   commutator(e.lhs, _char(e.rhs, Q, p)))
    if isinstance(e, Fn):
        return _fn_derivative(e, _char(e.arg, Q, p))
    raise TypeError(f"cannot differentiate node {type(e).__name__}")


def bracket_characteristic(Q1: Characteristic, Q2: Characteristic,
                           problem: Problem) -> Characteristic:
    """Characteristic of the Lie bracket: D_1 Q2 - D_2 Q1."""
    if Q1.dependent != Q2.dependent:
        raise KindError("bracket of characteristics over different dependents")
    q = normal_form(char_derivative(Q2.q, Q1, problem)
                    - char_derivative(Q1.q, Q2, problem))
    return Characteristic(f"[{Q1.name},{Q2.name}]", q, Q1.dependent)


def scale_characteristic(Q: Characteristic, lam) -> Characteristic:
    """lam * Q for a constant lam (rational or declared symbol); scaling by
    non-constant base functions would break commutation with the totals."""
    if isinstance(lam, (int, Fraction)):
        factor: Expr = Rat(Fraction(lam))
    elif isinstance(lam, Sym):
        factor = lam
    else:
        raise KindError("characteristics scale only by declared constants")
    return Characteristic(f"{lam}*{Q.name}", normal_form(mul(factor, Q.q)),
                          Q.dependent)


def formal_jet_partial(e: Expr, target: Jet) -> Expr:
    """Formal commutative partial derivative with respect to a jet atom;
    only meaningful for scalar dependents."""
    if isinstance(e, Jet):
        return rat(1) if e == target else ZERO
    if isinstance(e, (Rat, Sym, Coord, Base, CMat, Pot)):
        return ZERO
    if isinstance(e, Add):
        return add(*(formal_jet_partial(t, target) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        return add(*(mul(*fs[:i], formal_jet_partial(fs[i], target), *fs[i + 1:])
                     for i in range(len(fs))))
    if isinstance(e, Inv):
        return neg(mul(e, formal_jet_partial(e.base, target), e))
    if isinstance(e, Comm):
        return add(commutator(formal_jet_partial(e.lhs, target), e.rhs),
                   commutator(e.lhs, formal_jet_partial(e.rhs, target)))
    if isinstance(e, Fn):
        return _fn_derivative(e, formal_jet_partial(e.arg, target))
    raise TypeError(f"cannot differentiate node {type(e).__name__}")


def scalar_prolongation_apply(e: Expr, Q: Characteristic, problem: Problem,
                              max_order: int | None = None) -> Expr:
    """Differential-operator representation of D_Q for scalar dependents:
    sum over jets u_J of (D_J Q) * (de/du_J).  Cross-check oracle for
    char_derivative."""
    if problem.dependent.kind != SCALAR:
        raise KindError("the differential-operator representation is only "
                        "valid for a scalar dependent")
    e = as_expr(e)
    jets = {j for j in collect_jets(e) if j.dep == problem.dependent}
    if max_order is not None:
        too_high = [j for j in jets if j.order > max_order]
        if too_high:
            raise ValueError(f"expression contains jets above order {max_order}")
    out = ZERO
    for j in sorted(jets, key=lambda j: (j.order, j.idx)):
        part = formal_jet_partial(e, j)
        out = add(out, mul(iterated_total(Q.q, j.idx, problem), part))
    return normal_form(out)
