"""Chiral-field Backlund-transformation recursion machinery.

The chiral equation (inv(g)*g_x)_x + (inv(g)*g_t)_t = 0 admits an
auto-Backlund transformation between solutions Phi, Phi' of its linearized
symmetry condition:

    Phi'_x = Phi_t + [inv(g)*g_t, Phi]
   -Phi'_t = Phi_x + [inv(g)*g_x, Phi]

Integrating it sends symmetry characteristics Q = g*Phi to new, generally
nonlocal, characteristics Q' = g*Phi'.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import (CMat, Coordinate, Expr, JetsymError, Jet, MATRIX, Mul, Pot,
                   PotentialDef, Problem, Rat, add, as_expr, commutator,
                   inverse, mul, neg)
from .calculus import iterated_total, total_derivative
from .normalize import is_zero, normal_form
from .symmetry import Pde, _match_linear, reduce_mod_pde


class PotentialError(JetsymError):
    """Cross-derivative compatibility failure."""

    def __init__(self, message: str, residual: Expr):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class BtPair:
    """Right-hand sides of the Backlund system for a seed Phi."""

    phi: Expr
    rhs_x: Expr  # candidate Phi'_x
    rhs_t: Expr  # candidate Phi'_t (sign already folded in)


def _xt(problem: Problem) -> tuple[Coordinate, Coordinate]:
    if len(problem.coordinates) != 2:
        raise JetsymError("the Backlund machinery expects two coordinates")
    return problem.coordinates[0], problem.coordinates[1]


def left_current(problem: Problem, coord: Coordinate) -> Expr:
    """inv(g) * g_i for the problem's invertible matrix dependent."""
    if problem.dependent.kind != MATRIX or not problem.dependent.invertible:
        raise JetsymError("left current needs an invertible matrix dependent")
    return mul(inverse(problem.u), Jet(problem.dependent, (coord.index,)))


def declare_potential(pdef: PotentialDef, pde: Pde, problem: Problem) -> Pot:
    """Register a gradient-defined potential after checking that its mixed
    second derivatives agree mod the PDE."""
    coords = problem.coordinates
    for c in coords:
        if c.name not in pdef.derivatives:
            raise JetsymError(f"potential {pdef.name}: missing derivative "
                              f"for coordinate {c.name}")
    for i in range(len(coords)):
        for j in range(i + 1, len(coords)):
            ci, cj = coords[i], coords[j]
            cross = (total_derivative(pdef.derivatives[ci.name], cj, problem)
                     - total_derivative(pdef.derivatives[cj.name], ci, problem))
            residual = reduce_mod_pde(cross, pde, problem)
            if not is_zero(residual):
                raise PotentialError(
                    f"potential {pdef.name}: D_{cj.name}({pdef.name}_{ci.name})"
                    f" != D_{ci.name}({pdef.name}_{cj.name}) mod {pde.name}",
                    residual)
    return problem.register_potential(pdef)


def chiral_phi_condition(phi: Expr, pde: Pde, problem: Problem) -> Expr:
    """Linearized symmetry condition in Phi-form:
    D_x(Phi_x + [inv(g)g_x, Phi]) + D_t(Phi_t + [inv(g)g_t, Phi]),
    returned normalized (not reduced mod F)."""
    x, t = _xt(problem)
    ax, at = left_current(problem, x), left_current(problem, t)
    inner_x = add(total_derivative(phi, x, problem), commutator(ax, phi))
    inner_t = add(total_derivative(phi, t, problem), commutator(at, phi))
    return normal_form(add(total_derivative(inner_x, x, problem),
                           total_derivative(inner_t, t, problem)))


def bt_rhs(phi: Expr, problem: Problem) -> BtPair:
    """The pair of right-hand sides defining Phi' up to integration."""
    x, t = _xt(problem)
    phi = as_expr(phi)
    rhs_x = add(total_derivative(phi, t, problem),
                commutator(left_current(problem, t), phi))
    rhs_t = neg(add(total_derivative(phi, x, problem),
                    commutator(left_current(problem, x), phi)))
    return BtPair(phi, normal_form(rhs_x), normal_form(rhs_t))


def bt_integrability_check(phi: Expr, pde: Pde, problem: Problem) -> bool:
    """(Phi'_x)_t = (Phi'_t)_x mod F; holds iff Phi solves the symmetry
    condition."""
    x, t = _xt(problem)
    pair = bt_rhs(phi, problem)
    cross = (total_derivative(pair.rhs_x, t, problem)
             - total_derivative(pair.rhs_t, x, problem))
    return is_zero(reduce_mod_pde(cross, pde, problem))


def default_bt_basis(problem: Problem, word_length: int = 2) -> list[Expr]:
    """Candidate alphabet for integrating the Backlund system: bounded words
    over the left currents, registered potentials and constant matrices,
    plus single commutators of alphabet pairs."""
    x, t = _xt(problem)
    alphabet: list[Expr] = [left_current(problem, x), left_current(problem, t)]
    alphabet.extend(problem.potential(n) for n in problem.potentials)
    alphabet.extend(problem.matrices.values())
    basis: list[Expr] = list(alphabet)
    if word_length >= 2:
        for a in alphabet:
            for b in alphabet:
                basis.append(mul(a, b))
        for i, a in enumerate(alphabet):
            for b in alphabet[i + 1:]:
                basis.append(commutator(a, b))
    return basis


def bt_apply(phi: Expr, pde: Pde, problem: Problem,
             basis: list[Expr] | None = None) -> Optional[Expr]:
    """Integrate the Backlund system for Phi' as an exact rational
    combination of basis candidates satisfying both equations mod F.

    Constants of integration are fixed to zero.  None signals that the
    integration lies outside the candidate basis (basis insufficiency),
    not that no Phi' exists."""
    x, t = _xt(problem)
    if not bt_integrability_check(phi, pde, problem):
        return None
    if basis is None:
        basis = default_bt_basis(problem)
    pair = bt_rhs(phi, problem)
    targets = [reduce_mod_pde(pair.rhs_x, pde, problem),
               reduce_mod_pde(pair.rhs_t, pde, problem)]
    rows = [[reduce_mod_pde(total_derivative(b, x, problem), pde, problem),
             reduce_mod_pde(total_derivative(b, t, problem), pde, problem)]
            for b in basis]
    sol = _match_linear(targets, rows)
    if sol is None:
        return None
    return normal_form(add(*(mul(Rat(c), b)
                             for c, b in zip(sol, basis) if c)))
