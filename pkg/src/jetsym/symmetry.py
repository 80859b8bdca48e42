"""Symmetry condition D_Q F = 0 mod F, operator certificates, and structure
constants of symmetry bases.

"mod F" is realized through a solved form of the PDE: the leading jet
equals a right-hand side containing no jet at-or-above the leading one, so
repeated substitution of total derivatives of the solved form terminates.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional

from .core import (Add, CMat, Expr, Jet, JetsymError, MATRIX, Mul, Problem,
                   Rat, add, as_expr, mul)
from .calculus import Characteristic, char_derivative, bracket_characteristic, \
    iterated_total
from .linsolve import rank, solve
from .normalize import (collect_jets, is_zero, key_sort_key, nf,
    normal_form, substitute)


class PdeError(JetsymError):
    """Invalid solved form."""


class BasisError(JetsymError):
    """Linearly dependent symmetry basis."""


class SpanError(JetsymError):
    """A bracket left the span of the basis (not a subalgebra)."""


@dataclass(frozen=True)
class Pde:
    """F[u] = 0 together with a validated solved form leading = rhs."""

    name: str
    f: Expr
    leading: Jet
    rhs: Expr


def make_pde(name: str, f: Expr, leading: Jet, rhs: Expr,
             problem: Problem) -> Pde:
    if leading.dep != problem.dependent:
        raise PdeError("solved form is not over the problem's dependent")
    lead = Counter(leading.idx)
    for j in collect_jets(rhs):
        if j.dep == leading.dep and not (lead - Counter(j.idx)):
            raise PdeError(
                f"solved-form rhs contains {j} at or above the leading jet")
    if not is_zero(substitute(f, leading, rhs)):
        raise PdeError("substituting the solved form into F does not give 0")
    return Pde(name, normal_form(f), leading, normal_form(rhs))


def reduce_mod_pde(e: Expr, pde: Pde, problem: Problem,
                   max_steps: int = 2000) -> Expr:
    """Substitute total derivatives of the solved form until no jet contains
    the leading multi-index; returns the normalized fixed point."""
    lead = Counter(pde.leading.idx)
    out = normal_form(as_expr(e))
    for _ in range(max_steps):
        reducible = [j for j in collect_jets(out)
                     if j.dep == pde.leading.dep
                     and not (lead - Counter(j.idx))]
        if not reducible:
            return out
        j = max(reducible, key=lambda j: (j.order, j.idx))
        extra = Counter(j.idx) - lead
        repl = iterated_total(pde.rhs, tuple(extra.elements()), problem)
        out = substitute(out, j, repl)
    raise RuntimeError("mod-F reduction did not terminate")


class Verdict(Enum):
    SYMMETRY = "Symmetry"
    NOT_SYMMETRY = "NotSymmetry"


@dataclass(frozen=True)
class LinearOperatorAnsatz:
    """Linear operator of the shape  sum_k  left_k * (D_Jk e) * right_k,
    with base-space coefficients (optionally times constant matrices)."""

    terms: tuple[tuple[Expr, tuple[int, ...], Expr], ...]

    def apply(self, e: Expr, problem: Problem) -> Expr:
        out = [mul(left, iterated_total(e, j, problem), right)
               for left, j, right in self.terms]
        return normal_form(add(*out))

    def canonical(self) -> tuple:
        """Order-independent fingerprint for comparing operators."""
        items = []
        for left, j, right in self.terms:
            ln, rn = normal_form(left), normal_form(right)
            if ln == Rat(Fraction(0)) or rn == Rat(Fraction(0)):
                continue
            items.append((
                tuple(sorted(((key_sort_key(k), v) for k, v in nf(ln).items()))),
                tuple(sorted(j)),
                tuple(sorted(((key_sort_key(k), v) for k, v in nf(rn).items())))))
        return tuple(sorted(items))

    def same_operator(self, other: "LinearOperatorAnsatz") -> bool:
        return self.canonical() == other.canonical()


ZERO_OPERATOR = LinearOperatorAnsatz(())
IDENTITY_OPERATOR = LinearOperatorAnsatz(((Rat(Fraction(1)), (), Rat(Fraction(1))),))


@dataclass(frozen=True)
class SymmetryReport:
    verdict: Verdict
    raw: Expr
    remainder: Expr
    certificate: Optional[LinearOperatorAnsatz] = None

    @property
    def is_symmetry(self) -> bool:
        return self.verdict is Verdict.SYMMETRY


def check_symmetry(pde: Pde, Q: Characteristic, problem: Problem,
                   raw: Expr | None = None,
                   search_certificate: bool = False,
                   ansatz_config: "AnsatzConfig | None" = None) -> SymmetryReport:
    """Evaluate D_Q F for arbitrary u, then reduce mod F.  `raw` overrides
    the left-hand side (used for the chiral Phi-form condition)."""
    if raw is None:
        raw = char_derivative(pde.f, Q, problem)
    remainder = reduce_mod_pde(raw, pde, problem)
    verdict = Verdict.SYMMETRY if is_zero(remainder) else Verdict.NOT_SYMMETRY
    certificate = None
    if search_certificate and verdict is Verdict.SYMMETRY:
        certificate = find_operator(pde, Q, problem, cfg=ansatz_config, lhs=raw)
    return SymmetryReport(verdict, raw, remainder, certificate)


def certify_operator(pde: Pde, Q: Characteristic | None,
                     lhat: LinearOperatorAnsatz, problem: Problem,
                     lhs: Expr | None = None) -> bool:
    """True iff  D_Q F  equals  lhat F  identically (no mod-F reduction)."""
    if lhs is None:
        lhs = char_derivative(pde.f, Q, problem)
    return is_zero(lhs - lhat.apply(pde.f, problem))


@dataclass(frozen=True)
class AnsatzConfig:
    max_deriv_order: int = 2
    coeff_degree: int = 2
    use_const_matrices: bool = True


def _coordinate_monomials(problem: Problem, degree: int) -> list[Expr]:
    out: list[Expr] = [Rat(Fraction(1))]
    coords = [problem.coord(c.name) for c in problem.coordinates]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(coords, d):
            out.append(mul(*combo))
    return out


def _candidate_terms(problem: Problem, cfg: AnsatzConfig):
    """Candidate ansatz terms (left, J, right): scalar-coefficient terms for
    every derivative multi-index, plus left/right constant-matrix terms at
    derivative order zero for matrix problems."""
    monos = _coordinate_monomials(problem, cfg.coeff_degree)
    ncoords = len(problem.coordinates)
    js: list[tuple[int, ...]] = [()]
    for d in range(1, cfg.max_deriv_order + 1):
        js.extend(combinations_with_replacement(range(ncoords), d))
    one = Rat(Fraction(1))
    terms = [(m, j, one) for j in js for m in monos]
    if problem.dependent.kind == MATRIX and cfg.use_const_matrices:
        for cm in problem.matrices.values():
            for m in monos:
                terms.append((mul(m, cm), (), one))
                terms.append((m, (), cm))
    return terms


def _match_linear(targets: list[Expr], candidates: list[list[Expr]]
                  ) -> Optional[list[Fraction]]:
    """Solve  sum_k c_k * candidates[k][r] = targets[r]  for every row r,
    by matching normalized term coefficients."""
    target_nfs = [nf(t) for t in targets]
    cand_nfs = [[nf(e) for e in row] for row in candidates]
    keys: list = sorted({k for n in target_nfs for k in n}
                        | {k for row in cand_nfs for n in row for k in n},
                        key=key_sort_key)
    a = []
    b = []
    for r in range(len(targets)):
        for key in keys:
            a.append([cand_nfs[k][r].get(key, Fraction(0))
                      for k in range(len(candidates))])
            b.append(target_nfs[r].get(key, Fraction(0)))
    return solve(a, b)


def find_operator(pde: Pde, Q: Characteristic | None, problem: Problem,
                  cfg: AnsatzConfig | None = None,
                  lhs: Expr | None = None) -> Optional[LinearOperatorAnsatz]:
    """Search for L-hat with  D_Q F = L-hat F  identically, over rational
    coefficients on the bounded monomial ansatz.  None means no certificate
    inside the bounds, which is not a proof of non-symmetry."""
    cfg = cfg or AnsatzConfig()
    if lhs is None:
        lhs = char_derivative(pde.f, Q, problem)
    terms = _candidate_terms(problem, cfg)
    applied = [normal_form(mul(left, iterated_total(pde.f, j, problem), right))
               for left, j, right in terms]
    sol = _match_linear([normal_form(lhs)], [[a] for a in applied])
    if sol is None:
        return None
    kept = tuple((mul(Rat(c), left), j, right)
                 for c, (left, j, right) in zip(sol, terms) if c)
    return LinearOperatorAnsatz(kept)


@dataclass(frozen=True)
class StructureConstants:
    basis: tuple[Characteristic, ...]
    c: tuple  # c[i][j][k], antisymmetric in (i, j)

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.c[i][j][k]


def structure_constants(pde: Pde, basis: list[Characteristic],
                        problem: Problem) -> StructureConstants:
    """Expand every pairwise bracket in the basis, solving exactly for the
    coefficients."""
    for q in basis:
        if not check_symmetry(pde, q, problem).is_symmetry:
            raise BasisError(f"{q.name} is not a symmetry of {pde.name}")
    basis_nfs = [nf(normal_form(q.q)) for q in basis]
    keys = sorted({k for n in basis_nfs for k in n}, key=key_sort_key)
    mat = [[n.get(k, Fraction(0)) for n in basis_nfs] for k in keys]
    if rank(mat) < len(basis):
        raise BasisError("basis dependent")
    n = len(basis)
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = bracket_characteristic(basis[i], basis[j], problem)
            coeffs = _match_linear([br.q], [[q.q] for q in basis])
            if coeffs is None:
                raise SpanError(
                    f"bracket not in span: [{basis[i].name}, {basis[j].name}]")
            for k in range(n):
                c[i][j][k] = coeffs[k]
                c[j][i][k] = -coeffs[k]
    out = StructureConstants(tuple(basis),
                             tuple(tuple(tuple(row) for row in plane)
                                   for plane in c))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert out.c[i][j][k] == -out.c[j][i][k]
    return out
