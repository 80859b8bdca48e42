"""Immutable expression trees over a jet space with a matrix-valued dependent.

Expressions are sums of products of alternating base-space factors (functions
of the coordinates) and fiber factors (the dependent and its derivative
coordinates).  Products are order-preserving: matrix-class factors commute
with nothing except scalar-class factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

SCALAR = "scalar"
MATRIX = "matrix"


class JetsymError(Exception):
    """Base class for all engine errors."""


class DeclarationError(JetsymError):
    """Undeclared or inconsistently declared symbol."""


class KindError(JetsymError):
    """Scalar/matrix class violation (e.g. an analytic function of a matrix)."""


class InversionError(JetsymError):
    """Inverse requested for something not declared invertible."""


class NonlocalActionError(JetsymError):
    """Characteristic derivative of a potential with no registered image."""


@dataclass(frozen=True)
class Coordinate:
    name: str
    index: int


@dataclass(frozen=True)
class Dependent:
    name: str
    kind: str = SCALAR
    invertible: bool = False

    def __post_init__(self):
        if self.kind not in (SCALAR, MATRIX):
            raise DeclarationError(f"unknown dependent kind {self.kind!r}")


class Expr:
    """Base class of all expression nodes.  Instances are immutable."""

    __hash__ = None  # subclasses are frozen dataclasses and define it

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True)
class Rat(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Sym(Expr):
    """Declared opaque commuting constant symbol (c, lambda, ...)."""

    name: str


@dataclass(frozen=True)
class Coord(Expr):
    coordinate: Coordinate


@dataclass(frozen=True)
class Jet(Expr):
    """Derivative coordinate u_J; idx is the sorted multi-index of coordinate
    indices (empty for the dependent itself)."""

    dep: Dependent
    idx: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "idx", tuple(sorted(self.idx)))

    @property
    def order(self) -> int:
        return len(self.idx)


@dataclass(frozen=True)
class Base(Expr):
    """Base-space function a(x^k).  `partials` is the sorted multi-index of
    accumulated partial derivatives."""

    name: str
    matrix: bool = False
    partials: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "partials", tuple(sorted(self.partials)))


@dataclass(frozen=True)
class CMat(Expr):
    """Constant matrix of symbolic dimension."""

    name: str
    invertible: bool = False


@dataclass(frozen=True)
class Pot(Expr):
    """Nonlocal potential atom; its gradient lives in the problem registry."""

    name: str
    matrix: bool = True


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Inv(Expr):
    base: Expr


@dataclass(frozen=True)
class Comm(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Fn(Expr):
    """Analytic scalar function applied to a scalar argument."""

    fname: str
    arg: Expr


ZERO = Rat(Fraction(0))
ONE = Rat(Fraction(1))

#: derivative rules for analytic scalar functions: name -> (coeff, new name)
FUNC_DERIVATIVES = {
    "sin": (Fraction(1), "cos"),
    "cos": (Fraction(-1), "sin"),
    "exp": (Fraction(1), "exp"),
}


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Rat(Fraction(v))
    raise TypeError(f"cannot interpret {v!r} as an expression")


def rat(num, den=1) -> Rat:
    return Rat(Fraction(num, den))


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        t = as_expr(t)
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    for f in factors:
        f = as_expr(f)
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def neg(e: Expr) -> Expr:
    return mul(Rat(Fraction(-1)), e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def commutator(a: Expr, b: Expr) -> Expr:
    """[A, B] = AB - BA, kept as a node until normalization."""
    return Comm(as_expr(a), as_expr(b))


def mk_jet(dep: Dependent, idx: Iterable[Union[int, Coordinate]]) -> Jet:
    ints = tuple(i.index if isinstance(i, Coordinate) else int(i) for i in idx)
    return Jet(dep, ints)


def inverse(e: Expr) -> Expr:
    """Inverse of an invertible atom; rejects sums and general monomials."""
    e = as_expr(e)
    if isinstance(e, Rat):
        if e.value == 0:
            raise InversionError("cannot invert zero")
        return Rat(1 / e.value)
    if isinstance(e, Inv):
        return e.base
    if isinstance(e, Jet):
        if e.idx or not e.dep.invertible:
            raise InversionError(
                f"jet {e.dep.name}_{e.idx} is not declared invertible")
        return Inv(e)
    if isinstance(e, CMat):
        if not e.invertible:
            raise InversionError(f"constant matrix {e.name} is not invertible")
        return Inv(e)
    raise InversionError(f"inverse is only defined for invertible atoms, got {type(e).__name__}")


def func(fname: str, arg: Expr) -> Fn:
    if fname not in FUNC_DERIVATIVES:
        raise DeclarationError(f"unknown analytic function {fname!r}")
    arg = as_expr(arg)
    if not is_scalar(arg):
        raise KindError(f"{fname} applied to a matrix-valued argument")
    return Fn(fname, arg)


def is_scalar(e: Expr) -> bool:
    """True when every atom in e belongs to the commuting (scalar) class."""
    if isinstance(e, (Rat, Sym, Coord)):
        return True
    if isinstance(e, Jet):
        return e.dep.kind == SCALAR
    if isinstance(e, Base):
        return not e.matrix
    if isinstance(e, (CMat, Pot)):
        return isinstance(e, Pot) and not e.matrix
    if isinstance(e, Add):
        return all(is_scalar(t) for t in e.terms)
    if isinstance(e, Mul):
        return all(is_scalar(f) for f in e.factors)
    if isinstance(e, Inv):
        return is_scalar(e.base)
    if isinstance(e, Comm):
        return is_scalar(e.lhs) and is_scalar(e.rhs)
    if isinstance(e, Fn):
        return True
    raise TypeError(f"unknown node {type(e).__name__}")


def structural_eq(a: Expr, b: Expr) -> bool:
    """Node-for-node tree identity (not semantic equality)."""
    return a == b


def expr_key(e: Expr) -> tuple:
    """Deterministic total order key on expression nodes.

    Atoms rank: coordinates < constants < jets (by order, then multi-index)
    < base functions < analytic functions < constant matrices < potentials;
    an inverse sorts directly after the atom it inverts.
    """
    if isinstance(e, Rat):
        return (0, e.value.numerator, e.value.denominator)
    if isinstance(e, Coord):
        return (1, e.coordinate.index)
    if isinstance(e, Sym):
        return (2, e.name)
    if isinstance(e, Jet):
        return (3, e.dep.name, e.order, e.idx)
    if isinstance(e, Base):
        return (4, e.name, e.partials)
    if isinstance(e, Fn):
        return (5, e.fname, expr_key(e.arg))
    if isinstance(e, CMat):
        return (6, e.name)
    if isinstance(e, Pot):
        return (7, e.name)
    if isinstance(e, Inv):
        return expr_key(e.base) + (("inv",),)
    if isinstance(e, Mul):
        return (8, tuple(expr_key(f) for f in e.factors))
    if isinstance(e, Add):
        return (9, tuple(expr_key(t) for t in e.terms))
    if isinstance(e, Comm):
        return (10, expr_key(e.lhs), expr_key(e.rhs))
    raise TypeError(f"unknown node {type(e).__name__}")


@dataclass
class PotentialDef:
    """Gradient-defined nonlocal variable: derivatives[coord name] = Expr.

    `char_images` optionally registers the action of a characteristic
    derivative on the potential, keyed by characteristic name."""

    name: str
    derivatives: dict[str, Expr]
    char_images: dict[str, Expr] = field(default_factory=dict)
    matrix: bool = True

    def atom(self) -> Pot:
        return Pot(self.name, self.matrix)


class Problem:
    """Declaration context: coordinates, the single dependent, constants,
    constant matrices, base functions and the potential registry."""

    def __init__(self, coords: Iterable[str] = ("x", "t"),
                 dependent: Dependent = None,
                 constants: Iterable[str] = (),
                 matrices: Iterable = (),
                 base_functions: Iterable = ()):
        names = list(coords)
        if len(set(names)) != len(names):
            raise DeclarationError("coordinate names must be unique")
        self.coordinates = tuple(Coordinate(n, i) for i, n in enumerate(names))
        self._coord_by_name = {c.name: c for c in self.coordinates}
        self.dependent = dependent or Dependent("u")
        self.constants = tuple(constants)
        self.matrices: dict[str, CMat] = {}
        for m in matrices:
            if isinstance(m, CMat):
                self.matrices[m.name] = m
            elif isinstance(m, tuple):
                self.matrices[m[0]] = CMat(m[0], bool(m[1]))
            else:
                self.matrices[m] = CMat(m)
        self.base_functions: dict[str, Base] = {}
        for b in base_functions:
            if isinstance(b, Base):
                self.base_functions[b.name] = b
            elif isinstance(b, tuple):
                self.base_functions[b[0]] = Base(b[0], bool(b[1]))
            else:
                self.base_functions[b] = Base(b)
        self.potentials: dict[str, PotentialDef] = {}
        self._check_name_clashes()

    def _check_name_clashes(self):
        seen: set[str] = set()
        for n in ([c.name for c in self.coordinates] + [self.dependent.name]
                  + list(self.constants) + list(self.matrices)
                  + list(self.base_functions)):
            if n in seen:
                raise DeclarationError(f"name {n!r} declared more than once")
            seen.add(n)

    # --- lookups -----------------------------------------------------------
    def coordinate(self, name: str) -> Coordinate:
        try:
            return self._coord_by_name[name]
        except KeyError:
            raise DeclarationError(f"unknown coordinate {name!r}") from None

    def coord(self, name: str) -> Coord:
        return Coord(self.coordinate(name))

    @property
    def u(self) -> Jet:
        return Jet(self.dependent)

    def jet(self, subscripts: Iterable[str]) -> Jet:
        return Jet(self.dependent,
                   tuple(self.coordinate(s).index for s in subscripts))

    def const(self, name: str) -> Sym:
        if name not in self.constants:
            raise DeclarationError(f"unknown constant {name!r}")
        return Sym(name)

    def cmat(self, name: str) -> CMat:
        try:
            return self.matrices[name]
        except KeyError:
            raise DeclarationError(f"unknown constant matrix {name!r}") from None

    def base(self, name: str) -> Base:
        try:
            return self.base_functions[name]
        except KeyError:
            raise DeclarationError(f"unknown base function {name!r}") from None

    def potential(self, name: str) -> Pot:
        try:
            return self.potentials[name].atom()
        except KeyError:
            raise DeclarationError(f"unknown potential {name!r}") from None

    def register_potential(self, pdef: PotentialDef) -> Pot:
        """Raw registration; `backlund.declare_potential` performs the
        cross-derivative compatibility check first."""
        for c in self.coordinates:
            if c.name not in pdef.derivatives:
                raise DeclarationError(
                    f"potential {pdef.name}: no derivative for {c.name}")
        if pdef.name in self.potentials or pdef.name in self._coord_by_name:
            raise DeclarationError(f"name {pdef.name!r} already declared")
        self.potentials[pdef.name] = pdef
        return pdef.atom()
