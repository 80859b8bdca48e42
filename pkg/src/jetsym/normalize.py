"""Canonical form for noncommutative jet-space expressions.

A normal form is a sum of terms (rational coefficient, commuting monomial,
noncommutative word).  The commuting monomial collects scalar-class atoms
with integer exponents; the word is the ordered tuple of matrix-class
factors.  Rewrites applied: distribute products over sums, flatten, extract
scalars, cancel adjacent w*inv(w) pairs, expand commutators, collect like
terms.  Commutators between scalar-class expressions therefore collapse to
zero, and fully commuting words reorder into the canonical monomial.
"""
from __future__ import annotations

from fractions import Fraction

from .core import (Add, Base, CMat, Comm, Coord, Expr, Fn, Inv, InversionError,
                   Jet, Mul, Pot, Rat, SCALAR, Sym, ZERO, expr_key, inverse,
                   mul, structural_eq)

# cmono: tuple[(atom, int exponent)] sorted by expr_key; word: tuple[factor]
Key = tuple[tuple, tuple]
NF = dict[Key, Fraction]


def _is_commuting_atom(a: Expr) -> bool:
    if isinstance(a, (Coord, Sym)):
        return True
    if isinstance(a, Jet):
        return a.dep.kind == SCALAR
    if isinstance(a, Base):
        return not a.matrix
    if isinstance(a, Pot):
        return not a.matrix
    if isinstance(a, Fn):
        return True  # analytic functions take scalar arguments only
    return False


def _merge_cmono(a: tuple, b: tuple) -> tuple:
    exps: dict[Expr, Fraction] = {}
    order: dict[Expr, tuple] = {}
    for atom, e in a + b:
        exps[atom] = exps.get(atom, 0) + e
        order.setdefault(atom, expr_key(atom))
    items = [(atom, e) for atom, e in exps.items() if e != 0]
    items.sort(key=lambda it: order[it[0]])
    return tuple(items)


def _cancel_word(word: tuple) -> tuple:
    w = list(word)
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(w):
            a, b = w[i], w[i + 1]
            if (isinstance(a, Inv) and a.base == b) or \
               (isinstance(b, Inv) and b.base == a):
                del w[i:i + 2]
                changed = True
                if i > 0:
                    i -= 1
            else:
                i += 1
    return tuple(w)


def _nf_add(a: NF, b: NF) -> NF:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _nf_scale(a: NF, c: Fraction) -> NF:
    if c == 0:
        return {}
    return {k: v * c for k, v in a.items()}


def _nf_mul(a: NF, b: NF) -> NF:
    out: NF = {}
    for (ca, wa), va in a.items():
        for (cb, wb), vb in b.items():
            key = (_merge_cmono(ca, cb), _cancel_word(wa + wb))
            s = out.get(key, 0) + va * vb
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _atom_nf(atom: Expr, exp: int = 1) -> NF:
    if _is_commuting_atom(atom):
        return {(((atom, exp),), ()): Fraction(1)}
    return {((), (atom,)): Fraction(1)}


def nf(e: Expr) -> NF:
    if isinstance(e, Rat):
        return {((), ()): e.value} if e.value else {}
    if isinstance(e, (Coord, Sym, CMat, Pot)):
        return _atom_nf(e)
    if isinstance(e, (Jet, Base)):
        return _atom_nf(e)
    if isinstance(e, Fn):
        return _atom_nf(Fn(e.fname, normal_form(e.arg)))
    if isinstance(e, Add):
        out: NF = {}
        for t in e.terms:
            out = _nf_add(out, nf(t))
        return out
    if isinstance(e, Mul):
        out = {((), ()): Fraction(1)}
        for f in e.factors:
            out = _nf_mul(out, nf(f))
        return out
    if isinstance(e, Inv):
        base = e.base
        if isinstance(base, Rat):
            return nf(inverse(base))
        if _is_commuting_atom(base):
            if not (isinstance(base, Jet) and not base.idx
                    and base.dep.invertible):
                raise InversionError(
                    f"scalar inverse only for the declared-nonzero dependent")
            return _atom_nf(base, -1)
        return _atom_nf(e)  # matrix atom inverse: opaque word factor
    if isinstance(e, Comm):
        ab = _nf_mul(nf(e.lhs), nf(e.rhs))
        ba = _nf_mul(nf(e.rhs), nf(e.lhs))
        return _nf_add(ab, _nf_scale(ba, Fraction(-1)))
    raise TypeError(f"cannot normalize node {type(e).__name__}")


def key_sort_key(key: Key) -> tuple:
    """Sortable surrogate for an internal term key (word length, then word
    factor keys, then commuting-monomial keys)."""
    cmono, word = key
    wkeys = tuple(expr_key(f) for f in word)
    ckeys = tuple((expr_key(a), e) for a, e in cmono)
    return (len(word), wkeys, ckeys)


def _term_sort_key(item):
    return key_sort_key(item[0])


def rebuild(n: NF) -> Expr:
    """Deterministic canonical expression from an internal normal form."""
    terms = []
    for (cmono, word), coeff in sorted(n.items(), key=_term_sort_key):
        factors: list[Expr] = []
        for atom, exp in cmono:
            if exp >= 0:
                factors.extend([atom] * exp)
            else:
                factors.extend([Inv(atom)] * (-exp))
        factors.extend(word)
        if coeff != 1 or not factors:
            factors.insert(0, Rat(coeff))
        terms.append(factors[0] if len(factors) == 1 else Mul(tuple(factors)))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def normal_form(e: Expr) -> Expr:
    return rebuild(nf(e))


def is_zero(e: Expr) -> bool:
    return not nf(e)


def equivalent(a: Expr, b: Expr) -> bool:
    """Semantic equality within the rewrite fragment."""
    return is_zero(a - b)


def substitute(e: Expr, target: Jet, replacement: Expr) -> Expr:
    """Replace every occurrence of exactly the jet coordinate `target`;
    the result is normalized."""
    if not isinstance(target, Jet):
        raise TypeError("substitution target must be a jet coordinate")

    def walk(x: Expr) -> Expr:
        if isinstance(x, Jet):
            return replacement if x == target else x
        if isinstance(x, Add):
            return Add(tuple(walk(t) for t in x.terms))
        if isinstance(x, Mul):
            return Mul(tuple(walk(f) for f in x.factors))
        if isinstance(x, Inv):
            inner = walk(x.base)
            return x if inner == x.base else inverse(inner)
        if isinstance(x, Comm):
            return Comm(walk(x.lhs), walk(x.rhs))
        if isinstance(x, Fn):
            return Fn(x.fname, walk(x.arg))
        return x

    return normal_form(walk(e))


def collect_jets(e: Expr) -> set[Jet]:
    """All jet atoms occurring anywhere in e (including function arguments)."""
    out: set[Jet] = set()

    def walk(x: Expr):
        if isinstance(x, Jet):
            out.add(x)
        elif isinstance(x, Add):
            for t in x.terms:
                walk(t)
        elif isinstance(x, Mul):
            for f in x.factors:
                walk(f)
        elif isinstance(x, Inv):
            walk(x.base)
        elif isinstance(x, Comm):
            walk(x.lhs)
            walk(x.rhs)
        elif isinstance(x, Fn):
            walk(x.arg)

    walk(e)
    return out
