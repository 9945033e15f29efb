"""Formal sums of products of recoupling atoms.

The reduction engine emits an :class:`Expression`: a finite sum over
bound half-integer variables (with admissibility-derived ranges) of a
single product of atomic factors.  Atoms reference spins either as
literal 2j integers or as bound-variable names.  Expressions evaluate
at any deformation parameter and round-trip through a stable
s-expression text form, e.g.::

    (sum ((x0 0..4)) (term (loop x0) (sixj 1 1 x0 1 1 2) (twist 1 1 x0 over)))

Ranges are inclusive in 2j steps of two (the parity is fixed by
admissibility), so ``0..4`` means 2j in {0, 2, 4}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from . import recoupling as rc
from .scalars import Deformation

SpinRef = tuple[str, int] | tuple[str, str]  # ("lit", 2j) | ("var", name)


def lit(twice: int) -> SpinRef:
    return ("lit", twice)


def var(name: str) -> SpinRef:
    return ("var", name)


def _resolve(ref: SpinRef, env: Mapping[str, int]) -> int:
    kind, val = ref
    return val if kind == "lit" else env[val]


@dataclass(frozen=True)
class Atom:
    """One multiplicative factor.

    kind: loop | invloop | sixj | theta | delta | afactor | twist | const
    args: spin refs (and for afactor/twist a trailing mode token).
    """

    kind: str
    args: tuple

    def value(self, env: Mapping[str, int], d: Deformation, phase_override: bool = False):
        k = self.kind
        if k == "const":
            return d.scalar(self.args[0])
        if k == "loop":
            return rc.loop_value(_resolve(self.args[0], env), d)
        if k == "invloop":
            lv = rc.loop_value(_resolve(self.args[0], env), d)
            if d.is_zero(lv):
                raise ZeroDivisionError("vanishing loop value in a bigon factor")
            return d.one / lv if d.is_classical else 1 / lv
        if k == "theta":
            a, b, c = (_resolve(r, env) for r in self.args)
            return rc.theta(a, b, c, d)
        if k == "delta":
            a, b = (_resolve(r, env) for r in self.args)
            return d.one if a == b else d.zero
        if k == "sixj":
            return rc.sixj(*(_resolve(r, env) for r in self.args), d)
        if k == "twist":
            a, b, j = (_resolve(r, env) for r in self.args[:3])
            if phase_override:
                return d.one
            return rc.twist_factor(a, b, j, d, crossing=self.args[3])
        if k == "afactor":
            a, b, x = (_resolve(r, env) for r in self.args[:3])
            if phase_override:
                return d.one
            return rc.a_factor(a, b, x, d, sign=self.args[3])
        raise ValueError(f"unknown atom kind {k!r}")


@dataclass(frozen=True)
class Expression:
    """sum over bound variables (name, inclusive 2j range lo..hi step 2) of a product."""

    bound: tuple[tuple[str, int, int], ...]
    atoms: tuple[Atom, ...]
    zero: bool = False

    @staticmethod
    def constant_one() -> "Expression":
        return Expression((), ())

    @staticmethod
    def null() -> "Expression":
        return Expression((), (), zero=True)

    def assignments(self) -> Iterator[dict[str, int]]:
        def rec(i: int, env: dict[str, int]):
            if i == len(self.bound):
                yield dict(env)
                return
            name, lo, hi = self.bound[i]
            for val in range(lo, hi + 1, 2):
                env[name] = val
                yield from rec(i + 1, env)
            env.pop(name, None)

        yield from rec(0, {})

    def check(self):
        names = {n for n, _, _ in self.bound}
        used = set()
        for atom in self.atoms:
            for a in atom.args:
                if isinstance(a, tuple) and a[0] == "var":
                    used.add(a[1])
        missing = used - names
        if missing:
            raise ValueError(f"unbound variables {sorted(missing)}")
        unused = names - used
        if unused:
            raise ValueError(f"bound variables never used: {sorted(unused)}")


def simplify(expr: Expression) -> Expression:
    """Drop factors that are identically 1 and fold concrete deltas/thetas.

    (invloop r)(loop r) pairs cancel; theta/delta atoms over literal
    spins evaluate to 1 (dropped) or 0 (whole expression becomes zero).
    """
    if expr.zero:
        return expr
    atoms = list(expr.atoms)
    loops = [i for i, a in enumerate(atoms) if a.kind == "loop"]
    drop: set[int] = set()
    for i, a in enumerate(atoms):
        if a.kind == "invloop":
            for j in loops:
                if j not in drop and atoms[j].args == a.args:
                    drop.update((i, j))
                    break
    out = []
    for i, a in enumerate(atoms):
        if i in drop:
            continue
        if a.kind == "theta" and all(r[0] == "lit" for r in a.args):
            if rc.admissible(*(r[1] for r in a.args)):
                continue
            return Expression.null()
        if a.kind == "delta" and all(r[0] == "lit" for r in a.args):
            if a.args[0][1] == a.args[1][1]:
                continue
            return Expression.null()
        out.append(a)
    used = {r[1] for a in out for r in a.args if isinstance(r, tuple) and r[0] == "var"}
    if used != {b[0] for b in expr.bound}:
        # a bound variable may never lose its last use (the crossing 6j keeps it)
        raise AssertionError("simplification dropped a bound variable use")
    return Expression(expr.bound, tuple(out))


def evaluate_numeric(expr: Expression, d: Deformation, phase_override: bool = False):
    """Expand all bound variables (sorted assignment order) and sum the products."""
    if expr.zero:
        return d.zero
    total = d.zero
    for env in expr.assignments():
        prod = d.one
        for atom in expr.atoms:
            v = atom.value(env, d, phase_override)
            if d.is_zero(v):
                prod = d.zero
                break
            prod = prod * v
        total = total + prod
    return total


# ---------------------------------------------------------------------------
# s-expression text form

def _ref_str(ref: SpinRef) -> str:
    kind, val = ref
    return str(val)


def to_sexpr(expr: Expression) -> str:
    if expr.zero:
        return "(zero)"
    bounds = " ".join(f"({n} {lo}..{hi})" for n, lo, hi in expr.bound)
    atoms = []
    for a in expr.atoms:
        parts = [a.kind]
        for arg in a.args:
            if isinstance(arg, tuple):
                parts.append(_ref_str(arg))
            elif a.kind == "afactor":
                parts.append("+" if arg == +1 else "-")
            elif a.kind == "const":
                parts.append(str(Fraction(arg)))
            else:
                parts.append(str(arg))
        atoms.append("(" + " ".join(parts) + ")")
    return f"(sum ({bounds}) (term {' '.join(atoms)}))"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def _parse_tree(tokens: list[str]):
    tok = tokens.pop(0)
    if tok == "(":
        out = []
        while tokens and tokens[0] != ")":
            out.append(_parse_tree(tokens))
        if not tokens:
            raise ValueError("unbalanced s-expression")
        tokens.pop(0)
        return out
    if tok == ")":
        raise ValueError("unexpected ')'")
    return tok


_ARITY = {"loop": 1, "invloop": 1, "delta": 2, "theta": 3, "sixj": 6}


def _parse_ref(tok: str) -> SpinRef:
    return ("lit", int(tok)) if re.fullmatch(r"\d+", tok) else ("var", tok)


def from_sexpr(text: str) -> Expression:
    tokens = _tokenize(text)
    tree = _parse_tree(tokens)
    if tokens:
        raise ValueError("trailing tokens after expression")
    if tree == ["zero"]:
        return Expression.null()
    if not (isinstance(tree, list) and len(tree) == 3 and tree[0] == "sum"):
        raise ValueError("expected (sum (<bounds>) (term ...))")
    bounds = []
    for b in tree[1]:
        if not (isinstance(b, list) and len(b) == 2):
            raise ValueError(f"bad bound {b!r}")
        name, rng = b
        m = re.fullmatch(r"(\d+)\.\.(\d+)", rng)
        if not m:
            raise ValueError(f"bad range {rng!r}")
        bounds.append((name, int(m.group(1)), int(m.group(2))))
    term = tree[2]
    if not (term and term[0] == "term"):
        raise ValueError("expected (term ...)")
    atoms = []
    for node in term[1:]:
        kind = node[0]
        args = node[1:]
        if kind in _ARITY:
            if len(args) != _ARITY[kind]:
                raise ValueError(f"{kind} expects {_ARITY[kind]} spins")
            atoms.append(Atom(kind, tuple(_parse_ref(a) for a in args)))
        elif kind == "twist":
            if len(args) != 4 or args[3] not in ("over", "under"):
                raise ValueError("twist expects 3 spins and over|under")
            atoms.append(Atom("twist", tuple(_parse_ref(a) for a in args[:3]) + (args[3],)))
        elif kind == "afactor":
            if len(args) != 4 or args[3] not in ("+", "-"):
                raise ValueError("afactor expects 3 spins and +|-")
            sign = +1 if args[3] == "+" else -1
            atoms.append(Atom("afactor", tuple(_parse_ref(a) for a in args[:3]) + (sign,)))
        elif kind == "const":
            if len(args) != 1:
                raise ValueError("const expects one rational")
            atoms.append(Atom("const", (Fraction(args[0]),)))
        else:
            raise ValueError(f"unknown atom {kind!r}")
    expr = Expression(tuple(bounds), tuple(atoms))
    expr.check()
    return expr
