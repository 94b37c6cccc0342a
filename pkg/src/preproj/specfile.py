"""Text formats for algebras and decorated quivers.

Algebras::

    algebra S = truncated_poly(2)
    algebra M = matrix_algebra(2) form=trace
    algebra A dim=2 sc=[(0,0,0,1),(0,1,1,1),(1,0,1,1)] unit=[1,0] form=[0,1] xdeg=[0,2]

Quivers::

    vertex 1 : k
    arrow a : 1 -> 2 kind=tensor xweight=1/2
    fold by ((1 3); (a b))

``#`` starts a comment. Rational literals may be written ``p/q``.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import STANDARD_KINDS, AlgebraError, FiniteDimAlgebra, make_algebra, standard_algebra
from .field import QQ, Field
from .quiver import Arrow, ArrowKind, Automorphism, DecoratedQuiver, QuiverError, fold


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _literal(node: ast.AST) -> Any:
    """``ast.literal_eval`` extended with ``p/q`` fractions and bare identifiers (kept as strings)."""
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, str)):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_literal(node.operand)
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        num, den = _literal(node.left), _literal(node.right)
        return Fraction(num, den) if isinstance(num, int) and isinstance(den, int) else Fraction(num) / Fraction(den)
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_literal(e) for e in node.elts]
    if isinstance(node, ast.Name):
        return node.id
    raise ValueError(f"unsupported literal {ast.dump(node)}")


def parse_value(text: str) -> Any:
    return _literal(ast.parse(text.strip(), mode="eval").body)


def _split_options(text: str) -> dict[str, str]:
    """Split ``key=value`` pairs separated by spaces at bracket depth zero."""
    out: dict[str, str] = {}
    depth = 0
    tokens: list[str] = []
    cur = ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                tokens.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        tokens.append(cur)
    for tok in tokens:
        if "=" not in tok:
            raise ValueError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def _xweight(text: str) -> int:
    value = Fraction(text)
    doubled = 2 * value
    if doubled.denominator != 1:
        raise ValueError("x-weights are multiples of 1/2")
    return int(doubled)


def _cycles(text: str) -> dict[str, str]:
    """Cycle notation ``(1 3)(2 4)`` to a mapping."""
    out: dict[str, str] = {}
    for cyc in re.findall(r"\(([^()]*)\)", text):
        items = cyc.replace(",", " ").split()
        for a, b in zip(items, items[1:] + items[:1]):
            if a in out:
                raise ValueError(f"{a} appears twice")
            out[a] = b
    rest = re.sub(r"\(([^()]*)\)", "", text).strip()
    if rest:
        raise ValueError(f"unexpected text {rest!r} in cycle notation")
    return out


class SpecParser:
    def __init__(self, field: Field = QQ) -> None:
        self.field = field
        self.algebras: dict[str, FiniteDimAlgebra] = {"k": standard_algebra("ground", field=field)}
        self.vertices: list[tuple[str, str]] = []
        self.arrows: list[Arrow] = []
        self.folds: list[Automorphism] = []
        self.name = ""

    def parse(self, text: str) -> "SpecParser":
        for no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            stripped = line.strip()
            if not stripped:
                continue
            col = len(line) - len(line.lstrip()) + 1
            head = stripped.split()[0]
            try:
                if head == "algebra":
                    self._algebra(stripped)
                elif head == "vertex":
                    self._vertex(stripped)
                elif head == "arrow":
                    self._arrow(stripped)
                elif head == "fold":
                    self._fold(stripped)
                elif head == "name":
                    self.name = stripped[4:].strip()
                else:
                    raise ValueError(f"unknown declaration {head!r}")
            except ParseError:
                raise
            except (ValueError, SyntaxError, KeyError, AlgebraError) as exc:
                if isinstance(exc, (QuiverError,)):
                    raise
                raise ParseError(str(exc), no, col) from None
        return self

    def _algebra(self, line: str) -> None:
        m = re.fullmatch(r"algebra\s+(\S+)\s*=\s*(\w+)\s*(\((.*?)\))?\s*(.*)", line)
        if m:
            name, kind, _, params, rest = m.groups()
            if kind not in STANDARD_KINDS:
                raise ValueError(f"unknown algebra kind {kind!r}")
            opts = _split_options(rest)
            args = []
            if params and params.strip():
                args = parse_value(f"[{params}]")
            if kind == "product":
                args = [self._lookup(a) for a in args]
            form = opts.pop("form", None)
            named_form = form if form is not None and not form.startswith("[") else None
            if kind == "matrix_algebra" and len(args) > 1:
                named_form = named_form or args.pop(1)
            alg = standard_algebra(kind, *args, field=self.field, form=named_form)
            if form is not None and form.startswith("["):
                alg = alg.with_form([self.field(x) for x in parse_value(form)])
            if opts:
                raise ValueError(f"unknown options {sorted(opts)}")
            self.algebras[name] = _renamed(alg, name)
            return
        m = re.fullmatch(r"algebra\s+(\S+)\s+(.*)", line)
        if not m:
            raise ValueError("expected 'algebra <name> = <kind>(...)' or inline structure constants")
        name, rest = m.groups()
        opts = _split_options(rest)
        dim = int(opts.pop("dim"))
        sc = parse_value(opts.pop("sc"))
        unit = parse_value(opts.pop("unit"))
        form = parse_value(opts.pop("form")) if "form" in opts else None
        xdeg = parse_value(opts.pop("xdeg")) if "xdeg" in opts else None
        labels = parse_value(opts.pop("labels")) if "labels" in opts else None
        if opts:
            raise ValueError(f"unknown options {sorted(opts)}")
        alg = make_algebra(dim, [tuple(e) for e in sc], unit, labels, xdeg, field=self.field, form=form, name=name)
        self.algebras[name] = alg

    def _lookup(self, name: str) -> FiniteDimAlgebra:
        if name not in self.algebras:
            raise ValueError(f"undeclared algebra {name!r}")
        return self.algebras[name]

    def _vertex(self, line: str) -> None:
        m = re.fullmatch(r"vertex\s+(\S+)\s*:\s*(\S+)", line)
        if not m:
            raise ValueError("expected 'vertex <id> : <algebra>'")
        vid, alg = m.groups()
        self._lookup(alg)
        if any(v == vid for v, _ in self.vertices):
            raise ValueError(f"vertex {vid} declared twice")
        self.vertices.append((vid, alg))

    def _arrow(self, line: str) -> None:
        m = re.fullmatch(r"arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*(.*)", line)
        if not m:
            raise ValueError("expected 'arrow <id> : <src> -> <tgt> kind=tensor|ident'")
        aid, src, tgt, rest = m.groups()
        opts = _split_options(rest)
        kind = opts.pop("kind", "tensor")
        if kind not in ("tensor", "ident"):
            raise ValueError(f"arrow kind must be tensor or ident, got {kind!r}")
        xw = _xweight(opts.pop("xweight")) if "xweight" in opts else None
        if opts:
            raise ValueError(f"unknown options {sorted(opts)}")
        self.arrows.append(Arrow(aid, src, tgt, ArrowKind(kind), xw))

    def _fold(self, line: str) -> None:
        m = re.fullmatch(r"fold\s+by\s*\((.*)\)", line)
        if not m:
            raise ValueError("expected 'fold by (<vertex cycles>; <arrow cycles>)'")
        body = m.group(1)
        if ";" not in body:
            raise ValueError("fold needs vertex and arrow cycles separated by ';'")
        vpart, apart = body.split(";", 1)
        self.folds.append(Automorphism(_cycles(vpart), _cycles(apart)))

    def build(self) -> DecoratedQuiver:
        if not self.vertices:
            raise ValueError("no vertices declared")
        dq = DecoratedQuiver(tuple(v for v, _ in self.vertices),
                             tuple(self.algebras[a] for _, a in self.vertices),
                             tuple(self.arrows), name=self.name)
        return fold(dq, self.folds) if self.folds else dq


def _renamed(alg: FiniteDimAlgebra, name: str) -> FiniteDimAlgebra:
    from dataclasses import replace

    return replace(alg, name=name)


def build_decorated_quiver(text: str, field: Field = QQ, name: str = "") -> DecoratedQuiver:
    """Parse a quiver spec; raises :class:`ParseError` or the quiver validation errors."""
    parser = SpecParser(field)
    parser.name = name
    parser.parse(text)
    try:
        return parser.build()
    except ValueError as exc:
        if isinstance(exc, QuiverError):
            raise
        raise ParseError(str(exc), 1) from None


def load_spec(path: str | Path, field: Field = QQ) -> DecoratedQuiver:
    p = Path(path)
    return build_decorated_quiver(p.read_text(), field, name=p.stem)
