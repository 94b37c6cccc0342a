"""Reduction systems on path words: normal forms, ambiguities, bounded completion, irreducible counts.

Letters are either arrows (path length 1) or loop letters naming a basis
element of a vertex algebra (path length 0). Monomials are compared by
``(path length, x-degree, number of letters, letter ranks left to right)``,
which is a total order compatible with concatenation.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .field import QQ, Field, Scalar
from .linalg import axpy
from .preprojective import SIGNED, ideal_degree_span, relation_element
from .quiver import ArrowKind, DecoratedQuiver, double
from .tensor import multiply, path_element, to_vector, vertex_element


class RewritingError(ValueError):
    pass


class DegreeBoundExceeded(RewritingError):
    pass


class NonTerminatingWithinBound(RewritingError):
    def __init__(self, message: str, pending: Sequence = ()) -> None:
        super().__init__(message)
        self.pending = tuple(pending)


class OrderViolation(RewritingError):
    pass


class RuleParseError(RewritingError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Letter:
    name: str
    source: str
    target: str
    plen: int
    xdeg: int


@dataclass(frozen=True)
class Monomial:
    """A path word; ``letters`` are indices into the alphabet, ``source`` fixes the empty word."""

    source: str
    target: str
    letters: tuple


@dataclass(frozen=True)
class Rule:
    lhs: Monomial
    rhs: tuple  # ((Monomial, coefficient), ...)
    origin: str = ""


@dataclass(frozen=True)
class Ambiguity:
    kind: str  # "overlap" or "inclusion"
    first: int  # rule ids
    second: int
    word: Monomial
    position: int  # where the second lhs starts inside the word


@dataclass
class CompletionReport:
    confluent: bool
    degree_bound: int
    rules: int
    added: int
    deferred: int
    counts: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "confluent_within_bound": self.confluent,
            "degree_bound": self.degree_bound,
            "rules": self.rules,
            "added_rules": self.added,
            "deferred_ambiguities": self.deferred,
            "irreducible_total": sum(self.counts.values()),
            "irreducible_by_degree": _by_degree(self.counts),
        }


def _by_degree(counts: Mapping) -> dict[str, int]:
    out: dict[int, int] = {}
    for (_, _, plen, _), c in counts.items():
        out[plen] = out.get(plen, 0) + c
    return {str(k): v for k, v in sorted(out.items())}


class RewriteSystem:
    """An alphabet with a monomial order, a set of rules and a completion work queue."""

    def __init__(self, field: Field, vertices: Sequence[str], letters: Sequence[Letter],
                 ranking: Mapping[str, Sequence[str]] | None = None) -> None:
        self.field = field
        self.vertices = tuple(vertices)
        self.letters = tuple(letters)
        self.by_name = {l.name: i for i, l in enumerate(self.letters)}
        if len(self.by_name) != len(self.letters):
            raise RewritingError("duplicate letter name")
        self.rank = self._ranks(ranking or {})
        self.rules: dict[int, Rule] = {}
        self._lhs: dict[tuple, int] = {}
        self._next_id = 0
        self._max_lhs = 0
        self._ambiguities: list[tuple] = []
        self._deferred: list[Ambiguity] = []
        self._pending: list[dict] = []
        self.degree_bound = 0
        self.added = 0

    # -- order -------------------------------------------------------------------
    def _ranks(self, ranking: Mapping[str, Sequence[str]]) -> tuple:
        """Per-vertex ranks; listed letters come first in the given (descending) order."""
        ranks = [0] * len(self.letters)
        for v in self.vertices:
            mine = [i for i, l in enumerate(self.letters) if l.source == v]
            listed = [self.by_name[n] for n in ranking.get(v, ()) if n in self.by_name]
            for n in ranking.get(v, ()):
                if n not in self.by_name:
                    raise RewritingError(f"order names unknown generator {n!r}")
            rest = [i for i in mine if i not in listed]
            ordered = listed + rest
            for pos, i in enumerate(ordered):
                ranks[i] = len(ordered) - pos
        return tuple(ranks)

    def key(self, m: Monomial) -> tuple:
        ls = self.letters
        return (sum(ls[i].plen for i in m.letters), sum(ls[i].xdeg for i in m.letters), len(m.letters),
                tuple(self.rank[i] for i in m.letters))

    def plen(self, m: Monomial) -> int:
        return sum(self.letters[i].plen for i in m.letters)

    def xdeg(self, m: Monomial) -> int:
        return sum(self.letters[i].xdeg for i in m.letters)

    # -- monomials ------------------------------------------------------------------
    def empty(self, v: str) -> Monomial:
        return Monomial(v, v, ())

    def word(self, names: Sequence[str], source: str | None = None) -> Monomial:
        idx = []
        for n in names:
            if n not in self.by_name:
                raise RewritingError(f"unknown generator {n!r}")
            idx.append(self.by_name[n])
        return self.monomial(idx, source)

    def monomial(self, letters: Sequence[int], source: str | None = None) -> Monomial:
        letters = tuple(letters)
        if not letters:
            if source is None:
                raise RewritingError("empty word needs a vertex")
            return Monomial(source, source, ())
        for a, b in zip(letters, letters[1:]):
            if self.letters[a].target != self.letters[b].source:
                raise RewritingError("letters are not composable")
        return Monomial(self.letters[letters[0]].source, self.letters[letters[-1]].target, letters)

    def concat(self, u: Monomial, w: Monomial) -> Monomial | None:
        if u.target != w.source:
            return None
        return Monomial(u.source, w.target, u.letters + w.letters)

    def render(self, m: Monomial) -> str:
        if not m.letters:
            return f"e{m.source}"
        return ".".join(self.letters[i].name for i in m.letters)

    def render_element(self, elem: Mapping) -> str:
        if not elem:
            return "0"
        out = ""
        for m in sorted(elem, key=self.key, reverse=True):
            c = self.field.to_int_or_str(elem[m])
            # GF(p) coefficients render as residues, so no sign there
            negative = isinstance(c, int) and c < 0 or isinstance(c, str) and c.startswith("-")
            mag = str(c)[1:] if negative else str(c)
            word = "1" if not m.letters else self.render(m)
            term = word if mag == "1" else f"{mag}*{word}"
            out += (" - " if negative else " + ") + term if out else ("-" if negative else "") + term
        return out

    # -- rules and reduction -------------------------------------------------------
    def _add_rule(self, lhs: Monomial, rhs: Mapping, origin: str) -> int:
        key_l = self.key(lhs)
        for m in rhs:
            if self.key(m) >= key_l:
                raise OrderViolation(f"rule {self.render(lhs)} has a right-hand term that is not smaller")
        rid = self._next_id
        self._next_id += 1
        self.rules[rid] = Rule(lhs, tuple(sorted(rhs.items(), key=lambda kv: self.key(kv[0]))), origin)
        self._lhs[lhs.letters] = rid
        self._max_lhs = max(self._max_lhs, len(lhs.letters))
        return rid

    def _remove_rule(self, rid: int) -> Rule:
        rule = self.rules.pop(rid)
        del self._lhs[rule.lhs.letters]
        return rule

    def add_rule(self, lhs: Monomial, rhs: Mapping, origin: str = "input") -> None:
        """Add a rule exactly as given (its orientation is checked against the order)."""
        rhs = {m: self.field.norm(c) for m, c in rhs.items() if self.field.norm(c)}
        for m in rhs:
            if (m.source, m.target) != (lhs.source, lhs.target):
                raise RewritingError(f"rule {self.render(lhs)} mixes blocks")
        if lhs.letters in self._lhs:
            elem = {lhs: self.field.one}
            axpy(self.field, elem, rhs, self.field.neg(self.field.one))
            self._pending.append(elem)
            return
        rid = self._add_rule(lhs, rhs, origin)
        self._schedule(rid)

    def add_relation(self, elem: Mapping) -> None:
        """Queue an element of the ideal; completion orients it."""
        e = {m: self.field.norm(c) for m, c in elem.items() if self.field.norm(c)}
        if e:
            self._pending.append(e)

    def find_match(self, m: Monomial) -> tuple[int, int] | None:
        letters = m.letters
        n = len(letters)
        for i in range(n):
            for j in range(i + 1, min(n, i + self._max_lhs) + 1):
                rid = self._lhs.get(letters[i:j])
                if rid is not None:
                    return rid, i
        return None

    def _apply(self, m: Monomial, rid: int, pos: int) -> dict:
        rule = self.rules[rid]
        pre, post = m.letters[:pos], m.letters[pos + len(rule.lhs.letters):]
        out = {}
        for r, c in rule.rhs:
            out[Monomial(m.source, m.target, pre + r.letters + post)] = c
        return out

    def normal_form(self, elem: Mapping, bound: int | None = None) -> dict:
        field = self.field
        work: dict = {m: field.norm(c) for m, c in elem.items() if field.norm(c)}
        heap = [(_neg(self.key(m)), i, m) for i, m in enumerate(work)]
        heapq.heapify(heap)
        counter = len(heap)
        out: dict = {}
        while heap:
            _, _, m = heapq.heappop(heap)
            c = work.pop(m, None)
            if c is None:
                continue
            if bound is not None and self.plen(m) > bound:
                raise DegreeBoundExceeded(f"{self.render(m)} exceeds degree bound {bound}")
            hit = self.find_match(m)
            if hit is None:
                out[m] = c
                continue
            for r, rc in self._apply(m, *hit).items():
                val = field.norm(work.get(r, field.zero) + field.mul(c, rc))
                if val:
                    if r not in work:
                        heapq.heappush(heap, (_neg(self.key(r)), counter, r))
                        counter += 1
                    work[r] = val
                else:
                    work.pop(r, None)
        return out

    def is_irreducible(self, m: Monomial) -> bool:
        return self.find_match(m) is None

    # -- ambiguities -----------------------------------------------------------------
    def ambiguities_between(self, r1: int, r2: int) -> list[Ambiguity]:
        u, v = self.rules[r1].lhs.letters, self.rules[r2].lhs.letters
        out = []
        for k in range(1, min(len(u), len(v))):
            if u[len(u) - k:] == v[:k]:
                out.append(Ambiguity("overlap", r1, r2, self.monomial(u + v[k:]), len(u) - k))
        if r1 != r2 and len(v) <= len(u):
            for p in range(len(u) - len(v) + 1):
                if u[p:p + len(v)] == v:
                    out.append(Ambiguity("inclusion", r1, r2, self.monomial(u), p))
        return out

    def find_ambiguities(self) -> list[Ambiguity]:
        ids = sorted(self.rules)
        out = []
        for a in ids:
            for b in ids:
                out.extend(self.ambiguities_between(a, b))
        return sorted(out, key=lambda amb: (self.key(amb.word), amb.first, amb.second, amb.position))

    def branches(self, amb: Ambiguity) -> tuple[dict, dict]:
        return self._apply(amb.word, amb.first, 0), self._apply(amb.word, amb.second, amb.position)

    def resolve(self, amb: Ambiguity) -> dict:
        """Difference of the two branch normal forms; empty when the ambiguity resolves."""
        left, right = self.branches(amb)
        diff = dict(self.normal_form(left))
        axpy(self.field, diff, self.normal_form(right), self.field.neg(self.field.one))
        return diff

    def _schedule(self, rid: int) -> None:
        for other in list(self.rules):
            pairs = [(rid, other)] if other == rid else [(rid, other), (other, rid)]
            for a, b in pairs:
                for amb in self.ambiguities_between(a, b):
                    heapq.heappush(self._ambiguities, (self.key(amb.word), amb.first, amb.second, amb.position, amb))

    # -- completion ------------------------------------------------------------------
    def _orient(self, elem: dict, origin: str) -> None:
        field = self.field
        lead = max(elem, key=self.key)
        c = elem[lead]
        if not lead.letters:
            raise RewritingError(f"the ideal contains a multiple of the vertex idempotent e{lead.source}")
        inv = field.neg(field.inv(c))
        rhs = {m: field.mul(v, inv) for m, v in elem.items() if m != lead}
        # inter-reduce: rules whose lhs contains the new lhs go back to the queue
        for rid in list(self.rules):
            other = self.rules[rid].lhs.letters
            if rid in self.rules and _contains(other, lead.letters):
                old = self._remove_rule(rid)
                back = {old.lhs: field.one}
                for m, v in old.rhs:
                    back[m] = field.norm(back.get(m, field.zero) - v)
                self._pending.append(back)
        rid = self._add_rule(lead, rhs, origin)
        self.added += 1
        self._schedule(rid)

    def _drain_pending(self, origin: str) -> None:
        while self._pending:
            self._pending.sort(key=lambda e: max(self.key(m) for m in e) if e else ())
            elem = self._pending.pop(0)
            nf = self.normal_form(elem)
            if nf:
                self._orient(nf, origin)

    def complete(self, degree_bound: int, max_rules: int = 100_000) -> CompletionReport:
        """Resolve every ambiguity whose word has path length at most ``degree_bound``."""
        self.degree_bound = max(self.degree_bound, degree_bound)
        requeue, self._deferred = self._deferred, []
        for amb in requeue:
            heapq.heappush(self._ambiguities, (self.key(amb.word), amb.first, amb.second, amb.position, amb))
        self._drain_pending("relation")
        while self._ambiguities:
            *_, amb = heapq.heappop(self._ambiguities)
            if amb.first not in self.rules or amb.second not in self.rules:
                continue
            if self.plen(amb.word) > self.degree_bound:
                self._deferred.append(amb)
                continue
            diff = self.resolve(amb)
            if diff:
                self._pending.append(diff)
                self._drain_pending(f"{amb.kind} on {self.render(amb.word)}")
            if len(self.rules) > max_rules:
                raise NonTerminatingWithinBound("rule count limit reached", self._deferred)
        self._deferred = [a for a in self._deferred if a.first in self.rules and a.second in self.rules]
        return CompletionReport(True, self.degree_bound, len(self.rules), self.added, len(self._deferred))

    @property
    def deferred(self) -> tuple[Ambiguity, ...]:
        return tuple(a for a in self._deferred if a.first in self.rules and a.second in self.rules)

    # -- irreducible words --------------------------------------------------------------
    def irreducible_words(self, max_plen: int) -> list[Monomial]:
        """All irreducible words of path length at most ``max_plen``."""
        letters = self.letters
        out: list[Monomial] = []
        by_source: dict[str, list[int]] = {}
        for i, l in enumerate(letters):
            by_source.setdefault(l.source, []).append(i)
        cap = 2 * max_plen + 2 + self._max_lhs

        def suffix_reducible(word: tuple) -> bool:
            n = len(word)
            for k in range(1, min(n, self._max_lhs) + 1):
                if word[n - k:] in self._lhs:
                    return True
            return False

        for v in self.vertices:
            out.append(self.empty(v))
            stack = [((), v, 0)]
            while stack:
                word, at, pl = stack.pop()
                for i in by_source.get(at, ()):
                    npl = pl + letters[i].plen
                    if npl > max_plen:
                        continue
                    w = word + (i,)
                    if suffix_reducible(w):
                        continue
                    if len(w) > cap:
                        raise NonTerminatingWithinBound(
                            f"irreducible words of bounded path length grow without limit near {self.render(self.monomial(w))}")
                    out.append(Monomial(v, letters[i].target, w))
                    stack.append((w, letters[i].target, npl))
        return sorted(out, key=lambda m: (self.plen(m), self.key(m)))

    def irreducible_count(self, max_plen: int) -> dict[tuple, int]:
        """Counts keyed by ``(source, target, path length, x-degree)``."""
        counts: dict[tuple, int] = {}
        for m in self.irreducible_words(max_plen):
            k = (m.source, m.target, self.plen(m), self.xdeg(m))
            counts[k] = counts.get(k, 0) + 1
        return counts


def _neg(key: tuple) -> tuple:
    return tuple(-x if isinstance(x, int) else tuple(-y for y in x) for x in key)


def _contains(word: tuple, sub: tuple) -> bool:
    n, k = len(word), len(sub)
    return any(word[i:i + k] == sub for i in range(n - k + 1))


# -- rule files ---------------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?([A-Za-z0-9_.'^*]+)\s*")


def _parse_combination(text: str, system: RewriteSystem, source: str, line: int) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    pos = 0
    field = system.field
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise RuleParseError(f"cannot parse term at {text[pos:]!r}", line)
        sign, coef, word = m.groups()
        if sign is None and not first:
            raise RuleParseError("terms must be separated by + or -", line)
        first = False
        c = field(coef) if coef else field.one
        if sign == "-":
            c = field.neg(c)
        if word == "1":
            mono = system.empty(source)
        else:
            try:
                mono = system.word(word.split("."))
            except RewritingError as exc:
                raise RuleParseError(str(exc), line) from None
        out[mono] = field.norm(out.get(mono, field.zero) + c)
        pos = m.end()
    return {k: v for k, v in out.items() if v}


def parse_rule_file(text: str, field: Field = QQ) -> RewriteSystem:
    """Parse ``gen``/``order``/``rule`` lines into a system (rules added as written)."""
    gens: list[Letter] = []
    orders: dict[str, list[str]] = {}
    rules: list[tuple[int, str, str]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gen "):
            m = re.fullmatch(r"gen\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)((?:\s+\w+=\S+)*)", line)
            if not m:
                raise RuleParseError("expected 'gen <name> : <src> -> <tgt> [plen=..] [xdeg=..]'", no)
            opts = dict(kv.split("=") for kv in m.group(4).split())
            try:
                plen = int(opts.pop("plen", 1))
                xdeg = _half_units(opts.pop("xdeg", "0"))
            except ValueError:
                raise RuleParseError("bad plen or xdeg value", no) from None
            if opts:
                raise RuleParseError(f"unknown options {sorted(opts)}", no)
            gens.append(Letter(m.group(1), m.group(2), m.group(3), plen, xdeg))
        elif line.startswith("order"):
            m = re.fullmatch(r"order\s+vertex\s+(\S+)\s*:\s*(.+)", line)
            if not m:
                raise RuleParseError("expected 'order vertex <i>: g1 > g2 > ...'", no)
            orders[m.group(1)] = [g.strip() for g in m.group(2).split(">")]
        elif line.startswith("rule"):
            m = re.fullmatch(r"rule\s*:\s*(.+?)\s*->\s*(.+)", line)
            if not m:
                raise RuleParseError("expected 'rule: <word> -> <combination>'", no)
            rules.append((no, m.group(1), m.group(2)))
        else:
            raise RuleParseError(f"unknown declaration {line.split()[0]!r}", no)
    if not gens:
        for v, names in orders.items():
            gens.extend(Letter(n, v, v, 1, 0) for n in names)
    if not gens:
        raise RuleParseError("no generators declared", 1)
    vertices = []
    for g in gens:
        for v in (g.source, g.target):
            if v not in vertices:
                vertices.append(v)
    system = RewriteSystem(field, vertices, gens, orders)
    for no, lhs_text, rhs_text in rules:
        try:
            lhs = system.word(lhs_text.strip().split("."))
        except RewritingError as exc:
            raise RuleParseError(str(exc), no) from None
        rhs = _parse_combination(rhs_text, system, lhs.source, no)
        try:
            system.add_rule(lhs, rhs)
        except RewritingError as exc:
            raise RuleParseError(str(exc), no) from None
    return system


def _half_units(text: str) -> int:
    if text.endswith("/2"):
        return int(text[:-2])
    return 2 * int(text)


# -- systems for decorated preprojective algebras ---------------------------------------------

def loop_letter(v: str, label: str) -> str:
    return f"{v}:{label}"


def preprojective_system(dq: DecoratedQuiver, convention: str = SIGNED,
                         ranking: Mapping[str, Sequence[str]] | None = None) -> RewriteSystem:
    """Presentation by loop letters and arrow letters with unit, product, commutation and vertex relations.

    Default ranking at each vertex: loop letters (later basis elements first)
    above arrows, and arrows toward earlier vertices above later ones.
    """
    dd = double(dq)
    field = dd.field
    vidx = {v: i for i, v in enumerate(dd.vertices)}
    letters: list[Letter] = []
    for v, alg in zip(dd.vertices, dd.algebras):
        for b in range(alg.dim):
            letters.append(Letter(loop_letter(v, alg.labels[b]), v, v, 0, alg.xdeg[b]))
    for a in dd.arrows:
        letters.append(Letter(a.id, a.source, a.target, 1, a.xweight))
    default: dict[str, list[str]] = {}
    for v, alg in zip(dd.vertices, dd.algebras):
        loops = [loop_letter(v, alg.labels[b]) for b in reversed(range(alg.dim))]
        arrows = sorted((a for a in dd.arrows if a.source == v),
                        key=lambda a: (vidx[a.target], a.starred, a.id))
        default[v] = loops + [a.id for a in arrows]
    if ranking:
        for v, names in ranking.items():
            default[v] = list(names) + [n for n in default.get(v, []) if n not in names]
    system = RewriteSystem(field, dd.vertices, letters, default)
    for rel in presentation_relations(dd, system, convention):
        system.add_relation(rel)
    return system


def presentation_relations(dd: DecoratedQuiver, system: RewriteSystem, convention: str = SIGNED) -> list[dict]:
    field = dd.field
    minus = field.neg(field.one)
    loop = {}
    for v, alg in zip(dd.vertices, dd.algebras):
        for b in range(alg.dim):
            loop[(v, b)] = system.by_name[loop_letter(v, alg.labels[b])]
    rels: list[dict] = []
    for v, alg in zip(dd.vertices, dd.algebras):
        unit = {system.monomial((loop[(v, b)],)): c for b, c in enumerate(alg.unit) if c}
        unit[system.empty(v)] = field.norm(unit.get(system.empty(v), field.zero) + minus)
        rels.append(unit)
        for a in range(alg.dim):
            for b in range(alg.dim):
                rel = {system.monomial((loop[(v, a)], loop[(v, b)])): field.one}
                for k, c in alg.table[a][b]:
                    m = system.monomial((loop[(v, k)],))
                    rel[m] = field.norm(rel.get(m, field.zero) - c)
                rels.append(rel)
    for arrow in dd.arrows:
        if arrow.kind is not ArrowKind.IDENT:
            continue
        g = system.by_name[arrow.id]
        alg = dd.algebra(arrow.source)
        for b in range(alg.dim):
            rel = {system.monomial((loop[(arrow.source, b)], g)): field.one,
                   system.monomial((g, loop[(arrow.target, b)])): minus}
            rels.append(rel)
    rel_elem = relation_element(dd, convention)
    for v in dd.vertices:
        comp = rel_elem.component(v)
        if comp:
            rels.append(tensor_to_words(dd, system, comp))
    return rels


def tensor_to_words(dd: DecoratedQuiver, system: RewriteSystem, elem: Mapping) -> dict:
    """Path words with slots become letter words with one loop letter per slot."""
    field = dd.field
    out: dict = {}
    for pw, c in elem.items():
        letters = [system.by_name[loop_letter(pw.source, dd.algebra(pw.source).labels[pw.slots[0]])]]
        k = 1
        for aid in pw.arrows:
            a = dd.arrow(aid)
            letters.append(system.by_name[aid])
            if a.kind is ArrowKind.TENSOR:
                letters.append(system.by_name[loop_letter(a.target, dd.algebra(a.target).labels[pw.slots[k]])])
                k += 1
        m = system.monomial(letters)
        out[m] = field.norm(out.get(m, field.zero) + c)
    return {m: c for m, c in out.items() if c}


def words_to_tensor(dd: DecoratedQuiver, system: RewriteSystem, elem: Mapping) -> dict:
    """Evaluate letter words as products of generators in the tensor algebra."""
    field = dd.field
    gens: dict[int, dict] = {}
    for i, l in enumerate(system.letters):
        if l.plen == 0:
            alg = dd.algebra(l.source)
            label = l.name.split(":", 1)[1]
            gens[i] = vertex_element(dd, l.source, alg.basis_vector(alg.labels.index(label)))
        else:
            a = dd.arrow(l.name)
            slots = [dd.algebra(a.source).unit]
            if a.kind is ArrowKind.TENSOR:
                slots.append(dd.algebra(a.target).unit)
            gens[i] = path_element(dd, a.source, (a.id,), slots)
    out: dict = {}
    for m, c in elem.items():
        val = vertex_element(dd, m.source, dd.algebra(m.source).unit)
        for i in m.letters:
            val = multiply(dd, val, gens[i])
        axpy(field, out, val, c)
    return out


def rules_in_ideal(dq: DecoratedQuiver, system: RewriteSystem, convention: str = SIGNED,
                   max_plen: int = 4) -> bool:
    """Check ``lhs - rhs`` of every rule of path length ``2..max_plen`` against the explicit ideal span."""
    dd = double(dq)
    spans = {}
    for rule in system.rules.values():
        n = system.plen(rule.lhs)
        if n < 2 or n > max_plen:
            if n < 2:
                elem = {rule.lhs: dd.field.one}
                for m, c in rule.rhs:
                    elem[m] = dd.field.neg(c)
                if words_to_tensor(dd, system, elem):
                    return False
            continue
        if n not in spans:
            spans[n] = ideal_degree_span(dd, n, convention)
        piece, space = spans[n]
        elem = {rule.lhs: dd.field.one}
        for m, c in rule.rhs:
            elem[m] = dd.field.neg(c)
        if not space.contains(to_vector(piece, words_to_tensor(dd, system, elem))):
            return False
    return True


def counts_as_series(system: RewriteSystem, counts: Mapping, cutoff: int, stabilized: bool):
    """Irreducible counts arranged like a Hilbert series."""
    from .series import HilbertSeries

    idx = {v: i for i, v in enumerate(system.vertices)}
    n = len(system.vertices)
    coeffs: dict = {}
    for (s, t, plen, x), c in counts.items():
        m = coeffs.setdefault((plen, x), [[0] * n for _ in range(n)])
        m[idx[s]][idx[t]] += c
    return HilbertSeries(system.vertices, {k: tuple(map(tuple, m)) for k, m in coeffs.items()}, cutoff, stabilized)


def rewriting_series(dq: DecoratedQuiver, convention: str = SIGNED, max_degree: int | None = None,
                     ranking: Mapping[str, Sequence[str]] | None = None):
    """Complete the presentation up to ``max_degree + 1`` and count irreducible words.

    When the count at the top degree vanishes every longer word is reducible,
    so the series is reported as stabilized.
    """
    system = preprojective_system(dq, convention, ranking)
    if max_degree is None:
        max_degree = 2 * sum(a.dim for a in double(dq).algebras)
    bound = max_degree + 1
    system.complete(bound)
    counts = system.irreducible_count(bound)
    top = [k for k in counts if k[2] == bound]
    return counts_as_series(system, {k: c for k, c in counts.items() if k[2] <= max_degree}, max_degree, not top), system


__all__ = [
    "Letter", "Monomial", "Rule", "Ambiguity", "RewriteSystem", "CompletionReport",
    "parse_rule_file", "preprojective_system", "rewriting_series", "rules_in_ideal",
    "tensor_to_words", "words_to_tensor", "RewritingError", "DegreeBoundExceeded",
    "NonTerminatingWithinBound", "OrderViolation", "RuleParseError",
]

