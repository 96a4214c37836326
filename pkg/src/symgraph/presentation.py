"""Finitely presented groups: parsing and Todd-Coxeter coset enumeration.

Text format (whitespace is insignificant except as a separator)::

    gens: a b c d; rels: a^4, b^2, [a,c], a^b = a^-1, b^c = b a^2

* ``gens:`` lists generator names (identifiers).
* ``rels:`` is a comma-separated list; ``u = v`` stands for ``u v^-1``.
* A word is a product of factors written next to each other.  When every
  generator name is a single character, ``cda`` reads as ``c d a``;
  otherwise factors must be separated by spaces.
* ``x^n`` and ``x^{n}`` are powers (``n`` may be negative), ``x^y`` is the
  conjugate ``y^-1 x y`` and ``[x, y]`` is the commutator ``x^-1 y^-1 x y``.
  Parentheses group sub-words.

Words are tuples of non-zero integers: ``i + 1`` is generator ``i`` and
``-(i + 1)`` its inverse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


from .exceptions import BoundExceededError
from .perm import Permutation

Word = tuple

DEFAULT_COSET_BOUND = 10**5


def invert(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def power(word: Word, n: int) -> Word:
    if n < 0:
        return invert(word) * (-n)
    return tuple(word) * n


def conjugate(word: Word, by: Word) -> Word:
    return invert(by) + tuple(word) + tuple(by)


def commutator(x: Word, y: Word) -> Word:
    return invert(x) + invert(y) + tuple(x) + tuple(y)


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple
    names: tuple = field(default=())

    def __post_init__(self):
        if self.generator_count < 1:
            raise ValueError("a presentation needs at least one generator")
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.generator_count:
                    raise ValueError(f"relator {r} uses an undeclared generator")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(self.generator_count)))

    @classmethod
    def parse(cls, text: str) -> Presentation:
        m = re.fullmatch(r"\s*gens\s*:(?P<gens>[^;]*);\s*rels\s*:(?P<rels>.*)", text, re.S)
        if not m:
            raise ValueError("expected 'gens: ...; rels: ...'")
        names = m.group("gens").split()
        if not names or len(set(names)) != len(names):
            raise ValueError("generator names must be non-empty and distinct")
        for n in names:
            if not re.fullmatch(r"[A-Za-z_]\w*", n):
                raise ValueError(f"bad generator name {n!r}")
        parser = _WordParser(names)
        relators = []
        for chunk in _split_top(m.group("rels"), ","):
            if not chunk.strip():
                continue
            sides = _split_top(chunk, "=")
            words = [parser.parse(s) for s in sides]
            rel = words[0]
            for w in words[1:]:
                rel = rel + invert(w)
            relators.append(_free_reduce(rel))
        return cls(len(names), tuple(r for r in relators if r), tuple(names))

    def word(self, text: str) -> Word:
        """Parse a word over this presentation's generator names."""
        return _free_reduce(_WordParser(list(self.names)).parse(text))

    def __str__(self) -> str:
        def fmt(w):
            return " ".join(self.names[abs(x) - 1] + ("^-1" if x < 0 else "") for x in w)
        return f"gens: {' '.join(self.names)}; rels: " + ", ".join(fmt(r) for r in self.relators)


def _free_reduce(word) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


class _WordParser:
    def __init__(self, names: list[str]):
        self.names = {n: i + 1 for i, n in enumerate(names)}
        self.single = all(len(n) == 1 for n in names)

    def parse(self, text: str) -> Word:
        self.tokens = self._tokenize(text)
        self.pos = 0
        w = self._product()
        if self.pos != len(self.tokens):
            raise ValueError(f"unexpected {self.tokens[self.pos]!r} in {text!r}")
        return w

    def _tokenize(self, text: str) -> list[str]:
        tokens = []
        for m in re.finditer(r"\s+|-?\d+|[A-Za-z_]\w*|[()\[\]{},^]|\S", text):
            t = m.group()
            if t.isspace():
                continue
            if re.fullmatch(r"[A-Za-z_]\w*", t) and t not in self.names and self.single:
                tokens.extend(t)
            else:
                tokens.append(t)
        return tokens

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, expected=None):
        t = self._peek()
        if t is None or (expected is not None and t != expected):
            raise ValueError(f"expected {expected!r}, found {t!r}")
        self.pos += 1
        return t

    def _product(self) -> Word:
        w: Word = ()
        while self._peek() not in (None, ")", "]", "}", ","):
            w = w + self._factor()
        return w

    def _atom(self) -> Word:
        t = self._take()
        if t == "(":
            w = self._product()
            self._take(")")
            return w
        if t == "[":
            x = self._product()
            self._take(",")
            y = self._product()
            self._take("]")
            return commutator(x, y)
        if t == "1":
            return ()
        if t in self.names:
            return (self.names[t],)
        raise ValueError(f"unknown generator {t!r}")

    def _factor(self) -> Word:
        w = self._atom()
        while self._peek() == "^":
            self._take("^")
            t = self._peek()
            if t == "{":
                self._take("{")
                n = int(self._take())
                self._take("}")
                w = power(w, n)
            elif t is not None and re.fullmatch(r"-?\d+", t):
                w = power(w, int(self._take()))
            else:
                w = conjugate(w, self._atom())
        return w


@dataclass
class CosetTable:
    presentation: Presentation
    subgroup_words: tuple
    table: list
    status: str  # "complete" | "collapsed" | "bound-exceeded"
    defined: int = 0

    @property
    def size(self) -> int:
        return len(self.table)

    def permutations(self) -> list[Permutation]:
        """Action of each generator on the cosets (complete tables only)."""
        if self.status == "bound-exceeded":
            raise ValueError(f"coset table is {self.status}")
        return [Permutation([row[2 * i] for row in self.table])
                for i in range(self.presentation.generator_count)]


def _column(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


def coset_enumeration(p: Presentation, subgroup_words=(), bound: int = DEFAULT_COSET_BOUND,
                      raise_on_bound: bool = False) -> CosetTable:
    """HLT-style Todd-Coxeter enumeration of the cosets of a subgroup.

    Relators are scanned from every live coset in order, filling gaps with
    new definitions; coincidences are merged with a union-find queue.  The
    result has status ``bound-exceeded`` (never ``complete``) if more than
    ``bound`` cosets had to be defined.
    """
    ncols = 2 * p.generator_count
    rels = [[_column(x) for x in r] for r in p.relators]
    subs = [[_column(x) for x in w] for w in subgroup_words]
    table: list[list] = [[None] * ncols]
    parent = [0]
    state = {"defined": 1}

    def inv(x):
        return x ^ 1

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, x):
        if state["defined"] >= bound:
            raise _Overflow
        n = len(table)
        table.append([None] * ncols)
        parent.append(n)
        state["defined"] += 1
        table[c][x] = n
        table[n][inv(x)] = c

    def merge(k, l, queue):
        k, l = find(k), find(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        parent[l] = k
        queue.append(l)

    def coincidence(a, b):
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(ncols):
                f = table[e][x]
                if f is None:
                    continue
                table[f][inv(x)] = None
                e1, f1 = find(e), find(f)
                if table[e1][x] is not None:
                    merge(f1, table[e1][x], queue)
                elif table[f1][inv(x)] is not None:
                    merge(e1, table[f1][inv(x)], queue)
                else:
                    table[e1][x] = f1
                    table[f1][inv(x)] = e1

    def scan_and_fill(c, w):
        if not w:
            return
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][inv(w[j])] is not None:
                b = table[b][inv(w[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][inv(w[i])] = f
                return
            define(f, w[i])

    status = "complete"
    try:
        for w in subs:
            scan_and_fill(0, w)
        c = 0
        while c < len(table):
            for r in rels:
                if parent[c] != c:
                    break
                scan_and_fill(c, r)
            if parent[c] == c:
                for x in range(ncols):
                    if parent[c] != c:
                        break
                    if table[c][x] is None:
                        define(c, x)
            c += 1
    except _Overflow:
        status = "bound-exceeded"
        if raise_on_bound:
            raise BoundExceededError(f"coset enumeration exceeded {bound} cosets") from None

    if status != "complete":
        return CosetTable(p, tuple(subgroup_words), [], status, state["defined"])
    live = [c for c in range(len(table)) if parent[c] == c]
    renumber = {c: i for i, c in enumerate(live)}
    compact = [[renumber[find(table[c][x])] for x in range(ncols)] for c in live]
    if len(compact) == 1:
        status = "collapsed"
    return CosetTable(p, tuple(subgroup_words), compact, status, state["defined"])


class _Overflow(Exception):
    pass


def word_permutation(word: Word, gens: list[Permutation]) -> Permutation:
    """Evaluate a word on concrete permutations (left to right)."""
    result = Permutation.identity(gens[0].degree)
    inverses = [g.inverse() for g in gens]
    for x in word:
        result = result * (gens[x - 1] if x > 0 else inverses[-x - 1])
    return result


def closure_order(gens: list[Permutation], limit: int = 10**5) -> int:
    """Order of the group generated by ``gens``, by brute-force multiplication closure."""
    ident = Permutation.identity(gens[0].degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise BoundExceededError("closure exceeded limit")
        frontier = nxt
    return len(seen)


def satisfies(p: Presentation, gens: list[Permutation]) -> bool:
    return all(word_permutation(r, gens).is_identity() for r in p.relators)
