"""Restricted regular expressions over the action alphabet.

Supported syntax: the six action letters, concatenation, ``|``, ``( )`` and
the quantifiers ``?``, ``*``, ``+``, ``{n}``, ``{m,n}``, ``{m,}``, ``{,n}``.
Matching is always anchored at both ends.

Patterns are compiled eagerly into a DFA over the six letters.  The grammar
patterns are tiny, so the subset construction is cheap and matching a
substring costs one table lookup per letter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import PatternSyntaxError
from .trajectory import ALPHABET

MAX_REPEAT = 1000
MAX_DEPTH = 64


@dataclass(frozen=True)
class Lit:
    char: str


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Alt:
    options: tuple


@dataclass(frozen=True)
class Repeat:
    node: "Node"
    lo: int
    hi: Optional[int]  # None means unbounded


Node = Union[Lit, Concat, Alt, Repeat]


class _Parser:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.depth = 0

    def error(self, reason, offset=None):
        raise PatternSyntaxError(self.src, self.pos if offset is None else offset, reason)

    def peek(self):
        return self.src[self.pos] if self.pos < len(self.src) else None

    def parse(self) -> Node:
        if not self.src:
            self.error("empty pattern")
        node = self.alternation()
        if self.pos < len(self.src):
            # only a stray ')' can stop alternation() early
            self.error("unbalanced ')'")
        return node

    def alternation(self) -> Node:
        options = [self.concatenation()]
        while self.peek() == "|":
            self.pos += 1
            options.append(self.concatenation())
        return options[0] if len(options) == 1 else Alt(tuple(options))

    def concatenation(self) -> Node:
        start = self.pos
        parts = []
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.repetition())
        if not parts:
            self.error("empty alternative", start)
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def repetition(self) -> Node:
        node = self.atom()
        ch = self.peek()
        if ch is None or ch not in "?*+{":
            return node
        at = self.pos
        if ch == "?":
            self.pos += 1
            lo, hi = 0, 1
        elif ch == "*":
            self.pos += 1
            lo, hi = 0, None
        elif ch == "+":
            self.pos += 1
            lo, hi = 1, None
        else:
            lo, hi = self.braces()
        nxt = self.peek()
        if nxt is not None and nxt in "?*+{":
            self.error("multiple repeat", self.pos)
        if hi == 0:
            self.error("repeat with upper bound 0", at)
        return Repeat(node, lo, hi)

    def braces(self):
        at = self.pos
        close = self.src.find("}", at)
        if close < 0:
            self.error("unterminated '{'", at)
        body = self.src[at + 1 : close]
        lo_s, comma, hi_s = body.partition(",")
        for part in (lo_s, hi_s):
            if part and not part.isdigit():
                self.error(f"bad repeat count {body!r}", at)
        if not comma:
            if not lo_s:
                self.error("empty repeat count", at)
            lo = hi = int(lo_s)
        else:
            if not lo_s and not hi_s:
                self.error("empty repeat bounds", at)
            lo = int(lo_s) if lo_s else 0
            hi = int(hi_s) if hi_s else None
        if max(lo, hi or 0) > MAX_REPEAT:
            self.error(f"repeat count above {MAX_REPEAT}", at)
        if hi is not None and lo > hi:
            self.error("repeat bounds out of order", at)
        self.pos = close + 1
        return lo, hi

    def atom(self) -> Node:
        ch = self.peek()
        if ch == "(":
            self.depth += 1
            if self.depth > MAX_DEPTH:
                self.error("groups nested too deeply")
            self.pos += 1
            node = self.alternation()
            if self.peek() != ")":
                self.error("missing ')'")
            self.pos += 1
            self.depth -= 1
            return node
        if ch in ("?", "*", "+", "{"):
            self.error("nothing to repeat")
        if ch in ALPHABET:
            self.pos += 1
            return Lit(ch)
        self.error(f"unsupported character {ch!r}")


class _NFA:
    """Thompson construction; state ids are list indices."""

    def __init__(self):
        self.eps: list[list[int]] = []
        self.char: list[dict] = []

    def new(self) -> int:
        self.eps.append([])
        self.char.append({})
        return len(self.eps) - 1

    def build(self, node: Node):
        if isinstance(node, Lit):
            s, a = self.new(), self.new()
            self.char[s][node.char] = a
            return s, a
        if isinstance(node, Concat):
            s, a = self.build(node.parts[0])
            for part in node.parts[1:]:
                s2, a2 = self.build(part)
                self.eps[a].append(s2)
                a = a2
            return s, a
        if isinstance(node, Alt):
            s, a = self.new(), self.new()
            for opt in node.options:
                s2, a2 = self.build(opt)
                self.eps[s].append(s2)
                self.eps[a2].append(a)
            return s, a
        # Repeat: lo mandatory copies, then a star or (hi - lo) optional copies
        s = a = self.new()
        for _ in range(node.lo):
            s2, a2 = self.build(node.node)
            self.eps[a].append(s2)
            a = a2
        if node.hi is None:
            s2, a2 = self.build(node.node)
            end = self.new()
            self.eps[a] += [s2, end]
            self.eps[a2] += [s2, end]
            a = end
        else:
            end = self.new()
            for _ in range(node.hi - node.lo):
                s2, a2 = self.build(node.node)
                self.eps[a] += [s2, end]
                a = a2
            self.eps[a].append(end)
            a = end
        return s, a

    def closure(self, states):
        stack = list(states)
        seen = set(stack)
        while stack:
            for t in self.eps[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


def _compile(ast: Node):
    nfa = _NFA()
    start, accept = nfa.build(ast)
    first = nfa.closure([start])
    index = {first: 0}
    queue = [first]
    delta = []
    while len(delta) < len(queue):
        cur = queue[len(delta)]
        row = {}
        for ch in ALPHABET:
            moved = [nfa.char[q][ch] for q in cur if ch in nfa.char[q]]
            if not moved:
                continue
            nxt = nfa.closure(moved)
            if nxt not in index:
                index[nxt] = len(queue)
                queue.append(nxt)
            row[ch] = index[nxt]
        delta.append(row)
    accepting = frozenset(i for st, i in index.items() if accept in st)
    return tuple(delta), accepting


@dataclass(frozen=True)
class Pattern:
    source: str
    ast: Node = field(compare=False)
    _delta: tuple = field(compare=False, repr=False)
    _accepting: frozenset = field(compare=False, repr=False)

    def __str__(self):
        return self.source

    @property
    def n_states(self) -> int:
        return len(self._delta)

    def ends_from(self, s: str, start: int = 0):
        """Yield every ``e`` such that ``s[start:e]`` is in the language.

        Zero-length matches are never reported.
        """
        delta, accepting = self._delta, self._accepting
        state = 0
        for e in range(start, len(s)):
            state = delta[state].get(s[e])
            if state is None:
                return
            if state in accepting:
                yield e + 1


def parse_pattern(source: str) -> Pattern:
    ast = _Parser(source).parse()
    delta, accepting = _compile(ast)
    return Pattern(source, ast, delta, accepting)


def full_match(p: Pattern, s: str) -> bool:
    delta = p._delta
    state = 0
    for ch in s:
        state = delta[state].get(ch)
        if state is None:
            return False
    return state in p._accepting
