"""Match-interval tables: which meta-actions fully match which substrings.

An entry ``(meta_id, start, end)`` means ``letters[start:end]`` is, in its
entirety, a word of that meta-action's pattern.  This is the uniform version
of the finditer scan with its Move Forward special case: every sub-interval
that matches is recorded, including ones strictly inside a maximal run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import MetaActionGrammar
from .pattern import full_match
from .trajectory import ActionString


@dataclass(frozen=True)
class MatchIntervalTable:
    entries: frozenset
    length: int

    def __contains__(self, triple):
        return triple in self.entries

    def __len__(self):
        return len(self.entries)

    def sorted_entries(self):
        """Entries ordered by (start, end, meta_id)."""
        return sorted(self.entries, key=lambda t: (t[1], t[2], t[0]))

    def by_end(self):
        """``ends[e]`` lists ``(start, meta_id)`` for entries ending at ``e``, sorted."""
        ends = [[] for _ in range(self.length + 1)]
        for m, s, e in self.entries:
            ends[e].append((s, m))
        for bucket in ends:
            bucket.sort()
        return ends

    def lines(self, grammar: MetaActionGrammar):
        return [f"{grammar[m].name}\t{s}\t{e}" for m, s, e in self.sorted_entries()]


def build_table(g: MetaActionGrammar, a: str) -> MatchIntervalTable:
    """One forward DFA scan per (pattern, start) collects every matching end."""
    a = ActionString(a)
    entries = set()
    for meta in g.metas:
        p = meta.pattern
        for s in range(len(a)):
            for e in p.ends_from(a, s):
                entries.add((meta.id, s, e))
    return MatchIntervalTable(frozenset(entries), len(a))


def build_table_bruteforce(g: MetaActionGrammar, a: str) -> MatchIntervalTable:
    """Reference builder: test every (pattern, substring) pair independently."""
    a = ActionString(a)
    n = len(a)
    entries = frozenset(
        (meta.id, s, e)
        for meta in g.metas
        for s in range(n)
        for e in range(s + 1, n + 1)
        if full_match(meta.pattern, a[s:e])
    )
    return MatchIntervalTable(entries, n)
