"""Meta-action grammars.

A grammar is an ordered list of named patterns.  Order is significant: the
segmenter uses the meta-action id as its final tie-breaker, so earlier lines
win among otherwise equivalent segmentations.

File format (UTF-8)::

    # comment
    Move Forward<TAB>m{1,}

One ``NAME<TAB>PATTERN`` per line; blank lines and ``#`` lines are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateName, EmptyGrammar, PatternSyntaxError
from .pattern import Pattern, full_match, parse_pattern
from .trajectory import ALPHABET

DEFAULT_RULES = (
    ("Step Right", "rm{,3}l"),
    ("Step Left", "lm{,3}r"),
    ("Move Forward", "m{1,}"),
    ("Step Back", "(ll|rr)m+(ll|rr)"),
    ("Turn Left", "l{1}"),
    ("Turn Right", "r{1}"),
    ("Turn Around", "(lm?l)|(rm?r)"),
    ("Look Up", "u{1,}"),
    ("Look Down", "d{1,}"),
    ("Interaction", "i"),
)


@dataclass(frozen=True)
class MetaAction:
    id: int
    name: str
    pattern: Pattern


@dataclass(frozen=True)
class MetaActionGrammar:
    metas: tuple
    alphabet: str = ALPHABET

    def __len__(self):
        return len(self.metas)

    def __iter__(self):
        return iter(self.metas)

    def __getitem__(self, i) -> MetaAction:
        return self.metas[i]

    @property
    def names(self):
        return [m.name for m in self.metas]

    def id_of(self, name: str) -> int:
        for m in self.metas:
            if m.name == name:
                return m.id
        raise KeyError(name)

    def to_text(self) -> str:
        return "".join(f"{m.name}\t{m.pattern.source}\n" for m in self.metas)


def build_grammar(rules) -> MetaActionGrammar:
    """Grammar from ``(name, pattern-source)`` pairs, ids in given order."""
    metas = []
    seen = set()
    for name, source in rules:
        if name in seen:
            raise DuplicateName(f"duplicate meta-action name {name!r}")
        seen.add(name)
        pat = source if isinstance(source, Pattern) else parse_pattern(source)
        metas.append(MetaAction(len(metas), name, pat))
    if not metas:
        raise EmptyGrammar("grammar has no meta-actions")
    return MetaActionGrammar(tuple(metas))


def default_grammar() -> MetaActionGrammar:
    return build_grammar(DEFAULT_RULES)


def load_grammar(text: str) -> MetaActionGrammar:
    metas = []
    names = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line or line.startswith("#"):
            continue
        name, tab, source = line.partition("\t")
        name = name.strip()
        if not tab or not name or "\t" in source:
            raise PatternSyntaxError(line, 0, "expected NAME<TAB>PATTERN", line=lineno)
        if name in names:
            raise DuplicateName(
                f"line {lineno}: meta-action {name!r} already defined on line {names[name]}"
            )
        names[name] = lineno
        try:
            pat = parse_pattern(source)
        except PatternSyntaxError as exc:
            raise PatternSyntaxError(exc.source, exc.offset, exc.reason, line=lineno) from None
        metas.append(MetaAction(len(metas), name, pat))
    if not metas:
        raise EmptyGrammar("grammar file defines no meta-actions")
    return MetaActionGrammar(tuple(metas))


def read_grammar(path) -> MetaActionGrammar:
    with open(path, encoding="utf-8") as fh:
        return load_grammar(fh.read())


def complete(g: MetaActionGrammar) -> bool:
    """True iff every single letter is matched by some pattern.

    A complete grammar can always fall back to one meta-action per letter,
    so every string has at least one segmentation.
    """
    return all(any(full_match(m.pattern, ch) for m in g.metas) for ch in g.alphabet)
