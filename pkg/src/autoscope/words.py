"""Free words and the presentation text format.

The text format follows the classic relator notation:

* ``*`` is juxtaposition, ``x^n`` an integer power (braces around the
  exponent are accepted and stripped, so ``a^{-7}`` and ``a^-7`` agree),
* ``x^y`` with a word exponent is conjugation ``y^-1*x*y``,
* ``(x,y)`` is the commutator ``x^-1*y^-1*x*y``,
* a chain ``w1=w2=...=1`` contributes each ``wi`` as a relator; chains
  are separated by ``;`` or newlines,
* a chunk with no ``=`` must be a comma-separated generator list and
  declares generators (used for free generators that appear in no
  relator).

``^`` binds tighter than ``*`` and associates left-to-right.  All other
whitespace is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

# a free-word factor: (generator name, non-zero exponent)
Factor = tuple[str, int]


class PresentationError(ValueError):
    """Raised for malformed presentation text; carries the offending position."""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


def free_reduce(factors: Iterable[Factor]) -> tuple[Factor, ...]:
    """Merge adjacent powers of the same generator and drop zero exponents."""
    out: list[Factor] = []
    for gen, exp in factors:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the free group on named generators."""

    factors: tuple[Factor, ...] = ()

    @staticmethod
    def of(factors: Iterable[Factor]) -> "Word":
        return Word(free_reduce(factors))

    def __mul__(self, other: "Word") -> "Word":
        return Word(free_reduce(self.factors + other.factors))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.factors)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word()
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self, by: "Word") -> "Word":
        return by.inverse() * self * by

    def is_identity(self) -> bool:
        return not self.factors

    def generators(self) -> tuple[str, ...]:
        seen: list[str] = []
        for g, _ in self.factors:
            if g not in seen:
                seen.append(g)
        return tuple(seen)

    def syllable_length(self) -> int:
        return sum(abs(e) for _, e in self.factors)

    def __str__(self) -> str:
        return format_word(self)


def invert(word: Word) -> Word:
    return word.inverse()


def commutator(x: Word, y: Word) -> Word:
    return x.inverse() * y.inverse() * x * y


def format_word(word: Word) -> str:
    """Render a word in the same notation the parser accepts."""
    if not word.factors:
        return "1"
    parts = []
    for gen, exp in word.factors:
        if exp == 1:
            parts.append(gen)
        elif exp > 1:
            parts.append(f"{gen}^{exp}")
        else:
            parts.append(f"({gen}^{exp})")
    return "*".join(parts)


@dataclass(frozen=True)
class Presentation:
    """Declared generators plus freely reduced relators.

    ``relator_texts`` keeps the spelling each relator had in the source
    text (braces stripped); ``render`` reuses it so that a presentation
    read from the catalog prints the way it was written.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    relator_texts: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        declared = set(self.generators)
        for rel in self.relators:
            for gen in rel.generators():
                if gen not in declared:
                    raise PresentationError(f"undeclared generator {gen!r} in relator")
        if self.relator_texts and len(self.relator_texts) != len(self.relators):
            raise PresentationError("relator_texts length mismatch")

    def __str__(self) -> str:
        return render(self)


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(r"[A-Za-z]|\d+|[\^*(),={};\-]|\n")


def _tokenize(text: str):
    tokens = []  # (kind, value, position)
    pos = 0
    for m in _TOKEN_RE.finditer(text):
        gap = text[pos : m.start()]
        if gap.strip():
            raise PresentationError(f"unexpected character {gap.strip()[0]!r}", pos)
        pos = m.end()
        t = m.group()
        if t == "\n" or t == ";":
            tokens.append(("SEP", t, m.start()))
        elif t.isalpha():
            tokens.append(("GEN", t, m.start()))
        elif t.isdigit():
            tokens.append(("INT", int(t), m.start()))
        else:
            tokens.append((t, t, m.start()))
    if text[pos:].strip():
        raise PresentationError(f"unexpected character {text[pos:].strip()[0]!r}", pos)
    return tokens


class _Parser:
    def __init__(self, tokens, text_pos_hint=""):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def next(self):
        tok = self.peek()
        if tok[0] is None:
            raise PresentationError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise PresentationError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def done(self) -> bool:
        return self.i >= len(self.tokens)

    # word := power (('*')? power)*   -- '*' is required between powers
    def parse_word(self) -> Word:
        out = self.parse_power()
        while self.peek()[0] == "*":
            self.next()
            out = out * self.parse_power()
        return out

    def parse_power(self) -> Word:
        base = self.parse_atom()
        while self.peek()[0] == "^":
            self.next()
            base = self._apply_exponent(base)
        return base

    def _apply_exponent(self, base: Word) -> Word:
        braced = False
        if self.peek()[0] == "{":
            braced = True
            self.next()
        kind, value, pos = self.peek()
        if kind == "-":
            self.next()
            tok = self.expect("INT")
            result = base ** (-tok[1])
        elif kind == "INT":
            self.next()
            result = base ** value
        elif kind == "GEN":
            self.next()
            result = base.conjugate(Word(((value, 1),)))
        elif kind == "(":
            # parenthesized exponent: either a signed integer or a word
            try:
                result = base.conjugate(self._parse_paren_exponent())
            except _SignedExponent as exc:
                result = base ** exc.value
        else:
            raise PresentationError("malformed exponent", pos)
        if braced:
            self.expect("}")
        return result

    def _parse_paren_exponent(self) -> Word:
        # only reached for word exponents like x^(a*b); x^(-7) is folded here too
        self.expect("(")
        if self.peek()[0] == "-":
            self.next()
            tok = self.expect("INT")
            self.expect(")")
            # caller conjugates; signal power via a shim word is wrong, so handle here:
            raise _SignedExponent(-tok[1])
        word = self.parse_word()
        self.expect(")")
        return word

    def parse_atom(self) -> Word:
        kind, value, pos = self.next()
        if kind == "GEN":
            return Word(((value, 1),))
        if kind == "INT":
            if value == 1:
                return Word()
            raise PresentationError(f"unexpected integer {value}", pos)
        if kind == "(":
            first = self.parse_word()
            kind2, _, pos2 = self.next()
            if kind2 == ")":
                return first
            if kind2 == ",":
                second = self.parse_word()
                self.expect(")")
                return commutator(first, second)
            raise PresentationError("expected ')' or ','", pos2)
        raise PresentationError(f"unexpected token {value!r}", pos)


class _SignedExponent(Exception):
    def __init__(self, value: int):
        self.value = value


def parse_word(text: str) -> Word:
    """Parse a single word (no '=' or ';')."""
    parser = _Parser(_tokenize(text))
    try:
        word = parser.parse_word()
    except _SignedExponent as exc:  # x^(-n)
        raise PresentationError(f"stray signed exponent {exc.value}") from exc
    if not parser.done():
        tok = parser.peek()
        raise PresentationError(f"trailing input {tok[1]!r}", tok[2])
    return word


def _parse_word_tokens(tokens) -> Word:
    parser = _Parser(tokens)
    try:
        word = parser.parse_word()
    except _SignedExponent:
        raise PresentationError("signed integer is not a word")
    if not parser.done():
        tok = parser.peek()
        raise PresentationError(f"trailing input {tok[1]!r}", tok[2])
    return word


_DECL_RE = re.compile(r"^\s*[A-Za-z](\s*,\s*[A-Za-z])*\s*$")


def _normalize_chunk(chunk: str) -> str:
    """Strip whitespace and exponent braces from a source chunk."""
    return re.sub(r"[{}\s]", "", chunk)


def parse_presentation(text: str, generators: Optional[Iterable[str]] = None) -> Presentation:
    """Parse relator chains into a :class:`Presentation`.

    ``generators``, if given, acts as an explicit declaration; otherwise
    generators come from declaration chunks or, failing that, from first
    appearance in the relators.
    """
    declared: list[str] = list(generators) if generators is not None else []
    explicit = generators is not None
    relators: list[Word] = []
    texts: list[str] = []

    for raw_chunk in re.split(r"[;\n]", text):
        if not raw_chunk.strip():
            continue
        if "=" not in raw_chunk:
            if _DECL_RE.match(raw_chunk):
                for g in re.findall(r"[A-Za-z]", raw_chunk):
                    if g not in declared:
                        declared.append(g)
                    explicit = True
                continue
            raise PresentationError(
                f"chunk {raw_chunk.strip()!r} has no '=' and is not a generator list"
            )
        parts = [p for p in raw_chunk.split("=")]
        if any(not p.strip() for p in parts):
            raise PresentationError(f"empty side of '=' in {raw_chunk.strip()!r}")
        parsed = []
        for part in parts:
            norm = _normalize_chunk(part)
            if norm == "1":
                parsed.append((Word(), "1"))
            else:
                parsed.append((_parse_word_tokens(_tokenize(norm)), norm))
        # equate every part to the last one
        last_word = parsed[-1][0]
        for word, src in parsed[:-1]:
            rel = word * last_word.inverse()
            if rel.is_identity():
                continue
            relators.append(rel)
            # chains equated to a non-trivial word store the folded relator
            texts.append(src if last_word.is_identity() else format_word(rel))

    for rel in relators:
        for g in rel.generators():
            if g not in declared:
                if explicit:
                    raise PresentationError(f"undeclared generator {g!r}")
                declared.append(g)

    return Presentation(tuple(declared), tuple(relators), tuple(texts))


def render(pres: Presentation) -> str:
    """Inverse of :func:`parse_presentation` up to free reduction."""
    used = set()
    for rel in pres.relators:
        used.update(rel.generators())
    chunks = []
    if not pres.relators or any(g not in used for g in pres.generators):
        chunks.append(",".join(pres.generators))
    if pres.relators:
        if pres.relator_texts:
            body = "=".join(pres.relator_texts)
        else:
            body = "=".join(format_word(r) for r in pres.relators)
        chunks.append(body + "=1")
    return "; ".join(chunks)
