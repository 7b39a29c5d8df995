"""Parser for family specification strings such as ``fs(normal,0.5)``.

Grammar (whitespace allowed between tokens)::

    spec    := NAME [ "(" args ")" ]
    args    := arg { "," arg }
    arg     := NUMBER | spec | WORD

Simple families take numbers; skew families take a base spec first. A
bare name uses the family defaults, so ``normal`` is ``normal(0,1)``.
Labels produced by :attr:`Distribution.label` parse back to equal objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .distributions import (
    Azzalini,
    Contaminated,
    Distribution,
    Exponential,
    FernandezSteel,
    Laplace,
    Logistic,
    Normal,
    NormalMixture,
    Uniform,
)
from .errors import ParameterDomainError, ParseError

CONTAM_DEFAULT_BETA = 2.0

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),]))"
)

# name -> (constructor, number of numeric params, defaults)
_SIMPLE = {
    "normal": (Normal, (0.0, 1.0)),
    "laplace": (Laplace, (0.0, 1.0)),
    "logistic": (Logistic, (0.0, 1.0)),
    "uniform": (Uniform, (-1.0, 1.0)),
    "exp": (Exponential, (1.0,)),
    "mixnormal": (NormalMixture, (0.5, -1.0, 1.0, 1.0, 1.0)),
}
_SKEW = {"fs": FernandezSteel, "azzalini": Azzalini, "contam": Contaminated}
_NAMES = tuple(_SIMPLE) + tuple(_SKEW)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(text, start, "a family name, number, '(', ')' or ','")
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, expected: str, text: str = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            raise ParseError(self.text, t.pos, expected)
        self.i += 1
        return t

    def spec(self) -> Distribution:
        t = self.take("name", "a family name (" + ", ".join(_NAMES) + ")")
        name = t.text.lower()
        if name not in _NAMES:
            raise ParseError(self.text, t.pos, "a family name (" + ", ".join(_NAMES) + ")")
        args = self.args() if self.peek().text == "(" else []
        try:
            return self.build(name, args, t.pos)
        except ParameterDomainError as exc:
            raise ParseError(self.text, t.pos, f"valid parameters for {name}: {exc}") from None

    def args(self) -> list:
        self.take("punct", "'('", "(")
        out = [self.arg()]
        while self.peek().text == ",":
            self.i += 1
            out.append(self.arg())
        self.take("punct", "',' or ')'", ")")
        return out

    def arg(self):
        t = self.peek()
        if t.kind == "num":
            self.i += 1
            return (float(t.text), t.pos)
        if t.kind == "name":
            if t.text.lower() in _NAMES:
                return (self.spec(), t.pos)
            self.i += 1
            return (t.text.lower(), t.pos)
        raise ParseError(self.text, t.pos, "a number or family name")

    def numbers(self, args, count, name):
        for value, pos in args:
            if not isinstance(value, float):
                raise ParseError(self.text, pos, f"a number in {name}(...)")
        if len(args) != count:
            pos = args[-1][1] if args else self.peek().pos
            raise ParseError(self.text, pos, f"{count} numeric argument(s) for {name}")
        return [v for v, _ in args]

    def build(self, name: str, args: list, pos: int) -> Distribution:
        if name in _SIMPLE:
            cls, defaults = _SIMPLE[name]
            if not args:
                return cls(*defaults)
            return cls(*self.numbers(args, len(defaults), name))
        cls = _SKEW[name]
        if not args:
            raise ParseError(self.text, self.peek().pos, f"'(' with base family and theta for {name}")
        base, bpos = args[0]
        if not isinstance(base, Distribution):
            raise ParseError(self.text, bpos, "a base family (normal, laplace, logistic)")
        rest = args[1:]
        if name == "fs":
            weighting = "median"
            if len(rest) == 2 and isinstance(rest[1][0], str):
                weighting = rest[1][0]
                rest = rest[:1]
            (theta,) = self.numbers(rest, 1, name)
            return FernandezSteel(base, theta, weighting)
        if name == "azzalini":
            (theta,) = self.numbers(rest, 1, name)
            return Azzalini(base, theta)
        if len(rest) == 1:
            (theta,) = self.numbers(rest, 1, name)
            return Contaminated(base, theta, CONTAM_DEFAULT_BETA)
        theta, beta = self.numbers(rest, 2, name)
        return Contaminated(base, theta, beta)


def parse_family(text: str) -> Distribution:
    """Parse a family spec string.

    Raises
    ------
    ParseError
        With the character position and the tokens expected there.
    """
    p = _Parser(text)
    spec = p.spec()
    p.take("end", "end of input")
    return spec


Spec = Union[str, Distribution]


def as_family(spec: Spec) -> Distribution:
    return spec if isinstance(spec, Distribution) else parse_family(spec)
