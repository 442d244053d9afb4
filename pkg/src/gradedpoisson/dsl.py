"""Parser for problem files.

A problem file is a sequence of blocks::

    # the standard symplectic structure on R^4
    manifold { n: 4; alias: q1 = x1, p1 = x2 }
    poisson { xi1*xi2 + xi3*xi4 }
    submanifold C { gens: x3, x4; tangent: xi1, xi2; points: (0,0,0,0), (1,2,0,0) }
    distribution E { base: C; gens: xi3, xi4 }
    problem dirac { C: C; E: E; B: x1, x2; bound: 3 }
    options { seed: 7 }

Expressions use ``+ - * ^``, rational literals ``p/q``, parentheses and the
variables ``x1..xn`` (even) and ``xi1..xin`` (odd), plus declared aliases.
``^`` takes a non-negative integer exponent and is rejected on odd factors.
Entries inside a block are separated by ``;``; list values by ``,``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Chart, SuperFn
from .geometry import DEFAULT_BOUND, DistributionSpec, SubmanifoldSpec
from .reduction import ReductionProblem

__all__ = ["ParseError", "SemanticError", "ProblemFile", "parse", "parse_expr", "tokenize"]


class InputError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ParseError(InputError):
    """Syntax error, with the tokens that would have been accepted."""

    def __init__(self, message: str, line: int, col: int, expected=()):
        self.expected = tuple(expected)
        if expected:
            message = f"{message}; expected {' or '.join(self.expected)}"
        super().__init__(message, line, col)


class SemanticError(InputError):
    """Well-formed input that names something undefined or has the wrong degree."""


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER, IDENT, SYMBOL, EOF
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<NUMBER>\d+)"
                       r"|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)|(?P<SYMBOL>[{}:;,()+\-*^/=])")


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("NUMBER", "IDENT", "SYMBOL"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


@dataclass
class ProblemFile:
    chart: Chart
    aliases: dict = field(default_factory=dict)
    pi: SuperFn | None = None
    submanifolds: dict = field(default_factory=dict)
    distributions: dict = field(default_factory=dict)
    problem: dict = field(default_factory=dict)  # role -> name / list / int
    problem_name: str = "problem"
    options: dict = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return self.problem.get("bound", self.options.get("bound", DEFAULT_BOUND))

    def require_pi(self) -> SuperFn:
        if self.pi is None:
            raise SemanticError("no poisson block", 1, 1)
        return self.pi

    def _role(self, role: str, table: dict):
        if not self.problem:
            raise SemanticError("no problem block", 1, 1)
        if role not in self.problem:
            raise SemanticError(f"problem block does not bind {role}", 1, 1)
        return table[self.problem[role]]

    def to_problem(self, bound: int | None = None) -> ReductionProblem:
        pi = self.require_pi()
        C = self._role("C", self.submanifolds)
        A = self._role("A", self.submanifolds) if "A" in self.problem else C
        E = self._role("E", self.distributions) if "E" in self.problem else DistributionSpec((), C, "E")
        D = self._role("D", self.distributions) if "D" in self.problem else DistributionSpec((), A, "D")
        return ReductionProblem(pi, C, E, D, A, tuple(self.problem.get("B", ())),
                                self.bound if bound is None else bound, self.problem_name)

    def echo(self) -> list[str]:
        """Canonical description of everything parsed, for report headers."""
        lines = [f"manifold: n = {self.chart.n}"]
        for name, target in sorted(self.aliases.items()):
            lines.append(f"alias {name} = {target}")
        if self.pi is not None:
            lines.append(f"poisson: {self.pi}")
        for name, C in self.submanifolds.items():
            tangent = ", ".join(map(str, C.tangent)) if C.tangent is not None else "(not supplied)"
            lines.append(f"submanifold {name}: gens {', '.join(map(str, C.gens)) or '(none)'}; "
                         f"tangent {tangent}; points "
                         + ", ".join("(" + ", ".join(map(str, p)) + ")" for p in C.sample_points))
        for name, E in self.distributions.items():
            lines.append(f"distribution {name} over {E.base.name}: span {{{', '.join(map(str, E.gens))}}}")
        if self.problem:
            parts = []
            for role in ("C", "E", "D", "A"):
                if role in self.problem:
                    parts.append(f"{role} = {self.problem[role]}")
            if "B" in self.problem:
                parts.append("B = " + (", ".join(map(str, self.problem["B"])) or "(none)"))
            parts.append(f"bound = {self.bound}")
            lines.append(f"problem {self.problem_name}: " + "; ".join(parts))
        for key, value in sorted(self.options.items()):
            lines.append(f"option {key} = {value}")
        return lines


class _Parser:
    def __init__(self, text: str, chart: Chart | None = None, aliases: dict | None = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.chart = chart
        self.aliases: dict = dict(aliases or {})

    # -- token helpers -------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("SYMBOL", "IDENT") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ParseError(f"unexpected {self.tok.describe()}", self.tok.line, self.tok.col, [repr(text)])
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise ParseError(f"unexpected {self.tok.describe()}", self.tok.line, self.tok.col, [what])
        return self.advance()

    def integer(self) -> int:
        return int(self.expect_kind("NUMBER", "an integer").text)

    # -- expressions -----------------------------------------------------------
    def expression(self) -> SuperFn:
        start = self.tok
        if self.chart is None:
            raise SemanticError("expression before the manifold block", start.line, start.col)
        value = self.chart.zero()
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.advance().text == "-" else 1
        value = value + self.term().scale(sign)
        while self.at("+") or self.at("-"):
            sign = -1 if self.advance().text == "-" else 1
            value = value + self.term().scale(sign)
        return value

    def term(self) -> SuperFn:
        value = self.factor()
        while self.at("*"):
            self.advance()
            value = value * self.factor()
        return value

    def factor(self) -> SuperFn:
        start = self.tok
        base = self.atom()
        if self.at("^"):
            self.advance()
            k = self.integer()
            if base.degrees() - {0}:
                raise SemanticError("exponent on an odd factor", start.line, start.col)
            base = base ** k
        return base

    def atom(self) -> SuperFn:
        t = self.tok
        if t.kind == "NUMBER":
            return self.chart.const(self.rational())
        if t.kind == "IDENT":
            self.advance()
            return self.variable(t)
        if self.at("("):
            self.advance()
            value = self.expression()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {t.describe()}", t.line, t.col, ["a number", "a variable", "'('"])

    def rational(self) -> Fraction:
        num = int(self.expect_kind("NUMBER", "a number").text)
        if self.at("/"):
            self.advance()
            t = self.expect_kind("NUMBER", "a denominator")
            if int(t.text) == 0:
                raise SemanticError("zero denominator", t.line, t.col)
            return Fraction(num, int(t.text))
        return Fraction(num)

    def signed_rational(self) -> Fraction:
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.advance().text == "-" else 1
        return sign * self.rational()

    def variable(self, t: Token) -> SuperFn:
        name = self.aliases.get(t.text, t.text)
        m = re.fullmatch(r"(xi|x)(\d+)", name)
        if m is None:
            raise SemanticError(f"undefined name {t.text!r}", t.line, t.col)
        k = int(m.group(2))
        if not 1 <= k <= self.chart.n:
            raise SemanticError(f"variable {t.text} outside the chart (n = {self.chart.n})", t.line, t.col)
        return self.chart.xi(k) if m.group(1) == "xi" else self.chart.x(k)

    def typed_expression(self, degree: int, what: str) -> SuperFn:
        t = self.tok
        value = self.expression()
        if not value.is_homogeneous(degree):
            got = ", ".join(str(d) for d in sorted(value.degrees()))
            raise SemanticError(f"{what}: expected degree {degree}, got degree {got}", t.line, t.col)
        return value

    def expression_list(self, degree: int, what: str) -> list[SuperFn]:
        out = []
        if self.at(";") or self.at("}"):
            return out
        out.append(self.typed_expression(degree, what))
        while self.at(","):
            self.advance()
            out.append(self.typed_expression(degree, what))
        return [f for f in out if f]

    def point(self) -> tuple:
        t = self.expect("(")
        coords = [self.signed_rational()]
        while self.at(","):
            self.advance()
            coords.append(self.signed_rational())
        self.expect(")")
        if len(coords) != self.chart.n:
            raise SemanticError(f"point has {len(coords)} coordinates, chart needs {self.chart.n}", t.line, t.col)
        return tuple(coords)

    def point_list(self) -> list[tuple]:
        out = [self.point()]
        while self.at(","):
            self.advance()
            out.append(self.point())
        return out

    # -- blocks ------------------------------------------------------------------
    def entries(self, handlers: dict):
        """Parse ``key: value; ...`` until ``}`` dispatching on the key."""
        self.expect("{")
        seen = set()
        while not self.at("}"):
            key_tok = self.expect_kind("IDENT", "an entry name")
            if key_tok.text not in handlers:
                raise ParseError(f"unknown entry {key_tok.text!r}", key_tok.line, key_tok.col,
                                 [repr(k) for k in handlers])
            if key_tok.text in seen:
                raise SemanticError(f"duplicate entry {key_tok.text!r}", key_tok.line, key_tok.col)
            seen.add(key_tok.text)
            self.expect(":")
            handlers[key_tok.text](key_tok)
            if self.at(";"):
                self.advance()
            elif not self.at("}"):
                raise ParseError(f"unexpected {self.tok.describe()}", self.tok.line, self.tok.col, ["';'", "'}'"])
        self.expect("}")

    def parse_file(self) -> ProblemFile:
        pf = None
        while self.tok.kind != "EOF":
            t = self.expect_kind("IDENT", "a block keyword")
            if t.text == "manifold":
                if pf is not None:
                    raise SemanticError("second manifold block", t.line, t.col)
                pf = self.manifold_block(t)
                continue
            if pf is None:
                if t.text in ("poisson", "submanifold", "distribution", "problem", "options"):
                    raise SemanticError(f"{t.text} block before the manifold block", t.line, t.col)
                raise ParseError(f"unknown block {t.text!r}", t.line, t.col, ["'manifold'"])
            if t.text == "poisson":
                if pf.pi is not None:
                    raise SemanticError("second poisson block", t.line, t.col)
                self.expect("{")
                pf.pi = self.typed_expression(2, "poisson bivector")
                self.expect("}")
            elif t.text == "submanifold":
                self.submanifold_block(pf)
            elif t.text == "distribution":
                self.distribution_block(pf)
            elif t.text == "problem":
                self.problem_block(pf, t)
            elif t.text == "options":
                self.options_block(pf)
            else:
                raise ParseError(f"unknown block {t.text!r}", t.line, t.col,
                                 ["'poisson'", "'submanifold'", "'distribution'", "'problem'", "'options'"])
        if pf is None:
            raise SemanticError("missing manifold block", self.tok.line, self.tok.col)
        return pf

    def manifold_block(self, start: Token) -> ProblemFile:
        data: dict = {"aliases": {}}

        def n_entry(t):
            n = self.integer()
            if n < 1:
                raise SemanticError("n must be positive", t.line, t.col)
            data["n"] = n

        def alias_entry(t):
            while True:
                name = self.expect_kind("IDENT", "an alias name")
                self.expect("=")
                target = self.expect_kind("IDENT", "a variable")
                if not re.fullmatch(r"(xi|x)\d+", target.text):
                    raise SemanticError(f"alias target {target.text!r} is not a coordinate", target.line, target.col)
                if re.fullmatch(r"(xi|x)\d+", name.text) or name.text in data["aliases"]:
                    raise SemanticError(f"alias {name.text!r} clashes with an existing name", name.line, name.col)
                data["aliases"][name.text] = target.text
                if not self.at(","):
                    break
                self.advance()

        self.entries({"n": n_entry, "alias": alias_entry})
        if "n" not in data:
            raise SemanticError("manifold block needs n", start.line, start.col)
        self.chart = Chart(data["n"])
        for name, target in data["aliases"].items():
            k = int(re.sub(r"\D", "", target))
            if k > self.chart.n:
                raise SemanticError(f"alias {name} points outside the chart", start.line, start.col)
        self.aliases = data["aliases"]
        return ProblemFile(self.chart, dict(self.aliases))

    def submanifold_block(self, pf: ProblemFile):
        name = self.expect_kind("IDENT", "a submanifold name")
        data: dict = {}
        self.entries({
            "gens": lambda t: data.__setitem__("gens", self.expression_list(0, "submanifold generator")),
            "tangent": lambda t: data.__setitem__("tangent", self.expression_list(1, "tangent generator")),
            "points": lambda t: data.__setitem__("points", self.point_list()),
        })
        if name.text in pf.submanifolds:
            raise SemanticError(f"submanifold {name.text!r} defined twice", name.line, name.col)
        if data.get("gens") and not data.get("points"):
            raise SemanticError(f"submanifold {name.text} needs sample points", name.line, name.col)
        try:
            pf.submanifolds[name.text] = SubmanifoldSpec(
                self.chart, data.get("gens", ()), data.get("tangent"), data.get("points", ()), name.text)
        except ValueError as exc:
            raise SemanticError(str(exc), name.line, name.col) from None

    def distribution_block(self, pf: ProblemFile):
        name = self.expect_kind("IDENT", "a distribution name")
        data: dict = {}

        def base_entry(t):
            ref = self.expect_kind("IDENT", "a submanifold name")
            if ref.text not in pf.submanifolds:
                raise SemanticError(f"undefined submanifold {ref.text!r}", ref.line, ref.col)
            data["base"] = pf.submanifolds[ref.text]

        self.entries({"base": base_entry,
                      "gens": lambda t: data.__setitem__("gens", self.expression_list(1, "distribution generator"))})
        if "base" not in data:
            raise SemanticError(f"distribution {name.text} needs a base", name.line, name.col)
        if name.text in pf.distributions:
            raise SemanticError(f"distribution {name.text!r} defined twice", name.line, name.col)
        pf.distributions[name.text] = DistributionSpec(data.get("gens", ()), data["base"], name.text)

    def problem_block(self, pf: ProblemFile, start: Token):
        if pf.problem:
            raise SemanticError("second problem block", start.line, start.col)
        if self.tok.kind == "IDENT":
            pf.problem_name = self.advance().text
        data: dict = {}

        def ref(table, what, role):
            def handler(t):
                r = self.expect_kind("IDENT", f"a {what} name")
                if r.text not in table:
                    raise SemanticError(f"undefined {what} {r.text!r}", r.line, r.col)
                data[role] = r.text
            return handler

        def bound_entry(t):
            data["bound"] = self.integer()

        self.entries({
            "C": ref(pf.submanifolds, "submanifold", "C"),
            "A": ref(pf.submanifolds, "submanifold", "A"),
            "E": ref(pf.distributions, "distribution", "E"),
            "D": ref(pf.distributions, "distribution", "D"),
            "B": lambda t: data.__setitem__("B", self.expression_list(0, "B generator")),
            "bound": bound_entry,
        })
        if "C" not in data:
            raise SemanticError("problem block needs C", start.line, start.col)
        pf.problem = data

    def options_block(self, pf: ProblemFile):
        def int_entry(key):
            def handler(t):
                pf.options[key] = self.integer()
            return handler

        self.entries({"bound": int_entry("bound"), "seed": int_entry("seed"), "trials": int_entry("trials")})


def parse(text: str) -> ProblemFile:
    """Parse a problem file; raises :class:`ParseError` or :class:`SemanticError`."""
    return _Parser(text).parse_file()


def parse_expr(text: str, chart: Chart, aliases: dict | None = None) -> SuperFn:
    """Parse one expression in a given chart."""
    p = _Parser(text, chart, aliases)
    value = p.expression()
    if p.tok.kind != "EOF":
        raise ParseError(f"unexpected {p.tok.describe()}", p.tok.line, p.tok.col, ["an operator", "end of input"])
    return value
