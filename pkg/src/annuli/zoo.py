"""Parser for the fixed function-zoo grammar used in experiment configs.

Grammar (whitespace is ignored)::

    spec     := term (("+" | "-") number)?        # trailing shift: f - a
    term     := "z"
              | number                            # constant
              | number "*z"                       # linear c*z
              | number "/(R0-z)" ("^" int)?       # boundary power c/(R0-z)^p
              | "rational(" pairs ";" pairs ";" number ";" int ")"
              | "exp(" spec ")"
              | "poly(" number ("," number)* ")"  # ascending coefficients
              | "hermite(" number "," number "," number ")"
              | "wp(" number "," number ")"
              | "zpow(" number ")"
              | "shift(" spec ";" number ")"
              | ("add" | "mul" | "div") "(" spec ";" spec ")"
              | ("logderiv" | "deriv") "(" spec ")"
    pairs    := "[" (pair ("," pair)*)? "]"
    pair     := "(" number "," int ")"
    number   := real | real ("+"|"-") real ("i"|"j") | real ("i"|"j") | "i" | "j"

Examples: ``rational([(1.5,2)];[(-0.6,1)];1;0)``, ``exp(z)``,
``exp(1/(R0-z)^2)``, ``wp(1,i)``, ``exp(z)-1``.
"""

from __future__ import annotations

import re

from .annulus import Annulus
from .errors import ConfigError, DomainError
from . import functions as fm

_REAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class _Parser:
    def __init__(self, text: str, domain: Annulus):
        self.src = text
        self.text = text
        self.pos = 0
        self.domain = domain

    def error(self, msg, pos=None):
        p = self.pos if pos is None else pos
        return ConfigError(f"{msg} in function spec {self.src!r}", position=f"column {p + 1}")

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        self.ws()
        if not self.text.startswith(s, self.pos):
            raise self.error(f"expected {s!r}")
        self.pos += len(s)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def real(self) -> float:
        self.ws()
        m = _REAL.match(self.text, self.pos)
        if not m:
            raise self.error("expected a number")
        self.pos = m.end()
        return float(m.group())

    def number(self) -> complex:
        self.ws()
        if self.text[self.pos:self.pos + 1] in ("i", "j") and not self.text[self.pos:].startswith("j("):
            self.pos += 1
            return 1j
        if self.text[self.pos:self.pos + 2] in ("-i", "-j", "+i", "+j"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 2
            return sign * 1j
        x = self.real()
        if self.text[self.pos:self.pos + 1] in ("i", "j"):
            self.pos += 1
            return 1j * x
        save = self.pos
        m = _REAL.match(self.text, self.pos)
        if m and m.group()[0] in "+-" and self.text[m.end():m.end() + 1] in ("i", "j"):
            self.pos = m.end() + 1
            return complex(x, float(m.group()))
        self.pos = save
        return complex(x)

    def integer(self) -> int:
        start = self.pos
        x = self.real()
        if x != int(x):
            raise self.error("expected an integer", start)
        return int(x)

    def pairs(self):
        self.expect("[")
        out = []
        if self.accept("]"):
            return out
        while True:
            self.expect("(")
            loc = self.number()
            self.expect(",")
            mult = self.integer()
            self.expect(")")
            out.append((loc, mult))
            if self.accept("]"):
                return out
            self.expect(",")

    def spec(self):
        start = self.pos
        f = self.term()
        self.ws()
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            sign = self.text[self.pos]
            self.pos += 1
            a = self.number()
            a = a if sign == "-" else -a
            f = fm.ShiftModel(f, a, spec=self.text[start:self.pos].strip())
        return f

    def _wrap(self, start, build):
        try:
            return build()
        except DomainError as exc:
            raise self.error(str(exc), start) from exc

    def term(self):
        self.ws()
        start = self.pos
        d = self.domain
        for name in ("rational", "exp", "poly", "hermite", "wp", "zpow", "shift",
                     "add", "mul", "div", "logderiv", "deriv"):
            if self.text.startswith(name, self.pos):
                after = self.pos + len(name)
                while after < len(self.text) and self.text[after].isspace():
                    after += 1
                if after >= len(self.text) or self.text[after] != "(":
                    continue
                self.pos = after + 1
                model = getattr(self, "_" + name)(start)
                self.expect(")")
                model.spec = self.text[start:self.pos].strip()
                return model
        if self.accept("z"):
            return fm.identity(d)
        c = self.number()
        if self.accept("*z"):
            return fm.PolynomialModel([0, c], d, spec=self.text[start:self.pos].strip())
        if self.accept("/(R0-z)"):
            p = 1
            if self.accept("^"):
                p = self.integer()
            return self._wrap(start, lambda: fm.BoundaryPowerModel(c, p, d, spec=self.text[start:self.pos].strip()))
        return fm.constant(c, d)

    def _rational(self, start):
        zeros = self.pairs()
        self.expect(";")
        poles = self.pairs()
        self.expect(";")
        coeff = self.number()
        self.expect(";")
        offset = self.integer()
        return self._wrap(start, lambda: fm.RationalModel(zeros, poles, coeff, offset, self.domain))

    def _exp(self, start):
        g = self.spec()
        return self._wrap(start, lambda: fm.ExpModel(g))

    def _poly(self, start):
        cs = [self.number()]
        while self.accept(","):
            cs.append(self.number())
        return fm.PolynomialModel(cs, self.domain)

    def _hermite(self, start):
        a = self.number()
        self.expect(",")
        z0 = self.number()
        self.expect(",")
        c = self.number()
        return self._wrap(start, lambda: fm.hermite_exponent(a, z0, c, self.domain))

    def _wp(self, start):
        w1 = self.number()
        self.expect(",")
        w2 = self.number()
        return self._wrap(start, lambda: fm.WeierstrassModel(w1, w2, self.domain))

    def _zpow(self, start):
        a = self.number()
        if a.imag != 0:
            raise self.error("zpow exponent must be real", start)
        return fm.PowerModel(a.real, self.domain)

    def _shift(self, start):
        f = self.spec()
        self.expect(";")
        a = self.number()
        return fm.ShiftModel(f, a)

    def _binary(self, start, cls):
        f = self.spec()
        self.expect(";")
        g = self.spec()
        return self._wrap(start, lambda: cls(f, g))

    def _add(self, start):
        return self._binary(start, fm.SumModel)

    def _mul(self, start):
        return self._binary(start, fm.ProductModel)

    def _div(self, start):
        return self._binary(start, fm.QuotientModel)

    def _logderiv(self, start):
        return fm.LogDerivativeModel(self.spec())

    def _deriv(self, start):
        return fm.DerivativeModel(self.spec())


def parse_function(text: str, domain: Annulus) -> fm.FunctionModel:
    """Build a :class:`FunctionModel` from a zoo spec string."""
    p = _Parser(text, domain)
    model = p.spec()
    p.ws()
    if p.pos != len(p.text):
        raise p.error("unexpected trailing input")
    model.spec = text.strip()
    return model
