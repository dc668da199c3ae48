"""Parser and evaluator for bra-ket state expressions.

Grammar (whitespace is insignificant)::

    expr    := ['+' | '-'] term (('+' | '-') term)*
    term    := factor (TENSOR factor)*
    factor  := [scalar] primary ('/' atom ('*' atom)*)*
    primary := KET | '(' expr ')'
    scalar  := ['-'] atom (('*' | '/') atom)*
    atom    := NUMBER ['^' exponent] | 'sqrt' '(' frac ')' | '√' NUMBER | 'i'
    exponent:= '(' frac ')' | '{' frac '}' | NUMBER
    frac    := ['-'] NUMBER ['/' NUMBER]

``KET`` is ``|bits>`` or ``|bits⟩``; ``TENSOR`` is ``(x)``, ``⊗`` or a bare
``x``.  Numbers are integers or decimals.  Exponents must be multiples of
one half so every coefficient stays of the exact form ``(p/q) sqrt(r) i^k``
until the amplitudes are folded to floating point.

Example::

    >>> ket_state("(|01>+|10>)/2^(1/2) (x) |0>").amps.nonzero()
    (array([2, 4]),)
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ZeroVector
from .qcore import PureState
from .qcore.state import MAX_QUBITS

MAX_DEPTH = 100
MAX_EXPONENT = 64


class KetSyntaxError(ValueError):
    """Malformed expression; ``offset`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        hint = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{hint}")


class MixedArity(KetSyntaxError):
    """Kets of different lengths were added together."""


# ---------------------------------------------------------------- exact scalars


def _split_square(n: int) -> tuple[int, int]:
    """``n = a^2 * b`` with ``b`` free of small square factors."""
    a, b, p = 1, n, 2
    while p * p <= b and p < 10_000:
        while b % (p * p) == 0:
            b //= p * p
            a *= p
        p += 1
    return a, b


@dataclass(frozen=True)
class Coef:
    """Exact ``rational * sqrt(radicand) * i**ipow``."""

    rational: Fraction
    radicand: int = 1
    ipow: int = 0

    @classmethod
    def make(cls, rational: Fraction, radicand: Fraction = Fraction(1), ipow: int = 0) -> "Coef":
        radicand = Fraction(radicand)
        # sqrt(p/q) = sqrt(p*q)/q
        outside, inside = _split_square(radicand.numerator * radicand.denominator)
        rational = Fraction(rational) * outside / radicand.denominator
        return cls(rational, inside, ipow % 4)

    def __mul__(self, other: "Coef") -> "Coef":
        return Coef.make(self.rational * other.rational, Fraction(self.radicand * other.radicand), self.ipow + other.ipow)

    def inverse(self) -> "Coef":
        if self.rational == 0:
            raise ZeroDivisionError
        return Coef.make(1 / (self.rational * self.radicand), Fraction(self.radicand), -self.ipow)

    def value(self) -> complex:
        return complex(float(self.rational) * np.sqrt(self.radicand)) * (1j**self.ipow)


ONE = Coef(Fraction(1))
MINUS_ONE = Coef(Fraction(-1))


def _collect(terms: list) -> list:
    groups: dict = defaultdict(Fraction)
    for c in terms:
        groups[(c.radicand, c.ipow)] += c.rational
    return [Coef(r, rad, ip) for (rad, ip), r in groups.items() if r != 0]


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Pow:
    base: Num
    exponent: Fraction
    bracket: str = "("  # "(", "{" or "" for a bare integer exponent


@dataclass(frozen=True)
class Sqrt:
    arg: Fraction
    symbol: bool = False  # written with the radical sign


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Quot:
    left: object
    right: object


@dataclass(frozen=True)
class NegScalar:
    arg: object


@dataclass(frozen=True)
class Ket:
    bits: str


@dataclass(frozen=True)
class Scale:
    scalar: object
    expr: object
    divide: bool = False  # ``expr / scalar`` rather than ``scalar expr``


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


@dataclass(frozen=True)
class Diff:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    expr: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


@dataclass(frozen=True)
class Paren:
    expr: object


# ---------------------------------------------------------------- lexer


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int  # character index


def _tokenize(text: str) -> list[Token]:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "|":
            j = i + 1
            while j < n and text[j] in "01":
                j += 1
            if j == i + 1:
                raise KetSyntaxError("empty or non-binary ket", _byte(text, j), {"0", "1"})
            if j >= n or text[j] not in ">⟩":
                raise KetSyntaxError("unclosed ket", _byte(text, j), {">", "⟩"})
            out.append(Token("KET", text[i + 1 : j], i))
            i = j + 1
            continue
        if ch == "(":
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            if j < n and text[j] == "x":
                k = j + 1
                while k < n and text[k].isspace():
                    k += 1
                if k < n and text[k] == ")":
                    out.append(Token("TENSOR", "(x)", i))
                    i = k + 1
                    continue
            out.append(Token("(", ch, i))
            i += 1
            continue
        if ch in "⊗x":
            out.append(Token("TENSOR", ch, i))
            i += 1
            continue
        if ch in ")+-/*^{}":
            out.append(Token(ch, ch, i))
            i += 1
            continue
        if ch == "√":
            out.append(Token("SQRT", ch, i))
            i += 1
            continue
        if text.startswith("sqrt", i):
            out.append(Token("SQRT", "sqrt", i))
            i += 4
            continue
        if ch == "i":
            out.append(Token("I", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            num = text[i:j]
            try:
                Fraction(num)
            except ValueError:
                raise KetSyntaxError(f"malformed number {num!r}", _byte(text, i), {"NUMBER"}) from None
            out.append(Token("NUMBER", num, i))
            i = j
            continue
        raise KetSyntaxError(f"unexpected character {ch!r}", _byte(text, i), {"|", "(", "NUMBER", "i", "sqrt"})
    out.append(Token("EOF", "", n))
    return out


def _byte(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def error(self, message, expected, cls=KetSyntaxError):
        raise cls(message, _byte(self.text, self.tok.pos), expected)

    def take(self, kind, expected=None):
        if self.tok.kind != kind:
            self.error(f"unexpected {self.tok.text or 'end of input'!r}", expected or {kind})
        t = self.tok
        self.k += 1
        return t

    def parse(self):
        node, _ = self.expr()
        if self.tok.kind != "EOF":
            self.error(f"unexpected {self.tok.text!r}", {"+", "-", "(x)", "EOF"})
        return node

    def expr(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.error("expression nested too deeply", set())
        if self.tok.kind in ("+", "-"):
            neg = self.take(self.tok.kind).kind == "-"
            node, arity = self.term()
            if neg:
                node = Neg(node)
        else:
            node, arity = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.tok
            self.k += 1
            right, r_arity = self.term()
            if r_arity != arity:
                raise MixedArity(f"adding {arity}-qubit and {r_arity}-qubit terms", _byte(self.text, op.pos))
            node = Sum(node, right) if op.kind == "+" else Diff(node, right)
        self.depth -= 1
        return node, arity

    def term(self):
        node, arity = self.factor()
        while self.tok.kind == "TENSOR":
            self.k += 1
            right, r_arity = self.factor()
            node, arity = Tensor(node, right), arity + r_arity
            if arity > MAX_QUBITS:
                self.error(f"more than {MAX_QUBITS} qubits", set())
        return node, arity

    def factor(self):
        scalar = None
        if self.tok.kind in ("NUMBER", "SQRT", "I", "-"):
            scalar = self.scalar()
        node, arity = self.primary()
        if scalar is not None:
            node = Scale(scalar, node)
        while self.tok.kind == "/":
            self.k += 1
            div = self.atom()
            while self.tok.kind == "*":
                self.k += 1
                div = Mul(div, self.atom())
            node = Scale(div, node, divide=True)
        return node, arity

    def primary(self):
        if self.tok.kind == "KET":
            bits = self.take("KET").text
            if len(bits) > MAX_QUBITS:
                self.error(f"more than {MAX_QUBITS} qubits", set())
            return Ket(bits), len(bits)
        if self.tok.kind == "(":
            self.k += 1
            inner, arity = self.expr()
            self.take(")", {")", "+", "-", "(x)"})
            return Paren(inner), arity
        self.error(f"unexpected {self.tok.text or 'end of input'!r}", {"|", "("})

    def scalar(self):
        if self.tok.kind == "-":
            self.k += 1
            return NegScalar(self.scalar())
        node = self.atom()
        while self.tok.kind in ("*", "/"):
            op = self.tok.kind
            self.k += 1
            right = self.atom()
            node = Mul(node, right) if op == "*" else Quot(node, right)
        return node

    def atom(self):
        t = self.tok
        if t.kind == "NUMBER":
            self.k += 1
            base = Num(t.text)
            if self.tok.kind == "^":
                self.k += 1
                if self.tok.kind in ("(", "{"):
                    bracket = self.take(self.tok.kind).kind
                    exp = self.frac()
                    self.take(")" if bracket == "(" else "}")
                else:
                    bracket, exp = "", Fraction(self.number())
                if (2 * exp).denominator != 1 or abs(exp) > MAX_EXPONENT:
                    self.error("exponent must be a multiple of 1/2 and at most 64", {"k/2"})
                return Pow(base, exp, bracket)
            return base
        if t.kind == "SQRT":
            self.k += 1
            if t.text == "√":
                return Sqrt(Fraction(self.number()), symbol=True)
            self.take("(")
            arg = self.frac()
            self.take(")")
            if arg < 0:
                self.error("square root of a negative number", {"NUMBER"})
            return Sqrt(arg)
        if t.kind == "I":
            self.k += 1
            return Imag()
        self.error(f"unexpected {t.text or 'end of input'!r}", {"NUMBER", "sqrt", "i"})

    def number(self) -> str:
        return self.take("NUMBER").text

    def frac(self) -> Fraction:
        sign = -1 if self.tok.kind == "-" and self.take("-") else 1
        num = Fraction(self.number())
        if self.tok.kind == "/":
            self.k += 1
            den = Fraction(self.number())
            if den == 0:
                self.error("division by zero", {"NUMBER"})
            num /= den
        return sign * num


def parse(text: str):
    """Parse ``text`` into an expression tree; raises :class:`KetSyntaxError`."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise KetSyntaxError("input is not valid UTF-8", exc.start) from None
    return _Parser(text).parse()


# ---------------------------------------------------------------- evaluation


def scalar_value(node) -> Coef:
    if isinstance(node, Num):
        return Coef.make(Fraction(node.text))
    if isinstance(node, Pow):
        base, exp = Fraction(node.base.text), node.exponent
        if base == 0 and exp < 0:
            raise ZeroDivisionError
        if exp.denominator == 1:
            return Coef.make(base**exp.numerator)
        # half-integer exponent: base^(m + 1/2) = base^m * sqrt(base)
        m = int(exp - Fraction(1, 2))
        root = Coef.make(Fraction(1), abs(base), 1 if base < 0 else 0)
        return Coef.make(base**m) * root
    if isinstance(node, Sqrt):
        return Coef.make(Fraction(1), node.arg)
    if isinstance(node, Imag):
        return Coef(Fraction(1), 1, 1)
    if isinstance(node, Mul):
        return scalar_value(node.left) * scalar_value(node.right)
    if isinstance(node, Quot):
        return scalar_value(node.left) * scalar_value(node.right).inverse()
    if isinstance(node, NegScalar):
        return MINUS_ONE * scalar_value(node.arg)
    raise TypeError(f"not a scalar node: {node!r}")


def exact_terms(node) -> dict:
    """``{bitstring: [Coef, ...]}`` with like terms already combined."""
    if isinstance(node, Ket):
        return {node.bits: [ONE]}
    if isinstance(node, Paren):
        return exact_terms(node.expr)
    if isinstance(node, Neg):
        return {b: [MINUS_ONE * c for c in cs] for b, cs in exact_terms(node.expr).items()}
    if isinstance(node, Scale):
        s = scalar_value(node.scalar)
        if node.divide:
            s = s.inverse()
        return {b: _collect([s * c for c in cs]) for b, cs in exact_terms(node.expr).items()}
    if isinstance(node, (Sum, Diff)):
        out = defaultdict(list)
        for b, cs in exact_terms(node.left).items():
            out[b].extend(cs)
        sign = MINUS_ONE if isinstance(node, Diff) else ONE
        for b, cs in exact_terms(node.right).items():
            out[b].extend(sign * c for c in cs)
        return {b: _collect(cs) for b, cs in out.items()}
    if isinstance(node, Tensor):
        left, right = exact_terms(node.left), exact_terms(node.right)
        return {
            bl + br: _collect([x * y for x in cl for y in cr])
            for bl, cl in left.items()
            for br, cr in right.items()
        }
    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class KetValue:
    state: PureState
    prenorm: float


def evaluate(expr, normalize: bool = True) -> KetValue:
    """Fold the exact coefficients into a state vector.

    With ``normalize`` the state is rescaled to unit norm; ``prenorm`` always
    records the norm of the expression as written.
    """
    try:
        terms = exact_terms(expr)
    except ZeroDivisionError:
        raise ZeroVector("division by zero in a coefficient") from None
    n = len(next(iter(terms)))
    if any(len(b) != n for b in terms):
        raise MixedArity("kets of different lengths", 0)
    amps = np.zeros(2**n, dtype=complex)
    for bits, cs in terms.items():
        amps[int(bits, 2)] = sum((c.value() for c in cs), 0j)
    prenorm = float(np.linalg.norm(amps))
    if normalize:
        if prenorm == 0:
            raise ZeroVector("expression evaluates to the zero vector")
        return KetValue(PureState(amps / prenorm), prenorm)
    if abs(prenorm - 1) <= 1e-10:
        return KetValue(PureState(amps), prenorm)
    return KetValue(PureState.raw(amps), prenorm)


def ket_state(text: str, normalize: bool = True) -> PureState:
    return evaluate(parse(text), normalize).state


# ---------------------------------------------------------------- printing


def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _scalar_text(node) -> str:
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Pow):
        if node.bracket == "":
            return f"{node.base.text}^{_frac_text(node.exponent)}"
        close = ")" if node.bracket == "(" else "}"
        return f"{node.base.text}^{node.bracket}{_frac_text(node.exponent)}{close}"
    if isinstance(node, Sqrt):
        return f"√{_frac_text(node.arg)}" if node.symbol else f"sqrt({_frac_text(node.arg)})"
    if isinstance(node, Imag):
        return "i"
    if isinstance(node, Mul):
        return f"{_scalar_text(node.left)}*{_scalar_text(node.right)}"
    if isinstance(node, Quot):
        return f"{_scalar_text(node.left)}/{_scalar_text(node.right)}"
    if isinstance(node, NegScalar):
        return f"-{_scalar_text(node.arg)}"
    raise TypeError(node)


def pretty(node, unicode: bool = False) -> str:
    """Render an expression tree as text that parses back to the same tree."""
    close = "⟩" if unicode else ">"
    tensor = " ⊗ " if unicode else " (x) "

    def go(n):
        if isinstance(n, Ket):
            return f"|{n.bits}{close}"
        if isinstance(n, Paren):
            return f"({go(n.expr)})"
        if isinstance(n, Neg):
            return f"-{go(n.expr)}"
        if isinstance(n, Scale):
            if n.divide:
                return f"{go(n.expr)}/{_scalar_text(n.scalar)}"
            return f"{_scalar_text(n.scalar)}{go(n.expr)}"
        if isinstance(n, Sum):
            return f"{go(n.left)}+{go(n.right)}"
        if isinstance(n, Diff):
            return f"{go(n.left)}-{go(n.right)}"
        if isinstance(n, Tensor):
            return f"{go(n.left)}{tensor}{go(n.right)}"
        raise TypeError(n)

    return go(node)
