"""Frame and algebra file parsers, plus the frame serializer.

Frame files::

    dim 3            # ambient dimension
    X1 = d1
    X2 = d2 + x1*d3

Grammar (tokens; whitespace insignificant, ``#`` comments to end of line)::

    file     := "dim" INT NEWLINE line+
    line     := IDENT "=" expr
    expr     := term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := RATIONAL | VAR | DVAR | factor "^" INT | "(" expr ")"
    VAR      := "x" INT      DVAR := "d" INT      RATIONAL := INT ("/" INT)?

Field names must be X1..Xk in order.  Every parse failure carries the 1-based
line and column of the offending token.

Algebra files::

    layers 2 1
    bracket e1 e2 = e3

Right-hand sides are signed sums of optional rational multiples of basis
labels (or the literal 0); pairs need i < j and may not repeat.  The parsed
table is validated before being returned.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidAlgebra, ParseError
from .flags import StratifiedAlgebra, validate_algebra
from .polyfields import Frame, Poly, PolyField

__all__ = ["frame_to_text", "parse_algebra", "parse_frame"]


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}({self.text!r})"


_SYMBOLS = "=+-*^/()"


def _tokenize(text: str) -> list[list[_Token]]:
    """Token rows, one per logical line; comments and blank lines dropped."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            col = i + 1
            if ch in _SYMBOLS:
                toks.append(_Token(ch, ch, lineno, col))
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(line) and line[j].isdigit():
                    j += 1
                toks.append(_Token("INT", line[i:j], lineno, col))
                i = j
            elif ch.isalpha():
                j = i
                while j < len(line) and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                toks.append(_Token("WORD", line[i:j], lineno, col))
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", lineno, col)
        if toks:
            rows.append(toks)
    return rows


class _LineParser:
    def __init__(self, tokens: list[_Token], line: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1]
            raise ParseError("unexpected end of line", self.line, last.col + len(last.text))
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected trailing token {tok.text!r}", tok.line, tok.col)


class _Value:
    """Scalar polynomial or vector field, tagged for type checking."""

    __slots__ = ("scalar", "vector")

    def __init__(self, scalar=None, vector=None):
        self.scalar = scalar
        self.vector = vector

    @property
    def is_vector(self):
        return self.vector is not None


def _word_index(tok: _Token, prefix: str, n: int, what: str) -> int:
    body = tok.text[len(prefix):]
    if not body.isdigit():
        raise ParseError(f"malformed {what} {tok.text!r}", tok.line, tok.col)
    idx = int(body)
    if not 1 <= idx <= n:
        raise ParseError(
            f"index out of range at token {tok.text!r} (limit {n})", tok.line, tok.col
        )
    return idx


class _ExprParser(_LineParser):
    def __init__(self, tokens, line, n):
        super().__init__(tokens, line)
        self.n = n

    def parse_expr(self) -> _Value:
        val = self.parse_term()
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in "+-":
                return val
            self.next()
            rhs = self.parse_term()
            if val.is_vector != rhs.is_vector:
                raise ParseError(
                    "cannot add a scalar and a vector term", tok.line, tok.col
                )
            if val.is_vector:
                combined = val.vector + rhs.vector if tok.kind == "+" else val.vector - rhs.vector
                val = _Value(vector=combined)
            else:
                combined = val.scalar + rhs.scalar if tok.kind == "+" else val.scalar - rhs.scalar
                val = _Value(scalar=combined)

    def parse_term(self) -> _Value:
        val = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "*":
                return val
            self.next()
            rhs = self.parse_factor()
            if val.is_vector and rhs.is_vector:
                raise ParseError("cannot multiply two vector expressions", tok.line, tok.col)
            if val.is_vector:
                val = _Value(vector=PolyField(tuple(c * rhs.scalar for c in val.vector.comps)))
            elif rhs.is_vector:
                val = _Value(vector=PolyField(tuple(c * val.scalar for c in rhs.vector.comps)))
            else:
                val = _Value(scalar=val.scalar * rhs.scalar)

    def parse_factor(self) -> _Value:
        tok = self.next()
        if tok.kind == "INT":
            val = _Value(scalar=Poly.const(self.n, self._rational(tok)))
        elif tok.kind == "WORD" and tok.text.startswith("x"):
            idx = _word_index(tok, "x", self.n, "variable")
            val = _Value(scalar=Poly.variable(self.n, idx))
        elif tok.kind == "WORD" and tok.text.startswith("d"):
            idx = _word_index(tok, "d", self.n, "direction")
            val = _Value(vector=PolyField.basis(self.n, idx))
        elif tok.kind == "(":
            val = self.parse_expr()
            closing = self.next()
            if closing.kind != ")":
                raise ParseError(
                    f"expected ')', found {closing.text!r}", closing.line, closing.col
                )
        else:
            raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)
        while self.peek() is not None and self.peek().kind == "^":
            caret = self.next()
            exp_tok = self.expect("INT")
            if val.is_vector:
                raise ParseError("cannot exponentiate a vector", caret.line, caret.col)
            val = _Value(scalar=val.scalar ** int(exp_tok.text))
        return val

    def _rational(self, int_tok: _Token) -> Fraction:
        num = int(int_tok.text)
        tok = self.peek()
        if tok is not None and tok.kind == "/":
            self.next()
            den_tok = self.expect("INT")
            den = int(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.col)
            return Fraction(num, den)
        return Fraction(num)


def parse_frame(text: str) -> Frame:
    """Parse a frame file into a Frame of polynomial fields."""
    rows = _tokenize(text)
    if not rows:
        raise ParseError("empty input", 1, 1)
    header = _LineParser(rows[0], rows[0][0].line)
    word = header.expect("WORD")
    if word.text != "dim":
        raise ParseError(f"expected 'dim', found {word.text!r}", word.line, word.col)
    dim_tok = header.expect("INT")
    n = int(dim_tok.text)
    if n < 1:
        raise ParseError("dimension must be positive", dim_tok.line, dim_tok.col)
    header.done()
    fields = []
    for row in rows[1:]:
        parser = _ExprParser(row, row[0].line, n)
        name = parser.expect("WORD")
        expected = f"X{len(fields) + 1}"
        if name.text != expected:
            raise ParseError(
                f"expected field name {expected!r}, found {name.text!r}",
                name.line,
                name.col,
            )
        parser.expect("=")
        value = parser.parse_expr()
        parser.done()
        if not value.is_vector:
            raise ParseError(
                "field expression must involve a direction dj", name.line, name.col
            )
        fields.append(value.vector)
    if not fields:
        raise ParseError("frame needs at least one field line", rows[0][0].line, 1)
    return Frame(n, tuple(fields))


def parse_algebra(text: str) -> StratifiedAlgebra:
    """Parse an algebra file; validation failures raise InvalidAlgebra."""
    rows = _tokenize(text)
    if not rows:
        raise ParseError("empty input", 1, 1)
    header = _LineParser(rows[0], rows[0][0].line)
    word = header.expect("WORD")
    if word.text != "layers":
        raise ParseError(f"expected 'layers', found {word.text!r}", word.line, word.col)
    dims = []
    while header.peek() is not None:
        tok = header.expect("INT")
        d = int(tok.text)
        if d < 1:
            raise ParseError("layer dimensions must be positive", tok.line, tok.col)
        dims.append(d)
    if not dims:
        tok = rows[0][-1]
        raise ParseError("expected at least one layer dimension", tok.line, tok.col + len(tok.text))
    total = sum(dims)
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for row in rows[1:]:
        parser = _LineParser(row, row[0].line)
        word = parser.expect("WORD")
        if word.text != "bracket":
            raise ParseError(
                f"expected 'bracket', found {word.text!r}", word.line, word.col
            )
        ei = parser.expect("WORD")
        i = _e_index(ei, total)
        ej = parser.expect("WORD")
        j = _e_index(ej, total)
        if not i < j:
            raise ParseError(
                f"bracket pair needs i < j, got e{i} e{j}", ei.line, ei.col
            )
        if (i, j) in table:
            raise ParseError(f"duplicate bracket line for e{i} e{j}", ei.line, ei.col)
        parser.expect("=")
        table[(i, j)] = _parse_rhs(parser, total)
        parser.done()
    alg = StratifiedAlgebra(tuple(dims), table)
    report = validate_algebra(alg)
    if not report.valid:
        raise InvalidAlgebra(report)
    return alg


def _e_index(tok: _Token, total: int) -> int:
    if tok.kind != "WORD" or not tok.text.startswith("e"):
        raise ParseError(f"expected basis label, found {tok.text!r}", tok.line, tok.col)
    return _word_index(tok, "e", total, "basis label")


def _parse_rhs(parser: _LineParser, total: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    tok = parser.peek()
    if tok is not None and tok.kind == "INT" and tok.text == "0" and parser.pos + 1 == len(parser.tokens):
        parser.next()
        return out
    sign = Fraction(1)
    while True:
        coeff = sign
        tok = parser.peek()
        if tok is None:
            last = parser.tokens[-1]
            raise ParseError("expected a term", last.line, last.col + len(last.text))
        if tok.kind == "INT":
            num_tok = parser.next()
            num = int(num_tok.text)
            den = 1
            if parser.peek() is not None and parser.peek().kind == "/":
                parser.next()
                den_tok = parser.expect("INT")
                den = int(den_tok.text)
                if den == 0:
                    raise ParseError("zero denominator", den_tok.line, den_tok.col)
            coeff *= Fraction(num, den)
            star = parser.next()
            if star.kind != "*":
                raise ParseError(
                    f"expected '*', found {star.text!r}", star.line, star.col
                )
        label = parser.next()
        m = _e_index(label, total)
        out[m] = out.get(m, Fraction(0)) + coeff
        tok = parser.peek()
        if tok is None:
            break
        if tok.kind not in "+-":
            raise ParseError(f"expected '+' or '-', found {tok.text!r}", tok.line, tok.col)
        parser.next()
        sign = Fraction(1) if tok.kind == "+" else Fraction(-1)
    return {m: c for m, c in out.items() if c != 0}


def _scalar_term_text(c: Fraction, exps: tuple[int, ...], direction: int) -> str:
    parts = []
    if abs(c) != 1:
        parts.append(str(abs(c)))
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    parts.append(f"d{direction}")
    return "*".join(parts)


def frame_to_text(frame: Frame) -> str:
    """Serialize a frame in the file grammar; output re-parses exactly."""
    lines = [f"dim {frame.n}"]
    for idx, fld in enumerate(frame.fields, start=1):
        terms = []
        for j, poly in enumerate(fld.comps, start=1):
            for exps, c in sorted(poly.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
                terms.append((j, exps, c))
        terms.sort(key=lambda t: (t[0], sum(t[1]), t[1]))
        if not terms:
            lines.append(f"X{idx} = 0*d1")
            continue
        rendered = []
        for pos, (j, exps, c) in enumerate(terms):
            body = _scalar_term_text(c, exps, j)
            if pos == 0:
                # no unary minus in the grammar: fold a leading negative
                # coefficient into a parenthesized scalar factor
                if c > 0:
                    rendered.append(body)
                else:
                    rendered.append(f"(0 - {str(abs(c))})*" + _scalar_term_text(Fraction(1), exps, j))
            else:
                rendered.append((" + " if c > 0 else " - ") + body)
        lines.append(f"X{idx} = " + "".join(rendered))
    return "\n".join(lines) + "\n"
