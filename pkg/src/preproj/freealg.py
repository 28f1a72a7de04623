"""The path algebra KQ.

A path is a tuple of arrow ids read left to right: in ``p*q`` the target of
``p`` is the source of ``q``.  The trivial path at vertex ``v`` is the 1-tuple
``(-1 - v,)``.  A :class:`FreeElem` is a sparse map path -> nonzero raw
scalar.
"""

import re

from .field import Scalar


class QuiverMismatch(ValueError):
    pass


class IncompatibleEndpoints(ValueError):
    pass


class UnboundName(KeyError):
    pass


class UnknownArrow(KeyError):
    pass


class DSLSyntaxError(ValueError):
    def __init__(self, msg, text="", pos=0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col, self.pos = line, col, pos
        super().__init__(f"{line}:{col}: {msg}")


# -- paths -------------------------------------------------------------------

def trivial(v):
    return (-1 - v,)


def is_trivial(p):
    return p[0] < 0


def path_len(p):
    return 0 if p[0] < 0 else len(p)


def path_source(q, p):
    return -1 - p[0] if p[0] < 0 else q.arrows[p[0]].source


def path_target(q, p):
    return -1 - p[0] if p[0] < 0 else q.arrows[p[-1]].target


def concat(q, p1, p2):
    """Concatenation, or None when the paths do not compose."""
    if path_target(q, p1) != path_source(q, p2):
        return None
    if p1[0] < 0:
        return p2
    if p2[0] < 0:
        return p1
    return p1 + p2


def path_key(p):
    """Sort key: degree first, then lexicographic in arrow ids."""
    return (path_len(p), p)


def format_path(q, p):
    if p[0] < 0:
        return f"e{-1 - p[0]}"
    return "*".join(q.arrows[a].name for a in p)


# -- elements ----------------------------------------------------------------

class FreeElem:
    """A finite linear combination of paths with coefficients in ``field``."""

    __slots__ = ("quiver", "field", "terms")

    def __init__(self, quiver, field, terms=None):
        self.quiver = quiver
        self.field = field
        t = {}
        if terms:
            for p, c in terms.items():
                c = field(c) if not isinstance(c, Scalar) else c.value
                if c != 0:
                    t[p] = c
        self.terms = t

    @classmethod
    def _raw(cls, quiver, field, terms):
        x = cls.__new__(cls)
        x.quiver, x.field, x.terms = quiver, field, terms
        return x

    # constructors
    @classmethod
    def zero(cls, quiver, field):
        return cls._raw(quiver, field, {})

    @classmethod
    def path(cls, quiver, field, p, coeff=1):
        return cls(quiver, field, {tuple(p): coeff})

    @classmethod
    def vertex(cls, quiver, field, v):
        return cls._raw(quiver, field, {trivial(v): field.one()})

    @classmethod
    def arrow(cls, quiver, field, name):
        i = quiver.arrow(name) if isinstance(name, str) else name
        return cls._raw(quiver, field, {(i,): field.one()})

    @classmethod
    def one(cls, quiver, field):
        return cls._raw(quiver, field, {trivial(v): field.one() for v in quiver.vertices})

    @classmethod
    def scalar(cls, quiver, field, c):
        c = field(c)
        if c == 0:
            return cls.zero(quiver, field)
        return cls._raw(quiver, field, {trivial(v): c for v in quiver.vertices})

    def _check(self, other):
        if not isinstance(other, FreeElem):
            raise TypeError(f"expected FreeElem, got {type(other).__name__}")
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise QuiverMismatch("elements live over different quivers")
        if other.field != self.field:
            raise QuiverMismatch(f"elements live over {self.field} and {other.field}")

    def _coerce(self, other):
        if isinstance(other, FreeElem):
            self._check(other)
            return other
        if isinstance(other, Scalar):
            other = other.value
        return FreeElem.scalar(self.quiver, self.field, other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        t = dict(self.terms)
        for p, c in other.terms.items():
            s = F.add(t.get(p, 0), c)
            if s == 0:
                t.pop(p, None)
            else:
                t[p] = s
        return FreeElem._raw(self.quiver, F, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return FreeElem._raw(self.quiver, F, {p: F.neg(c) for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        F = self.field
        c = c.value if isinstance(c, Scalar) else F(c)
        if c == 0:
            return FreeElem.zero(self.quiver, F)
        return FreeElem._raw(self.quiver, F, {p: F.mul(c, x) for p, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FreeElem):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = FreeElem.one(self.quiver, self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, FreeElem):
            return self.field == other.field and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def coeff(self, p):
        return self.terms.get(tuple(p), self.field.zero())

    def degrees(self):
        return sorted({path_len(p) for p in self.terms})

    def min_degree(self):
        return min((path_len(p) for p in self.terms), default=None)

    def endpoints(self):
        """The set of (source, target) pairs occurring in the support."""
        q = self.quiver
        return {(path_source(q, p), path_target(q, p)) for p in self.terms}

    def pair(self):
        """(source, target) if the element is homogeneous in that sense."""
        e = self.endpoints()
        return next(iter(e)) if len(e) == 1 else None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda pc: path_key(pc[0]))

    def __repr__(self):
        return f"FreeElem({format_element(self)})"

    def __str__(self):
        return format_element(self)


def multiply(a, b):
    a._check(b)
    q, F = a.quiver, a.field
    t = {}
    for p1, c1 in a.terms.items():
        tgt = path_target(q, p1)
        for p2, c2 in b.terms.items():
            if path_source(q, p2) != tgt:
                continue
            p = p2 if p1[0] < 0 else (p1 if p2[0] < 0 else p1 + p2)
            s = F.add(t.get(p, 0), F.mul(c1, c2))
            if s == 0:
                t.pop(p, None)
            else:
                t[p] = s
    return FreeElem._raw(q, F, t)


def commutator(a, b):
    return multiply(a, b) - multiply(b, a)


# -- noncommutative polynomials in named variables -----------------------------

class NCPoly:
    """A noncommutative polynomial: monomial (tuple of names) -> raw scalar."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        self.terms = {}
        for m, c in (terms or {}).items():
            c = field(c)
            if c != 0:
                self.terms[tuple(m)] = c

    @classmethod
    def var(cls, field, name):
        return cls(field, {(name,): 1})

    @classmethod
    def const(cls, field, c):
        return cls(field, {(): c})

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = F.add(t.get(m, 0), c)
            if s == 0:
                t.pop(m, None)
            else:
                t[m] = s
        out = NCPoly(F)
        out.terms = t
        return out

    __radd__ = __add__

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            return other
        return NCPoly.const(self.field, other.value if isinstance(other, Scalar) else other)

    def __neg__(self):
        out = NCPoly(self.field)
        out.terms = {m: self.field.neg(c) for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                s = F.add(t.get(m, 0), F.mul(c1, c2))
                if s == 0:
                    t.pop(m, None)
                else:
                    t[m] = s
        out = NCPoly(F)
        out.terms = t
        return out

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k):
        out = NCPoly.const(self.field, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def min_degree(self):
        return min((len(m) for m in self.terms), default=None)

    def variables(self):
        return sorted({v for m in self.terms for v in m})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0])):
            body = "*".join(m) if m else ""
            parts.append(_join_coeff(self.field, c, body))
        return _join_terms(parts)

    __repr__ = __str__


def substitute(f, assignment):
    """Evaluate ``f`` with each variable replaced by a FreeElem.

    All assigned elements must be loops at one common vertex."""
    if not assignment:
        raise UnboundName("empty assignment")
    elems = list(assignment.values())
    q, F = elems[0].quiver, elems[0].field
    verts = set()
    for x in elems:
        x._check(elems[0])
        for s, t in x.endpoints():
            if s != t:
                raise IncompatibleEndpoints(f"{x} is not a loop")
            verts.add(s)
    if len(verts) > 1:
        raise IncompatibleEndpoints(f"assigned elements live at vertices {sorted(verts)}")
    if not verts and any(not m for m in f.terms):
        raise IncompatibleEndpoints("cannot place a constant term without a base vertex")
    base = FreeElem.vertex(q, F, verts.pop()) if verts else FreeElem.zero(q, F)
    out = FreeElem.zero(q, F)
    cache = {}
    for m, c in f.terms.items():
        val = base
        for k in range(len(m)):
            pre = m[:k + 1]
            if pre in cache:
                val = cache[pre]
                continue
            if m[k] not in assignment:
                raise UnboundName(m[k])
            val = multiply(val, assignment[m[k]])
            cache[pre] = val
        out = out + val.scale(c)
    return out


# -- expression grammar --------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text, start=0, end=None):
    end = len(text) if end is None else end
    pos = start
    toks = []
    while pos < end:
        if text[pos:end].strip() == "":
            break
        m = _TOKEN.match(text, pos, end)
        if not m or m.end() == pos:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", end))
    return toks


class _Parser:
    """Recursive descent over the element grammar.

    ``ring`` supplies ``atom(name, pos)``, ``number(value)`` and ``one()``;
    values must support +, -, * and unary minus."""

    def __init__(self, text, ring, start=0, end=None):
        self.text = text
        self.toks = _tokenize(text, start, end)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise DSLSyntaxError(f"expected {want}, got {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        self.take("end")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        neg = False
        while self.peek()[0] == "op" and self.peek()[1] in ("-", "+"):
            if self.take()[1] == "-":
                neg = not neg
        v = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            v = v * self.factor()
        return -v if neg else v

    def factor(self):
        v = self.primary()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k = int(self.take("num")[1])
            out = self.ring.one()
            for _ in range(k):
                out = out * v
            v = out
        return v

    def primary(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            num = int(val)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den_tok = self.take("num")
                den = int(den_tok[1])
                if den == 0:
                    raise DSLSyntaxError("zero denominator", self.text, den_tok[2])
                return self.ring.number(num, den, pos)
            return self.ring.number(num, 1, pos)
        if kind == "name":
            self.take()
            return self.ring.atom(val, pos)
        if kind == "op" and val == "(":
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise DSLSyntaxError(f"unexpected {val or 'end of input'!r}", self.text, pos)


_TRIVIAL_NAME = re.compile(r"^e(\d+)$")


class _ElemRing:
    def __init__(self, quiver, field, env, text):
        self.q, self.F, self.env, self.text = quiver, field, env or {}, text

    def one(self):
        return FreeElem.one(self.q, self.F)

    def number(self, num, den, pos):
        from fractions import Fraction
        try:
            c = self.F(Fraction(num, den))
        except ArithmeticError as exc:
            raise DSLSyntaxError(str(exc), self.text, pos) from None
        return FreeElem.scalar(self.q, self.F, c)

    def atom(self, name, pos):
        if name in self.env:
            v = self.env[name]
            if isinstance(v, FreeElem):
                return v
            if isinstance(v, Scalar):
                v = v.value
            return FreeElem.scalar(self.q, self.F, v)
        if name in self.q.index:
            return FreeElem.arrow(self.q, self.F, name)
        m = _TRIVIAL_NAME.match(name)
        if m and int(m.group(1)) in self.q.out_arrows:
            return FreeElem.vertex(self.q, self.F, int(m.group(1)))
        err = UnknownArrow(f"{name!r} at {DSLSyntaxError('', self.text, pos).line}:"
                           f"{DSLSyntaxError('', self.text, pos).col}")
        err.pos = pos
        raise err


class _PolyRing:
    def __init__(self, field, env):
        self.F, self.env = field, env or {}

    def one(self):
        return NCPoly.const(self.F, 1)

    def number(self, num, den, pos):
        from fractions import Fraction
        return NCPoly.const(self.F, self.F(Fraction(num, den)))

    def atom(self, name, pos):
        if name in self.env:
            v = self.env[name]
            return NCPoly.const(self.F, v.value if isinstance(v, Scalar) else v)
        return NCPoly.var(self.F, name)


def parse_element(text, quiver, field, env=None, start=0, end=None):
    """Parse ``text`` into a FreeElem over ``quiver``.

    ``env`` maps extra names to FreeElems (abbreviations) or scalars
    (parameters, multiplied by the identity)."""
    return _Parser(text, _ElemRing(quiver, field, env, text), start, end).parse()


def parse_poly(text, field, env=None):
    return _Parser(text, _PolyRing(field, env)).parse()


def _join_coeff(F, c, body):
    if F.p == 0 and c < 0:
        sign, c = "-", -c
    else:
        sign = "+"
    if not body:
        return sign, str(c)
    if c == 1:
        return sign, body
    return sign, f"{c}*{body}"


def _join_terms(parts):
    out = ""
    for k, (sign, s) in enumerate(parts):
        if k == 0:
            out = s if sign == "+" else f"-{s}"
        else:
            out += f" {sign} {s}"
    return out


def format_element(x):
    if not x.terms:
        return "0"
    parts = [_join_coeff(x.field, c, format_path(x.quiver, p)) for p, c in x.sorted_terms()]
    return _join_terms(parts)
