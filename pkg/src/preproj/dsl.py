"""Text formats for presentations (.qpa), morphisms (.mor) and identity
suites (.ids).

Files are jinja2 templates rendered with the rank and its derived numbers,
then parsed as a sequence of ``;``-terminated statements and ``{ }``
blocks.  Comments run from ``#`` to the end of the line.

    presentation Aodd_prime;
    quiver dynkin A5;
    param t;
    let p = abar1*abar0*a0*a1;
    relation abar1*a1 + a2*abar2 + t*p;
    relation a0*abar0 = 0;

    morphism phi : P -> A1 { param t; a1 -> a1 + t*abar0*a0*a1; }

    identities E6 { let y = abar2*a2; identity "(2)": y^3 = 0; }
"""

from importlib import resources

import jinja2

from .freealg import DSLSyntaxError, FreeElem, parse_element
from .field import Scalar, parse_field
from .quiver import DynkinType, Quiver, QuiverError, build_dynkin_quiver

DATA = "data"


class DSLError(DSLSyntaxError):
    pass


# -- templates ----------------------------------------------------------------

def _flatten(parts):
    for p in parts:
        if isinstance(p, (list, tuple)):
            yield from _flatten(p)
        elif p:
            yield str(p)


def _up(i, j):
    """a_i * a_{i+1} * ... * a_j (empty when i > j)."""
    return [f"a{k}" for k in range(i, j + 1)]


def _down(i, j):
    """abar_i * abar_{i-1} * ... * abar_j (empty when i < j)."""
    return [f"abar{k}" for k in range(i, j - 1, -1)]


def _path(*parts):
    return "*".join(_flatten(parts))


def _alt(lo, hi, offset=0, name="t"):
    """The parenthesised sum over i in [lo, hi] of (-1)^(i+offset) * t_i."""
    out = "(0"
    for i in range(lo, hi + 1):
        out += (" + " if (i + offset) % 2 == 0 else " - ") + f"{name}{i}"
    return out + ")"


def _env():
    root = resources.files(__package__) / DATA
    env = jinja2.Environment(loader=jinja2.FileSystemLoader(str(root)),
                             undefined=jinja2.StrictUndefined,
                             keep_trailing_newline=True)
    env.globals.update(up=_up, down=_down, path=_path, alt=_alt)
    return env


def render(name, **context):
    """Render the packaged template ``name`` with ``context``."""
    return _env().get_template(name).render(**context)


def render_text(text, **context):
    env = _env()
    return env.from_string(text).render(**context)


def data_files():
    root = resources.files(__package__) / DATA
    return sorted(p.name for p in root.iterdir() if p.name.endswith((".qpa", ".mor", ".ids")))


# -- statement scanner ----------------------------------------------------------

class Stmt:
    """A statement: ``text[start:end]`` without the terminator; ``body`` holds
    the nested statements of a ``{ }`` block (None for plain statements)."""

    __slots__ = ("text", "start", "end", "body")

    def __init__(self, text, start, end, body=None):
        self.text, self.start, self.end, self.body = text, start, end, body

    @property
    def src(self):
        return self.text[self.start:self.end]

    def head(self):
        s = self.src.lstrip()
        return s.split(None, 1)[0] if s else ""

    def rest_span(self):
        """Offsets of the statement after its leading keyword."""
        s = self.start
        while s < self.end and self.text[s].isspace():
            s += 1
        while s < self.end and not self.text[s].isspace():
            s += 1
        return s, self.end

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.start
            while pos < self.end and self.text[pos].isspace():
                pos += 1
        return DSLError(msg, self.text, pos)


def _blank_comments(text):
    out = []
    in_str = False
    in_comment = False
    for ch in text:
        if in_comment:
            if ch == "\n":
                in_comment = False
                out.append(ch)
            else:
                out.append(" ")
            continue
        if ch == '"':
            in_str = not in_str
        if ch == "#" and not in_str:
            in_comment = True
            out.append(" ")
            continue
        out.append(ch)
    return "".join(out)


def scan(text):
    """Split ``text`` into a list of Stmt."""
    clean = _blank_comments(text)
    stack = [[]]
    heads = []
    start = 0
    in_str = False
    for i, ch in enumerate(clean):
        if ch == '"':
            in_str = not in_str
        if in_str:
            continue
        if ch == ";":
            if clean[start:i].strip():
                stack[-1].append(Stmt(clean, start, i))
            start = i + 1
        elif ch == "{":
            heads.append((start, i))
            stack.append([])
            start = i + 1
        elif ch == "}":
            if not heads:
                raise DSLError("unbalanced '}'", clean, i)
            if clean[start:i].strip():
                stack[-1].append(Stmt(clean, start, i))
            body = stack.pop()
            hs, he = heads.pop()
            stack[-1].append(Stmt(clean, hs, he, body))
            start = i + 1
    if heads:
        raise DSLError("unclosed '{'", clean, heads[-1][1])
    if clean[start:].strip():
        raise DSLError("missing ';'", clean, start + len(clean[start:]) - len(clean[start:].lstrip()))
    return stack[0]


# -- shared statement handlers ------------------------------------------------

def _names(stmt):
    s, e = stmt.rest_span()
    names = [x.strip() for x in stmt.text[s:e].split(",")]
    if not all(n.isidentifier() for n in names):
        raise stmt.error("expected a comma separated list of names")
    return names


def _parse_quiver_block(stmt):
    verts, arrows, bars, loops = [], [], [], []
    for st in stmt.body:
        words = st.src.replace(":", " : ").replace("->", " -> ").replace("=", " = ").split()
        kw = words[0] if words else ""
        if kw == "vertices":
            spec = " ".join(words[1:]).replace(",", " ")
            if ".." in spec:
                lo, hi = spec.split("..")
                verts.extend(range(int(lo), int(hi) + 1))
            else:
                verts.extend(int(v) for v in spec.split())
        elif kw == "arrow" and len(words) == 6 and words[2] == ":" and words[4] == "->":
            arrows.append((words[1], int(words[3]), int(words[5])))
        elif kw == "bar" and len(words) == 4 and words[2] == "=":
            bars.append((st, words[1], words[3]))
        elif kw == "loop" and len(words) in (4, 5) and words[2] == ":":
            arrows.append((words[1], int(words[3]), int(words[3])))
            if len(words) == 5:
                if words[4] != "selfbar":
                    raise st.error(f"unexpected {words[4]!r}")
                loops.append(words[1])
        else:
            raise st.error(f"bad quiver statement {st.src.strip()!r}")
    q = Quiver(verts)
    try:
        for name, s, t in arrows:
            q.add_arrow(name, s, t)
        for name in loops:
            i = q.index[name]
            q.bar[i] = i
        for st, a, b in bars:
            if a not in q.index or b not in q.index:
                raise st.error(f"bar of unknown arrow in {st.src.strip()!r}")
            q.set_bar(q.index[a], q.index[b])
        q.check()
    except QuiverError as exc:
        raise stmt.error(str(exc)) from None
    return q


class Scope:
    """Names visible to element expressions: parameters and ``let`` bindings."""

    def __init__(self, quiver, field, params=None):
        self.q, self.F = quiver, field
        self.given = dict(params or {})
        self.env = {}
        self.declared = []

    def declare(self, names):
        for n in names:
            self.declared.append(n)
            # undeclared parameters default to zero
            v = self.given.get(n, 0)
            self.env[n] = self.F(v.value if isinstance(v, Scalar) else v)

    def unknown_params(self):
        return sorted(set(self.given) - set(self.declared))

    def elem(self, stmt, start, end):
        return parse_element(stmt.text, self.q, self.F, self.env, start, end)

    def let(self, stmt):
        s, e = stmt.rest_span()
        body = stmt.text[s:e]
        if "=" not in body:
            raise stmt.error("expected 'let name = expression'")
        k = body.index("=")
        name = body[:k].strip()
        if not name.isidentifier():
            raise stmt.error(f"bad name {name!r}", s)
        self.env[name] = self.elem(stmt, s + k + 1, e)

    def equation(self, stmt, s, e):
        """``lhs = rhs`` or a bare expression, as lhs - rhs."""
        body = stmt.text[s:e]
        if "=" in body:
            k = body.index("=")
            return self.elem(stmt, s, s + k) - self.elem(stmt, s + k + 1, e)
        return self.elem(stmt, s, e)


# -- presentations --------------------------------------------------------------

def parse_presentation(text, field=None, params=None, strict=True):
    """Parse a rendered .qpa document into a Presentation.

    ``params`` binds the declared parameter names; missing ones are 0."""
    from .quotient import Presentation

    stmts = scan(text)
    name = None
    q = None
    dyn = None
    cap = "auto"
    scope = None
    rels = []
    for st in stmts:
        kw = st.head()
        s, e = st.rest_span()
        arg = st.text[s:e].strip()
        if kw == "presentation":
            name = arg
        elif kw == "field":
            # the caller's field wins; the header serves standalone files
            if field is None:
                field = parse_field(arg)
        elif kw == "quiver":
            if st.body is not None:
                q = _parse_quiver_block(st)
            else:
                parts = arg.split()
                if len(parts) != 2 or parts[0] != "dynkin":
                    raise st.error("expected 'quiver dynkin <type>' or a quiver block")
                dyn = DynkinType.parse(parts[1])
                q = build_dynkin_quiver(dyn)
            scope = Scope(q, field, params)
        elif kw == "cap":
            cap = "auto" if arg == "auto" else int(arg)
        elif kw == "strict":
            strict = arg not in ("false", "no", "0")
        elif scope is None:
            raise st.error("the quiver must be declared first")
        elif kw == "param":
            scope.declare(_names(st))
        elif kw == "let":
            scope.let(st)
        elif kw == "relation":
            r = scope.equation(st, s, e)
            if r.terms:
                rels.append(r)
        else:
            raise st.error(f"unknown statement {kw!r}")
    if q is None:
        raise DSLError("no quiver declared", text, 0)
    if field is None:
        raise DSLError("no field given", text, 0)
    extra = scope.unknown_params()
    if extra:
        raise DSLError(f"parameters {extra} are not declared", text, 0)
    meta = {"dynkin": dyn, "params": {k: scope.env[k] for k in scope.declared}}
    return Presentation(q, field, rels, cap, name=name, meta=meta, strict=strict)


# -- morphisms ------------------------------------------------------------------

def parse_morphism_blocks(text):
    """Return {name: (source label, target label, Stmt block)}."""
    out = {}
    for st in scan(text):
        if st.head() != "morphism" or st.body is None:
            raise st.error("expected 'morphism name : src -> tgt { ... }'")
        s, e = st.rest_span()
        header = st.text[s:e]
        try:
            name, rest = header.split(":", 1)
            src, tgt = rest.split("->", 1)
        except ValueError:
            raise st.error("expected 'morphism name : src -> tgt'") from None
        out[name.strip()] = (src.strip(), tgt.strip(), st)
    return out


def morphism_images(block, source_quiver, target_quiver, field, params=None):
    """Interpret a morphism block: returns (vertex_map, arrow images, declared
    parameter values).  Arrows that are not mentioned map to themselves."""
    scope = Scope(target_quiver, field, params)
    vmap = {}
    images = {}
    for st in block.body:
        kw = st.head()
        s, e = st.rest_span()
        if kw == "param":
            scope.declare(_names(st))
        elif kw == "let":
            scope.let(st)
        elif kw == "vertex":
            a, b = st.text[s:e].split("->")
            vmap[int(a)] = int(b)
        else:
            src = st.src
            if "->" not in src:
                raise st.error("expected 'arrow -> expression'")
            k = src.index("->")
            arrow = src[:k].strip()
            if arrow not in source_quiver.index:
                raise st.error(f"unknown source arrow {arrow!r}")
            images[arrow] = scope.elem(st, st.start + k + 2, st.end)
    extra = scope.unknown_params()
    if extra:
        raise DSLError(f"parameters {extra} are not declared", block.text, block.start)
    for v in source_quiver.vertices:
        vmap.setdefault(v, v)
    for a in source_quiver.arrows:
        if a.name not in images:
            images[a.name] = FreeElem.arrow(target_quiver, field, a.name)
    return vmap, images, {k: scope.env[k] for k in scope.declared}


# -- identity suites -------------------------------------------------------------

def parse_identities(text, quiver, field, params=None):
    """Return [(label, lhs - rhs, source text)] for every identity statement."""
    out = []
    for st in scan(text):
        if st.head() != "identities" or st.body is None:
            raise st.error("expected 'identities name { ... }'")
        scope = Scope(quiver, field, params)
        for sub in st.body:
            kw = sub.head()
            s, e = sub.rest_span()
            if kw == "param":
                scope.declare(_names(sub))
            elif kw == "let":
                scope.let(sub)
            elif kw == "identity":
                body = sub.text[s:e]
                q1 = body.index('"')
                q2 = body.index('"', q1 + 1)
                label = body[q1 + 1:q2]
                colon = body.index(":", q2)
                start = s + colon + 1
                out.append((label, scope.equation(sub, start, e), sub.text[start:e].strip()))
            else:
                raise sub.error(f"unknown statement {kw!r}")
    return out
