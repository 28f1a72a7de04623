"""Finite-dimensional quotients KQ/I of path algebras.

The engine enumerates the right regular module of KQ/(I + J^N): it grows a
prefix-closed set of words, imposes every translate ``s*r`` of a relation by
a live word ``s``, and eliminates the pivot of each imposed vector.  A killed
word ``p`` with expression ``x`` forces ``p*a = x*a`` for its children, which
is pushed back as a new vector (a coincidence), so the imposed span is the
two-sided ideal restricted to the words created.

Pivots are chosen lowest degree first, then lexicographically largest.  With
this order normal forms never lower the degree, so the basis degree grading
refines the radical filtration even for inhomogeneous (deformed) relations.
"""

import hashlib
import heapq

from .freealg import (FreeElem, QuiverMismatch, format_element, path_len,
                      path_source, path_target, trivial)


class NotAdmissible(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


AUTO = "auto"


def default_cap(dynkin):
    if dynkin is None:
        return 8
    n = dynkin.rank
    return {"A": 2 * (n + 1), "D": 4 * n - 4, "L": 4 * n + 2,
            "E": {6: 24, 7: 36, 8: 60}.get(n, 60)}[dynkin.family]


class Presentation:
    """A quiver, a field and relation generators.

    ``cap`` is ``"auto"`` or a fixed truncation degree N (paths of length >= N
    are set to zero; the result is certified only if length N-1 dies too).
    With ``strict`` unset, relations may have degree <= 1 components; this is
    used for quotients by socles, whose generators can be arrows."""

    def __init__(self, quiver, field, relations, cap=AUTO, name="", meta=None, strict=True):
        self.quiver = quiver
        self.field = field
        self.relations = [r for r in relations if not r.is_zero()]
        self.cap = cap
        self.name = name
        self.meta = dict(meta or {})
        self.strict = strict
        for r in self.relations:
            if r.field != field:
                raise QuiverMismatch(f"relation over {r.field}, presentation over {field}")
            if r.quiver is not quiver and r.quiver != quiver:
                raise QuiverMismatch("relation over a different quiver")
            if r.pair() is None:
                raise NotAdmissible(f"relation {r} mixes endpoint pairs {sorted(r.endpoints())}")
            if strict and r.min_degree() < 2:
                raise NotAdmissible(f"relation {r} has a component of degree {r.min_degree()}")

    def with_cap(self, cap):
        return Presentation(self.quiver, self.field, self.relations, cap, self.name,
                            self.meta, self.strict)

    def with_relations(self, extra, name=None, strict=None):
        return Presentation(self.quiver, self.field, self.relations + list(extra), self.cap,
                            name or self.name, self.meta,
                            self.strict if strict is None else strict)

    def text(self):
        """The presentation as a .qpa document (parseable by dsl)."""
        q = self.quiver
        lines = [f"presentation {self.name or q.name or 'A'};", f"field {self.field};",
                 "quiver {", "  vertices " + ", ".join(map(str, q.vertices)) + ";"]
        for a in q.arrows:
            lines.append(f"  arrow {a.name}: {a.source} -> {a.target};")
        for a in q.arrows:
            b = q.bar[a.id]
            if b is not None and b >= a.id:
                lines.append(f"  bar {a.name} = {q.arrows[b].name};")
        lines.append("}")
        if self.cap != AUTO:
            lines.append(f"cap {self.cap};")
        for r in self.relations:
            lines.append(f"relation {format_element(r)};")
        return "\n".join(lines) + "\n"

    def digest(self):
        return hashlib.sha256(self.text().encode()).hexdigest()[:16]

    def __repr__(self):
        return f"Presentation({self.name or self.quiver.name}, {self.field}, {len(self.relations)} relations)"


class _Enumerator:
    """Keys of a working vector are either a word id (an explicit word) or a
    pair ``(word id, suffix)`` standing for that word times a path that has
    not been multiplied out yet.  Suffixes are expanded only when they could
    reach the degree where the pivot is chosen, which keeps long relation
    terms from spawning chains of words far above the socle."""

    def __init__(self, pres, cap, max_words=None):
        self.max_words = max_words
        self.q = q = pres.quiver
        self.F = pres.field
        self.cap = cap
        self.na = q.num_arrows
        self.words = []
        self.wsrc = []
        self.wtgt = []
        self.wlen = []
        self.table = {}
        self.expr = {}
        self.heap = []
        self.by_degree = {}
        self.rels = {v: [] for v in q.vertices}
        for r in pres.relations:
            terms = sorted(r.terms.items(), key=lambda pc: (path_len(pc[0]), pc[0]))
            self.rels[path_source(q, next(iter(r.terms)))].append(terms)
        self.vertex_word = {v: self._new(trivial(v), v, v, 0) for v in q.vertices}
        # a relation with a constant term breaks the degree argument in run()
        self.front = -1
        self.deferred = []
        self._tick = 0
        self.graded_stop = not any(p[0] < 0 for r in pres.relations for p in r.terms)

    def _new(self, word, s, t, n):
        i = len(self.words)
        if self.max_words and i >= self.max_words:
            raise CapExceeded(f"more than {self.max_words} words below cap {self.cap}; "
                              "the presentation is probably not finite-dimensional")
        self.words.append(word)
        self.wsrc.append(s)
        self.wtgt.append(t)
        self.wlen.append(n)
        self.by_degree.setdefault(n, []).append(i)
        heapq.heappush(self.heap, (n, i))
        return i

    def _bound(self, k):
        if k.__class__ is int:
            return self.wlen[k]
        return self.wlen[k[0]] + len(k[1])

    def _axpy(self, out, c, vec):
        p = self.F.p
        for j, d in vec.items():
            s = out.get(j, 0) + c * d
            if p:
                s %= p
            if s:
                out[j] = s
            else:
                out.pop(j, None)

    def _append(self, out, c, vec, suffix):
        """out += c * vec * suffix (lazily)."""
        p = self.F.p
        cap = self.cap
        ls = len(suffix)
        for k, d in vec.items():
            if k.__class__ is int:
                if self.wlen[k] + ls >= cap:
                    continue
                key = (k, suffix)
            else:
                if self.wlen[k[0]] + len(k[1]) + ls >= cap:
                    continue
                key = (k[0], k[1] + suffix)
            s = out.get(key, 0) + c * d
            if p:
                s %= p
            if s:
                out[key] = s
            else:
                out.pop(key, None)

    def resolved(self, i):
        e = self.expr[i]
        if any((k if k.__class__ is int else k[0]) in self.expr for k in e):
            e = self.reduce(e)
            self.expr[i] = e
        return e

    def reduce(self, vec):
        expr = self.expr
        if not any((k if k.__class__ is int else k[0]) in expr for k in vec):
            return vec
        out = {}
        p = self.F.p
        for k, c in vec.items():
            if k.__class__ is int:
                if k in expr:
                    self._axpy(out, c, self.resolved(k))
                    continue
            elif k[0] in expr:
                self._append(out, c, self.resolved(k[0]), k[1])
                continue
            s = out.get(k, 0) + c
            if p:
                s %= p
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def entry(self, i, a):
        key = i * self.na + a
        t = self.table.get(key)
        if t is None:
            n = self.wlen[i] + 1
            if n >= self.cap:
                t = {}
            else:
                w = self.words[i]
                word = (a,) if w[0] < 0 else w + (a,)
                t = {self._new(word, self.wsrc[i], self.q.arrows[a].target, n): self.F.one()}
            self.table[key] = t
        return t

    def _step(self, vec, keys):
        """Multiply out the first pending arrow of each key in ``keys``."""
        out = dict(vec)
        todo = [(k, out.pop(k)) for k in keys]
        for k, c in todo:
            w, suf = k
            t = self.entry(w, suf[0])
            rest = suf[1:]
            if rest:
                self._append(out, c, t, rest)
            else:
                self._axpy(out, c, t)
        return self.reduce(out)

    def expand(self, vec, upto=None):
        """Expand pending suffixes until every key of bound <= upto (all keys
        when upto is None) is an explicit word."""
        while True:
            lazy = [k for k in vec if k.__class__ is not int
                    and (upto is None or self._bound(k) <= upto)]
            if not lazy:
                return vec
            vec = self._step(vec, lazy)

    def _leading(self, v):
        """Expand v until its lowest-degree part is explicit; return (v, pivot).
        A pivot of -1 means v lies wholly above the front and should wait."""
        wlen = self.wlen
        while v:
            d = None
            lo = None
            for k in v:
                if k.__class__ is int:
                    b = wlen[k]
                    if d is None or b < d:
                        d = b
                else:
                    b = wlen[k[0]] + len(k[1])
                if lo is None or b < lo:
                    lo = b
            if self.graded_stop and lo > self.front:
                return v, -1
            if d is None or lo < d or any(k.__class__ is not int and wlen[k[0]] + len(k[1]) == d for k in v):
                top = lo if d is None else d
                v = self._step(v, [k for k in v if k.__class__ is not int
                                   and wlen[k[0]] + len(k[1]) <= top])
                continue
            piv = max((k for k in v if k.__class__ is int and wlen[k] == d),
                      key=lambda k: self.words[k])
            return v, piv
        return v, None

    def _solve_self(self, piv, e):
        """Rewrite piv = e when e mentions piv*suffix, by iterated substitution."""
        selfs = {k[1]: c for k, c in e.items() if k.__class__ is not int and k[0] == piv}
        if not selfs:
            return e
        base = {k: c for k, c in e.items() if not (k.__class__ is not int and k[0] == piv)}
        out = dict(base)
        frontier = dict(selfs)
        F = self.F
        while frontier:
            nxt = {}
            for suf, c in frontier.items():
                if self.wlen[piv] + len(suf) >= self.cap:
                    continue
                self._append(out, c, base, suf)
                for suf2, c2 in selfs.items():
                    s2 = suf2 + suf
                    nxt[s2] = F.add(nxt.get(s2, 0), F.mul(c, c2))
            frontier = {s: c for s, c in nxt.items() if c != 0}
        return out

    def impose(self, vec):
        F = self.F
        pending = [vec]
        while pending:
            v = self.reduce(pending.pop())
            if not v:
                continue
            lo = min(self._bound(k) for k in v)
            if lo > self.front and self.graded_stop:
                # nothing to learn below the front yet; revisit when it gets there
                self._tick += 1
                heapq.heappush(self.deferred, (lo, self._tick, v))
                continue
            v, piv = self._leading(v)
            if piv is None:
                continue
            if piv < 0:
                self._tick += 1
                heapq.heappush(self.deferred, (min(self._bound(k) for k in v), self._tick, v))
                continue
            c = F.neg(F.inv(v[piv]))
            e = {j: F.mul(c, d) for j, d in v.items() if j != piv}
            e = self._solve_self(piv, e)
            self.expr[piv] = e
            base = piv * self.na
            for a in self.q.out_arrows[self.wtgt[piv]]:
                t = self.table.pop(base + a, None)
                if t is not None:
                    diff = dict(t)
                    self._append(diff, F.neg(F.one()), e, (a,))
                    pending.append(diff)

    def translate(self, i, terms):
        out = {}
        for p, c in terms:
            if p[0] < 0:
                self._axpy(out, c, {i: 1})
            elif self.wlen[i] + len(p) < self.cap:
                self._axpy(out, c, {(i, p): 1})
        return out

    def _advance(self, n):
        self.front = n
        while self.deferred and self.deferred[0][0] <= n:
            self.impose(heapq.heappop(self.deferred)[2])

    def run(self):
        while self.heap or self.deferred:
            if not self.heap:
                self._advance(self.deferred[0][0])
                continue
            n, i = self.heap[0]
            if n > self.front:
                # Every vector imposed from now on has degree > n, so the live
                # degree-n words are final.  If there are none, J^n = J^(n+1)
                # modulo the ideal, hence J^n vanishes in the truncation.
                self._advance(n)
                if self.heap[0][0] != n:
                    continue
                if self.graded_stop and not any(j not in self.expr for j in self.by_degree.get(n, ())):
                    for m, ids in self.by_degree.items():
                        if m >= n:
                            for j in ids:
                                self.expr.setdefault(j, {})
                    self.heap.clear()
                    self.deferred.clear()
                    self.cap = n
                    break
            heapq.heappop(self.heap)
            if i in self.expr:
                continue
            for a in self.q.out_arrows[self.wtgt[i]]:
                self.entry(i, a)
            for terms in self.rels[self.wtgt[i]]:
                self.impose(self.translate(i, terms))
                if i in self.expr:
                    break
        return self

    def explicit(self, vec):
        return self.expand(self.reduce(vec))


class QuotientAlgebra:
    """A finite-dimensional bound quiver algebra with a monomial basis.

    ``basis[k]`` is a path; ``ract[k][a]`` is the normal form of
    ``basis[k]*a`` as a sparse dict basis index -> raw scalar."""

    def __init__(self, presentation, basis, ract, cap_used):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self.field = presentation.field
        self.basis = basis
        self.index = {p: k for k, p in enumerate(basis)}
        self.ract = ract
        self.cap_used = cap_used
        q = self.quiver
        self.src = [path_source(q, p) for p in basis]
        self.tgt = [path_target(q, p) for p in basis]
        self.deg = [path_len(p) for p in basis]
        self.children = [dict() for _ in basis]
        for k, p in enumerate(basis):
            if p[0] >= 0:
                parent = p[:-1] if len(p) > 1 else trivial(q.arrows[p[0]].source)
                self.children[self.index[parent]][p[-1]] = k
        self._prod_cache = {}

    @property
    def dimension(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def vertex_index(self, v):
        return self.index[trivial(v)]

    def unit(self, k):
        return {k: self.field.one()}

    # -- linear helpers on sparse coordinate dicts
    def axpy(self, out, c, vec):
        F = self.field
        for j, d in vec.items():
            s = F.add(out.get(j, 0), F.mul(c, d))
            if s == 0:
                out.pop(j, None)
            else:
                out[j] = s
        return out

    def add(self, u, v):
        return self.axpy(dict(u), self.field.one(), v)

    def sub(self, u, v):
        return self.axpy(dict(u), self.field.neg(self.field.one()), v)

    def scale(self, c, u):
        F = self.field
        if c == 0:
            return {}
        return {j: F.mul(c, d) for j, d in u.items()}

    def act(self, vec, a):
        """vec * arrow a."""
        out = {}
        sa = self.quiver.arrows[a].source
        for i, c in vec.items():
            if self.tgt[i] == sa:
                self.axpy(out, c, self.ract[i][a])
        return out

    def act_path(self, vec, p):
        if p[0] < 0:
            v = -1 - p[0]
            return {i: c for i, c in vec.items() if self.tgt[i] == v}
        for a in p:
            vec = self.act(vec, a)
            if not vec:
                break
        return vec

    def nf(self, x):
        """Normal form of a FreeElem as a sparse coordinate dict."""
        if x.quiver is not self.quiver and x.quiver != self.quiver:
            raise QuiverMismatch("element over a different quiver")
        if x.field != self.field:
            raise QuiverMismatch(f"element over {x.field}, algebra over {self.field}")
        out = {}
        q = self.quiver
        for p, c in x.terms.items():
            start = self.unit(self.vertex_index(path_source(q, p)))
            self.axpy(out, c, self.act_path(start, p))
        return out

    def element(self, vec):
        """A FreeElem representative of a coordinate dict."""
        return FreeElem(self.quiver, self.field, {self.basis[k]: c for k, c in vec.items()})

    def right_products(self, u, targets=None):
        """{j: u * basis[j]} for all basis j (restricted to ``targets`` if given),
        by depth-first search over the prefix tree of the basis."""
        out = {}
        if not u:
            return out
        verts = {self.tgt[i] for i in u}
        for v in verts:
            root = self.vertex_index(v)
            start = {i: c for i, c in u.items() if self.tgt[i] == v}
            stack = [(root, start)]
            while stack:
                k, vec = stack.pop()
                if targets is None or k in targets:
                    out[k] = vec
                for a, child in self.children[k].items():
                    w = self.act(vec, a)
                    if w:
                        stack.append((child, w))
        return out

    def mul(self, u, v):
        out = {}
        if not u or not v:
            return out
        prods = self.right_products(u, targets=set(v))
        for j, c in v.items():
            if j in prods:
                self.axpy(out, c, prods[j])
        return out

    def product(self, i, j):
        """Structure constants: basis[i] * basis[j]."""
        key = (i, j)
        if key not in self._prod_cache:
            if self.tgt[i] != self.src[j]:
                self._prod_cache[key] = {}
            else:
                self._prod_cache[key] = self.act_path(self.unit(i), self.basis[j])
        return self._prod_cache[key]

    def structure_constants(self):
        table = {}
        for i in range(len(self.basis)):
            for j, vec in self.right_products(self.unit(i)).items():
                if vec:
                    table[(i, j)] = vec
        return table

    def dims_by_pair(self):
        vs = self.quiver.vertices
        pos = {v: k for k, v in enumerate(vs)}
        m = [[0] * len(vs) for _ in vs]
        for s, t in zip(self.src, self.tgt):
            m[pos[s]][pos[t]] += 1
        return m

    def hilbert_series_by_degree(self):
        top = max(self.deg, default=-1)
        h = [0] * (top + 1)
        for d in self.deg:
            h[d] += 1
        return h

    def block(self, i, j):
        return [k for k in range(len(self.basis)) if self.src[k] == i and self.tgt[k] == j]

    def format_vec(self, vec):
        return format_element(self.element(vec))

    def __repr__(self):
        return f"QuotientAlgebra({self.presentation.name or self.quiver.name}, dim={self.dimension}, {self.field})"


def _assemble(pres, en):
    live = [i for i in range(len(en.words)) if i not in en.expr]
    order = sorted(live, key=lambda i: (en.wsrc[i], en.wtgt[i], en.wlen[i], en.words[i]))
    pos = {i: k for k, i in enumerate(order)}
    q = pres.quiver
    ract = []
    for i in order:
        row = {}
        for a in q.out_arrows[en.wtgt[i]]:
            t = en.explicit(en.table.get(i * en.na + a, {}))
            row[a] = {pos[j]: c for j, c in t.items()}
        ract.append(row)
    basis = [en.words[i] for i in order]
    return QuotientAlgebra(pres, basis, ract, en.cap)


def build_quotient(pres, max_cap=1024, max_words=200_000):
    """Compute the quotient algebra of ``pres``; see the module docstring."""
    if pres.cap == AUTO:
        cap = default_cap(pres.meta.get("dynkin") or pres.quiver.dynkin)
        fixed = False
    else:
        cap = int(pres.cap)
        fixed = True
    while True:
        en = _Enumerator(pres, cap, max_words).run()
        top = max((en.wlen[i] for i in range(len(en.words)) if i not in en.expr), default=0)
        if top < cap - 1:
            break
        if fixed or cap * 2 > max_cap:
            raise CapExceeded(f"radical not nilpotent below cap {cap}")
        cap *= 2
    A = _assemble(pres, en)
    if pres.strict:
        q = pres.quiver
        for v in q.vertices:
            if trivial(v) not in A.index:
                raise NotAdmissible(f"the relations kill the idempotent e{v}")
        for a in q.arrows:
            if (a.id,) not in A.index:
                raise NotAdmissible(f"arrow {a.name} is a combination of longer paths")
    return A


def normal_form(A, x):
    return A.nf(x)
