"""Naive truncated path algebra closure, written without the package engine.

dim e_i KQ/(I + J^N) e_j is computed as (#paths i->j of length < N) minus the
rank of {u r w} over all relations r and paths u, w, truncated at length N.
Once the dimensions agree for N and N+1 the ideal contains J^N, so the
numbers are those of KQ/I.
"""

from fractions import Fraction
from itertools import product


class Field:
    def __init__(self, p):
        self.p = p

    def norm(self, x):
        if self.p:
            x = Fraction(x)
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return Fraction(x)

    def inv(self, x):
        return pow(x, -1, self.p) if self.p else 1 / x


class Quiver:
    def __init__(self, n, arrows):
        self.n = n
        self.arrows = {name: (s, t) for name, s, t in arrows}

    def paths(self, maxlen):
        """All paths of length < maxlen as (src, tgt, tuple of names)."""
        out = [(v, v, ()) for v in range(self.n)]
        layer = list(out)
        for _ in range(1, maxlen):
            nxt = []
            for s, t, w in layer:
                for name, (a, b) in self.arrows.items():
                    if a == t:
                        nxt.append((s, b, w + (name,)))
            out += nxt
            layer = nxt
        return out


def double_dynkin(family, n):
    if family in ("A", "L"):
        edges = [(k, k + 1) for k in range(n - 1)]
    elif family == "D":
        edges = [(0, 2), (1, 2)] + [(k, k + 1) for k in range(2, n - 1)]
    else:
        edges = [(0, 3), (1, 2), (2, 3)] + [(k, k + 1) for k in range(3, n - 1)]
    arrows = [(f"a{k}", s, t) for k, (s, t) in enumerate(edges)]
    arrows += [(f"abar{k}", t, s) for k, (s, t) in enumerate(edges)]
    if family == "L":
        arrows.insert(0, ("eps", 0, 0))
    return Quiver(n, arrows)


def mesh(q):
    """sum of a*abar over arrows leaving each vertex, as name-word dicts."""
    bar = {}
    for name in q.arrows:
        if name == "eps":
            bar[name] = name
        elif name.startswith("abar"):
            bar[name] = "a" + name[4:]
        else:
            bar[name] = "abar" + name[1:]
    rels = []
    for v in range(q.n):
        rels.append({(a, bar[a]): 1 for a, (s, _) in q.arrows.items() if s == v})
    return rels


def _rank(F, rows):
    piv = {}
    r = 0
    for row in rows:
        row = {k: F.norm(c) for k, c in row.items() if F.norm(c) != 0}
        while row:
            k = min(row)
            if k not in piv:
                c = F.inv(row[k])
                piv[k] = {j: F.norm(x * c) for j, x in row.items()}
                r += 1
                break
            c = row[k]
            for j, x in piv[k].items():
                y = F.norm(row.get(j, 0) - c * x)
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
    return r


def _endpoints(q, word):
    return q.arrows[word[0]][0], q.arrows[word[-1]][1]


def truncated_cartan(q, relations, p, N):
    """Cartan matrix of KQ/(I + J^N); relations are {name word: coeff}."""
    F = Field(p)
    paths = q.paths(N)
    C = [[0] * q.n for _ in range(q.n)]
    for s, t, _ in paths:
        C[s][t] += 1
    rows = {}
    by_end = {}
    for s, t, w in paths:
        by_end.setdefault(("in", t), []).append(w)
        by_end.setdefault(("out", s), []).append(w)
    for r in relations:
        if not r:
            continue
        w0 = next(iter(r))
        rs, rt = _endpoints(q, w0)
        low = min(len(w) for w in r)
        for u, w in product(by_end[("in", rs)], by_end[("out", rt)]):
            if len(u) + len(w) + low >= N:
                continue
            row = {}
            for word, c in r.items():
                full = u + word + w
                if len(full) < N:
                    row[full] = row.get(full, 0) + c
            key = (rs if not u else q.arrows[u[0]][0], rt if not w else q.arrows[w[-1]][1])
            rows.setdefault(key, []).append(row)
    for (i, j), rs_ in rows.items():
        C[i][j] -= _rank(F, rs_)
    return C


def closure(q, relations, p, start=2, limit=40):
    """(Cartan matrix, Loewy length) of KQ/I, growing N until it stabilizes."""
    prev = truncated_cartan(q, relations, p, start)
    N = start
    while N < limit:
        cur = truncated_cartan(q, relations, p, N + 1)
        if cur == prev:
            return cur, N
        prev, N = cur, N + 1
    raise RuntimeError("closure did not stabilize")


def graded_dims(q, relations, p, loewy):
    """dim rad^k / rad^{k+1} for k < loewy."""
    tot = [sum(map(sum, truncated_cartan(q, relations, p, k))) for k in range(1, loewy + 1)]
    return [tot[0]] + [b - a for a, b in zip(tot, tot[1:])]


def from_presentation(pres):
    """Oracle quiver and name-word relations read off a package Presentation."""
    pq = pres.quiver
    q = Quiver(len(pq.vertices), [(a.name, a.source, a.target) for a in pq.arrows])
    rels = []
    for r in pres.relations:
        rels.append({tuple(pq.arrows[i].name for i in path): c for path, c in r.terms.items()})
    return q, rels
