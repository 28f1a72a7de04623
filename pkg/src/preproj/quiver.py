"""Finite quivers with a bar involution, and the double quivers of the
generalized Dynkin graphs A_n, D_n, E_6, E_7, E_8 and L_n."""

from dataclasses import dataclass


class InvalidRank(ValueError):
    pass


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: int
    name: str
    source: int
    target: int


_MIN_RANK = {"A": 1, "D": 4, "L": 1}


@dataclass(frozen=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam == "E":
            if not 6 <= self.rank <= 8:
                raise InvalidRank(f"E_{self.rank} is not a Dynkin type (need 6 <= n <= 8)")
        elif fam in _MIN_RANK:
            if self.rank < _MIN_RANK[fam]:
                raise InvalidRank(f"{fam}_{self.rank}: rank must be >= {_MIN_RANK[fam]}")
        else:
            raise InvalidRank(f"unknown family {self.family!r}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text):
        text = text.strip().replace("_", "")
        return cls(text[0], int(text[1:]))


class Quiver:
    """Vertices are integers; arrows are numbered in insertion order, and that
    order is the one used by monomial orders downstream."""

    def __init__(self, vertices, name=""):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        self.name = name
        self.arrows = []
        self.bar = []
        self.index = {}
        self.out_arrows = {v: [] for v in self.vertices}
        self.in_arrows = {v: [] for v in self.vertices}
        self.dynkin = None

    def add_arrow(self, name, source, target):
        if name in self.index:
            raise QuiverError(f"duplicate arrow name {name!r}")
        for v in (source, target):
            if v not in self.out_arrows:
                raise QuiverError(f"unknown vertex {v}")
        a = Arrow(len(self.arrows), name, source, target)
        self.arrows.append(a)
        self.bar.append(None)
        self.index[name] = a.id
        self.out_arrows[source].append(a.id)
        self.in_arrows[target].append(a.id)
        return a.id

    def add_edge(self, name, barname, source, target):
        """Add a and abar with abar the reverse of a."""
        i = self.add_arrow(name, source, target)
        j = self.add_arrow(barname, target, source)
        self.bar[i], self.bar[j] = j, i
        return i, j

    def add_loop(self, name, vertex, selfbar=True):
        i = self.add_arrow(name, vertex, vertex)
        if selfbar:
            self.bar[i] = i
        return i

    def set_bar(self, i, j):
        a, b = self.arrows[i], self.arrows[j]
        if (a.source, a.target) != (b.target, b.source):
            raise QuiverError(f"bar({a.name}) = {b.name} does not reverse endpoints")
        self.bar[i], self.bar[j] = j, i

    def arrow(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def name(self, i):
        return self.arrows[i].name

    def source(self, i):
        return self.arrows[i].source

    def target(self, i):
        return self.arrows[i].target

    @property
    def num_arrows(self):
        return len(self.arrows)

    def check(self):
        for a in self.arrows:
            b = self.bar[a.id]
            if b is None:
                continue
            if self.bar[b] != a.id:
                raise QuiverError(f"bar is not an involution at {a.name}")
            other = self.arrows[b]
            if (other.source, other.target) != (a.target, a.source):
                raise QuiverError(f"bar({a.name}) has wrong endpoints")

    def signature(self):
        return (tuple(self.vertices),
                tuple((a.name, a.source, a.target) for a in self.arrows),
                tuple(self.bar))

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"Quiver({self.name or len(self.vertices)}, {len(self.arrows)} arrows)"


def _edges(t):
    n = t.rank
    if t.family in ("A", "L"):
        return [(k, k, k + 1) for k in range(n - 1)]
    if t.family == "D":
        return [(0, 0, 2), (1, 1, 2)] + [(k, k, k + 1) for k in range(2, n - 1)]
    return [(0, 0, 3), (1, 1, 2), (2, 2, 3)] + [(k, k, k + 1) for k in range(3, n - 1)]


def build_dynkin_quiver(t):
    """The double quiver of ``t`` with vertices 0..n-1.

    Arrow order: eps (type L only), then a_0, a_1, ..., then abar_0, abar_1, ...
    """
    if isinstance(t, str):
        t = DynkinType.parse(t)
    q = Quiver(range(t.rank), name=str(t))
    if t.family == "L":
        q.add_loop("eps", 0)
    edges = _edges(t)
    ids = [q.add_arrow(f"a{k}", s, e) for k, s, e in edges]
    for (k, s, e), i in zip(edges, ids):
        j = q.add_arrow(f"abar{k}", e, s)
        q.set_bar(i, j)
    q.dynkin = t
    return q


_EXCEPTIONAL = {"A": 0, "D": 2, "E": 3, "L": 0}


def exceptional_vertex(t):
    if isinstance(t, str):
        t = DynkinType.parse(t)
    return _EXCEPTIONAL[t.family]
