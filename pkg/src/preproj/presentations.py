"""Builders for R(Delta), P(Delta), the deformed algebras P^f(Delta), the
canonical socle deformations P*(Delta), L_n^(r), and the theta-parameterized
presentations A' / A'' read from the case files in ``data/``."""

from .field import Scalar
from .freealg import FreeElem, NCPoly, parse_poly, substitute
from .quiver import DynkinType, Quiver, build_dynkin_quiver, exceptional_vertex
from .quotient import NotAdmissible, Presentation, build_quotient


class NoCanonicalStar(ValueError):
    pass


class CaseMismatch(ValueError):
    pass


class RangeError(ValueError):
    pass


def _dynkin(t):
    return DynkinType.parse(t) if isinstance(t, str) else t


def _arrow(q, F, name):
    return FreeElem.arrow(q, F, name)


def mesh_relation(q, F, v):
    """sum of a*bar(a) over the arrows a starting at v."""
    out = FreeElem.zero(q, F)
    for a in q.out_arrows[v]:
        out = out + FreeElem(q, F, {(a, q.bar[a]): 1})
    return out


def preprojective(t, field, cap="auto"):
    t = _dynkin(t)
    q = build_dynkin_quiver(t)
    rels = [mesh_relation(q, field, v) for v in q.vertices]
    return Presentation(q, field, rels, cap, name=f"P({t})", meta={"dynkin": t, "kind": "P"})


def local_algebra_R(t, field, cap="auto"):
    t = _dynkin(t)
    q = Quiver([0], name=f"R({t})")
    n = t.rank
    if t.family == "A":
        rels = []
    elif t.family == "L":
        q.add_loop("x", 0)
        rels = [_arrow(q, field, "x") ** (2 * n)]
    else:
        q.add_loop("x", 0)
        q.add_loop("y", 0)
        x, y = _arrow(q, field, "x"), _arrow(q, field, "y")
        if t.family == "D":
            rels = [x * x, y * y, (x + y) ** (n - 2)]
        else:
            rels = [x * x, y ** 3, (x + y) ** (n - 3)]
    # the local algebra's radical dies below twice the Loewy bound of its type
    if cap == "auto":
        cap = 2 * {"A": 1, "D": n - 1, "E": {6: 6, 7: 9, 8: 15}.get(n, 15), "L": 2 * n}[t.family] + 2
    return Presentation(q, field, rels, cap, name=f"R({t})", meta={"dynkin": None, "kind": "R", "type": t})


def _poly(f, field):
    if f is None:
        return NCPoly(field)
    if isinstance(f, str):
        return parse_poly(f, field)
    return f


def _check_deform(f):
    if f.min_degree() is not None and f.min_degree() < 2:
        raise NotAdmissible(f"deformation {f} has a monomial of degree < 2")


def is_admissible(t, f, field):
    t = _dynkin(t)
    f = _poly(f, field)
    _check_deform(f)
    if t.family != "E":
        return True
    R = local_algebra_R(t, field)
    A = build_quotient(R)
    q = R.quiver
    x, y = _arrow(q, field, "x"), _arrow(q, field, "y")
    g = (x + y + substitute(f, {"x": x, "y": y})) ** (t.rank - 3) if f.terms else (x + y) ** (t.rank - 3)
    return not A.nf(g)


def deformed(t, f, field, cap="auto", name=None, check=True):
    """P^f(t): the exceptional relation perturbed by f(x, y) (or f(x) for L)."""
    t = _dynkin(t)
    f = _poly(f, field)
    _check_deform(f)
    if check and not is_admissible(t, f, field):
        raise NotAdmissible(f"{f} is not admissible for {t}")
    q = build_dynkin_quiver(t)
    F = field
    n = t.rank
    ex = exceptional_vertex(t)
    rels = [mesh_relation(q, F, v) for v in q.vertices if v != ex or t.family == "A"]
    if t.family == "D":
        x = _arrow(q, F, "abar0") * _arrow(q, F, "a0")
        y = _arrow(q, F, "abar1") * _arrow(q, F, "a1")
        extra = substitute(f, {"x": x, "y": y}) if f.terms else 0
        rels.insert(ex, mesh_relation(q, F, ex) + extra)
        rels.append((x + y) ** (n - 2))
    elif t.family == "E":
        x = _arrow(q, F, "abar0") * _arrow(q, F, "a0")
        y = _arrow(q, F, "abar2") * _arrow(q, F, "a2")
        extra = substitute(f, {"x": x, "y": y}) if f.terms else 0
        rels.insert(ex, mesh_relation(q, F, ex) + extra)
        rels.append((x + y) ** (n - 3))
    elif t.family == "L":
        eps = _arrow(q, F, "eps")
        extra = eps * substitute(f, {"x": eps}) if f.terms else 0
        rels.insert(ex, mesh_relation(q, F, ex) + extra)
        rels.append(eps ** (2 * n))
    return Presentation(q, F, rels, cap, name=name or f"P^f({t})",
                        meta={"dynkin": t, "kind": "Pf", "f": str(f)})


def star_deformation(t, field):
    """The deformation f defining P*(t)."""
    t = _dynkin(t)
    n = t.rank
    if t.family == "D":
        m = n // 2
        s = "(x*y)^%d" % (m - 1) + ("*x" if n % 2 else "")
    elif t.family == "E":
        s = "(y*x)^2*y" if n == 6 else "(x*y)^%d" % (3 * n - 17)
    elif t.family == "L" and n >= 2:
        s = "x^%d" % (2 * n - 2)
    else:
        raise NoCanonicalStar(f"no socle deformation P*({t})")
    return parse_poly(s, field)


def canonical_star(t, field, cap="auto"):
    t = _dynkin(t)
    f = star_deformation(t, field)
    p = deformed(t, f, field, cap, name=f"P*({t})")
    p.meta["kind"] = "Pstar"
    return p


def L_algebra(n, r, field, cap="auto"):
    if not 1 <= r <= n:
        raise RangeError(f"L_{n}^({r}) needs 1 <= r <= n")
    p = deformed(DynkinType("L", n), parse_poly("x^%d" % (2 * r), field), field, cap,
                 name=f"L{n}^({r})")
    p.meta["kind"] = "Lr"
    p.meta["r"] = r
    return p


# -- theta-parameterized candidates --------------------------------------------

class Case:
    """A family of socle equivalent candidates read from ``data/``.

    ``prime`` is the many-parameter presentation, ``second`` the
    one-parameter normal form (if the family has one), ``maps`` the file
    holding the phi/psi pair between P or A'' and A'."""

    def __init__(self, name, family, prime, maps, thetas, ranks, second=None, ids=()):
        self.name, self.family = name, family
        self.prime, self.second, self.maps = prime, second, maps
        self._thetas, self._ranks = thetas, ranks
        self.ids = ids

    def check_rank(self, n):
        if n is None or not self._ranks(n):
            raise CaseMismatch(f"case {self.name} is not defined for rank {n}")

    def theta_indices(self, n):
        return self._thetas(n)

    def context(self, n):
        return {"n": n, "m": n // 2}

    def param_names(self, n):
        return ["t" if i is None else f"t{i}" for i in self.theta_indices(n)]


def _fixed(k):
    return lambda n: n == k


CASES = {c.name: c for c in [
    Case("A_odd", "A", "aodd_prime.qpa", "aodd.mor", lambda n: [None],
         lambda n: n >= 3 and n % 2 == 1),
    Case("E6", "E", "e6_prime.qpa", "e6.mor", lambda n: [0, 3], _fixed(6), ids=("e6.ids",)),
    Case("D_odd", "D", "dodd_prime.qpa", "dodd.mor", lambda n: list(range(2, n)),
         lambda n: n >= 5 and n % 2 == 1, ids=("dodd.ids",)),
    Case("D_even", "D", "deven_prime.qpa", "deven.mor", lambda n: list(range(n)),
         lambda n: n >= 4 and n % 2 == 0, second="deven_second.qpa", ids=("deven.ids",)),
    Case("L", "L", "l_prime.qpa", "l.mor", lambda n: list(range(n)), lambda n: n >= 2,
         second="l_second.qpa", ids=("l.ids",)),
    Case("E7", "E", "e7_prime.qpa", "e7.mor", lambda n: list(range(7)), _fixed(7),
         second="e7_second.qpa", ids=("e7.ids", "e7_swap.ids")),
    Case("E8", "E", "e8_prime.qpa", "e8.mor", lambda n: list(range(8)), _fixed(8),
         second="e8_second.qpa", ids=("e8.ids", "e8_swap.ids")),
]}

_ALIASES = {"aodd": "A_odd", "dodd": "D_odd", "deven": "D_even", "l": "L", "ln": "L",
            "e6": "E6", "e7": "E7", "e8": "E8"}


def get_case(case):
    if isinstance(case, Case):
        return case
    key = str(case).replace("_", "").replace("prime", "").lower()
    if key not in _ALIASES:
        raise CaseMismatch(f"unknown case {case!r}")
    return CASES[_ALIASES[key]]


def case_for(t):
    """The candidate family of a Dynkin type (None when P(t) is rigid by
    parity, i.e. A_n with n even)."""
    t = _dynkin(t)
    fam, n = t.family, t.rank
    if fam == "A":
        return CASES["A_odd"] if n % 2 and n >= 3 else None
    if fam == "D":
        return CASES["D_odd" if n % 2 else "D_even"]
    if fam == "E":
        return CASES[f"E{n}"]
    return CASES["L"] if n >= 2 else None


def _default_rank(c, n):
    if n is None and c.family == "E":
        return int(c.name[1])
    return n


def theta_params(case, n, theta, field):
    """Map a ThetaVector (dict index -> value, a sequence, or a bare value for
    one-parameter cases) onto the template parameter names."""
    c = get_case(case)
    n = _default_rank(c, n)
    c.check_rank(n)
    idx = c.theta_indices(n)
    names = c.param_names(n)
    if theta is None:
        theta = {}
    if not isinstance(theta, (dict, list, tuple)):
        if len(idx) != 1:
            raise CaseMismatch(f"case {c.name} takes {len(idx)} parameters")
        theta = {idx[0]: theta}
    if isinstance(theta, (list, tuple)):
        if len(theta) != len(idx):
            raise CaseMismatch(f"case {c.name} at rank {n} takes indices {idx}")
        theta = dict(zip(idx, theta))
    out = {}
    for k, v in theta.items():
        k = None if k in (None, "", "t") else int(k)
        if k not in idx:
            raise CaseMismatch(f"theta index {k} is not used by case {c.name} at rank {n} (indices {idx})")
        out[names[idx.index(k)]] = v.value if isinstance(v, Scalar) else v
    return {k: field(v) for k, v in out.items()}


def _label(c, n):
    return c.name if c.family == "E" else f"{c.name}{n}"


def _load(c, n, fname, params, field, name, extra=None):
    from . import dsl

    ctx = c.context(n)
    ctx.update(extra or {})
    p = dsl.parse_presentation(dsl.render(fname, **ctx), field, params)
    p.name = name
    p.meta.update({"case": c.name, "rank": n, "source": fname})
    return p


def socle_deformed_generic(case, n, theta, field, **options):
    """A'(theta): the many-parameter socle equivalent candidate of ``case``."""
    c = get_case(case)
    n = _default_rank(c, n)
    params = theta_params(c, n, theta, field)
    label = ",".join(f"{k}={v}" for k, v in sorted(params.items()) if v)
    return _load(c, n, c.prime, params, field, f"{_label(c, n)}'({label})", options)


def second_presentation(case, n, theta, field):
    """A''(theta) for the families with a one-parameter normal form."""
    c = get_case(case)
    n = _default_rank(c, n)
    c.check_rank(n)
    if c.second is None:
        raise CaseMismatch(f"case {c.name} has no one-parameter form")
    if isinstance(theta, Scalar):
        theta = theta.value
    return _load(c, n, c.second, {"t": field(theta)}, field, f"{_label(c, n)}''({field(theta)})")


def theta_collapse(case, theta, field, n=None):
    """The parameter of A'' isomorphic to A'(theta).

    D_even sums over all n indices and the L signs carry an extra (-1)^n;
    both were fixed by requiring the catalog maps to be well defined."""
    c = get_case(case)
    n = _default_rank(c, n)
    if c.second is None:
        raise CaseMismatch(f"case {c.name} has no collapse formula")
    if n is None and isinstance(theta, (list, tuple)):
        n = len(theta)
    p = theta_params(c, n, theta, field)
    t = [p.get(f"t{i}", field.zero()) for i in range(len(c.theta_indices(n)))]
    F = field
    out = F.zero()

    def acc(sign, v):
        nonlocal out
        out = F.add(out, v) if sign > 0 else F.sub(out, v)

    if c.name == "D_even":
        for i in range(n):
            acc((-1) ** i, t[i])
    elif c.name == "L":
        N = (n - 2) * (n - 1) // 2
        acc(1, t[0])
        for i in range(1, n):
            acc((-1) ** (i + 1 + N + n), t[i])
    elif c.name == "E7":
        for s, v in zip((1, 1, -1, -1, 1, -1, 1), t):
            acc(s, v)
    else:
        for s, v in zip((-1, -1, 1, 1, -1, 1, -1, 1), t):
            acc(s, v)
    return out
