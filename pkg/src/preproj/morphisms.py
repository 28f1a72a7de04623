"""Algebra homomorphisms given on arrows, and the catalog of the explicit
phi/psi pairs between the candidate presentations."""

from dataclasses import dataclass, field as dc_field

from . import dsl
from .field import CharTwo, Scalar
from .freealg import FreeElem
from .presentations import (
    CaseMismatch,
    canonical_star,
    get_case,
    preprojective,
    second_presentation,
    socle_deformed_generic,
    theta_collapse,
    theta_params,
)
from .quiver import DynkinType
from .quotient import build_quotient
from .structure import Echelon


class QuiverMismatch(ValueError):
    pass


class EndpointError(ValueError):
    pass


def _source(q, p):
    return -1 - p[0] if p[0] < 0 else q.arrows[p[0]].source


def _target(q, p):
    return -1 - p[-1] if p[-1] < 0 else q.arrows[p[-1]].target


class AlgebraMorphism:
    """A map from KQ/I (``source``, a Presentation) to ``target`` fixed by
    the images of the arrows; unlisted arrows go to themselves."""

    def __init__(self, source, target, images=None, vertex_map=None, name=""):
        self.source = source
        self.target = target
        self.name = name
        sq, tq = source.quiver, target.quiver
        self.vertex_map = dict(vertex_map or {})
        for v in sq.vertices:
            self.vertex_map.setdefault(v, v)
        if sorted(self.vertex_map.values()) != sorted(tq.vertices):
            raise EndpointError("vertex map is not a bijection")
        images = dict(images or {})
        self.images = {}
        for a in sq.arrows:
            img = images.pop(a.name, None)
            if img is None:
                img = FreeElem.arrow(tq, target.field, a.name)
            self.images[a.id] = img
        if images:
            raise QuiverMismatch(f"images given for unknown arrows {sorted(images)}")
        for a in sq.arrows:
            s, t = self.vertex_map[a.source], self.vertex_map[a.target]
            for p in self.images[a.id].terms:
                if p[0] < 0 or (_source(tq, p), _target(tq, p)) != (s, t):
                    raise EndpointError(
                        f"image of {a.name} has a term outside e{s} A e{t} (or in degree 0)")
        self._vec = {}

    @property
    def field(self):
        return self.target.field

    def image_vec(self, a):
        if a not in self._vec:
            self._vec[a] = self.target.nf(self.images[a])
        return self._vec[a]

    def _act(self, vec, a):
        A = self.target
        out = {}
        for p, c in self.images[a].terms.items():
            A.axpy(out, c, A.act_path(vec, p))
        return out

    def apply_path(self, p):
        A = self.target
        q = self.source.quiver
        vec = A.unit(A.vertex_index(self.vertex_map[_source(q, p)]))
        if p[0] < 0:
            return vec
        for a in p:
            vec = self._act(vec, a)
            if not vec:
                break
        return vec

    def apply(self, x):
        if x.quiver != self.source.quiver:
            raise QuiverMismatch("element is not over the source quiver")
        out = {}
        for p, c in x.terms.items():
            self.target.axpy(out, c, self.apply_path(p))
        return out

    def is_well_defined(self):
        """(True, None) or (False, failing relation)."""
        for r in self.source.relations:
            if self.apply(r):
                return False, r
        return True, None

    def __repr__(self):
        return f"AlgebraMorphism({self.name or '?'}: {self.source.name} -> {self.target.presentation.name})"


def compose(f, g):
    """g after f: first f, then g.  f.target must be g's source algebra."""
    if f.target.quiver != g.source.quiver:
        raise QuiverMismatch("composable maps must share the middle quiver")
    imgs = {}
    for a in f.source.quiver.arrows:
        vec = g.apply(f.target.element(f.image_vec(a.id)))
        imgs[a.name] = g.target.element(vec)
    vmap = {v: g.vertex_map[w] for v, w in f.vertex_map.items()}
    name = f"{g.name}.{f.name}" if f.name and g.name else ""
    return AlgebraMorphism(f.source, g.target, imgs, vmap, name)


def identity_morphism(A):
    return AlgebraMorphism(A.presentation, A, name="id")


def _fixes_arrows(m, A):
    for a in m.source.quiver.arrows:
        if m.image_vec(a.id) != A.nf(FreeElem.arrow(A.quiver, A.field, a.name)):
            return False, a.name
    return True, None


def verify_mutually_inverse(phi, psi):
    """phi: A -> B and psi: B -> A (B = phi.target, A = psi.target).

    Both composites are checked on arrows; returns (ok, detail)."""
    A, B = psi.target, phi.target
    if phi.source.quiver != A.quiver or psi.source.quiver != B.quiver:
        return False, "maps do not run in opposite directions"
    for first, second, home, label in ((phi, psi, A, "psi.phi"), (psi, phi, B, "phi.psi")):
        ok, a = _fixes_arrows(compose(first, second), home)
        if not ok:
            return False, f"{label} moves {a}"
    return True, None


def is_isomorphism(m, source_algebra):
    """Well defined, equal dimensions and invertible modulo rad^2 (then m is
    onto, hence bijective).  Returns (ok, detail)."""
    ok, rel = m.is_well_defined()
    if not ok:
        return False, f"relation {rel} does not map to 0"
    if len(source_algebra.basis) != len(m.target.basis):
        return False, "dimensions differ"
    A = m.target
    ech = Echelon(A.field)
    for a in m.source.quiver.arrows:
        lin = {k: c for k, c in m.image_vec(a.id).items() if A.deg[k] == 1}
        if not ech.add(lin)[0]:
            return False, f"images of the arrows are dependent modulo rad^2 at {a.name}"
    return True, None


# -- catalog ---------------------------------------------------------------

CATALOG = {
    "AoddPhi": ("A_odd", "phi"), "AoddPsi": ("A_odd", "psi"),
    "E6Phi": ("E6", "phi"), "E6Psi": ("E6", "psi"),
    "DoddPhi": ("D_odd", "phi"), "DoddPsi": ("D_odd", "psi"),
    "DevenPhi": ("D_even", "phi"), "DevenPsi": ("D_even", "psi"),
    "LnPhi": ("L", "phi"), "LnPsi": ("L", "psi"),
    "E7Phi": ("E7", "phi"), "E7Psi": ("E7", "psi"),
    "E8Phi": ("E8", "phi"), "E8Psi": ("E8", "psi"),
}

# char not 2 maps P(t) -> P*(t) (phi) and back (psi)
CHAR_NOT_2 = {"DevenCharNot2": ("D_even", "deven_char_not2.mor"),
              "E7CharNot2": ("E7", "e7_char_not2.mor"),
              "E8CharNot2": ("E8", "e8_char_not2.mor"),
              "LnCharNot2": ("L", "l_char_not2.mor")}


@dataclass
class CatalogContext:
    """Endpoint algebras shared between the maps of one case, so phi and psi
    see the same QuotientAlgebra objects."""
    case: str
    n: int
    field: object
    params: dict
    theta: object = None
    cache: dict = dc_field(default_factory=dict)

    def endpoint(self, label):
        if label not in self.cache:
            F, n = self.field, self.n
            c = get_case(self.case)
            if label == "P":
                p = preprojective(DynkinType(c.family, n), F)
            elif label == "Pstar":
                p = canonical_star(DynkinType(c.family, n), F)
            elif label == "prime":
                p = socle_deformed_generic(c, n, self.theta, F)
            elif label == "second":
                p = second_presentation(c, n, theta_collapse(c, self.theta, F, n), F)
            else:
                raise CaseMismatch(f"unknown endpoint {label!r}")
            self.cache[label] = (p, build_quotient(p))
        return self.cache[label]


def _rank(case, n):
    c = get_case(case)
    if n is None and c.family == "E":
        return int(c.name[1])
    return n


def _load_maps(ctx, fname):
    c = get_case(ctx.case)
    text = dsl.render(fname, **c.context(ctx.n))
    out = {}
    for name, (src, tgt, block) in dsl.parse_morphism_blocks(text).items():
        sp, _ = ctx.endpoint(src)
        _, TA = ctx.endpoint(tgt)
        vmap, imgs, _ = dsl.morphism_images(block, sp.quiver, TA.quiver, ctx.field, ctx.params)
        out[name] = AlgebraMorphism(sp, TA, imgs, vmap, name=name)
    return out


def catalog_pair(case, n=None, theta=None, field=None, ctx=None, variant=""):
    """(phi, psi) of ``case`` at parameter ``theta``.  ``case`` is a family
    name (A_odd, E6, ...) or one of the CharNot2 ids; ``variant="signed"``
    selects the sign-corrected E8CharNot2 pair."""
    suffix = f"_{variant}" if variant else ""
    if case in CHAR_NOT_2:
        fam, fname = CHAR_NOT_2[case]
        if field.characteristic == 2:
            raise CharTwo(f"{case} needs 1/2")
        n = _rank(fam, n)
        get_case(fam).check_rank(n)
        ctx = ctx or CatalogContext(fam, n, field, {})
        maps = _load_maps(ctx, fname)
        if "phi" + suffix not in maps:
            raise CaseMismatch(f"{case} has no {variant!r} variant")
        return maps["phi" + suffix], maps.get("psi" + suffix)
    c = get_case(case)
    n = _rank(c, n)
    params = theta_params(c, n, theta, field)
    ctx = ctx or CatalogContext(c.name, n, field, params, theta)
    maps = _load_maps(ctx, c.maps)
    return maps["phi"], maps["psi"]


def catalog_morphism(case, n=None, theta=None, field=None, **kw):
    """One catalog entry by id (``E7Phi``, ``DevenCharNot2``, ...).  For the
    CharNot2 ids this is the map P -> P*; pass ``which="psi"`` for the
    inverse."""
    which = kw.pop("which", None)
    if case in CHAR_NOT_2:
        phi, psi = catalog_pair(case, n, theta, field)
        return psi if which == "psi" else phi
    if case not in CATALOG:
        raise CaseMismatch(f"unknown catalog entry {case!r}")
    fam, side = CATALOG[case]
    phi, psi = catalog_pair(fam, n, theta, field)
    return phi if side == "phi" else psi


# -- scalings ----------------------------------------------------------------

# (k, c) with c * lambda^k = theta for the scaling P*(t) -> A''(theta); found
# by solving for the scalings that are well defined in both directions
POWER_EQUATION = {"D_even": lambda n: (2 * n - 6, (-1) ** (n // 2)),
                  "L": lambda n: (2 * n - 3, 1),
                  "E7": lambda n: (14, 1), "E8": lambda n: (26, -1)}

# exponents stated alongside the maps; the acceptance suite checks them as given
STATED_EXPONENT = {"L": lambda n: 2 * n - 3, "E7": lambda n: 13, "E8": lambda n: 27}


def scaling(source, target, lam):
    """lambda * arrow on every arrow (source presentation -> target algebra)."""
    F = target.field
    lam = F(lam.value if isinstance(lam, Scalar) else lam)
    if lam == 0:
        raise ValueError("scaling needs lambda != 0")
    q = target.quiver
    imgs = {a.name: FreeElem.arrow(q, F, a.name).scale(lam) for a in source.quiver.arrows}
    return AlgebraMorphism(source, target, imgs, name=f"scale({lam})")


def power_equation(case, n=None):
    c = get_case(case)
    n = _rank(c, n)
    if c.name not in POWER_EQUATION:
        raise CaseMismatch(f"case {c.name} has no scaling to P*")
    return POWER_EQUATION[c.name](n)


def star_scaling(case, n, lam, theta, field):
    """Scaling(lambda): P*(t) -> A''(theta).  Checks the power equation
    c * lambda^k = theta (no root extraction); raises ValueError otherwise."""
    c = get_case(case)
    n = _rank(c, n)
    F = field
    lam, theta = F(lam), F(theta)
    k, sign = power_equation(c, n)
    lhs = F.mul(F(sign), F.pow(lam, k))
    if lhs != theta:
        raise ValueError(f"{sign} * lambda^{k} = {lhs} but theta = {theta}")
    P = canonical_star(DynkinType(c.family, n), F)
    A2 = build_quotient(second_presentation(c, n, theta, F))
    return scaling(P, A2, lam)


# -- identity regressions -------------------------------------------------------

@dataclass
class IdentityReport:
    suite: str
    results: list

    @property
    def ok(self):
        return all(r[1] for r in self.results)

    def failures(self):
        return [r[0] for r in self.results if not r[1]]


def identity_regressions(A, suite, n=None, params=None):
    """Evaluate the identities file ``suite`` (e.g. ``e7.ids``) in ``A``."""
    n = n or (A.quiver.dynkin.rank if A.quiver.dynkin else None)
    text = dsl.render(suite if suite.endswith(".ids") else suite + ".ids", n=n, m=(n or 0) // 2)
    out = []
    for label, diff, _ in dsl.parse_identities(text, A.quiver, A.field, params):
        out.append((label, not A.nf(diff)))
    return IdentityReport(suite, out)
