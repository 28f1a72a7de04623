"""Structural invariants of a QuotientAlgebra.

Vectors are sparse coordinate dicts over ``A.basis``.  Because every ideal
handled here is admissible and normal forms only move towards higher degree,
rad^k(A) is the span of the basis words of length >= k.
"""

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .freealg import FreeElem
from .quotient import build_quotient


class NotQF(ValueError):
    pass


class QuiverMismatch(ValueError):
    pass


# -- sparse exact elimination ---------------------------------------------------

def _axpy(F, out, c, vec):
    for j, d in vec.items():
        s = F.add(out.get(j, 0), F.mul(c, d))
        if s == 0:
            out.pop(j, None)
        else:
            out[j] = s
    return out


class Echelon:
    """Rows keyed by pivot; each row's pivot is its smallest key and has
    coefficient 1.  ``track`` keeps the combination of inputs behind each
    row, which is what kernels need."""

    def __init__(self, field, track=False):
        self.F = field
        self.rows = {}
        self.track = track
        self.combo = {}

    def reduce(self, vec, combo=None):
        F = self.F
        v = dict(vec)
        cb = dict(combo or {})
        while True:
            ks = [k for k in v if k in self.rows]
            if not ks:
                return v, cb
            k = min(ks)
            c = F.neg(v[k])
            _axpy(F, v, c, self.rows[k])
            if self.track:
                _axpy(F, cb, c, self.combo[k])

    def add(self, vec, combo=None):
        """Insert; returns the reduced remainder (empty if dependent) and the
        tracked combination."""
        v, cb = self.reduce(vec, combo)
        if v:
            F = self.F
            p = min(v)
            inv = F.inv(v[p])
            self.rows[p] = {k: F.mul(inv, c) for k, c in v.items()}
            if self.track:
                self.combo[p] = {k: F.mul(inv, c) for k, c in cb.items()}
        return v, cb

    def contains(self, vec):
        return not self.reduce(vec)[0]

    def __len__(self):
        return len(self.rows)

    def fully_reduced(self):
        F = self.F
        out = {}
        for p in sorted(self.rows, reverse=True):
            v = dict(self.rows[p])
            for k in sorted(k for k in v if k != p and k in out):
                if k in v:
                    _axpy(F, v, F.neg(v[k]), out[k])
            out[p] = v
        return out


def kernel(field, domain, image):
    """Basis of {sum x_k e_k : sum x_k image(k) = 0} for k in ``domain``."""
    F = field
    ech = Echelon(F, track=True)
    out = []
    for k in domain:
        v, cb = ech.add(image(k), {k: F.one()})
        if not v:
            out.append(cb)
    return out


# -- blocks, radical, Cartan data ------------------------------------------------

def blocks(A):
    """{(i, j): [basis indices of e_i A e_j]} for paths from i to j."""
    out = {}
    for k, (s, t) in enumerate(zip(A.src, A.tgt)):
        out.setdefault((s, t), []).append(k)
    return out


def cartan(A):
    return A.dims_by_pair()


def _check_admissible(A):
    for v in A.quiver.vertices:
        if A.vertex_index(v) is None or A.deg[A.vertex_index(v)] != 0:
            raise ValueError(f"e{v} is not a basis element; the radical shortcut needs an admissible ideal")


def radical_series(A):
    """[dim rad^0, dim rad^1, ...] down to 0."""
    _check_admissible(A)
    top = max(A.deg)
    return [sum(1 for d in A.deg if d >= k) for k in range(top + 2)]


def loewy_length(A):
    return max(A.deg) + 1


def _arrow_vecs(A):
    q = A.quiver
    return {a.id: A.nf(FreeElem.arrow(q, A.field, a.name)) for a in q.arrows}


@dataclass
class Socle:
    """Right socle soc(A_A), left socle soc(_AA) and their intersection,
    each as {(i, j): [vectors]}."""
    right: dict
    left: dict
    vertices: list
    field: object

    @property
    def equal(self):
        return all(len(self.right.get(k, [])) == len(self.left.get(k, [])) for k in
                   set(self.right) | set(self.left)) and self._same_spans()

    def _same_spans(self):
        for key in set(self.right) | set(self.left):
            r, l = self.right.get(key, []), self.left.get(key, [])
            if not r:
                continue
            F = self.field
            ech = Echelon(F)
            for v in r:
                ech.add(v)
            if not all(ech.contains(v) for v in l):
                return False
        return True

    def dims(self, side="right"):
        src = self.right if side == "right" else self.left
        pos = {v: k for k, v in enumerate(self.vertices)}
        m = [[0] * len(pos) for _ in pos]
        for (i, j), vs in src.items():
            m[pos[i]][pos[j]] = len(vs)
        return m

    def vectors(self, side="right"):
        src = self.right if side == "right" else self.left
        return [v for key in sorted(src) for v in src[key]]


def socle(A):
    """Right and left annihilators of the radical, blockwise."""
    F = A.field
    arrows = A.quiver.arrows
    avec = _arrow_vecs(A)
    right, left = {}, {}
    for (i, j), idx in blocks(A).items():
        outs = [a.id for a in arrows if a.source == j]
        ins = [a.id for a in arrows if a.target == i]

        def rimg(k):
            out = {}
            for a in outs:
                for m, c in A.act(A.unit(k), a).items():
                    out[(a, m)] = c
            return out

        def limg(k):
            out = {}
            for a in ins:
                for m, c in A.act_path(avec[a], A.basis[k]).items():
                    out[(a, m)] = c
            return out

        r = kernel(F, idx, rimg)
        l = kernel(F, idx, limg)
        if r:
            right[(i, j)] = r
        if l:
            left[(i, j)] = l
    return Socle(right, left, list(A.quiver.vertices), F)


def socle_dims(A):
    return socle(A).dims()


def nakayama_permutation(A, soc=None):
    """{i: nu(i)} with soc(e_i A) simple at nu(i); NotQF otherwise."""
    soc = soc or socle(A)
    vs = list(A.quiver.vertices)
    nu = {}
    for r, row in zip(vs, soc.dims()):
        hits = [(v, d) for v, d in zip(vs, row) if d]
        if len(hits) != 1 or hits[0][1] != 1:
            raise NotQF(f"soc(e{r}A) has dimensions {row}, not simple")
        nu[r] = hits[0][0]
    if sorted(nu.values()) != sorted(vs):
        raise NotQF(f"socle map {nu} is not a permutation")
    return nu


def is_self_injective(A):
    try:
        nakayama_permutation(A)
    except NotQF:
        return False
    return True


def is_weakly_symmetric(A):
    try:
        nu = nakayama_permutation(A)
    except NotQF:
        return False
    return all(k == v for k, v in nu.items())


# -- commutators and symmetry ---------------------------------------------------------

def commutator_subspace(A):
    """Echelon basis of [A, A].

    Off-diagonal basis words b (from s to t, s != t) equal [e_s, b], so only
    products inside diagonal blocks need computing."""
    F = A.field
    ech = Echelon(F)
    bl = blocks(A)
    for (s, t), idx in bl.items():
        if s != t:
            for k in idx:
                ech.add({k: F.one()})
    for (s, t), idx in bl.items():
        back = bl.get((t, s), [])
        if s > t:
            continue
        for i in idx:
            for j in back:
                v = dict(A.product(i, j))
                _axpy(F, v, F.neg(F.one()), A.product(j, i))
                if v:
                    ech.add(v)
    return ech


def _diag(A):
    return [k for k in range(len(A.basis)) if A.src[k] == A.tgt[k]]


def _apply(F, psi, vec):
    out = 0
    for k, c in vec.items():
        if k in psi:
            out = F.add(out, F.mul(psi[k], c))
    return out


def _hom_key(A, vec):
    pairs = {(A.src[k], A.tgt[k]) for k in vec}
    return pairs.pop() if len(pairs) == 1 else None


@dataclass
class SymmetryVerdict:
    kind: str                       # "Symmetric" | "NotSymmetric" | "Unknown"
    witness: dict = None            # functional coordinates
    certificate: dict = None        # socle element inside [A, A]
    reason: str = ""
    budget: dict = dc_field(default_factory=dict)

    def to_json(self, A=None):
        out = {"kind": self.kind, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = {str(k): str(v) for k, v in sorted(self.witness.items())}
        if self.certificate is not None:
            out["certificate"] = A.format_vec(self.certificate) if A else {
                str(k): str(v) for k, v in self.certificate.items()}
        if self.budget:
            out["budget"] = self.budget
        return out


def verify_symmetric_witness(A, psi):
    """Trace property on every basis pair and a nonsingular Gram matrix,
    both recomputed from scratch."""
    F = A.field
    n = len(A.basis)
    for i in range(n):
        for j in range(i, n):
            if _apply(F, psi, A.product(i, j)) != _apply(F, psi, A.product(j, i)):
                return False
    # psi(b_i b_j) can only be nonzero for b_i in e_s A e_t, b_j in e_t A e_s,
    # so the Gram matrix is a permuted block matrix
    bl = blocks(A)
    for (s, t), idx in bl.items():
        back = bl.get((t, s), [])
        if len(back) != len(idx):
            return False
        rows = [{c: _apply(F, psi, A.product(i, j)) for c, j in enumerate(back)} for i in idx]
        ech = Echelon(F)
        for r in rows:
            ech.add({k: v for k, v in r.items() if v != 0})
        if len(ech) != len(idx):
            return False
    return True


def verify_certificate(A, s, comm=None, soc=None):
    """s != 0, homogeneous, in the two-sided socle and inside [A, A]."""
    if not s or _hom_key(A, s) is None:
        return False
    F = A.field
    comm = comm or commutator_subspace(A)
    if not comm.contains(s):
        return False
    avec = _arrow_vecs(A)
    for a in A.quiver.arrows:
        if A.mul(s, avec[a.id]) or A.mul(avec[a.id], s):
            return False
    return True


def _socle_generators(A, soc, nu):
    return {i: soc.right[(i, nu[i])][0] for i in A.quiver.vertices}


def symmetry_decide(A, budget_bits=24, samples=10_000, seed=0):
    """Symmetric{witness}, NotSymmetric{certificate} or Unknown.

    For a self-injective A with socle generators s_i of e_i A, a trace form
    psi is nondegenerate iff psi(s_i) != 0 for every i; the search works on
    those linear conditions and the result is re-verified in full."""
    F = A.field
    soc = socle(A)
    try:
        nu = nakayama_permutation(A, soc)
    except NotQF as e:
        return SymmetryVerdict("NotSymmetric", reason=f"not self-injective: {e}")
    gens = _socle_generators(A, soc, nu)
    comm = commutator_subspace(A)

    # step 1: a socle generator inside [A, A] kills every trace form on it
    for i in A.quiver.vertices:
        if comm.contains(gens[i]):
            why = "socle element in [A,A]" if nu[i] == i else \
                f"not weakly symmetric (nu({i}) = {nu[i]}); off-diagonal socle element"
            return SymmetryVerdict("NotSymmetric", certificate=gens[i], reason=why)

    # step 2: trace forms vanish off the diagonal and on [A, A]; parameterize
    # them by the non-pivot diagonal coordinates
    diag = _diag(A)
    red = comm.fully_reduced()
    free = [k for k in diag if k not in red]
    piv = [p for p in red if A.src[p] == A.tgt[p]]

    def functional(x):
        psi = {q: c for q, c in zip(free, x) if c != 0}
        for p in piv:
            val = 0
            for q, c in red[p].items():
                if q != p and q in psi:
                    val = F.sub(val, F.mul(c, psi[q]))
            if val != 0:
                psi[p] = val
        return psi

    # psi(s_i) as a linear form in x
    forms = []
    for i in A.quiver.vertices:
        s = gens[i]
        coeff = [0] * len(free)
        for t, q in enumerate(free):
            unit = [0] * len(free)
            unit[t] = F.one()
            coeff[t] = _apply(F, functional(unit), s)
        forms.append(coeff)

    def accept(psi):
        return verify_symmetric_witness(A, psi)

    bud = {"budget_bits": budget_bits, "samples": samples, "seed": seed, "free": len(free)}

    if F.characteristic == 2:
        # greedy: one socle coordinate per vertex
        lead = {}
        for i in A.quiver.vertices:
            lead[max(gens[i], key=lambda k: (A.deg[k], k))] = F.one()
        if all(_apply(F, lead, v) == 0 for v in comm.rows.values()) and accept(lead):
            return SymmetryVerdict("Symmetric", witness=lead, reason="greedy socle form", budget=bud)
        # all forms must equal 1: an affine system, solved exactly
        x, bad = _solve_affine_gf2(F, forms, len(free))
        if x is None:
            cert = {}
            for i in bad:
                _axpy(F, cert, F.one(), gens[i])
            return SymmetryVerdict("NotSymmetric", certificate=cert, budget=bud,
                                   reason="sum of socle generators at vertices "
                                          f"{sorted(bad)} lies in [A,A]")
        psi = functional(x)
        if accept(psi):
            return SymmetryVerdict("Symmetric", witness=psi, reason="affine solve", budget=bud)
        return SymmetryVerdict("Unknown", reason="solution failed verification", budget=bud)

    def good(x):
        return all(_apply(F, dict(enumerate(f)), dict(enumerate(x))) != 0 for f in forms)

    p = F.characteristic
    if p and p ** len(free) <= 2 ** budget_bits:
        cands = itertools.product(range(p), repeat=len(free))
        how = "exhaustive"
    else:
        rng = random.Random(seed)
        cands = ([F.random(rng) for _ in free] for _ in range(samples))
        how = "sampled"
    for x in cands:
        x = [F(c) for c in x]
        if good(x):
            psi = functional(x)
            if accept(psi):
                return SymmetryVerdict("Symmetric", witness=psi, reason=how, budget=bud)
    if how == "exhaustive":
        return SymmetryVerdict("NotSymmetric", reason="no nondegenerate trace form (exhaustive)",
                               budget=bud)
    return SymmetryVerdict("Unknown", reason="sampling budget exhausted", budget=bud)


def _solve_affine_gf2(F, forms, nvars):
    """x with f(x) = 1 for every form, or (None, forms summing to 0 = 1)."""
    ech = Echelon(F, track=True)
    const = {}
    one = F.one()
    for i, f in enumerate(forms):
        v = {t: c for t, c in enumerate(f) if c != 0}
        v[nvars] = one          # augmented column
        r, cb = ech.add(v, {i: one})
        if r and min(r) == nvars:
            return None, [k for k, c in cb.items() if c != 0]
    red = ech.fully_reduced()
    x = [0] * nvars
    for p, row in red.items():
        if p < nvars:
            x[p] = row.get(nvars, 0)
    return x, None


# -- socle quotients ----------------------------------------------------------------

def socle_quotient(A, soc=None):
    soc = soc or socle(A)
    extra = []
    two = _two_sided(A, soc)
    for v in two:
        extra.append(A.element(v))
    p = A.presentation.with_relations(extra, name=f"{A.presentation.name}/soc", strict=False)
    return build_quotient(p)


def _two_sided(A, soc):
    out = []
    F = A.field
    for key, r in soc.right.items():
        l = soc.left.get(key, [])
        if not l:
            continue
        # intersection of spans: kernel of [r | -l]
        def img(k):
            v = r[k] if k < len(r) else l[k - len(r)]
            return v if k < len(r) else {j: F.neg(c) for j, c in v.items()}
        for cb in kernel(F, range(len(r) + len(l)), img):
            vec = {}
            for k, c in cb.items():
                if k < len(r):
                    _axpy(F, vec, c, r[k])
            if vec:
                out.append(vec)
    return out


def same_presentation_mod_socle(A, B):
    """A/soc and B/soc have the same normal-form basis and the same
    structure constants under the identity correspondence."""
    if A.quiver != B.quiver:
        raise QuiverMismatch("algebras over different quivers")
    if A.field != B.field:
        raise QuiverMismatch("algebras over different fields")
    QA, QB = socle_quotient(A), socle_quotient(B)
    return QA.basis == QB.basis and QA.ract == QB.ract


# -- center, fingerprint, report ------------------------------------------------------

def center_dimension(A):
    F = A.field
    avec = _arrow_vecs(A)
    arrows = A.quiver.arrows

    def img(k):
        out = {}
        for a in arrows:
            v = dict(A.act(A.unit(k), a.id))
            _axpy(F, v, F.neg(F.one()), A.act_path(avec[a.id], A.basis[k]))
            for m, c in v.items():
                out[(a.id, m)] = c
        return out

    return len(kernel(F, _diag(A), img))


def _canonical_cartan(C):
    n = len(C)
    key = lambda i: (C[i][i], sorted(C[i]), sorted(r[i] for r in C))
    order = sorted(range(n), key=key)
    groups = [list(g) for _, g in itertools.groupby(order, key=key)]
    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        p = [v for g in perms for v in g]
        m = tuple(tuple(C[i][j] for j in p) for i in p)
        if best is None or m < best:
            best = m
    return best


def _cycle_type(nu):
    seen, out = set(), []
    for v in nu:
        if v in seen:
            continue
        k, w = 0, v
        while w not in seen:
            seen.add(w)
            w = nu[w]
            k += 1
        out.append(k)
    return tuple(sorted(out))


def invariant_fingerprint(A, verdict=None, **kw):
    try:
        nu = _cycle_type(nakayama_permutation(A))
    except NotQF:
        nu = None
    verdict = verdict or symmetry_decide(A, **kw)
    hs = A.hilbert_series_by_degree()
    return {
        "dimension": len(A.basis),
        "degrees": list(hs),
        "cartan": [list(r) for r in _canonical_cartan(cartan(A))],
        "nakayama_cycles": list(nu) if nu else None,
        "symmetry": verdict.kind,
        "center": center_dimension(A),
    }


@dataclass
class InvariantReport:
    dimension: int
    cartan: list
    loewy_length: int
    socle_dims: list
    socle_sides_agree: bool
    nakayama: dict
    self_injective: bool
    weakly_symmetric: bool
    symmetry: SymmetryVerdict

    def to_json(self, A=None):
        return {
            "dimension": self.dimension,
            "cartan": self.cartan,
            "loewy_length": self.loewy_length,
            "socle_dims": self.socle_dims,
            "socle_sides_agree": self.socle_sides_agree,
            "nakayama": None if self.nakayama is None else {str(k): v for k, v in self.nakayama.items()},
            "flags": {"self_injective": self.self_injective, "weakly_symmetric": self.weakly_symmetric},
            "symmetry": self.symmetry.to_json(A),
        }


def invariant_report(A, **kw):
    soc = socle(A)
    try:
        nu = nakayama_permutation(A, soc)
    except NotQF:
        nu = None
    return InvariantReport(
        dimension=len(A.basis),
        cartan=cartan(A),
        loewy_length=loewy_length(A),
        socle_dims=soc.dims(),
        socle_sides_agree=soc.equal,
        nakayama=nu,
        self_injective=nu is not None,
        weakly_symmetric=nu is not None and all(k == v for k, v in nu.items()),
        symmetry=symmetry_decide(A, **kw),
    )
