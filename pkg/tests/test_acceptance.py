"""Acceptance criteria 1-8.

Each criterion prints one line ``CRITERION k: PASS|FAIL ...``.  Run with
``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
Set ARTIFACT_HEAVY=1 to add the E8 blocks.
"""

import os
import random
import sys
import time

import pytest

from preproj.field import CharTwo, parse_field
from preproj.morphisms import (STATED_EXPONENT, catalog_pair, identity_regressions,
                               is_isomorphism, power_equation, scaling, verify_mutually_inverse)
from preproj.presentations import (L_algebra, canonical_star, get_case, preprojective,
                                   second_presentation)
from preproj.quiver import DynkinType
from preproj.quotient import build_quotient
from preproj.structure import (nakayama_permutation, same_presentation_mod_socle, symmetry_decide,
                               verify_certificate, verify_symmetric_witness)
from preproj.verify import engine_checks

HEAVY = os.environ.get("ARTIFACT_HEAVY", "") not in ("", "0")
FIELDS = ["gf2", "gf3", "rat"]
SCOPE = ["A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "L2", "L3"] + (["E8"] if HEAVY else [])
SEED = 2024


def _P(t, F):
    return build_quotient(preprojective(t, F))


def _S(t, F):
    return build_quotient(canonical_star(t, F))


def _thetas(case, n, F, k=3, fixed=True):
    idx = get_case(case).theta_indices(n)
    rng = random.Random(SEED + n)
    out = [{i: 0 for i in idx}, {i: 1 for i in idx}] if fixed else []
    return out + [{i: F.random(rng) for i in idx} for _ in range(k)]


def _lab(case, n):
    return case if case[0] == "E" else f"{case}{n}"


def _pair(phi, psi):
    for m in (phi, psi):
        ok, rel = m.is_well_defined()
        if not ok:
            return False, f"{m.name} does not kill {rel}"
    return verify_mutually_inverse(phi, psi)


class Tally:
    def __init__(self):
        self.fails = []
        self.skips = 0
        self.n = 0

    def check(self, ok, label):
        self.n += 1
        if not ok:
            self.fails.append(label)

    def line(self, k, title, extra=""):
        status = "PASS" if not self.fails else "FAIL"
        s = f"CRITERION {k}: {status} {title} ({self.n} checks"
        if self.skips:
            s += f", {self.skips} CharTwo skips"
        s += f"{', ' + extra if extra else ''})"
        if self.fails:
            s += " failing: " + "; ".join(self.fails[:6]) + (" ..." if len(self.fails) > 6 else "")
        return s


# -- criteria ------------------------------------------------------------------------

def criterion_1():
    t0 = time.time()
    T = Tally()
    rng = random.Random(SEED)
    for Fn in FIELDS:
        F = parse_field(Fn)
        for t in SCOPE:
            if t == "E8":
                continue
            makes = [preprojective] + ([canonical_star] if t[0] != "A" else [])
            for make in makes:
                pres = make(t, F)
                ok, why = engine_checks(pres, rng)
                T.check(ok, f"{pres.name}/{Fn}: {why}")
    dt = time.time() - t0
    T.check(dt < 60, f"runtime {dt:.0f}s >= 60s")
    return T.line(1, "engine soundness", f"{dt:.1f}s"), not T.fails


def criterion_2():
    T = Tally()
    suites = [("e6", "E6"), ("dodd", "D5"), ("dodd", "D7"), ("deven", "D4"), ("deven", "D6"),
              ("e7", "E7"), ("e7_swap", "E7"), ("l", "L2"), ("l", "L3"), ("l", "L4")]
    if HEAVY:
        suites += [("e8", "E8"), ("e8_swap", "E8")]
    for Fn in FIELDS:
        F = parse_field(Fn)
        for suite, t in suites:
            for A in (_P(t, F), _S(t, F)):
                rep = identity_regressions(A, suite)
                for label, ok in rep.results:
                    T.check(ok, f"{suite} {label} in {A.presentation.name}/{Fn}")
    return T.line(2, "identity regressions", "E8 included" if HEAVY else "E8 needs ARTIFACT_HEAVY=1"), \
        not T.fails


def criterion_3():
    T = Tally()
    ranks = [("A_odd", 3), ("A_odd", 5), ("D_even", 4), ("D_odd", 5), ("D_even", 6), ("E6", 6),
             ("E7", 7), ("L", 2), ("L", 3)] + ([("E8", 8)] if HEAVY else [])
    for Fn in FIELDS:
        F = parse_field(Fn)
        for case, n in ranks:
            for theta in _thetas(case, n, F):
                ok, why = _pair(*catalog_pair(case, n, theta, F))
                T.check(ok, f"{_lab(case, n)} {theta}/{Fn}: {why}")
        for case, n in [("DevenCharNot2", 4), ("DevenCharNot2", 6), ("E7CharNot2", 7)] + (
                [("E8CharNot2", 8)] if HEAVY else []):
            try:
                phi, psi = catalog_pair(case, n, None, F)
            except CharTwo:
                T.skips += 1
                continue
            ok, why = _pair(phi, psi)
            T.check(ok, f"{case} n={n}/{Fn}: {why}")
    return T.line(3, "morphism catalog"), not T.fails


def criterion_4():
    t0 = time.time()
    T = Tally()
    types = ["D4", "D6", "E7", "L2", "L3"] + (["E8"] if HEAVY else [])
    for t in types:
        ty = DynkinType.parse(t)
        for Fn in ("gf3", "rat"):
            F = parse_field(Fn)
            case = {"D": "DevenCharNot2", "E": f"E{ty.rank}CharNot2", "L": "LnCharNot2"}[ty.family]
            # sign-corrected E8 pair; the catalog maps themselves are judged in criterion 3
            phi, psi = catalog_pair(case, ty.rank, None, F, variant="signed" if ty.rank == 8 else "")
            if psi is None:
                ok, why = is_isomorphism(phi, _P(t, F))
            else:
                ok, why = _pair(phi, psi)
            T.check(ok, f"P({t}) ~ P*({t}) over {Fn}: {why}")
        F = parse_field("gf2")
        if ty.family == "L":
            n = ty.rank
            same = (_P(t, F).ract == build_quotient(L_algebra(n, n, F)).ract
                    and _S(t, F).ract == build_quotient(L_algebra(n, n - 1, F)).ract)
            T.check(same, f"{t} over gf2: not identified with L_n^(n), L_n^(n-1)")
        else:
            kinds = (symmetry_decide(_P(t, F)).kind, symmetry_decide(_S(t, F)).kind)
            T.check(kinds == ("Symmetric", "NotSymmetric"), f"{t} over gf2: {kinds}")
    dt = time.time() - t0
    T.check(dt < 300, f"runtime {dt:.0f}s >= 300s")
    return T.line(4, "char 2 dichotomy", f"{dt:.1f}s"), not T.fails


def criterion_5():
    T = Tally()
    F2, F3 = parse_field("gf2"), parse_field("gf3")
    rows = [(_P(t, F2), "Symmetric") for t in ("D4", "D6", "E7")]
    rows += [(A, "Symmetric") for t in ("L2", "L3") for A in (_P(t, F2), _S(t, F2))]
    rows += [(_P(t, F3), "NotSymmetric") for t in ("D4", "D6", "E7")]
    rows += [(_S(t, F2), "NotSymmetric") for t in ("D4", "D6", "E7")]
    for A, expected in rows:
        v = symmetry_decide(A)
        label = f"{A.presentation.name}/{A.field}"
        T.check(v.kind != "Unknown", f"{label}: Unknown within budget")
        T.check(v.kind == expected, f"{label}: {v.kind}, expected {expected}")
        if v.kind == "Symmetric":
            T.check(verify_symmetric_witness(A, v.witness), f"{label}: witness fails")
        elif v.kind == "NotSymmetric" and A.field.characteristic == 2:
            T.check(v.certificate is not None and verify_certificate(A, v.certificate),
                    f"{label}: no socle-in-commutator certificate")
    return T.line(5, "symmetry matrix"), not T.fails


def criterion_6():
    T = Tally()
    F2 = parse_field("gf2")
    for t in ("D4", "D6", "E7", "L2", "L3"):
        nu = nakayama_permutation(_S(t, F2))
        T.check(all(k == v for k, v in nu.items()), f"P*({t}): nu = {nu}")
    for Fn in FIELDS:
        for t in ("A2", "A4"):
            n = int(t[1:])
            nu = nakayama_permutation(_P(t, parse_field(Fn)))
            T.check(all(nu[i] == n - 1 - i for i in range(n)), f"P({t})/{Fn}: nu = {nu}")
    return T.line(6, "weak symmetry"), not T.fails


def criterion_7():
    T = Tally()
    F2 = parse_field("gf2")
    for t in SCOPE:
        if t[0] == "A":
            continue
        T.check(same_presentation_mod_socle(_P(t, F2), _S(t, F2)), f"{t}")
    return T.line(7, "socle equivalence"), not T.fails


def _scaling_pair(case, n, F, lam, theta):
    star = canonical_star(DynkinType(get_case(case).family, n), F)
    second = second_presentation(case, n, theta, F)
    f = scaling(star, build_quotient(second), lam)
    g = scaling(second, build_quotient(star), F.inv(F(lam)))
    return _pair(f, g)


def criterion_8():
    T = Tally()
    cases = [("D_even", 4), ("D_even", 6), ("L", 2), ("L", 3), ("E7", 7)] + ([("E8", 8)] if HEAVY else [])
    for Fn in FIELDS:
        F = parse_field(Fn)
        for case, n in cases:
            for k, theta in enumerate(_thetas(case, n, F, fixed=False)):
                ok, why = _pair(*catalog_pair(case, n, theta, F))
                T.check(ok, f"{_lab(case, n)} collapse {theta}/{Fn}: {why}")
                lam = F.random(random.Random(SEED + 31 * k + n), nonzero=True)
                name = get_case(case).name
                if name in STATED_EXPONENT:
                    # the stated equation: lambda^k = theta
                    e, c = STATED_EXPONENT[name](n), 1
                else:
                    e, c = power_equation(case, n)
                t = F.mul(F(c), F.pow(F(lam), e))
                ok, why = _scaling_pair(case, n, F, lam, t)
                T.check(ok, f"{_lab(case, n)} P* ~ A''({t}) by lambda={lam}, exponent {e}/{Fn}: {why or 'not well defined'}")
    return T.line(8, "theta collapse and scaling"), not T.fails


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k, capsys):
    line, ok = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    bad = 0
    for fn in CRITERIA:
        line, ok = fn()
        print(line, flush=True)
        bad += not ok
    sys.exit(1 if bad else 0)
