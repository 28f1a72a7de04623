"""Command line entry point.

Exit codes: 0 pass, 1 fail, 2 unknown, 3 usage or input error.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import jinja2

from . import __version__, dsl
from .field import CharTwo, parse_field
from .freealg import DSLSyntaxError, parse_poly
from .morphisms import (
    AlgebraMorphism,
    CATALOG,
    catalog_pair,
    is_isomorphism,
    star_scaling,
    verify_mutually_inverse,
)
from .presentations import (
    CaseMismatch,
    L_algebra,
    NoCanonicalStar,
    RangeError,
    canonical_star,
    deformed,
    get_case,
    preprojective,
    second_presentation,
    socle_deformed_generic,
)
from .quiver import DynkinType, InvalidRank
from .quotient import CapExceeded, NotAdmissible, build_quotient
from .structure import invariant_fingerprint, invariant_report
from .verify import SCHEMA, verify_paper

EXIT = {"pass": 0, "fail": 1, "unknown": 2, "usage": 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT["usage"])


def _theta(values, F):
    """--theta 1 | --theta 1,0,2 | --theta 0=1 --theta 3=2 | --theta t=1."""
    if not values:
        return None
    named = {}
    for v in values:
        for part in v.split(","):
            part = part.strip()
            if "=" in part:
                k, x = part.split("=", 1)
                named[k.strip()] = F(x.strip())
            else:
                named.setdefault(None, []).append(F(part))
    bare = named.pop(None, None)
    if bare is not None and named:
        raise UsageError("mix of indexed and positional --theta values")
    if bare is not None:
        return bare[0] if len(bare) == 1 else bare
    return {(int(k[1:]) if k.startswith("t") and k[1:].isdigit() else int(k) if k.isdigit() else k): x
            for k, x in named.items()}


def _read(path, args):
    # files may be jinja templates over the rank n
    text = Path(path).read_text()
    n = getattr(args, "rank", None)
    return dsl.render_text(text, **({"n": n, "m": n // 2} if n is not None else {}))


def _file_params(args, F):
    params = _theta(args.theta, F)
    if params is not None and not isinstance(params, dict):
        raise UsageError("presentation files take named --theta values (t0=1)")
    return {(f"t{k}" if isinstance(k, int) else k): v for k, v in (params or {}).items()}


def _dynkin(args):
    if not args.type or args.rank is None:
        raise UsageError("--type and --rank are required")
    return DynkinType(args.type, args.rank)


def _presentation(args, F):
    if args.file:
        return dsl.parse_presentation(_read(args.file, args), F, _file_params(args, F))
    if args.case:
        c = get_case(args.case)
        th = _theta(args.theta, F)
        if args.second:
            return second_presentation(c, args.rank, th if th is not None else 0, F)
        return socle_deformed_generic(c, args.rank, th, F)
    t = _dynkin(args)
    if args.star:
        return canonical_star(t, F)
    if args.deform:
        return deformed(t, parse_poly(args.deform, F), F)
    if args.r is not None:
        if t.family != "L":
            raise UsageError("--r needs --type L")
        return L_algebra(t.rank, args.r, F)
    return preprojective(t, F)


def _header(pres):
    return {"schema": SCHEMA, "version": __version__,
            "presentation": {"name": pres.name, "digest": pres.digest(), "field": str(pres.field)}}


def cmd_build(args, F):
    pres = _presentation(args, F)
    A = build_quotient(pres)
    out = _header(pres)
    out.update({"dimension": len(A.basis), "degrees": list(A.hilbert_series_by_degree()),
                "cartan": A.dims_by_pair(), "cap_used": A.cap_used})
    if args.basis:
        out["basis"] = [A.format_vec({k: 1}) for k in range(len(A.basis))]
    if args.text:
        out["text"] = pres.text()
    return out, "pass"


def cmd_info(args, F):
    pres = _presentation(args, F)
    A = build_quotient(pres)
    rep = invariant_report(A, budget_bits=args.budget_bits, samples=args.samples, seed=args.seed)
    out = _header(pres)
    out.update(rep.to_json(A))
    status = "unknown" if rep.symmetry.kind == "Unknown" else "pass"
    return out, status


def cmd_fingerprint(args, F):
    pres = _presentation(args, F)
    A = build_quotient(pres)
    out = _header(pres)
    out["fingerprint"] = invariant_fingerprint(A, budget_bits=args.budget_bits, samples=args.samples, seed=args.seed)
    return out, "unknown" if out["fingerprint"]["symmetry"] == "Unknown" else "pass"


def _map_report(m):
    ok, rel = m.is_well_defined()
    return {"name": m.name, "source": m.source.name, "target": m.target.presentation.name,
            "well_defined": ok, "failing_relation": None if ok else str(rel)}, ok


def cmd_check_iso(args, F):
    out = {"schema": SCHEMA, "version": __version__, "field": str(F)}
    if args.mor:
        if not (args.src and args.tgt):
            raise UsageError("--mor needs --src and --tgt presentation files")
        params = _file_params(args, F)
        src = dsl.parse_presentation(_read(args.src, args), F, params)
        tgt = dsl.parse_presentation(_read(args.tgt, args), F, params)
        ends = {"src": (src, build_quotient(src)), "tgt": (tgt, build_quotient(tgt))}
        maps = []
        for name, (s, t, block) in dsl.parse_morphism_blocks(_read(args.mor, args)).items():
            if s not in ends or t not in ends:
                raise UsageError(f"morphism {name}: endpoints must be 'src' or 'tgt'")
            vmap, imgs, _ = dsl.morphism_images(block, ends[s][0].quiver, ends[t][1].quiver, F, params)
            maps.append(AlgebraMorphism(ends[s][0], ends[t][1], imgs, vmap, name=name))
        rows = [_map_report(m) for m in maps]
        out["maps"] = [r for r, _ in rows]
        ok = all(o for _, o in rows)
        if ok and len(maps) == 2:
            inv, why = verify_mutually_inverse(*maps)
            out["mutually_inverse"] = inv
            ok = inv
        out["status"] = "pass" if ok else "fail"
        return out, out["status"]
    if not args.case:
        raise UsageError("check-iso needs --case or --mor")
    if args.lam is not None:
        th = _theta(args.theta, F)
        if th is None or isinstance(th, (dict, list)):
            raise UsageError("--lam needs a single --theta value")
        try:
            m = star_scaling(args.case, args.rank, F(args.lam), th, F)
        except ValueError as e:
            out.update({"status": "fail", "reason": str(e)})
            return out, "fail"
        r, ok = _map_report(m)
        out["maps"] = [r]
        out["status"] = "pass" if ok else "fail"
        return out, out["status"]
    case = args.case
    if case in CATALOG:
        case = CATALOG[case][0]
    phi, psi = catalog_pair(case, args.rank, _theta(args.theta, F), F, variant=args.variant or "")
    rows = [_map_report(m) for m in (phi, psi) if m is not None]
    out["maps"] = [r for r, _ in rows]
    ok = all(o for _, o in rows)
    if ok and psi is not None:
        inv, why = verify_mutually_inverse(phi, psi)
        out["mutually_inverse"] = inv
        if why:
            out["reason"] = why
        ok = inv
    elif ok:
        src = build_quotient(phi.source)
        iso, why = is_isomorphism(phi, src)
        out["isomorphism"] = iso
        ok = iso
    out["status"] = "pass" if ok else "fail"
    return out, out["status"]


def cmd_verify_paper(args, F):
    fields = tuple(args.fields.split(",")) if args.fields else ("gf2", "gf3", "rat")

    def progress(r):
        if args.verbose or r.status not in ("pass", "skip"):
            print(f"[{r.status}] {r.claim}: {r.label} {r.detail}", file=sys.stderr)

    t0 = time.time()
    rep = verify_paper(heavy=args.heavy, fields=fields, seed=args.seed, budget_bits=args.budget_bits,
                       workers=args.jobs, progress=progress)
    out = rep.to_json(timings=not args.no_timings)
    out["version"] = __version__
    out["scope"] = {"heavy": args.heavy, "fields": list(fields), "seed": args.seed,
                    "budget_bits": args.budget_bits}
    if not args.no_timings:
        out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        out["seconds"] = round(time.time() - t0, 1)
    return out, rep.worst


def _common(p, algebra=True):
    p.add_argument("--field", default="gf2", help="gf2, gf3, gfP:p, GF(p), rat or Q")
    p.add_argument("--theta", action="append", help="theta values: 1 | 1,0,2 | i=v (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-bits", type=int, default=24)
    p.add_argument("--samples", type=int, default=10_000, help="random trace forms tried when enumeration is over budget")
    p.add_argument("--json", action="store_true", help="compact JSON on one line")
    p.add_argument("--out", help="write the report here instead of stdout")
    if algebra:
        p.add_argument("--type", help="A, D, E or L")
        p.add_argument("--rank", type=int)
        p.add_argument("--star", action="store_true", help="the canonical socle deformation P*")
        p.add_argument("--deform", help="P^f with f a polynomial in x, y")
        p.add_argument("--r", type=int, help="L_n^(r)")
        p.add_argument("--case", help="theta family: Aodd, E6, Dodd, Deven, L, E7, E8")
        p.add_argument("--second", action="store_true", help="the one-parameter form A''")
        p.add_argument("--file", help="a .qpa presentation file")


def build_parser():
    p = _Parser(prog="artifact", description="Preprojective algebras of generalized Dynkin type.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    b = sub.add_parser("build", help="build a quotient and report its size")
    _common(b)
    b.add_argument("--basis", action="store_true")
    b.add_argument("--text", action="store_true", help="include the presentation as DSL text")
    i = sub.add_parser("info", help="structural invariants")
    _common(i)
    f = sub.add_parser("fingerprint", help="isomorphism-invariant fingerprint")
    _common(f)
    c = sub.add_parser("check-iso", help="check catalog maps, scalings or .mor files")
    _common(c, algebra=False)
    c.add_argument("--case", help="family (Aodd, E7, ...) or id (E7Phi, DevenCharNot2, ...)")
    c.add_argument("--rank", type=int)
    c.add_argument("--variant", help="e.g. 'signed' for E8CharNot2")
    c.add_argument("--lam", help="scaling P* -> A''(theta) by lambda")
    c.add_argument("--mor", help=".mor file with endpoints 'src' and 'tgt'")
    c.add_argument("--src")
    c.add_argument("--tgt")
    v = sub.add_parser("verify-paper", help="run the reproduction suite")
    _common(v, algebra=False)
    v.add_argument("--heavy", action="store_true", help="include E8")
    v.add_argument("--fields", help="comma separated, default gf2,gf3,rat")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--verbose", action="store_true")
    v.add_argument("--no-timings", action="store_true", help="omit timings and timestamp")
    return p


COMMANDS = {"build": cmd_build, "info": cmd_info, "fingerprint": cmd_fingerprint,
            "check-iso": cmd_check_iso, "verify-paper": cmd_verify_paper}


def _emit(obj, args):
    text = json.dumps(obj, sort_keys=True, default=str,
                      indent=None if args.json else 2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.cmd:
        parser.print_help(sys.stderr)
        return EXIT["usage"]
    try:
        F = parse_field(args.field)
        out, status = COMMANDS[args.cmd](args, F)
    except DSLSyntaxError as e:
        _emit({"schema": SCHEMA, "status": "usage", "error": str(e), "line": e.line,
               "col": e.col}, args)
        return EXIT["usage"]
    except CharTwo as e:
        _emit({"schema": SCHEMA, "status": "usage", "error": f"unavailable in characteristic 2: {e}"}, args)
        return EXIT["usage"]
    except (UsageError, CaseMismatch, RangeError, InvalidRank, NoCanonicalStar, NotAdmissible,
            jinja2.TemplateError, ValueError, OSError) as e:
        _emit({"schema": SCHEMA, "status": "usage", "error": f"{type(e).__name__}: {e}"}, args)
        return EXIT["usage"]
    except CapExceeded as e:
        _emit({"schema": SCHEMA, "status": "unknown", "error": str(e)}, args)
        return EXIT["unknown"]
    _emit(out, args)
    return EXIT[status]


if __name__ == "__main__":
    sys.exit(main())
