"""Command line front end.

Exit codes: 0 success, 1 a verification came out false, 2 bad input
(including unmet preconditions such as non-compact support).
"""
import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import InputError, TameError
from .encoding import conic_stalk, probe_face, is_compactly_supported
from .linalg import Field
from .rational import to_fraction, format_fraction
from .resolutions import resolve_complex, pull_back, adjust_topology, verify_resolution, KINDS
from .serialize import load_bundle, dumps
from .stratify import conic_stratification, verify_stratification, clip_bounded, verify_clip, NONCOMPACT
from .errors import PreconditionError

COMMANDS = ("validate", "resolve", "stratify", "clip", "stalk", "check")


def _faces(arr, pairs):
    return [[arr.sign_string(i), arr.sign_string(j)] for i, j in pairs]


def _validation(b):
    arr = b.arrangement
    cx = b.complex.validate()
    enc = b.encoding.validate()
    return {"complex": cx, "encoding": _faces(arr, enc)}, not cx and not enc


def _resolve(b, kind, adjust):
    res = resolve_complex(b.complex, kind)
    ic = pull_back(res, b.encoding)
    if adjust:
        ic = adjust_topology(ic)
    return res, ic


def cmd_validate(b, args):
    checks, ok = _validation(b)
    return {"checks": checks}, ok


def cmd_resolve(b, args):
    kind = args.kind or b.options.get("kind", "upset")
    if kind not in KINDS:
        raise InputError(f"kind must be one of {KINDS}", "--kind")
    res, ic = _resolve(b, kind, args.adjust)
    sems = [args.semantics] if args.semantics else (["conic"] if args.adjust else ["alexandrov", "conic"])
    ver = {s: verify_resolution(ic, s).to_json() for s in sems}
    out = {
        "kind": kind,
        "adjusted": bool(args.adjust),
        "poset_resolution": res.to_json(),
        "indicator_complex": ic.to_json(),
        "summands": ic.n_summands,
        "length": res.length,
        "verification": ver,
    }
    return out, all(v["ok"] for v in ver.values())


def cmd_stratify(b, args):
    s = conic_stratification(b.pl)
    rep = verify_stratification(s)
    out = s.to_json()
    out["verification"] = rep.to_json()
    return out, rep.ok


def cmd_clip(b, args):
    if not is_compactly_supported(b.pl):
        raise PreconditionError(NONCOMPACT)
    _, ic = _resolve(b, "upset", True)
    c = clip_bounded(ic)
    rep = verify_clip(c)
    out = c.to_json()
    out["verification"] = rep.to_json()
    return out, rep.ok


def _parse_point(text, dim):
    if text is None:
        raise InputError("stalk needs --point", "--point")
    parts = [p for p in text.replace(" ", "").split(",") if p]
    pt = tuple(to_fraction(p, "--point") for p in parts)
    if len(pt) != dim:
        raise InputError(f"point has {len(pt)} coordinates, expected {dim}", "--point")
    return pt


def cmd_stalk(b, args):
    arr = b.arrangement
    pt = _parse_point(args.point, arr.dim)
    sem = args.semantics or b.options.get("semantics", "conic")
    face = arr.locate(pt)
    if sem == "conic":
        probe = probe_face(arr, b.cone, pt)
        st = conic_stalk(b.pl, pt)
    elif sem == "alexandrov":
        probe = face
        st = b.pl.at_face(face)
    else:
        raise InputError(f"unknown semantics {sem!r}", "--semantics")
    out = {
        "point": [format_fraction(v) for v in pt],
        "semantics": sem,
        "face": arr.sign_string(face),
        "probe_face": arr.sign_string(probe),
        "ranks": {str(k): v for k, v in sorted(st.dims.items())},
        "homology": {str(k): v for k, v in sorted(st.homology().items())},
    }
    return out, True


def _suite(b):
    """Named property checks, each a thunk returning (ok, detail)."""
    checks = {}

    def validate():
        c, ok = _validation(b)
        return ok, c

    checks["validate"] = validate

    def resolution(kind, adjust, sem):
        def run():
            _, ic = _resolve(b, kind, adjust)
            r = verify_resolution(ic, sem)
            return r.ok, r.failures[:5]
        return run

    for kind in KINDS:
        checks[f"resolution.{kind}.alexandrov"] = resolution(kind, False, "alexandrov")
        checks[f"resolution.{kind}.conic"] = resolution(kind, False, "conic")
        checks[f"resolution.{kind}.adjusted.conic"] = resolution(kind, True, "conic")

        def poset_level(kind=kind):
            res = resolve_complex(b.complex, kind)
            bad = res.verify()
            return not bad, bad[:5]

        checks[f"poset_resolution.{kind}"] = poset_level

    compact = is_compactly_supported(b.pl)

    def strat():
        if not compact:
            return True, "skipped: non-compact support"
        r = verify_stratification(conic_stratification(b.pl))
        return r.ok, r.failures[:5]

    def clip():
        if not compact:
            return True, "skipped: non-compact support"
        _, ic = _resolve(b, "upset", True)
        r = verify_clip(clip_bounded(ic))
        return r.ok, r.failures[:5]

    checks["stratification"] = strat
    checks["clip"] = clip
    return checks


def cmd_check(b, args):
    checks = _suite(b)
    names = sorted(checks)
    if args.parallel and args.parallel > 1:
        with ThreadPoolExecutor(max_workers=args.parallel) as ex:
            results = dict(zip(names, ex.map(lambda n: checks[n](), names)))
    else:
        results = {n: checks[n]() for n in names}
    props = {n: {"pass": bool(ok), "detail": detail} for n, (ok, detail) in results.items()}
    return {"properties": props}, all(p["pass"] for p in props.values())


HANDLERS = {
    "validate": cmd_validate,
    "resolve": cmd_resolve,
    "stratify": cmd_stratify,
    "clip": cmd_clip,
    "stalk": cmd_stalk,
    "check": cmd_check,
}


def build_parser():
    p = argparse.ArgumentParser(prog="tamepl", description="Resolutions and conic stratifications of tame PL complexes.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("bundle", help="problem bundle (JSON)")
        s.add_argument("--field", help="q or fp:<p>; overrides the bundle")
        s.add_argument("--semantics", choices=["alexandrov", "conic"])
        s.add_argument("--out", help="write the JSON report here instead of stdout")
        s.add_argument("--parallel", type=int, default=1, help="worker threads for verification")
        if name == "resolve":
            s.add_argument("--kind", choices=list(KINDS))
            s.add_argument("--adjust", action="store_true", help="open upsets / closed downsets")
        if name == "stalk":
            s.add_argument("--point", help="comma separated rationals, e.g. 1/2,0")
        if name == "check":
            s.add_argument("--report", help="also write the report to this path")
    return p


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        field = Field.parse(args.field) if args.field else None
        b = load_bundle(args.bundle, field)
        body, ok = HANDLERS[args.command](b, args)
    except InputError as e:
        err = {"command": args.command, "error": type(e).__name__, "message": str(e), "path": e.path}
        sys.stderr.write(f"tamepl {args.command}: {e}\n")
        _emit(dumps(err), args.out)
        return 2
    except TameError as e:
        sys.stderr.write(f"tamepl {args.command}: internal invariant failed: {e}\n")
        return 1
    report = {"command": args.command, "ok": bool(ok), "field": b.field.name, "bundle": b.doc}
    report.update(body)
    text = dumps(report)
    _emit(text, args.out)
    if args.command == "check" and args.report:
        _emit(text, args.report)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
