"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (one JSON line on stderr with a
stable ``error`` code), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import abelian, families, oracle, selectors, spectrum, typefn
from .abelian import GrammarError
from .errors import AbelSpcError

SCHEMA = 1

DEFAULT_VERIFY_GRID = [[2], [4], [8], [2, 2], [4, 2], [2, 2, 2], [6], [12]]


class UsageError(Exception):
    pass


def _doc(kind: str, **payload) -> dict:
    return {"schema": SCHEMA, "kind": kind, **payload}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _group(args):
    if args.group is None:
        raise UsageError("this subcommand needs -g/--group")
    return abelian.parse_group(args.group)


def _prime(args):
    if args.prime is None:
        raise UsageError("this subcommand needs -p/--prime")
    return abelian.check_prime(args.prime)


def _read_typefn(A, p, text):
    if text is None:
        raise UsageError("this subcommand needs --typefn")
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarError(f"--typefn is not valid JSON: {exc.msg} at {text!r}")
    return typefn.typefn_from_json(A, p, data)


def _render_subgroup_line(H):
    i = abelian.subgroup_index(H)
    return f"#{i}\t{H.render()}\torder={H.order}\t{selectors.generator_selector(H)}"


def _point_text(pt):
    return f"{pt.node_id()}\t{pt.label()}"


# --- subcommands ------------------------------------------------------------

def cmd_subgroups(args):
    A = _group(args)
    subs = abelian.subgroups(A)
    if args.format == "json":
        return _dump(_doc(
            "subgroups",
            group=A.render(),
            subgroups=[
                {
                    "index": i,
                    "selector": f"#{i}",
                    "gens": selectors.generator_selector(H),
                    "key": selectors.subgroup_key(H),
                    "iso_type": H.render(),
                    "order": H.order,
                    "elements": [list(x) for x in H.elements],
                }
                for i, H in enumerate(subs)
            ],
        ))
    return "".join(_render_subgroup_line(H) + "\n" for H in subs)


def cmd_spectrum(args):
    A, p = _group(args), _prime(args)
    diagram = spectrum.hasse(A, p, args.cap)
    if args.format == "dot":
        return diagram.to_dot()
    if args.format == "json":
        return diagram.to_json()
    lines = [_point_text(pt) for pt in diagram.nodes]
    lines += [f"{a} -> {b}" for a, b in diagram.edge_ids()]
    return "\n".join(lines) + "\n"


def cmd_includes(args):
    A, p = _group(args), _prime(args)
    if not args.src or not args.dst:
        raise UsageError("includes needs --src and --dst")
    src = selectors.parse_point(A, p, args.src)
    dst = selectors.parse_point(A, p, args.dst)
    result = spectrum.includes(src, dst)
    if args.format == "json":
        return _dump(_doc("includes", src=spectrum.point_to_dict(src), dst=spectrum.point_to_dict(dst), result=result))
    return f"{str(result).lower()}\n"


def cmd_closure(args):
    A, p = _group(args), _prime(args)
    if not args.point:
        raise UsageError("closure needs --point")
    pt = selectors.parse_point(A, p, args.point)
    pts = sorted(spectrum.closure(pt, args.cap), key=spectrum.SpectrumPoint.sort_key)
    if args.format == "json":
        return _dump(_doc("closure", group=A.render(), prime=p, cap=args.cap,
                          point=spectrum.point_to_dict(pt), points=[spectrum.point_to_dict(q) for q in pts]))
    return "".join(_point_text(q) + "\n" for q in pts)


def cmd_blueshift(args):
    A, p = _group(args), _prime(args)
    H = selectors.parse_subgroup(A, args.H)
    K = selectors.parse_subgroup(A, args.K)
    value = spectrum.blueshift(A, H, K, p)
    derived = spectrum.is_criterion_derived(A, p)
    if args.format == "json":
        return _dump(_doc("blueshift", group=A.render(), prime=p, H=f"#{abelian.subgroup_index(H)}",
                          K=f"#{abelian.subgroup_index(K)}", value=value, criterion_derived=derived))
    return f"{value}\n"


def cmd_admissible(args):
    A, p = _group(args), _prime(args)
    f = _read_typefn(A, p, args.typefn)
    result = typefn.is_admissible(f)
    if args.format == "json":
        return _dump(_doc("admissible", group=A.render(), prime=p, typefn=f.to_dict(), result=result))
    return f"{str(result).lower()}\n"


def cmd_complete(args):
    A, p = _group(args), _prime(args)
    f = _read_typefn(A, p, args.typefn)
    g = typefn.lower_completion(f) if args.direction == "lower" else typefn.upper_completion(f)
    if args.format == "json":
        return _dump(_doc("completion", direction=args.direction, group=A.render(), prime=p, typefn=g.to_dict()))
    return g.to_json() + "\n"


def cmd_support(args):
    A, p = _group(args), _prime(args)
    f = _read_typefn(A, p, args.typefn)
    if args.format == "json":
        return _dump(typefn.support_to_dict(f, args.cap))
    pts = sorted(typefn.support(f, args.cap), key=spectrum.SpectrumPoint.sort_key)
    return "".join(_point_text(q) + "\n" for q in pts)


def cmd_ideal(args):
    A, p = _group(args), _prime(args)
    f = _read_typefn(A, p, args.typefn)
    g = _read_typefn(A, p, args.other)
    if args.op == "contains":
        result = typefn.in_ideal_generated_by(f, g)
        if args.format == "json":
            return _dump(_doc("ideal", op="contains", result=result))
        return f"{str(result).lower()}\n"
    h = typefn.ideal_join(f, g) if args.op == "join" else typefn.ideal_meet(f, g)
    if args.format == "json":
        return _dump(_doc("ideal", op=args.op, group=A.render(), prime=p, typefn=h.to_dict()))
    return h.to_json() + "\n"


def _family(args, A, p=None):
    if not args.family:
        raise UsageError("this subcommand needs --family")
    return families.parse_family(A, args.family, p)


def cmd_family(args):
    A = _group(args)
    p = abelian.check_prime(args.prime) if args.prime is not None else None
    F = _family(args, A, p)
    doc = F.to_dict()
    if p is not None and F.is_proper():
        doc["prime"] = p
        doc["cork"] = families.cork(F, p)
    if args.format == "json":
        return _dump(doc)
    lines = [f"literal\t{F.literal()}", f"size\t{len(F)}"]
    lines += [f"max\t{_render_subgroup_line(H)}" for H in F.maximal_members]
    if "cork" in doc:
        lines.append(f"cork\t{doc['cork']}")
    return "\n".join(lines) + "\n"


def cmd_tate(args):
    A, p = _group(args), _prime(args)
    F = _family(args, A, p)
    if args.n is None:
        raise UsageError("tate needs -n")
    res = families.tate_height(F, args.n, p)
    out = "vanishes" if res is families.VANISHES else res.to_json()
    if args.format == "json":
        return _dump(_doc("tate", group=A.render(), prime=p, n=args.n, cork=families.cork(F, p), height=out))
    return f"{out}\n"


def cmd_kuhn(args):
    A, p = _group(args), _prime(args)
    if args.n is None:
        raise UsageError("kuhn needs -n")
    t = families.kuhn_threshold(A, p, args.n)
    if args.format == "json":
        return _dump(_doc("kuhn", group=A.render(), prime=p, n=args.n, threshold=t))
    return f"{t}\n"


def _verify_group(A, primes, cap, report):
    for p in primes:
        report.results.extend(oracle.poset_axioms(A, p, cap).results)
    if A.order <= oracle.SUBGROUP_ORACLE_MAX_ORDER:
        ok = oracle.exhaustive_subgroup_count(A) == len(abelian.subgroups(A))
        report.results.append(oracle.CheckResult("subgroup_count", f"A={A.render()}", ok))
    for p in primes:
        if not abelian.is_p_group(A, p):
            continue
        subs = abelian.subgroups(A)
        ok = True
        for H in subs:
            for K in subs:
                if abelian.contains(H, K):
                    b = spectrum.blueshift(A, H, K, p)
                    ok &= all(oracle.exhaustive_blueshift(A, H, K, p, n) == b for n in range(1, 4))
        report.results.append(oracle.CheckResult("blueshift", f"A={A.render()}, p={p}", ok))


def cmd_verify(args):
    report = oracle.Report()
    if args.group is None:
        for factors in DEFAULT_VERIFY_GRID:
            _verify_group(abelian.canonicalize(factors), [2, 3], args.cap, report)
    else:
        A = _group(args)
        primes = [abelian.check_prime(args.prime)] if args.prime is not None else (A.primes() or [2])
        _verify_group(A, primes, args.cap, report)
    if args.format == "text":
        lines = [f"{'PASS' if r.passed else 'FAIL'}\t{r.check}\t{r.instance}" for r in report.results]
        text = "\n".join(lines) + "\n"
    else:
        text = report.to_json()
    return text, (0 if report.passed else 1)


COMMANDS = {
    "subgroups": cmd_subgroups,
    "spectrum": cmd_spectrum,
    "includes": cmd_includes,
    "closure": cmd_closure,
    "blueshift": cmd_blueshift,
    "admissible": cmd_admissible,
    "complete": cmd_complete,
    "support": cmd_support,
    "ideal": cmd_ideal,
    "family": cmd_family,
    "tate": cmd_tate,
    "kuhn": cmd_kuhn,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-g", "--group", help="group, e.g. Z/4xZ/2, 4x2 or 4,2")
    common.add_argument("-p", "--prime", type=int)
    common.add_argument("--cap", type=int, default=3, help="largest finite height shown (default 3)")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")

    parser = argparse.ArgumentParser(prog="abelspc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "includes":
            sp.add_argument("--src", help="point selector, e.g. trivial@2")
            sp.add_argument("--dst", help="point selector, e.g. full@1")
        elif name == "closure":
            sp.add_argument("--point")
        elif name == "blueshift":
            sp.add_argument("--H", default="full")
            sp.add_argument("--K", default="trivial")
        elif name in ("admissible", "complete", "support", "ideal"):
            sp.add_argument("--typefn", help='JSON map, e.g. {"1":1,"Z/2":0}, or @file')
            if name == "complete":
                sp.add_argument("--direction", choices=["lower", "upper"], default="lower")
            if name == "ideal":
                sp.add_argument("--other", help="second type function")
                sp.add_argument("--op", choices=["contains", "join", "meet"], default="contains")
        elif name in ("family", "tate"):
            sp.add_argument("--family", help="below:H | proper | rank<=m | {gens;gens;...}")
        if name in ("tate", "kuhn"):
            sp.add_argument("-n", type=int)
    return parser


def _error(code, message, stream):
    stream.write(json.dumps({"error": code, "message": message}) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "dot" and args.command != "spectrum":
        _error("E_USAGE", "--format dot is only available for spectrum", stderr)
        return 2
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, GrammarError) as exc:
        _error("E_USAGE", str(exc), stderr)
        return 2
    except AbelSpcError as exc:
        _error(exc.code, str(exc), stderr)
        return 1
    except OSError as exc:
        _error("E_IO", str(exc), stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
