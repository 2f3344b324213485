"""Batch command line: quiver-info, algebra, hh, eval, verify.

Options may also come from a plain ``key = value`` file given with
``--config``; command-line flags override it.  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import HilbertMismatch, build_preprojective
from .hochschild import COHOMOLOGY, HOMOLOGY, build_complex
from .quiver import UnknownType, UnsupportedRank, coxeter, require_supported
from .tables import (FreeMetadata, IndexOutOfRange, MissingMetadata, TypeMetadata, UnknownSymbol,
                     consistency_suite, errata_table, evaluate)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# option name -> (type, default); shared by flags and the config file
OPTIONS = {
    "type": (str, None),
    "max_degree": (int, 8),
    "period": (int, 1),
    "format": (str, "text"),
    "out": (str, None),
    "threads": (int, 1),
    "index_bound": (int, 2),
    "shift_bound": (int, 2),
    "h": (int, None),
    "meta": (str, None),
    "errata": (lambda v: str(v).lower() not in ("0", "false", "no", "off"), True),
}


class UsageError(ValueError):
    pass


def read_config(path: str) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = OPTIONS[key][0](val)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return out


def resolve(ns: argparse.Namespace) -> argparse.Namespace:
    """Defaults < config file < flags; then validate."""
    cfg = read_config(ns.config) if ns.config else {}
    for key, (_, default) in OPTIONS.items():
        if getattr(ns, key, None) is None:
            setattr(ns, key, cfg.get(key, default))
    if ns.max_degree < 2:
        raise UsageError("--max-degree must be at least 2")
    if ns.period < 0:
        raise UsageError("--period must be non-negative")
    if ns.index_bound < 0 or ns.shift_bound < 0:
        raise UsageError("bounds must be non-negative")
    if ns.threads < 1:
        raise UsageError("--threads must be at least 1")
    if ns.format not in ("text", "json"):
        raise UsageError("--format is text or json")
    return ns


def _need_type(ns):
    if not ns.type:
        raise UsageError("--type is required (e.g. --type A3)")
    return ns.type


# ---- commands ---------------------------------------------------------------------


def cmd_quiver_info(ns):
    t = require_supported(_need_type(ns))
    c = coxeter(t)
    doc = {"type": str(t), "h": c.h, "exponents": list(c.exponents), "nu": list(c.nu),
           "P": c.P, "r_minus": c.r_minus, "r_plus": c.r_plus, "C": c.C}
    text = [f"type {t}", f"h = {c.h}", f"exponents = {list(c.exponents)}", f"nu = {list(c.nu)}",
            f"r_- = {c.r_minus}, r_+ = {c.r_plus}", "P =", *("  " + str(r) for r in c.P),
            "C =", *("  " + str(r) for r in c.C)]
    return doc, "\n".join(text), EXIT_OK


def cmd_algebra(ns):
    A = build_preprojective(_need_type(ns))  # raises HilbertMismatch if the Hilbert series is off
    dims = A.graded_dims()
    doc = {"type": ns.type, "h": A.h, "dim": A.dim, "hilbert_match": True,
           "dims": [{"d": d, "i": i, "j": j, "dim": k} for (d, i, j), k in sorted(dims.items())]}
    text = [f"{ns.type}: dim {A.dim}, h = {A.h}, Hilbert series matches"]
    for d in range(A.h - 1):
        n = A.nvertices
        text.append(f"  degree {d}:")
        for i in range(n):
            text.append("    " + " ".join(f"{dims.get((d, i, j), 0):>2}" for j in range(n)))
    return doc, "\n".join(text), EXIT_OK


def cmd_hh(ns):
    A = build_preprojective(_need_type(ns))
    P = build_complex(A, ns.max_degree)
    doc = {"type": ns.type, "N": ns.max_degree, "cohomology": {}, "homology": {}}
    text = [f"{ns.type}, N = {ns.max_degree}: dim by internal degree"]
    for kind, key, sym in ((COHOMOLOGY, "cohomology", "HH^"), (HOMOLOGY, "homology", "HH_")):
        for n in range(ns.max_degree):
            tab = P.dim_table(kind, n)
            doc[key][str(n)] = {str(d): k for d, k in sorted(tab.items())}
            row = ", ".join(f"{d}: {k}" for d, k in sorted(tab.items())) or "0"
            text.append(f"  {sym}{n:<3} {row}")
    return doc, "\n".join(text), EXIT_OK


def _meta(ns):
    kind = ns.meta or ("engine" if ns.type else "free")
    if kind == "engine":
        from .structure import assign_labels
        A = build_preprojective(_need_type(ns))
        return assign_labels(build_complex(A, ns.max_degree, check=False), ns.period).meta
    if ns.h is None:
        raise UsageError(f"--meta {kind} needs --h")
    if kind == "free":
        return FreeMetadata(ns.h)
    if kind == "synthetic":
        return TypeMetadata.synthetic(ns.h)
    raise UsageError("--meta is engine, synthetic or free")


def cmd_eval(ns):
    meta = _meta(ns)
    b = ns.b if ns.b is not None else ""
    if ns.op.lower() not in ("connes", "b") and not b:
        raise UsageError(f"{ns.op} needs two arguments")
    x = evaluate(ns.op, ns.a, b, meta, ns.errata)
    doc = {"op": ns.op, "a": ns.a, "b": ns.b, "meta": meta.name, "errata": ns.errata,
           "result": [[s.family, s.k, s.shift, str(c)] for s, c in sorted(x.terms.items())],
           "text": str(x)}
    return doc, str(x), EXIT_OK


def cmd_verify(ns):
    if ns.symbolic is not None:
        return _verify_symbolic(ns)
    from .verify import verify_axioms, verify_tables
    A = build_preprojective(_need_type(ns))
    P = build_complex(A, ns.max_degree)
    reports = []
    if not ns.tables_only:
        reports.append(verify_axioms(P, ns.period, threads=ns.threads, fault=ns.fault))
    if not ns.axioms_only:
        reports.append(verify_tables(P, ns.period, errata=ns.errata, threads=ns.threads,
                                     fault=ns.fault))
    ok = all(r.ok for r in reports)
    skipped = sum(len(r.to_json()["skipped"]) for r in reports)
    doc = {"ok": ok, "skipped": skipped, "reports": [r.to_json() for r in reports]}
    text = "\n".join([r.to_text() for r in reports] + [f"skipped checks: {skipped}"])
    return doc, text, EXIT_OK if ok else EXIT_FAIL


def _verify_symbolic(ns):
    hs = ns.symbolic or [3, 4, 5, 6]
    reports = [consistency_suite(TypeMetadata.synthetic(h), ns.index_bound, ns.shift_bound,
                                 errata=ns.errata) for h in hs]
    ok = all(not r.violations for r in reports)
    doc = {"ok": ok, "errata": errata_table() if ns.errata else [],
           "reports": [r.to_json() for r in reports]}
    text = "\n".join(f"{r.meta}: {len(r.violations)} violations, {len(r.edge)} edge cells, checked {r.checked}"
                     for r in reports)
    return doc, text, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"quiver-info": cmd_quiver_info, "algebra": cmd_algebra, "hh": cmd_hh,
            "eval": cmd_eval, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--type", help="Dynkin type, e.g. A3 or D4")
    common.add_argument("--max-degree", dest="max_degree", type=int, help="truncation N (default 8)")
    common.add_argument("--period", type=int, help="duality period index m (default 1)")
    common.add_argument("--format", choices=("text", "json"))
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, help="worker threads (default 1)")
    common.add_argument("--index-bound", dest="index_bound", type=int)
    common.add_argument("--shift-bound", dest="shift_bound", type=int)
    common.add_argument("--no-errata", dest="errata", action="store_false", default=None,
                        help="use the tables exactly as printed")

    p = argparse.ArgumentParser(prog="preproj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("quiver-info", parents=[common], help="Coxeter data of a Dynkin type")
    sub.add_parser("algebra", parents=[common], help="build the preprojective algebra")
    sub.add_parser("hh", parents=[common], help="bigraded HH dimension tables")
    e = sub.add_parser("eval", parents=[common], help="evaluate a table cell")
    e.add_argument("op", help="iota | bracket | lie | connes")
    e.add_argument("a", help="family[k,s]")
    e.add_argument("b", nargs="?", help="family[k,s]")
    e.add_argument("--h", type=int, help="Coxeter number for free/synthetic metadata")
    e.add_argument("--meta", choices=("engine", "synthetic", "free"),
                   help="where type data comes from (default: engine with --type, else free)")
    v = sub.add_parser("verify", parents=[common], help="axioms and table cross-check")
    v.add_argument("--fault", help="inject a fault (test mode): cup, bracket, contraction, lie, connes, table")
    v.add_argument("--axioms-only", action="store_true")
    v.add_argument("--tables-only", action="store_true")
    v.add_argument("--symbolic", type=int, nargs="*",
                   help="run the symbolic consistency suite for these h (default 3 4 5 6)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        ns = resolve(ns)
        doc, text, code = COMMANDS[ns.command](ns)
    except (UsageError, UnknownType, UnsupportedRank, UnknownSymbol, IndexOutOfRange, MissingMetadata,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HilbertMismatch as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = json.dumps(doc, indent=1, sort_keys=True) if ns.format == "json" else text
    if ns.out:
        Path(ns.out).write_text(out + "\n")
    else:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
