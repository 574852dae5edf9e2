"""Command line: ``polytc {check,ring,betti,tc,chambers,expand}``.

Exit codes: 0 success/valid, 1 invalid input, 2 validation failure,
3 internal mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources

from . import ring
from .certify import (
    CoefficientMismatch,
    MinimalityOracle,
    RefusalError,
    ValidationFailed,
    certify,
    check_lengths,
    closed_form,
    expand_certificate_product,
)
from .lengths import (
    LengthInputError,
    LengthVector,
    PreconditionError,
    chamber_signature,
    enumerate_chambers,
    genericity_witness,
    is_generic,
    is_nondegenerate,
)
from .presentation import FixtureError, load_fixture, presentation_id, validate
from .ring import bits

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION, EXIT_MISMATCH = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    lengths: LengthVector | None = None
    fixture: str | None = None
    degree: int | None = None
    n: int | None = None
    r: int | None = None
    bound: int | None = None
    fmt: str = "text"
    flags: set[str] = field(default_factory=set)


def resolve_fixture(path: str) -> str:
    """A path, or the bare name of a bundled fixture (``n5_equilateral``)."""
    if os.path.exists(path):
        return path
    name = path if path.endswith(".json") else path + ".json"
    bundled = resources.files("polytc") / "fixtures" / name
    if bundled.is_file():
        return str(bundled)
    raise FixtureError(f"{path}: no such file or bundled fixture")


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def run_check(cfg: RunConfig) -> int:
    ell = cfg.lengths
    generic = is_generic(ell)
    nondeg = is_nondegenerate(ell)
    payload = {"lengths": [str(e) for e in ell.entries], "n": ell.n, "generic": generic, "nondegenerate": nondeg}
    if generic:
        payload["signature"] = [list(s) for s in chamber_signature(ell).short_sets]
    else:
        payload["witness"] = list(bits(genericity_witness(ell)))
    lines = [f"lengths: {ell}", f"generic={str(generic).lower()} nondegenerate={str(nondeg).lower()}"]
    if generic:
        lines.append("signature: " + chamber_signature(ell).to_json())
    else:
        lines.append(f"witness S={{{','.join(map(str, payload['witness']))}}} splits the total evenly")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if generic and nondeg else EXIT_INPUT


def run_ring(cfg: RunConfig, expr: str) -> int:
    pres = load_fixture(resolve_fixture(cfg.fixture)) if cfg.fixture else None
    p = ring.parse_polynomial(expr, pres)
    payload = {"input": expr, "normal_form": str(p)}
    lines = [str(p)]
    if pres is not None and p.is_homogeneous() and p:
        d = p.degree
        if d <= pres.max_degree:
            nz = ring.is_nonzero(pres, p)
            payload["degree"] = d
            payload["nonzero"] = nz
            lines.append(f"degree {d}: {'nonzero' if nz else 'zero'} in the ring")
            if d == pres.top_degree:
                try:
                    payload["top_coordinate"] = ring.top_coordinate(pres, p)
                    lines.append(f"top coordinate: {payload['top_coordinate']}")
                except ring.TopClassError as exc:
                    lines.append(f"top coordinate unavailable: {exc}")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


def run_betti(cfg: RunConfig) -> int:
    pres = load_fixture(resolve_fixture(cfg.fixture))
    degrees = [cfg.degree] if cfg.degree is not None else range(pres.max_degree + 1)
    rows = []
    for d in degrees:
        c = ring.component(pres, d)
        rows.append({"degree": d, "basis": len(c.basis), "rank": c.rank, "torsion": list(c.torsion), "betti": c.betti})
    payload = {"n": pres.n, "max_degree": pres.max_degree, "presentation_id": presentation_id(pres), "components": rows}
    code = EXIT_OK
    rep = None
    if "validate" in cfg.flags:
        rep = validate(pres, cfg.lengths, extended=True)
        payload["validation"] = rep.to_dict()
        code = EXIT_OK if rep.accepted else EXIT_VALIDATION
    lines = [f"{'d':>3} {'basis':>6} {'rank':>5} {'betti':>6}  torsion"]
    for r in rows:
        lines.append(f"{r['degree']:>3} {r['basis']:>6} {r['rank']:>5} {r['betti']:>6}  {r['torsion'] or '-'}")
    if rep is not None:
        lines.append(rep.summary())
    _emit(cfg, payload, "\n".join(lines))
    return code


def run_tc(cfg: RunConfig) -> int:
    ell = cfg.lengths
    try:
        check_lengths(ell)
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not cfg.fixture:
        print("a presentation fixture (-f) is required to certify", file=sys.stderr)
        return EXIT_INPUT
    pres = load_fixture(resolve_fixture(cfg.fixture))
    try:
        cert = certify(ell, pres, shortcut="shortcut" in cfg.flags, all_witnesses="all-witnesses" in cfg.flags)
    except ValidationFailed as exc:
        if cfg.fmt == "json":
            print(json.dumps(exc.report.to_dict(), indent=2))
        else:
            print(exc.report.summary())
        return EXIT_VALIDATION
    except CoefficientMismatch as exc:
        print(f"coefficient mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    if cfg.fmt == "json":
        print(cert.to_json())
    else:
        print(
            f"n={cert.n} lengths=({','.join(cert.lengths)})\n"
            f"minimal top monomial: {cert.monomial} (r={cert.r}, S={cert.support})\n"
            f"coefficient={cert.coefficient} expected={cert.expected} ({cert.expansion}, {cert.raw_terms} raw terms)\n"
            f"tc={cert.tc} bounds=[{cert.tc_lower}, {cert.tc_upper}] valid={cert.valid}\n"
            f"presentation {cert.presentation_id[:16]}"
        )
        if cert.witnesses:
            print("minimal supports: " + ", ".join(str(w) for w in cert.witnesses))
    return EXIT_OK if cert.valid else EXIT_MISMATCH


CSV_COLUMNS = ["n", "signature", "representative", "generic", "nondegenerate", "tc", "fixture_hash"]


def run_chambers(cfg: RunConfig, max_n: int = 8) -> int:
    n, bound = cfg.n, cfg.bound
    if n > max_n:
        print(f"n={n} exceeds the configured maximum {max_n} (use --max-n)", file=sys.stderr)
        return EXIT_INPUT
    atlas = enumerate_chambers(n, bound)
    rows = [
        {
            "n": n,
            "signature": sig.to_json(),
            "representative": str(rep),
            "generic": True,
            "nondegenerate": True,
            "tc": 2 * n - 5,
            "fixture_hash": "",
        }
        for sig, rep in atlas
    ]
    if cfg.fmt == "json":
        print(json.dumps({"n": n, "bound": bound, "complete": False, "chambers": rows}, indent=2))
    elif cfg.fmt == "csv":
        print(f"# chambers n={n} bound={bound} found={len(rows)}", file=sys.stderr)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    else:
        print(f"{len(rows)} chambers for n={n} with integer entries in [1, {bound}] (not claimed complete)")
        for row in rows:
            print(f"  ({row['representative']})  tc={row['tc']}  {row['signature']}")
    return EXIT_OK


def run_expand(cfg: RunConfig) -> int:
    n, r = cfg.n, cfg.r
    if not (n >= 3 and 0 <= r <= n - 3):
        print(f"need n >= 3 and 0 <= r <= n-3, got n={n} r={r}", file=sys.stderr)
        return EXIT_INPUT
    support = list(range(1, r + 1))
    oracle = MinimalityOracle(n, support)
    brute = expand_certificate_product(n, support, oracle)
    short = expand_certificate_product(n, support, oracle, shortcut=True)
    closed = closed_form(n, r)
    agree = brute.coefficient == short.coefficient == closed
    payload = {
        "n": n,
        "r": r,
        "brute_force": brute.coefficient,
        "shortcut": short.coefficient,
        "closed_form": closed,
        "raw_terms": brute.raw_terms,
        "brute_equals_shortcut": brute.product == short.product,
        "agree": agree,
    }
    text = (
        f"n={n} r={r}\n"
        f"brute force : {brute.coefficient} ({brute.raw_terms} raw terms)\n"
        f"shortcut    : {short.coefficient}\n"
        f"closed form : {closed}\n"
        f"agree={str(agree).lower()}"
    )
    _emit(cfg, payload, text)
    return EXIT_OK if agree else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polytc", description="Spatial polygon spaces: cohomology and topological complexity.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", dest="fmt", action="store_const", const="json", default="text", help="emit JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="genericity, nondegeneracy, chamber signature")
    p.add_argument("-l", "--lengths", required=True)

    p = sub.add_parser("ring", parents=[common], help="normalize a polynomial, test it against a fixture")
    p.add_argument("expr")
    p.add_argument("-f", "--fixture")

    p = sub.add_parser("betti", parents=[common], help="graded pieces of a fixture")
    p.add_argument("-f", "--fixture", required=True)
    p.add_argument("-d", "--degree", type=int)
    p.add_argument("-l", "--lengths")
    p.add_argument("--validate", action="store_true", help="also run the validation suite")

    p = sub.add_parser("tc", parents=[common], help="certify TC = 2n-5")
    p.add_argument("-l", "--lengths", required=True)
    p.add_argument("-f", "--fixture")
    p.add_argument("--shortcut", action="store_true", help="middle-term expansion instead of brute force")
    p.add_argument("--all-witnesses", action="store_true", help="list every minimal-size nonzero support")

    p = sub.add_parser("chambers", parents=[common], help="bounded chamber enumeration")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-b", "--bound", type=int, required=True)
    p.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    p.add_argument("--max-n", type=int, default=8)

    p = sub.add_parser("expand", parents=[common], help="zero-divisor expansion under the abstract minimality oracle")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lengths = LengthVector.parse(args.lengths) if getattr(args, "lengths", None) else None
        flags = {f for f in ("shortcut", "all_witnesses", "validate") if getattr(args, f, False)}
        cfg = RunConfig(
            command=args.command,
            lengths=lengths,
            fixture=getattr(args, "fixture", None),
            degree=getattr(args, "degree", None),
            n=getattr(args, "n", None),
            r=getattr(args, "r", None),
            bound=getattr(args, "bound", None),
            fmt=args.fmt,
            flags={f.replace("_", "-") for f in flags},
        )
        if cfg.command == "check":
            return run_check(cfg)
        if cfg.command == "ring":
            return run_ring(cfg, args.expr)
        if cfg.command == "betti":
            return run_betti(cfg)
        if cfg.command == "tc":
            return run_tc(cfg)
        if cfg.command == "chambers":
            return run_chambers(cfg, args.max_n)
        return run_expand(cfg)
    except (LengthInputError, FixtureError, ring.RingInputError, ring.PresentationIncomplete, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
