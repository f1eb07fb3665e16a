"""Command-line interface: ``qrlab reproduce | code | design | group``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .codes import (CodewordSet, codewords_of_weight, extend, low_weight_search,
                    minimum_weight_codewords, qr_code, weight_distribution)
from .designs import (Design, derived_design, format_design,
                      linear_span, read_design, residual_at_point, verify_design)
from .errors import QRLabError
from .groups import format_permutations, orbits_on_subsets, psl2

log = logging.getLogger("qrlab")


def _emit(args, text: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _point(arg: str, v: int) -> int:
    if arg.lower() in ("inf", "infinity", "oo"):
        return v - 1
    return int(arg)


# -------------------------------------------------------------- reproduce


def _write_tsv(report, path: Path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["step", "status", "gating", "seconds", "details"])
    for s in report.steps:
        w.writerow([s.name, "pass" if s.passed else "fail", int(s.gating),
                    report.timings.get(s.name, ""), json.dumps(s.details, sort_keys=True)])
    path.write_text(buf.getvalue())


def cmd_reproduce(args) -> int:
    from .report import reproduce

    figures = args.figures
    if args.out and figures is None:
        figures = Path(args.out) / "figures"
    def progress(msg):
        if not args.quiet:
            print(f"  {msg}", file=sys.stderr, flush=True)

    report = reproduce(skip_aut=args.skip_aut, long=args.long, big_p=args.p,
                       threads=args.threads, use_cache=not args.no_cache, figures=figures,
                       progress=progress)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
        _write_tsv(report, out / "report.tsv")
    if args.json:
        print(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    return 0 if report.passed else 1


# ------------------------------------------------------------------ code


def _format_words(words: CodewordSet, fmt: str) -> str:
    if fmt == "bits":
        return "".join(str(w) + "\n" for w in words)
    d = Design(words.length, tuple(words.values()))
    text = format_design(d)
    if fmt == "support":
        text = text.split("\n", 1)[1]
    return text


def cmd_code(args) -> int:
    spec, code = qr_code(args.p)
    if args.extended:
        code = extend(code)
    use_cache = not args.no_cache
    min_words = None
    if code.k <= 28:
        wd = weight_distribution(code, use_cache=use_cache, threads=args.threads)
        d = wd.minimum_distance()
    else:
        wd = None
        min_words = minimum_weight_codewords(code)
        d = min_words.weight
    payload = {"p": args.p, "extended": args.extended, "n": code.n, "k": code.k, "d": d,
               "generator_poly": str(spec.generator_poly)}
    lines = [f"[{code.n},{code.k},{d}]", f"g = {spec.generator_poly}"]

    if args.dump_words is not None:
        w = args.dump_words
        if code.k <= 28:
            words = codewords_of_weight(code, w, use_cache=use_cache, threads=args.threads)
        else:
            words = low_weight_search(code, w).by_weight.get(w, CodewordSet(w, code.n, ()))
        sys.stdout.write(_format_words(words, args.format))
        return 0
    if args.weights:
        if wd is None:
            print("weight distribution needs k <= 28", file=sys.stderr)
            return 2
        payload["weights"] = {str(w): a for w, a in wd.counts.items()}
        lines.append(wd.magma_string())
    if args.min_weight:
        count = wd[d] if wd is not None else len(min_words)
        payload["min_weight_count"] = count
        lines.append(f"minimum weight {d}: {count} codewords")
    _emit(args, "\n".join(lines), payload)
    return 0


# ---------------------------------------------------------------- design


def cmd_design(args) -> int:
    d = read_design(args.file)
    if args.derived is not None:
        d = derived_design(d, _point(args.derived, d.v))
    if args.residual is not None:
        d = residual_at_point(d, _point(args.residual, d.v))

    if args.verify is not None:
        chk = verify_design(d, args.verify)
        payload = {"is_design": chk.is_design,
                   "profile": {str(c): m for c, m in chk.profile.counts.items()},
                   "replication": {str(r): m for r, m in chk.replication.items()}}
        if chk.is_design:
            p = chk.params
            payload.update(t=p.t, v=p.v, k=p.k, b=p.b, r=p.r, lam=p.lam)
            text = f"{p}, b={p.b}, r={p.r}"
        else:
            prof = ", ".join(f"{m} subsets in {c} blocks" for c, m in chk.profile.counts.items())
            text = f"not a {args.verify}-design: {prof}"
        _emit(args, text, payload)
        return 0
    if args.span:
        span = linear_span(d)
        payload = {"dimension": span.k}
        text = f"dimension {span.k}"
        p = d.v - 1
        try:
            _, q = qr_code(p)
        except QRLabError:
            q = None
        if q is not None:
            same = span.same_code(extend(q))
            payload["equals_extended_qr"] = same
            text += f", equals extended QR({p}): {'yes' if same else 'no'}"
        _emit(args, text, payload)
        return 0

    text = format_design(d)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ----------------------------------------------------------------- group


def cmd_group(args) -> int:
    if args.psl is not None:
        g = psl2(args.psl)
    else:
        from .automorphism import design_automorphism_group
        g = design_automorphism_group(read_design(args.aut)).group
    payload, lines = {}, []
    if args.order or not (args.orbits is not None or args.generators):
        payload["order"] = g.order()
        lines.append(str(g.order()))
    if args.orbits is not None:
        part = orbits_on_subsets(g, args.orbits)
        payload["orbits"] = [{"representative": list(r), "size": s} for r, s in part.orbits]
        lines.append(f"{len(part)} orbits: " + ", ".join(map(str, part.sizes)))
    if args.generators:
        payload["generators"] = [list(p.images) for p in g.generators]
        lines.append(format_permutations(g.generators).rstrip("\n"))
    _emit(args, "\n".join(lines), payload)
    return 0


# ----------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrlab", description=__doc__)
    ap.add_argument("--version", action="version", version=f"qrlab {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--no-cache", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reproduce", parents=[common],
                       help="run the full length-42 verification pipeline")
    r.add_argument("--skip-aut", action="store_true", help="skip the automorphism search")
    r.add_argument("--long", action="store_true",
                   help="also check the minimum-weight words of the extended QR(p) code")
    r.add_argument("--p", type=int, default=73, help="prime for --long (default 73)")
    r.add_argument("--figures", help="directory for PNG figures")
    r.add_argument("--out", help="directory for report.json, report.tsv and figures/")
    r.add_argument("-q", "--quiet", action="store_true", help="no progress lines on stderr")
    r.set_defaults(func=cmd_reproduce)

    c = sub.add_parser("code", parents=[common], help="build a QR code and enumerate it")
    c.add_argument("p", type=int)
    c.add_argument("--extended", action="store_true")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--weights", action="store_true")
    g.add_argument("--min-weight", action="store_true")
    g.add_argument("--dump-words", type=int, metavar="W")
    c.add_argument("--format", choices=["design", "support", "bits"], default="design",
                   help="layout for --dump-words (default: design exchange file)")
    c.set_defaults(func=cmd_code)

    d = sub.add_parser("design", parents=[common], help="inspect a design exchange file")
    d.add_argument("file")
    t = d.add_mutually_exclusive_group()
    t.add_argument("--derived", metavar="X", help="point index or 'inf' (last point)")
    t.add_argument("--residual", metavar="X")
    a = d.add_mutually_exclusive_group()
    a.add_argument("--verify", type=int, metavar="T")
    a.add_argument("--span", action="store_true")
    d.add_argument("-o", "--output", help="write the (derived) design here")
    d.set_defaults(func=cmd_design)

    gp = sub.add_parser("group", parents=[common], help="permutation group queries")
    src = gp.add_mutually_exclusive_group(required=True)
    src.add_argument("--psl", type=int, metavar="P")
    src.add_argument("--aut", metavar="FILE")
    gp.add_argument("--order", action="store_true")
    gp.add_argument("--orbits", type=int, metavar="S")
    gp.add_argument("--generators", action="store_true")
    gp.set_defaults(func=cmd_group)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except QRLabError as exc:
        print(f"qrlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
