"""Command line front end.

Exit codes: 0 success, 2 parse error, 3 validation or domain error,
4 budget refusal, 5 oracle disagreement or selftest failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

from . import fflin, selftest
from .errors import BudgetExceeded, ParseError, ValidationError
from .explorer import DEFAULT_CEILING, compute_xw, parse_generators, search
from .extalg import MultiVector, format_multivector, parse_multivector, partial_decomposability_witness
from .groupspec import BUILTIN_NAMES, builtin, parse_presentation
from .obstr import report
from .oracles import DEFAULT_BUDGET, plucker_oracle_s2, sdec_oracle

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_BUDGET, EXIT_MISMATCH = 0, 2, 3, 4, 5


def _emit(args, text: str, data) -> None:
    if args.machine:
        print(json.dumps(data, separators=(",", ":")))
    else:
        print(text)


def _load_spec(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_presentation(text)


def _builtin_from_args(args):
    return builtin(args.name, args.p, t=args.t, a=args.a, b=args.b, n=args.n, variant=_variant(args))


def _variant(args):
    if args.variant is None:
        return None
    if args.name == "thm2.6":
        return "printed" if args.variant == "printed" else "proof"
    if args.name == "thm3.4":
        return "printed" if args.variant == "printed" else "sec3"
    return None


def cmd_report(args) -> int:
    rep = report(_load_spec(args.file))
    _emit(args, rep.to_text(), rep.to_dict())
    return EXIT_OK


def cmd_builtin(args) -> int:
    spec = _builtin_from_args(args)
    rep = report(spec)
    notes = []
    if args.name == "thm2.6":
        t = args.t % args.p
        square = fflin.PrimeField(args.p).is_square(t)
        expect = 0 if square else 2
        notes.append(
            f"t = {t} is {'a square' if square else 'a non-square'} mod {args.p}: "
            f"expected h3_lower_dim {expect} ({'clean' if square else 'harmful'})"
        )
    if args.name == "thm3.4":
        v = _variant(args) or "sec3"
        notes.append(
            "sign variant: "
            + ("as printed, [u1,u6]^-1 = v7" if v == "printed" else "[u1,u6] = v7, so K2 = X_w for w = (1,2,3)+(3,4,5)+(5,6,1)")
        )
    data = rep.to_dict()
    if notes:
        data = {"notes": notes, **data}
    _emit(args, "\n".join(notes + [rep.to_text()]), data)
    return EXIT_OK


def _parse_w(expr: str, p: int, n: int) -> MultiVector:
    if expr.strip() == "0":
        raise ValidationError("w must be nonzero")
    w = parse_multivector(expr, p, n, dual=False)
    if w.d != 3:
        raise ValidationError(f"w must be a trivector, got degree {w.d}")
    if w.is_zero():
        raise ValidationError("w must be nonzero")
    return w


def cmd_xw(args) -> int:
    p = fflin.check_prime(args.p)
    w = _parse_w(args.w, p, args.n)
    xw = compute_xw(w)
    texts = [format_multivector(MultiVector.from_vector(r, p, args.n, 2, True)) for r in xw.basis]
    wit = partial_decomposability_witness(w)
    lines = [
        f"w = {format_multivector(w)}",
        f"dim X_w = {xw.dim}",
        f"X_w = <{', '.join(texts)}>",
        "w is partially decomposable (w ^ u0 = 0 for u0 = " + format_multivector(wit) + "): not eligible"
        if wit is not None
        else "w is not of the form u' ^ u: eligible target",
    ]
    data = {
        "p": p, "n": args.n, "w": format_multivector(w), "dim": xw.dim,
        "basis": {"vectors": [[int(x) for x in r] for r in xw.basis], "text": texts},
        "partially_decomposable": wit is not None,
        "witness": format_multivector(wit) if wit is not None else None,
    }
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def _read_generator_sets(path: str, p: int, n: int):
    sets = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            sets.append(parse_generators([s for s in line.split(";") if s.strip()], p, n))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    return sets


def cmd_search(args) -> int:
    p = fflin.check_prime(args.p)
    w = _parse_w(args.w, p, args.n)
    if args.explicit:
        stream = search(p, w, "explicit", generator_sets=_read_generator_sets(args.explicit, p, args.n))
    elif args.random:
        k, count, seed = args.random
        stream = search(p, w, "random", k=k, count=count, seed=seed)
    else:
        stream = search(p, w, "exhaustive", k=args.exhaustive, ceiling=args.ceiling)
    for out in stream:
        r = out.report
        text = (
            f"{out.candidate.label()} | {out.classification}: brnr_dim={r.brnr_dim}, "
            f"h3_lower_dim={r.h3_lower_dim}, |G|=p^{r.order_exponent}"
        )
        _emit(args, text, out.to_dict())
        sys.stdout.flush()
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.builtin:
        args.name = args.builtin
        spec = _builtin_from_args(args)
    elif args.file:
        spec = _load_spec(args.file)
    else:
        raise ValidationError("give a presentation file or --builtin NAME")
    rep = report(spec)
    p, n, budget = spec.p, spec.dim_u, args.budget
    checks = []
    if args.degree in ("2", "all"):
        checks.append(("plucker S2_dec", p ** rep.s2.dim, lambda: plucker_oracle_s2(rep.s2, n, budget), rep.s2dec))
        checks.append(("pairs S2_dec", p ** (comb(n, 1) + n),
                       lambda: sdec_oracle(rep.s2, 2, n, budget), rep.s2dec))
    if args.degree in ("3", "all"):
        checks.append(("pairs S3_dec", p ** (comb(n, 2) + n),
                       lambda: sdec_oracle(rep.s3, 3, n, budget), rep.s3dec))
    for label, cost, _, _ in checks:
        if cost > budget:
            raise BudgetExceeded(f"{label} oracle needs {cost} > budget {budget}", cost, budget)
    results = []
    for label, _, run, fast in checks:
        got = run()
        results.append({"oracle": label, "agree": got == fast, "dim_oracle": got.dim, "dim_fast": fast.dim})
    text = "\n".join(
        f"{'agree' if r['agree'] else 'DISAGREE'}  {r['oracle']}: oracle dim {r['dim_oracle']}, "
        f"pipeline dim {r['dim_fast']}"
        for r in results
    )
    _emit(args, text, {"p": p, "n": n, "results": results})
    return EXIT_OK if all(r["agree"] for r in results) else EXIT_MISMATCH


def cmd_selftest(args) -> int:
    lines = []
    ok = selftest.run(thm34_variant=args.thm34_variant, out=print if not args.machine else lines.append)
    if args.machine:
        print(json.dumps({"passed": ok, "rows": lines}, separators=(",", ":")))
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a --machine given before it
    common.add_argument("--machine", action="store_true", default=argparse.SUPPRESS, help="emit JSON instead of text")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--p", type=int, required=True)
    params.add_argument("--t", type=int)
    params.add_argument("--a", type=int)
    params.add_argument("--b", type=int)
    params.add_argument("--n", type=int)
    params.add_argument("--variant", choices=("printed", "sec3", "proof"))

    parser = argparse.ArgumentParser(prog="brnr", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("report", parents=[common], help="report on a presentation file")
    s.add_argument("file")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("builtin", parents=[common, params], help="report on a catalog group")
    s.add_argument("name", choices=BUILTIN_NAMES)
    s.set_defaults(func=cmd_builtin)

    s = sub.add_parser("xw", parents=[common], help="compute X_w for a trivector w")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--w", required=True)
    s.set_defaults(func=cmd_xw)

    s = sub.add_parser("search", parents=[common], help="evaluate candidate K2 inside X_w")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--w", required=True)
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--explicit", metavar="FILE", help="one generator set per line, ';'-separated")
    mode.add_argument("--random", nargs=3, type=int, metavar=("K", "COUNT", "SEED"))
    mode.add_argument("--exhaustive", type=int, metavar="K")
    s.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("oracle", parents=[common], help="cross-check S_dec by brute force")
    s.add_argument("file", nargs="?")
    s.add_argument("--builtin", choices=BUILTIN_NAMES)
    s.add_argument("--p", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--variant", choices=("printed", "sec3", "proof"))
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--degree", choices=("2", "3", "all"), default="2")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance table at p = 3, 5, 7")
    s.add_argument("--thm34-variant", choices=("sec3", "printed"), default="sec3")
    s.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.machine = getattr(args, "machine", False)
    try:
        if args.command == "oracle" and args.builtin and args.p is None:
            raise ValidationError("--builtin needs --p")
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BrokenPipeError:
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
