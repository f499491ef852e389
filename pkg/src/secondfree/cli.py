"""Command-line front end.

Subcommands: enumerate, transform, square, check, render.  JSON is the
canonical output format; rationals serialize as "num/den" strings.
Exit codes: 0 success, 1 check failure, 2 usage error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import gzip
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .annular import (
    AnnularConfig,
    CapExceededError,
    DEFAULT_CONFIG,
    classify_parity,
    enumerate_annular_pairings,
    enumerate_nc,
    enumerate_ps_nc,
    enumerate_snc,
    enumerate_snc_k_alternating,
    enumerate_snc_k_alternating_equal,
    is_even_cycles,
    through_cycles,
)
from .cumulants import (
    ModelError,
    TruncationError,
    kappa2_table_from_moments,
    kappa2_word,
    kappa_table_from_moments,
    moments_from_kappa_table,
    phi2_cell_from_tables,
    word_phi,
    word_phi2,
)
from .dist import (
    BUILTIN_KINDS,
    build,
    emit_model,
    format_rational,
    load_model,
)
from .perm import AnnulusShape, PartitionedPermutation, Permutation
from .render import render_annular
from .series import check_first_order_relation, check_second_order_relation
from .special import (
    check_product_r_diagonal,
    determining_from_square,
    determining_of_even,
    determining_of_r_diagonal,
    square_cumulants,
    verify_even,
    verify_r_diagonal,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3

CACHE_ENV = "SECONDFREE_CACHE_DIR"


def _parse_shape(text: str) -> AnnulusShape:
    try:
        m, n = (int(x) for x in text.split(","))
        return AnnulusShape(m, n)
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}: expected m,n") from exc


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _envelope(args_payload, body: dict) -> dict:
    return {
        "tool": "secondfree",
        "version": __version__,
        "input_digest": _digest(args_payload),
        **body,
    }


def _resolve_model(spec: str):
    if spec in BUILTIN_KINDS:
        return build(spec)
    path = Path(spec)
    if not path.exists():
        raise ModelError(f"model {spec!r} is neither a builtin nor a file")
    return load_model(json.loads(path.read_text()))


def _perm_record(p: Permutation, shape: AnnulusShape | None) -> dict:
    record: dict = {"cycles": [list(c) for c in p.cycles()]}
    if shape is not None:
        record["through"] = [list(c) for c in through_cycles(p, shape)]
        record["even"] = is_even_cycles(p)
        record["parity"] = classify_parity(p, shape)
    return record


def _cache_path(cache_dir: str | None, key: str) -> Path | None:
    root = cache_dir or os.environ.get(CACHE_ENV)
    if not root:
        return None
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path / f"{key}.jsonl.gz"


def _cached_lines(path: Path | None):
    if path is None or not path.exists():
        return None
    try:
        with gzip.open(path, "rt") as fh:
            lines = fh.read().splitlines()
        for line in lines:
            json.loads(line)
        return lines
    except Exception:
        return None  # corrupt entries are recomputed, never trusted


def _store_lines(path: Path | None, lines: list[str]) -> None:
    if path is None:
        return
    tmp = path.with_suffix(".tmp")
    with gzip.open(tmp, "wt") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))
    tmp.replace(path)


def cmd_enumerate(args) -> int:
    shape = args.shape
    config = DEFAULT_CONFIG
    key_payload = {
        "cmd": "enumerate",
        "kind": args.kind,
        "n": args.n,
        "shape": [shape.outer, shape.inner] if shape else None,
        "k": args.k,
    }
    cache_key = f"enum-{args.kind}-{_digest(key_payload)}-v{__version__}"
    path = _cache_path(args.cache_dir, cache_key)
    lines = _cached_lines(path)
    if lines is None:
        if args.kind == "nc":
            if args.n is None:
                print("enumerate nc requires --n", file=sys.stderr)
                return EXIT_USAGE
            items = [_perm_record(p, None) for p in enumerate_nc(args.n, config)]
        elif args.kind in ("snc", "pairings"):
            if shape is None:
                print(f"enumerate {args.kind} requires --shape", file=sys.stderr)
                return EXIT_USAGE
            fn = enumerate_snc if args.kind == "snc" else enumerate_annular_pairings
            items = [_perm_record(p, shape) for p in fn(shape, config)]
        elif args.kind == "psnc":
            if shape is None:
                print("enumerate psnc requires --shape", file=sys.stderr)
                return EXIT_USAGE
            items = [
                {
                    "partition": [list(b) for b in x.partition.blocks],
                    "cycles": [list(c) for c in x.permutation.cycles()],
                    "length": x.length,
                }
                for x in enumerate_ps_nc(shape, config)
            ]
        elif args.kind in ("snc-k-alt", "snc-k-alt-eq"):
            if shape is None or args.k is None:
                print(f"enumerate {args.kind} requires --shape and --k", file=sys.stderr)
                return EXIT_USAGE
            fn = (
                enumerate_snc_k_alternating
                if args.kind == "snc-k-alt"
                else enumerate_snc_k_alternating_equal
            )
            scaled = AnnulusShape(args.k * shape.outer, args.k * shape.inner)
            items = [
                _perm_record(p, scaled)
                for p in fn(shape.outer, shape.inner, args.k, config)
            ]
        else:  # pragma: no cover - argparse restricts choices
            return EXIT_USAGE
        lines = [json.dumps(item, sort_keys=True) for item in items]
        _store_lines(path, lines)
    if args.count_only:
        print(len(lines))
    else:
        for line in lines:
            print(line)
    return EXIT_OK


def _first_table_doc(table: dict[int, Fraction]) -> dict:
    return {str(n): format_rational(Fraction(v)) for n, v in sorted(table.items())}


def _second_table_doc(table: dict[tuple[int, int], Fraction]) -> dict:
    return {
        f"{p},{q}": format_rational(Fraction(v)) for (p, q), v in sorted(table.items())
    }


def _element_tables(model, cutoff: int):
    """Moment and fluctuation tables of the model's element.

    Self-adjoint letters use plain powers; star pairs use the
    alternating pattern x x* x x* ...
    """
    letters = list(model.letters.values())
    if len(letters) == 1:
        x = letters[0]
        word = lambda n: (x,) * n
    else:
        x = min((l for l in letters if not l.self_adjoint), key=lambda l: l.name)
        xs = model.letter(x.star)
        word = lambda n: tuple(x if i % 2 == 0 else xs for i in range(n))
    moments = {n: word_phi(word(n), model) for n in range(1, cutoff + 1)}
    fluct = {
        (p, q): word_phi2(word(p), word(q), model)
        for p in range(1, cutoff)
        for q in range(1, cutoff + 1 - p)
    }
    kappa1 = {n: model.kappa1(word(n)) for n in range(1, cutoff + 1)}
    kappa2 = {
        (p, q): model.kappa2(word(p), word(q))
        for p in range(1, cutoff)
        for q in range(1, cutoff + 1 - p)
    }
    return moments, fluct, kappa1, kappa2


def cmd_transform(args) -> int:
    model = _resolve_model(args.model)
    cutoff = args.cutoff
    moments, fluct, kappa1, kappa2 = _element_tables(model, cutoff)
    if args.direction == "m2c":
        first = kappa_table_from_moments(moments, cutoff)
        second = kappa2_table_from_moments(first, fluct, cutoff)
    else:
        first = moments_from_kappa_table(kappa1, cutoff)
        second = {
            cell: phi2_cell_from_tables(kappa1, kappa2, cell)
            for cell in fluct
        }
    body = {
        "direction": args.direction,
        "cutoff": cutoff,
        "first": _first_table_doc(first),
        "second": _second_table_doc(second),
    }
    if args.verify_roundtrip:
        if args.direction == "m2c":
            back1 = moments_from_kappa_table(first, cutoff)
            back2 = {
                cell: phi2_cell_from_tables(first, second, cell) for cell in fluct
            }
            ok = back1 == moments and back2 == fluct
        else:
            back1 = kappa_table_from_moments(first, cutoff)
            back2 = kappa2_table_from_moments(back1, second, cutoff)
            ok = back1 == kappa1 and all(
                back2[cell] == kappa2[cell] for cell in kappa2
            )
        body["roundtrip"] = "ok" if ok else "failed"
        _print_doc(args, body)
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    _print_doc(args, body)
    return EXIT_OK


def cmd_square(args) -> int:
    model = _resolve_model(args.model)
    cutoff = args.cutoff
    if args.direction == "forward":
        letters = list(model.letters.values())
        if len(letters) == 1:
            beta = determining_of_even(model, cutoff)
        else:
            beta = determining_of_r_diagonal(model, cutoff)
        first, second = square_cumulants(beta, cutoff)
        body = {
            "direction": "forward",
            "beta_first": _first_table_doc(beta.first),
            "beta_second": _second_table_doc(beta.second),
            "square_first": _first_table_doc(first),
            "square_second": _second_table_doc(second),
        }
    else:
        moments, fluct, kappa1, kappa2 = _element_tables(model, cutoff)
        beta = determining_from_square(kappa1, kappa2, cutoff)
        body = {
            "direction": "inverse",
            "beta_first": _first_table_doc(beta.first),
            "beta_second": _second_table_doc(beta.second),
        }
    _print_doc(args, body)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.target == "examples":
        from .acceptance import run_all

        results = run_all()
        ok = all(r.passed for r in results)
        if args.format == "json":
            body = {
                "passed": ok,
                "criteria": [
                    {
                        "id": r.cid,
                        "name": r.name,
                        "passed": r.passed,
                        "details": r.details,
                    }
                    for r in results
                ],
            }
            _print_doc(args, body)
        else:
            for r in results:
                print(f"{'PASS' if r.passed else 'FAIL'}  {r.cid:2d}. {r.name}")
                for d in r.details:
                    if "FAIL" in d or args.verbose:
                        print("       " + d)
        return EXIT_OK if ok else EXIT_CHECK_FAILED

    if args.target in ("rdiag", "even"):
        model = _resolve_model(args.model)
        verify = verify_r_diagonal if args.target == "rdiag" else verify_even
        ok, violation = verify(model, args.order)
        _print_doc(
            args,
            {
                "target": args.target,
                "order": args.order,
                "passed": ok,
                "violation": str(violation) if violation else None,
            },
        )
        return EXIT_OK if ok else EXIT_CHECK_FAILED

    if args.target == "mt1":
        left = _resolve_model(args.r)
        right = _resolve_model(args.b)
        report = check_product_r_diagonal(left, right, args.order)
        _print_doc(
            args,
            {
                "target": "mt1",
                "order": args.order,
                "passed": report.passed,
                "patterns_checked": report.patterns_checked,
                "geodesic_assertions": report.geodesic_assertions,
                "violations": [str(v) for v in report.violations],
            },
        )
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED

    if args.target == "series":
        model = _resolve_model(args.model)
        cutoff = args.cutoff
        letters = list(model.letters.values())
        if len(letters) == 1:
            beta = determining_of_even(model, cutoff)
        else:
            beta = determining_of_r_diagonal(model, cutoff)
        first, second = square_cumulants(beta, cutoff)
        res1 = check_first_order_relation(first, beta.first, cutoff)
        res2 = check_second_order_relation(
            second, beta.second, first, beta.first, cutoff + 2
        )
        ok = res1.is_zero() and res2.is_zero()
        _print_doc(
            args,
            {
                "target": "series",
                "cutoff": cutoff,
                "first_residual": res1.to_dict(),
                "second_residual": res2.to_dict(),
                "passed": ok,
            },
        )
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    return EXIT_USAGE


def cmd_render(args) -> int:
    try:
        p = Permutation.parse(args.perm, size=args.shape.size)
    except Exception as exc:
        print(f"bad permutation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        svg = render_annular(p, args.shape)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CHECK_FAILED
    Path(args.out).write_text(svg)
    print(args.out)
    return EXIT_OK


def _print_doc(args, body: dict) -> None:
    payload = {k: v for k, v in vars(args).items() if k != "func"}
    payload = {
        k: ([v.outer, v.inner] if isinstance(v, AnnulusShape) else v)
        for k, v in payload.items()
    }
    doc = _envelope(payload, body)
    if getattr(args, "format", "json") == "csv":
        for key, value in doc.items():
            if isinstance(value, dict):
                for k2, v2 in value.items():
                    print(f"{key},{k2},{v2}")
            else:
                print(f"{key},,{value}")
    elif getattr(args, "format", "json") == "text":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(json.dumps(doc, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secondfree",
        description="Exact combinatorics of second-order free probability",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    enum = sub.add_parser("enumerate", help="stream a combinatorial family")
    enum.add_argument(
        "kind", choices=["nc", "snc", "psnc", "pairings", "snc-k-alt", "snc-k-alt-eq"]
    )
    enum.add_argument("--n", type=int)
    enum.add_argument("--shape", type=_parse_shape)
    enum.add_argument("--k", type=int)
    enum.add_argument("--count-only", action="store_true")
    enum.add_argument("--cache-dir")
    enum.add_argument("--format", choices=["json", "csv", "text"], default="json")
    enum.set_defaults(func=cmd_enumerate)

    tr = sub.add_parser("transform", help="moment <-> cumulant transforms")
    tr.add_argument("--model", required=True)
    tr.add_argument("--direction", choices=["m2c", "c2m"], required=True)
    tr.add_argument("--cutoff", type=int, default=6)
    tr.add_argument("--verify-roundtrip", action="store_true")
    tr.add_argument("--format", choices=["json", "csv", "text"], default="json")
    tr.set_defaults(func=cmd_transform)

    sq = sub.add_parser("square", help="determining sequence <-> square cumulants")
    sq.add_argument("--model", required=True)
    sq.add_argument("--direction", choices=["forward", "inverse"], default="forward")
    sq.add_argument("--cutoff", type=int, default=4)
    sq.add_argument("--format", choices=["json", "csv", "text"], default="json")
    sq.set_defaults(func=cmd_square)

    ck = sub.add_parser("check", help="verify identities and patterns")
    ck.add_argument("target", choices=["series", "rdiag", "even", "mt1", "examples"])
    ck.add_argument("--model")
    ck.add_argument("--r")
    ck.add_argument("--b")
    ck.add_argument("--order", type=int, default=4)
    ck.add_argument("--cutoff", type=int, default=6)
    ck.add_argument("--verbose", action="store_true")
    ck.add_argument("--format", choices=["json", "csv", "text"], default="json")
    ck.set_defaults(func=cmd_check)

    rd = sub.add_parser("render", help="draw an annular permutation as SVG")
    rd.add_argument("--perm", required=True)
    rd.add_argument("--shape", type=_parse_shape, required=True)
    rd.add_argument("--out", required=True)
    rd.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ModelError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
