"""Command-line front end.

Exit codes: 0 success (including a clean failure report from `sample`),
1 verification failures, 2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .adhm import in_lambda, is_stable, sample_point
from .exactmath import jordan_type_nilpotent
from .foldfix import (
    Decomposition,
    classify_fixed,
    decomposition_violations,
    enumerate_decompositions,
    psi_embed,
    type_a_context,
)
from .maffei import check_involution_correspondence, phi1
from .quiver import AdmAut, Quiver, cartan, split_cartan_matches_transpose, split_quotient
from .serialize import (
    context_from_json,
    datum_from_json,
    datum_to_json,
    decomposition_to_json,
    dumps,
    encode_id,
    group_to_json,
    keyed_from_json,
    keyed_to_json,
    matrix_to_json,
    named_fold,
    quiver_from_ref,
)
from .slodowy import SliceSpec, build_form, half_dims, in_slice, nonempty_typeA
from .trials import SKIP, SUITES, SuiteOptions, run_suite

SEED_ENV = "FOLDQUIVER_SEED"


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        return [int(v) for v in json.loads(text)]
    return [int(v) for v in text.split(",") if v.strip()]


def _signature(text: str | None):
    if text is None:
        return None
    values = _int_list(text)
    if len(values) != 2:
        raise UsageError("signature is 'w_plus,w_minus'")
    return tuple(values)


def _spec(args) -> SliceSpec:
    signature = _signature(args.signature)
    if args.k == args.n and signature is None:
        signature = (1, 1)
    return SliceSpec(args.n, args.k, signature)


def _emit(data) -> None:
    sys.stdout.write(dumps(data))


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer") from exc


# ---------------------------------------------------------------- commands


def cmd_fold(args) -> int:
    if args.fixture:
        q, a = named_fold(args.fixture)
        if args.period:
            a = AdmAut(q, a.vertex_perm, a.arrow_perm, args.period)
    else:
        if not (args.quiver and args.aut):
            raise UsageError("give --fixture or both --quiver and --aut")
        q = Quiver.from_json(_read_json(args.quiver))
        aut = _read_json(args.aut)
        if args.period:
            aut = {**aut, "period": args.period}
        a = AdmAut.from_json(q, aut)
    sq = split_quotient(q, a)
    original, folded = cartan(q, a), cartan(sq.split, sq.split_aut)
    ok = split_cartan_matches_transpose(sq)
    _emit({
        "split": sq.split.to_json(),
        "split_aut": sq.split_aut.to_json(),
        "cartan": {"labels": [encode_id(i) for i in original.labels],
                   "entries": [list(r) for r in original.entries]},
        "split_cartan": {"labels": [encode_id(i) for i in folded.labels],
                         "entries": [list(r) for r in folded.entries]},
        "transpose_check": ok,
    })
    return 0 if ok else 1


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    opts = SuiteOptions(args.n, args.k, _signature(args.signature), args.max_dim, args.bound)
    if (args.n is None) != (args.k is None):
        raise UsageError("--n and --k go together")
    if args.k is not None and args.k == args.n and opts.signature is None:
        opts.signature = (1, 1)
    if args.replay is not None:
        fn = SUITES[args.suite]
        result = fn(args.replay, opts, 0) if args.suite == "cartan" else fn(args.replay, opts)
        _emit({"suite": args.suite, "seed": args.replay, "status": result.status,
               "failures": result.failures, "info": _plain(result.info)})
        return 1 if result.status == "fail" else 0
    report = run_suite(args.suite, args.trials, seed, opts)
    quota_ok = report.quota_met(args.quota)
    status = "pass"
    if report.failures:
        status = "fail"
    elif not quota_ok:
        status = "insufficient samples"
    out = {
        "suite": args.suite,
        "seed": seed,
        "trials": {"requested": report.requested, "completed": report.completed,
                   "skipped": report.skipped},
        "failures": [{"seed": r.seed, "messages": r.failures, "info": _plain(r.info)}
                     for r in report.failures],
        "skipped_seeds": [r.seed for r in report.results if r.status == SKIP],
        "status": status,
    }
    if args.timing:
        out["wall_time"] = round(report.wall_time, 3)
    _emit(out)
    return 0 if status == "pass" else 1


def _plain(value):
    """Make trial info JSON-friendly."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def cmd_phi1(args) -> int:
    spec = _spec(args)
    x = datum_from_json(_read_json(args.datum))
    if not (in_lambda(x) and is_stable(x)):
        raise UsageError("phi1 needs a stable datum satisfying the moment relation")
    X = phi1(spec, x, check=False)
    try:
        half_dims(spec.n, x.v)
        ctx = type_a_context(spec.n, x.v, x.w, spec.signature)
        theta_check = check_involution_correspondence(spec, ctx, x)
    except ValueError:
        theta_check = None  # theta needs v_i = v_(2n-i)
    _emit({
        "matrix": matrix_to_json(X),
        "in_slice": in_slice(spec, X),
        "jordan_type": list(jordan_type_nilpotent(X).parts),
        "form_type": build_form(spec).kind,
        "theta_check": theta_check,
    })
    return 0


def cmd_embed(args) -> int:
    ctx = context_from_json(_read_json(args.context))
    y = datum_from_json(_read_json(args.datum), quiver=ctx.split.split)
    dec = Decomposition.from_dict(y.v)
    problems = decomposition_violations(ctx, dec)
    if problems:
        raise UsageError("; ".join(problems))
    if y.w != ctx.w_split:
        raise UsageError("framing of the split datum does not match the context")
    _emit(datum_to_json(psi_embed(ctx, dec, y)))
    return 0


def cmd_classify(args) -> int:
    ctx = context_from_json(_read_json(args.context))
    x = datum_from_json(_read_json(args.datum), quiver=ctx.quiver)
    if x.v != ctx.v or x.w != ctx.w:
        raise UsageError("datum dimensions do not match the context")
    if not is_stable(x):
        raise UsageError("classification needs a stable datum")
    found = classify_fixed(ctx, x)
    if not found:
        _emit({"fixed": False, "reason": found.reason})
        return 0
    _emit({
        "fixed": True,
        "decomposition": decomposition_to_json(found.decomposition),
        "g": group_to_json(found.g),
        "normalizer": group_to_json(found.normalizer),
        "preimage": datum_to_json(found.preimage),
    })
    return 0


def cmd_decompose(args) -> int:
    ctx = context_from_json(_read_json(args.context))
    _emit({"decompositions": [decomposition_to_json(d) for d in enumerate_decompositions(ctx)],
           "w_split": keyed_to_json(ctx.w_split)})
    return 0


def cmd_sample(args) -> int:
    if args.quiver:
        q = Quiver.from_json(_read_json(args.quiver))
        ref = None
    else:
        q = quiver_from_ref(args.quiver_ref)
        ref = args.quiver_ref
    v = keyed_from_json(_dims(args.v), q.vertices, int)
    w = keyed_from_json(_dims(args.w), q.vertices, int)
    seed = args.seed if args.seed is not None else _default_seed()
    x = sample_point(q, v, w, seed, delta_zero=args.delta_zero, require_stable=args.stable,
                     max_retries=args.retries, field_order=args.field_order,
                     bound=args.bound)
    if not x:
        _emit({"status": "failure", "reason": x.reason, "attempts": x.attempts})
        return 0
    _emit({"status": "ok", "stable": is_stable(x), "datum": datum_to_json(x, ref)})
    return 0


def _dims(text: str):
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    return _int_list(text)


def cmd_nonempty(args) -> int:
    spec = _spec(args)
    report = nonempty_typeA(spec, _int_list(args.v))
    _emit({"nonempty": report.nonempty, "s": list(report.s), "ell": report.ell})
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foldquiver",
                                     description="Diagram involutions of ADHM quiver data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fold", help="split quotient and Cartan transpose check")
    p.add_argument("--fixture")
    p.add_argument("--quiver")
    p.add_argument("--aut")
    p.add_argument("--period", type=int)
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("verify", help="run a randomised verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--signature")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--bound", type=_positive_int, default=3, help="random entries lie in [-bound, bound]")
    p.add_argument("--quota", type=float, default=0.8,
                   help="minimum fraction of completed trials")
    p.add_argument("--replay", type=int, metavar="SUBSEED", help="rerun a single trial")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.set_defaults(func=cmd_verify)

    def slice_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--signature", help="w_plus,w_minus of sigma_n (k = n only)")

    p = sub.add_parser("phi1", help="slice element of a type-A datum")
    p.add_argument("datum", help="ADHM JSON file or - for stdin")
    slice_args(p)
    p.set_defaults(func=cmd_phi1)

    for name, func, text in (("embed", cmd_embed, "embed a split-quotient datum"),
                             ("classify", cmd_classify, "classify a fixed stable datum")):
        p = sub.add_parser(name, help=text)
        p.add_argument("datum")
        p.add_argument("--context", required=True, help="fold context JSON")
        p.set_defaults(func=func)

    p = sub.add_parser("decompose", help="list the components D(v)")
    p.add_argument("--context", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("sample", help="sample a point of Lambda(V, W)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--quiver-ref", help="fixture name such as A3, D4 or A5-involution")
    group.add_argument("--quiver", help="quiver JSON file")
    p.add_argument("--v", required=True, help="'1,2,1' in vertex order or a JSON object")
    p.add_argument("--w", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--stable", action="store_true")
    p.add_argument("--delta-zero", action="store_true")
    p.add_argument("--retries", type=int, default=50)
    p.add_argument("--bound", type=_positive_int, default=3, help="random entries lie in [-bound, bound]")
    p.add_argument("--field-order", type=int, default=2)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("nonempty", help="nonemptiness test for the small type-A case")
    slice_args(p)
    p.add_argument("--v", required=True, help="v_1..v_n or the full symmetric vector")
    p.set_defaults(func=cmd_nonempty)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
