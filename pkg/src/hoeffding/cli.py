"""Command-line front end.

Verbs map one-to-one onto the engine operations; every input is a UTF-8
JSON document and every output is TSV (default) or JSON with rationals
rendered as "p/q" text. Exit codes: 0 success, 1 when check/classify/
recursion finds a violation (with a machine-readable witness on the first
lines), 2 on parse or validation errors (one-line diagnostic on stderr).
Output is byte-deterministic for identical inputs, seeds included.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .dynamics import (
    Classification,
    ClassificationKind,
    classify,
    moment_recursion_residual,
    recover_beta,
)
from .engine import (
    DecomposabilityReport,
    HoeffdingDecomposition,
    Verdict,
    canonical_degenerate_kernel,
    check_decomposable,
    hoeffding_decomposition,
    level_subspace_check,
)
from .errors import HoeffdingError, ParseError
from .measures import DeFinettiMeasure, parse_measure_spec
from .montecarlo import (
    SampleReport,
    ComparisonRow,
    compare_exact_empirical,
    parse_urn_spec,
    urn_histogram,
)
from .rationals import binom, format_rational, parse_rational
from .symmetric import SymmetricFunction, inner_product, parse_statistic_spec


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse's SystemExit replaced by ParseError
        raise ParseError(message)


def _build_parser() -> _Parser:
    # --format is global but accepted on either side of the verb
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("tsv", "json"), default="tsv")

    parser = _Parser(prog="hoeffding", description=__doc__, parents=[shared])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("moments", parents=[shared], help="moment sequence of a measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser(
        "probabilities", parents=[shared], help="configuration probabilities at one order"
    )
    p.add_argument("--measure", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser(
        "kernel", parents=[shared], help="canonical completely degenerate kernel"
    )
    p.add_argument("--measure", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser(
        "project", parents=[shared], help="orthogonal decomposition of a statistic"
    )
    p.add_argument("--measure", required=True)
    p.add_argument("--statistic", required=True)

    p = sub.add_parser("check", parents=[shared], help="decomposability residual scan")
    p.add_argument("--measure", required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument(
        "--method",
        choices=("prop1", "weakindep", "definition", "all"),
        default="all",
        help="prop1: alternating conditional-probability residuals; "
        "weakindep: symmetrized overlap conditionals of the canonical "
        "kernel; definition: per-level subspace equality by exact rank",
    )

    p = sub.add_parser(
        "classify", parents=[shared], help="i.i.d. / Polya / not-decomposable verdict"
    )
    p.add_argument("--measure", required=True)
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser(
        "recover-beta", parents=[shared], help="Beta parameters from two moments"
    )
    p.add_argument("--c1", required=True)
    p.add_argument("--c2", required=True)

    p = sub.add_parser("recursion", parents=[shared], help="moment recursion residuals")
    p.add_argument("--measure", required=True)
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser(
        "simulate", parents=[shared], help="seeded sampling with exact comparison"
    )
    p.add_argument("--measure")
    p.add_argument("--urn")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    return parser


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _frac(value: Fraction) -> str:
    return format_rational(value)


# ---------------------------------------------------------------------------
# report rendering / parsing
# ---------------------------------------------------------------------------


def render_report(report, fmt: str, measure: Optional[DeFinettiMeasure] = None) -> str:
    """Render any report object; stable field ordering in both formats.

    For decompositions, passing the measure adds exact orthogonality-check
    footer rows to the TSV rendering.
    """
    if isinstance(report, HoeffdingDecomposition):
        text = _render_decomposition(report, fmt, measure)
    elif isinstance(report, DecomposabilityReport):
        text = _render_decomposability(report, fmt)
    elif isinstance(report, Classification):
        text = _render_classification(report, fmt)
    elif isinstance(report, SampleReport):
        text = _render_sample(report, fmt)
    else:
        raise TypeError(f"no renderer for {type(report).__name__}")
    return text if text.endswith("\n") else text + "\n"


def parse_report(text: str):
    """Inverse of ``render_report(..., "json")`` for all four report types."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    tag = payload.get("report")
    if tag == "decomposition":
        return HoeffdingDecomposition(
            n=payload["n"],
            measure_digest=payload["measure"],
            components=tuple(
                SymmetricFunction(tuple(parse_rational(v) for v in comp))
                for comp in payload["components"]
            ),
            mean=parse_rational(payload["mean"]),
        )
    if tag == "decomposability":
        residuals = {}
        cross = {}
        for row in payload["residuals"]:
            triple = (row["n"], row["u"], row["z"])
            residuals[triple] = parse_rational(row["prop1"])
            cross[triple] = parse_rational(row["weakindep"])
        witness = payload["witness"]
        return DecomposabilityReport(
            n_max=payload["n_max"],
            residuals=residuals,
            cross_residuals=cross,
            verdict=Verdict(payload["verdict"]),
            witness=tuple(witness) if witness is not None else None,
        )
    if tag == "classification":
        witness = payload["witness"]
        if isinstance(witness, list):
            witness = tuple(witness)
        return Classification(
            kind=ClassificationKind(payload["kind"]),
            iid_p=_maybe_rational(payload["p"]),
            polya_alpha=_maybe_rational(payload["alpha"]),
            polya_beta=_maybe_rational(payload["beta"]),
            witness=witness,
            verified_order=payload["verified_order"],
        )
    if tag == "sample":
        comparison = payload["comparison"]
        rows = None
        if comparison is not None:
            rows = tuple(
                ComparisonRow(
                    row["zeros"],
                    parse_rational(row["expected"]),
                    row["empirical"],
                    row["z"],
                )
                for row in comparison
            )
        return SampleReport(
            n=payload["n"],
            trials=payload["trials"],
            seed=payload["seed"],
            zero_count_histogram=tuple(payload["histogram"]),
            comparison=rows,
        )
    raise ParseError(f"unknown report tag: {tag!r}")


def _maybe_rational(value):
    return None if value is None else parse_rational(value)


def _render_decomposition(
    report: HoeffdingDecomposition, fmt: str, measure: Optional[DeFinettiMeasure]
) -> str:
    if fmt == "json":
        return json.dumps(
            {
                "report": "decomposition",
                "n": report.n,
                "measure": report.measure_digest,
                "mean": _frac(report.mean),
                "components": [
                    [_frac(v) for v in comp.values] for comp in report.components
                ],
            }
        )
    lines = [f"measure\t{report.measure_digest}", f"mean\t{_frac(report.mean)}"]
    for k, comp in enumerate(report.components):
        values = "\t".join(_frac(v) for v in comp.values)
        lines.append(f"component\t{k}\t{values}")
    if measure is not None:
        for i in range(len(report.components)):
            for j in range(i + 1, len(report.components)):
                product = inner_product(
                    report.components[i], report.components[j], measure
                )
                lines.append(f"orthogonality\t{i}:{j}\t{_frac(product)}")
    return "\n".join(lines) + "\n"


def _witness_line(report: DecomposabilityReport) -> str:
    n, u, z = report.witness
    residual = report.residuals[report.witness]
    return f"witness\tn={n} u={u} z={z} residual={_frac(residual)}"


def _render_decomposability(report: DecomposabilityReport, fmt: str) -> str:
    triples = sorted(report.residuals)
    if fmt == "json":
        return json.dumps(
            {
                "report": "decomposability",
                "n_max": report.n_max,
                "verdict": report.verdict.value,
                "witness": list(report.witness) if report.witness else None,
                "residuals": [
                    {
                        "n": n,
                        "u": u,
                        "z": z,
                        "prop1": _frac(report.residuals[(n, u, z)]),
                        "weakindep": _frac(report.cross_residuals[(n, u, z)]),
                    }
                    for (n, u, z) in triples
                ],
            }
        )
    lines = [f"verdict\t{report.verdict.value}"]
    if report.witness is not None:
        lines.append(_witness_line(report))
    lines.append("n\tu\tz\tprop1\tweakindep")
    for n, u, z in triples:
        lines.append(
            f"{n}\t{u}\t{z}\t{_frac(report.residuals[(n, u, z)])}"
            f"\t{_frac(report.cross_residuals[(n, u, z)])}"
        )
    return "\n".join(lines) + "\n"


def _render_classification(result: Classification, fmt: str) -> str:
    witness = result.witness
    if fmt == "json":
        return json.dumps(
            {
                "report": "classification",
                "kind": result.kind.value,
                "p": None if result.iid_p is None else _frac(result.iid_p),
                "alpha": None if result.polya_alpha is None else _frac(result.polya_alpha),
                "beta": None if result.polya_beta is None else _frac(result.polya_beta),
                "witness": list(witness) if isinstance(witness, tuple) else witness,
                "verified_order": result.verified_order,
            }
        )
    lines = [f"kind\t{result.kind.value}"]
    if result.kind is ClassificationKind.NOT_DECOMPOSABLE:
        if isinstance(witness, tuple):
            n, u, z = witness
            lines.append(f"witness\tn={n} u={u} z={z}")
        else:
            lines.append(f"witness\tmoment_order={witness}")
    if result.iid_p is not None:
        lines.append(f"p\t{_frac(result.iid_p)}")
    if result.polya_alpha is not None:
        lines.append(f"alpha\t{_frac(result.polya_alpha)}")
        lines.append(f"beta\t{_frac(result.polya_beta)}")
    lines.append(f"verified_order\t{result.verified_order}")
    return "\n".join(lines) + "\n"


def _float_repr(value: float) -> str:
    return repr(value)


def _render_sample(report: SampleReport, fmt: str) -> str:
    if fmt == "json":
        comparison = None
        if report.comparison is not None:
            comparison = [
                {
                    "zeros": row.zeros,
                    "expected": _frac(row.expected_probability),
                    "empirical": row.empirical_frequency,
                    "z": row.z_score,
                }
                for row in report.comparison
            ]
        return json.dumps(
            {
                "report": "sample",
                "n": report.n,
                "trials": report.trials,
                "seed": report.seed,
                "histogram": list(report.zero_count_histogram),
                "comparison": comparison,
            }
        )
    lines = [
        f"n\t{report.n}",
        f"trials\t{report.trials}",
        f"seed\t{report.seed}",
    ]
    if report.comparison is None:
        lines.append("j\tcount")
        for j, count in enumerate(report.zero_count_histogram):
            lines.append(f"{j}\t{count}")
    else:
        lines.append("j\tcount\texpected\tempirical\tz")
        for row in report.comparison:
            count = report.zero_count_histogram[row.zeros]
            lines.append(
                f"{row.zeros}\t{count}\t{_frac(row.expected_probability)}"
                f"\t{_float_repr(row.empirical_frequency)}"
                f"\t{_float_repr(row.z_score)}"
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verb handlers
# ---------------------------------------------------------------------------


def _cmd_moments(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    if args.max_n < 0:
        raise ParseError("--max-n must be non-negative")
    values = [measure.moment(n) for n in range(args.max_n + 1)]
    if args.format == "json":
        return 0, json.dumps(
            {"measure": measure.describe(), "moments": [_frac(v) for v in values]}
        ) + "\n"
    lines = ["n\tmoment"] + [f"{n}\t{_frac(v)}" for n, v in enumerate(values)]
    return 0, "\n".join(lines) + "\n"


def _cmd_probabilities(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    if args.n < 0:
        raise ParseError("--n must be non-negative")
    n = args.n
    rows = [(j, measure.config_probability(n, j)) for j in range(n + 1)]
    if args.format == "json":
        return 0, json.dumps(
            {
                "measure": measure.describe(),
                "n": n,
                "probabilities": [
                    {"j": j, "probability": _frac(p), "weighted": _frac(binom(n, j) * p)}
                    for j, p in rows
                ],
            }
        ) + "\n"
    lines = ["j\tprobability\tweighted"]
    for j, p in rows:
        lines.append(f"{j}\t{_frac(p)}\t{_frac(binom(n, j) * p)}")
    return 0, "\n".join(lines) + "\n"


def _cmd_kernel(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    kernel = canonical_degenerate_kernel(measure, args.n)
    if args.format == "json":
        return 0, json.dumps(
            {
                "measure": measure.describe(),
                "n": args.n,
                "kernel": [_frac(v) for v in kernel.values],
            }
        ) + "\n"
    lines = ["k\tvalue"] + [f"{k}\t{_frac(v)}" for k, v in enumerate(kernel.values)]
    return 0, "\n".join(lines) + "\n"


def _cmd_project(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    statistic = parse_statistic_spec(_read(args.statistic))
    report = hoeffding_decomposition(statistic, measure)
    return 0, render_report(report, args.format, measure=measure)


def _cmd_check(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    if args.max_n < 2:
        raise ParseError("--max-n must be at least 2")
    method = args.method
    code = 0
    if method in ("prop1", "weakindep", "all"):
        report = check_decomposable(measure, args.max_n)
        if report.verdict is Verdict.NOT_DECOMPOSABLE:
            code = 1
    else:
        report = None

    definition_rows = None
    if method in ("definition", "all"):
        definition_rows = [
            (n, level_subspace_check(measure, n)) for n in range(2, args.max_n + 1)
        ]
        if any(not ok for _, ok in definition_rows):
            code = 1

    if method == "definition":
        return code, _render_definition_only(
            definition_rows, args.max_n, args.format
        )
    if method == "all":
        rendered = render_report(report, args.format)
        if args.format == "json":
            payload = json.loads(rendered)
            payload["definition"] = [
                {"n": n, "equal": ok} for n, ok in definition_rows
            ]
            return code, json.dumps(payload) + "\n"
        extra = ["definition\tn\tequal"] + [
            f"definition\t{n}\t{'true' if ok else 'false'}"
            for n, ok in definition_rows
        ]
        return code, rendered + "\n".join(extra) + "\n"
    # single residual route: render that route's column only
    triples = sorted(report.residuals)
    source = report.residuals if method == "prop1" else report.cross_residuals
    if args.format == "json":
        return code, json.dumps(
            {
                "report": "decomposability",
                "n_max": report.n_max,
                "method": method,
                "verdict": report.verdict.value,
                "witness": list(report.witness) if report.witness else None,
                "residuals": [
                    {"n": n, "u": u, "z": z, "residual": _frac(source[(n, u, z)])}
                    for (n, u, z) in triples
                ],
            }
        ) + "\n"
    lines = [f"verdict\t{report.verdict.value}"]
    if report.witness is not None:
        n, u, z = report.witness
        lines.append(f"witness\tn={n} u={u} z={z} residual={_frac(source[report.witness])}")
    lines.append("n\tu\tz\tresidual")
    for n, u, z in triples:
        lines.append(f"{n}\t{u}\t{z}\t{_frac(source[(n, u, z)])}")
    return code, "\n".join(lines) + "\n"


def _render_definition_only(rows, n_max: int, fmt: str) -> str:
    verdict = (
        Verdict.DECOMPOSABLE_UP_TO_N_MAX
        if all(ok for _, ok in rows)
        else Verdict.NOT_DECOMPOSABLE
    )
    if fmt == "json":
        return json.dumps(
            {
                "report": "subspace-check",
                "n_max": n_max,
                "verdict": verdict.value,
                "levels": [{"n": n, "equal": ok} for n, ok in rows],
            }
        ) + "\n"
    lines = [f"verdict\t{verdict.value}"]
    first_bad = next((n for n, ok in rows if not ok), None)
    if first_bad is not None:
        lines.append(f"witness\tn={first_bad} equal=false")
    lines.append("n\tequal")
    for n, ok in rows:
        lines.append(f"{n}\t{'true' if ok else 'false'}")
    return "\n".join(lines) + "\n"


def _cmd_classify(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    result = classify(measure, args.max_n)
    code = 1 if result.kind is ClassificationKind.NOT_DECOMPOSABLE else 0
    return code, render_report(result, args.format)


def _cmd_recover_beta(args) -> tuple[int, str]:
    alpha, beta = recover_beta(parse_rational(args.c1), parse_rational(args.c2))
    if args.format == "json":
        return 0, json.dumps({"alpha": _frac(alpha), "beta": _frac(beta)}) + "\n"
    return 0, f"alpha\t{_frac(alpha)}\nbeta\t{_frac(beta)}\n"


def _cmd_recursion(args) -> tuple[int, str]:
    measure = parse_measure_spec(_read(args.measure))
    if args.max_n < 2:
        raise ParseError("--max-n must be at least 2")
    rows = [
        (n, moment_recursion_residual(measure, n)) for n in range(2, args.max_n + 1)
    ]
    witness = next((n for n, r in rows if r != 0), None)
    code = 0 if witness is None else 1
    if args.format == "json":
        return code, json.dumps(
            {
                "measure": measure.describe(),
                "witness": witness,
                "residuals": [{"n": n, "residual": _frac(r)} for n, r in rows],
            }
        ) + "\n"
    lines = []
    if witness is not None:
        residual = dict(rows)[witness]
        lines.append(f"witness\tn={witness} residual={_frac(residual)}")
    lines.append("n\tresidual")
    for n, r in rows:
        lines.append(f"{n}\t{_frac(r)}")
    return code, "\n".join(lines) + "\n"


def _cmd_simulate(args) -> tuple[int, str]:
    if (args.measure is None) == (args.urn is None):
        raise ParseError("exactly one of --measure and --urn is required")
    if args.measure is not None:
        measure = parse_measure_spec(_read(args.measure))
        report = compare_exact_empirical(measure, args.n, args.trials, args.seed)
    else:
        spec = parse_urn_spec(_read(args.urn))
        report = urn_histogram(spec, args.n, args.trials, args.seed)
    return 0, render_report(report, args.format)


_HANDLERS = {
    "moments": _cmd_moments,
    "probabilities": _cmd_probabilities,
    "kernel": _cmd_kernel,
    "project": _cmd_project,
    "check": _cmd_check,
    "classify": _cmd_classify,
    "recover-beta": _cmd_recover_beta,
    "recursion": _cmd_recursion,
    "simulate": _cmd_simulate,
}


def dispatch(argv: list[str]) -> tuple[int, str, str]:
    """Run one command; returns (exit code, stdout text, stderr text)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        code, output = _HANDLERS[args.verb](args)
        return code, output, ""
    except ParseError as exc:
        return 2, "", f"error: {exc}\n"
    except HoeffdingError as exc:
        return 2, "", f"error: {exc}\n"


def main(argv: Optional[list[str]] = None) -> int:
    code, out, err = dispatch(sys.argv[1:] if argv is None else argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
