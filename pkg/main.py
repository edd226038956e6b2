#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Точка входа CLI: доверительные интервалы для взаимной информации,
расчёт объёма выборки, моделирование и воспроизведение таблиц примеров.

Использование:
    python main.py interval --counts table.json --alpha 0.05 --method both
    python main.py interval --samples pairs.csv --mx 2 --my 3
    python main.py samplesize --gamma 0.15 --alpha 0.05 --mx 2 --my 2
    python main.py simulate --ber 0.1 --px 0.5 --n 100000 --reps 100000 --emit-cdf cdf.txt
    python main.py bound --epsilon-grid 0:2:201 --mx 2 --my 2 --compare-zhang
    python main.py reproduce --example 1

Коды выхода: 0 — успех, 2 — ошибка входных данных, 3 — параметр вне области.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from bounds import AlphabetPair, bound_grid, is_vacuous, parse_grid
from config import DEFAULT_ALPHA, DEFAULT_REPS, DEFAULT_SEED, DEFAULT_UNIT, PRECISION
from dist_core import (
    JointDistribution,
    MarginalDistribution,
    UnitTag,
    mutual_information,
    to_distribution,
)
from errors import DomainError, InputError, MiconfError
from intervals import IntervalMethod, interval, sample_size_thm3
from logging_config import setup_logging
from montecarlo import (
    GENERATOR_ID,
    QUANTILE_CONVENTION,
    ChannelKind,
    ChannelSpec,
    best_possible_interval,
    bsc_joint,
    cdf_lines,
    example_channel,
    example_empirical_counts,
    sampling_cdf,
)
from payloads import load_json_payload, load_samples_csv
from reports import (
    IntervalReport,
    IntervalRow,
    Metadata,
    ReproductionReport,
    SampleSizeReport,
    SimulationReport,
    render,
)

logger = logging.getLogger(__name__)


def _methods(choice: str) -> List[IntervalMethod]:
    if choice == "both":
        return [IntervalMethod.THM2, IntervalMethod.THM4]
    return [IntervalMethod(choice)]


def _row(method: str, lower: float, upper: float) -> IntervalRow:
    return IntervalRow(method=method, lower=lower, upper=upper, width=upper - lower)


def _precision(value: str) -> int:
    try:
        digits = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if not 1 <= digits <= 17:
        raise argparse.ArgumentTypeError(f"must lie in [1, 17], got {digits}")
    return digits


def _write_cdf(path: Path, lines: Sequence[str]) -> None:
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write CDF to {path}: {exc.strerror}") from exc
    logger.info("Wrote %d CDF points to %s", len(lines) - 1, path)


def cmd_interval(args: argparse.Namespace) -> IntervalReport:
    """Интервалы по выборке (CSV) или таблице частот (JSON)."""
    if args.samples is not None:
        if args.mx is None or args.my is None:
            raise InputError("--samples requires explicit --mx and --my")
        counts = load_samples_csv(args.samples, args.mx, args.my)
    else:
        payload = load_json_payload(args.counts)
        if isinstance(payload, JointDistribution):
            raise InputError("a joint distribution has no sample size n; pass counts or samples")
        counts = payload

    unit = UnitTag.parse(args.unit)
    results = [
        interval(counts, args.alpha, method, unit=unit, clamp=args.clamp)
        for method in _methods(args.method)
    ]
    epsilon = results[0].epsilon_used
    estimate = unit.convert(mutual_information(to_distribution(counts)))
    logger.info("Computed %d interval(s) for n=%d, epsilon=%.6g", len(results), counts.n, epsilon)

    return IntervalReport(
        unit=unit.value,
        n=counts.n,
        mx=counts.mx,
        my=counts.my,
        alpha=args.alpha,
        epsilon=epsilon,
        vacuous=is_vacuous(epsilon),
        clamp=args.clamp,
        mi_empirical=estimate,
        intervals=[_row(result.method.value, result.lower, result.upper) for result in results],
    )


def cmd_samplesize(args: argparse.Namespace) -> SampleSizeReport:
    """Объём выборки для заданной полуширины γ в единицах --unit."""
    unit = UnitTag.parse(args.unit)
    alphabet = AlphabetPair.from_sizes(args.mx, args.my)
    limit = unit.convert(math.log(alphabet.mx))
    if args.gamma >= limit:
        log_name = "log2" if unit is UnitTag.BITS else "ln"
        raise DomainError("gamma", args.gamma, f"gamma must be < {log_name}(mx)={limit:.6g}")
    plan = sample_size_thm3(unit.to_nats(args.gamma), args.alpha, alphabet)
    return SampleSizeReport(
        unit=unit.value,
        gamma=args.gamma,
        alpha=args.alpha,
        mx=args.mx,
        my=args.my,
        epsilon=plan.epsilon_solved,
        n_required=plan.n_required,
    )


def cmd_simulate(args: argparse.Namespace) -> SimulationReport:
    """Выборочная CDF plug-in оценки и её квантили для канала."""
    unit = UnitTag.parse(args.unit)
    spec = ChannelSpec(
        ber=args.ber,
        input_dist=MarginalDistribution([args.px, 1.0 - args.px]),
        kind=ChannelKind(args.channel),
    )
    joint = bsc_joint(spec)
    cdf = sampling_cdf(joint, args.n, args.reps, args.seed, workers=args.workers)
    lower, upper = best_possible_interval(cdf, args.alpha)
    report = SimulationReport(
        unit=unit.value,
        channel=spec.kind.value,
        ber=args.ber,
        px=args.px,
        n=args.n,
        reps=args.reps,
        alpha=args.alpha,
        true_mi=unit.convert(mutual_information(joint)),
        quantile_lower=unit.convert(lower),
        quantile_upper=unit.convert(upper),
        width=unit.convert(upper - lower),
        seed=args.seed,
        generator_id=cdf.generator_id,
        metadata=Metadata(generator_id=cdf.generator_id, quantile_convention=QUANTILE_CONVENTION),
    )
    if args.emit_cdf is not None:
        _write_cdf(args.emit_cdf, cdf_lines(cdf, unit))
    return report


def cmd_bound(args: argparse.Namespace) -> List[List[str]]:
    """CSV-таблица ΔI(ε) (и границы Чжана) на сетке ε."""
    start, stop, count = parse_grid(args.epsilon_grid)
    unit = UnitTag.parse(args.unit)
    alphabet = AlphabetPair.from_sizes(args.mx, args.my)
    rows = bound_grid(start, stop, count, alphabet, compare_zhang=args.compare_zhang)

    header = ["epsilon", "delta_I"]
    if args.compare_zhang:
        header.append("delta_I_zhang")
    table = [header]
    digits = args.precision
    for row in rows:
        line = [f"{row.epsilon:.{digits}g}", f"{unit.convert(row.delta):.{digits}g}"]
        if args.compare_zhang:
            zhang = "" if row.delta_zhang is None else f"{unit.convert(row.delta_zhang):.{digits}g}"
            line.append(zhang)
        table.append(line)
    return table


def cmd_reproduce(args: argparse.Namespace) -> ReproductionReport:
    """Таблица сравнения для одного из двух числовых примеров."""
    unit = UnitTag.parse(args.unit)
    spec = example_channel(args.example)
    joint = bsc_joint(spec)
    counts = example_empirical_counts(args.example)

    cdf = sampling_cdf(joint, counts.n, args.reps, args.seed, workers=args.workers)
    lower, upper = best_possible_interval(cdf, args.alpha)
    rows = [_row("approximated best possible", unit.convert(lower), unit.convert(upper))]
    for method in (IntervalMethod.THM2, IntervalMethod.THM4):
        result = interval(counts, args.alpha, method, unit=unit)
        rows.append(_row(method.value, result.lower, result.upper))

    report = ReproductionReport(
        unit=unit.value,
        example=args.example,
        ber=spec.ber,
        px=[float(p) for p in spec.input_dist.probs],
        n=counts.n,
        reps=args.reps,
        alpha=args.alpha,
        seed=args.seed,
        true_mi=unit.convert(mutual_information(joint)),
        empirical_counts=counts.counts.tolist(),
        mi_empirical=unit.convert(mutual_information(to_distribution(counts))),
        rows=rows,
        metadata=Metadata(generator_id=GENERATOR_ID, quantile_convention=QUANTILE_CONVENTION),
    )
    if args.emit_cdf is not None:
        _write_cdf(args.emit_cdf, cdf_lines(cdf, unit))
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miconf",
        description="Distribution-free confidence intervals for mutual information",
    )
    parser.add_argument("--log-level", default=None, help="Override MICONF_LOG_LEVEL")
    parser.add_argument(
        "--precision", type=_precision, default=PRECISION, help="Significant digits in output"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_interval = sub.add_parser("interval", help="Confidence intervals from samples or counts")
    source = p_interval.add_mutually_exclusive_group(required=True)
    source.add_argument("--samples", type=Path, help="CSV with two columns of 1-based labels")
    source.add_argument("--counts", type=Path, help="JSON {mx, my, counts}")
    p_interval.add_argument("--mx", type=int, help="Alphabet size of X (required with --samples)")
    p_interval.add_argument("--my", type=int, help="Alphabet size of Y (required with --samples)")
    p_interval.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p_interval.add_argument("--method", choices=["thm2", "thm4", "both"], default="both")
    p_interval.add_argument("--unit", choices=["bits", "nats"], default=DEFAULT_UNIT)
    p_interval.add_argument("--clamp", action="store_true", help="Clip endpoints to [0, log mx]")
    p_interval.set_defaults(handler=cmd_interval)

    p_size = sub.add_parser("samplesize", help="Sample size for a given half-width")
    p_size.add_argument("--gamma", type=float, required=True, help="Half-width in --unit")
    p_size.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p_size.add_argument("--mx", type=int, required=True)
    p_size.add_argument("--my", type=int, required=True)
    p_size.add_argument("--unit", choices=["bits", "nats"], default=DEFAULT_UNIT)
    p_size.set_defaults(handler=cmd_samplesize)

    p_sim = sub.add_parser("simulate", help="Sampling CDF of the plug-in estimate")
    p_sim.add_argument("--channel", choices=[kind.value for kind in ChannelKind], default="bsc")
    p_sim.add_argument("--ber", type=float, required=True)
    p_sim.add_argument("--px", type=float, required=True, help="P(X = 1)")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p_sim.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument("--workers", type=int, default=None)
    p_sim.add_argument("--unit", choices=["bits", "nats"], default=DEFAULT_UNIT)
    p_sim.add_argument("--emit-cdf", type=Path, default=None)
    p_sim.set_defaults(handler=cmd_simulate)

    p_bound = sub.add_parser("bound", help="Tabulate the MI difference bound")
    p_bound.add_argument("--epsilon-grid", required=True, help="start:stop:count")
    p_bound.add_argument("--mx", type=int, required=True)
    p_bound.add_argument("--my", type=int, required=True)
    p_bound.add_argument("--compare-zhang", action="store_true")
    p_bound.add_argument("--unit", choices=["bits", "nats"], default="nats")
    p_bound.set_defaults(handler=cmd_bound)

    p_repro = sub.add_parser("reproduce", help="Comparison table for a numerical example")
    p_repro.add_argument("--example", type=int, choices=[1, 2], required=True)
    p_repro.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p_repro.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p_repro.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_repro.add_argument("--workers", type=int, default=None)
    p_repro.add_argument("--unit", choices=["bits", "nats"], default=DEFAULT_UNIT)
    p_repro.add_argument("--emit-cdf", type=Path, default=None)
    p_repro.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)
    logger.info("Running command %s", args.command)

    try:
        result = args.handler(args)
    except MiconfError as exc:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"miconf: error: {exc.message}", file=sys.stderr)
        return exc.exit_code

    if isinstance(result, list):
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerows(result)
    else:
        print(render(result, args.precision))
    return 0


if __name__ == "__main__":
    sys.exit(main())
