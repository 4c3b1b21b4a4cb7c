"""``qss`` command line: table verification, seeded experiments, error-rate estimates."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .errors import ConfigError
from .experiments import (
    ADVERSARY_CHOICES,
    RunSpec,
    build_adversary,
    dumps,
    estimate_error_rate,
    run_experiment,
    verify_tables,
)
from .protocol import DEFAULT_ERROR_THRESHOLD, ProtocolConfig

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def cmd_verify_tables(out: Optional[TextIO] = None, table=None) -> int:
    out = out or sys.stdout
    start = time.perf_counter()
    cells = verify_tables(table) if table is not None else verify_tables()
    print(f"{'op':<3} {'input':<6} {'expected':<9} {'computed':<9} result", file=out)
    for c in cells:
        print(f"{c.op:<3} {c.state:<6} {c.expected:<9} {c.computed:<9} {'PASS' if c.ok else 'FAIL'}", file=out)
    passed = sum(c.ok for c in cells)
    print(f"{passed}/{len(cells)} cells match ({time.perf_counter() - start:.3f} s)", file=out)
    return EXIT_OK if passed == len(cells) else EXIT_FAILURE


def cmd_run(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    config = ProtocolConfig(
        n_parties=args.parties,
        k=args.check_k,
        j=args.auth_j,
        error_threshold=args.threshold,
        variant=args.variant,
        seed=args.seed,
    )
    spec = RunSpec(
        config=config,
        adversary=build_adversary(args.adversary, args.parties),
        trials=args.trials,
        message_hex=args.message_hex,
        message_file=args.message_file,
        out=args.out,
    )
    lines: list[str] = []
    report = run_experiment(spec, sink=lambda rec: lines.append(dumps(rec)))
    text = "\n".join(lines) + "\n"
    if spec.out is None:
        out.write(text)
    else:
        try:
            Path(spec.out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {spec.out}: {exc.strerror}") from exc
    agg = report.aggregate
    print(
        f"{agg['trials']} trials: {agg['completed']} completed, "
        f"{agg['aborted_transit_check']} aborted at transit check, "
        f"{agg['aborted_authentication']} aborted at authentication; "
        f"detection rate {agg['detection_rate']:.4f} "
        f"[{agg['detection_ci'][0]:.4f}, {agg['detection_ci'][1]:.4f}] "
        f"in {report.duration_s:.2f} s",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_error_rate(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    record = estimate_error_rate(args.adversary, args.pairs, args.seed,
                                 single_basis=args.single_basis, four_op_set=args.four_op_set)
    print(dumps(record), file=out or sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qss", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-tables", help="check every transform-table cell against the amplitude engine")

    run = sub.add_parser("run", help="run seeded protocol sessions and write JSON-lines records")
    msg = run.add_mutually_exclusive_group(required=True)
    msg.add_argument("--message-hex", metavar="STR", help="message as hex digits, 4 bits each")
    msg.add_argument("--message-file", metavar="PATH", type=Path, help="message as raw bytes, 8 bits each")
    run.add_argument("--parties", type=int, default=3, help="sender plus sharers (>= 3)")
    run.add_argument("--check-k", type=int, default=64, help="transit checking pairs")
    run.add_argument("--auth-j", type=int, default=32, help="authentication pairs")
    run.add_argument("--threshold", type=float, default=DEFAULT_ERROR_THRESHOLD)
    run.add_argument("--adversary", choices=ADVERSARY_CHOICES, default="none")
    run.add_argument("--variant", action="store_true", help="run the reverse-direction variant")
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", type=Path, metavar="PATH", help="output file (default: stdout)")

    err = sub.add_parser("error-rate", help="estimate the per-pair transit error rate")
    err.add_argument("--adversary", choices=ADVERSARY_CHOICES, default="intercept-resend")
    err.add_argument("--pairs", type=int, default=100_000)
    err.add_argument("--seed", type=int, default=0)
    err.add_argument("--single-basis", action="store_true", help="check in the diagonal basis only")
    err.add_argument("--four-op-set", action="store_true", help="sharers draw from U1..U4 only")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-tables":
            return cmd_verify_tables()
        if args.command == "run":
            return cmd_run(args)
        return cmd_error_rate(args)
    except ConfigError as exc:
        print(f"qss: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
