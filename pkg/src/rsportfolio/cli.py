"""Command-line driver: ``rsportfolio {matrix,policy,eval,selfcheck}``.

Exit codes: 0 success, 1 self-check failure, 2 usage error, 3 data or
consistency error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from .evaluation import (
    EvalConfig, OverlapError, ReportRow, build_eval_matrix, evaluate_vs_baseline, evaluate_vs_exploiter,
    summarize, to_csv,
)
from .player import McConfig
from .portfolio import (
    PolicyFormatError, SeedPolicy, SolverConfig, best_seed, read_policy, solve_nash, sparsify, write_policy,
)
from .prng import SplitMix64
from .selfcheck import run_selfcheck
from .seedmatrix import (
    HELDOUT_OFFSET, FingerprintMismatch, MatchupConfig, MatrixFormatError, build_matrix, read_matrix,
    write_matrix,
)

DEFAULT_BASE_SEED = 1
DEFAULT_EVAL_SEED = 0x5EED

log = logging.getLogger("rsportfolio")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def tool_version() -> str:
    try:
        return version("rsportfolio")
    except PackageNotFoundError:
        return "unknown"


def write_manifest(path: Path, **items) -> None:
    lines = [f"tool_version={tool_version()}"] + [f"{k}={v}" for k, v in items.items()]
    path.write_text("\n".join(lines) + "\n")


def read_manifest(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k] = v
    return out


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _kprimes(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad K' list {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("K' values must be positive")
    return vals


def _add_matchup_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--board", type=int, choices=range(2, 20), default=5, metavar="{5|7|9}")
    p.add_argument("--playouts", type=_positive, default=20)
    p.add_argument("--komi", type=float, default=7.5)
    p.add_argument("--base-seed", type=int, default=DEFAULT_BASE_SEED)
    p.add_argument("--heldout-offset", type=int, default=HELDOUT_OFFSET)
    p.add_argument("--jobs", type=_positive, default=1)


def _matchup(args, k: int) -> MatchupConfig:
    if args.komi * 2 % 2 != 1:
        raise UsageError("komi must be a half-integer so games cannot be drawn")
    try:
        return MatchupConfig(
            board_size=args.board, komi=args.komi, mc=McConfig(args.playouts, komi=args.komi),
            K=k, base_seed=args.base_seed, heldout_offset=args.heldout_offset,
        )
    except ValueError as err:
        raise UsageError(str(err)) from None


def cmd_matrix(args) -> int:
    cfg = _matchup(args, args.k)
    out = Path(args.out)
    journal = Path(args.journal) if args.journal else out.with_name(out.name + ".journal")
    try:
        m = build_matrix(cfg, journal, args.jobs)
    except FingerprintMismatch as err:
        raise DataError(str(err)) from None
    write_matrix(out, m)
    write_manifest(
        out.with_name(out.name + ".manifest"), artifact="seedmatrix", fingerprint=m.fingerprint,
        board=cfg.board_size, K=cfg.K, playouts=cfg.mc.playouts_per_move, komi=cfg.komi,
        base_seed=cfg.base_seed, heldout_offset=cfg.heldout_offset, journal=journal,
    )
    print(f"wrote {out} (K={m.K}, fingerprint={m.fingerprint}, black win rate {m.entries.mean():.3f})")
    return 0


def cmd_policy(args) -> int:
    try:
        m = read_matrix(args.matrix)
    except MatrixFormatError as err:
        raise DataError(str(err)) from None
    if args.method == "bestseed":
        pol = SeedPolicy.from_best_seed(best_seed(m, args.tie_break_seed))
    else:
        eq = solve_nash(m, SolverConfig(method=args.solver))
        print(f"value={eq.value:.12g} duality_gap={eq.duality_gap:.3g} converged={eq.converged}")
        alpha = args.alpha if args.method == "sparsenash" else 0.0
        if not 0 <= alpha <= 1:
            raise UsageError("--alpha must lie in [0, 1]")
        x, y = (sparsify(eq.x, alpha), sparsify(eq.y, alpha)) if alpha else (eq.x, eq.y)
        pol = SeedPolicy.from_strategies(args.method, alpha, x, y)
    write_policy(args.out, pol)
    write_manifest(
        Path(args.out).with_name(Path(args.out).name + ".manifest"), artifact="seedpolicy",
        matrix=args.matrix, matrix_fingerprint=m.fingerprint, method=args.method, alpha=pol.alpha,
        tie_break_seed=args.tie_break_seed, solver=args.solver,
    )
    print(f"wrote {args.out}: {len(pol.black)} black seeds, {len(pol.white)} white seeds")
    return 0


def cmd_eval(args) -> int:
    try:
        pol = read_policy(args.policy)
    except PolicyFormatError as err:
        raise DataError(str(err)) from None
    try:
        econf = EvalConfig(args.heldout, 1, args.kprime, args.reps, args.eval_seed)
    except ValueError as err:
        raise UsageError(str(err)) from None
    k = max(max(pol.black), max(pol.white)) + 1
    cfg = _matchup(args, 2)  # game outcomes do not depend on K
    heldout = set(cfg.heldout_indices(econf.heldout_count))
    if heldout & (set(pol.black) | set(pol.white)):
        raise DataError("policy seeds overlap the held-out evaluation seeds")
    try:
        em = build_eval_matrix(pol.black, pol.white, econf, cfg, args.journal, args.jobs)
    except (OverlapError, FingerprintMismatch) as err:
        raise DataError(str(err)) from None
    rows = []
    for kp in econf.kprime_list:
        if kp == 1:
            rep = evaluate_vs_baseline(pol, em)
        else:
            rep = evaluate_vs_exploiter(pol, em, kp, econf.repetitions, SplitMix64(econf.eval_seed ^ kp))
        rows.append(ReportRow.from_report(args.method_name or pol.kind, cfg.board_size, args.k or k,
                                          pol.alpha, kp, rep))
    Path(args.out).write_text(to_csv(rows))
    write_manifest(
        Path(args.out).with_name(Path(args.out).name + ".manifest"), artifact="report", policy=args.policy,
        board=cfg.board_size, playouts=cfg.mc.playouts_per_move, komi=cfg.komi, base_seed=cfg.base_seed,
        heldout_offset=cfg.heldout_offset, heldout=econf.heldout_count,
        kprime=",".join(map(str, econf.kprime_list)), reps=econf.repetitions, eval_seed=econf.eval_seed,
        game_fingerprint=cfg.game_fingerprint(),
    )
    print(summarize(rows))
    return 0


def cmd_selfcheck(args) -> int:
    failures = run_selfcheck(args.fixtures)
    for f in failures:
        print(f"FAIL {f}")
    print("selfcheck passed" if not failures else f"selfcheck failed ({len(failures)} problems)")
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsportfolio", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", help="play the K x K seed matrix")
    _add_matchup_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--journal")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("policy", help="compute a seed policy from a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--method", choices=["bestseed", "nash", "sparsenash"], required=True)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--solver", choices=["lp", "regret"], default="lp")
    p.add_argument("--tie-break-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("eval", help="evaluate a policy against held-out seeds")
    _add_matchup_flags(p)
    p.add_argument("--policy", required=True)
    p.add_argument("--heldout", type=_positive, default=100)
    p.add_argument("--kprime", type=_kprimes, default=(1, 2, 4, 8, 16))
    p.add_argument("--reps", type=_positive, default=1000)
    p.add_argument("--eval-seed", type=int, default=DEFAULT_EVAL_SEED)
    p.add_argument("--k", type=int, help="training K, for the report only")
    p.add_argument("--method-name")
    p.add_argument("--journal")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("selfcheck", help="PRNG vectors, rules fixtures, Nash oracle")
    p.add_argument("--fixtures", help="alternative rules fixture file")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as err:
        print(f"rsportfolio: error: {err}", file=sys.stderr)
        return 2
    except DataError as err:
        print(f"rsportfolio: data error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
