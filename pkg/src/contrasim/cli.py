"""Command-line front end: load a model, run a check, emit verdicts and
certificates.

Exit codes: 0 when the checked relation holds, 1 when it fails, 2 on usage,
parse, or expansion-budget errors.  Certificates for failing contrasimulation
checks are distinguishing formulas; for holding checks they are relations,
each independently re-checkable.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import csgame, relations
from .aut import parse_aut
from .ccs import DEFAULT_MAX_STATES, expand_ccs_roots, parse_ccs
from .errors import ParseError, StateBudgetError
from .game import GameGraph, Player, solve
from .hml import format_formula
from .lts import Lts

NOTIONS = (
    "contrasim",
    "weak-sim",
    "weak-bisim",
    "strong-bisim",
    "naive-contrasim-1step",
    "bounded-word-game",
)


@dataclass(frozen=True)
class CheckRequest:
    input_path: str
    input_format: str  # "ccs" | "aut"
    lhs: str
    rhs: str
    notion: str = "contrasim"
    direction: str = "preorder"  # "preorder" | "equivalence"
    max_states: int = DEFAULT_MAX_STATES
    word_bound: Optional[int] = None
    emit_certificate: bool = False
    emit_game_dot: Optional[str] = None
    emit_json: Optional[str] = None


@dataclass(frozen=True)
class Certificate:
    kind: str  # "relation" | "formula"
    formula: Optional[str] = None
    pairs: Optional[tuple[tuple[str, str], ...]] = None


@dataclass
class CheckReport:
    verdict: bool
    notion: str
    direction: str
    lhs: str
    rhs: str
    forward: bool
    backward: Optional[bool]
    certificate: Optional[Certificate]
    game_positions: Optional[int]
    game_moves: Optional[int]
    solve_ms: Optional[float]
    total_ms: float = 0.0


class UsageError(ValueError):
    """Request-level errors that map to exit code 2."""


def _load_model(request: CheckRequest) -> tuple[Lts, int, int]:
    text = Path(request.input_path).read_text()
    if request.input_format == "aut":
        lts, _initial = parse_aut(text)
        try:
            lhs, rhs = int(request.lhs), int(request.rhs)
        except ValueError:
            raise UsageError(
                "for .aut input the designators are state indices"
            ) from None
        for s in (lhs, rhs):
            if not (0 <= s < lts.state_count):
                raise UsageError(f"state {s} outside 0..{lts.state_count - 1}")
        return lts, lhs, rhs
    program = parse_ccs(text)
    try:
        lts, initials = expand_ccs_roots(
            program, [request.lhs, request.rhs], request.max_states
        )
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    return lts, initials[0], initials[1]


def _relation_certificate(lts: Lts, pairs) -> Certificate:
    named = tuple(
        (lts.name_of(p), lts.name_of(q)) for p, q in sorted(pairs)
    )
    return Certificate(kind="relation", pairs=named)


def _run_contrasim(lts: Lts, lhs: int, rhs: int, request: CheckRequest):
    directions = [(lhs, rhs)]
    if request.direction == "equivalence":
        directions.append((rhs, lhs))

    solve_ms = 0.0
    positions = 0
    moves = 0
    results = []
    games = []
    for p, q in directions:
        game = csgame.build_cs_game(lts, p, q)
        t0 = time.perf_counter()
        solution = solve(game.graph)
        solve_ms += (time.perf_counter() - t0) * 1000.0
        positions += game.graph.position_count
        moves += game.graph.move_count
        results.append(solution.winner[game.graph.initial] is Player.DEFENDER)
        games.append((game, solution))

    certificate = None
    if request.emit_certificate:
        if all(results):
            pairs: set[tuple[int, int]] = set()
            for game, solution in games:
                pairs |= csgame.extract_contrasimulation(game, solution)
            certificate = _relation_certificate(lts, pairs)
        else:
            failing = results.index(False)
            game, solution = games[failing]
            formula = csgame.extract_distinguishing_formula(
                game, solution, game.graph.initial
            )
            certificate = Certificate(kind="formula", formula=format_formula(formula))

    dot_graph = games[0][0].graph
    dot_labels = [csgame.format_position(lts, pos) for pos in games[0][0].positions]
    return results, certificate, (positions, moves, solve_ms), (dot_graph, dot_labels)


def _run_oracle_notion(lts: Lts, lhs: int, rhs: int, request: CheckRequest):
    t0 = time.perf_counter()
    if request.notion == "weak-sim":
        oracle = relations.weak_sim_preorder(lts)
    elif request.notion == "weak-bisim":
        oracle = relations.weak_bisimilarity(lts)
    else:
        oracle = relations.strong_bisimilarity(lts)
    solve_ms = (time.perf_counter() - t0) * 1000.0

    results = [(lhs, rhs) in oracle]
    if request.direction == "equivalence":
        results.append((rhs, lhs) in oracle)
    certificate = None
    if request.emit_certificate and all(results):
        certificate = _relation_certificate(lts, oracle)
    return results, certificate, (None, None, solve_ms), None


def _run_word_game(lts: Lts, lhs: int, rhs: int, request: CheckRequest):
    if request.word_bound is None:
        raise UsageError("--word-bound is required for the bounded word game")
    directions = [(lhs, rhs)]
    if request.direction == "equivalence":
        directions.append((rhs, lhs))
    solve_ms = 0.0
    positions = 0
    moves = 0
    results = []
    dot = None
    for p, q in directions:
        graph, game_positions = csgame.build_word_game(lts, p, q, request.word_bound)
        if dot is None:
            labels = [csgame.format_word_position(lts, pos) for pos in game_positions]
            dot = (graph, labels)
        t0 = time.perf_counter()
        solution = solve(graph)
        solve_ms += (time.perf_counter() - t0) * 1000.0
        positions += graph.position_count
        moves += graph.move_count
        results.append(solution.winner[graph.initial] is Player.DEFENDER)
    return results, None, (positions, moves, solve_ms), dot


def _run_naive(lts: Lts, lhs: int, rhs: int, request: CheckRequest):
    t0 = time.perf_counter()
    results = [csgame.naive_single_step_preorder(lts, lhs, rhs)]
    if request.direction == "equivalence":
        results.append(csgame.naive_single_step_preorder(lts, rhs, lhs))
    solve_ms = (time.perf_counter() - t0) * 1000.0
    return results, None, (None, None, solve_ms), None


def run_check(request: CheckRequest) -> CheckReport:
    """Execute a check request; raises UsageError and parse errors for exit 2."""
    started = time.perf_counter()
    if request.notion not in NOTIONS:
        raise UsageError(f"unknown notion {request.notion!r}")
    if request.direction not in ("preorder", "equivalence"):
        raise UsageError(f"unknown direction {request.direction!r}")
    if request.input_format not in ("ccs", "aut"):
        raise UsageError(f"unknown input format {request.input_format!r}")

    lts, lhs, rhs = _load_model(request)

    if request.notion == "contrasim":
        results, certificate, stats, dot = _run_contrasim(lts, lhs, rhs, request)
    elif request.notion == "bounded-word-game":
        results, certificate, stats, dot = _run_word_game(lts, lhs, rhs, request)
    elif request.notion == "naive-contrasim-1step":
        results, certificate, stats, dot = _run_naive(lts, lhs, rhs, request)
    else:
        results, certificate, stats, dot = _run_oracle_notion(lts, lhs, rhs, request)

    if request.emit_game_dot is not None:
        if dot is None:
            raise UsageError(
                f"notion {request.notion!r} builds no game graph to export"
            )
        graph, labels = dot
        Path(request.emit_game_dot).write_text(export_game_dot(graph, labels))

    positions, moves, solve_ms = stats
    report = CheckReport(
        verdict=all(results),
        notion=request.notion,
        direction=request.direction,
        lhs=lts.name_of(lhs),
        rhs=lts.name_of(rhs),
        forward=results[0],
        backward=results[1] if len(results) > 1 else None,
        certificate=certificate,
        game_positions=positions,
        game_moves=moves,
        solve_ms=round(solve_ms, 3) if solve_ms is not None else None,
    )
    report.total_ms = round((time.perf_counter() - started) * 1000.0, 3)
    return report


# -- output -------------------------------------------------------------------


def export_game_dot(graph: GameGraph, labels: Sequence[str]) -> str:
    """Render a game graph in DOT: attacker positions as boxes, defender
    positions as circles, the initial position with a doubled border."""
    if len(labels) != graph.position_count:
        raise ValueError("one label per position required")

    def escape(text: str) -> str:
        return text.replace("\\", "\\\\").replace('"', '\\"')

    lines = ["digraph game {"]
    for idx in range(graph.position_count):
        shape = "box" if graph.owner[idx] is Player.ATTACKER else "circle"
        extra = ", peripheries=2" if idx == graph.initial else ""
        lines.append(f'  n{idx} [shape={shape}, label="{escape(labels[idx])}"{extra}];')
    for src, row in enumerate(graph.moves):
        for dst in row:
            lines.append(f"  n{src} -> n{dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _certificate_json(certificate: Optional[Certificate]):
    if certificate is None:
        return None
    if certificate.kind == "formula":
        return {"kind": "formula", "formula": certificate.formula}
    return {"kind": "relation", "pairs": [list(pair) for pair in certificate.pairs]}


def report_json(report: CheckReport) -> str:
    """Serialize a report with a stable field set and key order."""
    payload = {
        "verdict": report.verdict,
        "notion": report.notion,
        "direction": report.direction,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "certificate": _certificate_json(report.certificate),
        "game_positions": report.game_positions,
        "game_moves": report.game_moves,
        "solve_ms": report.solve_ms,
    }
    return json.dumps(payload, indent=2) + "\n"


def _print_report(report: CheckReport, out) -> None:
    held = "holds" if report.verdict else "fails"
    print(f"notion:    {report.notion}", file=out)
    print(f"direction: {report.direction}", file=out)
    print(f"lhs:       {report.lhs}", file=out)
    print(f"rhs:       {report.rhs}", file=out)
    print(f"forward:   {'holds' if report.forward else 'fails'} (lhs vs rhs)", file=out)
    if report.backward is not None:
        print(
            f"backward:  {'holds' if report.backward else 'fails'} (rhs vs lhs)",
            file=out,
        )
    print(f"verdict:   {held}", file=out)
    if report.game_positions is not None:
        print(
            f"game:      {report.game_positions} positions, "
            f"{report.game_moves} moves, solved in {report.solve_ms} ms",
            file=out,
        )
    if report.certificate is not None:
        if report.certificate.kind == "formula":
            print(f"formula: {report.certificate.formula}", file=out)
        else:
            rendered = ", ".join(f"({p}, {q})" for p, q in report.certificate.pairs)
            print(f"relation: [{rendered}]", file=out)
    print(f"total:     {report.total_ms} ms", file=out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contrasim",
        description="Decide contrasimulation and related preorders on finite LTSs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="compare two processes of one model")
    check.add_argument("input", help="path to a .ccs or .aut model")
    check.add_argument(
        "--format",
        choices=("ccs", "aut"),
        default=None,
        help="input format (default: by file extension)",
    )
    check.add_argument("--lhs", required=True, help="left process (name or state index)")
    check.add_argument("--rhs", required=True, help="right process (name or state index)")
    check.add_argument("--notion", choices=NOTIONS, default="contrasim")
    check.add_argument(
        "--direction", choices=("preorder", "equivalence"), default="preorder"
    )
    check.add_argument(
        "--max-states",
        type=int,
        default=DEFAULT_MAX_STATES,
        help="state budget for CCS expansion",
    )
    check.add_argument(
        "--word-bound",
        type=int,
        default=None,
        help="attacker word length bound (bounded-word-game only)",
    )
    check.add_argument("--emit-certificate", action="store_true")
    check.add_argument("--emit-game-dot", metavar="PATH", default=None)
    check.add_argument("--emit-json", metavar="PATH", default=None)
    return parser


def _request_from_args(args: argparse.Namespace) -> CheckRequest:
    fmt = args.format
    if fmt is None:
        suffix = Path(args.input).suffix.lower()
        if suffix == ".aut":
            fmt = "aut"
        elif suffix == ".ccs":
            fmt = "ccs"
        else:
            raise UsageError(
                f"cannot infer format of {args.input!r}; pass --format"
            )
    return CheckRequest(
        input_path=args.input,
        input_format=fmt,
        lhs=args.lhs,
        rhs=args.rhs,
        notion=args.notion,
        direction=args.direction,
        max_states=args.max_states,
        word_bound=args.word_bound,
        emit_certificate=args.emit_certificate,
        emit_game_dot=args.emit_game_dot,
        emit_json=args.emit_json,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        request = _request_from_args(args)
        report = run_check(request)
    except (UsageError, ParseError, StateBudgetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_report(report, sys.stdout)
    if request.emit_json is not None:
        Path(request.emit_json).write_text(report_json(report))
    return 0 if report.verdict else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
