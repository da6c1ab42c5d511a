"""Operator command line: corpus building, stats, validation, play, serve.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .board import Provenance
from .corpus import (
    Game,
    build_games,
    corpus_stats,
    dump_games,
    games_by_level,
    gold_board,
    read_games,
)
from .engine import EpisodeStatus, comparison, reset, step
from .errors import ChronoboardError, CorpusFormatError, InconsistentGold
from .relations import PointRelation
from .timeml import parse_timeml, split_sentences

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _parse_levels(raw: str) -> list[int]:
    try:
        levels = sorted({int(part) for part in raw.split(",") if part.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must be integers: {raw!r}")
    if not levels or any(l < 2 or l > 5 for l in levels):
        raise argparse.ArgumentTypeError("levels must be within 2..5")
    return levels


def build_parser() -> _Parser:
    parser = _Parser(prog="chronoboard", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build-corpus", help="generate games from TimeML documents")
    build.add_argument("--input", required=True, help="directory of TimeML files")
    build.add_argument(
        "--levels", type=_parse_levels, default=[2, 3, 4, 5],
        help="comma-separated levels, e.g. 2,3,4,5",
    )
    build.add_argument("--output", required=True, help="JSONL output path")

    stats = sub.add_parser("stats", help="per-level corpus statistics")
    stats.add_argument("corpus", help="games JSONL file")
    stats.add_argument("--json", action="store_true", help="machine-readable output")

    validate = sub.add_parser("validate", help="check corpus invariants")
    validate.add_argument("corpus", help="games JSONL file")

    play = sub.add_parser("play", help="play one episode in the terminal")
    play.add_argument("--corpus", required=True)
    play.add_argument("--level", type=int, required=True)
    play.add_argument("--seed", type=int, default=None)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--corpus", default=None)
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--config", default=None, help="JSON config file")

    return parser


# --- subcommands ---------------------------------------------------------------

def cmd_build_corpus(args) -> int:
    input_dir = Path(args.input)
    if not input_dir.is_dir():
        print(f"error: input directory not readable: {input_dir}", file=sys.stderr)
        return EXIT_IO
    windows = []
    for path in sorted(input_dir.rglob("*")):
        if path.suffix.lower() not in (".tml", ".xml") or not path.is_file():
            continue
        try:
            doc = parse_timeml(path.read_text(encoding="utf-8"), default_doc_id=path.stem)
        except OSError as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        except ChronoboardError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        windows.extend(split_sentences(doc))
    games: list[Game] = []
    for level in args.levels:
        games.extend(build_games(windows, level))
    try:
        Path(args.output).write_text(dump_games(games), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(games)} games to {args.output}")
    return EXIT_OK


def _load_corpus(path: str) -> list[Game] | int:
    try:
        return read_games(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    except CorpusFormatError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_IO


def cmd_stats(args) -> int:
    games = _load_corpus(args.corpus)
    if isinstance(games, int):
        return games
    table = corpus_stats(games)
    if args.json:
        print(json.dumps(table.to_dict(), ensure_ascii=False))
        return EXIT_OK
    header = f"{'level':>5}  {'games':>6}  {'tokens':>8}  {'<':>6}  {'=':>6}  {'>':>6}  {'vague':>6}"
    print(header)
    for level in table.levels:
        rel = level.relations
        print(
            f"{level.level:>5}  {level.games:>6}  {level.tokens:>8}  "
            f"{rel['<']:>6}  {rel['=']:>6}  {rel['>']:>6}  {rel['-']:>6}"
        )
    if not table.levels:
        print("(empty corpus)")
    return EXIT_OK


def cmd_validate(args) -> int:
    games = _load_corpus(args.corpus)
    if isinstance(games, int):
        return games
    failures = 0
    for game in games:
        problems = []
        if not game.gold:
            problems.append("no gold labels")
        if any(not r.is_definite for _, _, r in game.gold):
            problems.append("vague gold label")
        else:
            try:
                board = gold_board(game)
            except InconsistentGold:
                problems.append("gold labels are closure-inconsistent")
            else:
                closed = {
                    (board.ref_at(i), board.ref_at(j)): board.label_at(i, j)
                    for i, j in board.cells()
                    if board.provenance(i, j) is not Provenance.AXIOM
                    and board.label_at(i, j) is not None
                }
                if closed != {(s, t): r for s, t, r in game.gold}:
                    problems.append("gold labels are not closed")
        for problem in problems:
            print(f"FAIL {game.game_id}: {problem}")
            failures += 1
    if failures:
        print(f"{failures} problem(s) found")
        return EXIT_VALIDATION
    print(f"{len(games)} games OK")
    return EXIT_OK


def _render_board(board) -> str:
    refs = [board.ref_at(i) for i in range(board.size)]
    by_id = {e.id: e for e in board.entities}

    def header(ref):
        entity_id = ref.rsplit(".", 1)[0]
        prefix = "i " if by_id[entity_id].kind.value == "instant" else ""
        return f"{prefix}{ref}"

    width = max((len(header(r)) for r in refs), default=4) + 2
    lines = []
    lines.append(" " * (width + 6) + "".join(f"{j:>{width}}" for j in range(1, board.size)))
    lines.append(" " * (width + 6) + "".join(f"{header(refs[j]):>{width}}" for j in range(1, board.size)))
    for i in range(board.size - 1):
        row = [f"{i:>3}"]
        row.append(f"{header(refs[i]):>{width}}")
        for j in range(1, board.size):
            if j <= i:
                cell = " " * (width - 1) + " "
            else:
                label = board.label_at(i, j)
                provenance = board.provenance(i, j)
                mark = "." if label is None else label.value
                if provenance is Provenance.AXIOM:
                    mark = f"[{label.value}]"
                cell = f"{mark:>{width}}"
            row.append(cell)
        lines.append("".join(row))
    return "\n".join(lines)


def cmd_play(args) -> int:
    games = _load_corpus(args.corpus)
    if isinstance(games, int):
        return games
    grouped = games_by_level(games)
    if args.level not in grouped:
        print(f"error: no games at level {args.level}", file=sys.stderr)
        return EXIT_VALIDATION
    import random as _random

    seed = args.seed
    if seed is None and os.environ.get("TG_SEED"):
        seed = int(os.environ["TG_SEED"])
    rng = _random.Random(seed)
    game = rng.choice(grouped[args.level])
    episode = reset(game)
    print(f"game {game.game_id} (level {game.level})")
    print(game.text)
    print()
    print("Label endpoint pairs with: <row> <col> <relation>")
    print("Relations: '<' before, '>' after, '=' equal, '-' vague. 'q' quits.")
    while not episode.done:
        print()
        print(_render_board(episode.board))
        print(f"score: {episode.score:+.1f}")
        try:
            line = input("> ").strip()
        except EOFError:
            print("\nbye")
            return EXIT_OK
        if not line:
            continue
        if line.lower() in ("q", "quit", "exit"):
            print("bye")
            return EXIT_OK
        parts = line.split()
        if len(parts) != 3:
            print("expected: <row> <col> <relation>")
            continue
        try:
            i, j = int(parts[0]), int(parts[1])
            relation = PointRelation(parts[2])
        except ValueError:
            print("could not parse that move")
            continue
        if not (0 <= i < episode.board.size and 0 <= j < episode.board.size):
            print("endpoint index out of range")
            continue
        try:
            outcome = step(
                episode, episode.board.ref_at(i), episode.board.ref_at(j), relation
            )
        except ChronoboardError as exc:
            print(f"illegal move: {exc}")
            continue
        print(f"reward {outcome.reward:+.1f}")
        for s, t, r in outcome.inferred:
            print(f"  inferred {s} {r.value} {t}")
    print()
    print(_render_board(episode.board))
    if episode.status is EpisodeStatus.WON_COHERENT:
        print("coherent timeline: terminal +10.0")
    else:
        print("incoherent timeline: terminal -10.0")
    print(f"final score: {episode.score:+.1f}")
    print()
    print("comparison (predicted | gold | mismatch):")
    for cell in comparison(episode):
        gold = cell.gold.value if cell.gold is not None else "(none)"
        flag = " MISMATCH" if cell.mismatch else ""
        print(f"  {cell.source} ? {cell.target}: {cell.predicted.value} | {gold}{flag}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import SessionStore, create_app, load_config

    try:
        config = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.corpus:
        config.corpus_path = args.corpus
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    if not config.corpus_path:
        print("error: no corpus configured (--corpus, config file, or TG_CORPUS)", file=sys.stderr)
        return EXIT_IO
    games = _load_corpus(config.corpus_path)
    if isinstance(games, int):
        return games
    store = SessionStore(games, seed=config.seed, scoring=config.scoring)
    app = create_app(store, config)
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "build-corpus": cmd_build_corpus,
        "stats": cmd_stats,
        "validate": cmd_validate,
        "play": cmd_play,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
