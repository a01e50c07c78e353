"""Command-line entry point.

    ringmotif run --input graph.edges --out out/
    ringmotif generate --plant clique:6 --plant biclique:4x6 -n 24 --out data/

Exit codes: 0 success, 2 invalid input or options, 3 instance too large for
the exact solver, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .graph import GraphError, materialize
from .layout import ForceParams
from .pipeline import DEFAULT_EMIT, EMIT_CHOICES, PipelineConfig, run_pipeline
from .render import RenderConfig
from .synthetic import Plant, generate_synthetic
from .tsp import DEFAULT_EXACT_CAP, CapacityError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3
EXIT_IO = 4

log = logging.getLogger("ringmotif")


class ConfigError(ValueError):
    pass


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _emit_list(text: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in items if s not in EMIT_CHOICES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown emit target(s) {bad}; choose from {','.join(EMIT_CHOICES)}")
    return items


def _flag(text: str) -> bool:
    if isinstance(text, bool):
        return text
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _add_run(sub) -> argparse.ArgumentParser:
    p = sub.add_parser("run", help="decompose a graph and render it")
    p.add_argument("--config", help="key=value file with the same keys as the flags; flags win")
    p.add_argument("--input", help="edge list or 0/1 matrix file")
    p.add_argument("--format", choices=("edges", "matrix"), default="edges")
    p.add_argument("--model", choices=("density", "morans", "global", "local"), default="local")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=0.85)
    p.add_argument("--reorder", choices=("off", "exact", "heuristic", "auto"), default="auto")
    p.add_argument("--seed", type=int, default=42, help="heuristic solver seed")
    p.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP, help="largest tour size for the exact solver")
    p.add_argument("--filter", default="none", help="none, abs:N or rel:F")
    p.add_argument("--prefer", choices=("rows", "cols"), default="rows", help="biclique growth axis preference")
    p.add_argument("--out", default="out")
    p.add_argument("--emit", type=_emit_list, default=DEFAULT_EMIT, help="comma list of " + ",".join(EMIT_CHOICES))
    f = ForceParams()
    p.add_argument("--c-o", type=float, default=f.c_o)
    p.add_argument("--c-a", type=float, default=f.c_a)
    p.add_argument("--c-r", type=float, default=f.c_r)
    p.add_argument("--c-g", type=float, default=f.c_g)
    p.add_argument("--mu", type=float, default=f.mu)
    p.add_argument("--max-iters", type=int, default=f.max_iters)
    p.add_argument("--labels", type=_flag, default=True, help="vertex labels on the motif view")
    p.add_argument("--cell-px", type=float, default=RenderConfig().cell_px)
    p.add_argument("--scale", type=float, default=RenderConfig().scale)
    p.add_argument("--dump-tsp", action="store_true", help="also write the TSPLIB instance")
    p.add_argument("--timings", action="store_true", help="add wall-clock timings to report.json")
    return p


def _add_generate(sub) -> argparse.ArgumentParser:
    p = sub.add_parser("generate", help="write a synthetic graph with planted patterns")
    p.add_argument("--plant", action="append", default=[], help="clique:K, biclique:PxQ or star:LEAVES (repeatable)")
    p.add_argument("-n", "--vertices", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flip", type=float, default=0.0, help="probability of dropping each planted edge")
    p.add_argument("--background", type=float, default=0.0, help="edge probability outside planted pairs")
    p.add_argument("--no-shuffle", action="store_true", help="keep planted vertices contiguous")
    p.add_argument("--out", required=True)
    p.add_argument("--name", default="synthetic")
    return p


def build_parser() -> tuple[argparse.ArgumentParser, argparse.ArgumentParser]:
    parser = argparse.ArgumentParser(prog="ringmotif", description="Noisy clique/biclique/star decomposition and Ring Motif rendering")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = _add_run(sub)
    _add_generate(sub)
    return parser, run_p


def _apply_config(run_p: argparse.ArgumentParser, path: str) -> None:
    actions = {a.dest: a for a in run_p._actions if a.dest not in ("help", "config")}
    defaults = {}
    for key, value in read_config(path).items():
        if key not in actions:
            raise ConfigError(f"{path}: unknown key {key!r}")
        a = actions[key]
        if isinstance(a, argparse._StoreTrueAction):
            defaults[key] = _flag(value)
            continue
        try:
            v = a.type(value) if a.type else value
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"{path}: bad value for {key}: {exc}") from None
        if a.choices and v not in a.choices:
            raise ConfigError(f"{path}: {key} must be one of {', '.join(a.choices)}")
        defaults[key] = v
    run_p.set_defaults(**defaults)


def _config_from_args(a: argparse.Namespace) -> PipelineConfig:
    if not a.input:
        raise ConfigError("--input is required (flag or config key)")
    forces = ForceParams(c_o=a.c_o, c_a=a.c_a, c_r=a.c_r, c_g=a.c_g, mu=a.mu, max_iters=a.max_iters)
    render = RenderConfig(cell_px=a.cell_px, scale=a.scale, show_labels=a.labels)
    return PipelineConfig(
        input=a.input,
        format=a.format,
        model=a.model,
        sigma=a.sigma,
        tau=a.tau,
        reorder=a.reorder,
        seed=a.seed,
        exact_cap=a.exact_cap,
        filter=a.filter,
        prefer=a.prefer,
        out=a.out,
        emit=tuple(a.emit),
        forces=forces,
        render=render,
        dump_tsp=a.dump_tsp,
        timings=a.timings,
    )


def cmd_run(a: argparse.Namespace) -> int:
    manifest = run_pipeline(_config_from_args(a))
    r = manifest["report"]
    sel = r["selected"]
    print(
        f"n={r['graph']['n']} reorder={r['reorder']['method']} "
        f"I: {r['reorder']['morans_i_before']} -> {r['reorder']['morans_i_after']} "
        f"selected clique={sel['clique']} biclique={sel['biclique']} star={sel['star']} "
        f"weight={r['total_weight']}"
    )
    for f in manifest["files"]:
        print(f"  wrote {Path(a.out) / f['file']}")
    return EXIT_OK


def cmd_generate(a: argparse.Namespace) -> int:
    plants = [Plant.parse(s) for s in a.plant]
    syn = generate_synthetic(plants, a.vertices, seed=a.seed, flip=a.flip, background=a.background, shuffle=not a.no_shuffle)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    # the matrix file keeps isolated vertices, which an edge list cannot
    (out / f"{a.name}.edges").write_text(syn.graph.to_edge_list())
    (out / f"{a.name}.matrix").write_text(materialize(syn.graph).to_text())
    truth = dict(syn.truth_dict(), seed=a.seed, flip=a.flip, background=a.background, edges=syn.graph.m)
    (out / f"{a.name}.truth.json").write_text(json.dumps(truth, indent=2) + "\n")
    print(f"wrote {a.name}.edges, {a.name}.matrix, {a.name}.truth.json to {out} ({syn.graph.m} edges)")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser, run_p = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    try:
        if known.config and argv and argv[0] == "run":
            _apply_config(run_p, known.config)
        a = parser.parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(a.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
        if a.command == "run":
            return cmd_run(a)
        return cmd_generate(a)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GraphError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
