"""End-to-end run: load, reorder, decompose, lay out and render."""
from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .graph import AdjacencyMatrix, load_edge_list, load_matrix, materialize
from .layout import ForceParams, initial_state, run
from .patterns import ModelKind, NoiseModel, PatternKind
from .render import (
    RenderConfig,
    render_composite,
    render_matrix,
    render_motifs,
    render_precision_bar_document,
)
from .reorder import build_instance, reorder, to_tsplib, twin_classes
from .select import FilterRule, decompose
from .tsp import DEFAULT_EXACT_CAP

log = logging.getLogger(__name__)

EMIT_CHOICES = ("matrix", "motif", "bar", "json", "composite")
DEFAULT_EMIT = ("matrix", "motif", "bar", "json")


@dataclass
class PipelineConfig:
    input: str
    format: str = "edges"  # edges | matrix
    model: str = "local"
    sigma: float = 0.5
    tau: float = 0.85
    reorder: str = "auto"
    seed: int = 42
    exact_cap: int = DEFAULT_EXACT_CAP
    filter: str = "none"
    prefer: str = "rows"
    out: str = "out"
    emit: tuple[str, ...] = DEFAULT_EMIT
    forces: ForceParams = field(default_factory=ForceParams)
    render: RenderConfig = field(default_factory=RenderConfig)
    dump_tsp: bool = False
    timings: bool = False

    def __post_init__(self):
        if self.format not in ("edges", "matrix"):
            raise ValueError(f"format must be edges or matrix, got {self.format!r}")
        if self.reorder not in ("off", "exact", "heuristic", "auto"):
            raise ValueError(f"reorder must be off, exact, heuristic or auto, got {self.reorder!r}")
        if self.prefer not in ("rows", "cols"):
            raise ValueError(f"prefer must be rows or cols, got {self.prefer!r}")
        bad = set(self.emit) - set(EMIT_CHOICES)
        if bad:
            raise ValueError(f"unknown emit targets {sorted(bad)}; choose from {', '.join(EMIT_CHOICES)}")
        self.noise_model()  # validates sigma/tau/model
        self.filter_rule()

    def noise_model(self) -> NoiseModel:
        return NoiseModel(ModelKind(self.model), self.sigma, self.tau)

    def filter_rule(self) -> FilterRule:
        return FilterRule.parse(self.filter)

    def settings(self) -> dict:
        return {
            "input": Path(self.input).name,
            "format": self.format,
            "model": self.model,
            "sigma": self.sigma,
            "tau": self.tau,
            "reorder": self.reorder,
            "seed": self.seed,
            "exact_cap": self.exact_cap,
            "filter": str(self.filter_rule()),
            "prefer": self.prefer,
            "forces": asdict(self.forces),
        }


def load_input(path: str, fmt: str) -> AdjacencyMatrix:
    text = Path(path).read_text()
    if fmt == "matrix":
        return load_matrix(text)
    return materialize(load_edge_list(text))


def _write(path: Path, text: str, manifest: list[dict]) -> None:
    data = text.encode("utf-8")
    path.write_bytes(data)
    manifest.append({"file": path.name, "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()})


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _counts(patterns) -> dict:
    return {k.value: sum(1 for p in patterns if p.kind is k) for k in PatternKind}


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Execute every stage and write the requested artifacts into ``cfg.out``.

    Returns the manifest: the report plus name, size and hash of each file.
    Wall-clock timings appear only when ``cfg.timings`` is set, since they
    would make otherwise identical runs differ.
    """
    clock = {}
    t0 = time.perf_counter()
    M = load_input(cfg.input, cfg.format)
    clock["load"] = time.perf_counter() - t0
    log.info("loaded %d vertices, %d edges", M.n, M.m // 2)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    files: list[dict] = []

    t0 = time.perf_counter()
    res = reorder(M, cfg.reorder, seed=cfg.seed, exact_cap=cfg.exact_cap)
    clock["reorder"] = time.perf_counter() - t0
    if cfg.dump_tsp and res.morans_before is not None:
        reps = [c[0] for c in twin_classes(M.cells)]
        _write(out / "instance.tsp", to_tsplib(build_instance(M, reps), Path(cfg.input).stem), files)

    t0 = time.perf_counter()
    d = decompose(res.matrix, cfg.noise_model(), cfg.filter_rule(), prefer=cfg.prefer)
    clock["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    state = run(d, cfg.forces, initial_state(d))
    clock["layout"] = time.perf_counter() - t0

    cands = d.candidates
    report = {
        "settings": cfg.settings(),
        "graph": {"n": M.n, "edges": M.m // 2},
        "reorder": {
            "requested": cfg.reorder,
            "method": res.method,
            "morans_i_before": res.morans_before,
            "morans_i_after": res.morans_after,
            "path_cost": res.path_cost,
            "twin_classes": res.classes,
            "notes": res.notes,
        },
        "candidates": {
            "clique": len(cands.cliques),
            "biclique": len(cands.bicliques),
            "star": len(cands.stars),
        },
        "selected": _counts(d.patterns),
        "total_weight": d.total_weight,
        "precision": d.precision.to_dict(),
        "layout": {"iterations": state.iterations, "stop": state.stop},
    }
    if cfg.timings:
        report["timings_s"] = clock

    t0 = time.perf_counter()
    rc = cfg.render
    if "matrix" in cfg.emit:
        _write(out / "matrix.svg", render_matrix(res.matrix, d, rc), files)
    if "motif" in cfg.emit:
        _write(out / "motifs.svg", render_motifs(state, d, rc), files)
    if "bar" in cfg.emit:
        _write(out / "precision.svg", render_precision_bar_document(d.precision, rc), files)
    if "composite" in cfg.emit:
        _write(out / "composite.svg", render_composite(M, res.matrix, d, state, rc), files)
    if "json" in cfg.emit:
        _write(out / "decomposition.json", _dump(d.to_dict()), files)
        _write(out / "layout.json", _dump(state.to_dict()), files)
    clock["render"] = time.perf_counter() - t0
    _write(out / "report.json", _dump(report), files)

    manifest = {"report": report, "files": files}
    (out / "manifest.json").write_text(_dump({"files": files}))
    return manifest
