"""Command-line entry point: ``octwalk <subcommand> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 inadmissible
module, 3 generation budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .export import write_csv, write_json, write_table
from .hyperbolic import GeodesicArc
from .liouville import (
    PotentialParams,
    euclidean_time,
    liouville_residual,
    potential,
    singular_radius,
)
from .markov import (
    VALID_Q,
    chain_partition_function,
    gaussian_closed_form,
    step_lengths,
    tau_comparison,
    theoretical_bounds,
    xi_matrix,
)
from .multifractal import QGrid, alpha_extremes, finite_n_note, information_entropy, spectrum_report
from .octagon import (
    InadmissibleModule,
    ModuleParams,
    construction_residual,
    build,
    check_group_relation,
    parse_angle,
)
from .walks import (
    GenerationBudgetExceeded,
    WalkPolicy,
    default_guard,
    enumerate_spectrum,
    histogram,
    partition_function,
)

log = logging.getLogger("octwalk")

EXIT_OK, EXIT_CHECK, EXIT_MODULE, EXIT_BUDGET = 0, 1, 2, 3
GEOMETRY_TOL = 1e-8
POTENTIAL_TOL = 1e-6
# raw lengths are kept in memory up to this N; beyond it enumeration streams
KEEP_LENGTHS_MAX_N = 7
# half-width of the band around the potential's singular radius left out of the residual grid
SINGULAR_BAND = 0.05
ENTROPY_STEP = 0.01


@dataclass(frozen=True)
class RunConfig:
    a: float = 0.8
    alpha: float = math.pi / 3
    n: int = 5
    q_min: float = -10.0
    q_max: float = 10.0
    dq: float = 0.01
    bins: int = 60
    workers: int = 1
    out_dir: str = "."
    format: str = "csv"
    amp: float = 1.0
    offset: float = 0.0
    q: tuple = (-1.0, 0.0, 0.5, 1.0)

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        object.__setattr__(self, "alpha", parse_angle(self.alpha))
        object.__setattr__(self, "q", tuple(float(x) for x in self.q))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @property
    def grid(self) -> QGrid:
        return QGrid(self.q_min, self.q_max, self.dq)

    def config_hash(self) -> str:
        # worker count and output location must not change file contents
        data = asdict(self)
        data.pop("workers")
        data.pop("out_dir")
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]

    def metadata(self, **extra) -> dict:
        meta = {
            "tool": f"octwalk {__version__}",
            "config_hash": self.config_hash(),
            "a": repr(self.a),
            "alpha_module": repr(self.alpha),
            "N": self.n,
        }
        meta.update(extra)
        return meta


_FLAG_TO_FIELD = {
    "a": "a",
    "alpha": "alpha",
    "n": "n",
    "qmin": "q_min",
    "qmax": "q_max",
    "dq": "dq",
    "bins": "bins",
    "workers": "workers",
    "out": "out_dir",
    "format": "format",
    "A": "amp",
    "C": "offset",
    "q": "q",
}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if ns.config:
        cfg = RunConfig.from_json(Path(ns.config).read_text(encoding="utf-8"))
    updates = {}
    for flag, name in _FLAG_TO_FIELD.items():
        value = getattr(ns, flag, None)
        if value is not None:
            updates[name] = value
    return replace(cfg, **updates) if updates else cfg


def _geometry(cfg: RunConfig):
    return build(ModuleParams(cfg.a, cfg.alpha))


def _spectrum(cfg: RunConfig, geom, *, bins=None, q_values=None):
    policy = WalkPolicy(cfg.n, default_guard())
    keep = cfg.n <= KEEP_LENGTHS_MAX_N
    return enumerate_spectrum(
        geom,
        policy,
        keep_lengths=keep,
        q_values=None if keep else q_values,
        bins=None if keep else bins,
        workers=cfg.workers,
    )


def _tau_q_values(cfg: RunConfig) -> list[float]:
    qs = [float(q) for q in cfg.grid.values]
    return qs + [1.0 - ENTROPY_STEP, 1.0 + ENTROPY_STEP]


def _out(cfg: RunConfig) -> Path:
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_octagon(cfg: RunConfig) -> int:
    geom = _geometry(cfg)
    res_c = construction_residual(geom)
    res_g = check_group_relation(geom)
    payload = {
        "metadata": cfg.metadata(),
        "geometry": geom.to_json(),
        "construction_residual": res_c,
        "group_relation_deviation": res_g,
    }
    path = write_json(_out(cfg) / "octagon.json", payload)
    print(f"b = {geom.b:.12g}")
    print(f"beta = {geom.beta:.12g}")
    print(f"construction_residual = {res_c:.3e}")
    print(f"group_relation_deviation = {res_g:.3e}")
    print(f"wrote {path}")
    return EXIT_OK if res_c <= GEOMETRY_TOL and res_g <= GEOMETRY_TOL else EXIT_CHECK


def _summary(cfg, spec, curve=None) -> dict:
    out = {
        "metadata": cfg.metadata(note=finite_n_note(cfg.n)),
        "N": cfg.n,
        "a": cfg.a,
        "alpha_module": cfg.alpha,
        "count": spec.count,
        "mean": spec.mean,
        "variance": spec.variance,
        "min_length": spec.min_length,
        "max_length": spec.max_length,
        "entropy": information_entropy(spec, ENTROPY_STEP),
    }
    if curve is not None:
        lo, hi = alpha_extremes(spec, cfg.grid) if cfg.q_min <= -10 and cfg.q_max >= 10 else (None, None)
        out["alpha_min_est"] = lo
        out["alpha_max_est"] = hi
    return out


def cmd_spectrum(cfg: RunConfig) -> int:
    geom = _geometry(cfg)
    spec = _spectrum(cfg, geom, bins=cfg.bins, q_values=[0.0, 1.0 - ENTROPY_STEP, 1.0, 1.0 + ENTROPY_STEP])
    out = _out(cfg)
    meta = cfg.metadata()
    if spec.lengths is not None:
        write_table(out / "spectrum", ["index", "length"], enumerate(spec.lengths), meta, cfg.format)
    hist = histogram(spec, cfg.bins)
    rows = zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts)
    write_table(out / "histogram", ["bin_left", "bin_right", "count"], rows, meta, cfg.format)
    summary = _summary(cfg, spec)
    summary["gaussian_fit"] = {
        "mean": hist.gaussian_fit[0],
        "variance": hist.gaussian_fit[1],
        "amplitude": hist.gaussian_fit[2],
    }
    write_json(out / "summary.json", summary)
    print(f"N = {cfg.n}: {spec.count} walks, mean = {spec.mean:.6g}, variance = {spec.variance:.6g}")
    return EXIT_OK


def _multifractal(cfg: RunConfig):
    geom = _geometry(cfg)
    spec = _spectrum(cfg, geom, q_values=_tau_q_values(cfg))
    curve = spectrum_report(spec, cfg.grid)
    return geom, spec, curve


def cmd_tau(cfg: RunConfig) -> int:
    geom, spec, curve = _multifractal(cfg)
    out = _out(cfg)
    rows = ((p.q, p.tau, p.alpha, p.f, p.d_q) for p in curve.points)
    meta = cfg.metadata(note=finite_n_note(cfg.n))
    write_table(out / "tau", ["q", "tau", "alpha", "f", "d_q"], rows, meta, cfg.format)
    summary = _summary(cfg, spec, curve)
    write_json(out / "multifractal.json", summary)
    print(f"N = {cfg.n}: entropy S = {summary['entropy']:.6g}")
    return EXIT_OK


def cmd_falpha(cfg: RunConfig) -> int:
    geom, spec, curve = _multifractal(cfg)
    out = _out(cfg)
    rows = ((p.q, p.alpha, p.f) for p in curve.points)
    meta = cfg.metadata(note=finite_n_note(cfg.n))
    write_table(out / "falpha", ["q", "alpha", "f"], rows, meta, cfg.format)
    summary = _summary(cfg, spec, curve)
    write_json(out / "multifractal.json", summary)
    print(f"N = {cfg.n}: entropy S = {summary['entropy']:.6g}")
    return EXIT_OK


def cmd_markov(cfg: RunConfig) -> int:
    if cfg.n < 2:
        raise ValueError("the chain needs N >= 2")
    geom = _geometry(cfg)
    steps = step_lengths(geom)
    xi = xi_matrix(geom)
    reports = []
    for q in cfg.q:
        chain = chain_partition_function(steps, xi, cfg.n, q)
        log_z_g, c = gaussian_closed_form(steps, xi, cfg.n, q)
        reports.append(
            {
                "N": cfg.n,
                "q": q,
                "valid": abs(q) <= VALID_Q,
                "l_plus": steps.l_plus,
                "l_minus": steps.l_minus,
                "xi_mean": xi.mean_xi,
                "log_z_chain": chain.log_z_chain,
                "log_z_gaussian": log_z_g,
                "c_coeff": c,
                "transition_probs": chain.transition_probs,
                "k_plus": chain.k_plus * math.exp(chain.log_scale) if chain.log_scale < 700 else None,
                "k_minus": chain.k_minus * math.exp(chain.log_scale) if chain.log_scale < 700 else None,
                "log_k_plus": chain.log_k_plus,
                "log_k_minus": chain.log_k_minus,
            }
        )
    l_min, l_mean, l_max = theoretical_bounds(steps, xi, cfg.n)
    payload = {
        "metadata": cfg.metadata(),
        "xi": xi.xi,
        "bounds": {"l_min": l_min, "l_mean": l_mean, "l_max": l_max},
        "reports": reports,
    }
    path = write_json(_out(cfg) / "markov.json", payload)
    print(f"wrote {path}")
    return EXIT_OK


def compare_rows(cfg: RunConfig, geom=None) -> np.ndarray:
    geom = _geometry(cfg) if geom is None else geom
    spec = _spectrum(cfg, geom, q_values=[float(q) for q in cfg.grid.values])
    steps = step_lengths(geom)
    xi = xi_matrix(geom)
    return tau_comparison(lambda q: partition_function(spec, q), steps, xi, cfg.n, cfg.grid.values)


def compare_summary(rows: np.ndarray) -> dict:
    q = rows[:, 0]
    small = np.abs(q) <= 1.0 + 1e-12
    names = {1: "exact", 2: "chain", 3: "gaussian"}
    out = {}
    for i, j in ((1, 2), (1, 3), (2, 3)):
        diff = np.abs(rows[:, i] - rows[:, j])
        key = f"{names[i]}_vs_{names[j]}"
        out[key] = {"max_abs_diff": float(diff.max()), "max_abs_diff_small_q": float(diff[small].max())}
    return out


def cmd_compare(cfg: RunConfig) -> int:
    if cfg.n < 2:
        raise ValueError("the chain needs N >= 2")
    rows = compare_rows(cfg)
    out = _out(cfg)
    meta = cfg.metadata(note=finite_n_note(cfg.n))
    write_table(out / "compare", ["q", "tau_exact", "tau_chain", "tau_gaussian"], rows, meta, cfg.format)
    summary = compare_summary(rows)
    write_json(out / "compare.json", {"metadata": meta, "diffs": summary})
    for key, d in summary.items():
        print(f"{key}: max {d['max_abs_diff']:.4g}, |q|<=1 {d['max_abs_diff_small_q']:.4g}")
    return EXIT_OK


def potential_rows(params: PotentialParams) -> list[tuple[float, float, float]]:
    rs = np.round(np.arange(10, 91) * 0.01, 12)
    sing = singular_radius(params)
    rows = []
    for r in rs:
        if abs(r - sing) <= SINGULAR_BAND:
            continue
        rows.append((float(r), potential(params, float(r)), liouville_residual(params, [float(r)])))
    return rows


def cmd_potential(cfg: RunConfig) -> int:
    params = PotentialParams(cfg.amp, cfg.offset)
    out = _out(cfg)
    meta = cfg.metadata(A=repr(cfg.amp), C=repr(cfg.offset))
    rows = potential_rows(params)
    write_table(out / "potential", ["r", "U", "residual"], rows, meta, cfg.format)
    arc: GeodesicArc = _geometry(cfg).sides[0]
    s_values = np.round(np.arange(-30, 31) * 0.1, 12)
    write_table(
        out / "geodesic_time",
        ["s", "t"],
        ((float(s), euclidean_time(arc, float(s))) for s in s_values),
        dict(meta, arc_radius=repr(arc.radius), arc_angle=repr(arc.angle)),
        cfg.format,
    )
    worst = max(r[2] for r in rows)
    print(f"max Liouville residual = {worst:.3e}")
    return EXIT_OK if worst <= POTENTIAL_TOL else EXIT_CHECK


COMMANDS = {
    "octagon": cmd_octagon,
    "spectrum": cmd_spectrum,
    "tau": cmd_tau,
    "falpha": cmd_falpha,
    "markov": cmd_markov,
    "compare": cmd_compare,
    "potential": cmd_potential,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, help="vertex radius a of the module")
    common.add_argument("--alpha", type=str, help="vertex angle: radians or 'pi/k'")
    common.add_argument("--n", type=int, help="number of generations N")
    common.add_argument("--qmin", type=float)
    common.add_argument("--qmax", type=float)
    common.add_argument("--dq", type=float)
    common.add_argument("--bins", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--out", type=str, help="output directory")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--config", type=str, help="JSON file with RunConfig fields")
    common.add_argument("--A", type=float, help="potential amplitude (potential)")
    common.add_argument("--C", type=float, help="potential offset (potential)")
    common.add_argument("--q", type=float, action="append", help="q value for markov (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="octwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"octwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(ns)
        log.debug("config %s", cfg.to_json())
        return COMMANDS[ns.command](cfg)
    except InadmissibleModule as exc:
        print(f"error: inadmissible module: {exc}", file=sys.stderr)
        return EXIT_MODULE
    except GenerationBudgetExceeded as exc:
        print(f"error: {exc}; raise OCTWALK_MAX_N to override", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
