"""Pump-power sweeps over the resonator model, tabulated as CSV rows."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from .coupling import KNBO3, CrystalSpec, compute_enl
from .entanglement import beamsplitter_mix, epr_dgcz, mix_on_beamsplitter, twin_beam
from .mean_field import (REFERENCE_CAVITY, CavitySpec, UndefinedRatioError, intensity_ratio,
                         low_power_intensity_ratio, solve_conversion)
from .network import cavity_noise
from .propagation import require_phase_matched

MODES = ("dual_port", "ring", "bs_dual", "bs_ring")

COLUMNS = ["p_in", "eps1", "eps2", "zeta1", "zeta2", "s_x1", "s_y1", "s_x2", "s_y2",
           "c_x", "c_y", "var_sum", "var_diff", "g_opt", "v_epr", "v_dgcz", "status"]


@dataclass(frozen=True)
class SweepConfig:
    crystal: CrystalSpec = KNBO3
    cavity: CavitySpec = REFERENCE_CAVITY
    p_min: float = 0.0
    p_max: float = 1.0
    n_points: int = 101
    omega: float = 0.0
    mode: str = "dual_port"

    def __post_init__(self):
        require_phase_matched(self.crystal.dk)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.p_min < 0 or not math.isfinite(self.p_max):
            raise ValueError("p_min must be >= 0 and p_max finite")
        single = self.n_points == 1 and self.p_max == self.p_min
        if not single and (self.n_points < 2 or self.p_max <= self.p_min):
            raise ValueError("need p_max > p_min and n_points >= 2 "
                             "(or p_max == p_min with n_points == 1)")

    def powers(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_points)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        data = dict(data)
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        crystal = CrystalSpec(**data.pop("crystal", asdict(KNBO3)))
        cav = {k: v for k, v in data.pop("cavity", {}).items() if v is not None}
        # indices, length and E_NL left out (or null) are taken from the crystal
        for k in ("n1", "n2", "lc"):
            cav.setdefault(k, getattr(crystal, k))
        if "enl1" not in cav or "enl2" not in cav:
            require_phase_matched(crystal.dk)
            enl = compute_enl(crystal).enl
            cav.setdefault("enl1", enl)
            cav.setdefault("enl2", enl)
        cavity = CavitySpec(**cav)
        return cls(crystal=crystal, cavity=cavity, **data)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _source_cavity(cfg: SweepConfig) -> CavitySpec:
    if cfg.mode in ("ring", "bs_ring"):
        return replace(cfg.cavity, enl2=0.0)
    return cfg.cavity


def _fmt_row(p_in, op, rep, tw, ent, status="ok") -> dict:
    nan = float("nan")
    row = dict.fromkeys(COLUMNS, nan)
    row.update(p_in=p_in, status=status)
    if op is not None:
        row.update(eps1=op.eps1, eps2=op.eps2, zeta1=op.zeta1, zeta2=op.zeta2)
    if rep is not None:
        row.update(s_x1=rep.s_x1, s_y1=rep.s_y1, s_x2=rep.s_x2, s_y2=rep.s_y2,
                   c_x=rep.c_x, c_y=rep.c_y)
    if tw is not None:
        row.update(var_sum=tw.var_sum, var_diff=tw.var_diff, g_opt=tw.g_opt_minus)
    if ent is not None:
        row.update(v_epr=ent.v_epr, v_dgcz=ent.v_dgcz)
    return row


def evaluate_point(cfg: SweepConfig, p_in: float) -> dict:
    """One sweep row. Solver failures are caught and recorded in ``status``.

    In the beamsplitter modes each of two identical sources is pumped with
    p_in/2; eps/zeta describe one source, the spectra columns hold the mixed
    outputs a (as 1) and b (as 2).
    """
    op = rep = tw = ent = None
    try:
        cavity = _source_cavity(cfg)
        if cfg.mode.startswith("bs_"):
            op = solve_conversion(cavity, p_in / 2)
            src = cavity_noise(cavity, op, cfg.omega)
            ent = beamsplitter_mix((src.s_x1, src.s_y1), (src.s_x1, src.s_y1))
            rep = mix_on_beamsplitter(src.s_x1, src.s_y1, src.s_x1, src.s_y1).as_report()
            tw = twin_beam(rep, 1.0)
        else:
            op = solve_conversion(cavity, p_in)
            rep = cavity_noise(cavity, op, cfg.omega)
            ent = epr_dgcz(rep)
            try:
                if op.eps2 > 0:
                    ratio = intensity_ratio(op)
                elif op.eps1 == 0:
                    ratio = low_power_intensity_ratio(cavity)
                else:
                    raise UndefinedRatioError("no harmonic at output 2")
                tw = twin_beam(rep, ratio)
            except UndefinedRatioError:
                # single-output source, twin-beam columns stay NaN
                tw = None
    except (ArithmeticError, ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        return _fmt_row(p_in, op, rep, tw, ent, status=f"error: {exc}")
    return _fmt_row(p_in, op, rep, tw, ent)


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[dict]:
    """Rows in grid order; ``jobs`` > 1 evaluates points in worker processes."""
    powers = [float(p) for p in cfg.powers()]
    if jobs > 1 and len(powers) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(evaluate_point, [cfg] * len(powers), powers))
    return [evaluate_point(cfg, p) for p in powers]


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return f"{v:.12g}"


def write_csv(table: list[dict], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in table:
        w.writerow([_fmt(row[c]) for c in COLUMNS])


def emit_csv(table: list[dict], path) -> Path:
    """Write ``table`` with a header row; floats keep 12 significant digits."""
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            write_csv(table, fh)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [{k: (v if k == "status" else float(v)) for k, v in r.items()} for r in rows]


def to_db(s: float) -> float:
    return 10 * math.log10(s)
