"""Solution files and exports.

Solutions are stored as versioned JSON (schema field first) with full
double precision: Python's repr round-trips every float exactly, so a
saved solution reloads bit for bit.  Exports cover per-coordinate
amplitude tables (CSV), a sampled trajectory over one period (CSV) and a
static SVG of the (x1, x3) projection.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hbsystem import HarmonicSolution, LorenzParams
from .trigpoly import TrigPolynomial

__all__ = [
    "SCHEMA",
    "SolutionFile",
    "SolutionFormatError",
    "save_solution",
    "load_solution",
    "sample_trajectory",
    "export_coefficient_tables",
    "export_trajectory_csv",
    "export_svg",
]

SCHEMA = "lorenz-hb-solution/1"


class SolutionFormatError(ValueError):
    """A solution file could not be parsed or failed schema validation."""


@dataclass(frozen=True)
class SolutionFile:
    solution: HarmonicSolution
    params: LorenzParams
    anchor: float
    provenance: dict = field(default_factory=dict)

    @property
    def h(self) -> int:
        return self.solution.h

    @property
    def period(self) -> float:
        return self.solution.period


def save_solution(sf: SolutionFile, path) -> None:
    sol = sf.solution
    doc = {
        "schema": SCHEMA,
        "params": {"sigma": float(sf.params.sigma), "r": float(sf.params.r), "b": float(sf.params.b)},
        "anchor": float(sf.anchor),
        "h": sol.h,
        "omega": float(sol.omega),
        "period": float(sol.period),
        "constants": {"x1": float(sol.x1.a0), "x2": float(sol.x2.a0), "x3": float(sol.x3.a0)},
        "cosine": {
            "x1": sol.x1.a.tolist(),
            "x2": sol.x2.a.tolist(),
            "x3": sol.x3.a.tolist(),
        },
        "sine": {
            "x1": sol.x1.b.tolist(),
            "x2": sol.x2.b.tolist(),
            "x3": sol.x3.b.tolist(),
        },
        "provenance": sf.provenance,
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def _require(doc: dict, key: str):
    if key not in doc:
        raise SolutionFormatError(f"solution file is missing the '{key}' field")
    return doc[key]


def load_solution(path) -> SolutionFile:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise SolutionFormatError(
            f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    if not isinstance(doc, dict):
        raise SolutionFormatError(f"{path}: top level must be an object")
    schema = _require(doc, "schema")
    if schema != SCHEMA:
        raise SolutionFormatError(f"{path}: unsupported schema {schema!r}, expected {SCHEMA!r}")

    p = _require(doc, "params")
    try:
        params = LorenzParams(float(p["sigma"]), float(p["r"]), float(p["b"]))
    except (KeyError, TypeError, ValueError) as err:
        raise SolutionFormatError(f"{path}: bad params block: {err}") from err

    h = int(_require(doc, "h"))
    omega = float(_require(doc, "omega"))
    period = float(_require(doc, "period"))
    if omega <= 0:
        raise SolutionFormatError(f"{path}: omega must be positive, got {omega}")
    if not math.isclose(period, 2.0 * math.pi / omega, rel_tol=1e-15):
        raise SolutionFormatError(f"{path}: period {period!r} inconsistent with omega {omega!r}")

    consts = _require(doc, "constants")
    cosine = _require(doc, "cosine")
    sine = _require(doc, "sine")
    polys = {}
    for name in ("x1", "x2", "x3"):
        try:
            a = [float(v) for v in cosine[name]]
            b = [float(v) for v in sine[name]]
            a0 = float(consts[name])
        except (KeyError, TypeError, ValueError) as err:
            raise SolutionFormatError(f"{path}: bad coefficient block for {name}: {err}") from err
        if len(a) != h or len(b) != h:
            raise SolutionFormatError(
                f"{path}: coordinate {name} carries {len(a)}/{len(b)} amplitudes, expected h={h}"
            )
        polys[name] = TrigPolynomial(a0, a, b)

    return SolutionFile(
        solution=HarmonicSolution(omega, polys["x1"], polys["x2"], polys["x3"]),
        params=params,
        anchor=float(_require(doc, "anchor")),
        provenance=doc.get("provenance", {}),
    )


def sample_trajectory(sol: HarmonicSolution, samples: int) -> np.ndarray:
    """Uniform samples of (t, x1, x2, x3) over one period, endpoint excluded."""
    if samples < 2:
        raise ValueError("at least two samples are required")
    t = np.arange(samples) * (sol.period / samples)
    out = np.empty((samples, 4))
    out[:, 0] = t
    k = np.arange(1, sol.h + 1)
    phases = np.outer(k * sol.omega, t)
    ck, sk = np.cos(phases), np.sin(phases)
    for col, p in enumerate((sol.x1, sol.x2, sol.x3), start=1):
        out[:, col] = p.a0 + p.a @ ck + p.b @ sk
    return out


def export_coefficient_tables(sf: SolutionFile, outdir) -> list[Path]:
    """Write one CSV per coordinate with rows (i, c, s), i = 1..h."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, poly in (("x1", sf.solution.x1), ("x2", sf.solution.x2), ("x3", sf.solution.x3)):
        path = outdir / f"amplitudes_{name}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "c", "s"])
            for i in range(1, sf.h + 1):
                writer.writerow([i, repr(float(poly.a[i - 1])), repr(float(poly.b[i - 1]))])
        paths.append(path)
    return paths


def export_trajectory_csv(sf: SolutionFile, path, samples: int = 2048) -> Path:
    path = Path(path)
    data = sample_trajectory(sf.solution, samples)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x1", "x2", "x3"])
        for row in data:
            writer.writerow([repr(float(v)) for v in row])
    return path


def export_svg(sf: SolutionFile, path, samples: int = 2048, size: int = 720) -> Path:
    """Static SVG 1.1 polyline of the cycle's (x1, x3) projection."""
    path = Path(path)
    data = sample_trajectory(sf.solution, samples)
    xs, zs = data[:, 1], data[:, 3]
    # close the loop visually; the sampling itself excludes the endpoint
    xs = np.append(xs, xs[0])
    zs = np.append(zs, zs[0])
    pad = 0.05
    xlo, xhi = xs.min(), xs.max()
    zlo, zhi = zs.min(), zs.max()
    xspan = (xhi - xlo) or 1.0
    zspan = (zhi - zlo) or 1.0
    xlo, xhi = xlo - pad * xspan, xhi + pad * xspan
    zlo, zhi = zlo - pad * zspan, zhi + pad * zspan
    w = size
    hpx = size
    px = (xs - xlo) / (xhi - xlo) * w
    py = (zhi - zs) / (zhi - zlo) * hpx  # SVG y axis points down
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(px, py))
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{hpx}" viewBox="0 0 {w} {hpx}">\n'
        f'  <rect width="{w}" height="{hpx}" fill="white"/>\n'
        f'  <polyline points="{points}" fill="none" stroke="#1f3d7a" stroke-width="1.2"/>\n'
        "</svg>\n"
    )
    path.write_text(svg, encoding="utf-8")
    return path
