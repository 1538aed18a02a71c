"""Finite-volume sequences with a 1/|L| extrapolation to the thermodynamic limit."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError

DEFAULT_FIT_POINTS = 4


def _num(x: float):
    """JSON-safe float: infinities become the strings "inf" / "-inf"."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass(frozen=True)
class ExtrapolationSeries:
    """Points (volume, value) plus the fitted limit.

    ``method`` is ``"1/V-lsq(k=..)"`` for a least-squares fit of
    value = limit + c/volume over the last k points, ``"single"`` when only
    one point exists and ``"divergent"`` when a fitted point is infinite (the
    limit is then +inf).
    """

    points: tuple
    limit_estimate: float
    fit_residual: float
    method: str
    slope: float = field(default=0.0, compare=False)

    @property
    def volumes(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=float)

    def to_dict(self) -> dict:
        return {
            "points": [{"volume": int(v), "value": _num(y)} for v, y in self.points],
            "limit_estimate": _num(self.limit_estimate),
            "fit_residual": _num(self.fit_residual),
            "method": self.method,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["volume", "value"])
        for v, y in self.points:
            w.writerow([int(v), _num(y) if math.isinf(y) else repr(float(y))])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def extrapolate(volumes: Sequence[int], values: Sequence[float], k: int = DEFAULT_FIT_POINTS) -> ExtrapolationSeries:
    """Least-squares fit of value = limit + c/volume over the last ``k`` points."""
    vols = [int(v) for v in volumes]
    vals = [float(y) for y in values]
    if len(vols) != len(vals):
        raise ValidationError("volumes and values differ in length")
    if not vols:
        raise ValidationError("empty series")
    if any(b <= a for a, b in zip(vols, vols[1:])):
        raise ValidationError(f"volumes must be strictly increasing, got {vols}")
    if k < 1:
        raise ValidationError("k must be >= 1")
    points = tuple(zip(vols, vals))
    use_v = np.array(vols[-k:], dtype=float)
    use_y = np.array(vals[-k:], dtype=float)
    if np.any(np.isnan(use_y)):
        raise ValidationError("series contains NaN")
    if np.any(np.isinf(use_y)):
        return ExtrapolationSeries(points, math.inf, math.inf, "divergent")
    if use_v.size == 1:
        return ExtrapolationSeries(points, float(use_y[0]), 0.0, "single")
    design = np.column_stack([np.ones_like(use_v), 1.0 / use_v])
    coef, *_ = np.linalg.lstsq(design, use_y, rcond=None)
    resid = float(np.max(np.abs(design @ coef - use_y)))
    return ExtrapolationSeries(points, float(coef[0]), resid, f"1/V-lsq(k={use_v.size})", float(coef[1]))
