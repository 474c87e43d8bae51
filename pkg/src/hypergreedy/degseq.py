"""Degree sequences and their generating polynomial."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    MaxDegreeTooSmall,
    NegativeFraction,
    SumNotOne,
    UniformityTooSmall,
    ZeroTopDegree,
)

SUM_TOL = 1e-9


@dataclass(frozen=True)
class DegreeSequence:
    """Fractions ``zeta[i-1]`` of vertices having degree ``i``, plus edge size ``k``.

    Instances are immutable. Build them with :func:`validate`, which trims and
    renormalizes raw input; the constructor only checks the invariants.
    """

    k: int
    zeta: tuple[float, ...]

    def __post_init__(self):
        if self.k < 2:
            raise UniformityTooSmall(f"edge size k={self.k} must be at least 2")
        if len(self.zeta) < 2:
            raise MaxDegreeTooSmall(f"max degree {len(self.zeta)} must be at least 2")
        if any(z < 0 for z in self.zeta):
            raise NegativeFraction(f"negative fraction in {self.zeta}")
        if not self.zeta[-1] > 0:
            raise ZeroTopDegree("fraction of max-degree vertices must be positive")
        if abs(math.fsum(self.zeta) - 1.0) > 1e-12:
            raise SumNotOne(f"fractions sum to {math.fsum(self.zeta)!r}")

    @property
    def delta(self) -> int:
        return len(self.zeta)

    @property
    def is_regular(self) -> bool:
        return self.zeta[-1] == 1.0

    @property
    def mean_degree(self) -> float:
        """P'(1), the average vertex degree."""
        return eval_P(self, 1.0, 1)

    def coefficients(self, order: int = 0) -> np.ndarray:
        """Coefficients of the ``order``-th derivative of P, constant term first."""
        c = np.concatenate(([0.0], np.asarray(self.zeta, dtype=float)))
        for _ in range(order):
            c = c[1:] * np.arange(1, len(c))
        return c

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "zeta": list(self.zeta)})


def validate(
    raw_fractions: Sequence[float], k: int, trim_trailing_zeros: bool = True
) -> DegreeSequence:
    """Check raw degree fractions and return a canonical :class:`DegreeSequence`.

    ``raw_fractions[i-1]`` is the fraction of vertices of degree ``i``.
    Trailing zeros are dropped so that the last entry is positive. Sums within
    ``1e-9`` of one are renormalized; anything further off is rejected.
    """
    if len(raw_fractions) == 0:
        raise MaxDegreeTooSmall("empty degree sequence")
    if k < 2:
        raise UniformityTooSmall(f"edge size k={k} must be at least 2")
    fr = [float(z) for z in raw_fractions]
    if any(not math.isfinite(z) for z in fr):
        raise SumNotOne("fractions must be finite")
    if any(z < 0 for z in fr):
        raise NegativeFraction(f"negative fraction in {fr}")
    total = math.fsum(fr)
    if abs(total - 1.0) > SUM_TOL:
        raise SumNotOne(f"fractions sum to {total!r}, not 1")
    if trim_trailing_zeros:
        while fr and fr[-1] == 0.0:
            fr.pop()
    if not fr or fr[-1] == 0.0:
        raise ZeroTopDegree("fraction of max-degree vertices must be positive")
    if len(fr) < 2:
        raise MaxDegreeTooSmall(f"max degree {len(fr)} must be at least 2")
    zeta = _renormalize(fr)
    return DegreeSequence(int(k), zeta)


def _renormalize(fr: list[float]) -> tuple[float, ...]:
    total = math.fsum(fr)
    zeta = [z / total for z in fr]
    # absorb the last rounding residue into the largest entry
    resid = 1.0 - math.fsum(zeta)
    if resid != 0.0:
        i = max(range(len(zeta)), key=zeta.__getitem__)
        zeta[i] += resid
    return tuple(zeta)


def regular(k: int, delta: int) -> DegreeSequence:
    """The k-uniform, delta-regular degree sequence."""
    return validate([0.0] * (delta - 1) + [1.0], k)


def load(path: str | Path) -> DegreeSequence:
    """Read ``{"k": int, "zeta": [...]}`` from a JSON file."""
    with open(path) as fh:
        data = json.load(fh)
    return from_dict(data)


def from_dict(data: dict) -> DegreeSequence:
    try:
        return validate(data["zeta"], int(data["k"]))
    except KeyError as exc:
        raise ValueError(f"degree sequence config is missing key {exc}") from None


def eval_P(ds: DegreeSequence, x, order: int = 0):
    """Evaluate P, P' or P'' at ``x`` by Horner's rule.

    ``x`` may be a scalar or a numpy array.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    c = ds.coefficients(order)
    acc = 0.0 * x
    for a in c[::-1]:
        acc = acc * x + a
    return acc


def sigma_threshold(delta: int) -> float:
    """Edge size below which the random delta-regular hypergraph has a perfect matching.

    Returns ``log(delta) / ((delta - 1) * log(delta / (delta - 1))) + 1``.
    """
    if delta < 2:
        raise MaxDegreeTooSmall(f"delta={delta} must be at least 2")
    d = float(delta)
    # log1p keeps precision for large delta
    return math.log(d) / ((d - 1.0) * -math.log1p(-1.0 / d)) + 1.0
