"""Komlós–Szemerédi limit model for the probability that a random graph is Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["PhasePoint", "c_of", "p_hamiltonian", "threshold_degree", "threshold_edges", "phase_point"]


def _check_v(v: float) -> None:
    if v < 3:
        raise ValueError(f"model needs v >= 3 (ln ln v undefined or non-positive), got v={v}")


def threshold_edges(v: float) -> float:
    """Edge count at which the offset parameter is zero."""
    _check_v(v)
    return 0.5 * v * math.log(v) + 0.5 * v * math.log(math.log(v))


def c_of(v: float, e: float) -> float:
    """Offset ``c`` solving ``e = v ln(v)/2 + v ln(ln(v))/2 + c v``."""
    return (e - threshold_edges(v)) / v


def p_hamiltonian(v: float, e: float) -> float:
    return math.exp(-math.exp(-2.0 * c_of(v, e)))


def threshold_degree(v: float) -> float:
    """Mean degree ``ln(v) + ln(ln(v))`` at the centre of the transition."""
    _check_v(v)
    return math.log(v) + math.log(math.log(v))


@dataclass(frozen=True)
class PhasePoint:
    v: int
    e: float
    c: float
    p_hamiltonian: float


def phase_point(v: int, e: float) -> PhasePoint:
    c = c_of(v, e)
    return PhasePoint(v=v, e=e, c=c, p_hamiltonian=math.exp(-math.exp(-2.0 * c)))
