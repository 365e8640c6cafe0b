"""Orthonormal frame and search box spanning two anchor points.

The first basis vector points from one anchor to the other; the rest come
from a pivoted Gram-Schmidt pass over the canonical basis, starting right
after the canonical axis most aligned with the first vector and cycling
through the remaining axes.  The box is the hypercube centered at the
anchors' midpoint whose long axis (edge 2 times the anchor separation) lies
along the first vector and whose other edges equal the separation, so the
anchors themselves sit at normalized coordinates of plus and minus one half
on the first axis.

Two codings describe a candidate: the normalized box coordinates P in
[-1, 1] x [-1/2, 1/2]^(d-1), and the directly interpretable variables R.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHONORMALITY_TOL = 1e-10
_DEGENERATE_NORM = 1e-12


@dataclass(frozen=True)
class Frame:
    """Immutable orthonormal frame: rows of `basis` are the frame vectors
    expressed in canonical coordinates, so `basis @ w` maps canonical to
    frame coordinates and its transpose maps back."""

    midpoint: np.ndarray
    basis: np.ndarray
    scale: float
    pivot_index: int

    def __post_init__(self) -> None:
        self.midpoint.setflags(write=False)
        self.basis.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.midpoint.size


class CodingKind:
    P = "P"
    R = "R"


@dataclass(frozen=True)
class Coding:
    """A candidate solution: either normalized box coordinates (P) or the
    directly interpretable variables (R)."""

    values: np.ndarray
    kind: str = CodingKind.P

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, float))
        if self.kind not in (CodingKind.P, CodingKind.R):
            raise ValueError(f"unknown coding kind {self.kind!r}")


def build_frame(anchor1, anchor2) -> Frame:
    """Orthonormal frame whose first vector joins anchor1 to anchor2.

    The pivot is the canonical axis with the largest |inner product| with the
    first vector (lowest index on ties); subsequent vectors orthonormalize the
    remaining canonical axes in cyclic order, skipping any candidate whose
    residual norm falls below 1e-12.
    """
    a1 = np.asarray(anchor1, float)
    a2 = np.asarray(anchor2, float)
    if a1.shape != a2.shape or a1.ndim != 1:
        raise ValueError("anchors must be 1-D vectors of equal dimension")
    d = a1.size
    separation = a2 - a1
    scale = float(np.linalg.norm(separation))
    if scale < _DEGENERATE_NORM:
        raise ValueError("anchors coincide; no frame direction exists")

    g1 = separation / scale
    pivot = int(np.argmax(np.abs(g1)))

    basis = np.empty((d, d))
    basis[0] = g1
    built = 1
    # Candidate axes in cyclic order after the pivot; the pivot axis itself is
    # appended last as a fallback for degenerate skips.
    candidates = [(pivot + j) % d for j in range(1, d + 1)]
    for idx in candidates:
        if built == d:
            break
        e = np.zeros(d)
        e[idx] = 1.0
        residual = e - basis[:built].T @ (basis[:built] @ e)
        norm = float(np.linalg.norm(residual))
        if norm < _DEGENERATE_NORM:
            continue
        basis[built] = residual / norm
        built += 1
    if built != d:
        raise ValueError("Gram-Schmidt exhausted the canonical axes before completing the basis")

    return Frame(midpoint=(a1 + a2) / 2.0, basis=basis, scale=scale, pivot_index=pivot)


def p_values_to_r(values: np.ndarray, frame: Frame) -> np.ndarray:
    return frame.midpoint + frame.scale * (frame.basis.T @ np.asarray(values, float))


def r_values_to_p(values: np.ndarray, frame: Frame) -> np.ndarray:
    return frame.basis @ (np.asarray(values, float) - frame.midpoint) / frame.scale


def p_to_r(p: Coding, frame: Frame) -> Coding:
    """Map normalized box coordinates to the interpretable variables."""
    if p.kind != CodingKind.P:
        raise ValueError("expected a P coding")
    return Coding(p_values_to_r(p.values, frame), CodingKind.R)


def r_to_p(r: Coding, frame: Frame) -> Coding:
    """Inverse of :func:`p_to_r`."""
    if r.kind != CodingKind.R:
        raise ValueError("expected an R coding")
    return Coding(r_values_to_p(r.values, frame), CodingKind.P)


def in_box(p: Coding) -> bool:
    """True iff the first coordinate lies in [-1, 1] and every other one in
    [-1/2, 1/2]."""
    v = p.values
    if abs(v[0]) > 1.0:
        return False
    return bool(np.all(np.abs(v[1:]) <= 0.5))


def clamp_to_box(values: np.ndarray) -> np.ndarray:
    """Componentwise projection of a P coding onto the box."""
    out = np.clip(values, -0.5, 0.5)
    out[0] = np.clip(values[0], -1.0, 1.0)
    return out


def sample_in_box(dimension: int, rng: np.random.Generator) -> np.ndarray:
    """One uniform draw from [-1, 1] x [-1/2, 1/2]^(d-1)."""
    values = rng.uniform(-0.5, 0.5, size=dimension)
    values[0] = rng.uniform(-1.0, 1.0)
    return values
