"""Finite sections of the regular representations and norm lower bounds.

For a point m the representation acts on l^2(Z) by the matrix
T_m[p, p - q] = Phi(lambda_p m, q); the operator is the direct integral of
these fibres over m.  Compressing to |p| <= P and sampling m on a finite grid
can only decrease the norm, so the largest singular value is a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crossed import CrossedElement, torus_eval
from .element import QhmElement, extend_eval


@dataclass(frozen=True, eq=False)
class TruncationSpec:
    grid: np.ndarray  # shape (G, 2): sample points (x, y)
    P: int

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.grid, float))
        if g.size == 0 or g.shape[1] != 2:
            raise ValueError("grid must be a nonempty array of (x, y) points")
        if self.P < 1:
            raise ValueError("cutoff P must be positive")
        object.__setattr__(self, "grid", g)

    @property
    def size(self) -> tuple[int, int]:
        return len(self.grid), self.P

    def contains(self, other: TruncationSpec) -> bool:
        """Whether ``other`` is a sub-truncation of this one."""
        if other.P > self.P:
            return False
        mine = {tuple(r) for r in self.grid.tolist()}
        return all(tuple(r) in mine for r in other.grid.tolist())


def _blocks(support, P: int, value):
    n = 2 * P + 1
    G = None
    out = None
    for i in range(n):
        p = i - P
        for q in support:
            j = i - q
            if not 0 <= j < n:
                continue
            v = value(p, q)
            if out is None:
                G = len(v)
                out = np.zeros((G, n, n), complex)
            out[:, i, j] = v
    return out


def _check_cutoff(support, P: int):
    if support and max(abs(q) for q in support) > P:
        raise ValueError(f"cutoff P={P} smaller than support {support}")


def theta_blocks(phi: QhmElement, spec: TruncationSpec) -> np.ndarray:
    """Array (G, 2P+1, 2P+1) of compressed fibre matrices, one per grid point."""
    _check_cutoff(phi.support, spec.P)
    x, y = spec.grid[:, 0], spec.grid[:, 1]
    mu2, nu2 = 2 * float(phi.params.mu), 2 * float(phi.params.nu)
    out = _blocks(phi.support, spec.P, lambda p, q: extend_eval(phi, x + p * mu2, y + p * nu2, q))
    if out is None:
        n = 2 * spec.P + 1
        out = np.zeros((len(x), n, n), complex)
    return out


def theta_tilde_blocks(F: CrossedElement, spec: TruncationSpec) -> np.ndarray:
    """Fibre matrices of the crossed-product representation, Psi(lambda_p m, q)."""
    _check_cutoff(F.support, spec.P)
    x, y = spec.grid[:, 0], spec.grid[:, 1]
    mu2, nu2 = 2 * float(F.params.mu), 2 * float(F.params.nu)
    out = _blocks(F.support, spec.P, lambda p, q: torus_eval(F, x + p * mu2, y + p * nu2, q))
    if out is None:
        n = 2 * spec.P + 1
        out = np.zeros((len(x), n, n), complex)
    return out


def theta_matrix(phi: QhmElement, spec: TruncationSpec) -> np.ndarray:
    """Dense block-diagonal matrix indexed by (m, p)."""
    blocks = theta_blocks(phi, spec)
    G, n, _ = blocks.shape
    out = np.zeros((G * n, G * n), complex)
    for g in range(G):
        out[g * n:(g + 1) * n, g * n:(g + 1) * n] = blocks[g]
    return out


def block_singular_values(blocks: np.ndarray) -> np.ndarray:
    return np.linalg.svd(blocks, compute_uv=False)


def section_norm(phi: QhmElement, spec: TruncationSpec) -> float:
    return float(block_singular_values(theta_blocks(phi, spec)).max())


def norm_lower_bound(phi: QhmElement, specs) -> list[float]:
    """Largest singular value of each truncation along a nested sequence.

    Every earlier truncation is a compression of the later ones, so the running
    maximum is still a lower bound; taking it keeps the list non-decreasing when
    two sections agree up to rounding.
    """
    specs = list(specs)
    for a, b in zip(specs, specs[1:]):
        if not b.contains(a):
            raise ValueError("truncation specs are not nested")
    out: list[float] = []
    for s in specs:
        v = section_norm(phi, s)
        out.append(max(v, out[-1]) if out else v)
    return out


def nested_specs(rng: np.random.Generator, sizes, cutoffs) -> list[TruncationSpec]:
    """Specs whose grids are prefixes of one random sample in F."""
    sizes, cutoffs = list(sizes), list(cutoffs)
    if len(sizes) != len(cutoffs):
        raise ValueError("need one cutoff per grid size")
    pts = rng.uniform(0, 1, (max(sizes), 2))
    return [TruncationSpec(pts[:n], P) for n, P in zip(sizes, cutoffs)]
