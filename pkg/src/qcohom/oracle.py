"""Monte Carlo check of Duistermaat-Heckman densities.

Uniform pure states on C^(2^r) are drawn as normalized complex Gaussian
vectors. Only the moduli |z_j|^2 enter the moment map, and for a Box-Muller
pair z = sqrt(-ln U1) * exp(2 pi i U2) the squared modulus is exactly
-ln U1, an Exp(1) variate; the phase U2 drops out and is never drawn.

Random streams come from numpy's counter-based Philox generator. Chunk k of
a run uses ``Philox(seed).jumped(k)``, so the histogram depends only on the
seed and the sample count, never on the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .action import build_weight_matrix
from .errors import ConfigurationError, StructuralError
from .walls import Wall, enumerate_walls

MAX_SAMPLES = 10 ** 8
CHUNK = 1 << 16
MIN_COMPARE_SAMPLES = 10 ** 4


@dataclass(frozen=True)
class SampleConfig:
    r: int
    samples: int
    bins: int = 20
    seed: int = 42
    band: Fraction | None = None   # wall exclusion, in xi units; None = 1/bins
    threads: int = 4

    def __post_init__(self):
        if not 1 <= self.r <= 6:
            raise ConfigurationError(f"number of qubits must be in 1..6, got {self.r}")
        if self.samples < 1:
            raise ConfigurationError("samples must be positive")
        if self.samples > MAX_SAMPLES:
            raise ConfigurationError(f"{self.samples} samples exceed the cap of {MAX_SAMPLES}")
        if self.bins < 4:
            raise ConfigurationError("need at least 4 bins per axis")
        if self.band is not None and self.band < 0:
            raise ConfigurationError("wall band must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        if self.threads < 1:
            raise ConfigurationError("threads must be positive")

    @property
    def wall_band(self) -> Fraction:
        return Fraction(1, self.bins) if self.band is None else Fraction(self.band)


@dataclass
class Histogram:
    r: int
    bins: int
    counts: np.ndarray        # shape (bins,) * r, int64
    samples: int

    @property
    def cell_width(self) -> float:
        return 2.0 / self.bins

    def centers(self) -> np.ndarray:
        return -1.0 + self.cell_width * (np.arange(self.bins) + 0.5)

    def density(self) -> np.ndarray:
        if self.samples == 0:
            raise StructuralError("empty histogram")
        return self.counts / (self.samples * self.cell_width ** self.r)

    def means(self) -> np.ndarray:
        """Per-axis mean of the binned marginals (bin-centre approximation)."""
        c = self.centers()
        out = []
        for axis in range(self.r):
            other = tuple(i for i in range(self.r) if i != axis)
            marg = self.counts.sum(axis=other) if other else self.counts
            out.append(float((marg * c).sum() / self.samples))
        return np.array(out)


def _chunk_sizes(total: int):
    full, rest = divmod(total, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _draw(r: int, seed: int, index: int, size: int, A: np.ndarray) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(seed).jumped(index))
    u = gen.random((size, A.shape[1]))
    weights = -np.log1p(-u)          # -ln(1 - U), U in [0, 1)
    return (weights @ A.T) / weights.sum(axis=1, keepdims=True)


def sample_points(cfg: SampleConfig, limit: int | None = None) -> np.ndarray:
    """Raw moment-map samples (n, r); same stream as :func:`sample_marginals`."""
    A = np.array(build_weight_matrix(cfg.r).rows(), dtype=float)
    n = cfg.samples if limit is None else min(limit, cfg.samples)
    parts = [_draw(cfg.r, cfg.seed, k, size, A) for k, size in enumerate(_chunk_sizes(n))]
    return np.concatenate(parts)


def _bin_index(xi: np.ndarray, bins: int) -> np.ndarray:
    idx = np.floor((xi + 1.0) * (bins / 2.0)).astype(np.int64)
    return np.minimum(idx, bins - 1)


def sample_marginals(cfg: SampleConfig) -> Histogram:
    A = np.array(build_weight_matrix(cfg.r).rows(), dtype=float)
    sizes = _chunk_sizes(cfg.samples)
    strides = cfg.bins ** np.arange(cfg.r - 1, -1, -1)

    def work(k):
        xi = _draw(cfg.r, cfg.seed, k, sizes[k], A)
        flat = _bin_index(xi, cfg.bins) @ strides
        return np.bincount(flat, minlength=cfg.bins ** cfg.r)

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        partial = list(pool.map(work, range(len(sizes))))
    total = np.zeros(cfg.bins ** cfg.r, dtype=np.int64)
    for p in partial:            # fixed order: bit-identical for any thread count
        total += p
    return Histogram(cfg.r, cfg.bins, total.reshape((cfg.bins,) * cfg.r), cfg.samples)


def sample_slice(cfg: SampleConfig, axis: int = 1) -> Histogram:
    """Conditional histogram of the other axes given |xi_axis| < 1/bins."""
    if cfg.r < 2:
        raise ConfigurationError("slicing needs at least two qubits")
    A = np.array(build_weight_matrix(cfg.r).rows(), dtype=float)
    sizes = _chunk_sizes(cfg.samples)
    keep = [i for i in range(cfg.r) if i != axis - 1]
    strides = cfg.bins ** np.arange(cfg.r - 2, -1, -1)
    half = 1.0 / cfg.bins

    def work(k):
        xi = _draw(cfg.r, cfg.seed, k, sizes[k], A)
        sel = xi[np.abs(xi[:, axis - 1]) < half][:, keep]
        flat = _bin_index(sel, cfg.bins) @ strides
        return np.bincount(flat, minlength=cfg.bins ** (cfg.r - 1))

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        partial = list(pool.map(work, range(len(sizes))))
    total = np.zeros(cfg.bins ** (cfg.r - 1), dtype=np.int64)
    for p in partial:
        total += p
    return Histogram(cfg.r - 1, cfg.bins, total.reshape((cfg.bins,) * (cfg.r - 1)), int(total.sum()))


def slice_walls(walls: Sequence[Wall], axis: int) -> list:
    """Traces of the walls on the hyperplane x_axis = 0."""
    out = []
    seen = set()
    for w in walls:
        n = tuple(c for i, c in enumerate(w.normal, start=1) if i != axis)
        if not any(n):
            continue
        key = (n, w.offset)
        if key not in seen:
            seen.add(key)
            out.append(Wall(n, w.offset, w.vertex_set))
    return out


def _excluded(h: Histogram, walls: Sequence[Wall], band: float) -> np.ndarray:
    """Cells whose box comes within ``band`` of a wall hyperplane."""
    c = h.centers()
    grids = np.meshgrid(*([c] * h.r), indexing="ij")
    half = h.cell_width / 2
    mask = np.zeros((h.bins,) * h.r, dtype=bool)
    for w in walls:
        n = np.array([float(x) for x in w.normal])
        val = sum(n[i] * grids[i] for i in range(h.r)) - float(w.offset)
        dist = np.maximum(0.0, np.abs(val) - half * np.abs(n).sum()) / np.linalg.norm(n)
        mask |= dist <= band
    return mask


@dataclass
class ComparisonReport:
    r: int
    samples: int
    bins: int
    band: float
    metric: str
    threshold: float
    linf: float
    l2: float
    cells: int
    passed: bool
    residuals: np.ndarray = field(repr=False)
    mask: np.ndarray = field(repr=False)     # True = compared

    def to_json(self, with_cells: bool = False) -> dict:
        out = {
            "qubits": self.r,
            "samples": self.samples,
            "bins": self.bins,
            "band": self.band,
            "metric": self.metric,
            "threshold": self.threshold,
            "linf": self.linf,
            "l2": self.l2,
            "cells_compared": self.cells,
            "pass": self.passed,
        }
        if with_cells:
            out["residuals"] = np.where(self.mask, self.residuals, np.nan).tolist()
        return out


def exact_on_grid(density, h: Histogram) -> np.ndarray:
    c = [Fraction(float(x)).limit_denominator(10 ** 6) for x in h.centers()]
    out = np.empty((h.bins,) * h.r)
    for idx in np.ndindex(*out.shape):
        out[idx] = float(density(tuple(c[i] for i in idx)))
    return out


def compare_density(
    h: Histogram,
    density,
    walls: Sequence[Wall] | None = None,
    band: float | None = None,
    threshold: float = 0.02,
    metric: str = "linf",
) -> ComparisonReport:
    """Residuals empirical - exact at cell centres, away from the walls."""
    if getattr(density, "r", None) != h.r:
        raise StructuralError(f"histogram has {h.r} axes, density has {getattr(density, 'r', None)}")
    normalized = getattr(density, "is_normalized", True)
    if not normalized:
        raise StructuralError("density is not normalized to total mass 1")
    if metric not in ("linf", "l2"):
        raise ConfigurationError(f"unknown metric {metric!r}")
    if h.samples < MIN_COMPARE_SAMPLES:
        raise ConfigurationError(f"comparison needs at least {MIN_COMPARE_SAMPLES} samples")
    if walls is None:
        walls = enumerate_walls(build_weight_matrix(h.r))
    band = 1.0 / h.bins if band is None else float(band)
    residual = h.density() - exact_on_grid(density, h)
    keep = ~_excluded(h, walls, band)
    vals = residual[keep]
    linf = float(np.abs(vals).max()) if vals.size else float("nan")
    l2 = float(np.sqrt(np.mean(vals ** 2))) if vals.size else float("nan")
    score = linf if metric == "linf" else l2
    return ComparisonReport(
        h.r, h.samples, h.bins, band, metric, threshold, linf, l2,
        int(keep.sum()), bool(vals.size and score <= threshold), residual, keep,
    )


def ring_profile(h: Histogram) -> tuple:
    """Mean empirical density and its standard error on Chebyshev rings about the origin."""
    c = h.centers()
    grids = np.meshgrid(*([c] * h.r), indexing="ij")
    radius = np.max(np.abs(np.stack(grids)), axis=0)
    ring = np.floor(radius * h.bins / 2).astype(int)      # 0 .. bins/2 - 1
    dens = h.density()
    scale = 1.0 / (h.samples * h.cell_width ** h.r)
    means, errs = [], []
    for k in range(ring.max() + 1):
        sel = ring == k
        n = sel.sum()
        means.append(float(dens[sel].mean()))
        errs.append(float(np.sqrt(h.counts[sel].sum()) * scale / n))
    return np.array(means), np.array(errs)


def is_monotone_decreasing(h: Histogram, sigmas: float = 3.0) -> bool:
    """Ring averages never rise by more than ``sigmas`` combined standard errors."""
    means, errs = ring_profile(h)
    for k in range(1, len(means)):
        if means[k] > means[k - 1] + sigmas * np.hypot(errs[k], errs[k - 1]):
            return False
    return True
