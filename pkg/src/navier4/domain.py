"""Box domains, the analytic Dirichlet-Laplacian spectrum, and field types.

The whole package works on open axis-aligned boxes (0,a_1)x...x(0,a_N),
N = 1..3, where the Laplacian eigenpairs are closed-form:

    lambda_k = pi^2 sum_i (k_i/a_i)^2
    phi_k(x) = prod_i sqrt(2/a_i) sin(k_i pi x_i / a_i)

Fields live either as collocation samples on the uniform interior nodes
x_i = a_i*m/(n_i+1), m = 1..n_i (:class:`GridField`) or as sine-mode
coefficients (:class:`SpectralField`).  On these nodes the type-I discrete
sine transform is exact on band-limited data, and the plain interior-node
quadrature rule (weight prod a_i/(n_i+1)) integrates products of retained
modes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.fft import dstn

from .errors import DomainError, TruncationError

# Per-dimension defaults: series tails ~1/K against cost, and estimation
# grids that keep pair sweeps at desk scale.
DEFAULT_TRUNCATION = {1: 64, 2: 32, 3: 16}
DEFAULT_GRID = {1: 129, 2: 65, 3: 21}


@dataclass(frozen=True)
class Domain:
    """An open box (0,a_1) x ... x (0,a_N) with 1 <= N <= 3."""

    lengths: tuple[float, ...]

    def __post_init__(self):
        lengths = tuple(float(a) for a in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if not 1 <= len(lengths) <= 3:
            raise DomainError(f"supported dimensions are 1..3, got {len(lengths)}")
        if any(not math.isfinite(a) or a <= 0 for a in lengths):
            raise DomainError(f"side lengths must be positive reals, got {lengths}")

    @classmethod
    def unit(cls, dim: int = 1) -> "Domain":
        return cls((1.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lengths)

    def measure(self) -> float:
        return float(np.prod(self.lengths))

    def lambda1(self) -> float:
        """Smallest Dirichlet-Laplacian eigenvalue, pi^2 sum 1/a_i^2."""
        return float(np.pi**2 * sum(1.0 / a**2 for a in self.lengths))


@dataclass(frozen=True)
class Mode:
    """A sine-mode multi-index k = (k_1, ..., k_N), every k_i >= 1."""

    index: tuple[int, ...]

    def __post_init__(self):
        index = tuple(int(k) for k in self.index)
        object.__setattr__(self, "index", index)
        if len(index) < 1 or any(k < 1 for k in index):
            raise DomainError(f"mode indices must be >= 1, got {index}")

    def __iter__(self):
        return iter(self.index)


def eigenvalue(domain: Domain, k: Mode | Sequence[int]) -> float:
    """Eigenvalue lambda_k = pi^2 sum_i (k_i/a_i)^2 of -Laplace on the box."""
    idx = tuple(k.index if isinstance(k, Mode) else k)
    if len(idx) != domain.dim:
        raise DomainError(f"mode has {len(idx)} indices for a {domain.dim}D domain")
    return float(np.pi**2 * sum((ki / ai) ** 2 for ki, ai in zip(idx, domain.lengths)))


def _points_array(domain: Domain, x) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    if pts.shape[-1] != domain.dim:
        if domain.dim == 1 and pts.ndim == 2 and pts.shape[0] == 1:
            pts = pts.reshape(-1, 1)
        else:
            raise DomainError(f"points of dimension {pts.shape[-1]} on a {domain.dim}D domain")
    return pts


def eigenfunction_eval(domain: Domain, k: Mode | Sequence[int], x) -> float | np.ndarray:
    """Evaluate the L2-normalized eigenfunction phi_k at one or many points.

    Points must lie in the closed box; the boundary evaluates to 0 exactly
    as the sine product vanishes there.

    Parameters
    ----------
    x : scalar (1D), point sequence, or array of shape (npts, dim).

    Raises
    ------
    DomainError
        If any point lies outside the closure of the box.
    """
    idx = tuple(k.index if isinstance(k, Mode) else k)
    if len(idx) != domain.dim:
        raise DomainError(f"mode has {len(idx)} indices for a {domain.dim}D domain")
    pts = _points_array(domain, x)
    for i, a in enumerate(domain.lengths):
        coord = pts[:, i]
        if np.any(coord < 0) or np.any(coord > a):
            raise DomainError(f"point outside closure along axis {i}")
    out = np.ones(pts.shape[0])
    for i, a in enumerate(domain.lengths):
        out *= math.sqrt(2.0 / a) * np.sin(idx[i] * np.pi * pts[:, i] / a)
    if np.isscalar(x) or (np.asarray(x).ndim == 1 and domain.dim == len(np.atleast_1d(x))):
        return float(out[0]) if out.shape[0] == 1 else out
    return out


def _as_orders(domain: Domain, K) -> tuple[int, ...]:
    if K is None:
        K = DEFAULT_TRUNCATION[domain.dim]
    if np.isscalar(K):
        orders = (int(K),) * domain.dim
    else:
        orders = tuple(int(k) for k in K)
    if len(orders) != domain.dim or any(k < 1 for k in orders):
        raise DomainError(f"bad truncation orders {orders} for dim {domain.dim}")
    return orders


def mode_table(domain: Domain, K) -> tuple[np.ndarray, np.ndarray]:
    """All modes with k_i <= K_i as arrays, sorted by (lambda_k, index).

    Returns
    -------
    idx : int array of shape (M, dim)
    lam : float array of shape (M,), ascending
    """
    orders = _as_orders(domain, K)
    axes = [np.arange(1, k + 1) for k in orders]
    grids = np.meshgrid(*axes, indexing="ij")
    idx = np.stack([g.reshape(-1) for g in grids], axis=1)
    lam = np.pi**2 * np.sum((idx / np.asarray(domain.lengths)) ** 2, axis=1)
    # lexsort: last key is primary, so lambda first, then k_1, k_2, ...
    keys = tuple(idx[:, i] for i in reversed(range(domain.dim))) + (lam,)
    order = np.lexsort(keys)
    return idx[order], lam[order]


def enumerate_modes(domain: Domain, K: int) -> list[Mode]:
    """Modes with every k_i <= K, ascending in lambda_k, lexicographic ties."""
    if int(K) < 1:
        raise DomainError("K must be >= 1")
    idx, _ = mode_table(domain, int(K))
    return [Mode(tuple(int(v) for v in row)) for row in idx]


def phi_matrix(domain: Domain, points: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Matrix of eigenfunction values, shape (npts, nmodes).

    No closure validation here; this is the hot path shared by kernels,
    collocation operators, and spectral evaluation.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, domain.dim)
    out = np.ones((pts.shape[0], idx.shape[0]))
    for i, a in enumerate(domain.lengths):
        out *= np.sin(np.outer(pts[:, i], idx[:, i]) * (np.pi / a))
    out *= np.prod([math.sqrt(2.0 / a) for a in domain.lengths])
    return out


def _as_resolution(domain: Domain, n) -> tuple[int, ...]:
    if n is None:
        n = DEFAULT_GRID[domain.dim]
    if np.isscalar(n):
        res = (int(n),) * domain.dim
    else:
        res = tuple(int(v) for v in n)
    if len(res) != domain.dim or any(v < 1 for v in res):
        raise DomainError(f"bad resolution {res} for dim {domain.dim}")
    return res


def node_axes(domain: Domain, resolution) -> tuple[np.ndarray, ...]:
    """Interior collocation nodes a_i*m/(n_i+1), m = 1..n_i, per axis."""
    res = _as_resolution(domain, resolution)
    return tuple(
        a * np.arange(1, n + 1) / (n + 1) for a, n in zip(domain.lengths, res)
    )


def node_points(domain: Domain, resolution) -> np.ndarray:
    """All collocation nodes, row-major, shape (prod n_i, dim)."""
    axes = node_axes(domain, resolution)
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def quadrature_weight(domain: Domain, resolution) -> float:
    """Uniform interior-node quadrature weight, prod a_i/(n_i+1)."""
    res = _as_resolution(domain, resolution)
    return float(np.prod([a / (n + 1) for a, n in zip(domain.lengths, res)]))


@dataclass
class GridField:
    """Samples of a scalar field at the interior collocation nodes.

    `values` has shape `resolution` (row-major over axes); boundary values
    are implicitly zero, matching the Dirichlet/Navier trace.
    """

    domain: Domain
    resolution: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        self.resolution = _as_resolution(self.domain, self.resolution)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.resolution:
            raise DomainError(
                f"value tensor shape {vals.shape} != resolution {self.resolution}"
            )
        self.values = vals

    @classmethod
    def zeros(cls, domain: Domain, resolution) -> "GridField":
        res = _as_resolution(domain, resolution)
        return cls(domain, res, np.zeros(res))

    def axes(self) -> tuple[np.ndarray, ...]:
        return node_axes(self.domain, self.resolution)

    def points(self) -> np.ndarray:
        return node_points(self.domain, self.resolution)

    def norm_inf(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def __add__(self, other: "GridField") -> "GridField":
        self._check_compatible(other)
        return GridField(self.domain, self.resolution, self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        self._check_compatible(other)
        return GridField(self.domain, self.resolution, self.values - other.values)

    def __mul__(self, scalar: float) -> "GridField":
        return GridField(self.domain, self.resolution, self.values * float(scalar))

    __rmul__ = __mul__

    def _check_compatible(self, other: "GridField"):
        if self.domain != other.domain or self.resolution != other.resolution:
            raise DomainError("grid fields live on different grids")

    def to_csv(self, path) -> None:
        """Write `# domain: ...; resolution: ...` header plus x_1..x_N,value rows."""
        pts = self.points()
        flat = self.values.reshape(-1)
        lines = [
            "# domain: "
            + ",".join(repr(a) for a in self.domain.lengths)
            + "; resolution: "
            + ",".join(str(n) for n in self.resolution)
        ]
        for row, v in zip(pts, flat):
            lines.append(",".join(repr(float(c)) for c in row) + f",{float(v)!r}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "GridField":
        with open(path) as fh:
            header = fh.readline().strip()
            if not header.startswith("# domain:"):
                raise DomainError(f"{path}: missing grid-field header")
            body = header[1:].split(";")
            lengths = tuple(float(t) for t in body[0].split(":", 1)[1].split(","))
            res = tuple(int(t) for t in body[1].split(":", 1)[1].split(","))
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        domain = Domain(lengths)
        count = int(np.prod(res))
        if data.shape[0] != count or data.shape[1] != domain.dim + 1:
            raise DomainError(f"{path}: expected {count} rows of {domain.dim + 1} columns")
        return cls(domain, res, data[:, -1].reshape(res))


@dataclass
class SpectralField:
    """Sine-mode coefficients, truncated at per-dimension order.

    `coeffs[k1-1, ..., kN-1]` is the coefficient of phi_(k1..kN); modes with
    any index beyond the stored order carry coefficient exactly zero.
    """

    domain: Domain
    order: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        self.order = _as_orders(self.domain, self.order)
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.shape != self.order:
            raise DomainError(f"coefficient shape {arr.shape} != order {self.order}")
        self.coeffs = arr

    def coeff(self, k: Mode | Sequence[int]) -> float:
        idx = tuple(k.index if isinstance(k, Mode) else k)
        if any(i > o for i, o in zip(idx, self.order)):
            return 0.0
        return float(self.coeffs[tuple(i - 1 for i in idx)])

    def modes(self) -> tuple[np.ndarray, np.ndarray]:
        """Index array (nmodes, dim) and flat coefficients, C-order."""
        axes = [np.arange(1, o + 1) for o in self.order]
        grids = np.meshgrid(*axes, indexing="ij")
        idx = np.stack([g.reshape(-1) for g in grids], axis=1)
        return idx, self.coeffs.reshape(-1)

    def evaluate(self, points) -> np.ndarray:
        """Pointwise sum of c_k phi_k at arbitrary interior points."""
        idx, flat = self.modes()
        pts = _points_array(self.domain, points)
        return phi_matrix(self.domain, pts, idx) @ flat

    def to_csv(self, path) -> None:
        idx, flat = self.modes()
        lines = [
            "# domain: "
            + ",".join(repr(a) for a in self.domain.lengths)
            + "; order: "
            + ",".join(str(o) for o in self.order)
        ]
        for row, v in zip(idx, flat):
            lines.append(",".join(str(int(c)) for c in row) + f",{float(v)!r}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "SpectralField":
        with open(path) as fh:
            header = fh.readline().strip()
            if not header.startswith("# domain:"):
                raise DomainError(f"{path}: missing spectral-field header")
            body = header[1:].split(";")
            lengths = tuple(float(t) for t in body[0].split(":", 1)[1].split(","))
            order = tuple(int(t) for t in body[1].split(":", 1)[1].split(","))
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        domain = Domain(lengths)
        coeffs = np.zeros(order)
        for row in data:
            pos = tuple(int(k) - 1 for k in row[:-1])
            coeffs[pos] = row[-1]
        return cls(domain, order, coeffs)


def forward_transform(u: GridField, K=None) -> SpectralField:
    """Project collocation samples onto sine modes via the type-I DST.

    The coefficient of mode k equals the interior-node quadrature of
    u*phi_k, which is exact whenever u is band-limited to the grid.

    Raises
    ------
    TruncationError
        If any requested order exceeds the grid resolution.
    """
    domain = u.domain
    orders = _as_orders(domain, K)
    if any(k > n for k, n in zip(orders, u.resolution)):
        raise TruncationError(
            f"truncation {orders} exceeds grid resolution {u.resolution}"
        )
    scale = np.prod(
        [math.sqrt(a / 2.0) / (n + 1) for a, n in zip(domain.lengths, u.resolution)]
    )
    full = dstn(u.values, type=1) * scale
    sl = tuple(slice(0, k) for k in orders)
    return SpectralField(domain, orders, full[sl].copy())


def inverse_transform(c: SpectralField, resolution=None) -> GridField:
    """Evaluate the truncated sine sum at collocation nodes.

    Uses the inverse DST when the grid resolves every retained mode and
    falls back to direct evaluation otherwise, so the result is always the
    pointwise sum of c_k phi_k.
    """
    domain = c.domain
    res = _as_resolution(domain, resolution)
    if all(k <= n for k, n in zip(c.order, res)):
        buf = np.zeros(res)
        buf[tuple(slice(0, k) for k in c.order)] = c.coeffs
        scale = np.prod([math.sqrt(2.0 / a) / 2.0 for a in domain.lengths])
        return GridField(domain, res, dstn(buf * scale, type=1))
    vals = c.evaluate(node_points(domain, res)).reshape(res)
    return GridField(domain, res, vals)


def quadrature(u: GridField) -> float:
    """Integral of u over the box by the uniform interior-node rule."""
    return quadrature_weight(u.domain, u.resolution) * float(u.values.sum())


def sample_function(domain: Domain, resolution, fn: Callable[[np.ndarray], np.ndarray]) -> GridField:
    """Sample fn(points) -> values on the collocation grid."""
    res = _as_resolution(domain, resolution)
    pts = node_points(domain, res)
    vals = np.asarray(fn(pts), dtype=float).reshape(res)
    return GridField(domain, res, vals)


def gauss_legendre(domain: Domain, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre rule on the box: (points (q^d, d), weights)."""
    pts_1d = []
    wts_1d = []
    for a in domain.lengths:
        t, w = np.polynomial.legendre.leggauss(int(order))
        pts_1d.append(0.5 * a * (t + 1.0))
        wts_1d.append(0.5 * a * w)
    grids = np.meshgrid(*pts_1d, indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    wgrids = np.meshgrid(*wts_1d, indexing="ij")
    wts = np.ones(pts.shape[0])
    for g in wgrids:
        wts = wts * g.reshape(-1)
    return pts, wts


@dataclass(frozen=True)
class SubBox:
    """A closed axis-aligned sub-box [lo_i, hi_i] of a domain."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or any(l >= h for l, h in zip(lo, hi)):
            raise DomainError(f"degenerate sub-box lo={lo} hi={hi}")

    @classmethod
    def centered(cls, domain: Domain, fraction: float = 0.5) -> "SubBox":
        """Centered sub-box covering `fraction` of each side length."""
        if not 0.0 < fraction < 1.0:
            raise DomainError(f"sub-box fraction must be in (0,1), got {fraction}")
        lo = tuple(0.5 * a * (1 - fraction) for a in domain.lengths)
        hi = tuple(0.5 * a * (1 + fraction) for a in domain.lengths)
        return cls(lo, hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def measure(self) -> float:
        return float(np.prod([h - l for l, h in zip(self.lo, self.hi)]))

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of points inside the closed sub-box."""
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        mask = np.ones(pts.shape[0], dtype=bool)
        for i in range(self.dim):
            mask &= (pts[:, i] >= self.lo[i]) & (pts[:, i] <= self.hi[i])
        return mask

    def corners(self) -> np.ndarray:
        """All 2^dim corner points, shape (2^dim, dim)."""
        axes = [(l, h) for l, h in zip(self.lo, self.hi)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def describe(self) -> str:
        return " x ".join(f"[{l!r},{h!r}]" for l, h in zip(self.lo, self.hi))
