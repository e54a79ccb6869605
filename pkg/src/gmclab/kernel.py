"""Zero-boundary disk kernels and regularized covariance models.

The base kernel on a centered disk of radius R is
    G(x, y) = log|R**2 - x*conj(y)| - log R - log|x - y|,
zero when either point leaves the closed disk. Truncating the distance at a
scale epsilon gives a finite covariance matrix whose diagonal
    log(1/epsilon) + log((R**2 - |x|**2)/R)
matches the variance of a circle average at radius epsilon. The matrix is
repaired to positive semidefinite by clipping negative eigenvalues at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, SingularityError
from .measure import AtomicMeasure

# relative Frobenius tolerance the factor must reproduce the repaired matrix to
FACTOR_RTOL = 1e-8


@dataclass(frozen=True)
class DiskKernel:
    """Green-type kernel of the centered disk of the given radius."""

    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("kernel radius must be > 0")

    def inside(self, z: complex) -> bool:
        return abs(z) < self.radius

    def __call__(self, x: complex, y: complex) -> float:
        if x == y:
            raise SingularityError("kernel is singular on the diagonal")
        r = self.radius
        if abs(x) >= r or abs(y) >= r:
            return 0.0
        return math.log(abs(r * r - x * y.conjugate()) / (r * abs(x - y)))

    def smooth_part(self, x: complex, y: complex) -> float:
        """Kernel plus log|x - y|, continuous through the diagonal."""
        r = self.radius
        if abs(x) >= r or abs(y) >= r:
            return 0.0
        return math.log(abs(r * r - x * y.conjugate()) / r)

    def entry_matrix(self, positions: np.ndarray, epsilon: float) -> np.ndarray:
        """Vectorized regularized entries for all atom pairs (diagonal included)."""
        r = self.radius
        smooth = np.log(np.abs(r * r - np.outer(positions, positions.conj())) / r)
        dist = np.abs(positions[:, None] - positions[None, :])
        return smooth - np.log(np.maximum(dist, epsilon))


UNIT_DISK = DiskKernel(1.0)


def green_disk(x: complex, y: complex) -> float:
    """Zero-boundary kernel of the unit disk, log|(1 - x*conj(y))/(x - y)|."""
    return UNIT_DISK(x, y)


def green_subdisk(x: complex, y: complex, r: float) -> float:
    """Zero-boundary kernel of the centered disk of radius r."""
    return DiskKernel(r)(x, y)


def regularized_entry(x: complex, y: complex, epsilon: float, green=UNIT_DISK) -> float:
    """Kernel entry with the distance truncated below at epsilon.

    Equals green(x, y) when |x - y| >= epsilon; inside the truncation scale the
    singular -log|x - y| part is frozen at -log(epsilon), which on the diagonal
    gives log(1/epsilon) + log of the boundary-distance factor.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    if not (green.inside(x) and green.inside(y)):
        return 0.0
    if abs(x - y) >= epsilon:
        return green(x, y)
    return green.smooth_part(x, y) - math.log(epsilon)


def default_epsilon(measure: AtomicMeasure) -> float:
    """Half the minimum pairwise atom distance; geometric fallback for one atom."""
    gap = measure.min_pair_distance()
    if math.isinf(gap):
        return (1.0 - measure.support_radius) / 2.0
    return gap / 2.0


def clip_to_psd(matrix: np.ndarray):
    """Eigenvalue clip at zero.

    Returns (repaired, clip_magnitude, eig_min, eig_max) where clip_magnitude
    is the size of the most negative eigenvalue removed (0.0 if none).
    """
    eigvals, eigvecs = np.linalg.eigh(matrix)
    eig_min, eig_max = float(eigvals[0]), float(eigvals[-1])
    clipped = np.clip(eigvals, 0.0, None)
    repaired = (eigvecs * clipped) @ eigvecs.T
    repaired = (repaired + repaired.T) / 2.0
    return repaired, max(0.0, -eig_min), eig_min, eig_max


def _lower_triangular_factor(matrix: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        pass
    # exactly singular after the clip: build L from the QR decomposition of an
    # eigenvalue square root, S @ S.T = matrix and S.T = Q R gives L = R.T
    eigvals, eigvecs = np.linalg.eigh(matrix)
    root = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
    _, r = np.linalg.qr(root.T)
    factor = r.T
    signs = np.sign(np.diag(factor))
    signs[signs == 0.0] = 1.0
    return factor * signs[None, :]


@dataclass(frozen=True)
class CovarianceModel:
    """Repaired covariance matrix over a measure's atoms, ready for sampling.

    matrix is the PSD-repaired regularized kernel matrix, factor a lower
    triangular square root, diag_variance the per-atom variance the factor
    actually realizes (row sums of squares).
    """

    measure: AtomicMeasure
    epsilon: float
    matrix: np.ndarray
    factor: np.ndarray
    diag_variance: np.ndarray
    clip_magnitude: float
    eig_min_raw: float
    eig_max: float

    @property
    def n(self) -> int:
        return self.measure.n


def build_covariance(measure: AtomicMeasure, epsilon: float | None = None,
                     green=UNIT_DISK) -> CovarianceModel:
    """Assemble, symmetrize and PSD-repair the regularized kernel matrix."""
    if epsilon is None:
        epsilon = default_epsilon(measure)
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    for p in measure.positions:
        if not green.inside(p):
            raise DomainError("atom outside the kernel domain")
    if hasattr(green, "entry_matrix"):
        raw = green.entry_matrix(measure.positions, epsilon)
    else:
        n = measure.n
        raw = np.empty((n, n))
        for i, p in enumerate(measure.positions):
            for j, q in enumerate(measure.positions):
                raw[i, j] = regularized_entry(p, q, epsilon, green)
    raw = (raw + raw.T) / 2.0
    repaired, clip_magnitude, eig_min, eig_max = clip_to_psd(raw)
    factor = _lower_triangular_factor(repaired)
    scale = float(np.linalg.norm(repaired))
    defect = float(np.linalg.norm(factor @ factor.T - repaired))
    if scale > 0 and defect > FACTOR_RTOL * scale:
        raise NumericalError(
            f"factorization defect {defect:.3e} exceeds {FACTOR_RTOL:.0e} * {scale:.3e} "
            f"(eigenvalues in [{eig_min:.3e}, {eig_max:.3e}], clip {clip_magnitude:.3e})")
    diag_variance = np.einsum("ij,ij->i", factor, factor)
    diag_variance.setflags(write=False)
    repaired.setflags(write=False)
    factor.setflags(write=False)
    return CovarianceModel(measure, float(epsilon), repaired, factor, diag_variance,
                           clip_magnitude, eig_min, eig_max)


def markov_difference_psd(measure: AtomicMeasure, r: float):
    """Difference kernel (unit disk minus subdisk of radius r) on the atoms.

    The off-diagonal log-distance parts cancel, so entries close over the
    diagonal: D = log|1 - x*conj(y)| - log|r**2 - x*conj(y)| + log r, with
    diagonal log(1 - |p|**2) - log((r**2 - |p|**2)/r). Returns
    (matrix, min_eig, max_eig, psd) with psd true when min_eig >= -1e-8 * max_eig.
    """
    if not 0.0 < r <= 1.0:
        raise DomainError("r must lie in (0, 1]")
    if measure.support_radius >= r:
        raise DomainError("every atom must satisfy |p| < r")
    outer = np.outer(measure.positions, measure.positions.conj())
    diff = np.log(np.abs(1.0 - outer)) - np.log(np.abs(r * r - outer)) + math.log(r)
    diff = (diff + diff.T) / 2.0
    eigvals = np.linalg.eigvalsh(diff)
    min_eig, max_eig = float(eigvals[0]), float(eigvals[-1])
    psd = min_eig >= -1e-8 * max(max_eig, 0.0)
    return diff, min_eig, max_eig, psd
