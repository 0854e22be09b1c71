"""Exact desk-scale H-spectra.

For ``n = 2`` the characteristic polynomial ``phi(lam) = det(A - lam*I)`` is
the Sylvester resultant of the two binary forms ``(A x^{m-1})_i - lam*x_i^{m-1}``.
It is recovered by evaluating that determinant on a circle of nodes and
interpolating. Roots are taken as eigenvalues of the Sylvester matrix at
``lam = 0`` rather than from the coefficients: clustered roots are badly
conditioned in the monomial basis but not as matrix eigenvalues. For
``m = 2`` (matrices, any ``n``) a cyclic Jacobi sweep gives the eigenvalues
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .tensor import SymmetricTensor, apply, eigenvalue_count

__all__ = [
    "OracleError",
    "UnsupportedDimensionError",
    "ConditioningError",
    "DegeneratePolynomialError",
    "BinaryFormPair",
    "CharPoly",
    "Spectrum",
    "binary_forms",
    "sylvester_matrix",
    "sylvester_det",
    "charpoly",
    "determinant",
    "real_spectrum",
    "matrix_spectrum",
    "residual_check",
    "spectrum",
    "spectral_radius_bound",
]

REAL_IMAG_TOL = 1e-8
INTERPOLATION_TOL = 1e-8
NOISE_FACTOR = 100.0
H_RESIDUAL_TOL = 1e-6


class OracleError(ArithmeticError):
    pass


class UnsupportedDimensionError(OracleError):
    """Spectrum requested for a tensor outside ``n = 2`` or ``m = 2``."""


class ConditioningError(OracleError):
    """Interpolated characteristic polynomial disagrees with direct evaluation."""


class DegeneratePolynomialError(OracleError):
    pass


@dataclass(frozen=True)
class BinaryFormPair:
    """Coefficients of ``f_i = (A x^{m-1})_i``, ordered ``x1^{m-1}, x1^{m-2} x2, ..., x2^{m-1}``.

    ``-lam`` enters ``f1`` at ``c_0`` and ``f2`` at ``e_{m-1}``.
    """

    degree: int
    f1_coeffs: tuple[float, ...]
    f2_coeffs: tuple[float, ...]

    @property
    def lambda_slots(self) -> tuple[int, int]:
        return 0, self.degree


@dataclass(frozen=True)
class CharPoly:
    """``phi(lam)`` with ``coeffs[j]`` the coefficient of ``lam**j``.

    ``noise[j]``, when known, estimates the absolute error in ``coeffs[j]``.
    """

    coeffs: tuple[float, ...]
    noise: tuple[float, ...] | None = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return P.polyval(lam, self.coeffs)

    def root_sum(self) -> float:
        return -self.coeffs[-2] / self.coeffs[-1]

    def root_product(self) -> float:
        return (-1) ** self.degree * self.coeffs[0] / self.coeffs[-1]


@dataclass(frozen=True)
class Spectrum:
    """Real roots (descending, with multiplicity) and the number of complex roots.

    ``h_eigenvalues`` lists the distinct real roots that admit a real
    eigenvector (residual-certified); ``None`` when no tensor was available
    to certify against.
    """

    real_roots: tuple[tuple[float, int], ...]
    complex_count: int
    d: int
    h_eigenvalues: tuple[float, ...] | None = None

    def values(self) -> list[float]:
        """Real roots expanded by multiplicity, descending."""
        return [v for v, k in self.real_roots for _ in range(k)]

    @property
    def all_real(self) -> bool:
        return self.complex_count == 0

    @property
    def all_positive(self) -> bool:
        return self.all_real and all(v > 0 for v, _ in self.real_roots)


def binary_forms(t: SymmetricTensor) -> BinaryFormPair:
    """Collect ``A x^{m-1}`` into two binary forms of degree ``m - 1``.

    The coefficient of ``x1^{m-1-j} x2^j`` in ``f1`` sums the ``C(m-1, j)``
    raw tuples ``(1, i_2, ..., i_m)`` that contain ``j`` twos; ``f2`` is the
    same with a leading 2.
    """
    if t.dimension != 2:
        raise UnsupportedDimensionError(f"binary forms need dimension 2, got {t.dimension}")
    m = t.order
    f1, f2 = [], []
    for j in range(m):
        ways = math.comb(m - 1, j)
        f1.append(float(ways * t.exact((1,) * (m - j) + (2,) * j)))
        f2.append(float(ways * t.exact((1,) * (m - 1 - j) + (2,) * (j + 1))))
    return BinaryFormPair(m - 1, tuple(f1), tuple(f2))


def _base_sylvester(forms: BinaryFormPair) -> np.ndarray:
    p = forms.degree
    size = 2 * p
    mat = np.zeros((size, size))
    for r in range(p):
        mat[r, r : r + p + 1] = forms.f1_coeffs
        mat[p + r, r : r + p + 1] = forms.f2_coeffs
    return mat


def sylvester_matrix(forms: BinaryFormPair, lam: float) -> np.ndarray:
    """Sylvester matrix of ``(f1 - lam*x1^{m-1}, f2 - lam*x2^{m-1})``.

    The ``f1`` block sits on top. The shifted slots ``c_0`` and ``e_{m-1}``
    land exactly on the main diagonal, so this is ``M_0 - lam*I``.
    """
    mat = _base_sylvester(forms)
    mat[np.diag_indices_from(mat)] -= lam
    return mat


def _scaled_det(mat: np.ndarray):
    """Row-equilibrated LU determinant (real or complex)."""
    scale = np.max(np.abs(mat), axis=1)
    scale[scale == 0] = 1.0
    return np.linalg.det(mat / scale[:, None]) * np.prod(scale)


def sylvester_det(forms: BinaryFormPair, lam: float) -> float:
    return float(_scaled_det(sylvester_matrix(forms, lam)))


def spectral_radius_bound(t: SymmetricTensor) -> float:
    """``max_i |a_{i..i}| + R_i``: every eigenvalue lies in a disk of this radius."""
    from .bounds import gershgorin_disks

    return max(abs(g.center) + g.radius for g in gershgorin_disks(t))


def _sampling_radius(forms: BinaryFormPair, rho: float, d: int) -> float:
    """Circle radius for interpolation: ``|det|^(1/d)``, clipped to ``[rho/1000, rho]``.

    A circle near the geometric-mean root modulus keeps the monomial
    coefficients well conditioned; the Gershgorin radius can overshoot the
    roots by an order of magnitude for high-order tensors.
    """
    if rho == 0.0:
        return 1.0
    det0 = abs(sylvester_det(forms, 0.0))
    r = det0 ** (1.0 / d) if det0 > 0 and math.isfinite(det0) else rho
    return min(max(r, 1e-3 * rho), rho)


def charpoly(t: SymmetricTensor) -> CharPoly:
    """Characteristic polynomial of an ``n = 2`` tensor by evaluation and interpolation.

    The Sylvester determinant is sampled at the ``d + 1`` roots of unity
    scaled to radius ``r`` (see ``_sampling_radius``) and the coefficients
    recovered by an inverse DFT. A second, rotated set of nodes checks the
    fit and sets the per-coefficient noise estimate used by root clustering.

    Raises
    ------
    UnsupportedDimensionError
        If ``t.dimension != 2``.
    ConditioningError
        If the interpolant misses the direct determinant at a check node by
        more than ``INTERPOLATION_TOL`` relative to the sampled magnitude.
    """
    forms = binary_forms(t)
    d = eigenvalue_count(t.order, 2)
    rho = spectral_radius_bound(t)
    r = _sampling_radius(forms, rho, d)
    base = _base_sylvester(forms)
    eye = np.eye(2 * forms.degree)
    count = d + 1
    nodes = r * np.exp(2j * np.pi * np.arange(count) / count)
    values = np.array([_scaled_det(base - z * eye) for z in nodes])
    scaled = np.fft.fft(values) / count
    coeffs = scaled.real / r ** np.arange(count)

    check = nodes * np.exp(1j * np.pi / count)
    direct = np.array([_scaled_det(base - z * eye) for z in check])
    miss = float(np.max(np.abs(P.polyval(check, coeffs) - direct)))
    magnitude = max(float(np.max(np.abs(values))), float(np.max(np.abs(direct))), np.finfo(float).tiny)
    if miss / magnitude > INTERPOLATION_TOL:
        raise ConditioningError(
            f"charpoly interpolation residual {miss / magnitude:.3e} exceeds {INTERPOLATION_TOL:g} "
            f"(order {t.order}, sampling radius {r:.6g})"
        )
    floor = max(miss, 8 * count * np.finfo(float).eps * magnitude)
    noise = floor / r ** np.arange(count)
    return CharPoly(tuple(float(c) for c in coeffs), tuple(float(e) for e in noise))


def determinant(t: SymmetricTensor) -> float:
    """Resultant of ``A x^{m-1} = 0`` for ``n = 2``: the Sylvester determinant at ``lam = 0``."""
    return sylvester_det(binary_forms(t), 0.0)


def _abs_derivative_sum(weights: np.ndarray, z: complex, j: int) -> float:
    """``sum_k weights[k] * k!/(k-j)! * |z|^(k-j)``."""
    w = P.polyder(weights, j) if j else weights
    return float(P.polyval(abs(z), np.abs(w)))


def _newton(coeffs: np.ndarray, z: complex, steps: int = 8) -> complex:
    dcoeffs = P.polyder(coeffs)
    for _ in range(steps):
        fz = P.polyval(z, coeffs)
        dz = P.polyval(z, dcoeffs)
        if dz == 0 or not np.isfinite(fz):
            break
        step = fz / dz
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def _cluster_center(coeffs: np.ndarray, members: list[complex]) -> complex:
    """Centroid of a root cluster, polished by Newton on ``phi^{(k-1)}``.

    The centroid of a perturbed ``k``-fold root is accurate to first order,
    and the root is simple for the ``(k-1)``-th derivative.
    """
    k = len(members)
    center = complex(np.mean(members))
    spread = max(abs(z - center) for z in members)
    target = P.polyder(coeffs, k - 1) if k > 1 else coeffs
    if len(target) < 2:
        return center
    polished = _newton(target, center)
    limit = 2 * spread + 1e-12 * max(1.0, abs(center))
    return polished if abs(polished - center) <= limit else center


def _is_multiple_root(coeffs: np.ndarray, noise: np.ndarray, z: complex, k: int) -> bool:
    """Whether ``phi^{(j)}(z)``, ``j < k``, all vanish to within
    ``NOISE_FACTOR`` times the coefficient-noise bound."""
    for j in range(k):
        value = abs(P.polyval(z, P.polyder(coeffs, j) if j else coeffs))
        if value > NOISE_FACTOR * _abs_derivative_sum(noise, z, j):
            return False
    return True


def _members_fit(coeffs: np.ndarray, noise: np.ndarray, z: complex, members: list[complex]) -> bool:
    """Whether ``members`` are close enough to ``z`` to be its perturbed copies.

    An evaluation error ``E`` moves a ``k``-fold root by about
    ``(k! E / |phi^{(k)}(z)|)^(1/k)``; members outside twice that radius
    belong to other roots even when ``z`` itself is a multiple root.
    """
    k = len(members)
    dk = abs(P.polyval(z, P.polyder(coeffs, k)))
    if dk == 0:
        return True
    err = NOISE_FACTOR * _abs_derivative_sum(noise, z, 0)
    radius = 2 * (math.factorial(k) * err / dk) ** (1 / k) + 1e-12 * max(1.0, abs(z))
    return max(abs(m - z) for m in members) <= radius


def _cluster(coeffs: np.ndarray, noise: np.ndarray, raw: np.ndarray, tol: float) -> list[tuple[complex, list[complex]]]:
    """Agglomerate raw roots into numerically multiple roots.

    Closest clusters are tentatively merged. A merge is kept when every
    member lies within ``tol * max(1, |centre|)`` of the merged centre, or
    when the centre passes the derivative test for the combined
    multiplicity and the members sit within its noise radius.
    """
    clusters = [[complex(z)] for z in raw]
    centers = [_cluster_center(coeffs, c) for c in clusters]
    rejected: set[tuple[int, int]] = set()
    ids = list(range(len(clusters)))
    while True:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                if (ids[a], ids[b]) in rejected:
                    continue
                dist = abs(centers[a] - centers[b])
                if best is None or dist < best[0]:
                    best = (dist, a, b)
        if best is None:
            break
        _, a, b = best
        merged = clusters[a] + clusters[b]
        center = _cluster_center(coeffs, merged)
        close = max(abs(z - center) for z in merged) <= tol * max(1.0, abs(center))
        if close or (
            _is_multiple_root(coeffs, noise, center, len(merged))
            and _members_fit(coeffs, noise, center, merged)
        ):
            new_id = max(ids) + 1
            for idx in (b, a):
                del clusters[idx], centers[idx], ids[idx]
            clusters.append(merged)
            centers.append(center)
            ids.append(new_id)
        else:
            rejected.add((ids[a], ids[b]))
    return list(zip(centers, clusters))


def real_spectrum(p: CharPoly, cluster_tol: float = 1e-6) -> Spectrum:
    """All roots of ``p`` grouped into real roots with multiplicity and a complex count.

    Roots come from the companion matrix; clusters of a perturbed multiple
    root are merged when all members lie within ``cluster_tol`` (relative)
    of the centre, or when the centre is a numerical ``k``-fold root: its
    first ``k - 1`` derivatives vanish to within the coefficient noise
    (``p.noise``, or a few ulps when absent). Finally, real centres
    within ``cluster_tol * max(1, |largest root|)`` are merged.

    A cluster is real when its centre's imaginary part is at most
    ``1e-8 * (1 + |centre|)``.
    """
    coeffs = np.asarray(p.coeffs, dtype=float)
    size = np.max(np.abs(coeffs)) if len(coeffs) else 0.0
    if size == 0.0 or not np.all(np.isfinite(coeffs)):
        raise DegeneratePolynomialError("characteristic polynomial has no nonzero coefficients")
    d = len(coeffs) - 1
    if p.noise is not None:
        noise = np.asarray(p.noise, dtype=float)
    else:
        noise = 4 * max(d, 1) * np.finfo(float).eps * np.abs(coeffs)
    # Compared with its own noise, not with the other coefficients: a monic
    # polynomial with large roots has a tiny relative leading coefficient.
    if coeffs[-1] == 0 or (p.noise is not None and abs(coeffs[-1]) <= NOISE_FACTOR * noise[-1]):
        raise DegeneratePolynomialError(f"leading coefficient {coeffs[-1]:.3e} is numerically zero")
    if d == 0:
        return Spectrum((), 0, 0)
    raw = P.polyroots(coeffs)
    groups = _cluster(coeffs, noise, raw, cluster_tol)

    scale = max(1.0, max(abs(c) for c, _ in groups))
    real: list[list] = []
    complex_count = 0
    for center, members in groups:
        if abs(center.imag) <= REAL_IMAG_TOL * (1 + abs(center)):
            real.append([center.real, len(members)])
        else:
            complex_count += len(members)
    real.sort(key=lambda r: -r[0])
    merged: list[list] = []
    for value, k in real:
        if merged and merged[-1][0] - value <= cluster_tol * scale:
            pv, pk = merged[-1]
            merged[-1] = [(pv * pk + value * k) / (pk + k), pk + k]
        else:
            merged.append([value, k])
    return Spectrum(tuple((float(v), int(k)) for v, k in merged), complex_count, d)


def _eigen_roots(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of ``mat`` with first-order error bounds.

    The bound for eigenvalue ``i`` is ``d * eps * ||mat||_F * kappa_i`` with
    ``kappa_i = ||v_i|| * ||w_i||`` from the right eigenvectors ``V`` and the
    rows ``w_i`` of ``V^-1``. Near a defective (multiple) eigenvalue
    ``kappa`` blows up, so perturbed copies of one root get overlapping
    bounds while close but distinct roots keep tight ones.
    """
    values, vecs = np.linalg.eig(mat)
    try:
        inv = np.linalg.inv(vecs)
    except np.linalg.LinAlgError:
        inv = np.linalg.pinv(vecs)
    kappa = np.linalg.norm(vecs, axis=0) * np.linalg.norm(inv, axis=1)
    kappa = np.where(np.isfinite(kappa), kappa, 1 / np.finfo(float).eps)
    norm = float(np.linalg.norm(mat))
    err = len(values) * np.finfo(float).eps * norm * kappa
    return values, err


def _eigen_spectrum(mat: np.ndarray, cluster_tol: float) -> Spectrum:
    """Group the eigenvalues of ``mat`` into real roots with multiplicity.

    Two eigenvalues join a cluster when their distance is within the sum of
    their error bounds plus ``cluster_tol * max(1, |value|)``. Clusters are
    closed under conjugation, so a cluster's centroid is real exactly when
    it comes from a perturbed real root.
    """
    values, err = _eigen_roots(mat)
    d = len(values)
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(d):
        for b in range(a + 1, d):
            gap = abs(values[a] - values[b])
            reach = err[a] + err[b] + cluster_tol * max(1.0, abs(values[a]), abs(values[b]))
            if gap <= reach:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)
    real: list[tuple[float, int]] = []
    complex_count = 0
    for members in groups.values():
        center = complex(np.mean(values[members]))
        spread = float(np.max(err[members]))
        if abs(center.imag) <= max(REAL_IMAG_TOL * (1 + abs(center)), spread):
            real.append((center.real, len(members)))
        else:
            complex_count += len(members)
    real.sort(key=lambda r: -r[0])
    return Spectrum(tuple((float(v), int(k)) for v, k in real), complex_count, d)


def _jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi rotations on a symmetric matrix."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol * max(np.linalg.norm(a), np.finfo(float).tiny):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.diag(a).copy()


def matrix_spectrum(t: SymmetricTensor, cluster_tol: float = 1e-6) -> Spectrum:
    """Eigenvalues of an order-2 tensor (a symmetric matrix)."""
    if t.order != 2:
        raise UnsupportedDimensionError(f"matrix spectrum needs order 2, got {t.order}")
    n = t.dimension
    mat = np.array([[t[i, j] for j in range(1, n + 1)] for i in range(1, n + 1)])
    values = np.sort(_jacobi_eigenvalues(mat))[::-1]
    scale = max(1.0, float(np.max(np.abs(values))))
    grouped: list[list] = []
    for v in values:
        if grouped and grouped[-1][0] - v <= cluster_tol * scale:
            pv, pk = grouped[-1]
            grouped[-1] = [(pv * pk + v) / (pk + 1), pk + 1]
        else:
            grouped.append([float(v), 1])
    roots = tuple((float(v), int(k)) for v, k in grouped)
    return Spectrum(roots, 0, n, tuple(v for v, _ in roots))


def _real_candidates(coeffs: list[float]) -> list[float]:
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if len(c) == 0:
        return [0.0, 1.0, -1.0]
    if len(c) == 1:
        return []
    roots = P.polyroots(c)
    return [float(z.real) for z in roots if abs(z.imag) <= 1e-6 * (1 + abs(z))]


def residual_check(t: SymmetricTensor, lam: float) -> float:
    """Smallest eigen-equation residual over real candidate eigenvectors.

    Candidates are ``x = (1, s)`` for real roots ``s`` of
    ``f2(1, s) - lam*s^{m-1}`` or ``f1(1, s) - lam``, plus ``x = (0, 1)``.
    Returns ``inf`` when no candidate exists.
    """
    forms = binary_forms(t)
    m = t.order
    f1 = list(forms.f1_coeffs)
    f2 = list(forms.f2_coeffs)
    # f1(1, s) has coefficient of s^j = f1[j]; likewise f2.
    g = f2.copy()
    g[m - 1] -= lam
    h = f1.copy()
    h[0] -= lam
    candidates = [np.array([0.0, 1.0])]
    for s in set(_real_candidates(g)) | set(_real_candidates(h)):
        candidates.append(np.array([1.0, s]))
    best = math.inf
    for x in candidates:
        xp = x ** (m - 1)
        r = np.linalg.norm(apply(t, x) - lam * xp) / np.linalg.norm(xp)
        best = min(best, float(r))
    return best


def spectrum(t: SymmetricTensor, cluster_tol: float = 1e-6) -> Spectrum:
    """Full spectrum of an ``n = 2`` or ``m = 2`` tensor with H-eigenvalues certified.

    Roots are the eigenvalues of ``M0`` (``phi(lam) = det(M0 - lam*I)``),
    grouped by overlapping first-order error bounds.

    A real root counts as an H-eigenvalue when :func:`residual_check` is below
    ``1e-6 * max(1, largest |entry|)``.
    """
    if t.order == 2:
        return matrix_spectrum(t, cluster_tol)
    if t.dimension != 2:
        raise UnsupportedDimensionError(
            f"exact spectrum is available for dimension 2 or order 2 only (got m={t.order}, n={t.dimension})"
        )
    spec = _eigen_spectrum(_base_sylvester(binary_forms(t)), cluster_tol)
    tol = H_RESIDUAL_TOL * max(1.0, t.max_abs_entry())
    h = tuple(v for v, _ in spec.real_roots if residual_check(t, v) <= tol)
    return Spectrum(spec.real_roots, spec.complex_count, spec.d, h)
