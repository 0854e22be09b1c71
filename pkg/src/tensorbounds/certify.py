"""Positive-definiteness certificates and Lyapunov checks for ``V(x) = A x^m``."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import oracle
from .bounds import gershgorin_disks
from .tensor import SymmetricTensor, apply, evaluate

__all__ = [
    "Verdict",
    "Method",
    "PdCertificate",
    "LyapunovReport",
    "DEFAULT_SEED",
    "certify_pd",
    "certify_pd_gershgorin",
    "gradient",
    "sphere_samples",
    "lyapunov_gradient_flow_check",
    "vector_field_check",
]

DEFAULT_SEED = 42
FALSIFICATION_SAMPLES = 10_000
ZERO_TOL = 1e-9


class Verdict(str, enum.Enum):
    CERTIFIED_PD = "certified_pd"
    CERTIFIED_NOT_PD = "certified_not_pd"
    INCONCLUSIVE = "inconclusive"


class Method(str, enum.Enum):
    EXACT_SPECTRUM = "exact_spectrum"
    GERSHGORIN = "gershgorin"
    ODD_ORDER = "odd_order"
    SAMPLING = "sampling"


@dataclass(frozen=True)
class PdCertificate:
    verdict: Verdict
    method: Method
    witness: dict = field(default_factory=dict)
    reason: str = ""


@dataclass(frozen=True)
class LyapunovReport:
    pd_certificate: PdCertificate
    sample_count: int
    max_Vdot: float
    min_V: float
    stable: bool
    note: str = ""


def gradient(t: SymmetricTensor, x) -> np.ndarray:
    """``grad(A x^m) = m * A x^{m-1}`` for symmetric ``A``."""
    return t.order * apply(t, x)


def sphere_samples(n: int, count: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """``count`` points on the unit sphere in ``R^n``, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((count, n))
    norms = np.linalg.norm(pts, axis=1)
    # A zero draw has probability zero but would break normalisation.
    pts[norms == 0] = 1.0
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def _odd_witness(t: SymmetricTensor) -> np.ndarray:
    for x in np.eye(t.dimension):
        for s in (1.0, -1.0):
            if evaluate(t, s * x) <= 0:
                return s * x
    x = sphere_samples(t.dimension, 1)[0]
    return x if evaluate(t, x) <= 0 else -x


def _falsify(t: SymmetricTensor, samples: int, seed: int) -> np.ndarray | None:
    # Coordinate axes first: sparse forms often vanish exactly there.
    candidates = np.vstack([np.eye(t.dimension), sphere_samples(t.dimension, samples, seed)])
    for x in candidates:
        if evaluate(t, x) <= 0:
            return x
    return None


def certify_pd_gershgorin(t: SymmetricTensor) -> PdCertificate:
    """Sufficient test only: every disk strictly right of zero certifies PD."""
    if t.order % 2:
        return _odd_certificate(t)
    disks = gershgorin_disks(t)
    lower = min(g.lower for g in disks)
    if lower > 0:
        return PdCertificate(Verdict.CERTIFIED_PD, Method.GERSHGORIN, {"gershgorin_lower": lower})
    worst = min(disks, key=lambda g: g.lower)
    return PdCertificate(
        Verdict.INCONCLUSIVE,
        Method.GERSHGORIN,
        {"gershgorin_lower": lower, "disk": worst.index, "center": worst.center, "radius": worst.radius},
        "a Gershgorin disk reaches zero or below",
    )


def _odd_certificate(t: SymmetricTensor) -> PdCertificate:
    x = _odd_witness(t)
    return PdCertificate(
        Verdict.CERTIFIED_NOT_PD,
        Method.ODD_ORDER,
        {"x": x.tolist(), "value": evaluate(t, x)},
        "odd-degree forms satisfy f(-x) = -f(x) and cannot be positive definite",
    )


def certify_pd(t: SymmetricTensor, samples: int = FALSIFICATION_SAMPLES, seed: int = DEFAULT_SEED) -> PdCertificate:
    """Decide whether ``A x^m > 0`` for all ``x != 0``.

    Odd order is never PD. For ``n = 2`` or ``m = 2`` the exact spectrum
    decides: PD iff every H-eigenvalue is positive. A smallest H-eigenvalue
    within ``ZERO_TOL`` (relative to the largest entry) of zero is treated as
    undecided and handed to sampling. Otherwise the Gershgorin
    test can certify PD; failing that, sphere sampling may find a
    point with ``f(x) <= 0``, and the result is inconclusive if it does not.
    """
    if t.order % 2:
        return _odd_certificate(t)
    if t.dimension == 2 or t.order == 2:
        spec = oracle.spectrum(t)
        h = spec.h_eigenvalues or ()
        if not h:
            # Even order always has H-eigenvalues; an empty set means the oracle missed them.
            return PdCertificate(Verdict.INCONCLUSIVE, Method.EXACT_SPECTRUM, {}, "no H-eigenvalue certified")
        lam_min = min(h)
        tol = ZERO_TOL * max(1.0, t.max_abs_entry())
        if lam_min > tol:
            return PdCertificate(Verdict.CERTIFIED_PD, Method.EXACT_SPECTRUM, {"lambda_min": lam_min})
        if lam_min >= -tol:
            # Numerically zero: the sign of lam_min is noise, so look for a witness instead.
            x = _falsify(t, samples, seed)
            if x is not None:
                return PdCertificate(
                    Verdict.CERTIFIED_NOT_PD,
                    Method.SAMPLING,
                    {"x": x.tolist(), "value": evaluate(t, x), "lambda_min": lam_min},
                    "smallest H-eigenvalue is numerically zero and f(x) <= 0 was found",
                )
            return PdCertificate(
                Verdict.INCONCLUSIVE, Method.EXACT_SPECTRUM, {"lambda_min": lam_min},
                "smallest H-eigenvalue is numerically zero",
            )
        return PdCertificate(
            Verdict.CERTIFIED_NOT_PD,
            Method.EXACT_SPECTRUM,
            {"lambda_min": lam_min},
            "an H-eigenvalue is not positive",
        )
    cert = certify_pd_gershgorin(t)
    if cert.verdict is Verdict.CERTIFIED_PD:
        return cert
    x = _falsify(t, samples, seed)
    if x is not None:
        return PdCertificate(
            Verdict.CERTIFIED_NOT_PD,
            Method.SAMPLING,
            {"x": x.tolist(), "value": evaluate(t, x)},
            "found a point with f(x) <= 0",
        )
    return cert


def _sampling_report(t, cert, samples, seed, vdot) -> LyapunovReport:
    pts = sphere_samples(t.dimension, samples, seed)
    v = np.array([evaluate(t, x) for x in pts])
    vd = np.array([vdot(x) for x in pts])
    max_vdot = float(np.max(vd))
    min_v = float(np.min(v))
    stable = cert.verdict is Verdict.CERTIFIED_PD and min_v > 0 and max_vdot < 0
    return LyapunovReport(cert, samples, max_vdot, min_v, stable)


def lyapunov_gradient_flow_check(
    t: SymmetricTensor, samples: int = 1000, seed: int = DEFAULT_SEED
) -> LyapunovReport:
    """Check ``V = A x^m`` as a Lyapunov function for ``x' = -grad V``.

    Along the flow ``V' = -|grad V|^2``. Both ``V`` and ``V'`` are
    homogeneous, so checking the unit sphere suffices. ``V' < 0`` is strict:
    a vanishing gradient away from the origin fails.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    cert = certify_pd(t, seed=seed)
    return _sampling_report(t, cert, samples, seed, lambda x: -float(np.sum(gradient(t, x) ** 2)))


def vector_field_check(
    t: SymmetricTensor,
    g: Callable[[np.ndarray], np.ndarray],
    samples: int = 1000,
    seed: int = DEFAULT_SEED,
) -> LyapunovReport:
    """Sampling evidence that ``grad(V) . g(x) < 0`` for a user vector field ``g``.

    This is evidence only, since a finite sample cannot prove the condition
    everywhere. Unlike the gradient flow, ``g`` need not be homogeneous, so
    the sphere is not representative of all scales.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    cert = certify_pd(t, seed=seed)
    rep = _sampling_report(
        t, cert, samples, seed, lambda x: float(gradient(t, x) @ np.asarray(g(x), dtype=float))
    )
    return LyapunovReport(
        rep.pd_certificate, rep.sample_count, rep.max_Vdot, rep.min_V, rep.stable,
        "sampling evidence only for a general vector field",
    )
