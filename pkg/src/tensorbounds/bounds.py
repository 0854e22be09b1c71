"""Trace/determinant eigenvalue bounds and tensor Gershgorin disks.

Every AM-GM bound here takes only the invariants ``d`` (eigenvalue count),
``S`` (sum of all eigenvalues, ``(m-1)^(n-1) tr A``) and ``det`` (product of
all eigenvalues). They are proven for spectra ``lam_1 >= ... >= lam_d > 0``;
``BoundInputs.status`` records whether that was checked.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .tensor import SymmetricTensor, spectral_invariants

__all__ = [
    "BoundsError",
    "ParameterError",
    "HypothesisError",
    "MissingDeterminantError",
    "HypothesisStatus",
    "TheoremId",
    "BoundKind",
    "BoundInputs",
    "BoundValue",
    "GershgorinDisk",
    "t1_sum_upper",
    "t1_tail_product_lower",
    "t2_chain",
    "t3_bracket",
    "t4_product_upper",
    "t4_tail_product_lower",
    "t5_product_bracket",
    "t6_sum_upper",
    "gershgorin_disks",
    "gershgorin_interval",
    "lambda_max_upper_best",
    "lambda_min_bounds",
    "bound_inputs",
    "all_bounds",
]

LOG_SWITCH = 600.0


class BoundsError(ValueError):
    pass


class ParameterError(BoundsError):
    """``k`` or ``l`` outside the range where the inequality is stated."""


class HypothesisError(BoundsError):
    """Nonpositive trace or determinant: AM-GM bounds are undefined."""


class MissingDeterminantError(BoundsError):
    pass


class HypothesisStatus(str, enum.Enum):
    VERIFIED_POSITIVE = "verified_positive"
    ASSUMED = "assumed"
    VIOLATED = "violated"


class TheoremId(str, enum.Enum):
    T1_SUM_UPPER = "T1_sum_upper"
    T1_TAIL_PROD_LOWER = "T1_tail_prod_lower"
    T2_CHAIN = "T2_chain"
    T3_BRACKET = "T3_bracket"
    T4_PROD_UPPER = "T4_prod_upper"
    T4_TAIL_PROD_LOWER = "T4_tail_prod_lower"
    T5_LOWER = "T5_lower"
    T5_UPPER = "T5_upper"
    T6_SUM_UPPER = "T6_sum_upper"
    GERSHGORIN_UPPER = "Gershgorin_upper"
    GERSHGORIN_LOWER = "Gershgorin_lower"
    MIN_EIG_LOWER_SIMPLE = "MinEig_lower_simple"
    MIN_EIG_UPPER_MEAN = "MinEig_upper_mean"


class BoundKind(str, enum.Enum):
    UPPER_ON_SUM = "upper_on_sum"
    LOWER_ON_PRODUCT = "lower_on_product"
    UPPER_ON_PRODUCT = "upper_on_product"
    INTERVAL = "interval"


@dataclass(frozen=True)
class BoundInputs:
    d: int
    S: float
    det: float
    status: HypothesisStatus = HypothesisStatus.ASSUMED

    def scaled(self, c: float) -> "BoundInputs":
        """Invariants of ``c * A``: ``S -> c S``, ``det -> c^d det``."""
        return BoundInputs(self.d, c * self.S, c**self.d * self.det, self.status)


@dataclass(frozen=True)
class BoundValue:
    theorem_id: TheoremId
    params: tuple[int, ...]
    value: float
    kind: BoundKind


@dataclass(frozen=True)
class GershgorinDisk:
    index: int
    center: float
    radius: float

    @property
    def lower(self) -> float:
        return self.center - self.radius

    @property
    def upper(self) -> float:
        return self.center + self.radius


def _powprod(*factors: tuple[float, float]) -> float:
    """``prod(base ** exp)`` over positive bases, in log space when large."""
    logs = [e * math.log(b) for b, e in factors if e != 0]
    if any(abs(x) > LOG_SWITCH for x in logs):
        return math.exp(math.fsum(logs))
    out = 1.0
    for b, e in factors:
        if e != 0:
            out *= b**e
    return out


def _require_positive(inp: BoundInputs) -> None:
    if not inp.S > 0:
        raise HypothesisError(f"scaled trace must be positive, got {inp.S}")
    if not inp.det > 0:
        raise HypothesisError(f"determinant must be positive, got {inp.det}")


def _require_range(name: str, value: int, lo: int, hi: int) -> None:
    if int(value) != value or not lo <= value <= hi:
        raise ParameterError(f"{name}={value} outside [{lo}, {hi}]")


def t1_sum_upper(inp: BoundInputs, k: int) -> BoundValue:
    """Upper bound on ``lam_1 + ... + lam_k`` (``1 <= k <= d-1``); ``k = 1`` bounds ``lam_max``."""
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 1, d - 1)
    _require_positive(inp)
    tail_gm = _powprod((k / S, k / (d - k)), (det, 1 / (d - k)))
    return BoundValue(TheoremId.T1_SUM_UPPER, (k,), S - (d - k) * tail_gm, BoundKind.UPPER_ON_SUM)


def t1_tail_product_lower(inp: BoundInputs, k: int) -> BoundValue:
    """Lower bound on ``lam_{d-k+1} ... lam_d``; ``k = 1`` bounds ``lam_min``."""
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 1, d - 1)
    _require_positive(inp)
    value = _powprod(((d - k) / S, d - k), (det, 1))
    return BoundValue(TheoremId.T1_TAIL_PROD_LOWER, (k,), value, BoundKind.LOWER_ON_PRODUCT)


def t2_chain(inp: BoundInputs, k: int) -> list[BoundValue]:
    """The two invariant terms of the mean chains: ``det^(1/d)`` and ``S/d``.

    ``det^(1/d)`` lies between the geometric means of the bottom ``k`` and
    the top ``k`` eigenvalues; ``S/d`` lies between their arithmetic means.
    Neither depends on ``k``, which is only range-checked.
    """
    d = inp.d
    _require_range("k", k, 1, d)
    _require_positive(inp)
    return [
        BoundValue(TheoremId.T2_CHAIN, (k,), _powprod((inp.det, 1 / d)), BoundKind.LOWER_ON_PRODUCT),
        BoundValue(TheoremId.T2_CHAIN, (k,), inp.S / d, BoundKind.UPPER_ON_SUM),
    ]


def t3_bracket(inp: BoundInputs, k: int, l: int) -> tuple[float, float]:
    """Bracket for the means of ``lam_k, ..., lam_l``.

    ``lower <= (lam_k ... lam_l)^(1/(l-k+1))`` and
    ``(lam_k + ... + lam_l)/(l-k+1) <= upper``. At ``k = 1`` the lower
    prefactor is ``0^0 = 1``.
    """
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 1, d - 1)
    _require_range("l", l, k, d - 1)
    _require_positive(inp)
    lower = _powprod(((k - 1) / S if k > 1 else 1.0, (k - 1) / (d - k + 1)), (det, 1 / (d - k + 1)))
    upper = S / l - (d / l - 1) * _powprod((l / S, l / (d - l)), (det, 1 / (d - l)))
    return lower, upper


def t4_product_upper(inp: BoundInputs, k: int) -> BoundValue:
    """Upper bound on ``lam_1 ... lam_k`` for ``1 <= k <= d-2``."""
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 1, d - 2)
    _require_positive(inp)
    e = 1 / (d - k - 1)
    value = _powprod((det, -e), (1 / (d - k), (d - k) * e), (S / (k + 1), (k + 1) * (d - k) * e))
    return BoundValue(TheoremId.T4_PROD_UPPER, (k,), value, BoundKind.UPPER_ON_PRODUCT)


def t4_tail_product_lower(inp: BoundInputs, k: int) -> BoundValue:
    """Lower bound on ``lam_{d-k+1} ... lam_d`` for ``2 <= k <= d-1``."""
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 2, d - 1)
    _require_positive(inp)
    e = k / (k - 1)
    value = _powprod((k, e), (det, e), ((d - k + 1) / S, (d - k + 1) * e))
    return BoundValue(TheoremId.T4_TAIL_PROD_LOWER, (k,), value, BoundKind.LOWER_ON_PRODUCT)


def t5_product_bracket(inp: BoundInputs, k: int, l: int) -> tuple[float, float]:
    """Bracket ``lower <= lam_k ... lam_l <= upper`` for ``1 <= k <= l <= d-2``."""
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 1, d - 2)
    _require_range("l", l, k, d - 2)
    _require_positive(inp)
    a = (l - k + 1) / (d - k)
    lower = _powprod((d - k + 1, a), (det, a), (k / S, k * a))
    b = (l - k + 1) / (l * (d - l - 1))
    upper = _powprod((det, -b), (1 / (d - l), (d - l) * b), (S / (l + 1), (l + 1) * (d - l) * b))
    return lower, upper


def t6_sum_upper(inp: BoundInputs, k: int) -> BoundValue:
    """Upper bound on ``lam_1 + ... + lam_k`` from the optimised weighted AM-GM, ``1 <= k <= d``."""
    d, S, det = inp.d, inp.S, inp.det
    _require_range("k", k, 1, d)
    _require_positive(inp)
    value = _powprod((k + 1, k + 1), (k, -k), (det, -1), (S / (d + 1), d + 1))
    return BoundValue(TheoremId.T6_SUM_UPPER, (k,), value, BoundKind.UPPER_ON_SUM)


def gershgorin_disks(t: SymmetricTensor) -> list[GershgorinDisk]:
    """One disk per slice ``i``: centre ``a_{i..i}``, radius the off-diagonal absolute sum.

    The radius counts raw tuples ``(i, i_2, ..., i_m)``. An orbit containing
    ``i`` with ``k_i`` copies contributes ``orbit * k_i / m`` of them.
    Arithmetic is exact on the stored rationals.
    """
    m, n = t.order, t.dimension
    radii = [Fraction(0)] * n
    for key, value in t.exact_entries.items():
        if value == 0:
            continue
        orbit = t.orbit(key)
        for i in set(key):
            if key == (i,) * m:
                continue
            count = orbit * key.count(i) // m
            radii[i - 1] += abs(value) * count
    return [
        GershgorinDisk(i, float(t.exact((i,) * m)), float(radii[i - 1]))
        for i in range(1, n + 1)
    ]


def gershgorin_interval(disks: list[GershgorinDisk]) -> tuple[float, float]:
    if not disks:
        raise ValueError("empty disk list")
    return min(g.lower for g in disks), max(g.upper for g in disks)


def lambda_max_upper_best(inp: BoundInputs) -> tuple[float, TheoremId]:
    """Smallest of the ``k = 1`` upper bounds on ``lam_max``; ties go to the earlier theorem."""
    candidates = [t1_sum_upper(inp, 1)]
    if inp.d >= 3:
        candidates.append(t4_product_upper(inp, 1))
    candidates.append(t6_sum_upper(inp, 1))
    best = min(candidates, key=lambda b: b.value)
    return best.value, best.theorem_id


@dataclass(frozen=True)
class MinEigBounds:
    lower_simple: float
    lower_t1: float
    upper_mean: float

    def __iter__(self):
        return iter((self.lower_simple, self.lower_t1, self.upper_mean))


def lambda_min_bounds(inp: BoundInputs) -> MinEigBounds:
    """Bounds on ``lam_min``.

    ``lower_simple`` is ``det / S``, which is the tail-product bound at
    ``k = d - 1``; it bounds ``lam_2 ... lam_d`` and is only a ``lam_min``
    bound when the largest eigenvalue is at least 1. ``lower_t1`` is
    the ``k = 1`` tail bound and ``upper_mean`` is ``S / d``.
    """
    _require_positive(inp)
    return MinEigBounds(
        lower_simple=inp.det / inp.S,
        lower_t1=t1_tail_product_lower(inp, 1).value,
        upper_mean=inp.S / inp.d,
    )


def bound_inputs(t: SymmetricTensor, det: float | None = None, spectrum=None) -> BoundInputs:
    """Invariants of ``t`` plus hypothesis status.

    For ``n = 2`` or ``m = 2`` the determinant and spectrum come from the
    oracle and the status is verified or violated. Otherwise ``det`` must be
    supplied and the status is ``ASSUMED``.
    """
    from . import oracle

    inv = spectral_invariants(t)
    exact_path = t.dimension == 2 or t.order == 2
    if exact_path:
        spec = spectrum if spectrum is not None else oracle.spectrum(t)
        if det is None:
            if t.dimension == 2:
                det = oracle.determinant(t)
            else:
                det = math.prod(v**k for v, k in spec.real_roots)
        status = HypothesisStatus.VERIFIED_POSITIVE if spec.all_positive else HypothesisStatus.VIOLATED
    else:
        if det is None:
            raise MissingDeterminantError(
                f"no determinant available for m={t.order}, n={t.dimension}; "
                "supply external_determinant (det=<value> in the tensor file header)"
            )
        status = HypothesisStatus.ASSUMED
    return BoundInputs(inv.d, inv.scaled_trace, float(det), status)


def all_bounds(inp: BoundInputs, k: int = 1, l: int | None = None) -> list[BoundValue]:
    """Every inequality applicable at ``(k, l)``; out-of-range theorems are skipped.

    Bracket theorems contribute two rows (``T3`` as ``INTERVAL`` endpoints,
    ``T5`` as separate lower/upper ids).
    """
    l = k if l is None else l
    out: list[BoundValue] = []

    def attempt(fn):
        try:
            res = fn()
        except ParameterError:
            return
        out.extend(res if isinstance(res, list) else [res])

    attempt(lambda: t1_sum_upper(inp, k))
    attempt(lambda: t1_tail_product_lower(inp, k))
    attempt(lambda: t2_chain(inp, k))

    def t3():
        lo, hi = t3_bracket(inp, k, l)
        return [
            BoundValue(TheoremId.T3_BRACKET, (k, l), lo, BoundKind.INTERVAL),
            BoundValue(TheoremId.T3_BRACKET, (k, l), hi, BoundKind.INTERVAL),
        ]

    attempt(t3)
    attempt(lambda: t4_product_upper(inp, k))
    attempt(lambda: t4_tail_product_lower(inp, k))

    def t5():
        lo, hi = t5_product_bracket(inp, k, l)
        return [
            BoundValue(TheoremId.T5_LOWER, (k, l), lo, BoundKind.LOWER_ON_PRODUCT),
            BoundValue(TheoremId.T5_UPPER, (k, l), hi, BoundKind.UPPER_ON_PRODUCT),
        ]

    attempt(t5)
    attempt(lambda: t6_sum_upper(inp, k))
    mins = lambda_min_bounds(inp)
    out.append(BoundValue(TheoremId.MIN_EIG_LOWER_SIMPLE, (), mins.lower_simple, BoundKind.LOWER_ON_PRODUCT))
    out.append(BoundValue(TheoremId.MIN_EIG_UPPER_MEAN, (), mins.upper_mean, BoundKind.UPPER_ON_SUM))
    return out
