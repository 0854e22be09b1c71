"""Sparse symmetric tensors and their homogeneous-polynomial dual.

A symmetric tensor of order ``m`` and dimension ``n`` is stored by its
canonical (non-decreasing, 1-based) multi-indices. Every canonical index
stands for an orbit of ``m! / (k_1! ... k_n!)`` raw index tuples that all
share the same value.

Entry values are kept as exact rationals (the exact binary value of any
float supplied) so that tensor/polynomial conversion and orbit-count
arithmetic are exact. All numerical work happens in float64.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "TensorError",
    "SymmetricTensor",
    "HomogeneousPolynomial",
    "SpectralInvariants",
    "canonical",
    "orbit_size",
    "exponent_vector",
    "from_unique_entries",
    "from_polynomial",
    "to_polynomial",
    "identity_tensor",
    "apply",
    "evaluate",
    "trace",
    "spectral_invariants",
    "eigenvalue_count",
    "all_canonical_indices",
]


class TensorError(ValueError):
    """Raised for invalid tensor construction or argument shapes."""


def canonical(index: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(int(i) for i in index))


def orbit_size(index: Sequence[int]) -> int:
    """Number of distinct permutations of ``index`` (a multinomial coefficient)."""
    size = math.factorial(len(index))
    for count in Counter(index).values():
        size //= math.factorial(count)
    return size


def exponent_vector(index: Sequence[int], n: int) -> tuple[int, ...]:
    """Monomial exponents of a 1-based multi-index: ``(1, 1, 2)`` -> ``(2, 1)``."""
    alpha = [0] * n
    for i in index:
        alpha[i - 1] += 1
    return tuple(alpha)


def _index_from_exponents(alpha: Sequence[int]) -> tuple[int, ...]:
    return tuple(i + 1 for i, a in enumerate(alpha) for _ in range(a))


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    value = float(value)
    if not math.isfinite(value):
        raise TensorError(f"non-finite entry value {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class SymmetricTensor:
    """Real symmetric tensor of order ``m`` and dimension ``n``.

    Use :func:`from_unique_entries` or :func:`from_polynomial` rather than the
    constructor directly; they validate indices and reject duplicates.
    Indexing accepts any permutation of a 1-based multi-index::

        >>> t = from_unique_entries(4, 2, {(1, 1, 2, 2): -2.0})
        >>> t[2, 1, 2, 1]
        -2.0
    """

    order: int
    dimension: int
    exact_entries: Mapping[tuple[int, ...], Fraction]
    _orbits: Mapping[tuple[int, ...], int] = field(repr=False, compare=False)
    _alphas: np.ndarray = field(repr=False, compare=False)
    _coeffs: np.ndarray = field(repr=False, compare=False)

    def __getitem__(self, index) -> float:
        return float(self.exact(index))

    def exact(self, index: Iterable[int]) -> Fraction:
        key = canonical(index)
        self._check_index(key)
        return self.exact_entries.get(key, Fraction(0))

    def _check_index(self, key: tuple[int, ...]) -> None:
        if len(key) != self.order:
            raise TensorError(f"index {key} has length {len(key)}, expected {self.order}")
        if key and (key[0] < 1 or key[-1] > self.dimension):
            raise TensorError(f"index {key} out of range [1, {self.dimension}]")

    @property
    def entries(self) -> dict[tuple[int, ...], float]:
        return {k: float(v) for k, v in self.exact_entries.items()}

    def orbit(self, index: Iterable[int]) -> int:
        key = canonical(index)
        return self._orbits.get(key) or orbit_size(key)

    def items(self):
        """Yield ``(canonical_index, value, orbit_size)`` for stored entries."""
        for key, value in self.exact_entries.items():
            yield key, float(value), self._orbits[key]

    def scaled(self, c: float) -> "SymmetricTensor":
        c = _exact(c)
        return _build(self.order, self.dimension, {k: c * v for k, v in self.exact_entries.items()})

    def max_abs_entry(self) -> float:
        return max((abs(float(v)) for v in self.exact_entries.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymmetricTensor):
            return NotImplemented
        return (
            self.order == other.order
            and self.dimension == other.dimension
            and _nonzero(self.exact_entries) == _nonzero(other.exact_entries)
        )

    def __hash__(self) -> int:
        return hash((self.order, self.dimension, frozenset(_nonzero(self.exact_entries).items())))


def _nonzero(entries: Mapping) -> dict:
    return {k: v for k, v in entries.items() if v != 0}


def _build(m: int, n: int, exact_entries: dict[tuple[int, ...], Fraction]) -> SymmetricTensor:
    keys = list(exact_entries)
    orbits = {k: orbit_size(k) for k in keys}
    alphas = np.array([exponent_vector(k, n) for k in keys], dtype=float).reshape(len(keys), n)
    coeffs = np.array([float(exact_entries[k] * orbits[k]) for k in keys], dtype=float)
    return SymmetricTensor(m, n, dict(exact_entries), orbits, alphas, coeffs)


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Degree-``m`` form in ``n`` variables keyed by exponent vectors."""

    degree: int
    num_vars: int
    coeffs: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        for alpha in self.coeffs:
            if len(alpha) != self.num_vars or min(alpha, default=0) < 0 or sum(alpha) != self.degree:
                raise TensorError(f"exponent {alpha} is not a degree-{self.degree} monomial in {self.num_vars} variables")

    @classmethod
    def from_terms(cls, degree: int, num_vars: int, terms: Mapping[tuple[int, ...], float]) -> "HomogeneousPolynomial":
        return cls(degree, num_vars, {tuple(a): _exact(c) for a, c in terms.items()})

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.num_vars,):
            raise TensorError(f"expected a vector of length {self.num_vars}, got shape {x.shape}")
        return float(sum(float(c) * np.prod(x ** np.array(a)) for a, c in self.coeffs.items()))

    def nonzero(self) -> dict[tuple[int, ...], Fraction]:
        return _nonzero(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return (self.degree, self.num_vars, self.nonzero()) == (other.degree, other.num_vars, other.nonzero())

    def __hash__(self) -> int:
        return hash((self.degree, self.num_vars, frozenset(self.nonzero().items())))


@dataclass(frozen=True)
class SpectralInvariants:
    d: int
    trace: float
    scaled_trace: float
    determinant: float | None = None


def _check_shape(m: int, n: int) -> None:
    if int(m) != m or m < 2:
        raise TensorError(f"order must be an integer >= 2, got {m}")
    if int(n) != n or n < 1:
        raise TensorError(f"dimension must be an integer >= 1, got {n}")


def from_unique_entries(m: int, n: int, entries) -> SymmetricTensor:
    """Build a tensor from one value per orbit.

    Parameters
    ----------
    m, n : int
        Order and dimension.
    entries : mapping or iterable of (index, value)
        1-based multi-indices in any order. Two entries that are permutations
        of each other are rejected, as is any index outside ``[1, n]``.
    """
    _check_shape(m, n)
    pairs = entries.items() if isinstance(entries, Mapping) else entries
    stored: dict[tuple[int, ...], Fraction] = {}
    for index, value in pairs:
        key = canonical(index)
        if len(key) != m:
            raise TensorError(f"index {tuple(index)} has length {len(key)}, expected {m}")
        if key[0] < 1 or key[-1] > n:
            raise TensorError(f"index {tuple(index)} out of range [1, {n}]")
        if key in stored:
            raise TensorError(f"duplicate entry for canonical index {key}")
        stored[key] = _exact(value)
    return _build(m, n, stored)


def identity_tensor(m: int, n: int) -> SymmetricTensor:
    _check_shape(m, n)
    return _build(m, n, {(i,) * m: Fraction(1) for i in range(1, n + 1)})


def from_polynomial(p: HomogeneousPolynomial) -> SymmetricTensor:
    """Tensor whose form ``A x^m`` equals ``p``; entry = coefficient / orbit size."""
    if p.degree < 2:
        raise TensorError(f"polynomial degree must be >= 2, got {p.degree}")
    _check_shape(p.degree, p.num_vars)
    stored = {}
    for alpha, c in p.coeffs.items():
        key = _index_from_exponents(alpha)
        stored[key] = _exact(c) / orbit_size(key)
    return _build(p.degree, p.num_vars, stored)


def to_polynomial(t: SymmetricTensor) -> HomogeneousPolynomial:
    coeffs = {
        exponent_vector(k, t.dimension): v * t._orbits[k] for k, v in t.exact_entries.items()
    }
    return HomogeneousPolynomial(t.order, t.dimension, coeffs)


def _as_vector(t: SymmetricTensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (t.dimension,):
        raise TensorError(f"expected a vector of length {t.dimension}, got shape {x.shape}")
    return x


def evaluate(t: SymmetricTensor, x) -> float:
    """The form ``A x^m``, summed over canonical orbits."""
    x = _as_vector(t, x)
    if not len(t._coeffs):
        return 0.0
    return float(t._coeffs @ np.prod(x ** t._alphas, axis=1))


def apply(t: SymmetricTensor, x) -> np.ndarray:
    """The vector ``A x^{m-1}``.

    Component ``i`` collects each orbit's raw tuples that start with ``i``;
    there are ``orbit * k_i / m`` of them, each contributing
    ``a * x^(alpha - e_i)``.
    """
    x = _as_vector(t, x)
    n, m = t.dimension, t.order
    out = np.zeros(n)
    if not len(t._coeffs):
        return out
    for i in range(n):
        k_i = t._alphas[:, i]
        reduced = t._alphas.copy()
        reduced[:, i] = np.maximum(k_i - 1, 0)
        monomials = np.prod(x ** reduced, axis=1)
        out[i] = (t._coeffs * k_i / m) @ monomials
    return out


def trace(t: SymmetricTensor) -> float:
    return float(sum(t.exact((i,) * t.order) for i in range(1, t.dimension + 1)))


def eigenvalue_count(m: int, n: int) -> int:
    return n * (m - 1) ** (n - 1)


def spectral_invariants(t: SymmetricTensor, det: float | None = None) -> SpectralInvariants:
    m, n = t.order, t.dimension
    exact_trace = sum(t.exact((i,) * m) for i in range(1, n + 1))
    return SpectralInvariants(
        d=eigenvalue_count(m, n),
        trace=float(exact_trace),
        scaled_trace=float((m - 1) ** (n - 1) * exact_trace),
        determinant=None if det is None else float(det),
    )


def all_canonical_indices(m: int, n: int):
    """Every canonical multi-index of an order-``m``, dimension-``n`` tensor."""
    return combinations_with_replacement(range(1, n + 1), m)
