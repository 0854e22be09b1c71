"""Eigenvalue bounds, exact 2-D spectra and positivity certificates for symmetric tensors."""

__version__ = "0.1.0"

from .tensor import (  # noqa: E402
    HomogeneousPolynomial,
    SymmetricTensor,
    TensorError,
    apply,
    evaluate,
    from_polynomial,
    from_unique_entries,
    identity_tensor,
    spectral_invariants,
    to_polynomial,
)
from .oracle import Spectrum, charpoly, determinant, residual_check, spectrum  # noqa: E402
from .bounds import BoundInputs, all_bounds, bound_inputs, gershgorin_disks  # noqa: E402
from .certify import certify_pd, lyapunov_gradient_flow_check  # noqa: E402
from .tensorfile import TensorDocument, parse_tensor_file, serialize  # noqa: E402

__all__ = [
    "__version__",
    "HomogeneousPolynomial",
    "SymmetricTensor",
    "TensorError",
    "apply",
    "evaluate",
    "from_polynomial",
    "from_unique_entries",
    "identity_tensor",
    "spectral_invariants",
    "to_polynomial",
    "Spectrum",
    "charpoly",
    "determinant",
    "residual_check",
    "spectrum",
    "BoundInputs",
    "all_bounds",
    "bound_inputs",
    "gershgorin_disks",
    "certify_pd",
    "lyapunov_gradient_flow_check",
    "TensorDocument",
    "parse_tensor_file",
    "serialize",
]
