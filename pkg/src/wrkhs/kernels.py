"""Kernel zoo: kernels, pseudo-kernels, and Gram-matrix builders.

Families
--------
``RealGaussian``
    Isotropic Gaussian of the complex difference,
    ``scale * exp(-(x - x')^H (x - x') / gamma)``. Real-valued, stationary,
    null pseudo-kernel. Also serves as the real-valued building block for
    the block-composed families below.
``ComplexGaussian``
    ``exp(-(x - conj(x'))^T (x - conj(x')) / gamma)`` -- note the plain
    transpose and the conjugate on the second argument only. Complex-valued,
    non-stationary, null pseudo-kernel. Its exponent can grow large and
    positive; evaluations are saturated at exp(700) with a warning.
``IndependentGaussian``
    Built from a real Gaussian ``kappa`` of *real* vectors applied to the
    real/imaginary parts:
    ``kappa(xr,xr') + kappa(xj,xj') + j(kappa(xr,xj') - kappa(xj,xr'))``.
    Null pseudo-kernel. One shared ``gamma`` for all four terms.
``RealImagBlocks``
    Four real-valued kernels of complex inputs (rr, jj, rj, jr) composed as
    kernel ``(rr + jj) + j(jr - rj)`` and pseudo-kernel
    ``(rr - jj) + j(jr + rj)``. Requires ``rj(x, x') == jr(x', x)``.
``SeparateRealImag``
    Independent real and imaginary output parts with distinct real kernels:
    kernel ``rr + jj``, pseudo-kernel ``rr - jj``.
``SumOfSeparable``
    Mixed-effect design: kernel ``2 * sum_q k_q`` and pseudo-kernel
    ``2j * sum_q w_q k_q`` with real-valued ``k_q`` and weights in [0, 1).

Every family exposes ``gram``/``pseudo_gram`` (entrywise over sample rows)
plus scalar ``eval``/``pseudo``. Specs are immutable and hashable; all
evaluations are pure and thread-safe.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelSpec",
    "RealGaussian",
    "ComplexGaussian",
    "IndependentGaussian",
    "RealImagBlocks",
    "SeparateRealImag",
    "SumOfSeparable",
    "KernelOverflowWarning",
    "augmented_gram",
    "composite_blocks",
    "composite_gram",
    "min_composite_eigenvalue",
    "validate_psd",
    "kernel_from_config",
]

# Largest exponent fed to exp() for the complex Gaussian before saturation.
EXP_SATURATION = 700.0


class KernelOverflowWarning(RuntimeWarning):
    """The complex Gaussian exponent exceeded the saturation threshold."""


def _as_inputs(x, name: str = "X") -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be (n, d), got shape {arr.shape}")
    return arr


def _check_dims(x: np.ndarray, z: np.ndarray) -> None:
    if x.shape[1] != z.shape[1]:
        raise ValueError(
            f"input dimension mismatch: {x.shape[1]} vs {z.shape[1]}"
        )


def _sqdist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances |a_i - b_j|^2 (complex rows ok)."""
    aa = np.sum(np.abs(a) ** 2, axis=1)[:, None]
    bb = np.sum(np.abs(b) ** 2, axis=1)[None, :]
    cross = np.real(a @ b.conj().T)
    return np.maximum(aa + bb - 2.0 * cross, 0.0)


class KernelSpec:
    """Base class for kernel/pseudo-kernel pairs. Subclasses are frozen."""

    family: str = ""

    # -- evaluation ---------------------------------------------------------

    def gram(self, x, z=None) -> np.ndarray:
        """Kernel Gram matrix K with ``K[i, j] = k(x_i, z_j)``."""
        x = _as_inputs(x)
        z = x if z is None else _as_inputs(z, "Z")
        _check_dims(x, z)
        return self._gram(x, z)

    def pseudo_gram(self, x, z=None) -> np.ndarray:
        """Pseudo-kernel Gram matrix with entries ``ktilde(x_i, z_j)``."""
        x = _as_inputs(x)
        z = x if z is None else _as_inputs(z, "Z")
        _check_dims(x, z)
        return self._pseudo_gram(x, z)

    def eval(self, x, xp) -> complex:
        """Scalar kernel evaluation k(x, x')."""
        return complex(self.gram(np.atleast_1d(x), np.atleast_1d(xp))[0, 0])

    def pseudo(self, x, xp) -> complex:
        """Scalar pseudo-kernel evaluation ktilde(x, x')."""
        return complex(self.pseudo_gram(np.atleast_1d(x), np.atleast_1d(xp))[0, 0])

    # -- structure ----------------------------------------------------------

    @property
    def has_null_pseudo(self) -> bool:
        """True when the pseudo-kernel is identically zero by construction."""
        raise NotImplementedError

    @property
    def is_real_valued(self) -> bool:
        """True when every kernel value is real (enables real Gram storage)."""
        return False

    def _gram(self, x, z) -> np.ndarray:
        raise NotImplementedError

    def _pseudo_gram(self, x, z) -> np.ndarray:
        return np.zeros((x.shape[0], z.shape[0]))

    # -- serialization ------------------------------------------------------

    def to_config(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_config(config: dict) -> "KernelSpec":
        return kernel_from_config(config)


@dataclass(frozen=True)
class RealGaussian(KernelSpec):
    """``scale * exp(-|x - x'|^2 / gamma)`` on complex (or real) vectors."""

    gamma: float
    scale: float = 1.0
    family = "real_gaussian"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.scale < 0:
            raise ValueError(f"scale must be non-negative, got {self.scale}")

    def _gram(self, x, z):
        return self.scale * np.exp(-_sqdist(x, z) / self.gamma)

    @property
    def has_null_pseudo(self) -> bool:
        return True

    @property
    def is_real_valued(self) -> bool:
        return True

    def to_config(self) -> dict:
        return {"family": self.family, "params": {"gamma": self.gamma, "scale": self.scale}}


@dataclass(frozen=True)
class ComplexGaussian(KernelSpec):
    """``exp(-(x - conj(x'))^T (x - conj(x')) / gamma)``.

    The exponent uses the plain transpose, not the conjugate transpose:
    real parts are compared through ``|xr - xr'|^2`` but imaginary parts
    through ``-|xj + xj'|^2``, so the value is complex and unbounded on the
    diagonal (``k(x, x) = exp(4 |xj|^2 / gamma)``).
    """

    gamma: float
    family = "complex_gaussian"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    def _gram(self, x, z):
        # (x - z*)^T (x - z*) = sum x^2 + sum (z*)^2 - 2 x . z*
        sx = np.sum(x**2, axis=1)[:, None]
        sz = np.sum(z.conj() ** 2, axis=1)[None, :]
        cross = x @ z.conj().T
        expo = -(sx + sz - 2.0 * cross) / self.gamma
        re = expo.real
        if np.any(re > EXP_SATURATION):
            warnings.warn(
                "complex Gaussian exponent exceeded saturation threshold; "
                "values clipped at exp(700)",
                KernelOverflowWarning,
                stacklevel=3,
            )
            re = np.minimum(re, EXP_SATURATION)
        return np.exp(re + 1j * expo.imag)

    @property
    def has_null_pseudo(self) -> bool:
        return True

    def to_config(self) -> dict:
        return {"family": self.family, "params": {"gamma": self.gamma}}


@dataclass(frozen=True)
class IndependentGaussian(KernelSpec):
    """Independent kernel: real Gaussian applied to real/imag part pairs.

    ``k(x,x') = kappa(xr,xr') + kappa(xj,xj') + j(kappa(xr,xj') - kappa(xj,xr'))``
    with ``kappa(u,v) = exp(-|u - v|^2 / gamma)`` on real vectors. The same
    ``gamma`` is shared by all four terms.
    """

    gamma: float
    family = "independent"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    def _gram(self, x, z):
        def kap(a, b):
            return np.exp(-_sqdist(a, b) / self.gamma)

        xr, xj = x.real, x.imag
        zr, zj = z.real, z.imag
        return kap(xr, zr) + kap(xj, zj) + 1j * (kap(xr, zj) - kap(xj, zr))

    @property
    def has_null_pseudo(self) -> bool:
        return True

    def to_config(self) -> dict:
        return {"family": self.family, "params": {"gamma": self.gamma}}


def _real_part_kernel(obj) -> RealGaussian:
    if not isinstance(obj, RealGaussian):
        raise TypeError(
            "block kernels must be real-valued kernels of complex inputs "
            f"(RealGaussian), got {type(obj).__name__}"
        )
    return obj


def _check_cross_consistency(rj: RealGaussian, jr: RealGaussian) -> None:
    """Stochastic check of the cross-block constraint rj(x, x') == jr(x', x)."""
    rng = np.random.default_rng(0x5EED)
    for d in (1, 2, 5):
        x = rng.standard_normal((4, d)) + 1j * rng.standard_normal((4, d))
        z = rng.standard_normal((4, d)) + 1j * rng.standard_normal((4, d))
        a = rj.gram(x, z)
        b = jr.gram(z, x).T
        if np.max(np.abs(a - b)) > 1e-10:
            raise ValueError(
                "cross kernels are inconsistent: rj(x, x') must equal jr(x', x)"
            )


@dataclass(frozen=True)
class RealImagBlocks(KernelSpec):
    """Kernel/pseudo-kernel pair from four real-valued part kernels.

    kernel       = (rr + jj) + j (jr - rj)
    pseudo-kernel = (rr - jj) + j (jr + rj)
    """

    rr: RealGaussian
    jj: RealGaussian
    rj: RealGaussian
    jr: RealGaussian
    family = "real_imag_blocks"

    def __post_init__(self):
        for name in ("rr", "jj", "rj", "jr"):
            _real_part_kernel(getattr(self, name))
        _check_cross_consistency(self.rj, self.jr)

    def _gram(self, x, z):
        grr = self.rr.gram(x, z)
        gjj = self.jj.gram(x, z)
        grj = self.rj.gram(x, z)
        gjr = self.jr.gram(x, z)
        return (grr + gjj) + 1j * (gjr - grj)

    def _pseudo_gram(self, x, z):
        grr = self.rr.gram(x, z)
        gjj = self.jj.gram(x, z)
        grj = self.rj.gram(x, z)
        gjr = self.jr.gram(x, z)
        return (grr - gjj) + 1j * (gjr + grj)

    @property
    def has_null_pseudo(self) -> bool:
        return self.rr == self.jj and self.rj.scale == 0 and self.jr.scale == 0

    def to_config(self) -> dict:
        return {
            "family": self.family,
            "params": {
                name: getattr(self, name).to_config()["params"]
                for name in ("rr", "jj", "rj", "jr")
            },
        }


@dataclass(frozen=True)
class SeparateRealImag(KernelSpec):
    """Distinct real kernels for independent real and imaginary parts."""

    rr: RealGaussian
    jj: RealGaussian
    family = "separate_real_imag"

    def __post_init__(self):
        _real_part_kernel(self.rr)
        _real_part_kernel(self.jj)

    def _gram(self, x, z):
        return self.rr.gram(x, z) + self.jj.gram(x, z)

    def _pseudo_gram(self, x, z):
        return self.rr.gram(x, z) - self.jj.gram(x, z)

    @property
    def has_null_pseudo(self) -> bool:
        return self.rr == self.jj

    @property
    def is_real_valued(self) -> bool:
        return True

    def to_config(self) -> dict:
        return {
            "family": self.family,
            "params": {
                "rr": self.rr.to_config()["params"],
                "jj": self.jj.to_config()["params"],
            },
        }


@dataclass(frozen=True)
class SumOfSeparable(KernelSpec):
    """Mixed-effect sum-of-separable design over real part kernels.

    kernel        = 2  sum_q k_q
    pseudo-kernel = 2j sum_q w_q k_q   (pure imaginary)

    Weights must satisfy ``0 <= w_q < 1``; ``w_q = 0`` degenerates the term
    to the strictly-complex (null pseudo-kernel) case.
    """

    terms: tuple[tuple[RealGaussian, float], ...]
    family = "sum_of_separable"

    def __post_init__(self):
        terms = tuple((kq, float(w)) for kq, w in self.terms)
        if not terms:
            raise ValueError("at least one separable term is required")
        for kq, w in terms:
            _real_part_kernel(kq)
            if not 0.0 <= w < 1.0:
                raise ValueError(f"weights must lie in [0, 1), got {w}")
        object.__setattr__(self, "terms", terms)

    def _gram(self, x, z):
        total = sum(kq.gram(x, z) for kq, _ in self.terms)
        return 2.0 * total

    def _pseudo_gram(self, x, z):
        total = sum(w * kq.gram(x, z) for kq, w in self.terms)
        return 2j * total

    @property
    def has_null_pseudo(self) -> bool:
        return all(w == 0.0 for _, w in self.terms)

    @property
    def is_real_valued(self) -> bool:
        return self.has_null_pseudo

    def to_config(self) -> dict:
        return {
            "family": self.family,
            "params": {
                "terms": [
                    {"weight": w, **kq.to_config()["params"]}
                    for kq, w in self.terms
                ]
            },
        }


# ---------------------------------------------------------------------------
# derived Gram structures
# ---------------------------------------------------------------------------


def augmented_gram(spec: KernelSpec, x, z=None) -> np.ndarray:
    """The augmented kernel matrix ``[[K, Kt], [conj(Kt), conj(K)]]``."""
    k = np.asarray(spec.gram(x, z), dtype=np.complex128)
    kt = np.asarray(spec.pseudo_gram(x, z), dtype=np.complex128)
    return np.block([[k, kt], [kt.conj(), k.conj()]])


def composite_blocks(spec: KernelSpec, x_star, x) -> tuple[np.ndarray, ...]:
    """Recover the four real part-kernel blocks (rr, rj, jr, jj).

    Inverts the kernel/pseudo-kernel identification:
    ``rr = (Re k + Re kt)/2``, ``jj = (Re k - Re kt)/2``,
    ``jr = (Im k + Im kt)/2``, ``rj = (Im kt - Im k)/2``.
    The composite prediction matrix is 2x these blocks (see
    :func:`composite_gram`).
    """
    k = np.asarray(spec.gram(x_star, x), dtype=np.complex128)
    kt = np.asarray(spec.pseudo_gram(x_star, x), dtype=np.complex128)
    rr = (k.real + kt.real) / 2.0
    jj = (k.real - kt.real) / 2.0
    jr = (k.imag + kt.imag) / 2.0
    rj = (kt.imag - k.imag) / 2.0
    return rr, rj, jr, jj


def composite_gram(spec: KernelSpec, x_star, x) -> np.ndarray:
    """The real (2m, 2n) composite prediction matrix ``2 [[rr, rj], [jr, jj]]``."""
    rr, rj, jr, jj = composite_blocks(spec, x_star, x)
    return 2.0 * np.block([[rr, rj], [jr, jj]])


def min_composite_eigenvalue(spec: KernelSpec, x) -> float:
    """Smallest eigenvalue of the composite Gram matrix (PSD diagnostic)."""
    kc = composite_gram(spec, x, x)
    kc = (kc + kc.T) / 2.0
    return float(np.linalg.eigvalsh(kc)[0])


def validate_psd(spec: KernelSpec, x, tol: float = 1e-10) -> float:
    """Opt-in O(n^3) PSD check of the composite Gram matrix on samples ``x``.

    Returns the minimum eigenvalue; raises ``ValueError`` if it falls below
    ``-tol``.
    """
    lo = min_composite_eigenvalue(spec, x)
    if lo < -tol:
        raise ValueError(
            f"kernel/pseudo-kernel pair is not positive semidefinite on the "
            f"given samples (min eigenvalue {lo:.3e})"
        )
    return lo


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------


def _real_gaussian_from_params(params: dict) -> RealGaussian:
    return RealGaussian(
        gamma=float(params["gamma"]), scale=float(params.get("scale", 1.0))
    )


def kernel_from_config(config: dict) -> KernelSpec:
    """Build a kernel spec from its JSON object ``{"family": ..., "params": ...}``."""
    if not isinstance(config, dict) or "family" not in config:
        raise ValueError("kernel config must be an object with a 'family' field")
    family = config["family"]
    params = config.get("params", {})
    if family == RealGaussian.family:
        return _real_gaussian_from_params(params)
    if family == ComplexGaussian.family:
        return ComplexGaussian(gamma=float(params["gamma"]))
    if family == IndependentGaussian.family:
        return IndependentGaussian(gamma=float(params["gamma"]))
    if family == RealImagBlocks.family:
        return RealImagBlocks(
            **{
                name: _real_gaussian_from_params(params[name])
                for name in ("rr", "jj", "rj", "jr")
            }
        )
    if family == SeparateRealImag.family:
        return SeparateRealImag(
            rr=_real_gaussian_from_params(params["rr"]),
            jj=_real_gaussian_from_params(params["jj"]),
        )
    if family == SumOfSeparable.family:
        return SumOfSeparable(
            terms=tuple(
                (_real_gaussian_from_params(t), float(t["weight"]))
                for t in params["terms"]
            )
        )
    raise ValueError(f"unknown kernel family: {family!r}")

