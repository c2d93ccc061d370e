"""Real and complex Clifford algebras R_m / C_m with negative-definite signature.

Generators e_1, ..., e_m satisfy

    e_j^2 = -1,        e_i e_j = -e_j e_i  (i != j).

A basis blade e_A is indexed by a bitmask: bit (j-1) set means generator e_j
is present, generators in increasing order.  For m = 2 the blade order is

    index 0b00 : 1      (scalar)
    index 0b01 : e1
    index 0b10 : e2
    index 0b11 : e1e2

The product of two blades is the blade of the XOR of their masks, with a sign
from anticommutation swaps plus one factor -1 per shared generator.

Coefficients are stored as complex numbers throughout (the complex algebra is
needed downstream for eigenvalue phases); dense storage for m <= 6, a sparse
mask->coefficient map above that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

DENSE_DIM_LIMIT = 6


@dataclass(frozen=True)
class Blade:
    """Basis blade e_A, A a subset of {1, ..., m} encoded as a bitmask."""

    mask: int

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "Blade":
        mask = 0
        for j in indices:
            if j < 1:
                raise ValueError(f"generator index must be >= 1, got {j}")
            mask |= 1 << (j - 1)
        return cls(mask)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(j + 1 for j in range(self.mask.bit_length()) if self.mask >> j & 1)

    @property
    def grade(self) -> int:
        return self.mask.bit_count()

    def __repr__(self) -> str:
        return "e_{" + ",".join(map(str, self.indices)) + "}" if self.mask else "1"


def _reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the concatenation of blades a, b into canonical order.

    Counts pairs (i in a, j in b) with i > j; each costs one transposition.
    """
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(a: Blade | int, b: Blade | int, m: int) -> tuple[int, Blade]:
    """Product of basis blades: e_a e_b = sign * e_(a XOR b).

    Sign = transposition parity from interleaving, times (-1) per common
    generator (e_j^2 = -1).
    """
    am = a.mask if isinstance(a, Blade) else a
    bm = b.mask if isinstance(b, Blade) else b
    if (am | bm) >> m:
        raise ValueError(f"blade masks {am:#b}, {bm:#b} exceed dimension m={m}")
    sign = _reorder_sign(am, bm)
    if (am & bm).bit_count() & 1:
        sign = -sign
    return sign, Blade(am ^ bm)


def _conj_sign(mask: int) -> int:
    # conjugate of e_A: reverse (h(h-1)/2 swaps) then e_j -> -e_j (h signs),
    # net (-1)^(h(h+1)/2)
    h = mask.bit_count()
    return -1 if (h * (h + 1) // 2) & 1 else 1


@lru_cache(maxsize=8)
def cayley_tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    """(signs, results): 2^m x 2^m blade product tables for dimension m."""
    dim = 1 << m
    signs = np.empty((dim, dim), dtype=np.int8)
    results = np.empty((dim, dim), dtype=np.int64)
    for i in range(dim):
        for j in range(dim):
            s, blade = blade_product(i, j, m)
            signs[i, j] = s
            results[i, j] = blade.mask
    return signs, results


@lru_cache(maxsize=8)
def conjugation_signs(m: int) -> np.ndarray:
    return np.array([_conj_sign(mask) for mask in range(1 << m)], dtype=np.int8)


@lru_cache(maxsize=8)
def grades(m: int) -> np.ndarray:
    return np.array([mask.bit_count() for mask in range(1 << m)], dtype=np.int64)


class Multivector:
    """Immutable element of C_m.

    Construct from a dense coefficient array (blade-mask order), a
    mask->coefficient mapping, or via the module helpers `scalar_mv`,
    `basis_vector`, `from_vector`.
    """

    __slots__ = ("dim", "_coeffs", "_sparse")

    def __init__(self, dim: int, coeffs: np.ndarray | Mapping[int, complex]):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "dim", dim)
        if isinstance(coeffs, Mapping):
            if dim <= DENSE_DIM_LIMIT:
                dense = np.zeros(1 << dim, dtype=complex)
                for mask, v in coeffs.items():
                    self._check_mask(mask)
                    dense[mask] = v
                object.__setattr__(self, "_coeffs", dense)
                object.__setattr__(self, "_sparse", None)
            else:
                sparse = {}
                for mask, v in coeffs.items():
                    self._check_mask(mask)
                    if v != 0:
                        sparse[mask] = complex(v)
                object.__setattr__(self, "_coeffs", None)
                object.__setattr__(self, "_sparse", sparse)
        else:
            arr = np.asarray(coeffs, dtype=complex)
            if arr.shape != (1 << dim,):
                raise ValueError(f"expected {1 << dim} coefficients for m={dim}")
            if dim <= DENSE_DIM_LIMIT:
                arr = arr.copy()
                arr.setflags(write=False)
                object.__setattr__(self, "_coeffs", arr)
                object.__setattr__(self, "_sparse", None)
            else:
                sparse = {i: complex(v) for i, v in enumerate(arr) if v != 0}
                object.__setattr__(self, "_coeffs", None)
                object.__setattr__(self, "_sparse", sparse)

    def _check_mask(self, mask: int) -> None:
        if mask >> self.dim:
            raise ValueError(f"blade mask {mask:#b} exceeds dimension m={self.dim}")

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- accessors ---------------------------------------------------------

    def coefficient(self, blade: Blade | int) -> complex:
        mask = blade.mask if isinstance(blade, Blade) else blade
        self._check_mask(mask)
        if self._sparse is not None:
            return self._sparse.get(mask, 0j)
        return complex(self._coeffs[mask])

    def items(self) -> Iterable[tuple[int, complex]]:
        if self._sparse is not None:
            return sorted(self._sparse.items())
        return [(i, complex(v)) for i, v in enumerate(self._coeffs) if v != 0]

    def dense(self) -> np.ndarray:
        """Dense coefficient array in blade-mask order (copy)."""
        if self._sparse is not None:
            out = np.zeros(1 << self.dim, dtype=complex)
            for mask, v in self._sparse.items():
                out[mask] = v
            return out
        return self._coeffs.copy()

    # -- arithmetic --------------------------------------------------------

    def _require_same_dim(self, other: "Multivector") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: m={self.dim} vs m={other.dim}")

    def __add__(self, other):
        other = _coerce(other, self.dim)
        self._require_same_dim(other)
        if self._sparse is not None:
            out = dict(self._sparse)
            for mask, v in other.items():
                out[mask] = out.get(mask, 0j) + v
            return Multivector(self.dim, out)
        return Multivector(self.dim, self._coeffs + other.dense())

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = _coerce(other, self.dim)
        return self + (-1) * other

    def __rsub__(self, other):
        return _coerce(other, self.dim) + (-1) * self

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            if self._sparse is not None:
                return Multivector(self.dim, {k: other * v for k, v in self._sparse.items()})
            return Multivector(self.dim, other * self._coeffs)
        return _coerce(other, self.dim) * self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.__rmul__(other)
        other = _coerce(other, self.dim)
        self._require_same_dim(other)
        return geometric_product(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector) or self.dim != other.dim:
            return NotImplemented
        return np.array_equal(self.dense(), other.dense())

    def __hash__(self):
        return hash((self.dim, tuple(self.items())))

    # -- structure ---------------------------------------------------------

    def conjugate(self) -> "Multivector":
        return conjugate(self)

    def grade_project(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def scalar_part(self) -> complex:
        return self.coefficient(0)

    def norm(self) -> float:
        if self._sparse is not None:
            return float(np.sqrt(sum(abs(v) ** 2 for v in self._sparse.values())))
        return float(np.linalg.norm(self._coeffs))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        """JSON form {"dim": m, "coeffs": {"1,2": [re, im]}} (identity key "")."""
        coeffs = {}
        for mask, v in self.items():
            key = ",".join(map(str, Blade(mask).indices))
            coeffs[key] = [v.real, v.imag]
        return json.dumps({"dim": self.dim, "coeffs": coeffs})

    @classmethod
    def from_json(cls, text: str) -> "Multivector":
        obj = json.loads(text)
        dim = int(obj["dim"])
        coeffs = {}
        for key, (re, im) in obj["coeffs"].items():
            indices = [int(t) for t in key.split(",")] if key else []
            coeffs[Blade.from_indices(indices).mask] = complex(re, im)
        return cls(dim, coeffs)

    def __repr__(self) -> str:
        terms = [f"({v:.6g})*{Blade(mask)!r}" for mask, v in self.items()]
        return " + ".join(terms) if terms else "0"


def _coerce(value, dim: int) -> Multivector:
    if isinstance(value, Multivector):
        return value
    if isinstance(value, (int, float, complex, np.number)):
        return scalar_mv(dim, value)
    raise TypeError(f"cannot interpret {type(value).__name__} as Multivector")


def scalar_mv(m: int, value: complex) -> Multivector:
    return Multivector(m, {0: complex(value)})


def basis_vector(m: int, j: int) -> Multivector:
    """The generator e_j, 1 <= j <= m."""
    if not 1 <= j <= m:
        raise ValueError(f"generator index {j} out of range for m={m}")
    return Multivector(m, {1 << (j - 1): 1.0})


def basis_blade(m: int, *indices: int) -> Multivector:
    return Multivector(m, {Blade.from_indices(indices).mask: 1.0})


def from_vector(components: Iterable[float]) -> Multivector:
    """Embed a point of R^m as the grade-1 element x = sum_j e_j x_j."""
    comps = list(components)
    return Multivector(len(comps), {1 << j: complex(c) for j, c in enumerate(comps)})


def geometric_product(x: Multivector, y: Multivector) -> Multivector:
    """Bilinear (associative) extension of the blade product."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: m={x.dim} vs m={y.dim}")
    m = x.dim
    if m <= DENSE_DIM_LIMIT:
        signs, results = cayley_tables(m)
        a = x.dense()
        b = y.dense()
        out = np.zeros(1 << m, dtype=complex)
        outer = (signs * a[:, None]) * b[None, :]
        np.add.at(out, results.ravel(), outer.ravel())
        return Multivector(m, out)
    out: dict[int, complex] = {}
    for ma, va in x.items():
        for mb, vb in y.items():
            sign, blade = blade_product(ma, mb, m)
            out[blade.mask] = out.get(blade.mask, 0j) + sign * va * vb
    return Multivector(m, out)


def conjugate(x: Multivector) -> Multivector:
    """Clifford conjugation: conjugate-linear antihomomorphism with e_j -> -e_j."""
    signs = conjugation_signs(x.dim) if x.dim <= DENSE_DIM_LIMIT else None
    if signs is not None:
        return Multivector(x.dim, signs * np.conj(x.dense()))
    return Multivector(x.dim, {mask: _conj_sign(mask) * np.conj(v) for mask, v in x.items()})


def inner_product(x: Multivector, y: Multivector) -> complex:
    """Scalar part of conjugate(x) * y; equals sum_A conj(x_A) y_A."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: m={x.dim} vs m={y.dim}")
    # [conj(e_A) e_B]_0 = delta_AB, so this collapses to the coefficient dot
    if x._sparse is not None or y._sparse is not None:
        return sum(np.conj(x.coefficient(mask)) * v for mask, v in y.items())
    return complex(np.vdot(x.dense(), y.dense()))


def grade_project(x: Multivector, k: int) -> Multivector:
    """Keep only blades of grade k."""
    if not 0 <= k <= x.dim:
        raise ValueError(f"grade {k} out of range for m={x.dim}")
    if x._sparse is not None:
        return Multivector(x.dim, {mask: v for mask, v in x.items() if mask.bit_count() == k})
    keep = grades(x.dim) == k
    return Multivector(x.dim, np.where(keep, x.dense(), 0))


# ---------------------------------------------------------------------------
# Vectorized field operations.
#
# A "field" is an ndarray of shape (..., 2^m): one complex coefficient per
# blade at every sample point.  These are the hot paths for quadrature.
# ---------------------------------------------------------------------------

def field_multiply(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Pointwise geometric product of two blade-coefficient fields."""
    signs, results = cayley_tables(m)
    dim = 1 << m
    a = np.asarray(a)
    b = np.asarray(b)
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            out[..., results[i, j]] += signs[i, j] * a[..., i] * b[..., j]
    return out


def field_conjugate(a: np.ndarray, m: int) -> np.ndarray:
    return conjugation_signs(m) * np.conj(np.asarray(a))


def field_scalar_part(a: np.ndarray) -> np.ndarray:
    return np.asarray(a)[..., 0]


def field_norm(a: np.ndarray) -> np.ndarray:
    """Pointwise Clifford norm |a| = sqrt(sum_A |a_A|^2)."""
    return np.sqrt(np.sum(np.abs(np.asarray(a)) ** 2, axis=-1))
