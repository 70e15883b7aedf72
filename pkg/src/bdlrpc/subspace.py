"""F_q-linear subspaces of F_{q^m} and their products."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeOutOfRange, FieldMismatch, ZeroScalar
from .field import FieldElement, FieldParams, format_element, mul_arrays, mult_matrix, parse_element, power_vectors
from .fqmatrix import FqSubspaceN, intersect_rows, rref_array


class Subspace:
    """An F_q-subspace of F_{q^m}; the basis is canonical (RREF of coordinate rows)."""

    __slots__ = ("field", "space")

    def __init__(self, field: FieldParams, space: FqSubspaceN):
        if space.q != field.q or space.ambient != field.m:
            raise FieldMismatch("coordinate space does not match the field")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, field: FieldParams, rows: np.ndarray) -> Subspace:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, field.m)
        if rows.shape[0] == 0:
            return cls.zero(field)
        red, _ = rref_array(rows, field.q)
        return cls(field, FqSubspaceN(field.q, field.m, red))

    @classmethod
    def zero(cls, field: FieldParams) -> Subspace:
        return cls(field, FqSubspaceN.zero(field.q, field.m))

    @classmethod
    def whole(cls, field: FieldParams) -> Subspace:
        return cls(field, FqSubspaceN.full(field.q, field.m))

    @property
    def basis(self) -> np.ndarray:
        """Canonical basis as a (dim, m) coordinate array."""
        return self.space.basis

    @property
    def dim(self) -> int:
        return self.space.dim

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, tuple(int(c) for c in row)) for row in self.basis]

    def _check(self, other: Subspace) -> None:
        if self.field != other.field:
            raise FieldMismatch("subspaces of different fields")

    def __add__(self, other: Subspace) -> Subspace:
        return span_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def __mul__(self, other: Subspace) -> Subspace:
        return product(self, other)

    def __le__(self, other: Subspace) -> bool:
        return is_subspace(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field == other.field and self.space == other.space

    def __hash__(self) -> int:
        return hash((self.field, self.space))

    def __repr__(self) -> str:
        return f"Subspace(q={self.field.q}, m={self.field.m}, dim={self.dim})"

    def to_text(self) -> str:
        return "".join(format_element(e) + "\n" for e in self.elements())


def _vectors(elems: Sequence[FieldElement], field: FieldParams) -> np.ndarray:
    for e in elems:
        if e.field != field:
            raise FieldMismatch("elements belong to different fields")
    if not elems:
        return np.zeros((0, field.m), dtype=np.int64)
    return np.array([e.coeffs for e in elems], dtype=np.int64)


def span_of(elems: Sequence[FieldElement], field: FieldParams | None = None) -> Subspace:
    elems = list(elems)
    if field is None:
        if not elems:
            raise ValueError("field is required for an empty generating set")
        field = elems[0].field
    return Subspace.from_vectors(field, _vectors(elems, field))


def bounded_degree(alpha: FieldElement, d: int) -> Subspace:
    """span{1, alpha, ..., alpha^(d-1)}."""
    field = alpha.field
    if not 1 <= d <= field.m:
        raise DegreeOutOfRange(f"d={d} outside [1, {field.m}]")
    return Subspace.from_vectors(field, power_vectors(field, alpha, d))


def product(u: Subspace, v: Subspace) -> Subspace:
    """U.V = span of all pairwise products of basis elements."""
    u._check(v)
    f = u.field
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(f)
    prods = mul_arrays(f, u.basis[:, None, :], v.basis[None, :, :]).reshape(-1, f.m)
    return Subspace.from_vectors(f, prods)


def scalar_mul(beta: FieldElement, v: Subspace) -> Subspace:
    if beta.field != v.field:
        raise FieldMismatch("scalar and subspace belong to different fields")
    if beta.is_zero():
        raise ZeroScalar("scaling by zero collapses the subspace")
    f = v.field
    if v.dim == 0:
        return v
    return Subspace.from_vectors(f, v.basis @ mult_matrix(f, beta) % f.q)


def span_sum(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    return Subspace(u.field, u.space + v.space)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    return Subspace(u.field, FqSubspaceN(u.field.q, u.field.m, intersect_rows(u.basis, v.basis, u.field.q)))


def dim(v: Subspace) -> int:
    return v.dim


def contains(v: Subspace, a: FieldElement) -> bool:
    if a.field != v.field:
        raise FieldMismatch("element and subspace belong to different fields")
    return v.space.contains(a.vec)


def equals(u: Subspace, v: Subspace) -> bool:
    u._check(v)
    return u.space == v.space


def is_subspace(u: Subspace, v: Subspace) -> bool:
    u._check(v)
    return v.space.contains_all(u.basis)


def expand_step(w: Subspace, alpha_mat: np.ndarray) -> Subspace:
    """W + alpha W, with alpha given by its multiplication matrix."""
    f = w.field
    if w.dim == 0:
        return w
    return Subspace.from_vectors(f, np.vstack([w.basis, w.basis @ alpha_mat % f.q]))


def parse_subspace(field: FieldParams, text: str) -> Subspace:
    elems = [parse_element(field, ln) for ln in text.splitlines() if ln.strip()]
    return span_of(elems, field)


def from_elements(field: FieldParams, elems: Iterable[FieldElement]) -> Subspace:
    return span_of(list(elems), field)
