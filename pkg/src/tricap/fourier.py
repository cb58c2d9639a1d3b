"""Exact Fourier analysis on F_3^n with Eisenstein-integer coefficients.

The table entry at frequency x is the unnormalized character sum
c(x) = sum over members a of w^(x.a). The full table is computed by n
in-place-style iterative passes of the 3-point butterfly (the transform
is the n-th tensor power of the 3-point DFT; the group is elementary
abelian, so there are no twiddle factors). Coefficients live in two
int64 planes (real part p, omega part q); indicator inputs keep every
intermediate below 3^n <= 3^16, far inside int64. Inputs that could
overflow are promoted to Python-int object arrays automatically.

Identities kept loud here:
  * Plancherel: sum_x norm(c(x)) = 3^n * |A|, exact integers.
  * inverse(transform(f)) == f bit for bit, with an exact-divisibility
    check on the final 3^n division.
  * cube sum: sum_x c(x)^3 = 3^n * (number of ordered line solutions).
"""

from __future__ import annotations

import struct
from typing import BinaryIO

import numpy as np

from . import bulk
from .capset import PointSet
from .errors import GuardExceededError, IdentityViolationError
from .gf3core import Eisenstein, TritVector
from .linalg import Subspace

__all__ = [
    "SpectrumTable",
    "TRANSFORM_GUARD_N",
    "TRANSFORM_HARD_MAX_N",
    "balanced_transform",
    "cube_sum",
    "eval_at",
    "inverse_table",
    "load_table",
    "plancherel_check",
    "save_table",
    "subspace_weight",
    "transform_point_set",
    "transform_table",
]

TRANSFORM_GUARD_N = 14
TRANSFORM_HARD_MAX_N = 16  # 2 * 8 bytes * 3^16 ~ 0.7 GB of table

_INT64_SAFE = 1 << 62


def _check_guard(n: int, force: bool) -> None:
    if n > TRANSFORM_HARD_MAX_N:
        raise GuardExceededError(
            f"transform dimension {n} exceeds the hard maximum {TRANSFORM_HARD_MAX_N}"
        )
    if n > TRANSFORM_GUARD_N and not force:
        raise GuardExceededError(
            f"transform dimension {n} exceeds the default guard "
            f"{TRANSFORM_GUARD_N}; pass force=True (CLI --force) to insist"
        )


def _apply_passes(p: np.ndarray, q: np.ndarray, n: int, inverse: bool):
    """Run the n butterfly passes; dtype chosen by worst-case growth."""
    peak = max(int(np.abs(p).max(initial=0)), int(np.abs(q).max(initial=0)))
    if peak and peak * 3**n >= _INT64_SAFE:
        p = p.astype(object)
        q = q.astype(object)
    for j in range(n):
        s = 3**j
        P = p.reshape(-1, 3, s)
        Q = q.reshape(-1, 3, s)
        p0, p1, p2 = P[:, 0, :], P[:, 1, :], P[:, 2, :]
        q0, q1, q2 = Q[:, 0, :], Q[:, 1, :], Q[:, 2, :]
        # rows of the 3-point DFT matrix over 1, w, w^2 (w^2 = -1 - w);
        # the inverse transform swaps the w and w^2 rows (conjugation)
        ap = p0 - q1 + q2 - p2
        aq = q0 + p1 - q1 - p2
        bp = p0 + q1 - p1 - q2
        bq = q0 - p1 + p2 - q2
        if inverse:
            ap, bp = bp, ap
            aq, bq = bq, aq
        np_ = np.empty_like(p).reshape(-1, 3, s)
        nq = np.empty_like(q).reshape(-1, 3, s)
        np_[:, 0, :] = p0 + p1 + p2
        nq[:, 0, :] = q0 + q1 + q2
        np_[:, 1, :] = ap
        nq[:, 1, :] = aq
        np_[:, 2, :] = bp
        nq[:, 2, :] = bq
        p = np_.reshape(-1)
        q = nq.reshape(-1)
    return p, q


class SpectrumTable:
    """Dense table of c(x) for every frequency x, canonical index order."""

    __slots__ = ("n", "p", "q", "source_size")

    def __init__(self, n: int, p: np.ndarray, q: np.ndarray, source_size: int | None = None):
        if p.shape != (3**n,) or q.shape != (3**n,):
            raise ValueError("table arrays must have length 3^n")
        self.n = n
        self.p = p
        self.q = q
        self.source_size = source_size

    def coefficient(self, x: TritVector) -> Eisenstein:
        i = x.index
        return Eisenstein(int(self.p[i]), int(self.q[i]))

    def coefficient_at(self, index: int) -> Eisenstein:
        return Eisenstein(int(self.p[index]), int(self.q[index]))

    def norms(self) -> np.ndarray:
        """eis_norm(c(x)) per frequency; int64 when provably safe."""
        p, q = self.p, self.q
        if p.dtype == np.int64:
            peak = max(int(np.abs(p).max(initial=0)), int(np.abs(q).max(initial=0)))
            if 3 * peak * peak < _INT64_SAFE:
                return p * p - p * q + q * q
        po = p.astype(object)
        qo = q.astype(object)
        return po * po - po * qo + qo * qo

    def norm_at(self, index: int) -> int:
        p, q = int(self.p[index]), int(self.q[index])
        return p * p - p * q + q * q

    def norm_total(self) -> int:
        """Exact big-int sum of all coefficient norms."""
        return sum(self.norms().tolist(), 0)


def transform_table(f, n: int, force: bool = False) -> SpectrumTable:
    """Transform an arbitrary integer function given as a dense array."""
    _check_guard(n, force)
    f = np.asarray(f)
    if f.shape != (3**n,):
        raise ValueError("input array must have length 3^n")
    p = np.array(f, dtype=np.int64 if f.dtype != object else object)
    q = np.zeros_like(p)
    p, q = _apply_passes(p, q, n, inverse=False)
    return SpectrumTable(n, p, q)


def transform_point_set(ps: PointSet, force: bool = False) -> SpectrumTable:
    """Character-sum table of a point set's indicator function."""
    _check_guard(ps.n, force)
    f = np.zeros(3**ps.n, dtype=np.int64)
    f[ps.indices] = 1
    p, q = _apply_passes(f, np.zeros_like(f), ps.n, inverse=False)
    t = SpectrumTable(ps.n, p, q, source_size=ps.size)
    c0 = t.coefficient_at(0)
    if (c0.p, c0.q) != (ps.size, 0):
        raise IdentityViolationError("c(0) = |A|", (c0.p, c0.q), (ps.size, 0))
    return t


def inverse_table(table: SpectrumTable, force: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Exact inverse as an (p, q) Eisenstein value pair per point.

    Raises IdentityViolationError if the final division by 3^n is not
    exact; for a table produced by transform_table the q plane comes
    back identically zero and p equals the original input bit for bit.
    """
    _check_guard(table.n, force)
    scale = 3**table.n
    p, q = _apply_passes(table.p.copy(), table.q.copy(), table.n, inverse=True)
    out = []
    for arr in (p, q):
        if arr.dtype == np.int64:
            if (arr % scale).any():
                raise IdentityViolationError("inverse divisibility", "remainder", 0)
            out.append(arr // scale)
        else:
            vals = arr.tolist()
            if any(v % scale for v in vals):
                raise IdentityViolationError("inverse divisibility", "remainder", 0)
            out.append(np.array([v // scale for v in vals], dtype=object))
    return out[0], out[1]


def plancherel_check(ps: PointSet, force: bool = False) -> tuple[int, int]:
    """(sum of norms, 3^n * |A|) as exact big ints; equal or it's a bug."""
    table = transform_point_set(ps, force=force)
    return table.norm_total(), 3**ps.n * ps.size


def cube_sum(ps: PointSet, force: bool = False) -> Eisenstein:
    """sum_x c(x)^3, exactly; equals (3^n * line solutions, 0)."""
    table = transform_point_set(ps, force=force)
    p, q = table.p, table.q
    # (p + q w)^3 = (p^3 + q^3 - 3 p q^2) + (3 p^2 q - 3 p q^2) w
    if table.n <= 12 and p.dtype == np.int64:
        # |terms| <= 4 * 3^(3n) <= 4 * 3^36 < 2^63 componentwise
        pp, qq = p, q
        re = pp**3 + qq**3 - 3 * pp * qq**2
        im = 3 * pp**2 * qq - 3 * pp * qq**2
        return Eisenstein(sum(re.tolist(), 0), sum(im.tolist(), 0))
    re_acc = 0
    im_acc = 0
    for pi, qi in zip(p.tolist(), q.tolist()):
        re_acc += pi**3 + qi**3 - 3 * pi * qi * qi
        im_acc += 3 * pi * pi * qi - 3 * pi * qi * qi
    return Eisenstein(re_acc, im_acc)


def balanced_transform(ps: PointSet, force: bool = False) -> SpectrumTable:
    """Transform of 3^n * indicator - |A|: zero mean, zero at frequency 0."""
    table = transform_point_set(ps, force=force)
    scale = 3**ps.n
    p = table.p * scale
    q = table.q * scale
    p[0] = 0
    q[0] = 0
    return SpectrumTable(ps.n, p, q, source_size=ps.size)


def eval_at(ps: PointSet, x: TritVector) -> Eisenstein:
    """c(x) for a single frequency in O(|A|), no dimension guard."""
    lo, hi = ps.planes()
    d = bulk.dots_with(lo, hi, x)
    counts = np.bincount(d, minlength=3)
    n0, n1, n2 = (int(c) for c in counts)
    return Eisenstein(n0 - n2, n1 - n2)


def subspace_weight(table: SpectrumTable, w: Subspace, skip_zero: bool = True) -> int:
    """Exact sum of coefficient norms over a subspace of frequencies."""
    total = 0
    for v in w.enumerate_points():
        if skip_zero and v.is_zero():
            continue
        total += table.norm_at(v.index)
    return total


_MAGIC = b"TCAPF3T1"


def save_table(table: SpectrumTable, fh: BinaryIO | str) -> None:
    """Binary dump: magic, n, then int64 p and q arrays, little endian."""
    if isinstance(fh, str):
        with open(fh, "wb") as real:
            save_table(table, real)
        return
    if table.p.dtype != np.int64:
        raise ValueError("object-precision tables have no binary form")
    fh.write(_MAGIC)
    fh.write(struct.pack("<iq", table.n, -1 if table.source_size is None else table.source_size))
    fh.write(table.p.astype("<i8").tobytes())
    fh.write(table.q.astype("<i8").tobytes())


def load_table(fh: BinaryIO | str) -> SpectrumTable:
    if isinstance(fh, str):
        with open(fh, "rb") as real:
            return load_table(real)
    magic = fh.read(8)
    if magic != _MAGIC:
        raise ValueError("not a coefficient table dump")
    n, source = struct.unpack("<iq", fh.read(12))
    count = 3**n
    raw = fh.read(8 * count * 2)
    if len(raw) != 8 * count * 2:
        raise ValueError("truncated coefficient table dump")
    p = np.frombuffer(raw[: 8 * count], dtype="<i8").astype(np.int64)
    q = np.frombuffer(raw[8 * count :], dtype="<i8").astype(np.int64)
    return SpectrumTable(n, p, q, None if source < 0 else source)
