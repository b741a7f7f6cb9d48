"""Odometer towers: Z^d translation on the finite quotients Z^d / M^i Z^d.

An expanding integer matrix M (all eigenvalues outside the unit circle,
which forces |det M| >= 2) defines a tower of finite coset spaces
Omega_i = Z^d / M^i Z^d of order |det M|^i.  Z^d acts on each level by
translation, levels are connected by the canonical projections, and a
nonzero vector leaves M^i Z^d at some finite level (the escape level).

Each level stores a Smith decomposition of M^i, so cosets get canonical
residue coordinates and membership tests are exact integer arithmetic.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .abelian import BudgetExceeded, IntMatrix, _snf_full


class SingularMatrixError(ValueError):
    """Raised when a tower or check needs an invertible matrix."""


POWER_ITERATIONS = 200
GROWTH_TOLERANCE = 1e-6


@dataclass(frozen=True)
class LevelPoint:
    """A coset of M^level Z^d in canonical residue coordinates."""

    level: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class _Level:
    power: IntMatrix          # M^level
    diag: tuple[int, ...]     # invariant factors of M^level, all positive
    u: IntMatrix
    uinv: IntMatrix
    order: int


class OdometerTower:
    """Lazy tower of quotients Z^d / M^i Z^d for one matrix M.

    Levels are computed on demand and cached; access is serialized by a
    lock so towers can be shared between threads.
    """

    def __init__(self, matrix: IntMatrix):
        if matrix.nrows != matrix.ncols or matrix.nrows < 1:
            raise ValueError("tower matrix must be square and nonempty")
        det = matrix.det()
        if det == 0:
            raise SingularMatrixError("tower matrix is singular")
        if abs(det) < 2:
            raise ValueError(
                f"|det| = {abs(det)} < 2, quotients would not grow")
        self.dim = matrix.nrows
        self.matrix = matrix
        self.det = det
        self._levels: dict[int, _Level] = {}
        self._powers: dict[int, IntMatrix] = {0: IntMatrix.identity(self.dim)}
        self._lock = threading.Lock()

    def _power(self, i: int) -> IntMatrix:
        top = max(self._powers)
        while top < i:
            self._powers[top + 1] = self.matrix.mul(self._powers[top])
            top += 1
        return self._powers[i]

    def level(self, i: int) -> _Level:
        if i < 0:
            raise ValueError("level must be non-negative")
        with self._lock:
            cached = self._levels.get(i)
            if cached is not None:
                return cached
            power = self._power(i)
            u, d, _, uinv, _ = _snf_full(power)
            diag = tuple(d.entry(t, t) for t in range(self.dim))
            if any(x <= 0 for x in diag):
                raise SingularMatrixError(f"M^{i} lost rank")
            order = 1
            for x in diag:
                order *= x
            lvl = _Level(power=power, diag=diag, u=u, uinv=uinv, order=order)
            self._levels[i] = lvl
            return lvl

    def reduce(self, i: int, vec) -> LevelPoint:
        """Canonical coordinates of the coset of ``vec`` at level i."""
        lvl = self.level(i)
        w = lvl.u.mul_vec(vec)
        return LevelPoint(i, tuple(x % dd for x, dd in zip(w, lvl.diag)))

    def zero_point(self, i: int) -> LevelPoint:
        return LevelPoint(i, (0,) * self.dim)

    def contains(self, i: int, vec) -> bool:
        """Whether ``vec`` lies in M^i Z^d."""
        lvl = self.level(i)
        w = lvl.u.mul_vec(vec)
        return all(x % dd == 0 for x, dd in zip(w, lvl.diag))


def level_order(tower: OdometerTower, i: int) -> int:
    """|det M|^i, verified against the residue count from the level data."""
    lvl = tower.level(i)
    expected = abs(tower.det) ** i
    if lvl.order != expected:
        raise AssertionError(
            f"level {i} order {lvl.order} != |det|^i = {expected}")
    return lvl.order


def act(tower: OdometerTower, gamma, point: LevelPoint) -> LevelPoint:
    """Translate a level point by the ambient vector ``gamma``."""
    lvl = tower.level(point.level)
    shift = lvl.u.mul_vec(gamma)
    coords = tuple((c + s) % dd
                   for c, s, dd in zip(point.coords, shift, lvl.diag))
    return LevelPoint(point.level, coords)


def project(tower: OdometerTower, point: LevelPoint) -> LevelPoint:
    """The canonical map from level i + 1 to level i (i >= 0)."""
    if point.level < 1:
        raise ValueError("already at the bottom level")
    lvl = tower.level(point.level)
    vec = lvl.uinv.mul_vec(point.coords)
    return tower.reduce(point.level - 1, vec)


def is_transitive(tower: OdometerTower, i: int, budget: int = 1_000_000) -> bool:
    """Whether the translation action reaches every coset at level i.

    Breadth-first search from zero along the d unit translations; raises
    :class:`BudgetExceeded` if the level has more cosets than ``budget``.
    """
    order = level_order(tower, i)
    if order > budget:
        raise BudgetExceeded(f"level {i} has {order} cosets, budget {budget}")
    d = tower.dim
    units = [tuple(1 if k == j else 0 for k in range(d)) for j in range(d)]
    start = tower.zero_point(i)
    seen = {start.coords}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for e in units:
                q = act(tower, e, p)
                if q.coords not in seen:
                    seen.add(q.coords)
                    nxt.append(q)
        frontier = nxt
    return len(seen) == order


def escape_level(tower: OdometerTower, gamma, max_i: int) -> int | None:
    """Smallest i <= max_i with gamma outside M^i Z^d, or None if not found."""
    gamma = tuple(int(x) for x in gamma)
    if all(x == 0 for x in gamma):
        raise ValueError("gamma must be nonzero")
    if max_i < 1:
        raise ValueError("max_i must be positive")
    for i in range(1, max_i + 1):
        if not tower.contains(i, gamma):
            return i
    return None


def _exact_inverse(matrix: IntMatrix) -> list[list[Fraction]]:
    det = matrix.det()
    if det == 0:
        raise SingularMatrixError("matrix is singular")
    n = matrix.nrows
    if n == 1:
        return [[Fraction(1, det)]]
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = IntMatrix(tuple(
                tuple(matrix.entry(r, c) for c in range(n) if c != i)
                for r in range(n) if r != j))
            row.append(Fraction((-1) ** (i + j) * minor.det(), det))
        adj.append(row)
    return adj


def expanding_check(matrix: IntMatrix) -> bool | None:
    """Decide whether all eigenvalues of ``matrix`` lie outside the unit circle.

    Exact necessary condition first: |det| >= 2 (|det| <= 1 is a definite
    no).  The sufficient test runs power iteration on the exact inverse for
    ``POWER_ITERATIONS`` steps and declares expanding when the implied
    minimal growth factor of M exceeds 1 + ``GROWTH_TOLERANCE``; anything
    closer to the unit circle comes back None (inconclusive).
    """
    if matrix.nrows != matrix.ncols or matrix.nrows < 1:
        raise ValueError("matrix must be square and nonempty")
    det = matrix.det()
    if det == 0:
        raise SingularMatrixError("matrix is singular")
    if abs(det) == 1:
        # product of |eigenvalues| is 1, so not all can exceed 1
        return False
    inv = [[float(x) for x in row] for row in _exact_inverse(matrix)]
    n = matrix.nrows
    # Power-iterate every basis direction so no eigenspace of the inverse
    # is missed; only the post-burn-in steps enter the growth estimate.
    burn_in = POWER_ITERATIONS // 2
    rho_inv = 0.0
    for j in range(n):
        v = [1.0 if k == j else 0.0 for k in range(n)]
        log_growth = 0.0
        for step in range(POWER_ITERATIONS):
            w = [sum(inv[i][k] * v[k] for k in range(n)) for i in range(n)]
            norm = math.sqrt(sum(x * x for x in w))
            if norm == 0.0:
                return None
            if step >= burn_in:
                log_growth += math.log(norm)
            v = [x / norm for x in w]
        rho_inv = max(rho_inv,
                      math.exp(log_growth / (POWER_ITERATIONS - burn_in)))
    if rho_inv <= 0.0:
        return None
    growth = 1.0 / rho_inv
    if growth >= 1.0 + GROWTH_TOLERANCE:
        return True
    return None
