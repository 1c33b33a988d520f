"""Translation operators of a finite group and the algebras they generate.

With counting measure as the invariant measure, left and right translation
act as 0/1 permutation matrices, the span of the left translations is an
algebra of dimension |G|, and the commutant of the right translations (an
exact rational nullspace computation) recovers the same span. Away from
exponent 2 the invertible isometries inside such a span are generalized
permutation matrices with unimodular entries, enumerated here by a support
pattern search.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetError, NotGroupLike, P2Unsupported, POutOfRange
from .groups import FiniteGroup, generating_sequence
from .isometry import LpContext, Operator
from .measure import FiniteMeasureAlgebra

ENUM_NODE_BUDGET = 200_000
ENUM_TOL = 1e-9


@dataclass(frozen=True)
class ConvolutionContext:
    """A finite group acting on itself, with counting measure and an exponent."""

    group: FiniteGroup
    p: float

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise POutOfRange("convolution contexts need p strictly between 1 and infinity")

    @property
    def weights(self) -> tuple[float, ...]:
        return (1.0,) * self.group.order

    def lp_context(self) -> LpContext:
        return LpContext(FiniteMeasureAlgebra(self.weights), self.p)


def left_regular(ctx: ConvolutionContext, s: int) -> Operator:
    """Left translation: (L_s xi)(x) = xi(s^-1 x), a permutation matrix."""
    g = ctx.group
    n = g.order
    if not 0 <= s < n:
        raise ValueError("element index out of range")
    m = np.zeros((n, n), dtype=complex)
    for y in range(n):
        m[g.mul(s, y), y] = 1.0
    return Operator(ctx.lp_context(), m)


def right_regular(ctx: ConvolutionContext, s: int) -> Operator:
    """Right translation: (R_s xi)(x) = xi(x s), a permutation matrix."""
    g = ctx.group
    n = g.order
    if not 0 <= s < n:
        raise ValueError("element index out of range")
    m = np.zeros((n, n), dtype=complex)
    for x in range(n):
        m[x, g.mul(x, s)] = 1.0
    return Operator(ctx.lp_context(), m)


@dataclass(frozen=True)
class AlgebraBasis:
    """Linearly independent matrices whose span is unital and closed under products."""

    n: int
    p: float
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("basis must be nonempty")
        frozen = []
        for m in self.elements:
            a = np.array(m, dtype=complex)
            if a.shape != (self.n, self.n):
                raise ValueError(f"basis matrices must be {self.n} x {self.n}")
            a.setflags(write=False)
            frozen.append(a)
        object.__setattr__(self, "elements", tuple(frozen))
        v = self._stack()
        s = np.linalg.svd(v, compute_uv=False)
        if s[-1] <= 1e-9 * s[0]:
            raise ValueError("basis matrices are linearly dependent")
        if self.coordinates(np.eye(self.n)) is None:
            raise ValueError("the span must contain the identity")
        k = len(frozen)
        products = np.stack([(frozen[i] @ frozen[j]).reshape(-1)
                             for i in range(k) for j in range(k)])
        coeff, *_ = np.linalg.lstsq(v.T, products.T, rcond=None)
        err = float(np.max(np.abs(v.T @ coeff - products.T)))
        if err >= 1e-9:
            raise ValueError(f"basis is not closed under products (residual {err:.3e})")

    def _stack(self) -> np.ndarray:
        return np.stack([a.reshape(-1) for a in self.elements])

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def coordinates(self, x, tol: float = 1e-9) -> np.ndarray | None:
        """Least-squares coordinates of x in the span, or None if outside it."""
        v = self._stack()
        target = np.asarray(x, dtype=complex).reshape(-1)
        coeff, *_ = np.linalg.lstsq(v.T, target, rcond=None)
        resid = float(np.max(np.abs(v.T @ coeff - target)))
        if resid >= tol * max(1.0, float(np.max(np.abs(target)))):
            return None
        return coeff


def algebra_membership(basis: AlgebraBasis, x, tol: float = 1e-9) -> np.ndarray | None:
    """Coordinates of a matrix (or Operator) in the span, or None."""
    if isinstance(x, Operator):
        x = x.matrix
    return basis.coordinates(x, tol=tol)


def pseudofunction_algebra(ctx: ConvolutionContext) -> AlgebraBasis:
    """The span of the left translations; dimension equals the group order."""
    mats = tuple(left_regular(ctx, s).matrix for s in range(ctx.group.order))
    return AlgebraBasis(ctx.group.order, ctx.p, mats)


def _rational_rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [row[:] for row in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1, 1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _rational_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    rref, pivots = _rational_rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -rref[r][f]
        basis.append(vec)
    return basis


@functools.lru_cache(maxsize=64)
def convolver_basis_exact(group: FiniteGroup) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
    """Exact rational basis of the commutant of the right translations.

    Solves X R_t = R_t X over a generating set; since the constraints have
    integer entries the nullspace is computed over the rationals, with no
    rank tolerance. Returned as row-major nested tuples of Fractions.
    """
    n = group.order
    gens = generating_sequence(group) or [group.identity]
    rows: list[list[Fraction]] = []
    seen = set()
    for t in gens:
        t_inv = group.inv(t)
        for x in range(n):
            xt = group.mul(x, t)
            for y in range(n):
                a = x * n + group.mul(y, t_inv)
                b = xt * n + y
                if a == b:
                    continue
                key = (min(a, b), max(a, b))
                if key in seen:
                    continue
                seen.add(key)
                row = [Fraction(0)] * (n * n)
                row[a] = Fraction(1)
                row[b] = Fraction(-1)
                rows.append(row)
    null = _rational_nullspace(rows, n * n)
    return tuple(tuple(tuple(vec[x * n:(x + 1) * n]) for x in range(n)) for vec in null)


def convolver_algebra(ctx: ConvolutionContext) -> AlgebraBasis:
    """The commutant of the right translations as a concrete basis.

    Computed by the exact rational nullspace; the resulting dimension is
    the group order and the span coincides with the left translations.
    """
    exact = convolver_basis_exact(ctx.group)
    n = ctx.group.order
    if len(exact) != n:
        raise AssertionError(f"commutant dimension {len(exact)} != group order {n}")
    mats = tuple(np.array([[float(v) for v in row] for row in mat], dtype=complex)
                 for mat in exact)
    return AlgebraBasis(n, ctx.p, mats)


@dataclass(frozen=True)
class PhasedPermutation:
    """A generalized permutation matrix class: perm[y] is the supported row
    of column y and phases[y] the entry there, stored modulo a global
    unimodular scalar (canonical representatives have phases[0] = 1).
    phase_dim counts the free phase parameters of the class beyond the
    global scalar; 0 means an isolated class."""

    perm: tuple[int, ...]
    phases: tuple[complex, ...]
    phase_dim: int = 0

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.phases) != n:
            raise ValueError("perm must be a permutation with one phase per column")
        object.__setattr__(self, "phases", tuple(complex(z) for z in self.phases))

    def compose(self, other: PhasedPermutation) -> PhasedPermutation:
        """Matrix product self @ other, as a class representative."""
        perm = tuple(self.perm[y] for y in other.perm)
        phases = tuple(self.phases[other.perm[y]] * other.phases[y]
                       for y in range(len(self.perm)))
        return PhasedPermutation(perm, phases,
                                 max(self.phase_dim, other.phase_dim))

    def inverse(self) -> PhasedPermutation:
        n = len(self.perm)
        inv = [0] * n
        for y, x in enumerate(self.perm):
            inv[x] = y
        phases = tuple(1.0 / self.phases[inv[y]] for y in range(n))
        return PhasedPermutation(tuple(inv), phases, self.phase_dim)

    def same_class(self, other: PhasedPermutation, tol: float = ENUM_TOL) -> bool:
        """Equal permutation parts and phases matching up to a global scalar."""
        if self.perm != other.perm:
            return False
        ratios = [a / b for a, b in zip(self.phases, other.phases)]
        return max(abs(r - ratios[0]) for r in ratios) <= tol

    def as_matrix(self) -> np.ndarray:
        n = len(self.perm)
        m = np.zeros((n, n), dtype=complex)
        for y in range(n):
            m[self.perm[y], y] = self.phases[y]
        return m


def _left_nullspace(a: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal rows c with c @ a = 0."""
    u, s, _ = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol))
    return u[:, rank:].conj().T


def unitary_group_enumerate(basis: AlgebraBasis, p: float, *,
                            node_budget: int = ENUM_NODE_BUDGET,
                            tol: float = ENUM_TOL) -> tuple[PhasedPermutation, ...]:
    """All invertible-isometry classes inside the span, modulo global phase.

    Away from exponent 2 the invertible isometries of an unweighted atom
    space are exactly the generalized permutation matrices with unimodular
    entries, so the search walks support patterns column by column while
    restricting the span to matrices vanishing off the pattern. A pattern
    whose feasible slice is one-dimensional yields at most one class; a
    slice of full dimension n yields the whole phase torus (reported with
    phase_dim = n - 1); an intermediate dimension would not produce a
    discrete class set and raises NotGroupLike.
    """
    if p == 2.0:
        raise P2Unsupported(
            "at p = 2 the isometry group is strictly larger than the "
            "generalized permutations; enumeration refuses")
    if not (1.0 < p < math.inf):
        raise POutOfRange("enumeration needs p strictly between 1 and infinity")
    n = basis.n
    if n > 64:
        raise BudgetError("pattern search capped at 64 atoms")

    v = basis._stack()
    _, s, vh = np.linalg.svd(v, full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    b0 = vh[:rank]  # orthonormal rows spanning the same space
    col_index = [[x * n + y for x in range(n)] for y in range(n)]
    found: list[PhasedPermutation] = []
    nodes = 0

    def finalize(c, pattern):
        d = c.shape[0]
        coords = np.stack([c @ b0[:, pattern[y] * n + y] for y in range(n)], axis=1)
        if d == 1:
            vec = coords[0]
            moduli = np.abs(vec)
            if moduli.min() <= tol:
                return
            if (moduli.max() - moduli.min()) / moduli.max() > tol:
                return
            phases = vec / moduli
            phases = phases / phases[0]
            found.append(PhasedPermutation(tuple(pattern), tuple(phases), 0))
        elif d == n:
            found.append(PhasedPermutation(tuple(pattern), (1.0 + 0j,) * n, n - 1))
        else:
            raise NotGroupLike(
                f"a support pattern carries a {d}-parameter phase family "
                "strictly between a scalar line and the full torus")

    def descend(c, y, used, pattern):
        nonlocal nodes
        if y == n:
            finalize(c, pattern)
            return
        acol = c @ b0[:, col_index[y]]  # coordinates of column y on the slice
        for x in range(n):
            if used[x]:
                continue
            nodes += 1
            if nodes > node_budget:
                raise BudgetError("pattern search exceeded its node budget")
            others = np.delete(acol, x, axis=1)
            nmat = _left_nullspace(others, tol)
            if nmat.shape[0] == 0:
                continue
            if np.max(np.abs(nmat @ acol[:, x])) <= tol:
                continue
            used[x] = True
            pattern.append(x)
            descend(nmat @ c, y + 1, used, pattern)
            used[x] = False
            pattern.pop()

    descend(np.eye(b0.shape[0], dtype=complex), 0, [False] * n, [])
    identity = tuple(range(n))
    return tuple(sorted(found, key=lambda u: (u.perm != identity, u.perm)))
