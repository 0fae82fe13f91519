"""The degree-zero functional phi on the rank-r Hall algebra of P^1.

phi is pinned down by phi(O^r) = 1 and the exchange relations
phi(E o F) = phi(F o E) u^{rk E} t^{-deg E} for negative E.  Three routes:

* :func:`phi_solve_linear` solves the exchange relations directly;
* :func:`phi_partial_sum` runs the recursion over the sums A_{n,k};
* :func:`phi_product_rhs` expands the closed infinite product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .hall import BundleClass, HallElement, _partitions, hall_mul
from .ratfunc import Poly, RationalFunction
from .scalar import ONE, Q, ZERO, Scalar
from .series import TruncatedSeries

__all__ = [
    "PhiRelation",
    "PhiTable",
    "PhiError",
    "WindowTooSmall",
    "InconsistentSystem",
    "HeineGaussResult",
    "degree_zero_classes",
    "phi_relations",
    "phi_solve_linear",
    "phi_partial_sum",
    "phi_product_rhs",
    "heine_gauss_verify",
]


class PhiError(ArithmeticError):
    pass


class WindowTooSmall(PhiError):
    pass


class InconsistentSystem(PhiError):
    pass


def _classes(rank: int, degree: int, lo: int) -> list[BundleClass]:
    """All classes of the given rank and degree with every summand >= lo."""
    if rank == 0:
        return [BundleClass(())] if degree == 0 else []
    excess = degree - rank * lo
    if excess < 0:
        return []
    return [BundleClass(tuple(lo + x for x in p)) for p in _partitions(excess, rank)]


def degree_zero_classes(r: int, depth: int) -> list[BundleClass]:
    """P^0_depth: rank r, degree 0, smallest summand >= -depth."""
    return sorted(_classes(r, 0, -depth))


@dataclass(frozen=True)
class PhiRelation:
    neg: BundleClass  # E, every summand negative
    rest: BundleClass  # F

    def __post_init__(self):
        if not self.neg.degrees or self.neg.mx >= 0:
            raise PhiError(f"{self.neg} is not negative")


def phi_relations(r: int, window: int) -> list[PhiRelation]:
    """Exchange relations whose products stay inside P^0_window."""
    out = []
    for rk_e in range(1, r):
        for e_cls in _negative_classes(rk_e, window):
            for f_cls in _classes(r - rk_e, -e_cls.degree, -window):
                out.append(PhiRelation(e_cls, f_cls))
    return out


def _negative_classes(rank: int, window: int) -> list[BundleClass]:
    out = []
    for deg in range(-window * rank, -rank + 1):
        out.extend(c for c in _classes(rank, deg, -window) if c.mx < 0)
    return out


@dataclass
class PhiTable:
    r: int
    depth: int
    order: Fraction
    values: dict[BundleClass, TruncatedSeries]
    kernel_dim: int = 1
    relation_count: int = 0
    integral: bool = True
    window: int = 0
    extras: dict = field(default_factory=dict)

    def total(self, depth: int | None = None) -> TruncatedSeries:
        depth = self.depth if depth is None else depth
        out = TruncatedSeries.zero(self.order)
        for cls_, v in self.values.items():
            if cls_.mn >= -depth:
                out = out + v
        return out

    def block_sum(self, depth: int, k: int) -> TruncatedSeries:
        """Sum over classes with smallest summand -depth of multiplicity exactly k."""
        out = TruncatedSeries.zero(self.order)
        for cls_, v in self.values.items():
            if cls_.mn >= -depth and cls_.multiplicity(-depth) == k:
                out = out + v
        return out


# -- linear algebra over Scalar -------------------------------------------------


def _reduce(row: dict[int, Scalar], basis: dict[int, dict[int, Scalar]]) -> dict[int, Scalar]:
    """Eliminate pivots of an echelon basis (pivot column -> normalized row)."""
    row = dict(row)
    for col in sorted(basis):
        c = row.get(col)
        if c:
            for j, v in basis[col].items():
                row[j] = row.get(j, ZERO) - c * v
            row = {j: v for j, v in row.items() if v}
    return row


def _insert(row: dict[int, Scalar], basis: dict[int, dict[int, Scalar]]) -> bool:
    row = _reduce(row, basis)
    if not row:
        return False
    col = min(row)
    inv = row[col].inverse()
    row = {j: v * inv for j, v in row.items()}
    for other in basis.values():
        c = other.get(col)
        if c:
            for j, v in row.items():
                other[j] = other.get(j, ZERO) - c * v
            for j in [j for j, v in other.items() if not v]:
                del other[j]
    basis[col] = row
    return True


def _invert(matrix: list[list[Scalar]]) -> list[list[Scalar]]:
    n = len(matrix)
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise WindowTooSmall("pivot block is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                c = a[i][col]
                a[i] = [x - c * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


# -- the solver -------------------------------------------------------------------


def phi_solve_linear(r: int, depth: int, order, window: int | None = None) -> PhiTable:
    """Solve the exchange relations on P^0_window and report phi on P^0_depth."""
    if r < 1:
        raise PhiError("rank must be positive")
    order = Fraction(order)
    window = depth if window is None else window
    if window < depth:
        raise PhiError("window must contain the requested depth")
    unknowns = degree_zero_classes(r, window)
    index = {c: i for i, c in enumerate(unknowns)}
    trivial = BundleClass((0,) * r)
    t0 = index[trivial]
    relations = phi_relations(r, window)

    rows_c: list[dict[int, Scalar]] = []
    rows_d: list[tuple[dict[int, Scalar], int, int]] = []
    for rel in relations:
        ef = hall_mul(HallElement.basis(rel.neg), HallElement.basis(rel.rest))
        fe = hall_mul(HallElement.basis(rel.rest), HallElement.basis(rel.neg))
        rows_c.append({index[k]: v for k, v in ef.terms.items()})
        rows_d.append(({index[k]: v for k, v in fe.terms.items()}, rel.neg.rank, -rel.neg.degree))

    for row in rows_c:
        if t0 in row:
            raise InconsistentSystem("O^r appears in a product with a negative left factor")

    basis: dict[int, dict[int, Scalar]] = {}
    pivots = []
    for i, row in enumerate(rows_c):
        if _insert(row, basis):
            pivots.append(i)
        if len(basis) == len(unknowns) - 1:
            break
    kernel_dim = len(unknowns) - len(basis)
    if kernel_dim != 1:
        raise WindowTooSmall(f"solution space has dimension {kernel_dim} on window {window}")

    free = [j for j in range(len(unknowns)) if j != t0]
    block = [[rows_c[i].get(j, ZERO) for j in free] for i in pivots]
    inv = _invert(block)

    def shifted(row_d, rk, tdeg, phi):
        acc = TruncatedSeries.zero(order)
        for j, c in row_d.items():
            if not phi[j].is_zero():
                acc = acc + phi[j].scale(c)
        return acc.shift(tdeg, rk).truncate(order)

    phi = [TruncatedSeries.zero(order) for _ in unknowns]
    phi[t0] = TruncatedSeries.one(order)
    for _ in range(math.floor(order) + 1):
        rhs = [shifted(*rows_d[i], phi) for i in pivots]
        new = [TruncatedSeries.zero(order) for _ in unknowns]
        new[t0] = TruncatedSeries.one(order)
        for a, j in enumerate(free):
            acc = TruncatedSeries.zero(order)
            for b, c in enumerate(inv[a]):
                if c and not rhs[b].is_zero():
                    acc = acc + rhs[b].scale(c)
            new[j] = acc
        phi = new

    for row_c, (row_d, rk, tdeg) in zip(rows_c, rows_d):
        lhs = TruncatedSeries.zero(order)
        for j, c in row_c.items():
            lhs = lhs + phi[j].scale(c)
        if lhs != shifted(row_d, rk, tdeg, phi):
            raise InconsistentSystem("an exchange relation fails on the solution")

    integral = all(c.is_q_polynomial() for v in phi for c in v.coeffs.values())
    values = {cls_: phi[index[cls_]] for cls_ in degree_zero_classes(r, depth)}
    return PhiTable(
        r=r,
        depth=depth,
        order=order,
        values=values,
        kernel_dim=kernel_dim,
        relation_count=len(relations),
        integral=integral,
        window=window,
    )


# -- recursion and product ----------------------------------------------------------


def _ratio_scalar(r: int, k: int) -> Scalar:
    """q^{k-r}(q^{r-k}-1)(q^{r-k+1}-1)/(q^k-1): the z-free part of the A_{n,k} step."""
    return Scalar.q_power(k - r) * (Q ** (r - k) - ONE) * (Q ** (r - k + 1) - ONE) / (Q**k - ONE)


def phi_partial_sum(r: int, n: int, order, blocks: bool = False):
    """Sum of phi over P^0_n via the A_{n,k} recursion.

    With ``blocks=True`` also returns {k: phi(A_{n,k})} for the last level.
    """
    if r < 1 or n < 0:
        raise PhiError("phi_partial_sum needs r >= 1 and n >= 0")
    order = Fraction(order)
    total = TruncatedSeries.one(order)
    last = {0: total}
    for level in range(1, n + 1):
        # z = q^{level r} u t^level
        zq = Scalar.q_power(level * r)
        cur = {0: total}
        acc = total
        for k in range(1, r):
            step = TruncatedSeries.monomial(zq * _ratio_scalar(r, k), level, 1, order)
            step = step * TruncatedSeries.geometric(zq * Scalar.q_power(r - k), level, 1, order)
            cur[k] = (cur[k - 1] * step).truncate(order)
            acc = acc + cur[k]
        total = acc
        last = cur
    return (total, last) if blocks else total


def phi_product_rhs(r: int, order) -> TruncatedSeries:
    """prod_{k>=1} prod_{i=1}^{r-1} (1 - q^{rk-i} u t^k)/(1 - q^{rk+i} u t^k) through ``order``."""
    order = Fraction(order)
    out = TruncatedSeries.one(order)
    for k in range(1, math.floor(order) + 1):
        for i in range(1, r):
            num = TruncatedSeries(1, 0, {(0, 0): ONE, (k, 1): -Scalar.q_power(r * k - i)}, order)
            out = out * num * TruncatedSeries.geometric(Scalar.q_power(r * k + i), k, 1, order)
    return out


@dataclass(frozen=True)
class HeineGaussResult:
    r: int
    ok: bool
    witness: str = ""

    def __bool__(self):
        return self.ok


def heine_gauss_verify(r: int) -> HeineGaussResult:
    """Check the finite summation identity behind the A_{n,k} recursion as rational functions of z."""
    if r < 1:
        raise PhiError("heine_gauss_verify needs r >= 1")
    z = Poly.x()
    lhs = RationalFunction(ONE)
    term = RationalFunction(ONE)
    for k in range(1, r):
        term = term * RationalFunction(z * _ratio_scalar(r, k), Poly([ONE]) - z * Scalar.q_power(r - k))
        lhs = lhs + term
    rhs = RationalFunction(ONE)
    for j in range(1, r):
        rhs = rhs * RationalFunction(Poly([ONE]) - z * Scalar.q_power(-j), Poly([ONE]) - z * Scalar.q_power(j))
    if lhs == rhs:
        return HeineGaussResult(r, True)
    diff = lhs - rhs
    probe = Scalar(7)
    try:
        witness = f"at z=7 the sides differ by {diff(probe)}"
    except ZeroDivisionError:
        witness = "sides differ as rational functions"
    return HeineGaussResult(r, False, witness)
