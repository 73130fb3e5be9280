"""Generic grid certificates: vanishing expansions and nonzero witnesses.

Two dual facts about a polynomial f and a product grid S_0 x ... x S_{n-1}:

- If f vanishes on the whole grid it is a combination sum h_i * g_i of the
  grid polynomials g_i = prod_{s in S_i} (x_i - s), with deg h_i <= deg f -
  deg g_i.  Division by the g_i produces the h_i and a remainder; the
  remainder is identically zero exactly when f vanishes on the grid.

- If f has a nonzero coefficient on a monomial x^t that is maximal in its
  support (classically: with total degree equal to deg f) and |S_i| > t_i,
  then f is nonzero somewhere on the grid.  The witness search is exhaustive
  in lexicographic order, so outputs are reproducible; by the theorem the
  search cannot come back empty, and an empty search is reported as an
  internal soundness failure rather than a result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cyclotomic import CyclotomicNumber, cv_add, cv_is_zero, cv_mul, cv_pow
from .polynomials import (
    GridEvaluator,
    GridSpec,
    Polynomial,
    divide_by_grid,
    grid_polynomial,
    support_maximal,
)

DEFAULT_GRID_GUARD = 10**6


class PreconditionError(ValueError):
    """The inputs do not satisfy the theorem's hypotheses."""


class SoundnessError(RuntimeError):
    """An internal invariant that the theorems guarantee failed to hold."""


@dataclass(frozen=True)
class ExpansionCertificate:
    """f = sum cofactors[i] * g_i + remainder, exactly."""

    grid: GridSpec
    cofactors: tuple
    remainder: Polynomial
    division_order: tuple[str, ...]

    def reconstructs(self, f: Polynomial) -> bool:
        acc = self.remainder
        for name, h in zip(self.division_order, self.cofactors):
            acc = acc + h * grid_polynomial(self.grid, name)
        return acc == f

    def degree_bounds_hold(self, f: Polynomial) -> bool:
        """deg h_i <= deg f - deg g_i for every nonzero cofactor."""
        for name, h in zip(self.division_order, self.cofactors):
            if h.is_zero():
                continue
            if h.total_degree() > f.total_degree() - len(self.grid.set_for(name)):
                return False
        return True

    def vanishes(self) -> bool:
        return self.remainder.is_zero()

    def to_json_dict(self) -> dict:
        return {
            "kind": "grid-expansion",
            "division_order": list(self.division_order),
            "cofactors": [h.to_text() for h in self.cofactors],
            "remainder": self.remainder.to_text(),
            "vanishes": self.remainder.is_zero(),
        }


@dataclass(frozen=True)
class GridWitness:
    """A grid point together with the nonzero value of f there."""

    point: tuple
    value: CyclotomicNumber

    def to_json_dict(self) -> dict:
        return {
            "kind": "grid-witness",
            "point": [str(v) for v in self.point],
            "value": str(self.value),
        }


def vanishing_certificate(
    f: Polynomial, grid: GridSpec, check_bound: int = DEFAULT_GRID_GUARD
) -> ExpansionCertificate:
    """Divide f by the grid polynomials and cross-check the vanishing claim.

    When the grid has at most check_bound points, the equivalence "remainder
    is zero iff f vanishes on every grid point" is verified exhaustively; a
    mismatch would be a soundness bug and raises.
    """
    cofactors, remainder = divide_by_grid(f, grid)
    cert = ExpansionCertificate(grid, tuple(cofactors), remainder, grid.names)
    if grid.point_count() <= check_bound:
        vanishes = _vanishes_on_grid(f, grid)
        if vanishes != remainder.is_zero():
            raise SoundnessError(
                "grid division remainder disagrees with exhaustive evaluation"
            )
    return cert


def _vanishes_on_grid(f: Polynomial, grid: GridSpec) -> bool:
    # Variables of f outside the grid keep their symbolic role: f vanishes on
    # the grid iff every partial evaluation (of the canonical representative)
    # is the zero polynomial in the leftover variables.
    for point in grid.points():
        if not _partial_eval(f, grid.names, point).is_zero():
            return False
    return True


def _partial_eval(f: Polynomial, names, point) -> Polynomial:
    """Plug scalar values into some variables of the canonical representative."""
    ctx = f.ctx
    rows, d, one = ctx.reduction_rows, ctx.degree, ctx.one_vec
    idxs = {f.space.index(name): value.coeffs for name, value in zip(names, point)}
    unpack, pack = f.space.unpack, f.space.pack
    out: dict[int, tuple] = {}
    for code, cvec in f._terms.items():
        exps = unpack(code)
        scalar = cvec
        rest = list(exps)
        for i, vec in idxs.items():
            e = exps[i]
            if e:
                scalar = cv_mul(scalar, cv_pow(vec, e, rows, d, one), rows, d)
            rest[i] = 0
        key = pack(tuple(rest))
        old = out.get(key)
        out[key] = scalar if old is None else cv_add(old, scalar)
    return Polynomial(f.space, ctx, {c: v for c, v in out.items() if not cv_is_zero(v)})


def _search_witness(f: Polynomial, grid: GridSpec, point_guard, allow_large) -> GridWitness:
    total = grid.point_count()
    if total > point_guard and not allow_large:
        raise PreconditionError(
            f"grid has {total} points, above the guard of {point_guard}; "
            "pass allow_large=True to search anyway"
        )
    evaluator = GridEvaluator(f, grid.names, grid.sets)
    for idx in itertools.product(*(range(len(s)) for s in grid.sets)):
        vec = evaluator.value_at(idx)
        if any(vec):
            point = tuple(grid.sets[i][j] for i, j in enumerate(idx))
            return GridWitness(point, CyclotomicNumber(f.ctx, vec))
    raise SoundnessError(
        "no nonzero point found although the hypotheses guarantee one exists"
    )


def nonzero_witness(
    f: Polynomial,
    t,
    grid: GridSpec,
    point_guard: int = DEFAULT_GRID_GUARD,
    allow_large: bool = False,
) -> GridWitness:
    """Classical form: x^t has nonzero coefficient, total degree of f is sum(t),
    and |S_i| > t_i.  Returns the lexicographically first nonzero grid point."""
    t = f.space.canonical_exponents(t)
    if f.coefficient(t).is_zero():
        raise PreconditionError(f"coefficient of x^{t} is zero")
    if f.total_degree() != sum(t):
        raise PreconditionError(
            f"total degree {f.total_degree()} differs from sum(t) = {sum(t)}"
        )
    _check_grid_sizes(f, t, grid)
    return _search_witness(f, grid, point_guard, allow_large)


def maximal_support_witness(
    f: Polynomial,
    t,
    grid: GridSpec,
    point_guard: int = DEFAULT_GRID_GUARD,
    allow_large: bool = False,
) -> GridWitness:
    """Relaxed form: x^t only needs to be maximal in the support of f."""
    t = f.space.canonical_exponents(t)
    if not support_maximal(f, t):
        raise PreconditionError(f"exponent {t} is not maximal in the support of f")
    _check_grid_sizes(f, t, grid)
    return _search_witness(f, grid, point_guard, allow_large)


def _check_grid_sizes(f: Polynomial, t, grid: GridSpec):
    if set(grid.names) != set(f.space.names):
        raise PreconditionError("the grid must provide a value set for every variable")
    for name, ti in zip(f.space.names, t):
        if len(grid.set_for(name)) <= ti:
            raise PreconditionError(
                f"|S| = {len(grid.set_for(name))} for {name!r} must exceed t = {ti}"
            )
