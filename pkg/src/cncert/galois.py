"""Integral Galois resolvents: separating linear forms with small integer points.

Given rationals r_0..r_{n-1} with pairwise distinct entries, the resolvent

    f_r(x) = prod over permutation pairs mu < nu (lex) of
             (<r, P_mu x> - <r, P_nu x>)

is a product of C(n!, 2) nonzero linear forms, hence has exactly that total
degree.  A point s with f_r(s) != 0 makes all n! values <r, P_sigma s>
pairwise distinct, i.e. the stabilizer of the linear form <r, s> in S_n is
trivial; such a point exists already in the integer box {0..C(n!,2)}^n, and
the search walks that box lexicographically so the reported witness is
reproducible.  Coefficients stay plain rationals (cyclotomic order 1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .cyclotomic import CyclotomicNumber, make_context
from .graphs import PermGroup, Permutation
from .nullstellensatz import SoundnessError
from .polynomials import GridEvaluator, Polynomial, VariableSpace, variable_space
from .primal import GuardError
from .ratio import Q

DEFAULT_MAX_N_GALOIS = 3


def resolvent_space(n: int) -> VariableSpace:
    """x_0..x_{n-1}, unbounded exponents."""
    return variable_space(tuple(f"x_{i}" for i in range(n)))


@dataclass(frozen=True)
class ResolventInstance:
    r: tuple  # rationals, pairwise distinct
    n: int
    f_r: Polynomial
    factor_count: int  # C(n!, 2)


@dataclass(frozen=True)
class GaloisWitness:
    s: tuple[int, ...]
    values: tuple  # the n! inner products <r, P_sigma s>, in lex sigma order

    def to_json_dict(self) -> dict:
        from .ratio import rational_text

        return {
            "s": list(self.s),
            "values": [rational_text(v) for v in self.values],
            "stabilizer_order": 1,
        }


def linear_form(r, sigma: Permutation, space: VariableSpace, ctx) -> Polynomial:
    """<r, P_sigma x> = sum_k r_k * x_sigma(k)."""
    mapping = {}
    n = len(r)
    for k in range(n):
        exps = [0] * n
        exps[sigma(k)] = 1
        key = tuple(exps)
        mapping[key] = mapping.get(key, Q(0)) + r[k]
    return Polynomial.from_dict(space, ctx, mapping)


def build_galois_resolvent(
    r, max_n: int = DEFAULT_MAX_N_GALOIS
) -> ResolventInstance:
    """Expand the product of pairwise differences of the permuted linear forms."""
    r = tuple(Q(v) for v in r)
    n = len(r)
    if n < 1:
        raise ValueError("need at least one coordinate")
    if n > max_n:
        raise GuardError(
            f"n = {n} gives C({math.factorial(n)},2) factors, above the guard {max_n}"
        )
    for i in range(n):
        for j in range(i + 1, n):
            if r[i] == r[j]:
                raise ValueError(f"entries r_{i} and r_{j} coincide ({r[i]})")
    ctx = make_context(1)
    space = resolvent_space(n)
    forms = [linear_form(r, sigma, space, ctx) for sigma in Permutation.all_of(n)]
    f = Polynomial.constant(space, ctx, 1)
    count = 0
    for a, b in itertools.combinations(range(len(forms)), 2):
        f = f * (forms[a] - forms[b])
        count += 1
    expected = math.comb(math.factorial(n), 2)
    if count != expected:
        raise AssertionError(f"built {count} factors, expected {expected}")
    if n > 1 and f.total_degree() != expected:
        raise AssertionError(
            f"degree {f.total_degree()} != factor count {expected}: a factor collapsed"
        )
    return ResolventInstance(r, n, f, expected)


def form_values(r, s) -> tuple:
    """The n! inner products <r, P_sigma s> in lex order of sigma."""
    n = len(r)
    return tuple(
        sum((Q(r[k]) * s[sigma(k)] for k in range(n)), Q(0))
        for sigma in Permutation.all_of(n)
    )


def resolvent_witness(inst: ResolventInstance) -> GaloisWitness:
    """Lexicographic search of {0..C(n!,2)}^n for the first nonzero point."""
    bound = inst.factor_count
    box = list(range(bound + 1))
    evaluator = GridEvaluator(inst.f_r, inst.f_r.space.names, [box] * inst.n)
    for idx in itertools.product(range(len(box)), repeat=inst.n):
        if evaluator.is_nonzero_at(idx):
            s = tuple(box[i] for i in idx)
            values = form_values(inst.r, s)
            if len(set(values)) != len(values):
                raise SoundnessError(
                    "resolvent nonzero but the linear-form values collide"
                )
            return GaloisWitness(s, values)
    raise SoundnessError(
        "witness box exhausted although the resolvent bound guarantees a point"
    )


def stabilizer_of_form(r, s):
    """({sigma : <r, P_sigma s> = <r, s>}, all n! values pairwise distinct).

    The distinctness flag is equivalent to f_r(s) != 0.
    """
    r = tuple(Q(v) for v in r)
    s = tuple(s)
    if len(r) != len(s):
        raise ValueError(f"lengths differ: {len(r)} vs {len(s)}")
    values = form_values(r, s)
    base = values[0]  # identity is lexicographically first
    members = [
        sigma
        for sigma, value in zip(Permutation.all_of(len(r)), values)
        if value == base
    ]
    distinct = len(set(values)) == len(values)
    return PermGroup(members), distinct
