"""Dual (Alon--Tarsi style) non-existence construction for subgraph isomorphism.

For a pattern B, the forbidden family is one representative per isomorphism
class of digraphs that avoid B as a subgraph under every relabeling; the
representative is the lexicographically minimal adjacency matrix of its class.
The dual polynomial multiplies, over the adjacency polynomials C of the
family,

    f_B = prod_{i<j} (r_i - r_j) * prod_C [1 - A(x_0, x_1)] * C(p(x_0,r), p(x_1,r))

reduced by the cyclic ideals, with the empty product convention f_B = the
difference factor when the family is empty.  Identical vanishing of f_B is
read as a non-existence certificate for "B embeds into A"; whether vanishing
actually tracks non-existence is exactly the claim under test, so dual_decide
never asserts it: it reports f_B == 0 next to the brute-force answer and lets
the consistency table speak.  (If the family contains the arcless graph its
adjacency polynomial is zero and f_B collapses for every A; the reports make
that visible.)

The family enumeration is exhaustive (2^(n^2) matrices with n!-relabeling
dedup) and guarded at small n.  Containment checks may run on a process pool;
the member order is the sequential canonical order either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool

from .cyclotomic import make_context, root_power
from .graphs import Digraph, Permutation, encode_adjacency, permutation_interpolant
from .polynomials import Polynomial, variable_space
from .primal import GuardError, brute_force_subiso, constraint_space

DEFAULT_MAX_N_DUAL = 4


def canonical_form(graph: Digraph) -> tuple:
    """Lexicographically minimal flattened adjacency matrix over all relabelings."""
    n = graph.n
    best = None
    for sigma in Permutation.all_of(n):
        flat = tuple(
            graph.rows[sigma(i)][sigma(j)] for i in range(n) for j in range(n)
        )
        if best is None or flat < best:
            best = flat
    return best


def _avoids(args) -> bool:
    graph, pattern = args
    return brute_force_subiso(graph, pattern) is None


@dataclass(frozen=True)
class ForbiddenFamily:
    """Isomorphism-class representatives of the B-avoiding digraphs."""

    base: Digraph
    members: tuple

    @property
    def size(self) -> int:
        return len(self.members)


def enumerate_forbidden(
    pattern: Digraph, max_n: int = DEFAULT_MAX_N_DUAL, jobs: int = 1
) -> ForbiddenFamily:
    """All isomorphism classes of digraphs avoiding the pattern, canonical order."""
    n = pattern.n
    if n > max_n:
        raise GuardError(f"n = {n} exceeds the family enumeration guard {max_n}")
    graphs = list(Digraph.enumerate_all(n))
    if jobs > 1:
        with Pool(jobs) as pool:
            keep = pool.map(_avoids, [(g, pattern) for g in graphs], chunksize=64)
    else:
        keep = [_avoids((g, pattern)) for g in graphs]
    classes = {}
    for graph, ok in zip(graphs, keep):
        if not ok:
            continue
        form = canonical_form(graph)
        if form not in classes:
            classes[form] = form
    members = []
    for form in sorted(classes):
        rows = tuple(form[i * n : (i + 1) * n] for i in range(n))
        members.append(Digraph(rows))
    return ForbiddenFamily(pattern, tuple(members))


def forbidden_polys(family: ForbiddenFamily, ctx) -> tuple:
    """Adjacency polynomials of the family members, in member order."""
    if family.base.n != ctx.order:
        raise ValueError("context order does not match the family's vertex count")
    return tuple(encode_adjacency(member, ctx) for member in family.members)


def vandermonde_factor(ctx) -> Polynomial:
    """prod_{0 <= i < j < n} (r_i - r_j), reduced; nonzero exactly on vectors
    with pairwise distinct entries."""
    n = ctx.order
    space = constraint_space(n)
    out = Polynomial.constant(space, ctx, 1)
    for i in range(n):
        r_i = Polynomial.variable(space, ctx, f"r_{i}")
        for j in range(i + 1, n):
            r_j = Polynomial.variable(space, ctx, f"r_{j}")
            out = out * (r_i - r_j)
    return out


@dataclass(frozen=True)
class DualPolynomial:
    poly: Polynomial
    kind: str  # "subiso" or "iso"
    family_size: int

    def is_zero(self) -> bool:
        return self.poly.is_zero()


def _dual_pieces(host: Digraph, pattern: Digraph, max_n: int, jobs: int):
    if host.n != pattern.n:
        raise ValueError(f"graph sizes differ: {host.n} vs {pattern.n}")
    n = host.n
    ctx = make_context(n)
    space = constraint_space(n)
    family = enumerate_forbidden(pattern, max_n, jobs)
    p = permutation_interpolant(ctx)
    p_x0 = p.substitute({"x": Polynomial.variable(space, ctx, "x_0")})
    p_x1 = p.substitute({"x": Polynomial.variable(space, ctx, "x_1")})
    host_poly = encode_adjacency(host, ctx).substitute(
        {}, target_space=space, target_ctx=ctx
    )
    composed = [
        encode_adjacency(member, ctx).substitute({"x_0": p_x0, "x_1": p_x1})
        for member in family.members
    ]
    return family, space, ctx, host_poly, composed


def build_dual_subiso(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_DUAL, jobs: int = 1
) -> DualPolynomial:
    """f_B over the host's adjacency polynomial; empty family gives the
    difference factor alone."""
    family, space, ctx, host_poly, composed = _dual_pieces(host, pattern, max_n, jobs)
    one = Polynomial.constant(space, ctx, 1)
    out = vandermonde_factor(ctx)
    for c_poly in composed:
        out = out * ((one - host_poly) * c_poly)
        if out.is_zero():
            break
    return DualPolynomial(out, "subiso", family.size)


def build_dual_iso(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_DUAL, jobs: int = 1
) -> DualPolynomial:
    """Isomorphism variant: factors (1 - A) C(p, p) + (1 - C(p, p)) A."""
    family, space, ctx, host_poly, composed = _dual_pieces(host, pattern, max_n, jobs)
    one = Polynomial.constant(space, ctx, 1)
    out = vandermonde_factor(ctx)
    for c_poly in composed:
        factor = (one - host_poly) * c_poly + (one - c_poly) * host_poly
        out = out * factor
        if out.is_zero():
            break
    return DualPolynomial(out, "iso", family.size)


@dataclass(frozen=True)
class DualReport:
    n: int
    pattern: Digraph
    host: Digraph
    family_size: int
    f_b_is_zero: bool
    oracle_contains: bool

    @property
    def consistent(self) -> bool:
        """The construction's claim: f_B vanishes iff the pattern does not embed."""
        return self.f_b_is_zero == (not self.oracle_contains)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "pattern": self.pattern.to_json_dict(),
            "host": self.host.to_json_dict(),
            "family_size": self.family_size,
            "f_B_is_zero": self.f_b_is_zero,
            "oracle_contains": self.oracle_contains,
            "consistent": self.consistent,
        }


def dual_decide(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_DUAL, jobs: int = 1
) -> DualReport:
    """Build f_B, test identical vanishing, and record the oracle's answer."""
    dual = build_dual_subiso(host, pattern, max_n, jobs)
    contains = brute_force_subiso(host, pattern) is not None
    return DualReport(
        host.n, pattern, host, dual.family_size, dual.is_zero(), contains
    )


def family_invariants_hold(family: ForbiddenFamily) -> bool:
    """Exhaustive audit: members avoid B, are pairwise non-isomorphic, and
    cover every avoiding digraph exactly once."""
    n = family.base.n
    forms = [canonical_form(m) for m in family.members]
    if len(set(forms)) != len(forms):
        return False
    if any(brute_force_subiso(m, family.base) is not None for m in family.members):
        return False
    form_set = set(forms)
    for graph in Digraph.enumerate_all(n):
        avoiding = brute_force_subiso(graph, family.base) is None
        if avoiding != (canonical_form(graph) in form_set):
            return False
    return True
