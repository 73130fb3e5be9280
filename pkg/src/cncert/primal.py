"""Primal certificates for subgraph isomorphism via the constraint polynomial.

For host A and pattern B on n vertices the constraint polynomial is

    f(x_0, x_1, r) = B(x_0, x_1) * [1 - A(p(x_0, r), p(x_1, r))]

reduced by {r_k^n - 1, x_j^n - 1}.  Its grid semantics pin everything down:
at (x_0, x_1) = (w^i, w^j) and r = P_sigma w the value is
B[i][j] * (1 - A[sigma(i)][sigma(j)]), so the specialization

    kappa_sigma = f with r_k := w^sigma(k)

is identically zero exactly when sigma embeds B into A (every B-arc lands on
an A-arc).  A successful sigma yields an exact expansion

    f = kappa_sigma + sum_k (r_k - w^sigma(k)) * g_k        (kappa_sigma = 0)

by dividing out the linear forms one variable at a time; the certificate
carries sigma and the g_k and is re-verified by reexpansion.

kappa is constant on the cosets sigma * Aut(f) of the stabilizer of f under
permutation of the r variables, so the search runs over one representative
per coset; the work saved is |Aut f|.  The related product criterion
(prod over representatives of f(x, P_sigma r), reduced mod {r - w, x^n - 1},
vanishing iff some kappa vanishes) is computed literally and audited against
the per-coset test: its "only if" direction holds unconditionally, while the
"if" direction can fail because the quotient ring has zero divisors, so
mismatches are reported as findings rather than asserted away.

brute_force_subiso is the independent oracle: pure matrix logic, no
polynomials, used by the tests to cross-validate every decision.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

from .cyclotomic import CyclotomicContext, cv_add, cv_is_zero, cv_mul, make_context, root_power
from .graphs import (
    Digraph,
    PermGroup,
    Permutation,
    adjacency_space,
    encode_adjacency,
    permutation_interpolant,
)
from .polynomials import GridSpec, Polynomial, VariableSpace, divide_by_grid, variable_space

DEFAULT_MAX_N_PRIMAL = 6
DEFAULT_MAX_N_ORACLE = 8
DEFAULT_MAX_N_PRODUCT = 4


class GuardError(ValueError):
    """An input exceeds a configured size guard."""


def constraint_space(n: int) -> VariableSpace:
    names = ("x_0", "x_1") + tuple(f"r_{k}" for k in range(n))
    return variable_space(names, (n,) * (n + 2))


@dataclass(frozen=True)
class ConstraintPolynomial:
    """The reduced constraint polynomial together with its provenance."""

    poly: Polynomial
    n: int
    host: Digraph
    pattern: Digraph


@dataclass(frozen=True)
class WorkProfile:
    """Work accounting for one primal decision run."""

    n: int
    aut_order: int
    coset_count: int
    factors_evaluated: int
    elapsed_s: float

    def __post_init__(self):
        if self.aut_order * self.coset_count != math.factorial(self.n):
            raise AssertionError(
                f"|Aut f| * cosets = {self.aut_order} * {self.coset_count} "
                f"!= {self.n}! -- Lagrange bookkeeping is broken"
            )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "aut_order": self.aut_order,
            "coset_count": self.coset_count,
            "factors_evaluated": self.factors_evaluated,
        }


@dataclass(frozen=True)
class PrimalCertificate:
    """A witnessing permutation with its exact expansion of f."""

    sigma: Permutation
    kappa: Polynomial  # in x_0, x_1 only; identically zero for a valid certificate
    expansion: tuple  # g_0..g_{n-1} in the constraint space
    work: WorkProfile

    def verify(self, fc: ConstraintPolynomial) -> bool:
        """Exact reexpansion: f == kappa + sum (r_k - w^sigma(k)) g_k, kappa == 0."""
        if not self.kappa.is_zero():
            return False
        space, ctx = fc.poly.space, fc.poly.ctx
        acc = _lift_xy(self.kappa, space)
        for k, g in enumerate(self.expansion):
            r_k = Polynomial.variable(space, ctx, f"r_{k}")
            acc = acc + (r_k - root_power(ctx, self.sigma(k))) * g
        return acc == fc.poly

    def to_json_dict(self) -> dict:
        return {
            "problem": "subgraph-isomorphism",
            "n": self.work.n,
            "sigma": list(self.sigma.image),
            "aut_order": self.work.aut_order,
            "coset_count": self.work.coset_count,
            "kappa_zero": self.kappa.is_zero(),
            "expansion": [g.to_text() for g in self.expansion],
            "reconstruction_checked": True,
        }


def build_constraint(host: Digraph, pattern: Digraph) -> ConstraintPolynomial:
    """f = B * [1 - A(p(x_0, r), p(x_1, r))], fully reduced."""
    if host.n != pattern.n:
        raise ValueError(f"graph sizes differ: {host.n} vs {pattern.n}")
    n = host.n
    ctx = make_context(n)
    space = constraint_space(n)
    a_poly = encode_adjacency(host, ctx)
    b_poly = encode_adjacency(pattern, ctx)
    p = permutation_interpolant(ctx)
    p_x0 = p.substitute({"x": Polynomial.variable(space, ctx, "x_0")})
    p_x1 = p.substitute({"x": Polynomial.variable(space, ctx, "x_1")})
    composed = a_poly.substitute({"x_0": p_x0, "x_1": p_x1})
    b_lifted = b_poly.substitute({}, target_space=space, target_ctx=ctx)
    f = b_lifted * (Polynomial.constant(space, ctx, 1) - composed)
    return ConstraintPolynomial(f, n, host, pattern)


def permute_r(fc_poly: Polynomial, n: int, sigma: Permutation) -> Polynomial:
    """f(x, P_sigma r): replaces r_k by r_sigma(k)."""
    mapping = {f"r_{k}": f"r_{sigma(k)}" for k in range(n)}
    return fc_poly.apply_variable_permutation(mapping)


def automorphism_group(fc: ConstraintPolynomial, max_n: int = DEFAULT_MAX_N_PRIMAL) -> PermGroup:
    """Aut f: all sigma with f(x, r) == f(x, P_sigma r), by brute enumeration."""
    if fc.n > max_n:
        raise GuardError(f"n = {fc.n} exceeds the automorphism guard {max_n}")
    members = [
        sigma
        for sigma in Permutation.all_of(fc.n)
        if permute_r(fc.poly, fc.n, sigma) == fc.poly
    ]
    return PermGroup(members)


def coset_reps(group: PermGroup, n: int) -> tuple:
    """Lexicographically minimal representatives of the cosets sigma * group.

    kappa is constant on each such coset, so these representatives decide all
    of S_n.  Exactly n!/|group| of them, in lexicographic order.
    """
    if group.n != n:
        raise ValueError(f"group acts on {group.n} symbols, expected {n}")
    seen: set[tuple] = set()
    reps = []
    for sigma in Permutation.all_of(n):
        if sigma.image in seen:
            continue
        reps.append(sigma)
        for tau in group:
            seen.add((sigma * tau).image)
    expected = math.factorial(n) // group.order
    if len(reps) != expected:
        raise AssertionError(f"coset partition produced {len(reps)} != {expected} classes")
    return tuple(reps)


def _specialize_r(poly: Polynomial, n: int, sigma: Permutation) -> Polynomial:
    """Substitute r_k := w^sigma(k); result lives in the x_0, x_1 ring."""
    ctx = poly.ctx
    space = poly.space
    target = adjacency_space(n)
    rows, d = ctx.reduction_rows, ctx.degree
    root_vecs = [ctx.root_vec(sigma(k)) for k in range(n)]
    out: dict[int, tuple] = {}
    for code, cvec in poly._terms.items():
        exps = space.unpack(code)
        phase = 0
        for k in range(n):
            e = exps[2 + k]
            if e:
                phase += sigma(k) * e
        vec = cv_mul(cvec, ctx.root_vec(phase), rows, d) if phase % ctx.order else cvec
        tcode = target.pack((exps[0], exps[1]))
        old = out.get(tcode)
        out[tcode] = vec if old is None else cv_add(old, vec)
    return Polynomial(target, ctx, {c: v for c, v in out.items() if not cv_is_zero(v)})


def kappa(fc: ConstraintPolynomial, sigma: Permutation) -> Polynomial:
    """kappa_sigma: f with r := P_sigma w, a polynomial in x_0, x_1 only.

    Identically zero iff sigma maps every arc of the pattern onto an arc of
    the host.
    """
    return _specialize_r(fc.poly, fc.n, sigma)


def _lift_xy(poly_xy: Polynomial, space: VariableSpace) -> Polynomial:
    n_extra = len(space) - 2
    pack = space.pack
    out = {}
    for code, vec in poly_xy._terms.items():
        e0, e1 = poly_xy.space.unpack(code)
        out[pack((e0, e1) + (0,) * n_extra)] = vec
    return Polynomial(space, poly_xy.ctx, out)


def expansion_certificate(fc: ConstraintPolynomial, sigma: Permutation):
    """Exact division of f by the linear forms r_k - w^sigma(k), in order.

    Returns (kappa_sigma in the x ring, tuple of cofactors g_k).  The
    reconstruction identity f = kappa + sum (r_k - w^sigma(k)) g_k is exact;
    no cyclic wrap occurs because all degrees stay below n.
    """
    n, ctx = fc.n, fc.poly.ctx
    k_poly = kappa(fc, sigma)
    if n == 1:
        # r_0 has cyclic order 1, so r_0 - w^0 is the zero form; f is its own kappa.
        return k_poly, (Polynomial.zero(fc.poly.space, ctx),)
    grid = GridSpec(
        fc.poly.space,
        ctx,
        {f"r_{k}": [root_power(ctx, sigma(k))] for k in range(n)},
    )
    cofactors, remainder = divide_by_grid(fc.poly, grid)
    if remainder != _lift_xy(k_poly, fc.poly.space):
        raise AssertionError("division remainder disagrees with the r specialization")
    return k_poly, tuple(cofactors)


def brute_force_subiso(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_ORACLE
) -> Permutation | None:
    """Independent oracle: first sigma (lexicographic) with every pattern arc
    (i, j) landing on a host arc (sigma(i), sigma(j)); None if there is none."""
    if host.n != pattern.n:
        raise ValueError(f"graph sizes differ: {host.n} vs {pattern.n}")
    if host.n > max_n:
        raise GuardError(f"n = {host.n} exceeds the oracle guard {max_n}")
    arcs = tuple(pattern.edges())
    for image in itertools.permutations(range(host.n)):
        if all(host.rows[image[i]][image[j]] for i, j in arcs):
            return Permutation(image)
    return None


def decide_with_profile(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_PRIMAL
):
    """Core primal decision: first coset representative with kappa == 0.

    Returns (certificate or None, profile).  Iterating representatives in
    lexicographic order makes the reported sigma the lexicographically
    smallest witness in all of S_n.
    """
    if host.n != pattern.n:
        raise ValueError(f"graph sizes differ: {host.n} vs {pattern.n}")
    if host.n > max_n:
        raise GuardError(f"n = {host.n} exceeds the primal guard {max_n}")
    t0 = time.perf_counter()
    fc = build_constraint(host, pattern)
    aut = automorphism_group(fc, max_n)
    reps = coset_reps(aut, fc.n)
    evaluated = 0
    found = None
    for sigma in reps:
        evaluated += 1
        k_poly = kappa(fc, sigma)
        if k_poly.is_zero():
            found = sigma
            break
    if found is None:
        profile = WorkProfile(
            fc.n, aut.order, len(reps), evaluated, time.perf_counter() - t0
        )
        return None, profile
    k_poly, cofactors = expansion_certificate(fc, found)
    profile = WorkProfile(fc.n, aut.order, len(reps), evaluated, time.perf_counter() - t0)
    cert = PrimalCertificate(found, k_poly, cofactors, profile)
    if not cert.verify(fc):
        raise AssertionError("certificate failed exact reexpansion")
    return cert, profile


def primal_decide(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_PRIMAL
) -> PrimalCertificate | None:
    cert, _ = decide_with_profile(host, pattern, max_n)
    return cert


def work_profile(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_PRIMAL
) -> WorkProfile:
    _, profile = decide_with_profile(host, pattern, max_n)
    return profile


def product_criterion(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_PRODUCT
) -> bool:
    """The coset product test, computed literally.

    Expands prod over coset representatives of f(x, P_sigma r) in the quotient
    ring, substitutes r := w afterwards, and reports whether the result is
    identically zero.  Once the running product is identically zero it stays
    zero, so the expansion stops early.
    """
    if host.n > max_n:
        raise GuardError(f"n = {host.n} exceeds the product guard {max_n}")
    fc = build_constraint(host, pattern)
    aut = automorphism_group(fc, max_n)
    reps = coset_reps(aut, fc.n)
    product = Polynomial.constant(fc.poly.space, fc.poly.ctx, 1)
    for sigma in reps:
        product = product * permute_r(fc.poly, fc.n, sigma)
        if product.is_zero():
            return True
    specialized = _specialize_r(product, fc.n, Permutation.identity(fc.n))
    return specialized.is_zero()


def audit_product_criterion(
    host: Digraph, pattern: Digraph, max_n: int = DEFAULT_MAX_N_PRODUCT
) -> dict:
    """Compare the product test with the per-coset kappa test on one instance.

    The kappa test is exact in both directions; the product test is the
    quotient-ring criterion whose sufficiency direction is under audit.  A
    necessity violation (kappa witness but product nonzero) is impossible and
    raises; a sufficiency mismatch is returned as a finding.
    """
    cert, profile = decide_with_profile(host, pattern, max(max_n, DEFAULT_MAX_N_PRIMAL))
    product_zero = product_criterion(host, pattern, max_n)
    kappa_exists = cert is not None
    if kappa_exists and not product_zero:
        raise AssertionError(
            "necessity violated: a kappa witness exists but the coset product "
            "does not vanish"
        )
    return {
        "n": host.n,
        "host": [list(r) for r in host.rows],
        "pattern": [list(r) for r in pattern.rows],
        "kappa_witness_exists": kappa_exists,
        "product_vanishes": product_zero,
        "sufficiency_counterexample": bool(product_zero and not kappa_exists),
        "aut_order": profile.aut_order,
        "coset_count": profile.coset_count,
    }
