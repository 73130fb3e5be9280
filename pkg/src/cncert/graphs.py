"""Digraphs, permutations, and the adjacency-polynomial codec.

Vertices of an n-vertex digraph are identified with the n-th roots of unity:
vertex k is w^k.  The adjacency polynomial of a 0/1 matrix M is

    M(x_0, x_1) = n^-2 * sum_{k0,k1} <w*^-k0, w*^-k1>_M  x_0^k0 x_1^k1

in the quotient by {x_0^n - 1, x_1^n - 1}; evaluating it at (w^i, w^j)
returns M[i][j] exactly, so the encoding round-trips.

The permutation interpolant p(x, r_0..r_{n-1}) is the Lagrange polynomial
through (w^k, r_k); plugging the permuted root vector r = P_sigma w turns it
into the relabeling map w^k -> w^sigma(k).  The Lagrange basis is built from
the closed form l_k(x) = n^-1 sum_j w^(-jk) x^j, which is already reduced;
its equality with the usual product form is unit-tested, not assumed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .cyclotomic import (
    CycVector,
    CyclotomicContext,
    CyclotomicNumber,
    cv_add,
    cv_is_zero,
    cv_mul,
    root_power,
)
from .polynomials import Polynomial, VariableSpace, variable_space
from .ratio import Q


class GraphFormatError(ValueError):
    """Raised on malformed graph input; carries a line number when known."""


@dataclass(frozen=True)
class Digraph:
    """n x n adjacency matrix with entries in {0, 1}; loops are allowed."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise GraphFormatError(f"adjacency matrix is not square: {len(r)} != {n}")
            for v in r:
                if v not in (0, 1):
                    raise GraphFormatError(f"adjacency entries must be 0 or 1, got {v}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, key) -> int:
        i, j = key
        return self.rows[i][j]

    def edges(self):
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if v:
                    yield (i, j)

    def edge_count(self) -> int:
        return sum(sum(r) for r in self.rows)

    def relabel(self, sigma: "Permutation") -> "Digraph":
        """The graph with entry [i][j] = self[sigma(i)][sigma(j)]."""
        img = sigma.image
        return Digraph(
            tuple(tuple(self.rows[img[i]][img[j]] for j in range(self.n)) for i in range(self.n))
        )

    # -- text / JSON codecs --------------------------------------------------

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines.extend(" ".join(str(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Digraph":
        lines = text.splitlines()
        meaningful = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
        if not meaningful:
            raise GraphFormatError("line 1: empty graph file")
        lineno, head = meaningful[0]
        try:
            n = int(head)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected the vertex count, got {head!r}") from None
        if n < 1:
            raise GraphFormatError(f"line {lineno}: vertex count must be positive")
        if len(meaningful) != n + 1:
            raise GraphFormatError(
                f"line {meaningful[-1][0]}: expected {n} matrix rows, found {len(meaningful) - 1}"
            )
        rows = []
        for lineno, line in meaningful[1:]:
            parts = line.split()
            if len(parts) != n:
                raise GraphFormatError(
                    f"line {lineno}: expected {n} entries, found {len(parts)}"
                )
            row = []
            for p in parts:
                if p not in ("0", "1"):
                    raise GraphFormatError(f"line {lineno}: entry {p!r} is not 0 or 1")
                row.append(int(p))
            rows.append(tuple(row))
        return cls(tuple(rows))

    def to_json_dict(self) -> dict:
        return {"adj": [list(r) for r in self.rows]}

    @classmethod
    def from_json_dict(cls, obj) -> "Digraph":
        if not isinstance(obj, dict) or "adj" not in obj:
            raise GraphFormatError('JSON graph must be an object with an "adj" field')
        adj = obj["adj"]
        if not isinstance(adj, list) or not adj:
            raise GraphFormatError('"adj" must be a non-empty list of rows')
        return cls(tuple(tuple(r) for r in adj))

    @classmethod
    def parse(cls, text: str) -> "Digraph":
        """Accepts either the line format or a JSON object with "adj"."""
        if text.lstrip().startswith("{"):
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise GraphFormatError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
            return cls.from_json_dict(obj)
        return cls.from_text(text)

    @classmethod
    def enumerate_all(cls, n: int):
        """All 2^(n^2) digraphs on n vertices, lexicographic by flattened rows."""
        for bits in itertools.product((0, 1), repeat=n * n):
            yield cls(tuple(bits[i * n : (i + 1) * n] for i in range(n)))

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def complete_with_loops(cls, n: int) -> "Digraph":
        return cls(tuple((1,) * n for _ in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Digraph":
        rows = [[0] * n for _ in range(n)]
        for i, j in edges:
            rows[i][j] = 1
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def cycle(cls, n: int) -> "Digraph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on {0..n-1} stored as its image tuple; sorts lexicographically."""

    image: tuple

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation image: {image}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, k: int) -> int:
        return self.image[k]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Function composition: (p * q)(k) = p(q(k))."""
        if self.n != other.n:
            raise ValueError("permutation sizes differ")
        return Permutation(tuple(self.image[other.image[k]] for k in range(self.n)))

    def inverse(self) -> "Permutation":
        img = [0] * self.n
        for k, v in enumerate(self.image):
            img[v] = k
        return Permutation(tuple(img))

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.image))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def all_of(cls, n: int):
        """All of S_n in lexicographic order of image tuples."""
        for image in itertools.permutations(range(n)):
            yield cls(image)

    def __repr__(self):
        return f"Permutation{self.image}"


class PermGroup:
    """A verified subgroup of S_n, elements sorted lexicographically."""

    __slots__ = ("elements", "n")

    def __init__(self, elements):
        elements = tuple(sorted(set(elements)))
        if not elements:
            raise ValueError("a permutation group cannot be empty")
        n = elements[0].n
        if any(p.n != n for p in elements):
            raise ValueError("group elements act on different sets")
        members = {p.image for p in elements}
        if Permutation.identity(n).image not in members:
            raise ValueError("group lacks the identity")
        for p in elements:
            if p.inverse().image not in members:
                raise ValueError(f"group lacks the inverse of {p}")
            for q in elements:
                if (p * q).image not in members:
                    raise ValueError(f"group is not closed: {p} * {q} escapes")
        self.elements = elements
        self.n = n

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return any(p.image == q.image for q in self.elements)

    def __iter__(self):
        return iter(self.elements)

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        return cls(tuple(Permutation.all_of(n)))

    @classmethod
    def trivial(cls, n: int) -> "PermGroup":
        return cls((Permutation.identity(n),))

    def __repr__(self):
        return f"PermGroup(order={self.order}, n={self.n})"


# ---------------------------------------------------------------------------
# spaces


def adjacency_space(n: int) -> VariableSpace:
    """x_0, x_1 with cyclic modulus n."""
    return variable_space(("x_0", "x_1"), (n, n))


def interpolant_space(n: int) -> VariableSpace:
    """x plus r_0..r_{n-1}, all with cyclic modulus n."""
    names = ("x",) + tuple(f"r_{k}" for k in range(n))
    return variable_space(names, (n,) * (n + 1))


# ---------------------------------------------------------------------------
# codecs


def encode_adjacency(graph: Digraph, ctx: CyclotomicContext) -> Polynomial:
    """The adjacency polynomial of the graph over Q(w_n)."""
    n = graph.n
    if ctx.order != n:
        raise ValueError(f"context order {ctx.order} does not match graph size {n}")
    space = adjacency_space(n)
    inv_n2 = Q(1) / (n * n)
    mapping = {}
    for k0 in range(n):
        for k1 in range(n):
            acc = CyclotomicNumber(ctx, ctx.zero_vec)
            for u, v in graph.edges():
                acc = acc + root_power(ctx, -(k0 * u + k1 * v))
            if not acc.is_zero():
                mapping[(k0, k1)] = acc * inv_n2
    return Polynomial.from_dict(space, ctx, mapping)


def decode_adjacency(poly: Polynomial, n: int) -> Digraph:
    """Grid evaluations of the polynomial at all (w^i, w^j); rejects non-0/1."""
    ctx = poly.ctx
    if ctx.order != n or poly.space != adjacency_space(n):
        raise ValueError("polynomial does not live in the adjacency ring of size n")
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            value = poly.evaluate((root_power(ctx, i), root_power(ctx, j)))
            if value == 1:
                row.append(1)
            elif value.is_zero():
                row.append(0)
            else:
                raise ValueError(
                    f"not an adjacency polynomial: value {value} at (w^{i}, w^{j})"
                )
        rows.append(tuple(row))
    return Digraph(tuple(rows))


def lagrange_basis(ctx: CyclotomicContext, k: int) -> Polynomial:
    """l_k over the nodes w^0..w^(n-1), by the closed DFT form (pre-reduced)."""
    n = ctx.order
    space = interpolant_space(n)
    inv_n = Q(1) / n
    mapping = {}
    for j in range(n):
        exps = [0] * (n + 1)
        exps[0] = j
        mapping[tuple(exps)] = root_power(ctx, -(j * k)) * inv_n
    return Polynomial.from_dict(space, ctx, mapping)


def lagrange_basis_product_form(ctx: CyclotomicContext, k: int) -> Polynomial:
    """l_k built literally as prod_{s != k} (x - w^s) / (w^k - w^s)."""
    n = ctx.order
    space = interpolant_space(n)
    num = Polynomial.constant(space, ctx, 1)
    x = Polynomial.variable(space, ctx, "x")
    den = CyclotomicNumber.from_rational(ctx, 1)
    for s in range(n):
        if s == k:
            continue
        num = num * (x - root_power(ctx, s))
        den = den * (root_power(ctx, k) - root_power(ctx, s))
    return num.scale(den.invert())


def permutation_interpolant(ctx: CyclotomicContext) -> Polynomial:
    """p(x, r) = sum_k r_k * l_k(x): sends node w^k to the symbolic value r_k."""
    n = ctx.order
    space = interpolant_space(n)
    result = Polynomial.zero(space, ctx)
    for k in range(n):
        r_k = Polynomial.variable(space, ctx, f"r_{k}")
        result = result + r_k * lagrange_basis(ctx, k)
    return result


def perm_vector(sigma: Permutation, ctx: CyclotomicContext) -> CycVector:
    """P_sigma w: entry k is w^sigma(k)."""
    if sigma.n != ctx.order:
        raise ValueError(f"permutation size {sigma.n} does not match order {ctx.order}")
    return CycVector(tuple(root_power(ctx, sigma(k)) for k in range(ctx.order)))


def vector_to_perm(vec: CycVector) -> Permutation:
    """Recover sigma from a vector of distinct n-th roots of unity."""
    ctx = vec.ctx
    if len(vec) != ctx.order:
        raise ValueError(f"vector length {len(vec)} does not match order {ctx.order}")
    image = []
    for entry in vec:
        k = ctx.root_index(entry.coeffs)
        if k is None:
            raise ValueError(f"entry {entry} is not an n-th root of unity")
        image.append(k)
    if len(set(image)) != len(image):
        raise ValueError("vector entries repeat; not a permuted root vector")
    return Permutation(tuple(image))


def power_sum_check(vec: CycVector) -> bool:
    """Exactly the permuted root vectors pass: sum r_j^t = 0 for 0 < t < n and
    sum r_j^n = n."""
    n = len(vec)
    ctx = vec.ctx
    rows, d = ctx.reduction_rows, ctx.degree
    powers = [ctx.one_vec] * n
    for t in range(1, n + 1):
        powers = [cv_mul(cur, base.coeffs, rows, d) for cur, base in zip(powers, vec)]
        acc = ctx.zero_vec
        for cur in powers:
            acc = cv_add(acc, cur)
        if t < n:
            if not cv_is_zero(acc):
                return False
        elif acc != CyclotomicNumber.from_rational(ctx, n).coeffs:
            return False
    return True
