"""Exact arithmetic in the cyclotomic field Q(w_n), w_n = exp(2*pi*i/n).

An element is stored as its canonical residue modulo the n-th cyclotomic
polynomial: a tuple of phi(n) rationals, low degree first.  Canonical form is
unique, so equality and zero tests are plain coefficient comparisons and no
floating point is ever consulted for a decision.

The module also carries the small exact linear algebra used by the graph
encodings: vectors/matrices of cyclotomic numbers, the DFT matrix, entrywise
(Hadamard) products and powers, and the bilinear form <a, b>_M.

Internally coefficient vectors are bare tuples of rationals; the cv_* helpers
operate on those and are shared with the polynomial layer so its hot loops can
skip attribute access.  CyclotomicNumber is the boxed public value.
"""

from __future__ import annotations

import cmath
import threading
from dataclasses import dataclass

from .ratio import Q, QONE, QZERO, is_rational, rational_text

# ---------------------------------------------------------------------------
# integer polynomials (dense, low degree first) for the cyclotomic minimal poly


def _int_poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials; raises if it does not divide."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        lead, dlead = num[-1], den[-1]
        if lead % dlead != 0:
            raise ArithmeticError("non-exact polynomial division")
        c = lead // dlead
        out[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        while num and num[-1] == 0:
            num.pop()
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


_cyclo_poly_memo: dict[int, tuple[int, ...]] = {}
_cyclo_lock = threading.Lock()


def cyclotomic_int_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low first.

    Computed by the divisor recursion: x^n - 1 divided by the product of the
    d-th cyclotomic polynomials over proper divisors d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic order must be a positive integer")
    got = _cyclo_poly_memo.get(n)
    if got is not None:
        return got
    with _cyclo_lock:
        return _cyclo_memo_nolock(n)


def _cyclo_memo_nolock(d: int) -> tuple[int, ...]:
    got = _cyclo_poly_memo.get(d)
    if got is not None:
        return got
    if d == 1:
        result = (-1, 1)
    else:
        num = [0] * d + [1]
        num[0] = -1
        den = [1]
        for e in range(1, d):
            if d % e == 0:
                den = _int_poly_mul(den, list(_cyclo_memo_nolock(e)))
        result = tuple(_int_poly_div_exact(num, den))
    _cyclo_poly_memo[d] = result
    return result


def _int_poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


# ---------------------------------------------------------------------------
# context


class CyclotomicContext:
    """Field data for Q(w_n): minimal polynomial, reduction rows, root table.

    Contexts are immutable and interned per order (see make_context), so two
    numbers share a context exactly when they were built for the same n.
    """

    __slots__ = (
        "order",
        "degree",
        "min_poly",
        "reduction_rows",
        "zero_vec",
        "one_vec",
        "_root_vecs",
        "_root_index",
    )

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("cyclotomic order must be a positive integer")
        self.order = order
        self.min_poly = cyclotomic_int_poly(order)
        d = len(self.min_poly) - 1
        self.degree = d
        # reduction_rows[s] expresses x^s mod Phi_n in the canonical basis as
        # sparse (index, integer) pairs, for s = 0 .. 2d-2 (Phi_n is monic).
        rows: list[tuple[tuple[int, int], ...]] = []
        dense: list[list[int]] = []
        for s in range(d):
            row = [0] * d
            row[s] = 1
            dense.append(row)
        for s in range(d, 2 * d - 1):
            prev = dense[s - 1]
            shifted = [0] + prev[:]
            lead = shifted.pop()  # coefficient of x^d
            row = [shifted[i] - lead * self.min_poly[i] for i in range(d)]
            dense.append(row)
        for row in dense:
            rows.append(tuple((i, c) for i, c in enumerate(row) if c))
        self.reduction_rows = tuple(rows)
        self.zero_vec = (QZERO,) * d
        self.one_vec = (QONE,) + (QZERO,) * (d - 1)
        # canonical coefficient vectors of w^k for k = 0..n-1
        if d == 1:
            w = (Q(-self.min_poly[0]),)  # x = -c0 once Phi_n = x + c0 is monic linear
        else:
            w = (QZERO, QONE) + (QZERO,) * (d - 2)
        roots = []
        acc = self.one_vec
        for _ in range(order):
            roots.append(acc)
            acc = cv_mul(acc, w, self.reduction_rows, d)
        self._root_vecs = tuple(roots)
        self._root_index = {vec: k for k, vec in enumerate(roots)}

    def root_vec(self, k: int) -> tuple:
        return self._root_vecs[k % self.order]

    def root_index(self, vec: tuple) -> int | None:
        """Index k with vec == w^k, or None if vec is not a root of unity."""
        return self._root_index.get(vec)

    def __repr__(self):
        return f"CyclotomicContext(order={self.order})"


_context_memo: dict[int, CyclotomicContext] = {}
_context_lock = threading.Lock()


def make_context(n: int) -> CyclotomicContext:
    """Interned context for Q(w_n).  n = 0 is rejected."""
    ctx = _context_memo.get(n)
    if ctx is None:
        with _context_lock:
            ctx = _context_memo.get(n)
            if ctx is None:
                ctx = CyclotomicContext(n)
                _context_memo[n] = ctx
    return ctx


# ---------------------------------------------------------------------------
# raw coefficient-vector arithmetic (tuples of rationals, length ctx.degree)


def cv_is_zero(a: tuple) -> bool:
    return not any(a)


def cv_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def cv_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def cv_neg(a: tuple) -> tuple:
    return tuple(-x for x in a)


def cv_scale(a: tuple, s) -> tuple:
    return tuple(x * s for x in a)


def cv_mul(a: tuple, b: tuple, rows, d: int) -> tuple:
    """Product of two canonical vectors, reduced mod Phi_n."""
    if d == 1:
        return (a[0] * b[0],)
    acc = [QZERO] * d
    for i in range(d):
        ai = a[i]
        if not ai:
            continue
        for j in range(d):
            bj = b[j]
            if not bj:
                continue
            p = ai * bj
            s = i + j
            if s < d:
                acc[s] += p
            else:
                for idx, c in rows[s]:
                    if c == 1:
                        acc[idx] += p
                    elif c == -1:
                        acc[idx] -= p
                    else:
                        acc[idx] += c * p
    return tuple(acc)


def cv_pow(a: tuple, k: int, rows, d: int, one: tuple) -> tuple:
    if k < 0:
        raise ValueError("cv_pow expects a non-negative exponent")
    out = one
    base = a
    while k:
        if k & 1:
            out = cv_mul(out, base, rows, d)
        base_needed = k >> 1
        if base_needed:
            base = cv_mul(base, base, rows, d)
        k = base_needed
    return out


def _cv_invert(a: tuple, ctx: CyclotomicContext) -> tuple:
    """Inverse via extended Euclid on Q[x] against the minimal polynomial."""
    if cv_is_zero(a):
        raise ZeroDivisionError("inverse of the zero cyclotomic number")
    modulus = [Q(c) for c in ctx.min_poly]
    r0, r1 = modulus, _trimmed(list(a))
    s0, s1 = [QZERO], [QONE]
    while True:
        if len(r1) == 1:
            inv = QONE / r1[0]
            vec = [c * inv for c in s1]
            vec.extend([QZERO] * (ctx.degree - len(vec)))
            return tuple(vec[: ctx.degree])
        q, rem = _q_poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _q_poly_sub(s0, _q_poly_mul(q, s1))
        if not r1:
            raise ArithmeticError("minimal polynomial is not irreducible?")


def _trimmed(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _q_poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    q = [QZERO] * max(1, len(num) - len(den) + 1)
    inv_lead = QONE / den[-1]
    while len(num) >= len(den):
        c = num[-1] * inv_lead
        shift = len(num) - len(den)
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
        _trimmed(num)
    return _trimmed(q), num


def _q_poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [QZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trimmed(out)


def _q_poly_sub(a: list, b: list) -> list:
    out = [QZERO] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trimmed(out)


def cv_conj(a: tuple, ctx: CyclotomicContext) -> tuple:
    """Complex conjugation: the field automorphism w -> w^(n-1)."""
    d = ctx.degree
    acc = ctx.zero_vec
    for k in range(d):
        c = a[k]
        if c:
            acc = cv_add(acc, cv_scale(ctx.root_vec((-k) % ctx.order), c))
    return acc


def cv_text(a: tuple) -> str:
    """Canonical text: a rational, or a sum of rational multiples of w^k."""
    parts = []
    for k, c in enumerate(a):
        if not c:
            continue
        if k == 0:
            parts.append((rational_text(c), c < 0))
        else:
            mono = "w" if k == 1 else f"w^{k}"
            if c == 1:
                parts.append((mono, False))
            elif c == -1:
                parts.append(("-" + mono, True))
            else:
                text = rational_text(abs(c)) + "*" + mono
                parts.append((("-" + text) if c < 0 else text, c < 0))
    if not parts:
        return "0"
    out = parts[0][0]
    for text, neg in parts[1:]:
        out += (" - " + text[1:]) if neg else (" + " + text)
    return out


# ---------------------------------------------------------------------------
# boxed field element


class CyclotomicNumber:
    """An element of Q(w_n) in canonical reduced form.  Immutable."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CyclotomicContext, coeffs):
        coeffs = tuple(Q(c) for c in coeffs)
        if len(coeffs) != ctx.degree:
            raise ValueError(
                f"need {ctx.degree} coefficients for order {ctx.order}, got {len(coeffs)}"
            )
        self.ctx = ctx
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, ctx: CyclotomicContext, value) -> "CyclotomicNumber":
        vec = [Q(value)] + [QZERO] * (ctx.degree - 1)
        return cls(ctx, vec)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return cv_is_zero(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.ctx is not self.ctx:
                raise ValueError("cyclotomic numbers from different contexts")
            return other
        if is_rational(other):
            return CyclotomicNumber.from_rational(self.ctx, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(self.ctx, cv_add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(self.ctx, cv_sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(self.ctx, cv_sub(other.coeffs, self.coeffs))

    def __neg__(self):
        return CyclotomicNumber(self.ctx, cv_neg(self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(
            self.ctx,
            cv_mul(self.coeffs, other.coeffs, self.ctx.reduction_rows, self.ctx.degree),
        )

    __rmul__ = __mul__

    def invert(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.ctx, _cv_invert(self.coeffs, self.ctx))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        ctx = self.ctx
        return CyclotomicNumber(
            ctx, cv_pow(self.coeffs, k, ctx.reduction_rows, ctx.degree, ctx.one_vec)
        )

    def conjugate(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.ctx, cv_conj(self.coeffs, self.ctx))

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.ctx is other.ctx and self.coeffs == other.coeffs
        if is_rational(other):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.order, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    # -- rendering -----------------------------------------------------------

    def to_complex(self) -> complex:
        """Float embedding with w = exp(2*pi*i/n).  Diagnostic only; never
        used for equality or zero decisions."""
        w = cmath.exp(2j * cmath.pi / self.ctx.order)
        return sum(float(c) * w**k for k, c in enumerate(self.coeffs))

    def __str__(self):
        return cv_text(self.coeffs)

    def __repr__(self):
        return f"Cyc({self.ctx.order}; {self})"


def root_power(ctx: CyclotomicContext, k: int) -> CyclotomicNumber:
    """w_n^k as a canonical field element (k is reduced mod n)."""
    return CyclotomicNumber(ctx, ctx.root_vec(k))


# ---------------------------------------------------------------------------
# exact vectors and matrices


def _shared_ctx(entries) -> CyclotomicContext:
    ctx = None
    for e in entries:
        if ctx is None:
            ctx = e.ctx
        elif e.ctx is not ctx:
            raise ValueError("entries mix cyclotomic contexts")
    if ctx is None:
        raise ValueError("empty collection has no context")
    return ctx


@dataclass(frozen=True)
class CycVector:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        _shared_ctx(self.entries)

    @property
    def ctx(self) -> CyclotomicContext:
        return self.entries[0].ctx

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k) -> CyclotomicNumber:
        return self.entries[k]

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class CycMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        width = {len(r) for r in rows}
        if len(width) > 1:
            raise ValueError("ragged matrix")
        _shared_ctx([e for r in rows for e in r])

    @property
    def ctx(self) -> CyclotomicContext:
        return self.rows[0][0].ctx

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]))

    def __getitem__(self, key) -> CyclotomicNumber:
        i, j = key
        return self.rows[i][j]

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        n, m = self.shape
        m2, p = other.shape
        if m != m2:
            raise ValueError(f"matrix shapes {self.shape} x {other.shape} do not conform")
        out = []
        for i in range(n):
            row = []
            for j in range(p):
                acc = CyclotomicNumber.from_rational(self.ctx, 0)
                for k in range(m):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(tuple(row))
        return CycMatrix(tuple(out))

    def dagger(self) -> "CycMatrix":
        """Conjugate transpose."""
        n, m = self.shape
        return CycMatrix(
            tuple(tuple(self.rows[i][j].conjugate() for i in range(n)) for j in range(m))
        )

    @classmethod
    def scaled_identity(cls, ctx: CyclotomicContext, n: int, value) -> "CycMatrix":
        v = CyclotomicNumber.from_rational(ctx, value)
        z = CyclotomicNumber.from_rational(ctx, 0)
        return cls(tuple(tuple(v if i == j else z for j in range(n)) for i in range(n)))


def dft_matrix(ctx: CyclotomicContext) -> CycMatrix:
    """The order-n DFT matrix W with entries w^(u*v); satisfies W W^dagger = n I."""
    n = ctx.order
    return CycMatrix(
        tuple(tuple(root_power(ctx, u * v) for v in range(n)) for u in range(n))
    )


def root_vector(ctx: CyclotomicContext) -> CycVector:
    """The vector (w^k) for k = 0..n-1 (column 1 of the DFT matrix)."""
    return CycVector(tuple(root_power(ctx, k) for k in range(ctx.order)))


def bilinear_form(a: CycVector, m: CycMatrix | None, b: CycVector) -> CyclotomicNumber:
    """<a, b>_M = sum a_k0 M[k0,k1] b_k1; M = None means the identity."""
    if m is None:
        if len(a) != len(b):
            raise ValueError(f"vector lengths {len(a)} and {len(b)} differ")
        acc = CyclotomicNumber.from_rational(a.ctx, 0)
        for x, y in zip(a, b):
            acc = acc + x * y
        return acc
    rows, cols = m.shape
    if len(a) != rows or len(b) != cols:
        raise ValueError(f"dimensions {len(a)}, {m.shape}, {len(b)} do not conform")
    acc = CyclotomicNumber.from_rational(a.ctx, 0)
    for k0 in range(rows):
        ak = a[k0]
        if ak.is_zero():
            continue
        for k1 in range(cols):
            mk = m[k0, k1]
            if mk.is_zero():
                continue
            acc = acc + ak * mk * b[k1]
    return acc


def hadamard(a: CycVector, b: CycVector) -> CycVector:
    """Entrywise product."""
    if len(a) != len(b):
        raise ValueError(f"vector lengths {len(a)} and {len(b)} differ")
    return CycVector(tuple(x * y for x, y in zip(a, b)))


def hadamard_power(a: CycVector, alpha: int) -> CycVector:
    """Entrywise power; negative alpha inverts entrywise."""
    return CycVector(tuple(x**alpha for x in a))
