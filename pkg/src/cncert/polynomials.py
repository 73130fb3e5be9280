"""Sparse multivariate polynomials over Q(w_n) with optional cyclic exponents.

A VariableSpace fixes an ordered set of variables, each either unbounded or
carrying a cyclic modulus m (the quotient by x^m - 1: exponents are stored in
0..m-1 and wrap during multiplication).  A Polynomial is a dict from a packed
exponent code to a canonical coefficient vector; no zero coefficients are ever
stored, so the zero polynomial is the empty dict and equality is dict
equality.

Exponent packing gives every variable a bit field wide enough to hold the sum
of two stored exponents, with variable 0 in the highest bits so that packed
codes sort in the same order as exponent tuples.  The multiply-accumulate
inner loop lives in termops (compiled kernel with pure fallback); everything
else here is ordinary Python over exact rationals.

Also here: Cartesian grids (GridSpec), multivariate division by the grid
polynomials prod(x_i - s), tensor-grid Lagrange interpolation, and the
canonical text codec for polynomials (round-trips bit-exactly).
"""

from __future__ import annotations

import itertools
import re
import threading

from . import termops
from .cyclotomic import (
    CyclotomicContext,
    CyclotomicNumber,
    cv_add,
    cv_is_zero,
    cv_mul,
    cv_neg,
    cv_scale,
    cv_sub,
    cv_text,
    _cv_invert,
)
from .ratio import Q, QONE, QZERO, is_rational, rational_text

_UNBOUNDED_BITS = 17
_UNBOUNDED_CAP = (1 << 16) - 1
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolynomialError(ValueError):
    pass


class SpaceMismatchError(PolynomialError):
    pass


class SubstitutionError(PolynomialError):
    pass


class GridError(PolynomialError):
    pass


class ParseError(PolynomialError):
    pass


class VariableSpace:
    """Ordered variables with per-variable optional cyclic modulus."""

    __slots__ = (
        "names",
        "moduli",
        "total_bits",
        "_index",
        "_shifts",
        "_masks",
        "_caps",
        "_pair_cache",
        "_sigs",
    )

    def __init__(self, names, moduli=None):
        names = tuple(names)
        if moduli is None:
            moduli = (None,) * len(names)
        else:
            moduli = tuple(moduli)
        if len(moduli) != len(names):
            raise PolynomialError("one modulus entry per variable required")
        if len(set(names)) != len(names):
            raise PolynomialError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.match(name) or name == "w":
                raise PolynomialError(f"invalid variable name {name!r} ('w' is reserved)")
        for m in moduli:
            if m is not None and (not isinstance(m, int) or m < 1):
                raise PolynomialError(f"modulus must be a positive integer, got {m!r}")
        self.names = names
        self.moduli = moduli
        self._index = {name: i for i, name in enumerate(names)}
        bits = []
        for m in moduli:
            if m is None:
                bits.append(_UNBOUNDED_BITS)
            elif m == 1:
                bits.append(1)
            else:
                bits.append(max(1, (2 * m - 2).bit_length()))
        total = sum(bits)
        shifts = []
        acc = total
        for b in bits:
            acc -= b
            shifts.append(acc)
        self.total_bits = total
        self._shifts = tuple(shifts)
        self._masks = tuple((1 << b) - 1 for b in bits)
        self._caps = tuple(
            _UNBOUNDED_CAP if m is None else m - 1 for m in moduli
        )
        self._pair_cache: dict[int, int] = {}
        self._sigs: dict[int, tuple] = {}

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolynomialError(f"unknown variable {name!r}") from None

    def modulus_of(self, name: str):
        return self.moduli[self.index(name)]

    def is_free(self) -> bool:
        """True when every variable is unbounded (no cyclic reduction)."""
        return all(m is None for m in self.moduli)

    def canonical_exponents(self, exps) -> tuple[int, ...]:
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise PolynomialError(
                f"expected {len(self.names)} exponents, got {len(exps)}"
            )
        out = []
        for e, m, cap in zip(exps, self.moduli, self._caps):
            if not isinstance(e, int) or e < 0:
                raise PolynomialError(f"exponents must be non-negative integers, got {e!r}")
            if m is not None:
                e %= m
            elif e > cap:
                raise OverflowError(f"exponent {e} exceeds storable range {cap}")
            out.append(e)
        return tuple(out)

    def pack(self, canonical_exps) -> int:
        code = 0
        for e, shift in zip(canonical_exps, self._shifts):
            code |= e << shift
        return code

    def unpack(self, code: int) -> tuple[int, ...]:
        return tuple(
            (code >> shift) & mask for shift, mask in zip(self._shifts, self._masks)
        )

    def kernel_sig(self, ctx: CyclotomicContext) -> tuple:
        sig = self._sigs.get(ctx.order)
        if sig is None:
            sig = (
                self.total_bits,
                len(self.names),
                self._shifts,
                self._masks,
                tuple(0 if m is None else m for m in self.moduli),
                self._caps,
                ctx.reduction_rows,
                ctx.degree,
            )
            self._sigs[ctx.order] = sig
        return sig

    def __eq__(self, other):
        if isinstance(other, VariableSpace):
            return self.names == other.names and self.moduli == other.moduli
        return NotImplemented

    def __hash__(self):
        return hash((self.names, self.moduli))

    def __repr__(self):
        decl = ", ".join(
            name if m is None else f"{name}%{m}"
            for name, m in zip(self.names, self.moduli)
        )
        return f"VariableSpace({decl})"


_space_memo: dict[tuple, VariableSpace] = {}
_space_lock = threading.Lock()


def variable_space(names, moduli=None) -> VariableSpace:
    """Interned VariableSpace (shared packing caches across callers)."""
    names = tuple(names)
    key = (names, tuple(moduli) if moduli is not None else None)
    space = _space_memo.get(key)
    if space is None:
        with _space_lock:
            space = _space_memo.get(key)
            if space is None:
                space = VariableSpace(names, moduli)
                _space_memo[key] = space
    return space


def _as_coeff_vec(ctx: CyclotomicContext, value):
    """Coefficient vector of a scalar (CyclotomicNumber or rational), or None."""
    if isinstance(value, CyclotomicNumber):
        if value.ctx is not ctx:
            raise SpaceMismatchError("coefficient from a different cyclotomic context")
        return value.coeffs
    if is_rational(value):
        return (Q(value),) + (QZERO,) * (ctx.degree - 1)
    return None


class Polynomial:
    """Immutable sparse polynomial with canonical terms."""

    __slots__ = ("space", "ctx", "_terms")

    def __init__(self, space: VariableSpace, ctx: CyclotomicContext, packed_terms: dict):
        self.space = space
        self.ctx = ctx
        self._terms = packed_terms

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, space, ctx) -> "Polynomial":
        return cls(space, ctx, {})

    @classmethod
    def constant(cls, space, ctx, value) -> "Polynomial":
        vec = _as_coeff_vec(ctx, value)
        if vec is None:
            raise PolynomialError(f"not a scalar: {value!r}")
        if cv_is_zero(vec):
            return cls(space, ctx, {})
        return cls(space, ctx, {0: vec})

    @classmethod
    def variable(cls, space, ctx, name: str, power: int = 1) -> "Polynomial":
        exps = [0] * len(space)
        exps[space.index(name)] = power
        return cls.from_dict(space, ctx, {tuple(exps): 1})

    @classmethod
    def from_dict(cls, space, ctx, mapping) -> "Polynomial":
        """Build from {exponent tuple: coefficient}; reduces and merges."""
        terms: dict[int, tuple] = {}
        for exps, value in mapping.items():
            vec = _as_coeff_vec(ctx, value)
            if vec is None:
                raise PolynomialError(f"not a scalar coefficient: {value!r}")
            code = space.pack(space.canonical_exponents(exps))
            old = terms.get(code)
            terms[code] = vec if old is None else cv_add(old, vec)
        return cls(space, ctx, {c: v for c, v in terms.items() if not cv_is_zero(v)})

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def term_count(self) -> int:
        return len(self._terms)

    def terms(self):
        """Terms as (exponent tuple, CyclotomicNumber), lexicographic order."""
        unpack = self.space.unpack
        for code in sorted(self._terms):
            yield unpack(code), CyclotomicNumber(self.ctx, self._terms[code])

    def support(self) -> tuple[tuple[int, ...], ...]:
        unpack = self.space.unpack
        return tuple(unpack(code) for code in sorted(self._terms))

    def coefficient(self, exps) -> CyclotomicNumber:
        code = self.space.pack(self.space.canonical_exponents(exps))
        vec = self._terms.get(code)
        if vec is None:
            return CyclotomicNumber(self.ctx, self.ctx.zero_vec)
        return CyclotomicNumber(self.ctx, vec)

    def constant_value(self) -> CyclotomicNumber:
        return self.coefficient((0,) * len(self.space))

    def total_degree(self) -> int:
        """Max term degree of the canonical form; -1 for the zero polynomial."""
        unpack = self.space.unpack
        return max((sum(unpack(c)) for c in self._terms), default=-1)

    def var_degrees(self) -> tuple[int, ...]:
        out = [0] * len(self.space)
        unpack = self.space.unpack
        for code in self._terms:
            for i, e in enumerate(unpack(code)):
                if e > out[i]:
                    out[i] = e
        return tuple(out)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self.space == other.space
                and self.ctx is other.ctx
                and self._terms == other._terms
            )
        return NotImplemented

    # -- ring operations ------------------------------------------------------

    def _check_same_ring(self, other: "Polynomial"):
        if self.space != other.space:
            raise SpaceMismatchError(
                f"polynomials live in different spaces: {self.space} vs {other.space}"
            )
        if self.ctx is not other.ctx:
            raise SpaceMismatchError("polynomials use different cyclotomic contexts")

    def _coerce_operand(self, other):
        if isinstance(other, Polynomial):
            self._check_same_ring(other)
            return other
        vec = _as_coeff_vec(self.ctx, other)
        if vec is None:
            return None
        if cv_is_zero(vec):
            return Polynomial(self.space, self.ctx, {})
        return Polynomial(self.space, self.ctx, {0: vec})

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for code, vec in other._terms.items():
            old = terms.get(code)
            if old is None:
                terms[code] = vec
            else:
                merged = cv_add(old, vec)
                if cv_is_zero(merged):
                    del terms[code]
                else:
                    terms[code] = merged
        return Polynomial(self.space, self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(
            self.space, self.ctx, {c: cv_neg(v) for c, v in self._terms.items()}
        )

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for code, vec in other._terms.items():
            old = terms.get(code)
            if old is None:
                terms[code] = cv_neg(vec)
            else:
                merged = cv_sub(old, vec)
                if cv_is_zero(merged):
                    del terms[code]
                else:
                    terms[code] = merged
        return Polynomial(self.space, self.ctx, terms)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_same_ring(other)
            if not self._terms or not other._terms:
                return Polynomial(self.space, self.ctx, {})
            sig = self.space.kernel_sig(self.ctx)
            out = termops.mul_terms(
                list(self._terms.items()),
                list(other._terms.items()),
                sig,
                self.space._pair_cache,
            )
            return Polynomial(
                self.space, self.ctx, {c: tuple(v) for c, v in out.items()}
            )
        vec = _as_coeff_vec(self.ctx, other)
        if vec is None:
            return NotImplemented
        return self.scale(CyclotomicNumber(self.ctx, vec))

    __rmul__ = __mul__

    def scale(self, value: CyclotomicNumber) -> "Polynomial":
        vec = _as_coeff_vec(self.ctx, value)
        if cv_is_zero(vec):
            return Polynomial(self.space, self.ctx, {})
        if not any(vec[1:]):
            s = vec[0]
            return Polynomial(
                self.space, self.ctx, {c: cv_scale(v, s) for c, v in self._terms.items()}
            )
        rows, d = self.ctx.reduction_rows, self.ctx.degree
        out = {}
        for c, v in self._terms.items():
            prod = cv_mul(v, vec, rows, d)
            if not cv_is_zero(prod):
                out[c] = prod
        return Polynomial(self.space, self.ctx, out)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.space, self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- evaluation and substitution -------------------------------------------

    def _point_vecs(self, point) -> list:
        names = self.space.names
        if isinstance(point, dict):
            if set(point) != set(names):
                missing = set(names) - set(point)
                extra = set(point) - set(names)
                raise PolynomialError(
                    f"point must assign every variable (missing {sorted(missing)}, extra {sorted(extra)})"
                )
            values = [point[name] for name in names]
        else:
            values = list(point)
            if len(values) != len(names):
                raise PolynomialError(
                    f"point has {len(values)} coordinates, space has {len(names)}"
                )
        vecs = []
        for v in values:
            vec = _as_coeff_vec(self.ctx, v)
            if vec is None:
                raise PolynomialError(f"not a scalar point coordinate: {v!r}")
            vecs.append(vec)
        return vecs

    def evaluate(self, point) -> CyclotomicNumber:
        """Exact evaluation of the canonical form at a full point."""
        vecs = self._point_vecs(point)
        ctx = self.ctx
        rows, d, one = ctx.reduction_rows, ctx.degree, ctx.one_vec
        unpack = self.space.unpack
        pow_memo: dict[tuple[int, int], tuple] = {}
        acc = ctx.zero_vec
        for code, cvec in self._terms.items():
            term = cvec
            for i, e in enumerate(unpack(code)):
                if not e:
                    continue
                key = (i, e)
                p = pow_memo.get(key)
                if p is None:
                    p = one
                    base = vecs[i]
                    k = e
                    while k:
                        if k & 1:
                            p = cv_mul(p, base, rows, d)
                        k >>= 1
                        if k:
                            base = cv_mul(base, base, rows, d)
                    pow_memo[key] = p
                term = cv_mul(term, p, rows, d)
            acc = cv_add(acc, term)
        return CyclotomicNumber(ctx, acc)

    def substitute(
        self,
        assignment: dict,
        target_space: VariableSpace | None = None,
        target_ctx: CyclotomicContext | None = None,
    ) -> "Polynomial":
        """Ring homomorphism: replace variables by target-space polynomials.

        Unassigned variables map to the target variable of the same name.  For
        a source variable with cyclic modulus m the substituted value v must
        satisfy v^m = 1 in the target ring, unless the target space is fully
        unbounded (an explicit lift to the free ring).
        """
        for name in assignment:
            self.space.index(name)  # raises on unknown variables
        poly_values = [v for v in assignment.values() if isinstance(v, Polynomial)]
        if target_space is None:
            if poly_values:
                target_space = poly_values[0].space
            else:
                target_space = self.space
        if target_ctx is None:
            target_ctx = poly_values[0].ctx if poly_values else self.ctx
        for v in poly_values:
            if v.space != target_space or v.ctx is not target_ctx:
                raise SubstitutionError("assigned polynomials disagree on the target ring")
        if self.ctx is not target_ctx and self.ctx.order != 1:
            raise SubstitutionError(
                "cannot move coefficients between cyclotomic contexts of different order"
            )

        def lift_scalar(value):
            vec = _as_coeff_vec(target_ctx, value)
            if vec is None:
                raise SubstitutionError(f"cannot substitute value {value!r}")
            return Polynomial(target_space, target_ctx, {0: vec} if not cv_is_zero(vec) else {})

        images = []
        skip_modulus_check = target_space.is_free()
        one = Polynomial.constant(target_space, target_ctx, 1)
        for i, name in enumerate(self.space.names):
            if name in assignment:
                value = assignment[name]
                img = value if isinstance(value, Polynomial) else lift_scalar(value)
                m = self.space.moduli[i]
                if m is not None and not skip_modulus_check:
                    if img**m != one:
                        raise SubstitutionError(
                            f"substituted value for {name!r} does not satisfy v^{m} = 1 "
                            "in the target ring (use a fully unbounded target to lift)"
                        )
            else:
                img = Polynomial.variable(target_space, target_ctx, name)
            images.append(img)

        if self.ctx is target_ctx:
            coeff_lift = lambda vec: vec  # noqa: E731
        else:
            pad = (QZERO,) * (target_ctx.degree - 1)
            coeff_lift = lambda vec: (vec[0],) + pad  # noqa: E731

        result = Polynomial.zero(target_space, target_ctx)
        pow_memo: dict[tuple[int, int], Polynomial] = {}
        unpack = self.space.unpack
        for code, cvec in self._terms.items():
            term = Polynomial(target_space, target_ctx, {0: coeff_lift(cvec)})
            for i, e in enumerate(unpack(code)):
                if not e:
                    continue
                key = (i, e)
                p = pow_memo.get(key)
                if p is None:
                    p = images[i] ** e
                    pow_memo[key] = p
                term = term * p
            result = result + term
        return result

    def apply_variable_permutation(self, mapping: dict) -> "Polynomial":
        """Relabel variables by a bijection {old name: new name} within the space.

        The variables must have pairwise equal moduli under the mapping.
        """
        perm = list(range(len(self.space)))
        for old, new in mapping.items():
            i, j = self.space.index(old), self.space.index(new)
            if self.space.moduli[i] != self.space.moduli[j]:
                raise SubstitutionError(
                    f"cannot relabel {old!r} to {new!r}: moduli differ"
                )
            perm[i] = j
        if sorted(perm) != list(range(len(self.space))):
            raise SubstitutionError("variable relabeling is not a bijection")
        pack, unpack = self.space.pack, self.space.unpack
        out = {}
        for code, vec in self._terms.items():
            exps = unpack(code)
            new_exps = [0] * len(exps)
            for i, e in enumerate(exps):
                new_exps[perm[i]] = e
            out[pack(tuple(new_exps))] = vec
        return Polynomial(self.space, self.ctx, out)

    # -- canonical text -------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        space = self.space
        parts = []
        for exps in self.support():
            vec = self._terms[space.pack(exps)]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(space.names, exps)
                if e
            )
            atomic = sum(1 for c in vec if c) == 1
            ctext = cv_text(vec)
            if not mono:
                parts.append(ctext if atomic else f"({ctext})")
            elif vec == self.ctx.one_vec:
                parts.append(mono)
            elif not any(vec[1:]) and vec[0] == -1:
                parts.append("-" + mono)
            elif atomic:
                parts.append(f"{ctext}*{mono}")
            else:
                parts.append(f"({ctext})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    @classmethod
    def parse(cls, space: VariableSpace, ctx: CyclotomicContext, text: str) -> "Polynomial":
        return _parse_polynomial(space, ctx, text)


# ---------------------------------------------------------------------------
# text codec


_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z0-9_]*|\^|\*|/|\+|\-|\(|\))")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of polynomial text")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")


def _parse_polynomial(space, ctx, text):
    ts = _TokenStream(_tokenize(text))
    if ts.peek() is None:
        raise ParseError("empty polynomial text")
    mapping: dict[tuple, CyclotomicNumber] = {}
    sign = 1
    tok = ts.peek()
    if tok in ("+", "-"):
        ts.take()
        sign = -1 if tok == "-" else 1
    while True:
        vec, exps = _parse_term(ts, space, ctx)
        if sign < 0:
            vec = cv_neg(vec)
        key = tuple(exps)
        num = CyclotomicNumber(ctx, vec)
        if key in mapping:
            mapping[key] = mapping[key] + num
        else:
            mapping[key] = num
        tok = ts.peek()
        if tok is None:
            break
        if tok not in ("+", "-"):
            raise ParseError(f"expected '+' or '-' between terms, got {tok!r}")
        ts.take()
        sign = -1 if tok == "-" else 1
    return Polynomial.from_dict(space, ctx, mapping)


def _parse_term(ts, space, ctx):
    vec = ctx.one_vec
    exps = [0] * len(space)
    while True:
        vec = _parse_factor(ts, space, ctx, vec, exps)
        if ts.peek() == "*":
            ts.take()
            continue
        return vec, exps


def _parse_factor(ts, space, ctx, vec, exps):
    rows, d = ctx.reduction_rows, ctx.degree
    tok = ts.take()
    if tok.isdigit():
        value = Q(int(tok))
        if ts.peek() == "/":
            ts.take()
            den = ts.take()
            if not den.isdigit() or int(den) == 0:
                raise ParseError(f"bad denominator {den!r}")
            value = value / int(den)
        return cv_scale(vec, value)
    if tok == "(":
        inner = _parse_cyclo_sum(ts, ctx)
        ts.expect(")")
        return cv_mul(vec, inner, rows, d)
    if tok == "w":
        e = _parse_optional_power(ts)
        return cv_mul(vec, ctx.root_vec(e), rows, d)
    if _NAME_RE.match(tok):
        idx = space.index(tok)
        exps[idx] += _parse_optional_power(ts)
        return vec
    raise ParseError(f"unexpected token {tok!r} in term")


def _parse_optional_power(ts) -> int:
    if ts.peek() == "^":
        ts.take()
        e = ts.take()
        if not e.isdigit():
            raise ParseError(f"bad exponent {e!r}")
        return int(e)
    return 1


def _parse_cyclo_sum(ts, ctx) -> tuple:
    """Sum of rational multiples of w powers, inside parentheses."""
    rows, d = ctx.reduction_rows, ctx.degree
    acc = ctx.zero_vec
    sign = 1
    if ts.peek() in ("+", "-"):
        sign = -1 if ts.take() == "-" else 1
    while True:
        part = ctx.one_vec
        while True:
            tok = ts.take()
            if tok.isdigit():
                value = Q(int(tok))
                if ts.peek() == "/":
                    ts.take()
                    den = ts.take()
                    if not den.isdigit() or int(den) == 0:
                        raise ParseError(f"bad denominator {den!r}")
                    value = value / int(den)
                part = cv_scale(part, value)
            elif tok == "w":
                part = cv_mul(part, ctx.root_vec(_parse_optional_power(ts)), rows, d)
            else:
                raise ParseError(f"unexpected token {tok!r} in coefficient")
            if ts.peek() == "*":
                ts.take()
                continue
            break
        acc = cv_add(acc, part if sign > 0 else cv_neg(part))
        tok = ts.peek()
        if tok in ("+", "-"):
            ts.take()
            sign = -1 if tok == "-" else 1
            continue
        return acc


# ---------------------------------------------------------------------------
# grids


class GridSpec:
    """Finite value sets S_i for a subset of the variables of a space.

    Variables are kept in space order; that order is also the division order
    of divide_by_grid.  For a variable with cyclic modulus m the set size must
    be < m, otherwise the grid polynomial prod(x - s) would collapse under
    the cyclic reduction.
    """

    __slots__ = ("space", "ctx", "names", "sets")

    def __init__(self, space: VariableSpace, ctx: CyclotomicContext, sets: dict):
        self.space = space
        self.ctx = ctx
        order = sorted(sets, key=space.index)
        names, values = [], []
        for name in order:
            idx = space.index(name)
            vals = tuple(
                CyclotomicNumber(ctx, _as_coeff_vec(ctx, v)) for v in sets[name]
            )
            if not vals:
                raise GridError(f"empty value set for variable {name!r}")
            if len({v.coeffs for v in vals}) != len(vals):
                raise GridError(f"duplicate values in the set for {name!r}")
            m = space.moduli[idx]
            if m is not None and len(vals) >= m:
                raise GridError(
                    f"set size {len(vals)} for {name!r} collides with cyclic modulus {m}"
                )
            names.append(name)
            values.append(vals)
        self.names = tuple(names)
        self.sets = tuple(values)

    def point_count(self) -> int:
        total = 1
        for vals in self.sets:
            total *= len(vals)
        return total

    def points(self):
        """All grid points (tuples aligned to self.names), lexicographic."""
        return itertools.product(*self.sets)

    def set_for(self, name: str):
        return self.sets[self.names.index(name)]


def grid_polynomial(grid: GridSpec, name: str) -> Polynomial:
    """g_i = prod over s in S_i of (x_i - s), in the grid's space."""
    space, ctx = grid.space, grid.ctx
    g = Polynomial.constant(space, ctx, 1)
    x = Polynomial.variable(space, ctx, name)
    for s in grid.set_for(name):
        g = g * (x - s)
    return g


def _monic_coeff_list(grid: GridSpec, vidx_in_grid: int) -> list:
    """Dense univariate coefficients of prod(x - s), low first, as raw vectors."""
    ctx = grid.ctx
    rows, d = ctx.reduction_rows, ctx.degree
    coeffs = [ctx.one_vec]
    for s in grid.sets[vidx_in_grid]:
        neg_s = cv_neg(s.coeffs)
        nxt = [ctx.zero_vec] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = cv_add(nxt[i + 1], c)
            nxt[i] = cv_add(nxt[i], cv_mul(c, neg_s, rows, d))
        coeffs = nxt
    return coeffs


def divide_by_grid(f: Polynomial, grid: GridSpec):
    """f = sum h_i * g_i + remainder with per-variable remainder degrees < |S_i|.

    Division runs variable by variable in the grid's declared order; the
    remainder is order-independent (it equals the grid interpolant of f).
    Returns (h, remainder) with h aligned to grid.names.
    """
    if grid.space != f.space or grid.ctx is not f.ctx:
        raise GridError("grid does not match the polynomial's ring")
    rem = f
    quotients = []
    for gi, name in enumerate(grid.names):
        q, rem = _divide_monic_univariate(rem, f.space.index(name), _monic_coeff_list(grid, gi))
        quotients.append(q)
    return quotients, rem


def _divide_monic_univariate(f: Polynomial, vidx: int, gcoeffs: list):
    """Schoolbook division by a monic univariate polynomial in variable vidx.

    gcoeffs are dense raw coefficient vectors, low first.  Works on packed
    codes; never triggers cyclic wraps because all intermediate exponents stay
    at or below those of f.
    """
    space, ctx = f.space, f.ctx
    rows, d = ctx.reduction_rows, ctx.degree
    m = len(gcoeffs) - 1
    shift = space._shifts[vidx]
    mask = space._masks[vidx]
    field = mask << shift

    buckets: dict[int, dict[int, tuple]] = {}
    for code, vec in f._terms.items():
        k = (code >> shift) & mask
        buckets.setdefault(k, {})[code & ~field] = vec
    if not buckets:
        return Polynomial.zero(space, ctx), f

    quotient: dict[int, tuple] = {}
    for k in range(max(buckets), m - 1, -1):
        entries = buckets.get(k)
        if not entries:
            continue
        for rest, c in list(entries.items()):
            if cv_is_zero(c):
                continue
            qcode = rest | ((k - m) << shift)
            old = quotient.get(qcode)
            quotient[qcode] = c if old is None else cv_add(old, c)
            for j in range(m):
                gj = gcoeffs[j]
                if cv_is_zero(gj):
                    continue
                delta = cv_mul(c, gj, rows, d)
                tgt = buckets.setdefault(k - m + j, {})
                old = tgt.get(rest)
                tgt[rest] = cv_neg(delta) if old is None else cv_sub(old, delta)
        del buckets[k]

    remainder: dict[int, tuple] = {}
    for k, entries in buckets.items():
        for rest, c in entries.items():
            if not cv_is_zero(c):
                remainder[rest | (k << shift)] = c
    quotient = {c: v for c, v in quotient.items() if not cv_is_zero(v)}
    return Polynomial(space, ctx, quotient), Polynomial(space, ctx, remainder)


def grid_samples(f: Polynomial, grid: GridSpec) -> dict:
    """Evaluations of f on the full grid, keyed by point tuples.

    Variables of f outside the grid must not occur in f.
    """
    outside = [
        name
        for name, deg in zip(f.space.names, f.var_degrees())
        if deg > 0 and name not in grid.names
    ]
    if outside:
        raise GridError(f"polynomial depends on variables outside the grid: {outside}")
    zero = CyclotomicNumber(f.ctx, f.ctx.zero_vec)
    base = {name: zero for name in f.space.names}
    samples = {}
    for point in grid.points():
        assignment = dict(base)
        assignment.update(zip(grid.names, point))
        samples[point] = f.evaluate(assignment)
    return samples


def grid_interpolate(grid: GridSpec, values: dict) -> Polynomial:
    """The unique polynomial with per-variable degree < |S_i| matching values.

    `values` maps full grid points (tuples aligned to grid.names) to scalars;
    every grid point must be present.
    """
    space, ctx = grid.space, grid.ctx

    def key_of(point) -> tuple:
        coords = []
        for v in point:
            vec = _as_coeff_vec(ctx, v)
            if vec is None:
                raise GridError(f"bad grid point coordinate {v!r}")
            coords.append(vec)
        return tuple(coords)

    table = {}
    for point, value in values.items():
        if len(point) != len(grid.names):
            raise GridError("grid point arity does not match the grid")
        vec = _as_coeff_vec(ctx, value)
        if vec is None:
            raise GridError(f"bad grid value {value!r}")
        table[key_of(point)] = vec

    if len(table) != grid.point_count():
        raise GridError(
            f"need values on all {grid.point_count()} grid points, got {len(table)}"
        )

    # univariate Lagrange bases per grid variable and node
    bases = []
    rows, d = ctx.reduction_rows, ctx.degree
    for name, nodes in zip(grid.names, grid.sets):
        per_node = []
        for j, node in enumerate(nodes):
            num = Polynomial.constant(space, ctx, 1)
            den = ctx.one_vec
            x = Polynomial.variable(space, ctx, name)
            for k, other in enumerate(nodes):
                if k == j:
                    continue
                num = num * (x - other)
                den = cv_mul(den, cv_sub(node.coeffs, other.coeffs), rows, d)
            per_node.append(num.scale(CyclotomicNumber(ctx, _cv_invert(den, ctx))))
        bases.append(per_node)

    result = Polynomial.zero(space, ctx)
    for idx_tuple in itertools.product(*(range(len(s)) for s in grid.sets)):
        point_key = tuple(grid.sets[i][j].coeffs for i, j in enumerate(idx_tuple))
        vec = table.get(point_key)
        if vec is None:
            raise GridError("values do not cover the full Cartesian grid")
        if cv_is_zero(vec):
            continue
        term = Polynomial(space, ctx, {0: vec})
        for i, j in enumerate(idx_tuple):
            term = term * bases[i][j]
        result = result + term
    return result


def support_maximal(f: Polynomial, t) -> bool:
    """True iff coeff of x^t is nonzero and no support exponent dominates t."""
    t = f.space.canonical_exponents(t)
    if f.coefficient(t).is_zero():
        return False
    for exps in f.support():
        if exps != t and all(a >= b for a, b in zip(exps, t)):
            return False
    return True


class GridEvaluator:
    """Repeated exact evaluation of one polynomial over a product grid.

    Precomputes per-variable power tables for the candidate values; points are
    addressed by index tuples into the value lists.
    """

    def __init__(self, f: Polynomial, names, value_lists):
        self.f = f
        ctx = f.ctx
        rows, d, one = ctx.reduction_rows, ctx.degree, ctx.one_vec
        self.ctx = ctx
        order = [f.space.index(name) for name in names]
        degs = f.var_degrees()
        for i, deg in enumerate(degs):
            if deg > 0 and i not in order:
                raise GridError(
                    f"polynomial depends on {f.space.names[i]!r} which has no value list"
                )
        self._slot_of = {vidx: slot for slot, vidx in enumerate(order)}
        self._tables = []
        for slot, vidx in enumerate(order):
            maxdeg = degs[vidx]
            per_value = []
            for v in value_lists[slot]:
                vec = _as_coeff_vec(ctx, v)
                if vec is None:
                    raise GridError(f"bad candidate value {v!r}")
                powers = [one]
                for _ in range(maxdeg):
                    powers.append(cv_mul(powers[-1], vec, rows, d))
                per_value.append(powers)
            self._tables.append(per_value)
        unpack = f.space.unpack
        self._flat = [
            (tuple((self._slot_of[i], e) for i, e in enumerate(unpack(code)) if e), vec)
            for code, vec in f._terms.items()
        ]

    def value_at(self, index_tuple) -> tuple:
        """Raw coefficient vector of f at the point selected by indices."""
        ctx = self.ctx
        rows, d = ctx.reduction_rows, ctx.degree
        acc = ctx.zero_vec
        tables = self._tables
        for factors, cvec in self._flat:
            term = cvec
            for slot, e in factors:
                term = cv_mul(term, tables[slot][index_tuple[slot]][e], rows, d)
            acc = cv_add(acc, term)
        return acc

    def is_nonzero_at(self, index_tuple) -> bool:
        return not cv_is_zero(self.value_at(index_tuple))
