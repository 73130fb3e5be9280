"""Pure-Python term-multiplication kernel.

A polynomial's terms are a dict keyed by a packed exponent code (one bit field
per variable) with coefficient vectors (tuples of rationals in the canonical
cyclotomic basis) as values.  mul_terms multiplies two term lists and
accumulates the packed products, wrapping bit fields of cyclically reduced
variables and range-checking unbounded ones.

The compiled kernel in _termops_c.pyx implements the same contract; parity of
the two is asserted by the test suite.  See termops.py for selection.

The ring signature `sig` is
    (total_bits, nvars, shifts, masks, mods, caps, rows, degree)
where mods[i] == 0 marks an unbounded variable, caps[i] is the largest
storable exponent, and rows/degree describe coefficient reduction mod Phi_n.
"""

_PAIR_CACHE_CAP = 1 << 20


def combine_exponents(ea: int, eb: int, sig) -> int:
    """Packed exponent sum with per-variable cyclic wrap / capacity check."""
    _, nvars, shifts, masks, mods, caps, _, _ = sig
    e = ea + eb
    for i in range(nvars):
        v = (e >> shifts[i]) & masks[i]
        m = mods[i]
        if m:
            if v >= m:
                e -= m << shifts[i]
        elif v > caps[i]:
            raise OverflowError(
                f"exponent {v} exceeds the storable range {caps[i]} of variable {i}"
            )
    return e


def mul_terms(items_a, items_b, sig, cache) -> dict:
    """Multiply two term lists [(packed_exp, coeff_tuple), ...] -> packed dict."""
    total_bits = sig[0]
    rows = sig[6]
    d = sig[7]
    out: dict[int, list] = {}
    out_get = out.get
    cache_get = cache.get
    for ea, ca in items_a:
        ea_shifted = ea << total_bits
        for eb, cb in items_b:
            key = ea_shifted | eb
            e = cache_get(key)
            if e is None:
                e = combine_exponents(ea, eb, sig)
                if len(cache) < _PAIR_CACHE_CAP:
                    cache[key] = e
            acc = out_get(e)
            if d == 1:
                p = ca[0] * cb[0]
                if acc is None:
                    out[e] = [p]
                else:
                    acc[0] += p
            else:
                if acc is None:
                    acc = [0] * d
                    out[e] = acc
                for i in range(d):
                    cai = ca[i]
                    if not cai:
                        continue
                    for j in range(d):
                        cbj = cb[j]
                        if not cbj:
                            continue
                        p = cai * cbj
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
    return {e: vec for e, vec in out.items() if any(vec)}
