"""Sparse Laurent polynomials over Z[A_1, ..., A_n].

Two variable classes live side by side: *constants* ``A_i`` (generators of
the coefficient ring, never inverted) and *cluster symbols* ``X_i`` (may
carry negative exponents).  Coefficients are Python ints, so arithmetic is
exact at any size.

Monomials are tuples of ``(VarRef, exponent)`` pairs sorted by variable.
The global monomial order is graded lexicographic with
``A_1 < ... < A_n < X_1 < X_2 < ...``; it drives sign normalization and
the canonical string form.
"""
from __future__ import annotations

import heapq
import math
import re
import sys
import threading
from array import array
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Tuple, Union

CONSTANT = 0
CLUSTER = 1


class VarRef(NamedTuple):
    kind: int
    index: int

    def __str__(self) -> str:
        return ("A" if self.kind == CONSTANT else "X") + str(self.index)

    @property
    def is_constant(self) -> bool:
        return self.kind == CONSTANT


def A(i: int) -> VarRef:
    if i < 1:
        raise ValueError(f"variable index must be positive, got {i}")
    return VarRef(CONSTANT, i)


def X(i: int) -> VarRef:
    if i < 1:
        raise ValueError(f"variable index must be positive, got {i}")
    return VarRef(CLUSTER, i)


Monomial = Tuple[Tuple[VarRef, int], ...]
ONE: Monomial = ()


class PolynomialError(ArithmeticError):
    pass


class NotInvertibleError(PolynomialError):
    pass


class InexactDivisionError(PolynomialError):
    """Raised when a division leaves a remainder; ``remainder`` is the witness."""

    def __init__(self, message: str, remainder: "LaurentPolynomial"):
        super().__init__(message)
        self.remainder = remainder


# ---------------------------------------------------------------------------
# monomial helpers


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    # merge of two sorted tuples
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            out.append(a[i])
            i += 1
        elif vb < va:
            out.append(b[j])
            j += 1
        else:
            if ea + eb:
                out.append((va, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE
    return tuple((v, e * k) for v, e in a)


def mono_inv(a: Monomial) -> Monomial:
    return tuple((v, -e) for v, e in a)


def mono_from_exponents(exps: Mapping[VarRef, int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


@lru_cache(maxsize=1 << 16)
def _key(m: Monomial):
    # valid for monomials with non-negative exponents only; Laurent callers shift first
    return (sum(e for _, e in m), m[::-1])


def _mono_divides(d: Monomial, m: Monomial) -> bool:
    dm = dict(m)
    return all(dm.get(v, 0) >= e for v, e in d)


def _fmt_mono(m: Monomial) -> str:
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


# Packed monomials: exponent vectors as balanced base-2^16 digits of one
# int, so that multiplying monomials is integer addition.  Digit positions
# come from a process-wide registry and mean nothing outside this module.

_W = 16
_BASE = 1 << _W
_HALF = _BASE >> 1
_MASK = _BASE - 1
_slot_of: Dict[VarRef, int] = {}
_slot_var: List[VarRef] = []
_packed: Dict[Monomial, int] = {}
_unpacked: Dict[int, Monomial] = {}
_CACHE_LIMIT = 1 << 20
_registry_lock = threading.Lock()


def _register(v: VarRef) -> int:
    with _registry_lock:
        i = _slot_of.get(v)
        if i is None:
            _slot_var.append(v)
            i = _slot_of[v] = len(_slot_var) - 1
        return i


def _pack(m: Monomial) -> int:
    k = _packed.get(m)
    if k is None:
        k = 0
        for v, e in m:
            i = _slot_of.get(v)
            if i is None:
                i = _register(v)
            k += e << (_W * i)
        if len(_packed) > _CACHE_LIMIT:
            _packed.clear()
        _packed[m] = k
    return k


_offsets: List[int] = [0]


def _unpack(k: int) -> Monomial:
    m = _unpacked.get(k)
    if m is None:
        n = len(_slot_var)
        while len(_offsets) <= n:
            _offsets.append(_offsets[-1] + (_HALF << (_W * (len(_offsets) - 1))))
        # adding HALF to every digit makes them all non-negative, so the
        # bytes give the digits directly
        digits = array("H")
        digits.frombytes((k + _offsets[n]).to_bytes(2 * n, sys.byteorder))
        m = [(_slot_var[i], d - _HALF) for i, d in enumerate(digits) if d != _HALF]
        m.sort()
        m = tuple(m)
        if len(_unpacked) > _CACHE_LIMIT:
            _unpacked.clear()
        _unpacked[k] = m
    return m


def _pmul(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    acc: Dict[int, int] = {}
    get = acc.get
    for k2, c2 in b.items():
        for k1, c1 in a.items():
            k = k1 + k2
            acc[k] = get(k, 0) + c1 * c2
    return {k: c for k, c in acc.items() if c}


# ---------------------------------------------------------------------------


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("_terms", "_hash", "_sorted", "_maxexp")

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None):
        clean: Dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    m = tuple(sorted((v, e) for v, e in m if e))
                    for v, e in m:
                        if v.kind == CONSTANT and e < 0:
                            raise ValueError(f"constant {v} cannot carry a negative exponent")
                    clean[m] = clean.get(m, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None
        self._sorted = None
        self._maxexp = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int]) -> "LaurentPolynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        p._sorted = None
        p._maxexp = None
        return p

    # constructors
    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls._raw({ONE: c} if c else {})

    @classmethod
    def var(cls, v: VarRef, exp: int = 1) -> "LaurentPolynomial":
        if v.kind == CONSTANT and exp < 0:
            raise NotInvertibleError(f"{v} is not invertible")
        return cls._raw({((v, exp),) if exp else ONE: 1})

    @classmethod
    def monomial(cls, m: Monomial, coef: int = 1) -> "LaurentPolynomial":
        return cls({m: coef})

    @classmethod
    def coerce(cls, x: Union["LaurentPolynomial", int]) -> "LaurentPolynomial":
        if isinstance(x, LaurentPolynomial):
            return x
        if isinstance(x, int):
            return cls.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPolynomial")

    # container protocol
    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def __iter__(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    # arithmetic
    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other) -> "LaurentPolynomial":
        other = LaurentPolynomial.coerce(other)
        if len(other) > len(self):
            self, other = other, self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPolynomial":
        return self + (-LaurentPolynomial.coerce(other))

    def __rsub__(self, other) -> "LaurentPolynomial":
        return LaurentPolynomial.coerce(other) + (-self)

    def _max_exponent(self) -> int:
        if self._maxexp is None:
            self._maxexp = max((abs(e) for m in self._terms for _, e in m), default=0)
        return self._maxexp

    def __mul__(self, other) -> "LaurentPolynomial":
        other = LaurentPolynomial.coerce(other)
        if not self._terms or not other._terms:
            return LaurentPolynomial._raw({})
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (m, c), = b.items()
            return self.mul_monomial(m, c) if b is other._terms else other.mul_monomial(m, c)
        if self._max_exponent() + other._max_exponent() >= _HALF:
            out: Dict = {}
            for m1, c1 in a.items():
                for m2, c2 in b.items():
                    m = mono_mul(m1, m2)
                    out[m] = out.get(m, 0) + c1 * c2
            return LaurentPolynomial._raw({m: c for m, c in out.items() if c})
        pb = [(_pack(m), c) for m, c in b.items()]
        acc: Dict[int, int] = {}
        get = acc.get
        for m1, c1 in a.items():
            k1 = _pack(m1)
            for k2, c2 in pb:
                k = k1 + k2
                acc[k] = get(k, 0) + c1 * c2
        return LaurentPolynomial._raw({_unpack(k): c for k, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            if len(self) != 1:
                raise NotInvertibleError(f"{self} is not invertible")
            (m, c), = self._terms.items()
            if abs(c) != 1 or any(v.kind == CONSTANT for v, _ in m):
                raise NotInvertibleError(f"{self} is not invertible")
            return LaurentPolynomial._raw({mono_pow(m, k): c ** (-k)})
        result = LaurentPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other) -> "LaurentPolynomial":
        return exact_divide(self, LaurentPolynomial.coerce(other))

    def mul_monomial(self, m: Monomial, c: int = 1) -> "LaurentPolynomial":
        if not m and c == 1:
            return self
        if self._max_exponent() + max((abs(e) for _, e in m), default=0) < _HALF:
            km = _pack(m)
            return LaurentPolynomial._raw({_unpack(_pack(t) + km): k * c for t, k in self._terms.items()})
        return LaurentPolynomial._raw({mono_mul(t, m): k * c for t, k in self._terms.items()})

    # inspection
    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def involves(self, v: VarRef) -> bool:
        return any(u == v for m in self._terms for u, _ in m)

    def degree(self, v: VarRef) -> int:
        """Largest exponent of ``v`` (0 when absent)."""
        if not self._terms:
            return 0
        return max(dict(m).get(v, 0) for m in self._terms)

    def min_degree(self, v: VarRef) -> int:
        if not self._terms:
            return 0
        return min(dict(m).get(v, 0) for m in self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for +1 and -1, the units of Z[A]."""
        return len(self._terms) == 1 and abs(self._terms.get(ONE, 0)) == 1

    def is_laurent_unit(self) -> bool:
        """True for +-1 times a monomial in cluster symbols."""
        if len(self._terms) != 1:
            return False
        (m, c), = self._terms.items()
        return abs(c) == 1 and all(v.kind == CLUSTER for v, _ in m)

    def is_polynomial(self) -> bool:
        return all(e >= 0 for m in self._terms for _, e in m)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE, 0)

    # ordering
    def content_split(self) -> Tuple[Monomial, "LaurentPolynomial"]:
        """Return ``(m, q)`` with ``self == m * q`` and no cluster symbol dividing ``q``.

        ``m`` collects the minimal exponent of every cluster symbol and may
        have negative entries; constants are left in ``q``.
        """
        if not self._terms:
            return ONE, self
        mins: Dict[VarRef, int] = {}
        first = True
        for m in self._terms:
            seen = 0
            for v, e in m:
                if v.kind != CLUSTER:
                    continue
                seen += 1
                cur = mins.get(v)
                if cur is None:
                    mins[v] = e if first else min(e, 0)
                elif e < cur:
                    mins[v] = e
            if not first and seen < len(mins):
                present = {v for v, _ in m}
                for v, cur in mins.items():
                    if cur > 0 and v not in present:
                        mins[v] = 0
            first = False
        content = mono_from_exponents(mins)
        if not content:
            return ONE, self
        return content, self.mul_monomial(mono_inv(content))

    def _shift(self) -> Monomial:
        # monomial making every exponent non-negative (translation keeps the order)
        mins: Dict[VarRef, int] = {}
        for m in self._terms:
            for v, e in m:
                if e < mins.get(v, 0):
                    mins[v] = e
        return mono_from_exponents({v: -e for v, e in mins.items()})

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        """Terms in ascending monomial order."""
        if self._sorted is None:
            shift = self._shift()
            if shift:
                items = sorted(self._terms.items(), key=lambda t: _key(mono_mul(t[0], shift)))
            else:
                items = sorted(self._terms.items(), key=lambda t: _key(t[0]))
            self._sorted = items
        return self._sorted

    def leading_term(self) -> Tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms()[-1]

    def leading_coefficient(self) -> int:
        return self.leading_term()[1]

    def normalized(self) -> "LaurentPolynomial":
        """The associate with positive leading coefficient."""
        if self._terms and self.leading_coefficient() < 0:
            return -self
        return self

    def integer_content(self) -> int:
        return math.gcd(*self._terms.values()) if self._terms else 0

    # substitution
    def coefficients_in(self, v: VarRef) -> List[Tuple[int, "LaurentPolynomial"]]:
        return coefficients_in(self, v)

    def rename(self, mapping: Mapping[VarRef, VarRef]) -> "LaurentPolynomial":
        out: Dict[Monomial, int] = {}
        for m, c in self._terms.items():
            nm = mono_from_exponents(_accumulate((mapping.get(v, v), e) for v, e in m))
            out[nm] = out.get(nm, 0) + c
        return LaurentPolynomial._raw({m: c for m, c in out.items() if c})

    def evaluate(self, values: Mapping[VarRef, "LaurentPolynomial"]) -> "LaurentPolynomial":
        """Simultaneously substitute Laurent polynomials for variables.

        A negative exponent is only allowed on a variable whose value is a
        Laurent unit (signed cluster monomial).
        """
        bound = 0
        for m in self._terms:
            b = sum(abs(e) * (values[v]._max_exponent() if v in values else 1) for v, e in m)
            bound = max(bound, b)
        if bound >= _HALF:
            return self._evaluate_tuples(values)
        powers: Dict[Tuple[VarRef, int], Dict[int, int]] = {}

        def power(v: VarRef, e: int) -> Dict[int, int]:
            key = (v, e)
            if key not in powers:
                val = values[v]
                if e < 0:
                    if not val.is_laurent_unit():
                        raise NotInvertibleError(f"cannot raise {val} to {e}")
                    powers[key] = {_pack(m): c for m, c in (val ** e)._terms.items()}
                elif e == 1:
                    powers[key] = {_pack(m): c for m, c in val._terms.items()}
                else:
                    powers[key] = _pmul(power(v, e - 1), power(v, 1))
            return powers[key]

        total: Dict[int, int] = {}
        get = total.get
        for m, c in self._terms.items():
            rest = 0
            term = None
            for v, e in m:
                if v in values:
                    p = power(v, e)
                    term = p if term is None else _pmul(term, p)
                else:
                    rest += _pack(((v, e),))
            if term is None:
                total[rest] = get(rest, 0) + c
            else:
                for k, tc in term.items():
                    k += rest
                    total[k] = get(k, 0) + c * tc
        return LaurentPolynomial._raw({_unpack(k): c for k, c in total.items() if c})

    def _evaluate_tuples(self, values: Mapping[VarRef, "LaurentPolynomial"]) -> "LaurentPolynomial":
        # same as evaluate, for exponents too large to pack
        total: Dict[Monomial, int] = {}
        for m, c in self._terms.items():
            rest: List[Tuple[VarRef, int]] = []
            term = LaurentPolynomial.constant(c)
            for v, e in m:
                if v in values:
                    val = values[v]
                    if e < 0 and not val.is_laurent_unit():
                        raise NotInvertibleError(f"cannot raise {val} to {e}")
                    term = term * val ** e
                else:
                    rest.append((v, e))
            for tm, tc in term._terms.items():
                nm = mono_mul(tm, tuple(rest))
                total[nm] = total.get(nm, 0) + tc
        return LaurentPolynomial._raw({m: c for m, c in total.items() if c})

    def substitute(self, v: VarRef, value) -> "RationalFunction":
        return substitute(self, v, value)

    # rendering
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for m, c in self.sorted_terms():
            body = _fmt_mono(m)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(sign + s)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPolynomial('{self}')"


def _accumulate(pairs: Iterable[Tuple[VarRef, int]]) -> Dict[VarRef, int]:
    d: Dict[VarRef, int] = {}
    for v, e in pairs:
        d[v] = d.get(v, 0) + e
    return d


Poly = LaurentPolynomial


def const(c: int) -> LaurentPolynomial:
    return LaurentPolynomial.constant(c)


def var(v: VarRef) -> LaurentPolynomial:
    return LaurentPolynomial.var(v)


# ---------------------------------------------------------------------------
# parsing of the canonical string form

_TOKEN = re.compile(r"\s*(?:(\d+)|([AX])(\d+)|(\^)|(\*)|([+-]))")


def parse(text: str) -> LaurentPolynomial:
    """Parse the canonical form written by ``str()``, e.g. ``A1*X2^-1+3*X3^2``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        pos = mt.end()
        if mt.group(1):
            tokens.append(("int", int(mt.group(1))))
        elif mt.group(2):
            idx = int(mt.group(3))
            tokens.append(("var", A(idx) if mt.group(2) == "A" else X(idx)))
        elif mt.group(4):
            tokens.append(("^", None))
        elif mt.group(5):
            tokens.append(("*", None))
        else:
            tokens.append(("sign", mt.group(6)))
    if not tokens:
        raise ValueError("empty polynomial string")

    terms: Dict[Monomial, int] = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == "sign":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ValueError(f"expected '+' or '-' in {text!r}")
        first = False
        coef = 1
        exps: Dict[VarRef, int] = {}
        expect_factor = True
        while i < len(tokens) and expect_factor:
            kind, val = tokens[i]
            if kind == "int":
                coef *= val
                i += 1
            elif kind == "var":
                i += 1
                e = 1
                if i < len(tokens) and tokens[i][0] == "^":
                    i += 1
                    esign = 1
                    if i < len(tokens) and tokens[i] == ("sign", "-"):
                        esign = -1
                        i += 1
                    if i >= len(tokens) or tokens[i][0] != "int":
                        raise ValueError(f"bad exponent in {text!r}")
                    e = esign * tokens[i][1]
                    i += 1
                exps[val] = exps.get(val, 0) + e
            else:
                raise ValueError(f"unexpected token in {text!r}")
            if i < len(tokens) and tokens[i][0] == "*":
                i += 1
            else:
                expect_factor = False
        m = mono_from_exponents(exps)
        terms[m] = terms.get(m, 0) + sign * coef
    return LaurentPolynomial(terms)


# ---------------------------------------------------------------------------
# division


def _poly_exact_div(p: LaurentPolynomial, d: LaurentPolynomial) -> LaurentPolynomial:
    # both arguments have non-negative exponents
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p:
        return p
    if len(d) == 1:
        (dm, dc), = d.terms.items()
        out = {}
        inv = mono_inv(dm)
        for m, c in p.terms.items():
            q, r = divmod(c, dc)
            nm = mono_mul(m, inv)
            if r or any(e < 0 for _, e in nm):
                raise InexactDivisionError(f"{d} does not divide {p}", p)
            out[nm] = q
        return LaurentPolynomial._raw(out)
    pdeg: Dict[VarRef, int] = {}
    for m in p.terms:
        for v, e in m:
            if e > pdeg.get(v, 0):
                pdeg[v] = e
    for m in d.terms:
        for v, e in m:
            if e > pdeg.get(v, 0):
                raise InexactDivisionError(f"{d} does not divide {p}", p)
    # Local packing whose integer order is the monomial order: the total
    # degree is the top digit, then variables from largest to smallest.
    # Remainder terms never exceed the dividend's total degree, so that
    # degree bounds every digit.
    radix = max(mono_degree(m) for m in p.terms) + 1
    names = sorted(set(pdeg) | d.variables())
    weight = {v: radix ** (k + 1) for k, v in enumerate(names)}
    top = radix ** (len(names) + 1)

    def pack(m):
        s = 0
        for v, e in m:
            s += e * (weight[v] + top)
        return s

    def unpack(s):
        s = (s % top) // radix
        out = []
        for v in names:
            s, e = divmod(s, radix)
            if e:
                out.append((v, e))
        return tuple(out)

    lm_d, lc_d = d.leading_term()
    lm_key = pack(lm_d)
    lm_exps = [(weight[v], e) for v, e in lm_d]
    dterms = [(pack(m), c) for m, c in d.terms.items() if m != lm_d]
    r = {pack(m): c for m, c in p.terms.items()}
    heap = [-k for k in r]
    heapq.heapify(heap)
    q: Dict[int, int] = {}
    while r:
        lk = -heapq.heappop(heap)
        c = r.pop(lk, 0)
        if not c:
            continue  # stale heap entry
        qc, rem = divmod(c, lc_d)
        if rem or any((lk // w) % radix < e for w, e in lm_exps):
            r[lk] = c
            left = {unpack(k): v for k, v in r.items()}
            raise InexactDivisionError(f"{d} does not divide {p}", LaurentPolynomial._raw(left))
        tk = lk - lm_key
        q[tk] = qc
        for dk, dc in dterms:
            k = tk + dk
            old = r.get(k)
            val = (old or 0) - qc * dc
            if val:
                r[k] = val
                if old is None:
                    heapq.heappush(heap, -k)
            else:
                r.pop(k, None)
    return LaurentPolynomial._raw({unpack(k): c for k, c in q.items()})


def exact_divide(p: LaurentPolynomial, d: LaurentPolynomial, laurent: bool = True) -> LaurentPolynomial:
    """Return ``q`` with ``q * d == p`` or raise :class:`InexactDivisionError`.

    In Laurent context cluster monomials are units, so ``X1 / (X1*X2)`` is
    ``X2^-1``; with ``laurent=False`` both sides must be ordinary
    polynomials and the quotient must be one too.
    """
    p = LaurentPolynomial.coerce(p)
    d = LaurentPolynomial.coerce(d)
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    if not laurent:
        if not (p.is_polynomial() and d.is_polynomial()):
            raise PolynomialError("negative exponents in polynomial context")
        return _poly_exact_div(p, d)
    mp, pp = p.content_split()
    md, dp = d.content_split()
    q = _poly_exact_div(pp, dp)
    return q.mul_monomial(mono_mul(mp, mono_inv(md)))


def divides(d: LaurentPolynomial, p: LaurentPolynomial, laurent: bool = True) -> bool:
    try:
        exact_divide(p, d, laurent=laurent)
    except InexactDivisionError:
        return False
    return True


# ---------------------------------------------------------------------------
# coefficient extraction


def coefficients_in(p: LaurentPolynomial, v: VarRef) -> List[Tuple[int, LaurentPolynomial]]:
    """All ``(alpha, e_alpha)`` with ``p == sum(e_alpha * v**alpha)`` and ``e_alpha != 0``."""
    buckets: Dict[int, Dict[Monomial, int]] = {}
    for m, c in p.terms.items():
        e = 0
        rest = m
        for i, (u, k) in enumerate(m):
            if u == v:
                e = k
                rest = m[:i] + m[i + 1:]
                break
        buckets.setdefault(e, {})[rest] = c
    return [(e, LaurentPolynomial._raw(buckets[e])) for e in sorted(buckets)]


def factor_multiplicity(p: LaurentPolynomial, f: LaurentPolynomial, laurent: bool = True) -> int:
    """Largest ``m`` such that ``f**m`` divides ``p``."""
    if not f or f.is_unit() or (laurent and f.is_laurent_unit()):
        raise PolynomialError(f"multiplicity undefined for unit or zero factor {f}")
    if not p:
        raise PolynomialError("multiplicity undefined for the zero polynomial")
    m = 0
    while True:
        try:
            p = exact_divide(p, f, laurent=laurent)
        except InexactDivisionError:
            return m
        m += 1


# ---------------------------------------------------------------------------
# gcd: recursive primitive polynomial remainder sequences


def _content_in(p: LaurentPolynomial, v: VarRef) -> LaurentPolynomial:
    coefs = sorted((c for _, c in coefficients_in(p, v)), key=len)
    g = coefs[0]
    for c in coefs[1:]:
        if g.is_constant() and abs(g.constant_value()) == 1:
            break
        g = _gcd_poly(g, c)
    return g.normalized()


def _primitive_part(p: LaurentPolynomial, v: VarRef) -> LaurentPolynomial:
    return _poly_exact_div(p, _content_in(p, v))


def _lc_in(p: LaurentPolynomial, v: VarRef) -> Tuple[int, LaurentPolynomial]:
    return coefficients_in(p, v)[-1]


def _prem(a: LaurentPolynomial, b: LaurentPolynomial, v: VarRef) -> LaurentPolynomial:
    db, lcb = _lc_in(b, v)
    r = a
    while r:
        dr, lcr = _lc_in(r, v)
        if dr < db:
            break
        r = lcb * r - (lcr * b).mul_monomial(((v, dr - db),) if dr > db else ONE)
    return r


def _gcd_poly(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    if not p:
        return q
    if not q:
        return p
    if len(p) == 1 or len(q) == 1:
        if len(q) == 1:
            p, q = q, p
        (m, c), = p.terms.items()
        mins = dict(m)
        g = c
        for tm, tc in q.terms.items():
            g = math.gcd(g, tc)
            dm = dict(tm)
            for v in list(mins):
                e = dm.get(v, 0)
                if e < mins[v]:
                    mins[v] = e
        return LaurentPolynomial._raw({mono_from_exponents(mins): abs(g)})
    vp, vq = p.variables(), q.variables()
    only = vp - vq
    if only:
        return _gcd_poly(_content_in(p, max(only)), q)
    only = vq - vp
    if only:
        return _gcd_poly(p, _content_in(q, max(only)))
    small, big = (q, p) if len(q) <= len(p) else (p, q)
    try:
        _poly_exact_div(big, small)
        return small
    except InexactDivisionError:
        pass
    x = min(vp, key=lambda v: (max(p.degree(v), q.degree(v)), v))
    cp, cq = _content_in(p, x), _content_in(q, x)
    c = _gcd_poly(cp, cq)
    a, b = _poly_exact_div(p, cp), _poly_exact_div(q, cq)
    if a.degree(x) < b.degree(x):
        a, b = b, a
    while True:
        r = _prem(a, b, x)
        if not r:
            break
        if r.degree(x) == 0:
            return c
        a, b = b, _primitive_part(r, x)
    return c * _primitive_part(b, x)


def gcd(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    """Sign-normalized greatest common divisor.

    Laurent inputs are reduced to their polynomial parts first, since
    cluster monomials are units there.
    """
    p = LaurentPolynomial.coerce(p)
    q = LaurentPolynomial.coerce(q)
    if not p.is_polynomial() or not q.is_polynomial():
        p = p.content_split()[1]
        q = q.content_split()[1]
    return _gcd_poly(p, q).normalized()


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Quotient of Laurent polynomials kept in lowest terms.

    The denominator carries no cluster-monomial factor and has a positive
    leading coefficient, so a Laurent polynomial always appears with
    denominator 1.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        num = LaurentPolynomial.coerce(numerator)
        den = LaurentPolynomial.coerce(denominator)
        if not den:
            raise ZeroDivisionError("zero denominator")
        md, den = den.content_split()
        num = num.mul_monomial(mono_inv(md))
        if not num:
            den = LaurentPolynomial.constant(1)
        elif not den.is_unit():
            try:
                num = exact_divide(num, den)
                den = LaurentPolynomial.constant(1)
            except InexactDivisionError:
                g = gcd(num, den)
                if not g.is_unit():
                    num = exact_divide(num, g)
                    den = _poly_exact_div(den, g)
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        self.numerator = num
        self.denominator = den

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls(x)

    def is_laurent(self) -> bool:
        return self.denominator == 1

    def to_laurent(self) -> LaurentPolynomial:
        if not self.is_laurent():
            raise PolynomialError(f"{self} is not a Laurent polynomial")
        return self.numerator

    def __add__(self, other):
        other = RationalFunction.coerce(other)
        return RationalFunction(self.numerator * other.denominator + other.numerator * self.denominator,
                                self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __mul__(self, other):
        other = RationalFunction.coerce(other)
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if not other.numerator:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.numerator * other.denominator, self.denominator * other.numerator)

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __str__(self):
        if self.is_laurent():
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"

    def __repr__(self):
        return f"RationalFunction('{self}')"


def substitute(p: LaurentPolynomial, v: VarRef, value) -> RationalFunction:
    """Replace the cluster symbol ``v`` in ``p`` by a rational function."""
    if v.kind != CLUSTER:
        raise ValueError(f"can only substitute for cluster symbols, not {v}")
    value = RationalFunction.coerce(value)
    coefs = coefficients_in(p, v)
    if not coefs:
        return RationalFunction(p)
    lo, hi = coefs[0][0], coefs[-1][0]
    num, den = value.numerator, value.denominator
    if lo < 0 and not num:
        raise ZeroDivisionError(f"substituting zero for {v} with negative exponent")
    base = min(lo, 0)
    top = max(hi, 0)
    total = LaurentPolynomial.constant(0)
    for e, c in coefs:
        total = total + c * num ** (e - base) * den ** (top - e)
    return RationalFunction(total, den ** top * num ** (-base))


def substitute_laurent(p: LaurentPolynomial, v: VarRef, value: LaurentPolynomial) -> LaurentPolynomial:
    """Substitution whose result is known to stay Laurent.

    ``p`` must not contain negative powers of ``v`` unless ``value`` is a
    Laurent unit.
    """
    return p.evaluate({v: value})
