"""LP seeds, hat polynomials, mutation and seed equivalence.

Slots and mutation directions are 1-based throughout, matching the
``[n]`` indexing used for graphs and activation sequences.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .poly import (
    CLUSTER,
    ONE,
    InexactDivisionError,
    LaurentPolynomial,
    Monomial,
    PolynomialError,
    RationalFunction,
    VarRef,
    X,
    _poly_exact_div,
    coefficients_in,
    exact_divide,
    gcd,
    mono_from_exponents,
    parse,
    substitute,
)


class SeedError(ValueError):
    pass


class LaurentPhenomenonError(PolynomialError):
    """A new cluster variable failed to be a Laurent polynomial in the initial cluster."""

    def __init__(self, message: str, seed: "Seed", direction: int):
        super().__init__(message)
        self.seed = seed
        self.direction = direction


@dataclass(frozen=True)
class SeedSlot:
    symbol: VarRef
    ambient: LaurentPolynomial
    exchange: LaurentPolynomial


@dataclass(frozen=True)
class Seed:
    slots: Tuple[SeedSlot, ...]
    next_index: int

    @classmethod
    def initial(cls, exchanges: Sequence[LaurentPolynomial]) -> "Seed":
        """Seed with cluster ``X1..Xn`` equal to the initial variables."""
        n = len(exchanges)
        slots = tuple(
            SeedSlot(X(i), LaurentPolynomial.var(X(i)), LaurentPolynomial.coerce(f).normalized())
            for i, f in enumerate(exchanges, 1)
        )
        return cls(slots, n + 1)

    @property
    def rank(self) -> int:
        return len(self.slots)

    def slot(self, i: int) -> SeedSlot:
        if not 1 <= i <= len(self.slots):
            raise IndexError(f"direction {i} out of range for rank {len(self.slots)}")
        return self.slots[i - 1]

    def symbol(self, i: int) -> VarRef:
        return self.slot(i).symbol

    def ambient(self, i: int) -> LaurentPolynomial:
        return self.slot(i).ambient

    def exchange(self, i: int) -> LaurentPolynomial:
        return self.slot(i).exchange

    @property
    def symbols(self) -> Tuple[VarRef, ...]:
        return tuple(s.symbol for s in self.slots)

    def cluster(self) -> Tuple[LaurentPolynomial, ...]:
        return tuple(s.ambient for s in self.slots)


@dataclass(frozen=True)
class HatPolynomial:
    """``laurent == prod(symbol_j ** exponents[j]) * exchange_base`` with exponents <= 0."""

    base: int
    laurent: LaurentPolynomial
    exponents: Mapping[int, int]
    monomial: Monomial


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    slot: int
    name: str
    status: str  # "pass", "fail", "uncertified" or "note"
    message: str = ""


@dataclass
class ValidationReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def __str__(self) -> str:
        return "\n".join(f"slot {c.slot}\t{c.name}\t{c.status}\t{c.message}".rstrip() for c in self.checks)


def _is_prime_int(k: int) -> bool:
    k = abs(k)
    if k < 2:
        return False
    i = 2
    while i * i <= k:
        if k % i == 0:
            return False
        i += 1
    return True


def irreducibility_certificate(p: LaurentPolynomial, known: Iterable[LaurentPolynomial] = ()) -> Optional[str]:
    """Name of a structural reason for ``p`` to be irreducible, or ``None``.

    Certificates: membership in ``known``; a single prime element; degree one
    in some variable with coprime coefficients (covers every binomial that
    carries a constant ``A_i`` to the first power).
    """
    pn = p.normalized()
    for k in known:
        if k.normalized() == pn:
            return "known family"
    if len(p) == 1:
        (m, c), = p.terms.items()
        if not m and _is_prime_int(c):
            return "prime integer"
        if abs(c) == 1 and len(m) == 1 and m[0][1] == 1:
            return "single variable"
        return None
    for v in sorted(p.variables()):
        coefs = coefficients_in(p, v)
        if len(coefs) == 2 and coefs[0][0] == 0 and coefs[1][0] == 1:
            if gcd(coefs[0][1], coefs[1][1]).is_unit():
                return f"degree one in {v}"
    return None


def validate_seed(seed: Seed, known_irreducible: Iterable[LaurentPolynomial] = ()) -> ValidationReport:
    """Check LP2, variable-freeness and sign normalization for every slot.

    Irreducibility is only certified structurally; anything else is
    reported as ``uncertified`` rather than failing.
    """
    known = list(known_irreducible)
    report = ValidationReport()
    symbols = set(seed.symbols)
    if len(symbols) != seed.rank:
        report.checks.append(Check(0, "distinct symbols", "fail", "repeated cluster symbol"))
    for i, slot in enumerate(seed.slots, 1):
        f = slot.exchange
        add = report.checks.append
        if not f:
            add(Check(i, "nonzero", "fail", "exchange polynomial is zero"))
            continue
        stray = {v for v in f.variables() if v.kind == CLUSTER and v not in symbols}
        if stray:
            add(Check(i, "symbols", "fail", "uses " + ",".join(map(str, sorted(stray)))))
        if f.involves(slot.symbol):
            add(Check(i, "LP2", "fail", f"{f} involves {slot.symbol}"))
        else:
            add(Check(i, "LP2", "pass"))
        if not f.is_polynomial():
            add(Check(i, "variable-free", "fail", f"{f} has negative exponents"))
        else:
            content, _ = f.content_split()
            if content:
                add(Check(i, "variable-free", "fail",
                          "divisible by " + "*".join(str(v) for v, _ in content)))
            else:
                add(Check(i, "variable-free", "pass"))
        if f.leading_coefficient() < 0:
            add(Check(i, "normalized", "fail", "negative leading coefficient"))
        if f.is_constant() or all(v.kind != CLUSTER for v in f.variables()):
            add(Check(i, "constant", "note", "exchange polynomial is a constant of the coefficient ring"))
        cert = irreducibility_certificate(f, known)
        if cert:
            add(Check(i, "irreducible", "pass", cert))
        else:
            add(Check(i, "irreducible", "uncertified", str(f)))
    return report


# ---------------------------------------------------------------------------
# hat polynomials


def _multiplicity_capped(e: LaurentPolynomial, f: LaurentPolynomial, cap: Optional[int]) -> int:
    fv = f.variables()
    if not fv <= e.variables():
        return 0
    m = 0
    while cap is None or m < cap:
        try:
            e = exact_divide(e, f)
        except InexactDivisionError:
            break
        m += 1
    return m


def compute_hat(seed: Seed, i: int) -> HatPolynomial:
    """Hat polynomial of slot ``i``.

    For each other slot ``j`` write ``F_i = sum e_a * x_j**a``; the exponent
    on ``x_j`` is minus the largest ``b`` such that ``F_j**(b - a)`` divides
    every ``e_a``, which equals ``min_a (a + mult_{F_j}(e_a))``.
    """
    f = seed.exchange(i)
    exps: Dict[int, int] = {}
    for j in range(1, seed.rank + 1):
        if j == i:
            continue
        fj = seed.exchange(j)
        if fj.is_unit() or fj.is_laurent_unit():
            raise SeedError(f"exchange polynomial of slot {j} is a unit")
        b: Optional[int] = None
        for alpha, e in coefficients_in(f, seed.symbol(j)):
            if b is not None and alpha >= b:
                break
            cap = None if b is None else b - alpha
            bound = alpha + _multiplicity_capped(e, fj, cap)
            b = bound if b is None else min(b, bound)
        exps[j] = -(b or 0)
    mono = mono_from_exponents({seed.symbol(j): a for j, a in exps.items()})
    return HatPolynomial(i, f.mul_monomial(mono), exps, mono)


def check_hat_conditions(seed: Seed, hat: HatPolynomial) -> bool:
    """Directly test both hat conditions by substituting ``x_j <- F_j / Z``."""
    z = X(seed.next_index)
    for j in range(1, seed.rank + 1):
        if j == hat.base:
            continue
        if hat.exponents[j] > 0:
            return False
        fj = seed.exchange(j)
        sub = substitute(hat.laurent, seed.symbol(j), RationalFunction(fj, LaurentPolynomial.var(z)))
        if not sub.is_laurent():
            return False
        try:
            exact_divide(sub.numerator, fj)
            return False
        except InexactDivisionError:
            pass
    return True


# ---------------------------------------------------------------------------
# mutation


def _strip_common_factors(p: LaurentPolynomial, d: LaurentPolynomial) -> LaurentPolynomial:
    # remove from p every factor it shares with d, with full multiplicity
    if d.is_unit():
        return p
    while True:
        g = gcd(p, d)
        if g.is_unit():
            return p
        p = _poly_exact_div(p, g)


def mutate(seed: Seed, i: int) -> Seed:
    """Mutate ``seed`` in direction ``i``.

    The new cluster variable is ``hat(F_i) / x_i``.  Each ``F_j`` that
    involves ``x_i`` is rewritten by substituting
    ``x_i <- hat(F_i)|_{x_j=0} / x_i'``, dividing out every factor shared
    with ``hat(F_i)|_{x_j=0}``, stripping monomial factors and picking the
    sign-normalized associate.
    """
    if not 1 <= i <= seed.rank:
        raise SeedError(f"direction {i} out of range for rank {seed.rank}")
    hat = compute_hat(seed, i)
    fi = seed.exchange(i)
    sym_i = seed.symbol(i)
    new_sym = X(seed.next_index)

    values = {s.symbol: s.ambient for s in seed.slots}
    num = fi.evaluate(values)
    den = seed.ambient(i)
    for j, a in hat.exponents.items():
        if a:
            den = den * seed.ambient(j) ** (-a)
    try:
        new_ambient = exact_divide(num, den)
    except InexactDivisionError:
        raise LaurentPhenomenonError(
            f"mutation at {i} produced a non-Laurent cluster variable", seed, i) from None

    inverse_new = LaurentPolynomial.var(new_sym, -1)
    slots: List[SeedSlot] = []
    for j, slot in enumerate(seed.slots, 1):
        if j == i:
            slots.append(SeedSlot(new_sym, new_ambient, fi))
            continue
        fj = slot.exchange
        if not fj.involves(sym_i):
            slots.append(slot)
            continue
        if hat.exponents[j] != 0:
            raise SeedError(f"slot {j} depends on x_{i} but carries a hat exponent")
        e0 = coefficients_in(fi, slot.symbol)[0]
        restricted = e0[1] if e0[0] == 0 else LaurentPolynomial.constant(0)
        restricted = restricted.mul_monomial(hat.monomial)
        g = fj.evaluate({sym_i: restricted * inverse_new})
        _, h = g.content_split()
        _, d = restricted.content_split()
        h = _strip_common_factors(h, d)
        slots.append(SeedSlot(slot.symbol, slot.ambient, h.normalized()))
    return Seed(tuple(slots), seed.next_index + 1)


def mutate_path(seed: Seed, directions: Iterable[int]) -> Seed:
    for d in directions:
        seed = mutate(seed, d)
    return seed


# ---------------------------------------------------------------------------
# equivalence


def canonicalize(seed: Seed) -> str:
    """Canonical string form; equal exactly for equivalent seeds.

    Slots are keyed by their sign-normalized ambient representation and
    sorted; the slot symbols are renamed ``X1..Xn`` in that order before the
    exchange polynomials are serialized.
    """
    keys = [str(s.ambient.normalized()) for s in seed.slots]
    order = sorted(range(seed.rank), key=keys.__getitem__)
    rename = {seed.slots[p].symbol: X(pos) for pos, p in enumerate(order, 1)}
    return ";".join(f"{keys[p]}|{seed.slots[p].exchange.rename(rename).normalized()}" for p in order)


def seeds_equivalent(a: Seed, b: Seed) -> bool:
    if a.rank != b.rank:
        raise SeedError(f"rank mismatch: {a.rank} vs {b.rank}")
    return canonicalize(a) == canonicalize(b)


def cluster_keys(seed: Seed) -> List[str]:
    return [str(s.ambient.normalized()) for s in seed.slots]


# ---------------------------------------------------------------------------
# JSON


def seed_to_dict(seed: Seed) -> dict:
    """Seed as ``{rank, slots: [{ambient, exchange}]}``.

    Exchange polynomials are written in positional symbols: ``Xp`` stands
    for the cluster variable of slot ``p``.
    """
    rename = {s.symbol: X(p) for p, s in enumerate(seed.slots, 1)}
    return {
        "rank": seed.rank,
        "slots": [
            {"ambient": str(s.ambient), "exchange": str(s.exchange.rename(rename).normalized())}
            for s in seed.slots
        ],
    }


def seed_from_dict(obj: Mapping) -> Seed:
    try:
        rank = int(obj["rank"])
        raw = obj["slots"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SeedError(f"malformed seed JSON: {exc}") from None
    if len(raw) != rank:
        raise SeedError(f"seed JSON declares rank {rank} but has {len(raw)} slots")
    slots = []
    for p, s in enumerate(raw, 1):
        try:
            slots.append(SeedSlot(X(p), parse(s["ambient"]), parse(s["exchange"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise SeedError(f"malformed slot {p}: {exc}") from None
    return Seed(tuple(slots), rank + 1)


def seed_to_json(seed: Seed, pretty: bool = False) -> str:
    return json.dumps(seed_to_dict(seed), indent=2 if pretty else None, sort_keys=False)


def seed_from_json(text: str) -> Seed:
    return seed_from_dict(json.loads(text))
