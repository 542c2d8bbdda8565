"""Digraph seeds, activation sequences and closed forms for the complete graph.

For an activation sequence ``s = (s_1, ..., s_k)`` on ``[n]`` the seed
reached from the binomial complete-graph seed by mutating at
``s_1, ..., s_k`` holds ``X_rho`` in every slot ``rho`` outside ``s`` and
the variable ``Y_{s(r)}`` minted at step ``r`` in slot ``s_r``.  The
closed forms below are written over a symbol table that names those
variables; by default ``Y_{s(r)}`` is the cluster symbol ``X_{n+r}``,
which is exactly what :func:`seed_from_sequence` mints.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

from .poly import ONE, LaurentPolynomial, Monomial, VarRef, A, X, mono_from_exponents
from .seed import Seed, mutate

Poly = LaurentPolynomial


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be positive, got {self.n}")
        for i, j in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise GraphError(f"edge ({i},{j}) has a vertex outside [1,{self.n}]")
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")

    @classmethod
    def complete(cls, n: int) -> "Digraph":
        return cls(n, frozenset((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Digraph":
        edges = [tuple(e) for e in edges]
        if len(set(edges)) != len(edges):
            dup = next(e for e in edges if edges.count(e) > 1)
            raise GraphError(f"duplicate edge {dup}")
        return cls(n, frozenset(edges))

    @classmethod
    def from_dict(cls, obj) -> "Digraph":
        if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
            raise GraphError('digraph JSON must be an object with "n" and "edges"')
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise GraphError(f'"n" must be an integer, got {n!r}')
        edges = []
        for e in obj["edges"]:
            if (not isinstance(e, list) or len(e) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
                raise GraphError(f"edge {e!r} is not a pair of integers")
            edges.append((e[0], e[1]))
        return cls.from_edges(n, edges)

    @classmethod
    def from_json(cls, text: str) -> "Digraph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed digraph JSON: {exc}") from None
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    def out_neighbors(self, i: int) -> List[int]:
        return sorted(j for a, j in self.edges if a == i)


def initial_seed_linear(g: Digraph) -> Seed:
    """``F_i = A_i + sum of X_j over edges i -> j``."""
    exchanges = []
    for i in range(1, g.n + 1):
        f = Poly.var(A(i))
        for j in g.out_neighbors(i):
            f = f + Poly.var(X(j))
        exchanges.append(f)
    return Seed.initial(exchanges)


def initial_seed_binomial(g: Digraph) -> Seed:
    """``F_i = A_i + product of X_j over edges i -> j``."""
    exchanges = []
    for i in range(1, g.n + 1):
        m = mono_from_exponents({X(j): 1 for j in g.out_neighbors(i)})
        exchanges.append(Poly.var(A(i)) + Poly.monomial(m))
    return Seed.initial(exchanges)


def initial_seed(g: Digraph, kind: str) -> Seed:
    if kind == "binomial":
        return initial_seed_binomial(g)
    if kind == "linear":
        return initial_seed_linear(g)
    raise GraphError(f"unknown seed kind {kind!r}; expected 'linear' or 'binomial'")


# ---------------------------------------------------------------------------
# activation sequences


@dataclass(frozen=True)
class ActivationSequence:
    entries: Tuple[int, ...]
    n: int

    def __post_init__(self):
        if len(set(self.entries)) != len(self.entries):
            dup = next(e for e in self.entries if self.entries.count(e) > 1)
            raise GraphError(f"activation sequence repeats {dup}")
        for e in self.entries:
            if not 1 <= e <= self.n:
                raise GraphError(f"activation sequence entry {e} outside [1,{self.n}]")

    @classmethod
    def parse(cls, text: str, n: int) -> "ActivationSequence":
        text = text.strip()
        if not text:
            return cls((), n)
        try:
            entries = tuple(int(t) for t in text.split(","))
        except ValueError:
            raise GraphError(f"cannot parse activation sequence {text!r}") from None
        return cls(entries, n)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, r: int) -> int:
        """1-based access: ``s[r] == s_r``."""
        if not 1 <= r <= len(self.entries):
            raise IndexError(r)
        return self.entries[r - 1]

    def prefix(self, r: int) -> "ActivationSequence":
        return ActivationSequence(self.entries[:r], self.n)

    @property
    def underlying(self) -> FrozenSet[int]:
        return frozenset(self.entries)

    def position(self, ell: int) -> Optional[int]:
        try:
            return self.entries.index(ell) + 1
        except ValueError:
            return None

    def complement(self) -> List[int]:
        return [rho for rho in range(1, self.n + 1) if rho not in self.entries]

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))


def all_sequences(n: int, max_length: Optional[int] = None) -> List[ActivationSequence]:
    """Every activation sequence on ``[n]``, by length then lexicographically."""
    top = n if max_length is None else min(n, max_length)
    out = []
    for k in range(top + 1):
        out.extend(ActivationSequence(p, n) for p in itertools.permutations(range(1, n + 1), k))
    return out


def mutate_sequence(s: ActivationSequence, ell: int) -> ActivationSequence:
    """Append ``ell`` if new, drop it if last, otherwise swap it with its successor."""
    if not 1 <= ell <= s.n:
        raise GraphError(f"direction {ell} outside [1,{s.n}]")
    j = s.position(ell)
    e = list(s.entries)
    if j is None:
        e.append(ell)
    elif j == len(e):
        e.pop()
    else:
        e[j - 1], e[j] = e[j], e[j - 1]
    return ActivationSequence(tuple(e), s.n)


# ---------------------------------------------------------------------------
# closed forms


def sequence_symbols(s: ActivationSequence) -> Dict[int, VarRef]:
    """Default table ``r -> symbol of Y_{s(r)}`` for ``r = 1..k``."""
    return {r: X(s.n + r) for r in range(1, len(s) + 1)}


class _ClosedForm:
    """Polynomials of the recursive family attached to one sequence."""

    def __init__(self, s: ActivationSequence, symbols: Optional[Mapping[int, VarRef]] = None):
        self.s = s
        self.k = len(s)
        self.symbols = dict(symbols) if symbols is not None else sequence_symbols(s)
        self.outside = s.complement()
        self._p: Dict[int, Poly] = {}

    def Y(self, r: int) -> Poly:
        # Y_{s(0)} is 1, and so is Y_{s(k+1)} where the alternative P formula reaches past the end
        if r == 0 or r == self.k + 1:
            return Poly.constant(1)
        return Poly.var(self.symbols[r])

    def a_prod(self, lo: int, hi: int) -> Poly:
        return Poly.monomial(mono_from_exponents({A(self.s[r]): 1 for r in range(lo, hi + 1)}))

    def x_prod(self, skip: Optional[int] = None) -> Poly:
        return Poly.monomial(mono_from_exponents({X(rho): 1 for rho in self.outside if rho != skip}))

    def C(self, i: int) -> Poly:
        return Poly.monomial(mono_from_exponents(
            {self.symbols[r]: 2 ** (r - i - 1) for r in range(i + 2, self.k + 1)}))

    def p_prod(self, lo: int) -> Poly:
        out = Poly.constant(1)
        for r in range(lo, self.k + 1):
            out = out * self.P(r)
        return out

    def P(self, i: int) -> Poly:
        if i not in self._p:
            k = self.k
            if i == k:
                val = self.a_prod(1, k - 1) * self.x_prod() + Poly.var(A(self.s[k])) * self.Y(k - 1)
            else:
                val = (self.a_prod(1, i - 1) * self.x_prod() * self.p_prod(i + 1)
                       + Poly.var(A(self.s[i])) * self.Y(i - 1) * self.Y(i + 1) * self.C(i))
            self._p[i] = val
        return self._p[i]

    def P_alt(self, i: int) -> Poly:
        """Second expression for ``P_{s_i}`` (``i < k``) in terms of ``E_{s_i}``."""
        return (Poly.var(A(self.s[i + 1])) * self.Y(i) * self.Y(i + 2) * self.C(i + 1)
                * self.a_prod(1, i - 1) * self.x_prod() * self.p_prod(i + 2)
                + Poly.var(A(self.s[i])) * self.E_active(i))

    def E_active(self, i: int) -> Poly:
        if i == self.k:
            return self.P(i)
        head = self.a_prod(1, i - 1) * self.x_prod() * self.p_prod(i + 2)
        return head * head + self.Y(i - 1) * self.Y(i + 1) * self.C(i)

    def E_inactive(self, sigma: int) -> Poly:
        return self.a_prod(1, self.k) * self.x_prod(skip=sigma) + Poly.var(A(sigma)) * self.Y(self.k)

    def E(self, ell: int) -> Poly:
        i = self.s.position(ell)
        return self.E_inactive(ell) if i is None else self.E_active(i)


def closed_form_p(s: ActivationSequence, symbols: Optional[Mapping[int, VarRef]] = None,
                  check_alternative: bool = True) -> Dict[int, Poly]:
    """``i -> P_{s_i}`` for positions ``i = 1..k``.

    With ``check_alternative`` each ``P_{s_i}`` (``i < k``) is also built
    from the form that goes through ``E_{s_i}`` and the two are compared.
    """
    cf = _ClosedForm(s, symbols)
    out = {i: cf.P(i) for i in range(1, cf.k + 1)}
    if check_alternative:
        for i in range(1, cf.k):
            if cf.P_alt(i) != out[i]:
                raise AssertionError(f"two expressions for P_{s[i]} disagree on sequence ({s})")
    return out


def closed_form_exchange(s: ActivationSequence, symbols: Optional[Mapping[int, VarRef]] = None) -> Dict[int, Poly]:
    """``ell -> E^s_ell`` for every ``ell`` in ``[n]``."""
    cf = _ClosedForm(s, symbols)
    return {ell: cf.E(ell) for ell in range(1, s.n + 1)}


def closed_form_hat_ratio(s: ActivationSequence, ell: int,
                          symbols: Optional[Mapping[int, VarRef]] = None) -> Monomial:
    """Monomial ``hat(E_ell) / E_ell``: 1 off the sequence, ``1/C_{s_i}`` at ``ell = s_i``."""
    i = s.position(ell)
    if i is None:
        return ONE
    table = dict(symbols) if symbols is not None else sequence_symbols(s)
    return mono_from_exponents({table[r]: -(2 ** (r - i - 1)) for r in range(i + 2, len(s) + 1)})


def closed_form_cluster_variable(s: ActivationSequence) -> Poly:
    """``Y_s`` as a Laurent polynomial in the initial cluster ``X1..Xn``."""
    k = len(s)
    if k == 0:
        raise GraphError("the empty sequence has no cluster variable")
    n = s.n
    num = Poly.constant(0)
    for i in range(1, k + 1):
        a = mono_from_exponents({A(s[j]): 1 for j in range(1, k + 1) if j != i})
        x = mono_from_exponents({X(j): 1 for j in range(1, n + 1) if j != s[i]})
        num = num + Poly.monomial(a).mul_monomial(x)
    num = num + Poly.monomial(mono_from_exponents({A(e): 1 for e in s}))
    return num.mul_monomial(mono_from_exponents({X(e): -1 for e in s}))


def seed_from_sequence(s: ActivationSequence, g: Optional[Digraph] = None, kind: str = "binomial",
                       start: Optional[Seed] = None) -> Seed:
    """Mutate the initial seed of ``g`` (``K_n`` by default) along ``s``."""
    if start is None:
        start = initial_seed(g if g is not None else Digraph.complete(s.n), kind)
    if start.rank != s.n:
        raise GraphError(f"sequence on [{s.n}] does not fit a rank {start.rank} seed")
    seed = start
    for ell in s:
        seed = mutate(seed, ell)
    return seed


# ---------------------------------------------------------------------------
# identity checks; each returns None on success or a one-line reason


def check_exchange_closed_form(s: ActivationSequence, seed: Optional[Seed] = None) -> Optional[str]:
    """Engine exchange polynomials equal the closed forms literally."""
    seed = seed if seed is not None else seed_from_sequence(s)
    cf = closed_form_exchange(s)
    for ell in range(1, s.n + 1):
        if seed.exchange(ell) != cf[ell].normalized():
            return f"slot {ell}: engine {seed.exchange(ell)} != closed form {cf[ell]}"
    try:
        closed_form_p(s, check_alternative=True)
    except AssertionError as exc:
        return str(exc)
    return None


def check_cluster_variable(s: ActivationSequence, seed: Optional[Seed] = None) -> Optional[str]:
    """The last minted variable, expanded in the initial cluster, matches its closed form."""
    if not len(s):
        return None
    seed = seed if seed is not None else seed_from_sequence(s)
    got = seed.ambient(s[len(s)])
    want = closed_form_cluster_variable(s)
    if got != want:
        return f"engine {got} != closed form {want}"
    return None


def check_hat_ratio(s: ActivationSequence, seed: Optional[Seed] = None) -> Optional[str]:
    from .seed import compute_hat

    seed = seed if seed is not None else seed_from_sequence(s)
    for ell in range(1, s.n + 1):
        got = compute_hat(seed, ell).monomial
        want = closed_form_hat_ratio(s, ell)
        if got != want:
            return f"slot {ell}: hat monomial {Poly.monomial(got)} != {Poly.monomial(want)}"
    return None


def check_multiplicity(s: ActivationSequence) -> Optional[str]:
    """``E_{s_j}`` divides ``E_{s_i}`` with ``Y_{s(j)}`` set to 0 exactly ``2^(j-i-1)`` times."""
    from .poly import factor_multiplicity

    k = len(s)
    table = sequence_symbols(s)
    cf = _ClosedForm(s, table)
    for i in range(1, k - 1):
        for j in range(i + 2, k + 1):
            reduced = cf.E_active(i).evaluate({table[j]: Poly.constant(0)})
            got = factor_multiplicity(reduced, cf.E_active(j), laurent=False)
            if got != 2 ** (j - i - 1):
                return f"(i={i}, j={j}): multiplicity {got}, expected {2 ** (j - i - 1)}"
    return None


def check_product_identity(s: ActivationSequence) -> Optional[str]:
    """Relate the ``P`` polynomials of ``s`` to those of ``s`` without its last entry.

    With ``s = (s_1..s_k, sigma)`` and ``0 <= i < k``, substituting
    ``X_sigma <- E_sigma / Y_s`` into ``prod_{r=0..i} P_{s_(k-r)}`` of the
    prefix and scaling by ``Y_s^(2^(i+1)-1)`` gives the same product for ``s``.
    """
    from .poly import RationalFunction, substitute

    k = len(s) - 1
    if k < 1:
        return None
    sigma = s[k + 1]
    table = sequence_symbols(s)
    head = s.prefix(k)
    short = _ClosedForm(head, {r: table[r] for r in range(1, k + 1)})
    full = _ClosedForm(s, table)
    y = Poly.var(table[k + 1])
    value = RationalFunction(short.E(sigma), y)
    for i in range(k):
        lhs = Poly.constant(1)
        rhs = Poly.constant(1)
        for r in range(i + 1):
            lhs = lhs * short.P(k - r)
            rhs = rhs * full.P(k - r)
        got = substitute(lhs, X(sigma), value) * RationalFunction(y ** (2 ** (i + 1) - 1))
        if got != RationalFunction(rhs):
            return f"i={i}: identity fails"
    return None


def check_sequence_action(s: ActivationSequence, ell: int, cache: Optional[Dict] = None) -> Optional[str]:
    """Mutating the seed of ``s`` at ``ell`` lands on the seed of ``mutate_sequence(s, ell)``."""
    from .seed import canonicalize

    def seed_of(t):
        if cache is None:
            return seed_from_sequence(t)
        if t.entries not in cache:
            cache[t.entries] = seed_from_sequence(t)
        return cache[t.entries]

    target = mutate_sequence(s, ell)
    if canonicalize(mutate(seed_of(s), ell)) != canonicalize(seed_of(target)):
        return f"mutation at {ell} does not reach the seed of ({target})"
    return None
