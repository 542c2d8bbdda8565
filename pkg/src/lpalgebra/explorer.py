"""Exchange graphs: breadth-first exploration, sequence labeling and verification."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .graphs import (
    ActivationSequence,
    Digraph,
    all_sequences,
    check_cluster_variable,
    check_exchange_closed_form,
    check_hat_ratio,
    check_multiplicity,
    check_product_identity,
    check_sequence_action,
    closed_form_cluster_variable,
    initial_seed,
    mutate_sequence,
)
from .seed import Seed, canonicalize, mutate, seed_from_dict, seed_to_dict

DEFAULT_MAX_SEEDS = 10_000


class ExplorationError(RuntimeError):
    pass


@dataclass
class ExchangeGraph:
    """Vertices are seeds up to equivalence.

    ``adjacency[v][i - 1]`` is the vertex reached by mutating the stored seed
    of ``v`` at slot ``i`` (``None`` if exploration stopped before it).
    """

    n: int
    keys: List[str] = field(default_factory=list)
    seeds: List[Optional[Seed]] = field(default_factory=list)
    adjacency: List[List[Optional[int]]] = field(default_factory=list)
    root: int = 0
    truncated: bool = False
    index: Dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.keys)

    def add_vertex(self, key: str, seed: Optional[Seed]) -> int:
        v = len(self.keys)
        self.keys.append(key)
        self.seeds.append(seed)
        self.adjacency.append([None] * self.n)
        self.index[key] = v
        return v

    def edges(self) -> Set[Tuple[int, int]]:
        out = set()
        for u, row in enumerate(self.adjacency):
            for v in row:
                if v is not None:
                    out.add((min(u, v), max(u, v)))
        return out

    def labeled_edges(self) -> List[Tuple[int, int, int, int]]:
        """``(u, v, i, j)`` with ``u < v``: slot ``i`` at ``u`` and slot ``j`` at ``v``."""
        out = []
        for u, row in enumerate(self.adjacency):
            for i, v in enumerate(row, 1):
                if v is not None and u < v:
                    j = self.adjacency[v].index(u) + 1 if u in self.adjacency[v] else 0
                    out.append((u, v, i, j))
        return sorted(out)

    def degree(self, v: int) -> int:
        return len({w for w in self.adjacency[v] if w is not None})

    def cluster_variables(self) -> Set[str]:
        out: Set[str] = set()
        for seed in self.seeds:
            if seed is None:
                raise ExplorationError("graph was loaded without seeds")
            out.update(str(s.ambient.normalized()) for s in seed.slots)
        return out

    # -- serialization ------------------------------------------------------

    def to_dict(self, labels: Optional["SequenceLabeling"] = None, include_seeds: bool = True) -> dict:
        vertices = []
        for v, key in enumerate(self.keys):
            entry = {"id": v, "key": key}
            if labels is not None and v in labels.labels:
                entry["sequence"] = str(labels.labels[v])
            if include_seeds and self.seeds[v] is not None:
                entry["seed"] = seed_to_dict(self.seeds[v])
            vertices.append(entry)
        return {
            "n": self.n,
            "root": self.root,
            "truncated": self.truncated,
            "vertices": vertices,
            "edges": [list(e) for e in self.labeled_edges()],
        }

    def to_json(self, labels: Optional["SequenceLabeling"] = None, include_seeds: bool = True,
                pretty: bool = False) -> str:
        return json.dumps(self.to_dict(labels, include_seeds), indent=2 if pretty else None)

    @classmethod
    def from_dict(cls, obj: dict) -> Tuple["ExchangeGraph", Optional["SequenceLabeling"]]:
        try:
            g = cls(int(obj["n"]), root=int(obj.get("root", 0)), truncated=bool(obj.get("truncated", False)))
            labels: Dict[int, ActivationSequence] = {}
            for pos, vert in enumerate(obj["vertices"]):
                if vert["id"] != pos:
                    raise ExplorationError(f"vertex ids must be 0..N-1 in order, found {vert['id']} at {pos}")
                seed = seed_from_dict(vert["seed"]) if "seed" in vert else None
                g.add_vertex(vert["key"], seed)
                if "sequence" in vert:
                    labels[pos] = ActivationSequence.parse(vert["sequence"], g.n)
            for u, v, i, j in obj["edges"]:
                g.adjacency[u][i - 1] = v
                if j:
                    g.adjacency[v][j - 1] = u
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ExplorationError(f"malformed graph JSON: {exc!r}") from None
        return g, (SequenceLabeling(labels) if labels else None)

    @classmethod
    def from_json(cls, text: str) -> Tuple["ExchangeGraph", Optional["SequenceLabeling"]]:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ExplorationError(f"malformed graph JSON: {exc}") from None
        return cls.from_dict(obj)

    def to_dot(self, labels: Optional["SequenceLabeling"] = None) -> str:
        lines = ["graph exchange {"]
        for v in range(len(self)):
            if labels is not None and v in labels.labels:
                text = "(" + str(labels.labels[v]) + ")"
            else:
                text = str(v)
            lines.append(f'  v{v} [label="{text}"];')
        for u, v, i, j in self.labeled_edges():
            if labels is not None and labels.direction(u, v) is not None:
                i, j = labels.direction(u, v), labels.direction(v, u)
            text = str(i) if i == j else f"{i}/{j}"
            lines.append(f'  v{u} -- v{v} [label="{text}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exploration


def _expand(seed: Seed) -> List[Tuple[Seed, str]]:
    out = []
    for i in range(1, seed.rank + 1):
        child = mutate(seed, i)
        out.append((child, canonicalize(child)))
    return out


def explore(start: Seed, max_seeds: int = DEFAULT_MAX_SEEDS, threads: int = 1) -> ExchangeGraph:
    """Breadth-first search over all mutation directions.

    Each level is processed in canonical-key order and directions in
    ascending order, so vertex numbering does not depend on ``threads``.

    Every edge is checked to be an involution: the slot holding the new
    variable in the neighbour must lead straight back.  A failure raises
    ``ExplorationError``.
    """
    if max_seeds < 1:
        raise ValueError("max_seeds must be positive")
    g = ExchangeGraph(start.rank)
    g.add_vertex(canonicalize(start), start)
    frontier = [0]
    # (u, i, v, ambient key of the variable that slot i of u turned into)
    back_edges: List[Tuple[int, int, int, str]] = []
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            frontier.sort(key=g.keys.__getitem__)
            seeds = [g.seeds[v] for v in frontier]
            results = pool.map(_expand, seeds, chunksize=4) if pool else map(_expand, seeds)
            nxt = []
            for u, children in zip(frontier, results):
                for i, (child, key) in enumerate(children, 1):
                    v = g.index.get(key)
                    if v is None:
                        if len(g) >= max_seeds:
                            g.truncated = True
                            continue
                        v = g.add_vertex(key, child)
                        nxt.append(v)
                    g.adjacency[u][i - 1] = v
                    back_edges.append((u, i, v, str(child.ambient(i).normalized())))
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    for u, i, v, amb in back_edges:
        slot = next(p for p, s in enumerate(g.seeds[v].slots, 1) if str(s.ambient.normalized()) == amb)
        w = g.adjacency[v][slot - 1]
        if w is not None and w != u:
            raise ExplorationError(f"mutating vertex {u} at {i} and back does not return to {u}")
    return g


def expected_seed_count(n: int) -> int:
    return sum(factorial(n) // factorial(k) for k in range(n + 1))


def expected_variable_count(n: int) -> int:
    return 2 ** n + n - 1


@dataclass
class CountReport:
    seeds: int
    expected_seeds: int
    variables: int
    expected_variables: int
    regular: bool

    @property
    def ok(self) -> bool:
        return self.seeds == self.expected_seeds and self.variables == self.expected_variables and self.regular

    def describe(self) -> str:
        text = f"seeds {self.seeds}/{self.expected_seeds}, variables {self.variables}/{self.expected_variables}"
        return text if self.regular else text + ", not regular"

    def __str__(self) -> str:
        return self.describe() + (", PASS" if self.ok else ", FAIL")


def verify_counts(g: ExchangeGraph, n: int) -> CountReport:
    if g.truncated:
        raise ExplorationError("cannot verify counts on a truncated graph")
    regular = all(g.degree(v) == n and v not in g.adjacency[v] for v in range(len(g)))
    return CountReport(len(g), expected_seed_count(n), len(g.cluster_variables()),
                       expected_variable_count(n), regular)


# ---------------------------------------------------------------------------
# sequence labeling and isomorphism


@dataclass
class SequenceLabeling:
    labels: Dict[int, ActivationSequence]

    def vertex_of(self) -> Dict[Tuple[int, ...], int]:
        return {s.entries: v for v, s in self.labels.items()}

    def direction(self, u: int, v: int) -> Optional[int]:
        """The ``ell`` with ``mutate_sequence(label(u), ell) == label(v)``."""
        s, t = self.labels.get(u), self.labels.get(v)
        if s is None or t is None:
            return None
        return next((ell for ell in range(1, s.n + 1) if mutate_sequence(s, ell) == t), None)


class LabelingError(RuntimeError):
    def __init__(self, message: str, vertex: int, direction: int,
                 expected: Optional[ActivationSequence] = None, found: Optional[ActivationSequence] = None):
        super().__init__(message)
        self.vertex = vertex
        self.direction = direction
        self.expected = expected
        self.found = found


class _SequenceSeeds:
    """Seeds obtained by mutating the root along a sequence, memoized by prefix."""

    def __init__(self, root: Seed):
        self.cache: Dict[Tuple[int, ...], Seed] = {(): root}

    def __call__(self, s: ActivationSequence) -> Seed:
        e = s.entries
        if e not in self.cache:
            self.cache[e] = mutate(self(s.prefix(len(e) - 1)), e[-1])
        return self.cache[e]


def label_by_sequences(g: ExchangeGraph) -> SequenceLabeling:
    """Label every vertex by the activation sequence that generates its seed.

    The root gets the empty sequence.  Crossing direction ``ell`` from the
    vertex of ``s`` must reach the vertex of ``mutate_sequence(s, ell)``;
    the first edge where that fails raises ``LabelingError``.
    """
    if g.truncated:
        raise ExplorationError("cannot label a truncated graph")
    root_seed = g.seeds[g.root]
    if root_seed is None:
        raise ExplorationError("graph was loaded without seeds")
    n = g.n
    seed_of = _SequenceSeeds(root_seed)
    labels = {g.root: ActivationSequence((), n)}
    owner = {(): g.root}
    queue = [g.root]
    for u in queue:
        s = labels[u]
        ordered = seed_of(s)
        if canonicalize(ordered) != g.keys[u]:
            raise LabelingError(f"vertex {u} does not hold the seed of ({s})", u, 0, s)
        stored = g.seeds[u]
        where = {str(slot.ambient.normalized()): p for p, slot in enumerate(stored.slots, 1)}
        for ell in range(1, n + 1):
            slot = where[str(ordered.ambient(ell).normalized())]
            v = g.adjacency[u][slot - 1]
            t = mutate_sequence(s, ell)
            if v is None:
                raise LabelingError(f"vertex {u} has no neighbour in direction {ell}", u, ell, t)
            if v in labels:
                if labels[v] != t:
                    raise LabelingError(
                        f"edge {u}--{v} in direction {ell}: expected ({t}), vertex is labeled ({labels[v]})",
                        u, ell, t, labels[v])
            else:
                if t.entries in owner:
                    raise LabelingError(
                        f"edge {u}--{v} in direction {ell}: ({t}) already labels vertex {owner[t.entries]}",
                        u, ell, t)
                labels[v] = t
                owner[t.entries] = v
                queue.append(v)
    if len(labels) != len(g):
        raise LabelingError(f"only {len(labels)} of {len(g)} vertices reachable", g.root, 0)
    return SequenceLabeling(labels)


class IsomorphismError(RuntimeError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def verify_isomorphism(a: ExchangeGraph, b: ExchangeGraph, la: Optional[SequenceLabeling] = None,
                       lb: Optional[SequenceLabeling] = None) -> Dict[int, int]:
    """Match vertices with equal sequence labels and check every edge maps to an edge."""
    la = la or label_by_sequences(a)
    lb = lb or label_by_sequences(b)
    va, vb = la.vertex_of(), lb.vertex_of()
    if set(va) != set(vb):
        missing = sorted(set(va) ^ set(vb))[0]
        raise IsomorphismError(f"label sets differ, e.g. {missing}", missing)
    phi = {va[s]: vb[s] for s in va}
    ea, eb = a.edges(), b.edges()
    for u, v in sorted(ea):
        x, y = phi[u], phi[v]
        if (min(x, y), max(x, y)) not in eb:
            raise IsomorphismError(f"edge {u}--{v} maps to non-edge {x}--{y}", (u, v))
    if len(ea) != len(eb):
        raise IsomorphismError(f"edge counts differ: {len(ea)} vs {len(eb)}", (len(ea), len(eb)))
    return phi


# ---------------------------------------------------------------------------
# verification suite

SEQUENCE_CHECKS = {
    "thm42": check_exchange_closed_form,
    "prop33": check_hat_ratio,
    "lem32": check_multiplicity,
    "lem41": check_product_identity,
    "cor43": check_cluster_variable,
}
ALL_CHECKS = ("counts", "thm42", "prop33", "lem32", "lem41", "cor43", "thm45", "iso")


@dataclass
class CheckResult:
    check: str
    subject: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteReport:
    n: int
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def summary(self) -> List[Tuple[str, str, bool]]:
        """One ``(check, text, ok)`` row per check, in the order first run."""
        rows = []
        seen: Dict[str, List[CheckResult]] = {}
        for r in self.results:
            seen.setdefault(r.check, []).append(r)
        for name, rs in seen.items():
            if len(rs) == 1 and rs[0].subject == "graph":
                rows.append((name, rs[0].detail, rs[0].ok))
            else:
                good = sum(r.ok for r in rs)
                rows.append((name, f"{good}/{len(rs)} cases", good == len(rs)))
        return rows

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.ok]


def _run(check, *args) -> Tuple[bool, str]:
    try:
        reason = check(*args)
    except Exception as exc:  # a crash inside a check is a failed check, reported with its cause
        return False, f"{type(exc).__name__}: {exc}"
    return reason is None, reason or ""


def verify_suite(n: int, checks: Optional[Iterable[str]] = None, max_length: Optional[int] = None,
                       max_seeds: int = DEFAULT_MAX_SEEDS, threads: int = 1) -> SuiteReport:
    """Run the requested checks on ``K_n`` and report each (check, case) pair."""
    wanted = list(ALL_CHECKS if checks is None else checks)
    unknown = [c for c in wanted if c not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown check {unknown[0]!r}; choose from {','.join(ALL_CHECKS)}")
    report = SuiteReport(n)
    kn = Digraph.complete(n)
    sequences = all_sequences(n, max_length)
    graphs: Dict[str, ExchangeGraph] = {}
    labelings: Dict[str, Optional[SequenceLabeling]] = {}

    def graph(kind):
        if kind not in graphs:
            graphs[kind] = explore(initial_seed(kn, kind), max_seeds=max_seeds, threads=threads)
        return graphs[kind]

    def labeling(kind):
        if kind not in labelings:
            try:
                labelings[kind] = label_by_sequences(graph(kind))
            except (LabelingError, ExplorationError) as exc:
                labelings[kind] = None
                report.results.append(CheckResult("thm45", kind, False, str(exc)))
        return labelings[kind]

    seed_of = _SequenceSeeds(initial_seed(kn, "binomial"))
    for name in wanted:
        if name == "counts":
            # the binomial graph is reported; the linear one only adds a note when it disagrees
            try:
                main, other = (verify_counts(graph(kind), n) for kind in ("binomial", "linear"))
            except ExplorationError as exc:
                report.results.append(CheckResult("counts", "graph", False, str(exc)))
                continue
            detail = main.describe()
            if not other.ok:
                detail += f"; linear {other.describe()}"
            report.results.append(CheckResult("counts", "graph", main.ok and other.ok, detail))
        elif name in SEQUENCE_CHECKS:
            fn = SEQUENCE_CHECKS[name]
            for s in sequences:
                args = (s,) if name in ("lem32", "lem41") else (s, seed_of(s))
                ok, why = _run(fn, *args)
                report.results.append(CheckResult(name, f"({s})", ok, why))
            if name == "cor43":
                ok, why = _run(_check_cluster_variable_symmetry, sequences)
                report.results.append(CheckResult(name, "symmetry", ok, why))
        elif name == "thm45":
            cache = {e: sd for e, sd in seed_of.cache.items()}
            for s in sequences:
                for ell in range(1, n + 1):
                    ok, why = _run(check_sequence_action, s, ell, cache)
                    report.results.append(CheckResult(name, f"({s}) at {ell}", ok, why))
            for kind in ("binomial", "linear"):
                if labeling(kind) is not None:
                    report.results.append(CheckResult(name, f"labeling {kind}", True))
        elif name == "iso":
            la, lb = labeling("binomial"), labeling("linear")
            if la is None or lb is None:
                report.results.append(CheckResult(name, "graph", False, "labeling failed"))
                continue
            try:
                phi = verify_isomorphism(graph("binomial"), graph("linear"), la, lb)
                report.results.append(CheckResult(
                    name, "graph", True, f"bijection on {len(phi)} vertices, {len(graph('binomial').edges())} edges"))
            except IsomorphismError as exc:
                report.results.append(CheckResult(name, "graph", False, str(exc)))
    return report


def _check_cluster_variable_symmetry(sequences: Sequence[ActivationSequence]) -> Optional[str]:
    by_set: Dict[frozenset, object] = {}
    for s in sequences:
        if not len(s):
            continue
        y = closed_form_cluster_variable(s)
        prev = by_set.setdefault(s.underlying, y)
        if prev != y:
            return f"({s}) differs from another ordering of the same set"
    values = list(by_set.values())
    if len(set(values)) != len(values):
        return "two different underlying sets give the same cluster variable"
    return None
