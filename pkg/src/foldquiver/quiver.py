"""Quivers with an admissible automorphism and their split-quotient quivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

VertexId = Hashable
ArrowId = Hashable


def id_key(x) -> tuple:
    """Total order on mixed vertex/arrow ids: ints, then strings, then tuples."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(id_key(y) for y in x))
    return (3, repr(x))


@dataclass(frozen=True)
class Arrow:
    id: ArrowId
    src: VertexId
    tgt: VertexId
    bar: ArrowId


class Quiver:
    """Vertices, arrows closed under bar, and an orientation Omega."""

    def __init__(self, vertices: Iterable[VertexId], arrows: Iterable[Arrow],
                 orientation: Iterable[ArrowId]):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.orientation = frozenset(orientation)
        self._arrow = {h.id: h for h in self.arrows}
        self._vertex_set = frozenset(self.vertices)
        self.oriented_arrows = tuple(h for h in self.arrows if h.id in self.orientation)

    @classmethod
    def from_edges(cls, vertices: Sequence[VertexId], edges: Sequence[tuple]) -> "Quiver":
        """Build from oriented edges (src, tgt); each gets a reversed partner.

        Arrow ids are "s->t" strings, suffixed with "#k" for parallel edges.
        """
        arrows: list[Arrow] = []
        orientation = []
        seen: dict[tuple, int] = {}
        for s, t in edges:
            key = (s, t)
            count = seen.get(key, 0)
            seen[key] = count + 1
            suffix = f"#{count}" if count else ""
            fwd, bwd = f"{s}->{t}{suffix}", f"{t}->{s}{suffix}"
            arrows.append(Arrow(fwd, s, t, bwd))
            arrows.append(Arrow(bwd, t, s, fwd))
            orientation.append(fwd)
        return cls(vertices, arrows, orientation)

    def arrow(self, h: ArrowId) -> Arrow:
        return self._arrow[h]

    def has_arrow(self, h: ArrowId) -> bool:
        return h in self._arrow

    def has_vertex(self, i: VertexId) -> bool:
        return i in self._vertex_set

    def src(self, h: ArrowId) -> VertexId:
        return self._arrow[h].src

    def tgt(self, h: ArrowId) -> VertexId:
        return self._arrow[h].tgt

    def bar(self, h: ArrowId) -> ArrowId:
        return self._arrow[h].bar

    def arrows_between(self, s: VertexId, t: VertexId) -> list[ArrowId]:
        return [h.id for h in self.arrows if h.src == s and h.tgt == t]

    def neighbours(self, i: VertexId) -> list[VertexId]:
        out = []
        for h in self.arrows:
            if h.src == i and h.tgt not in out:
                out.append(h.tgt)
        return out

    def violations(self) -> list[str]:
        problems = []
        for h in self.arrows:
            if h.src not in self._vertex_set or h.tgt not in self._vertex_set:
                problems.append(f"arrow {h.id!r} has an endpoint outside the vertex set")
            if h.src == h.tgt:
                problems.append(f"loop at arrow {h.id!r}")
            if h.bar not in self._arrow:
                problems.append(f"bar of {h.id!r} is not an arrow")
                continue
            partner = self._arrow[h.bar]
            if partner.bar != h.id or h.bar == h.id:
                problems.append(f"bar is not a fixed-point-free involution at {h.id!r}")
            if partner.src != h.tgt or partner.tgt != h.src:
                problems.append(f"bar of {h.id!r} does not reverse it")
        for h in self.orientation:
            if h not in self._arrow:
                problems.append(f"orientation names unknown arrow {h!r}")
            elif self._arrow[h].bar in self.orientation:
                problems.append(f"orientation contains both {h!r} and its bar")
        if any(h.id not in self.orientation and h.bar not in self.orientation for h in self.arrows):
            problems.append("orientation does not meet every bar-pair")
        if self._has_oriented_cycle():
            problems.append("orientation contains an oriented cycle")
        return problems

    def _has_oriented_cycle(self) -> bool:
        indegree = {i: 0 for i in self.vertices}
        for h in self.oriented_arrows:
            indegree[h.tgt] = indegree.get(h.tgt, 0) + 1
        queue = [i for i, d in indegree.items() if d == 0]
        removed = 0
        while queue:
            i = queue.pop()
            removed += 1
            for h in self.oriented_arrows:
                if h.src == i:
                    indegree[h.tgt] -= 1
                    if indegree[h.tgt] == 0:
                        queue.append(h.tgt)
        return removed != len(indegree)

    def to_json(self) -> dict:
        return {
            "vertices": [_id_to_json(i) for i in self.vertices],
            "arrows": [{"id": _id_to_json(h.id), "src": _id_to_json(h.src),
                        "tgt": _id_to_json(h.tgt), "bar": _id_to_json(h.bar)} for h in self.arrows],
            "orientation": [_id_to_json(h.id) for h in self.oriented_arrows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        arrows = [Arrow(_id_from_json(a["id"]), _id_from_json(a["src"]), _id_from_json(a["tgt"]),
                        _id_from_json(a["bar"])) for a in data["arrows"]]
        return cls([_id_from_json(i) for i in data["vertices"]], arrows,
                   [_id_from_json(h) for h in data["orientation"]])

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.oriented_arrows)} edges)"


def _id_to_json(x):
    if isinstance(x, tuple):
        return [_id_to_json(y) for y in x]
    return x


def _id_from_json(x):
    if isinstance(x, list):
        return tuple(_id_from_json(y) for y in x)
    return x


class AdmAut:
    """A quiver automorphism together with the period n (a multiple of its order)."""

    def __init__(self, quiver: Quiver, vertex_perm: dict, arrow_perm: dict, period: int):
        if period < 1:
            raise ValueError("period must be positive")
        self.quiver = quiver
        self.vertex_perm = dict(vertex_perm)
        self.arrow_perm = dict(arrow_perm)
        self.period = period
        self._inverse_vertex = {v: k for k, v in self.vertex_perm.items()}
        self._inverse_arrow = {v: k for k, v in self.arrow_perm.items()}

    @classmethod
    def identity(cls, quiver: Quiver, period: int = 1) -> "AdmAut":
        return cls(quiver, {i: i for i in quiver.vertices}, {h.id: h.id for h in quiver.arrows}, period)

    @classmethod
    def from_vertex_perm(cls, quiver: Quiver, vertex_perm: dict, period: int) -> "AdmAut":
        """Induce the arrow permutation from the vertex permutation.

        Parallel arrows are matched in list order.  Arrows whose image does
        not exist stay unmapped, which validate() reports.
        """
        arrow_perm = {}
        for h in quiver.arrows:
            s, t = vertex_perm.get(h.src), vertex_perm.get(h.tgt)
            same = [g.id for g in quiver.arrows if g.src == h.src and g.tgt == h.tgt]
            images = quiver.arrows_between(s, t)
            position = same.index(h.id)
            if position < len(images):
                arrow_perm[h.id] = images[position]
        return cls(quiver, vertex_perm, arrow_perm, period)

    def vertex(self, i: VertexId, times: int = 1) -> VertexId:
        if times < 0:
            for _ in range(-times):
                i = self._inverse_vertex[i]
            return i
        for _ in range(times):
            i = self.vertex_perm[i]
        return i

    def arrow(self, h: ArrowId, times: int = 1) -> ArrowId:
        if times < 0:
            for _ in range(-times):
                h = self._inverse_arrow[h]
            return h
        for _ in range(times):
            h = self.arrow_perm[h]
        return h

    def vertex_orbit(self, i: VertexId) -> list[VertexId]:
        orbit = [i]
        j = self.vertex_perm[i]
        while j != i:
            orbit.append(j)
            j = self.vertex_perm[j]
        return orbit

    def arrow_orbit(self, h: ArrowId) -> list[ArrowId]:
        orbit = [h]
        g = self.arrow_perm[h]
        while g != h:
            orbit.append(g)
            g = self.arrow_perm[g]
        return orbit

    def d_vertex(self, i: VertexId) -> int:
        return len(self.vertex_orbit(i))

    def d_arrow(self, h: ArrowId) -> int:
        return len(self.arrow_orbit(h))

    def e_vertex(self, i: VertexId) -> int:
        return self.period // self.d_vertex(i)

    def e_arrow(self, h: ArrowId) -> int:
        return self.period // self.d_arrow(h)

    def to_json(self) -> dict:
        return {
            "vertex_perm": [[_id_to_json(k), _id_to_json(v)] for k, v in self.vertex_perm.items()],
            "arrow_perm": [[_id_to_json(k), _id_to_json(v)] for k, v in self.arrow_perm.items()],
            "period": self.period,
        }

    @classmethod
    def from_json(cls, quiver: Quiver, data: dict) -> "AdmAut":
        def pairs(raw):
            if isinstance(raw, dict):
                return {_id_from_json(k): _id_from_json(v) for k, v in raw.items()}
            return {_id_from_json(k): _id_from_json(v) for k, v in raw}
        return cls(quiver, _coerce_keys(quiver.vertices, pairs(data["vertex_perm"])),
                   _coerce_keys([h.id for h in quiver.arrows], pairs(data["arrow_perm"])),
                   int(data["period"]))


def _coerce_keys(ids, mapping: dict) -> dict:
    """JSON object keys are strings; map them back to the quiver's ids."""
    by_text = {str(i): i for i in ids}
    return {by_text.get(str(k), k): by_text.get(str(v), v) for k, v in mapping.items()}


def validate(q: Quiver, a: AdmAut) -> list[str]:
    """Every violated quiver or admissibility condition; empty means valid."""
    problems = list(q.violations())
    vertices = set(q.vertices)
    arrow_ids = {h.id for h in q.arrows}
    if set(a.vertex_perm) != vertices or set(a.vertex_perm.values()) != vertices:
        problems.append("vertex_perm is not a permutation of the vertices")
        return problems
    if set(a.arrow_perm) != arrow_ids or set(a.arrow_perm.values()) != arrow_ids:
        problems.append("arrow_perm is not a permutation of the arrows")
    for h in q.arrows:
        image = a.arrow_perm.get(h.id)
        if image is None or image not in arrow_ids:
            continue
        if q.src(image) != a.vertex_perm[h.src]:
            problems.append(f"source not preserved at {h.id!r}")
        if q.tgt(image) != a.vertex_perm[h.tgt]:
            problems.append(f"target not preserved at {h.id!r}")
        if a.arrow_perm.get(h.bar) != q.bar(image):
            problems.append(f"bar not preserved at {h.id!r}")
        if (h.id in q.orientation) != (image in q.orientation):
            problems.append(f"orientation not preserved at {h.id!r}")
    for h in q.arrows:
        if h.tgt in a.vertex_orbit(h.src):
            problems.append(f"adjacent orbit: {h.src!r} and {h.tgt!r} share an orbit")
            break
    for i in q.vertices:
        if a.period % a.d_vertex(i):
            problems.append(f"period not divisible by the orbit size at vertex {i!r}")
    if set(a.arrow_perm) == arrow_ids and set(a.arrow_perm.values()) == arrow_ids:
        for h in q.arrows:
            if a.period % a.d_arrow(h.id):
                problems.append(f"period not divisible by the orbit size at arrow {h.id!r}")
    return problems


# ------------------------------------------------------------ split quotient


@dataclass(frozen=True)
class HatArrow:
    """An orbit of arrows, named by its least member."""

    id: ArrowId
    members: tuple
    src: VertexId
    tgt: VertexId
    bar: ArrowId
    oriented: bool
    d: int
    e: int


@dataclass
class SplitQuotient:
    """Quotient data (I^, H^, Omega^) and the split quiver with its automorphism.

    Split vertices are (i, p) with i in I^ and p a multiple of d_i in
    [0, n): the pair stands for (i, eta^p) with eta = zeta_n.  Split arrows
    are (h^, p, p').
    """

    quiver: Quiver
    aut: AdmAut
    representatives: tuple
    vertex_rep: dict
    hat_arrows: dict
    arrow_hat: dict
    split: Quiver
    split_aut: AdmAut
    root_exponents: dict = field(default_factory=dict)

    @property
    def period(self) -> int:
        return self.aut.period

    def d(self, i) -> int:
        return self.aut.d_vertex(i)

    def e(self, i) -> int:
        return self.aut.e_vertex(i)


def vertex_representatives(a: AdmAut) -> tuple[tuple, dict]:
    reps = []
    rep_of = {}
    for i in sorted(a.quiver.vertices, key=id_key):
        if i in rep_of:
            continue
        orbit = a.vertex_orbit(i)
        rep = min(orbit, key=id_key)
        reps.append(rep)
        for j in orbit:
            rep_of[j] = rep
    return tuple(reps), rep_of


def split_quotient(q: Quiver, a: AdmAut) -> SplitQuotient:
    problems = validate(q, a)
    if problems:
        raise ValueError("not an admissible automorphism: " + "; ".join(problems))
    n = a.period
    reps, rep_of = vertex_representatives(a)
    hat_arrows: dict = {}
    arrow_hat: dict = {}
    for h in sorted(q.arrows, key=lambda g: id_key(g.id)):
        if h.id in arrow_hat:
            continue
        orbit = tuple(a.arrow_orbit(h.id))
        name = min(orbit, key=id_key)
        for g in orbit:
            arrow_hat[g] = name
    for name in sorted(set(arrow_hat.values()), key=id_key):
        members = tuple(g for g in a.arrow_orbit(name))
        d = len(members)
        hat_arrows[name] = HatArrow(
            id=name, members=members, src=rep_of[q.src(name)], tgt=rep_of[q.tgt(name)],
            bar=arrow_hat[q.bar(name)], oriented=name in q.orientation, d=d, e=n // d)
    exponents = {i: tuple(range(0, n, a.d_vertex(i))) for i in reps}
    split_vertices = [(i, p) for i in reps for p in exponents[i]]
    split_arrows = []
    split_orientation = []
    for hat in hat_arrows.values():
        ds, dt = a.d_vertex(hat.src), a.d_vertex(hat.tgt)
        # zeta^(e_s/e_h) = zeta'^(e_t/e_h) with e_s/e_h = d_h/d_s.
        for p in exponents[hat.src]:
            for pp in exponents[hat.tgt]:
                if (p * (hat.d // ds) - pp * (hat.d // dt)) % n == 0:
                    arrow_id = (hat.id, p, pp)
                    split_arrows.append(Arrow(arrow_id, (hat.src, p), (hat.tgt, pp), (hat.bar, pp, p)))
                    if hat.oriented:
                        split_orientation.append(arrow_id)
    split = Quiver(split_vertices, split_arrows, split_orientation)
    vperm = {(i, p): (i, (p + a.d_vertex(i)) % n) for i, p in split_vertices}
    aperm = {}
    for arrow in split_arrows:
        name, p, pp = arrow.id
        hat = hat_arrows[name]
        aperm[arrow.id] = (name, (p + a.d_vertex(hat.src)) % n, (pp + a.d_vertex(hat.tgt)) % n)
    split_aut = AdmAut(split, vperm, aperm, n)
    return SplitQuotient(q, a, reps, rep_of, hat_arrows, arrow_hat, split, split_aut, exponents)


@dataclass(frozen=True)
class CartanMatrix:
    labels: tuple
    entries: tuple

    def __getitem__(self, key):
        i, j = key
        return self.entries[self.labels.index(i)][self.labels.index(j)]

    def transpose(self) -> "CartanMatrix":
        size = len(self.labels)
        return CartanMatrix(self.labels, tuple(tuple(self.entries[j][i] for j in range(size))
                                               for i in range(size)))

    def relabel(self, mapping: dict) -> "CartanMatrix":
        return CartanMatrix(tuple(mapping[i] for i in self.labels), self.entries)

    def reordered(self, labels: Sequence) -> "CartanMatrix":
        return CartanMatrix(tuple(labels), tuple(tuple(self[i, j] for j in labels) for i in labels))


def cartan(q: Quiver, a: AdmAut) -> CartanMatrix:
    """-c_ij = |{h : s(h) in orbit(i), t(h) in orbit(j)}| / d_i for i != j."""
    reps, rep_of = vertex_representatives(a)
    counts = {(i, j): 0 for i in reps for j in reps}
    for h in q.arrows:
        counts[rep_of[h.src], rep_of[h.tgt]] += 1
    rows = []
    for i in reps:
        row = []
        for j in reps:
            if i == j:
                row.append(2)
                continue
            value = Fraction(counts[i, j], a.d_vertex(i))
            if value.denominator != 1:
                raise ArithmeticError(f"non-integral Cartan entry at {(i, j)}")
            row.append(-int(value))
        rows.append(tuple(row))
    return CartanMatrix(tuple(reps), tuple(rows))


def split_cartan_matches_transpose(sq: SplitQuotient) -> bool:
    """The split quotient's Cartan matrix is the transpose of the original's."""
    original = cartan(sq.quiver, sq.aut)
    folded = cartan(sq.split, sq.split_aut)
    # ~a-orbit representatives are (i, 0); identify them with i.
    renamed = folded.relabel({label: label[0] for label in folded.labels})
    return renamed.reordered(original.labels) == original.transpose()


def edge_orbit_reps(q: Quiver, a: AdmAut) -> dict:
    """For each orbit in Omega: its representative h1 with s(h1) = s(h^) and
    the exponent f with t(h1) = a^f(t(h^)), 0 <= f < d_t(h^)."""
    reps, rep_of = vertex_representatives(a)
    chosen = {}
    done = set()
    for h in sorted(q.oriented_arrows, key=lambda g: id_key(g.id)):
        if h.id in done:
            continue
        orbit = a.arrow_orbit(h.id)
        done.update(orbit)
        source_rep = rep_of[h.src]
        candidates = sorted((g for g in orbit if q.src(g) == source_rep), key=id_key)
        h1 = candidates[0]
        target_rep = rep_of[q.tgt(h1)]
        f = 0
        while a.vertex(target_rep, f) != q.tgt(h1):
            f += 1
        chosen[h1] = f
    return chosen


def find_isomorphism(q1: Quiver, q2: Quiver, respect_orientation: bool = True) -> dict | None:
    """Vertex bijection preserving edge multiplicities (and orientation if asked)."""
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return None

    def multiplicity(q: Quiver):
        table: dict = {}
        arrows = q.oriented_arrows if respect_orientation else q.arrows
        for h in arrows:
            table[h.src, h.tgt] = table.get((h.src, h.tgt), 0) + 1
        return table

    m1, m2 = multiplicity(q1), multiplicity(q2)

    def degree(q, table, i):
        return (sum(c for (s, _), c in table.items() if s == i),
                sum(c for (_, t), c in table.items() if t == i))

    deg1 = {i: degree(q1, m1, i) for i in q1.vertices}
    deg2 = {i: degree(q2, m2, i) for i in q2.vertices}
    order = sorted(q1.vertices, key=lambda i: -sum(deg1[i]))
    mapping: dict = {}
    used: set = set()

    def consistent(i, j) -> bool:
        for k, l in mapping.items():
            if m1.get((i, k), 0) != m2.get((j, l), 0) or m1.get((k, i), 0) != m2.get((l, j), 0):
                return False
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        for j in q2.vertices:
            if j in used or deg1[i] != deg2[j] or not consistent(i, j):
                continue
            mapping[i] = j
            used.add(j)
            if search(pos + 1):
                return True
            del mapping[i]
            used.discard(j)
        return False

    return dict(mapping) if search(0) else None


# ------------------------------------------------------------------ fixtures


def type_a(n: int) -> Quiver:
    """A_{2n-1} on 1..2n-1 oriented towards the middle vertex n."""
    m = 2 * n - 1
    edges = [(i, i + 1) if i < n else (i + 1, i) for i in range(1, m)]
    return Quiver.from_edges(list(range(1, m + 1)), edges)


def type_a_involution(n: int) -> tuple[Quiver, AdmAut]:
    q = type_a(n)
    m = 2 * n - 1
    return q, AdmAut.from_vertex_perm(q, {i: 2 * n - i for i in range(1, m + 1)}, 2)


def type_d(n: int) -> Quiver:
    """D_{n+1} on 1..n-1, '+', '-' with arrows towards the fork."""
    if n < 2:
        raise ValueError("D_{n+1} needs n >= 2")
    vertices = list(range(1, n)) + ["+", "-"]
    edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 1, "+"), (n - 1, "-")]
    return Quiver.from_edges(vertices, edges)


def type_d_involution(n: int) -> tuple[Quiver, AdmAut]:
    q = type_d(n)
    perm = {i: i for i in range(1, n)}
    perm.update({"+": "-", "-": "+"})
    return q, AdmAut.from_vertex_perm(q, perm, 2)


def affine_a3_rotation() -> tuple[Quiver, AdmAut]:
    q = Quiver.from_edges([0, 1, 2, 3], [(1, 2), (3, 2), (1, 0), (3, 0)])
    return q, AdmAut.from_vertex_perm(q, {0: 2, 1: 3, 2: 0, 3: 1}, 2)


def affine_a_reflection(n: int) -> tuple[Quiver, AdmAut]:
    """Cycle on 0..2n-1 oriented away from 0 towards n, with i -> -i."""
    size = 2 * n
    edges = []
    for i in range(n):
        edges.append((i, i + 1))
        edges.append(((size - i) % size, size - i - 1))
    q = Quiver.from_edges(list(range(size)), edges)
    return q, AdmAut.from_vertex_perm(q, {i: (-i) % size for i in range(size)}, 2)


def identity_copies(q: Quiver, period: int) -> tuple[Quiver, AdmAut]:
    return q, AdmAut.identity(q, period)


def d4_triality() -> tuple[Quiver, AdmAut]:
    q = Quiver.from_edges([0, 1, 2, 3], [(1, 0), (2, 0), (3, 0)])
    return q, AdmAut.from_vertex_perm(q, {0: 0, 1: 2, 2: 3, 3: 1}, 3)


def affine_d4_triality() -> tuple[Quiver, AdmAut]:
    q = Quiver.from_edges([0, 1, 2, 3, 4], [(1, 0), (2, 0), (3, 0), (4, 0)])
    return q, AdmAut.from_vertex_perm(q, {0: 0, 1: 2, 2: 3, 3: 1, 4: 4}, 3)


def affine_d4_involution() -> tuple[Quiver, AdmAut]:
    q = Quiver.from_edges([0, 1, 2, 3, 4], [(1, 0), (2, 0), (3, 0), (4, 0)])
    return q, AdmAut.from_vertex_perm(q, {0: 0, 1: 2, 2: 1, 3: 3, 4: 4}, 2)


def e6_involution() -> tuple[Quiver, AdmAut]:
    """E6 with centre 0, arms 1-2, 3-4, 5-6; swaps the arms 3-4 and 5-6."""
    q = Quiver.from_edges(list(range(7)), [(2, 1), (1, 0), (4, 3), (3, 0), (6, 5), (5, 0)])
    return q, AdmAut.from_vertex_perm(q, {0: 0, 1: 1, 2: 2, 3: 5, 4: 6, 5: 3, 6: 4}, 2)


def folding_fixtures() -> dict[str, tuple[Quiver, AdmAut]]:
    fixtures = {f"A{2 * n - 1}-involution": type_a_involution(n) for n in range(2, 7)}
    fixtures.update({f"D{n + 1}-involution": type_d_involution(n) for n in range(2, 7)})
    fixtures["affine-A3-rotation"] = affine_a3_rotation()
    fixtures["affine-A5-reflection"] = affine_a_reflection(3)
    fixtures["D4-triality"] = d4_triality()
    fixtures["affine-D4-triality"] = affine_d4_triality()
    fixtures["affine-D4-involution"] = affine_d4_involution()
    fixtures["E6-involution"] = e6_involution()
    fixtures["A3-identity-period3"] = identity_copies(type_a(2), 3)
    return fixtures
