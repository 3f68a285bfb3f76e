"""Finite crystal graphs, tensor products and generic crystal algorithms.

Tensor products use the anti-Kashiwara convention::

    f_i(a (x) b) = f_i(a) (x) b   if eps_i(a) >= phi_i(b)   else a (x) f_i(b)
    e_i(a (x) b) = e_i(a) (x) b   if eps_i(a) >  phi_i(b)   else a (x) e_i(b)

Elements of an N-fold product are tuples ``(b_N, ..., b_1)`` in written order.
"""
from __future__ import annotations

from collections import Counter, deque

from .errors import BudgetExceeded, CrystalError, IsomorphismError

DEFAULT_BUDGET = 10 ** 6


# ---------------------------------------------------------------- serialization

def letter_str(x):
    return str(x)


def serialize(b):
    """Canonical string of an element.

    Letters are integers (barred letters negative), spin columns are strings of
    ``+``/``-``, columns list letters bottom to top separated by ``,``, tableau
    columns are joined by ``/`` and tensor factors by ``#``.
    """
    if isinstance(b, TensorElement):
        return "#".join(serialize(x) for x in b)
    if isinstance(b, int):
        return str(b)
    if isinstance(b, str):
        return b
    if isinstance(b, tuple):
        if not b:
            return "()"
        if all(isinstance(c, str) for c in b):
            return "/".join(b)
        return "/".join(",".join(str(x) for x in col) for col in b)
    raise TypeError(f"cannot serialize {b!r}")


def parse_element(text):
    """Inverse of ``serialize`` for tableaux and tensor products of tableaux."""
    factors = text.split("#")
    out = [_parse_tableau(f) for f in factors]
    if len(out) == 1:
        return out[0]
    return TensorElement(out)


def _parse_tableau(text):
    if text == "()":
        return ()
    cols = text.split("/")
    if all(c and set(c) <= {"+", "-"} for c in cols):
        return tuple(cols)
    return tuple(tuple(int(x) for x in c.split(",")) for c in cols)


class TensorElement(tuple):
    """Marker tuple for elements of a tensor product (written order)."""

    def __repr__(self):
        return "T" + tuple.__repr__(self)


# ---------------------------------------------------------------- signature rule

def signature(pairs):
    """Bracketing for a product given ``(eps, phi)`` per factor in written order.

    Returns ``(eps, phi, e_pos, f_pos)`` where ``e_pos`` / ``f_pos`` are the factor
    positions acted on by ``e_i`` / ``f_i`` (or ``None``).
    """
    plus = []  # [position, count] of uncancelled + in reading order
    minus_total = 0
    minus_last = None
    # reading order: rightmost written factor first
    for pos in range(len(pairs) - 1, -1, -1):
        ep, ph = pairs[pos]
        m = ep
        while m and plus:
            top = plus[-1]
            take = min(m, top[1])
            top[1] -= take
            m -= take
            if top[1] == 0:
                plus.pop()
        if m:
            minus_total += m
            minus_last = pos
        if ph:
            plus.append([pos, ph])
    phi = sum(c for _, c in plus)
    f_pos = plus[0][0] if plus else None
    return minus_total, phi, minus_last, f_pos


# ---------------------------------------------------------------- graphs

class CrystalGraph:
    """A finite crystal: vertices plus colored ``f`` edges.

    Parameters
    ----------
    index_set : tuple of int
    vertices : iterable
        Hashable elements.
    f_edges : dict
        Maps ``(vertex, i)`` to the target of ``f_i``.
    cartan : CartanSpec, optional
        Affine data, used for weights of level-zero crystals.
    """

    def __init__(self, index_set, vertices, f_edges, cartan=None, name="", meta=None):
        self.index_set = tuple(index_set)
        verts = sorted(set(vertices), key=serialize)
        self.vertices = verts
        self.position = {v: k for k, v in enumerate(verts)}
        self._f = {i: {} for i in self.index_set}
        self._e = {i: {} for i in self.index_set}
        for (v, i), w in f_edges.items():
            if w is None:
                continue
            if v not in self.position or w not in self.position:
                raise CrystalError(f"edge {serialize(v)} -{i}-> {serialize(w)} leaves the vertex set")
            if w in self._e[i]:
                raise CrystalError(f"two {i}-arrows into {serialize(w)}")
            self._f[i][v] = w
            self._e[i][w] = v
        self.cartan = cartan
        self.name = name
        self.meta = dict(meta or {})
        self._eps = {}
        self._phi = {}

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, b):
        return b in self.position

    def __iter__(self):
        return iter(self.vertices)

    def f(self, b, i):
        return self._f[i].get(b)

    def e(self, b, i):
        return self._e[i].get(b)

    def edges(self, i=None):
        colors = self.index_set if i is None else (i,)
        for c in colors:
            for v in self.vertices:
                w = self._f[c].get(v)
                if w is not None:
                    yield v, c, w

    def eps(self, b, i):
        key = (b, i)
        if key not in self._eps:
            k, x = 0, self._e[i].get(b)
            while x is not None:
                k += 1
                x = self._e[i].get(x)
            self._eps[key] = k
        return self._eps[key]

    def phi(self, b, i):
        key = (b, i)
        if key not in self._phi:
            k, x = 0, self._f[i].get(b)
            while x is not None:
                k += 1
                x = self._f[i].get(x)
            self._phi[key] = k
        return self._phi[key]

    def weight(self, b):
        """``phi - eps`` on every node of the index set."""
        return tuple(self.phi(b, i) - self.eps(b, i) for i in self.index_set)

    def classical_weight(self, b):
        return tuple(self.phi(b, i) - self.eps(b, i) for i in self.index_set if i != 0)

    def eps_vector(self, b):
        return tuple(self.eps(b, i) for i in self.index_set)

    def phi_vector(self, b):
        return tuple(self.phi(b, i) for i in self.index_set)

    def edge_dict(self):
        """All ``f`` edges as ``{(v, i): w}``."""
        return {(v, i): w for i in self.index_set for v, w in self._f[i].items()}

    def restrict(self, colors):
        edges = {(v, i): w for v, i, w in self.edges() if i in colors}
        return CrystalGraph(tuple(colors), self.vertices, edges, self.cartan, self.name)

    def __repr__(self):
        return f"CrystalGraph({self.name or '?'}, |B|={len(self)}, I={self.index_set})"


def eps_phi(graph, b, i):
    return graph.eps(b, i), graph.phi(b, i)


def weight(graph, b):
    return graph.weight(b)


def check_inverse(graph):
    """``f_i(b) = b'`` iff ``e_i(b') = b``; raises with a witness on failure."""
    for v, i, w in graph.edges():
        if graph.e(w, i) != v:
            raise CrystalError(f"e_{i} does not invert f_{i} at {serialize(v)}")
    return True


def level(graph, b, vector):
    c = graph.cartan
    return sum(a * x for a, x in zip(c.comarks, vector))


# ---------------------------------------------------------------- generation

def generate(seeds, e_op, f_op, index_set, budget=DEFAULT_BUDGET, cartan=None, name="", meta=None):
    """Close ``seeds`` under ``e_op(b, i)`` and ``f_op(b, i)``.

    The operators return ``None`` for the zero element.
    """
    seeds = list(seeds)
    if not seeds:
        raise CrystalError("generate needs at least one seed")
    seen = set(seeds)
    queue = deque(seeds)
    f_edges = {}
    while queue:
        b = queue.popleft()
        for i in index_set:
            for op, forward in ((f_op, True), (e_op, False)):
                c = op(b, i)
                if c is None:
                    continue
                if forward:
                    f_edges[(b, i)] = c
                else:
                    f_edges[(c, i)] = b
                if c not in seen:
                    seen.add(c)
                    if len(seen) > budget:
                        raise BudgetExceeded(f"vertex budget {budget} exceeded while generating {name}")
                    queue.append(c)
    return CrystalGraph(index_set, seen, f_edges, cartan, name, meta)


# ---------------------------------------------------------------- tensor products

def tensor_product(graphs, name=""):
    """Tensor product of graphs in written order ``B_N (x) ... (x) B_1``."""
    graphs = list(graphs)
    if not graphs:
        raise CrystalError("empty tensor product")
    index_set = graphs[0].index_set
    for g in graphs:
        if g.index_set != index_set:
            raise CrystalError("index set mismatch in tensor product")
    verts = [()]
    for g in graphs:
        verts = [v + (x,) for v in verts for x in g.vertices]
    verts = [TensorElement(v) for v in verts]
    edges = {}
    for v in verts:
        for i in index_set:
            pairs = [(g.eps(x, i), g.phi(x, i)) for g, x in zip(graphs, v)]
            _, _, _, pos = signature(pairs)
            if pos is None:
                continue
            w = list(v)
            w[pos] = graphs[pos].f(v[pos], i)
            edges[(v, i)] = TensorElement(w)
    cartan = graphs[0].cartan
    meta = {"factors": [g.meta for g in graphs]}
    return CrystalGraph(index_set, verts, edges, cartan, name or " (x) ".join(g.name for g in graphs), meta)


def tensor(ga, gb):
    """Binary tensor product with pair elements, by the two-branch rule directly."""
    if ga.index_set != gb.index_set:
        raise CrystalError("index set mismatch in tensor product")
    verts = [TensorElement((a, b)) for a in ga.vertices for b in gb.vertices]
    edges = {}
    for v in verts:
        a, b = v
        for i in ga.index_set:
            if ga.eps(a, i) >= gb.phi(b, i):
                fa = ga.f(a, i)
                w = None if fa is None else TensorElement((fa, b))
            else:
                fb = gb.f(b, i)
                w = None if fb is None else TensorElement((a, fb))
            if w is not None:
                edges[(v, i)] = w
    return CrystalGraph(ga.index_set, verts, edges, ga.cartan, f"({ga.name}) (x) ({gb.name})")


def tensor_e(ga, gb, v, i):
    a, b = v
    if ga.eps(a, i) > gb.phi(b, i):
        ea = ga.e(a, i)
        return None if ea is None else TensorElement((ea, b))
    eb = gb.e(b, i)
    return None if eb is None else TensorElement((a, eb))


# ---------------------------------------------------------------- classical structure

def classical_highest(graph, nodes=None):
    nodes = tuple(i for i in graph.index_set if i != 0) if nodes is None else tuple(nodes)
    return [b for b in graph.vertices if all(graph.e(b, i) is None for i in nodes)]


def components(graph, nodes):
    """Connected components under the colors in ``nodes``."""
    comp = {}
    out = []
    for v in graph.vertices:
        if v in comp:
            continue
        label = len(out)
        members = [v]
        comp[v] = label
        stack = [v]
        while stack:
            x = stack.pop()
            for i in nodes:
                for y in (graph.f(x, i), graph.e(x, i)):
                    if y is not None and y not in comp:
                        comp[y] = label
                        members.append(y)
                        stack.append(y)
        out.append(members)
    return out


def classical_components(graph, nodes=None):
    """List of ``(highest weight, highest vertex, members)`` per classical component."""
    nodes = tuple(i for i in graph.index_set if i != 0) if nodes is None else tuple(nodes)
    out = []
    for members in components(graph, nodes):
        tops = [b for b in members if all(graph.e(b, i) is None for i in nodes)]
        if len(tops) != 1:
            raise CrystalError(f"component of {serialize(members[0])} has {len(tops)} highest vertices")
        top = tops[0]
        hw = tuple(graph.phi(top, i) - graph.eps(top, i) for i in nodes)
        out.append((hw, top, members))
    out.sort(key=lambda t: (t[0], serialize(t[1])))
    return out


def is_connected(graph):
    return len(components(graph, graph.index_set)) == 1


# ---------------------------------------------------------------- characters

class LaurentPoly(Counter):
    """Integer Laurent polynomial in ``q`` as ``{exponent: coefficient}``."""

    def clean(self):
        return LaurentPoly({k: v for k, v in self.items() if v})

    def __str__(self):
        items = sorted((k, v) for k, v in self.items() if v)
        if not items:
            return "0"
        return " + ".join(f"{v}*q^{k}" if k else str(v) for k, v in items)


def character(graph, grading=None, weight_fn=None):
    """``sum_b q^grading(b) e^wt(b)`` as ``{weight: LaurentPoly}``."""
    weight_fn = weight_fn or graph.classical_weight
    out = {}
    for b in graph.vertices:
        g = 0 if grading is None else grading[b] if isinstance(grading, dict) else grading(b)
        w = weight_fn(b)
        out.setdefault(w, LaurentPoly())[g] += 1
    return {w: p.clean() for w, p in out.items()}


# ---------------------------------------------------------------- rigidity

def rigid_isomorphism(ga, gb, seeds, colors=None):
    """Color-preserving bijection extending ``seeds`` (a dict or list of pairs).

    Walks both graphs in parallel; raises ``IsomorphismError`` at the first
    conflicting vertex/color.
    """
    colors = ga.index_set if colors is None else tuple(colors)
    pairs = list(seeds.items()) if isinstance(seeds, dict) else list(seeds)
    fwd, bwd = {}, {}
    queue = deque()
    for a, b in pairs:
        if a not in ga or b not in gb:
            raise IsomorphismError("seed outside the graphs", a)
        fwd[a] = b
        bwd[b] = a
        queue.append(a)
    while queue:
        a = queue.popleft()
        b = fwd[a]
        for i in colors:
            for op_a, op_b in ((ga.f, gb.f), (ga.e, gb.e)):
                x, y = op_a(a, i), op_b(b, i)
                if (x is None) != (y is None):
                    raise IsomorphismError(f"edge mismatch at {serialize(a)} color {i}", a, i)
                if x is None:
                    continue
                if x in fwd:
                    if fwd[x] != y:
                        raise IsomorphismError(f"conflict at {serialize(x)} color {i}", x, i)
                    continue
                if y in bwd:
                    raise IsomorphismError(f"target {serialize(y)} reached twice", x, i)
                fwd[x] = y
                bwd[y] = x
                queue.append(x)
    return fwd


def check_isomorphism(ga, gb, mapping, colors=None):
    colors = ga.index_set if colors is None else colors
    for a, b in mapping.items():
        for i in colors:
            for op_a, op_b in ((ga.f, gb.f), (ga.e, gb.e)):
                x, y = op_a(a, i), op_b(b, i)
                if (x is None) != (y is None) or (x is not None and mapping.get(x) != y):
                    raise IsomorphismError(f"map does not commute at {serialize(a)} color {i}", a, i)
    return True
