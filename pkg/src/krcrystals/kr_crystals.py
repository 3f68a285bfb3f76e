"""Kirillov-Reshetikhin crystals ``B^{r,s}`` for the non-exceptional affine types.

Three constructions are used:

* IRR: the classical crystal ``B(s omega_r)`` with ``e_0`` transported from
  another classical operator by a twisted isomorphism (promotion in type A).
* AUT: ``C^{r,s}``, a sum of KN crystals, with ``e_0 = vs e_1 vs`` where ``vs``
  is the involution built from plus-minus diagrams.
* VIR: virtual crystals inside an ambient KR crystal, closed lazily from a seed
  and relabelled by KN tableaux of the target classical type.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import cartan as ct
from .crystal_core import (CrystalGraph, DEFAULT_BUDGET, TensorElement, classical_components,
                           components, generate, is_connected, rigid_isomorphism,
                           tensor_product)
from .errors import BudgetExceeded, CrystalError, IsomorphismError, UnsupportedSpec, VerificationError
from .kn_tableaux import (TableauModel, classical_crystal, highest_filling, kn_crystal,
                          lambda_partition, spin_crystal, weight_of_columns)
from .pm_branching import (highest_to_pm, lower_along, pm_to_highest, raise_to_top,
                           sigma_involution)

IRR, AUT, VIR = "IRR", "AUT", "VIR"
EMPTY, VERTICAL, HORIZONTAL, BOX = "empty", "vertical_domino", "horizontal_domino", "box"


# ---------------------------------------------------------------- case tables

def regime(spec, r):
    ct._check_node(spec, r)
    n, fam = spec.rank, spec.family
    if fam == "A1":
        return IRR
    if fam == "B1":
        return AUT if r < n else VIR
    if fam == "C1":
        return VIR if r < n else IRR
    if fam == "D1":
        return AUT if r <= n - 2 else IRR
    if fam == "A2odd":
        return AUT
    if fam == "A2even":
        return VIR
    if fam == "D2":
        return VIR if r < n else IRR
    raise UnsupportedSpec(str(spec))


def diamond(spec, r):
    """The shape removed in the classical decomposition of ``B^{r,s}``.

    ``D_{n+1}^{(2)}`` with ``r < n`` uses single boxes; see the notes in the README.
    """
    ct._check_node(spec, r)
    n, fam = spec.rank, spec.family
    if fam == "A1" or (fam in ("C1", "D2") and r == n) or (fam == "D1" and r >= n - 1):
        return EMPTY
    if fam in ("D1", "B1", "A2odd"):
        return VERTICAL
    if fam == "C1":
        return HORIZONTAL
    return BOX


TARGET_TYPE = {"A1": "A", "B1": "B", "C1": "C", "D1": "D", "A2odd": "C", "A2even": "C", "D2": "B"}


@dataclass(frozen=True)
class KRSpec:
    cartan: ct.CartanSpec
    r: int
    s: int

    def __post_init__(self):
        ct._check_node(self.cartan, self.r)
        if not isinstance(self.s, int) or self.s < 1:
            raise UnsupportedSpec(f"s must be a positive integer, got {self.s}")

    @property
    def regime(self):
        return regime(self.cartan, self.r)

    @property
    def diamond(self):
        return diamond(self.cartan, self.r)

    @property
    def c_r(self):
        return ct.c_coefficient(self.cartan, self.r)

    @property
    def xtype(self):
        return TARGET_TYPE[self.cartan.family]

    @property
    def n(self):
        return self.cartan.rank

    def name(self):
        return f"B^{{{self.r},{self.s}}} {self.cartan.name()}"


def kr_spec(family, rank_or_r, r=None, s=None):
    """``kr_spec("C1", 2, 1, 1)`` or ``kr_spec(cartan_spec, 1, 1)`` or ``kr_spec("C2(1)", 1, 1)``."""
    if isinstance(family, ct.CartanSpec):
        return KRSpec(family, rank_or_r, r)
    if family in ct.FAMILIES:
        return KRSpec(ct.make_spec(family, rank_or_r), r, s)
    return KRSpec(ct.make_spec(family, None), rank_or_r, r)


# ---------------------------------------------------------------- expected decompositions

def _columns_to_weight(xtype, n, cols):
    return weight_of_columns(xtype, n, [h for h in cols if h > 0])


def _partitions_in_box(rows, width):
    """All partitions with at most ``rows`` parts, each at most ``width`` (as row lengths)."""
    out = []

    def rec(k, cap, acc):
        if k == rows:
            out.append(tuple(acc))
            return
        for x in range(cap, -1, -1):
            rec(k + 1, x, acc + [x])
    rec(0, width, [])
    return out


def _rows_to_cols(rows):
    top = rows[0] if rows else 0
    return tuple(sum(1 for x in rows if x > c) for c in range(top))


def expected_decomposition(kspec):
    """Sorted highest weights of the classical components of ``B^{r,s}``."""
    spec, r, s, n = kspec.cartan, kspec.r, kspec.s, kspec.n
    xt = kspec.xtype
    d = kspec.diamond
    out = set()
    if d == EMPTY:
        out.add(tuple(s if k == r else 0 for k in range(1, n + 1)))
    elif spec.family == "B1" and r == n:
        # ambient C_n shapes: n x s minus 2x2 blocks, then halve the non-spin part
        for cols in _vertical_shapes(n, s, step=2):
            hs = [h for h in cols if h < n]
            if any(hs.count(h) % 2 for h in set(hs)):
                continue
            g = [0] * n
            g[n - 1] = sum(1 for h in cols if h == n)
            for h in set(hs):
                if h > 0:
                    g[h - 1] += hs.count(h) // 2
            out.add(tuple(g))
    elif d == VERTICAL:
        for cols in _vertical_shapes(r, s, step=2):
            out.add(_columns_to_weight(xt, n, cols))
    elif d == HORIZONTAL:
        for rows in _partitions_in_box(r, s):
            if all((s - x) % 2 == 0 for x in rows):
                out.add(_columns_to_weight(xt, n, _rows_to_cols(rows)))
    else:
        for rows in _partitions_in_box(r, s):
            out.add(_columns_to_weight(xt, n, _rows_to_cols(rows)))
    return sorted(out)


def _vertical_shapes(r, s, step):
    """Weakly decreasing ``s``-tuples of heights in ``{r, r-2, ...}``."""
    heights = list(range(r, -1, -step))
    return [c for c in itertools.combinations_with_replacement(heights, s)]


# ---------------------------------------------------------------- element models

class ClassicalModel:
    """Classical operators of a KN or spin model; ``e_0`` is left to subclasses."""

    def __init__(self, xtype, n, spin=False):
        self.tm = TableauModel(xtype, n, spin)

    def e(self, b, i):
        return self.tm.e(b, i)

    def f(self, b, i):
        return self.tm.f(b, i)


class AutModel(ClassicalModel):
    """Case (AUT): ``C^{r,s}`` with ``e_0 = vs e_1 vs``."""

    def __init__(self, kspec):
        xtype = {"D1": "D", "B1": "B", "A2odd": "C"}[kspec.cartan.family]
        super().__init__(xtype, kspec.n)
        self.xtype, self.n, self.r, self.s = xtype, kspec.n, kspec.r, kspec.s
        self._sigma = {}

    def sigma(self, b):
        """The involution on elements, via the branching to nodes ``2..n``."""
        if b in self._sigma:
            return self._sigma[b]
        top, path = raise_to_top(self.tm, b, tuple(range(2, self.n + 1)))
        P = highest_to_pm(top, self.xtype, self.n)
        Q = sigma_involution(P, self.r, self.s)
        c = lower_along(self.tm, pm_to_highest(Q), path)
        self._sigma[b] = c
        self._sigma[c] = b
        return c

    def e(self, b, i):
        if i:
            return self.tm.e(b, i)
        c = self.tm.e(self.sigma(b), 1)
        return None if c is None else self.sigma(c)

    def f(self, b, i):
        if i:
            return self.tm.f(b, i)
        c = self.tm.f(self.sigma(b), 1)
        return None if c is None else self.sigma(c)

    def seed(self):
        return highest_filling((self.r,) * self.s)


class VirtualModel:
    """Virtual operators ``e_i = prod of ambient e`` given by words of ambient nodes.

    ``words[i]`` lists ambient nodes in the order they are applied for ``e_i``;
    ``f_i`` applies the same nodes in reverse order.
    """

    def __init__(self, ambient, words):
        self.ambient = ambient
        self.words = dict(words)
        self._cache = {}

    def _run(self, b, i, raising):
        key = (b, i, raising)
        if key in self._cache:
            return self._cache[key]
        word = self.words[i] if raising else tuple(reversed(self.words[i]))
        c = b
        for j in word:
            c = self.ambient.e(c, j) if raising else self.ambient.f(c, j)
            if c is None:
                break
        self._cache[key] = c
        return c

    def e(self, b, i):
        return self._run(b, i, True)

    def f(self, b, i):
        return self._run(b, i, False)

    def multiplicity(self, i):
        return len(self.words[i])


def ambient_string(model, b, i, raising=True):
    """Length of the ``i`` string of ``b`` upward (``eps``) or downward (``phi``)."""
    k = 0
    c = model.e(b, i) if raising else model.f(b, i)
    while c is not None:
        k += 1
        c = model.e(c, i) if raising else model.f(c, i)
    return k


def c_model(n, r, s):
    """Type ``C_n^{(1)}`` operators on the ``vs``-invariant part of ``A_{2n+1}^{(2)}`` ``B^{r,s}``.

    ``r = n`` is allowed; it is the ambient used for ``A_{2n}^{(2)}`` with ``r = n``.
    Returns ``(model, seed)`` with elements being type ``C_{n+1}`` tableaux.
    """
    amb = AutModel(KRSpec(ct.make_spec("A2odd", n + 1), r, s))
    words = {0: (1, 0)}
    for i in range(1, n + 1):
        words[i] = (i + 1,)
    seed = tuple(tuple(range(2, r + 2)) for _ in range(s))
    return VirtualModel(amb, words), seed


def vir_model(kspec):
    """Lazy virtual model and seed for a case (VIR) KR crystal."""
    fam, n, r, s = kspec.cartan.family, kspec.n, kspec.r, kspec.s
    if fam == "C1":
        return c_model(n, r, s)
    if fam == "B1":
        amb = AutModel(KRSpec(ct.make_spec("A2odd", n), n, s))
        words = {i: (i, i) for i in range(n)}
        words[n] = (n,)
        return VirtualModel(amb, words), amb.seed()
    if fam in ("D2", "A2even"):
        amb, seed = c_model(n, r, 2 * s)
        if fam == "D2":
            words = {i: (i, i) for i in range(1, n)}
            words[n] = (n,)
        else:
            words = {i: (i, i) for i in range(1, n + 1)}
        words[0] = (0,)
        return VirtualModel(amb, words), seed
    raise UnsupportedSpec(f"{kspec.name()} is not a virtual case")


# ---------------------------------------------------------------- twisted isomorphisms

def _graph_raise(g, b, nodes):
    path = []
    while True:
        for i in nodes:
            c = g.e(b, i)
            if c is not None:
                path.append(i)
                b = c
                break
        else:
            return b, path


def _graph_lower(g, b, path):
    for i in reversed(path):
        b = g.f(b, i)
        if b is None:
            raise CrystalError("path transport fell off the crystal")
    return b


def affine_weight(spec, g, b):
    wt = tuple(g.phi(b, i) - g.eps(b, i) for i in spec.classical_nodes)
    return ct.affine_from_classical(spec, wt)


def twisted_candidates(spec, src, dst, tau, J):
    """All maps ``Sigma`` with ``Sigma e_j = e_{tau(j)} Sigma`` for ``j in J`` and matching weights.

    ``src`` and ``dst`` are classical graphs; the map is determined on ``J``-highest
    elements by the ``tau``-twisted affine weight up to permutations inside groups
    of equal weight. Yields dictionaries on all of ``src``.
    """
    J = tuple(J)
    Jt = tuple(tau[j] for j in J)
    inv = {tau[k]: k for k in spec.index_set}
    src_groups, dst_groups = {}, {}
    for b in src.vertices:
        if all(src.e(b, j) is None for j in J):
            w = affine_weight(spec, src, b)
            key = tuple(w[inv[k]] for k in spec.index_set)
            src_groups.setdefault(key, []).append(b)
    for b in dst.vertices:
        if all(dst.e(b, j) is None for j in Jt):
            dst_groups.setdefault(affine_weight(spec, dst, b), []).append(b)
    keys = sorted(src_groups)
    for k in keys:
        if len(src_groups[k]) != len(dst_groups.get(k, ())):
            raise VerificationError(f"no twisted isomorphism: weight {k} has mismatched multiplicity",
                                    src_groups[k][0])
    choices = [list(itertools.permutations(dst_groups[k])) for k in keys]
    for combo in itertools.product(*choices):
        tops = {}
        for k, images in zip(keys, combo):
            for b, c in zip(src_groups[k], images):
                tops[b] = c
        sigma = {}
        for b in src.vertices:
            top, path = _graph_raise(src, b, J)
            sigma[b] = _graph_lower(dst, tops[top], [tau[j] for j in path])
        yield sigma


def _with_zero(spec, g, f0, name, meta):
    edges = g.edge_dict()
    for b, c in f0.items():
        if c is not None:
            edges[(b, 0)] = c
    return CrystalGraph(spec.index_set, g.vertices, edges, spec, name, meta)


def _zero_from_sigma(g_src, g_dst, sigma, k):
    inv = {v: u for u, v in sigma.items()}
    f0 = {}
    for b in g_src.vertices:
        c = g_dst.f(sigma[b], k)
        f0[b] = None if c is None else inv[c]
    return f0


def _irr_twisted(kspec, src, dst, tau, J, involutive, budget_name, meta):
    """Pick the twisted isomorphism whose transported ``e_0`` gives a regular crystal."""
    spec = kspec.cartan
    k = tau[0]
    passing = []
    tried = 0
    for sigma in twisted_candidates(spec, src, dst, tau, J):
        tried += 1
        if len(set(sigma.values())) != len(sigma):
            continue
        if involutive and any(sigma[sigma[b]] != b for b in sigma):
            continue
        g = _with_zero(spec, src, _zero_from_sigma(src, dst, sigma, k), budget_name, meta)
        if regularity_failures(g, pairs_with=0, first_only=True):
            continue
        passing.append((g, sigma))
        if tried > 1:
            break
    if not passing:
        raise VerificationError(f"no twisted isomorphism gives a regular crystal for {kspec.name()}")
    passing[0][0].meta["sigma_candidates"] = tried
    return passing[0]


# ---------------------------------------------------------------- promotion (type A)

def _english_rows(cols):
    r = len(cols[0]) if cols else 0
    return [[cols[j][i] for j in range(len(cols))] for i in range(r)]


def _from_rows(rows):
    if not rows:
        return ()
    return tuple(tuple(rows[i][j] for i in range(len(rows))) for j in range(len(rows[0])))


def promotion(b, n):
    """Promotion on a rectangular tableau over ``1..n+1``.

    Entries ``n+1`` are removed, the holes slide to the top left by reverse
    jeu de taquin, every entry is raised by one and the holes are filled with 1.
    """
    rows = _english_rows(b)
    if not rows:
        return b
    R, C = len(rows), len(rows[0])
    holes = [(i, j) for i in range(R) for j in range(C) if rows[i][j] == n + 1]
    if any(i != R - 1 for i, _ in holes):
        raise CrystalError("largest letter outside the bottom row")
    for (i, j) in sorted(holes, key=lambda t: t[1]):
        rows[i][j] = None
    for (_, j0) in sorted(holes, key=lambda t: t[1]):
        i, j = R - 1, j0
        while True:
            up = rows[i - 1][j] if i > 0 else None
            left = rows[i][j - 1] if j > 0 else None
            if up is None and left is None:
                break
            if left is None or (up is not None and up >= left):
                rows[i][j] = up
                rows[i - 1][j] = None
                i -= 1
            else:
                rows[i][j] = left
                rows[i][j - 1] = None
                j -= 1
    out = [[1 if x is None else x + 1 for x in row] for row in rows]
    return _from_rows(out)


# ---------------------------------------------------------------- builders

def _type_a(kspec):
    n, r, s = kspec.n, kspec.r, kspec.s
    g = kn_crystal("A", n, tuple(s if k == r else 0 for k in range(1, n + 1)))
    pr = {b: promotion(b, n) for b in g.vertices}
    inv = {v: u for u, v in pr.items()}
    if len(inv) != len(pr):
        raise VerificationError("promotion is not a bijection")
    f0 = {}
    for b in g.vertices:
        c = g.f(pr[b], 1)
        f0[b] = None if c is None else inv[c]
    return g, f0


def kr_type_A(n, r, s):
    return kr(kr_spec("A1", n, r, s))


def _meta(kspec, **extra):
    m = {"family": kspec.cartan.family, "rank": kspec.n, "r": kspec.r, "s": kspec.s,
         "regime": kspec.regime, "diamond": kspec.diamond, "xtype": kspec.xtype}
    m.update(extra)
    return m


def _build_irr(kspec, budget):
    spec, n, r, s = kspec.cartan, kspec.n, kspec.r, kspec.s
    name = kspec.name()
    fam = spec.family
    if fam == "A1":
        g, f0 = _type_a(kspec)
        return _with_zero(spec, g, f0, name, _meta(kspec, method="promotion"))
    if fam in ("C1", "D2"):
        if fam == "C1":
            g = kn_crystal("C", n, tuple(s if k == n else 0 for k in range(1, n + 1)), budget)
        else:
            g = spin_crystal("B", n, s, budget=budget)
        tau = ct.flip_perm(spec)
        meta = _meta(kspec, method="twisted flip")
        out, _ = _irr_twisted(kspec, g, g, tau, tuple(range(1, n)), True, name, meta)
        return out
    if fam == "D1":
        g = spin_crystal("D", n, s, r, budget)
        tau = ct.compose(ct.swap_perm(spec, 0, 1), ct.swap_perm(spec, n - 1, n))
        meta = _meta(kspec, method="twisted spin swap")
        out, _ = _irr_twisted(kspec, g, g, tau, tuple(range(2, n + 1)), True, name, meta)
        return out
    raise UnsupportedSpec(name)


def _build_aut(kspec, budget):
    model = AutModel(kspec)
    return generate([model.seed()], model.e, model.f, kspec.cartan.index_set, budget,
                    kspec.cartan, kspec.name(), _meta(kspec, method="automorphism"))


def _build_vir(kspec, budget):
    spec, n = kspec.cartan, kspec.n
    model, seed = vir_model(kspec)
    g = generate([seed], model.e, model.f, spec.index_set, budget, spec, kspec.name(),
                 _meta(kspec, method="virtual"))
    return relabel_classically(g, kspec.xtype, n, budget)


def relabel_classically(g, xtype, n, budget=DEFAULT_BUDGET):
    """Rename vertices by KN (or spin) tableaux through the classical components.

    When some component has no KN model (mixed spin weights) the graph is returned
    unchanged with ``meta["labels"] = "ambient"``.
    """
    nodes = tuple(range(1, n + 1))
    mapping = {}
    try:
        for hw, top, members in classical_components(g, nodes):
            model = classical_crystal(xtype, n, hw, budget)
            model_top = [b for b in model.vertices if all(model.e(b, i) is None for i in nodes)]
            iso = rigid_isomorphism(g, model, {top: model_top[0]}, nodes)
            if len(iso) != len(members) or len(model) != len(members):
                raise VerificationError(f"component {hw} does not match B{hw}", top)
            mapping.update(iso)
    except UnsupportedSpec:
        meta = dict(g.meta or {})
        meta["labels"] = "ambient"
        return CrystalGraph(g.index_set, g.vertices, g.edge_dict(), g.cartan, g.name, meta)
    if len(set(mapping.values())) != len(mapping):
        raise VerificationError("classical relabelling is not injective")
    edges = {(mapping[b], i): mapping[c] for b, i, c in g.edges()}
    meta = dict(g.meta or {})
    meta["labels"] = "classical"
    meta["ambient"] = {mapping[b]: b for b in g.vertices}
    return CrystalGraph(g.index_set, list(mapping.values()), edges, g.cartan, g.name, meta)


_CACHE = {}


def kr(kspec, budget=DEFAULT_BUDGET):
    """Build the KR crystal described by ``kspec`` as an affine crystal graph."""
    key = (kspec.cartan.family, kspec.n, kspec.r, kspec.s)
    if key in _CACHE:
        g = _CACHE[key]
        # a cached graph still has to respect the caller's budget
        if len(g) > budget:
            raise BudgetExceeded(f"{kspec.name()} has {len(g)} vertices, over the budget {budget}")
        return g
    reg = kspec.regime
    if reg == IRR:
        g = _build_irr(kspec, budget)
    elif reg == AUT:
        g = _build_aut(kspec, budget)
    else:
        g = _build_vir(kspec, budget)
    _CACHE[key] = g
    return g


def kr_aut(kspec, budget=DEFAULT_BUDGET):
    if kspec.regime != AUT:
        raise UnsupportedSpec(f"{kspec.name()} is not in case AUT")
    return kr(kspec, budget)


def kr_virtual(kspec, budget=DEFAULT_BUDGET):
    if kspec.regime != VIR:
        raise UnsupportedSpec(f"{kspec.name()} is not in case VIR")
    return kr(kspec, budget)


# ---------------------------------------------------------------- checks

def classical_decomposition(g, n=None):
    n = g.cartan.rank if n is None else n
    return sorted(hw for hw, _, _ in classical_components(g, tuple(range(1, n + 1))))


def classical_decomposition_check(kspec, g=None):
    """Compare classical components with the diamond-removal enumeration.

    Returns ``(ok, found, expected)``.
    """
    g = kr(kspec) if g is None else g
    found = classical_decomposition(g, kspec.n)
    expected = expected_decomposition(kspec)
    return found == expected, found, expected


def _rank_two_model(a_ij, a_ji, top_i, top_j, i, j):
    """Finite rank-two crystal with the given highest weight, colors relabelled to ``i, j``."""
    if (a_ij, a_ji) == (0, 0):
        gi = kn_crystal("A", 1, (top_i,))
        gj = kn_crystal("A", 1, (top_j,))
        gi = CrystalGraph((i, j), gi.vertices, {(b, i): c for b, _, c in gi.edges()})
        gj = CrystalGraph((i, j), gj.vertices, {(b, j): c for b, _, c in gj.edges()})
        return tensor_product([gi, gj])
    if (a_ij, a_ji) == (-1, -1):
        g, colors = kn_crystal("A", 2, (top_i, top_j)), {1: i, 2: j}
    elif (a_ij, a_ji) == (-2, -1):
        g, colors = kn_crystal("C", 2, (top_i, top_j)), {1: i, 2: j}
    elif (a_ij, a_ji) == (-1, -2):
        g, colors = kn_crystal("C", 2, (top_j, top_i)), {1: j, 2: i}
    else:
        return None
    edges = {(b, colors[c]): t for b, c, t in g.edges()}
    return CrystalGraph((i, j), g.vertices, edges)


def regularity_failures(g, pairs_with=None, first_only=False):
    """Vertices where ``g`` is not a regular crystal.

    Checks the affine weight rule along every edge and that every two-colour
    component of finite type is isomorphic to the corresponding rank-two crystal.
    """
    spec = g.cartan
    a = spec.matrix
    bad = []
    for b, i, c in g.edges():
        for j in spec.index_set:
            if (g.phi(c, j) - g.eps(c, j)) != (g.phi(b, j) - g.eps(b, j)) - a[j][i]:
                bad.append((b, i, "weight"))
                if first_only:
                    return bad
                break
    for i, j in itertools.combinations(spec.index_set, 2):
        if pairs_with is not None and pairs_with not in (i, j):
            continue
        if a[i][j] * a[j][i] >= 4:
            continue
        for members in components(g, (i, j)):
            tops = [b for b in members if g.e(b, i) is None and g.e(b, j) is None]
            if len(tops) != 1:
                bad.append((members[0], (i, j), "highest"))
                if first_only:
                    return bad
                continue
            top = tops[0]
            model = _rank_two_model(a[i][j], a[j][i], g.phi(top, i), g.phi(top, j), i, j)
            mtop = [x for x in model.vertices if model.e(x, i) is None and model.e(x, j) is None][0]
            try:
                iso = rigid_isomorphism(g, model, {top: mtop}, (i, j))
            except IsomorphismError:
                iso = None
            if iso is None or len(iso) != len(members) or len(model) != len(members):
                bad.append((top, (i, j), "rank two"))
                if first_only:
                    return bad
    return bad


def _solve(mat, vec):
    """Exact solution of ``mat x = vec`` over the rationals."""
    m = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(mat, vec)]
    for col in range(m):
        piv = next(r for r in range(col, m) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                fac = aug[r][col]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][m] for r in range(m)]


def dominant_level_weights(spec, level):
    """All ``Lambda`` in ``P_level^+`` as coefficient tuples on ``Lambda_0..Lambda_n``."""
    out = []

    def rec(k, left, acc):
        if k == len(spec.index_set):
            if left == 0:
                out.append(tuple(acc))
            return
        c = spec.comarks[k]
        for x in range(left // c + 1):
            rec(k + 1, left - x * c, acc + [x])
    rec(0, level, [])
    return out


def _in_affine_lattice(spec, x):
    # classical projection of the affine root lattice: add k cl(alpha_0), 0 <= k < a_0
    a = spec.marks
    return any(all((v + Fraction(k * a[i], a[0])).denominator == 1 for i, v in enumerate(x, start=1))
               for k in range(a[0]))


@dataclass
class PerfectnessReport:
    perfect: bool
    failed: str | None = None
    witness: object = None
    b_lower: dict = field(default_factory=dict)   # Lambda -> b_Lambda (eps(b) = Lambda)
    b_upper: dict = field(default_factory=dict)   # Lambda -> b^Lambda (phi(b) = Lambda)

    def __bool__(self):
        return self.perfect


def is_perfect(g, level, check_connected=True):
    """Check conditions (2)-(5) of perfectness at the given level."""
    spec = g.cartan
    nodes = spec.classical_nodes
    if check_connected and not is_connected(tensor_product([g, g])):
        return PerfectnessReport(False, "B (x) B is not connected")
    # unique maximal classical weight
    cls = spec.matrix
    cart = [[cls[i][j] for j in nodes] for i in nodes]
    weights = {b: g.classical_weight(b) for b in g.vertices}
    top = [b for b in g.vertices if all(g.e(b, i) is None for i in nodes)]
    cand = None
    for b in top:
        lam = weights[b]
        ok = True
        for w in weights.values():
            x = _solve(cart, [p - q for p, q in zip(lam, w)])
            if any(v < 0 for v in x) or not _in_affine_lattice(spec, x):
                ok = False
                break
        if ok:
            cand = lam
            break
    if cand is None or sum(1 for w in weights.values() if w == cand) != 1:
        return PerfectnessReport(False, "no unique maximal weight", top[0] if top else None)
    for b in g.vertices:
        if ct.level(spec, g.eps_vector(b)) < level:
            return PerfectnessReport(False, "level of eps below the level", b)
    lower, upper = {}, {}
    by_eps, by_phi = {}, {}
    for b in g.vertices:
        by_eps.setdefault(g.eps_vector(b), []).append(b)
        by_phi.setdefault(g.phi_vector(b), []).append(b)
    for lam in dominant_level_weights(spec, level):
        e_list, p_list = by_eps.get(lam, []), by_phi.get(lam, [])
        if len(e_list) != 1 or len(p_list) != 1:
            return PerfectnessReport(False, f"no unique b with eps or phi equal to {lam}", lam,
                                     lower, upper)
        lower[lam], upper[lam] = e_list[0], p_list[0]
    return PerfectnessReport(True, None, None, lower, upper)


def level_zero_element(g, level):
    """The unique ``b`` with ``eps(b) = level Lambda_0``."""
    target = (level,) + (0,) * g.cartan.rank
    hits = [b for b in g.vertices if g.eps_vector(b) == target]
    if len(hits) != 1:
        raise VerificationError(f"{len(hits)} elements have eps = {level} Lambda_0 in {g.name}")
    return hits[0]


def ground_state(factors, level):
    """Ground state path of ``B_N (x) ... (x) B_1`` given in written order."""
    factors = list(factors)
    path = [level_zero_element(factors[-1], level)]
    for g in reversed(factors[:-1]):
        want = factors[len(factors) - len(path)].phi_vector(path[-1])
        hits = [b for b in g.vertices if g.eps_vector(b) == want]
        if len(hits) != 1:
            raise VerificationError(f"{len(hits)} elements match eps = {want} in {g.name}")
        path.append(hits[0])
    return TensorElement(reversed(path))


def ground_state_component(kspec, level):
    """Highest weight of the classical component holding ``u`` in ``B^{r, level c_r}``."""
    g = kr(KRSpec(kspec.cartan, kspec.r, level * kspec.c_r))
    u = level_zero_element(g, level)
    nodes = kspec.cartan.classical_nodes
    top, _ = _graph_raise(g, u, nodes)
    return tuple(g.phi(top, i) - g.eps(top, i) for i in nodes), u, top


def generator(g, kspec):
    """The element of classical weight ``s omega_r``."""
    want = tuple(kspec.s if k == kspec.r else 0 for k in kspec.cartan.classical_nodes)
    hits = [b for b in g.vertices if g.classical_weight(b) == want]
    if len(hits) != 1:
        raise VerificationError(f"{len(hits)} elements of weight {want} in {g.name}")
    return hits[0]


def component_shape(g, b):
    """``Lambda(lambda)`` for the classical component of ``b``."""
    spec = g.cartan
    nodes = spec.classical_nodes
    top, _ = _graph_raise(g, b, nodes)
    hw = tuple(g.phi(top, i) - g.eps(top, i) for i in nodes)
    xt = TARGET_TYPE[spec.family]
    return hw, lambda_partition(xt, spec.rank, hw)
