"""Demazure subsets, affine gradings, configuration sums and Macdonald polynomials at t = 0."""

from __future__ import annotations

from dataclasses import dataclass

from . import cartan as ct
from .crystal_core import DEFAULT_BUDGET, LaurentPoly, serialize
from .energy import EnergyTable, composite, d_composite, intrinsic_energy, zero_one_bfs
from .errors import CrystalError, UnsupportedSpec, VerificationError
from .kn_tableaux import classical_crystal, content, eps_to_omega, letters_of
from .kr_crystals import KRSpec


# ---------------------------------------------------------------- Demazure subsets

@dataclass
class DemazureSubset:
    graph: object
    vertices: frozenset
    word: tuple
    level: int
    layers: list

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, b):
        return b in self.vertices


def _allowed(graph, level, x, i):
    """``f_i x`` if it stays in ``B (x) u_{level Lambda_0}``, else ``None``."""
    y = graph.f(x, i)
    if y is None or (i == 0 and graph.eps(y, 0) <= level):
        return None
    return y


def demazure_subset(comp, level, word):
    """``{f_{i_1}^{m_1} ... f_{i_k}^{m_k} u_B}`` for ``word = (i_1, ..., i_k)``.

    The word is read as ``s_{i_1} ... s_{i_k}``: its rightmost letter acts first.
    ``f_0`` is only used along Demazure arrows.
    """
    g = comp.graph
    current = {comp.ground_state(level)}
    layers = [frozenset(current)]
    for i in reversed(tuple(word)):
        out = set(current)
        for x in current:
            y = _allowed(g, level, x, i)
            while y is not None and y not in out:
                out.add(y)
                y = _allowed(g, level, y, i)
        current = out
        layers.append(frozenset(current))
    return DemazureSubset(g, frozenset(current), tuple(word), level, layers)


def translation_word(comp):
    """Reduced word ``v`` and ``tau`` with ``t_lambda = v tau`` for the composite's ``lambda``."""
    spec = comp.cartan
    lam = [0] * spec.rank
    for k in comp.kspecs:
        lam[ct.dual_node(spec, k.r) - 1] -= k.c_r
    return ct.translation_decompose(spec, lam)


def deg_table(comp, level):
    """Basic grading on the full Demazure crystal, read inside ``B``.

    Lowering from ``u_B``; ``f_0`` only on Demazure arrows, each such step has degree 1.
    """
    g = comp.graph
    u = comp.ground_state(level)
    dist = zero_one_bfs(g, [u], allow=lambda x, y, i: i != 0 or g.eps(y, 0) > level)
    if len(dist) != len(g):
        raise VerificationError("Demazure crystal does not exhaust B", next(b for b in g if b not in dist))
    return EnergyTable(dist)


# ---------------------------------------------------------------- characters

def config_sum(comp, mu):
    """``X(mu; B)``: ``q^{-D(b)}`` summed over classical highest ``b`` of weight ``mu``."""
    g = comp.graph
    D = d_composite(comp)
    mu = tuple(mu)
    out = LaurentPoly()
    nodes = comp.cartan.classical_nodes
    for b in g.vertices:
        if g.classical_weight(b) == mu and all(g.e(b, i) is None for i in nodes):
            out[-D[b]] += 1
    return out.clean()


def highest_weights(comp):
    g = comp.graph
    nodes = comp.cartan.classical_nodes
    return sorted({g.classical_weight(b) for b in g.vertices if all(g.e(b, i) is None for i in nodes)})


def classical_char(xtype, n, mu, coords="omega", budget=DEFAULT_BUDGET):
    """Character of ``V(mu)`` as ``{weight: multiplicity}``.

    ``coords`` is ``"omega"`` (fundamental weight coordinates) or ``"eps"``.
    """
    g = classical_crystal(xtype, n, tuple(mu), budget)
    out = {}
    for b in g.vertices:
        w = content(xtype, n, letters_of(b))
        if coords == "omega":
            w = eps_to_omega(xtype, n, w)
        out[w] = out.get(w, 0) + 1
    return out


@dataclass
class DemazureCharacter:
    """``e^{level Lambda_0} sum_b e^{wt(b)} q^{-E^int(b)}`` stored as ``{weight: LaurentPoly}``."""

    terms: dict
    level: int
    d_uB: int
    has_lambda0: bool = True

    def __eq__(self, other):
        return isinstance(other, DemazureCharacter) and _clean(self.terms) == _clean(other.terms)


def _clean(terms):
    return {w: p.clean() for w, p in terms.items() if p.clean()}


def demazure_character(comp, level, check_expansion=True):
    """Graded character from ``E^int``, checked against ``q^{D(u_B)} sum_mu X(mu) ch V(mu)``."""
    g = comp.graph
    E = intrinsic_energy(comp, level)
    terms = {}
    for b in g.vertices:
        terms.setdefault(g.classical_weight(b), LaurentPoly())[-E[b]] += 1
    D = d_composite(comp)
    d_u = D[comp.ground_state(level)]
    out = DemazureCharacter(_clean(terms), level, d_u)
    if check_expansion:
        xt = comp.kspecs[0].xtype
        expanded = {}
        for mu in highest_weights(comp):
            X = config_sum(comp, mu)
            try:
                ch = classical_char(xt, comp.cartan.rank, mu)
            except UnsupportedSpec:
                return out
            for w, m in ch.items():
                p = expanded.setdefault(w, LaurentPoly())
                for k, c in X.items():
                    p[k + d_u] += m * c
        if _clean(expanded) != out.terms:
            raise VerificationError("Demazure character differs from its X(mu) expansion")
    return out


# ---------------------------------------------------------------- polynomials

class Poly(dict):
    """Laurent polynomial in ``x_1..x_m`` with ``LaurentPoly`` coefficients in ``q``."""

    def add(self, xs, qpow, c=1):
        p = self.setdefault(tuple(xs), LaurentPoly())
        p[qpow] += c

    def clean(self):
        out = Poly()
        for xs, p in self.items():
            p = p.clean()
            if p:
                out[xs] = p
        return out

    def __eq__(self, other):
        return dict.__eq__(self.clean(), Poly(other).clean())

    def __ne__(self, other):
        return not self == other

    def coefficient(self, xs):
        return self.get(tuple(xs), LaurentPoly()).clean()

    def shift_x(self, xs):
        out = Poly()
        for k, p in self.items():
            out[tuple(a + b for a, b in zip(k, xs))] = LaurentPoly(p)
        return out

    def to_dict(self):
        """``{(x exponents, q exponent): coefficient}``."""
        return {(xs, k): v for xs, p in self.clean().items() for k, v in p.items()}

    def __str__(self):
        terms = []
        for xs in sorted(self.clean(), reverse=True):
            p = self[xs].clean()
            mono = "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(xs, start=1) if e)
            coef = _qstr(p)
            if not mono:
                terms.append(coef)
            elif coef == "1":
                terms.append(mono)
            elif len(p) == 1 and "+" not in coef:
                terms.append(f"{coef}*{mono}")
            else:
                terms.append(f"({coef})*{mono}")
        return " + ".join(terms) if terms else "0"


def _qstr(p):
    parts = []
    for k in sorted(p, reverse=True):
        c = p[k]
        if k == 0:
            parts.append(str(c))
        else:
            q = "q" if k == 1 else f"q^{k}"
            parts.append(q if c == 1 else f"{c}*{q}")
    return " + ".join(parts)


def _x_weight(comp, b):
    xt = comp.kspecs[0].xtype
    n = comp.cartan.rank
    total = [0] * (n + 1 if xt == "A" else n)
    for f in b:
        for k, v in enumerate(content(xt, n, letters_of(f))):
            total[k] += v
    return tuple(total)


def graded_sum(comp, subset=None):
    """``sum q^{-(D(b) - D(v))} x^{wt(b)}`` over ``subset`` (default all of ``B``).

    ``v`` is the generator; in type A its ``D`` value is 0.
    """
    D = d_composite(comp)
    base = D[comp.gens]
    out = Poly()
    for b in (comp.graph.vertices if subset is None else subset):
        out.add(_x_weight(comp, b), -(D[b] - base))
    return out.clean()


def _factors_for(spec, omega):
    """KR specs ``B^{r_N,1} (x) ... (x) B^{r_1,1}`` with ``lambda = -sum omega_{r_k^*}``."""
    rs = []
    for i, m in enumerate(omega, start=1):
        if m > 0:
            raise ValueError(f"weight with omega coordinates {omega} is not anti-dominant; "
                             "use macdonald_E_t0")
        rs += [ct.dual_node(spec, i)] * (-m)
    rs.sort(reverse=True)
    return [KRSpec(spec, r, 1) for r in rs]


def _setup(family, n, lam):
    if family not in ("A1", "D1"):
        raise UnsupportedSpec("Macdonald specializations are implemented for A_n^(1) and D_n^(1)")
    spec = ct.make_spec(family, n)
    xt = "A" if family == "A1" else "D"
    lam = tuple(lam)
    size = n + 1 if xt == "A" else n
    if len(lam) != size:
        raise ValueError(f"expected {size} coordinates, got {len(lam)}")
    return spec, xt, lam


def macdonald_P_t0(family, n, lam, budget=DEFAULT_BUDGET):
    """``P_lambda(x; q, 0)`` for anti-dominant ``lambda`` via the energy of a KR tensor product.

    ``lam`` is a ``gl_{n+1}`` vector in type A and an epsilon vector in type D.
    """
    spec, xt, lam = _setup(family, n, lam)
    omega = eps_to_omega(xt, n, lam)
    factors = _factors_for(spec, omega)
    if not factors:
        return _monomial(lam)
    comp = composite(factors, budget=budget)
    out = graded_sum(comp)
    return out.shift_x(_offset(xt, n, lam, comp))


def _monomial(lam):
    out = Poly()
    out.add(tuple(lam), 0)
    return out


def _offset(xt, n, lam, comp):
    if xt != "A":
        return (0,) * n
    deg = sum(k.r for k in comp.kspecs)
    extra = sum(lam) - deg
    if extra % (n + 1):
        raise ValueError(f"{lam} is not a gl_{n + 1} weight of this composite")
    return (extra // (n + 1),) * (n + 1)


def minimal_sorting(lam):
    """The anti-dominant rearrangement of a ``gl`` vector."""
    return tuple(sorted(lam))


def macdonald_E_t0(n, lam, budget=DEFAULT_BUDGET, return_subset=False):
    """Nonsymmetric ``E_lambda(x; q, 0)`` of type ``A_n^(1)``.

    Sums over the Demazure subset ``B'`` of the composite built from the
    anti-dominant rearrangement of ``lambda``.
    """
    spec, xt, lam = _setup("A1", n, lam)
    anti = minimal_sorting(lam)
    factors = _factors_for(spec, eps_to_omega(xt, n, anti))
    if not factors:
        out = _monomial(lam)
        return (out, None) if return_subset else out
    comp = composite(factors, budget=budget)
    try:
        word, tau = ct.translation_decompose(spec, eps_to_omega(xt, n, lam))
    except ValueError as exc:
        raise CrystalError(f"cannot decompose t_lambda: {exc}") from exc
    sub = demazure_subset(comp, 1, word)
    out = graded_sum(comp, sub.vertices).shift_x(_offset(xt, n, lam, comp))
    return (out, sub) if return_subset else out


def describe_subset(sub):
    return sorted(serialize(b) for b in sub.vertices)
