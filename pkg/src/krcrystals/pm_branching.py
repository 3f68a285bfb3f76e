"""Plus-minus diagrams and the one-step branching ``X_n -> X_{n-1}``.

A diagram is a chain ``lambda <= mu <= Lambda`` of partitions with horizontal
strip differences. ``mu / lambda`` holds the ``+`` (and in type B possibly one
``0``) and ``Lambda / mu`` holds the ``-``. Diagrams are stored by their outer
column heights and per-row symbol counts; the column layout is derived.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CrystalError
from .kn_tableaux import (TableauModel, highest_filling, lambda_partition,
                          relabel_alphabet, weight_of_columns)


def _rows(columns, height):
    return tuple(sum(1 for c in columns if c >= h) for h in range(1, height + 1))


def _cols(rows):
    if not rows or rows[0] == 0:
        return ()
    return tuple(sum(1 for r in rows if r > c) for c in range(rows[0]))


@dataclass(frozen=True)
class PMDiagram:
    xtype: str
    n: int
    outer: tuple        # column heights of Lambda, weakly decreasing
    plus: tuple         # number of + in each row, index h-1 for height h
    minus: tuple
    zero: int = 0       # type B: number of 0 symbols (at height n)
    color: int | None = None

    @property
    def height(self):
        return len(self.plus)

    def outer_rows(self):
        return _rows(self.outer, self.height)

    def mu_rows(self):
        o = self.outer_rows()
        return tuple(o[h] - self.minus[h] for h in range(self.height))

    def inner_rows(self):
        m = self.mu_rows()
        z = self.zero_rows()
        return tuple(m[h] - self.plus[h] - z[h] for h in range(self.height))

    def zero_rows(self):
        z = [0] * self.height
        if self.zero:
            z[self.n - 1] = self.zero
        return tuple(z)

    @property
    def inner(self):
        return _cols(self.inner_rows())

    @property
    def middle(self):
        return _cols(self.mu_rows())

    def columns(self):
        """``(Lambda_c, mu_c, lambda_c, is_zero)`` for each column of the outer shape."""
        mu = self.middle
        lam = self.inner
        out = []
        zcol = None
        if self.zero:
            zcol = self.inner_rows()[self.n - 1] + self.plus[self.n - 1]
        for c, big in enumerate(self.outer):
            m = mu[c] if c < len(mu) else 0
            l = lam[c] if c < len(lam) else 0
            out.append((big, m, l, c == zcol))
        return out

    def symbols(self):
        """List of ``(symbol, column, height)`` with symbol in ``+ - 0``."""
        out = []
        for c, (big, m, l, z) in enumerate(self.columns()):
            if m > l:
                out.append(("0" if z else "+", c, m))
            if big > m:
                out.append(("-", c, big))
        return out

    def key(self):
        return (self.xtype, self.n, self.outer, self.plus, self.minus, self.zero, self.color)

    def __str__(self):
        return pm_diagram_str(self)


def pm_diagram_str(p):
    cols = []
    for big, m, l, z in p.columns():
        s = "." * l
        if m > l:
            s += "0" if z else "+"
        if big > m:
            s += "-"
        cols.append(s or "()")
    tag = f" c{p.color}" if p.color else ""
    return "[" + " ".join(cols) + "]" + tag


def make_pm(xtype, n, outer, mu, lam, zero=0, color=None):
    """Diagram from column heights of ``Lambda``, ``mu``, ``lambda``."""
    outer = tuple(h for h in outer if h > 0)
    height = outer[0] if outer else 0
    o = _rows(outer, height)
    m = _rows(tuple(mu), height)
    l = _rows(tuple(lam), height)
    z = [0] * height
    if zero:
        z[n - 1] = 1
    p = PMDiagram(xtype, n, outer,
                  tuple(m[h] - l[h] - z[h] for h in range(height)),
                  tuple(o[h] - m[h] for h in range(height)), zero, color)
    validate(p)
    return p


def validate(p):
    o, m, l = p.outer_rows(), p.mu_rows(), p.inner_rows()
    H = p.height
    for rows in (o, m, l):
        if any(x < 0 for x in rows) or any(rows[h] < rows[h + 1] for h in range(H - 1)):
            raise CrystalError(f"not a partition chain: {p}")
    for h in range(H):
        if not (l[h] <= m[h] <= o[h]):
            raise CrystalError(f"shapes not nested: {p}")
        if p.plus[h] < 0 or p.minus[h] < 0:
            raise CrystalError(f"negative symbol count: {p}")
    for h in range(H - 1):
        if m[h + 1] > l[h] or o[h + 1] > m[h]:
            raise CrystalError(f"not a horizontal strip: {p}")
    n = p.n
    if p.xtype in ("B", "C") and H >= n and l[n - 1] > 0:
        raise CrystalError(f"inner shape has a height-{n} column: {p}")
    if p.zero:
        if p.xtype != "B" or p.zero != 1 or H < n:
            raise CrystalError(f"misplaced 0: {p}")
    if p.xtype == "D":
        has = H >= n - 1 and l[n - 2] > 0
        if has and p.color not in (1, 2):
            raise CrystalError(f"missing color: {p}")
        if not has and p.color is not None:
            raise CrystalError(f"spurious color: {p}")
    elif p.color is not None:
        raise CrystalError(f"color outside type D: {p}")
    return True


# ---------------------------------------------------------------- enumeration

def _strip_children(cols):
    """All partitions ``nu`` (as column heights) with ``cols / nu`` a horizontal strip."""
    cols = tuple(cols)
    out = []

    def rec(k, acc):
        if k == len(cols):
            out.append(tuple(acc))
            return
        for d in (0, 1):
            h = cols[k] - d
            if h < 0 or (acc and h > acc[-1]):
                continue
            rec(k + 1, acc + [h])
    rec(0, [])
    return out


def enumerate_pm(xtype, n, outer):
    """All diagrams with the given outer column heights (a non-spin shape)."""
    outer = tuple(sorted((h for h in outer if h > 0), reverse=True))
    if xtype == "D" and any(h >= n for h in outer):
        raise CrystalError("outer shape with a height-n column is spin in type D")
    if any(h > n for h in outer):
        raise CrystalError("outer shape too tall")
    seen = {}
    for mu in _strip_children(outer):
        for lam in _strip_children(mu):
            lam_t = tuple(lam)
            if xtype in ("B", "C") and any(h == n for h in lam_t):
                continue
            mu_rows = _rows(mu, n)
            lam_rows = _rows(lam_t, n)
            zero_opts = [0]
            if xtype == "B" and mu_rows[n - 1] - lam_rows[n - 1] >= 1:
                zero_opts.append(1)
            colors = [None]
            if xtype == "D" and any(h == n - 1 for h in lam_t):
                colors = [1, 2]
            for z in zero_opts:
                for col in colors:
                    p = make_pm(xtype, n, outer, mu, lam_t, z, col)
                    seen[p.key()] = p
    return sorted(seen.values(), key=lambda p: p.key())


# ---------------------------------------------------------------- branching map

def pm_to_highest(p):
    """The ``X_{n-1}`` highest weight tableau attached to a diagram."""
    validate(p)
    n = p.n
    cols = p.columns()
    fill = []
    skip = []
    S = []
    for big, m, l, z in cols:
        col = [None] * big
        full = False
        if m > l and not z and m == n:
            col = list(range(1, n + 1))
            full = True
        else:
            top = big
            if big > m:
                col[big - 1] = -1
                top -= 1
            if z:
                col[n - 1] = 0
                top -= 1
            for h in range(top):
                col[h] = h + 2
            if m > l and not z:
                S.append(m)
        fill.append(col)
        skip.append(full)
    S.sort()
    for c, col in enumerate(fill):
        if skip[c]:
            continue
        for h in range(len(col) - 1, -1, -1):
            if not S:
                break
            if col[h] == -1:
                top = S.pop()
                col[h] = -(top + 1)
            elif h == 0 and col[0] == 2:
                top = S.pop()
                k = 1
                while k < len(col) and col[k] == k + 2:
                    k += 1
                # col[0:k] is 2..k+1; replace by 1..top, top+2..k+1
                new = list(range(1, top + 1)) + list(range(top + 2, k + 2))
                col[0:k] = new
        if not S:
            continue
    if p.xtype == "D" and p.color == 2 and any(l == n - 1 for _, _, l, _ in cols):
        for col in fill:
            if len(col) >= n - 1 and col[n - 2] == n:
                col[n - 2] = -n
    return tuple(tuple(c) for c in fill)


@lru_cache(maxsize=None)
def _inverse_table(xtype, n, outer):
    table = {}
    for p in enumerate_pm(xtype, n, outer):
        t = pm_to_highest(p)
        if t in table:
            raise CrystalError(f"branching map not injective at {p}")
        table[t] = p
    return table


def highest_to_pm(tableau, xtype, n):
    outer = tuple(len(c) for c in tableau)
    table = _inverse_table(xtype, n, outer)
    if tableau not in table:
        raise CrystalError(f"{tableau} is not an X_{{n-1}} highest weight tableau")
    return table[tableau]


def branch_nodes(n):
    return tuple(range(2, n + 1))


def is_branch_highest(tableau, xtype, n):
    model = TableauModel(xtype, n)
    return all(model.e(tableau, i) is None for i in branch_nodes(n))


# ---------------------------------------------------------------- nested pairs

@dataclass(frozen=True)
class NestedPair:
    P: PMDiagram
    p: PMDiagram
    pairs: tuple        # ((symbol, column, height) in p, partner) partner in P or p


def pair_symbols(P, p):
    """Pair the symbols of a nested pair by the three successive rules."""
    pairs, _, _ = _pairing(P, p)
    return NestedPair(P, p, pairs)


def _pairing(P, p):
    if tuple(P.inner) != tuple(p.outer):
        raise CrystalError("outer(p) must equal inner(P)")
    Psym = P.symbols()
    psym = p.symbols()
    Pplus = sorted([s for s in Psym if s[0] == "+"], key=lambda s: s[1])
    Pminus = sorted([s for s in Psym if s[0] == "-"], key=lambda s: s[1])
    pplus = sorted([s for s in psym if s[0] == "+"], key=lambda s: s[1])
    pminus = sorted([s for s in psym if s[0] == "-"], key=lambda s: s[1])
    used = set()
    pairs = []
    paired_p = set()
    for s in pplus:
        cands = [t for t in Pplus if t not in used and t[1] <= s[1]]
        if cands:
            t = cands[0]
            used.add(t)
            paired_p.add(s)
            pairs.append((s, ("P",) + t))
    for s in pminus:
        cands = [t for t in Pminus if t not in used and t[1] <= s[1]]
        if cands:
            t = cands[-1]
            used.add(t)
            paired_p.add(s)
            pairs.append((s, ("P",) + t))
    for s in pplus:
        if s in paired_p:
            continue
        cands = [t for t in pminus if t not in paired_p]
        if cands:
            t = cands[0]
            paired_p.add(t)
            paired_p.add(s)
            pairs.append((s, ("p",) + t))
    return tuple(pairs), used, paired_p


def _rebuild(d, plus, minus, outer=None):
    outer = d.outer if outer is None else outer
    height = max(len(plus), outer[0] if outer else 0)
    plus = tuple(plus) + (0,) * (height - len(plus))
    minus = tuple(minus) + (0,) * (height - len(minus))
    # trim to outer height
    H = outer[0] if outer else 0
    if any(plus[H:]) or any(minus[H:]):
        raise CrystalError("symbol above the outer shape")
    q = PMDiagram(d.xtype, d.n, tuple(outer), plus[:H], minus[:H], d.zero, None)
    lam = q.inner
    color = None
    if d.xtype == "D" and any(h == d.n - 1 for h in lam):
        color = d.color
    q = PMDiagram(d.xtype, d.n, tuple(outer), plus[:H], minus[:H], d.zero, color)
    validate(q)
    return q


def e1_nested(P, p):
    """``e_1`` on the ``X_{n-2}`` highest vector attached to ``(P, p)``.

    Returns the new pair or ``None``.
    """
    _, usedP, paired_p = _pairing(P, p)
    psym = p.symbols()
    Psym = P.symbols()
    free_pplus = sorted([s for s in psym if s[0] == "+" and s not in paired_p], key=lambda s: s[1])
    free_Pminus = sorted([s for s in Psym if s[0] == "-" and s not in usedP], key=lambda s: s[1])
    if not free_pplus and not free_Pminus:
        return None
    H = P.height
    Pp, Pm = list(P.plus), list(P.minus)
    pp, pm = list(p.plus) + [0] * (H - p.height), list(p.minus) + [0] * (H - p.height)
    if free_pplus:
        _, c, k = free_pplus[-1]
        above = ("-", c, k + 1) in psym
        if above:
            Pp[k] += 1          # height k+1
            pm[k] -= 1
            pp[k - 1] -= 1
            pm[k - 1] += 1
        else:
            Pp[k - 1] += 1
            pp[k - 1] -= 1
    else:
        _, c, k = free_Pminus[0]
        below = ("+", c, k - 1) in Psym
        if below:
            Pm[k - 1] -= 1
            Pp[k - 1] += 1
            Pp[k - 2] -= 1
            pm[k - 2] += 1
        else:
            Pm[k - 1] -= 1
            pm[k - 1] += 1
    newP = _rebuild(P, Pp, Pm)
    newp = _rebuild(p, pp, pm, outer=newP.inner)
    return newP, newp


# ---------------------------------------------------------------- the involution

KINDS = ("E", "P", "M", "PM")


def _kind(big, m, l, z):
    if z:
        raise CrystalError("the involution is undefined on diagrams with a 0")
    if big == l:
        return "E"
    if big == m and m == l + 1:
        return "P"
    if big == m + 1 and m == l:
        return "M"
    return "PM"


def _column_of(kind, l):
    return {"E": (l, l, l), "P": (l + 1, l + 1, l), "M": (l + 1, l, l), "PM": (l + 2, l + 1, l)}[kind]


def sigma_involution(P, r, s):
    """The involution on diagrams whose outer shape sits in the ``r x s`` rectangle.

    Columns missing from the outer shape are treated as empty columns of height 0.
    The congruence rules are applied for every inner height ``0 <= i <= r-1``.
    """
    cols = [(_kind(big, m, l, z), l) for big, m, l, z in P.columns()]
    if len(cols) > s:
        raise CrystalError("diagram is wider than the rectangle")
    cols += [("E", 0)] * (s - len(cols))
    counts = {}
    for kind, l in cols:
        counts[(kind, l)] = counts.get((kind, l), 0) + 1
    new = dict(counts)
    for i in range(0, r):
        if (i - (r - 1)) % 2 == 0:
            a, b = ("P", i), ("M", i)
        else:
            a, b = ("PM", i), ("E", i)
        new[a], new[b] = counts.get(b, 0), counts.get(a, 0)
    triples = []
    for (kind, l), k in new.items():
        triples += [_column_of(kind, l)] * k
    triples.sort(key=lambda t: (-t[0], -t[1], -t[2]))
    if any(t[0] > r for t in triples):
        raise CrystalError("involution left the rectangle")
    outer = [t[0] for t in triples]
    mu = [t[1] for t in triples]
    lam = [t[2] for t in triples]
    return make_pm(P.xtype, P.n, outer, mu, lam, 0, P.color if P.xtype == "D" else None)


# ---------------------------------------------------------------- path transport

def raise_to_top(model, b, nodes):
    """Apply raising operators in ``nodes`` until none applies; return (top, path)."""
    path = []
    while True:
        for i in nodes:
            c = model.e(b, i)
            if c is not None:
                path.append(i)
                b = c
                break
        else:
            return b, path


def lower_along(model, b, path):
    for i in reversed(path):
        b = model.f(b, i)
        if b is None:
            raise CrystalError("path transport fell off the crystal")
    return b


def shift_tableau(t, shift):
    return tuple(tuple(relabel_alphabet(x, shift) for x in col) for col in t)


def pair_to_element(P, p):
    """The ``X_{n-2}`` highest tableau of ``B(outer(P))`` attached to ``(P, p)``."""
    xtype, n = P.xtype, P.n
    big = TableauModel(xtype, n)
    small = TableauModel(xtype, n - 1)
    bP = pm_to_highest(P)
    t = pm_to_highest(p)
    h0 = highest_filling(p.outer)
    top, path = raise_to_top(small, t, tuple(range(1, n)))
    if top != h0:
        raise CrystalError("small tableau does not reach the highest filling")
    return lower_along(big, bP, [i + 1 for i in path])


def element_to_pair(b, xtype, n):
    big = TableauModel(xtype, n)
    small = TableauModel(xtype, n - 1)
    top, path = raise_to_top(big, b, branch_nodes(n))
    P = highest_to_pm(top, xtype, n)
    lam = P.inner
    t = lower_along(small, highest_filling(lam), [i - 1 for i in path])
    return P, highest_to_pm(t, xtype, n - 1)


def shape_weight(xtype, n, columns):
    return weight_of_columns(xtype, n, columns)


def outer_of_weight(xtype, n, gamma):
    return lambda_partition(xtype, n, gamma).columns
