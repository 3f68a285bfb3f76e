"""Classical crystals of types A, B, C, D.

Letters are integers: ``k`` for the unbarred letter, ``-k`` for its bar and
``0`` for the middle letter of type B. A tableau is a tuple of columns (left to
right), each column a tuple of letters from bottom to top. The reading word
lists the columns left to right, each read from top to bottom; this is the
order ``x_M (x) ... (x) x_1`` in which the tableau sits inside ``B(omega_1)^{(x) M}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .crystal_core import CrystalGraph, DEFAULT_BUDGET, generate, signature
from .errors import UnsupportedSpec


# ---------------------------------------------------------------- letters

def alphabet(xtype, n):
    """Letters in the order of the standard crystal."""
    if xtype == "A":
        return tuple(range(1, n + 2))
    if xtype == "B":
        return tuple(range(1, n + 1)) + (0,) + tuple(-k for k in range(n, 0, -1))
    if xtype in ("C", "D"):
        return tuple(range(1, n + 1)) + tuple(-k for k in range(n, 0, -1))
    raise UnsupportedSpec(f"unsupported classical type {xtype}")


def _standard_arrows(xtype, n):
    f = {}
    if xtype == "A":
        for i in range(1, n + 1):
            f[(i, i)] = i + 1
        return f
    for i in range(1, n):
        f[(i, i)] = i + 1
        f[(-(i + 1), i)] = -i
    if xtype == "B":
        f[(n, n)] = 0
        f[(0, n)] = -n
    elif xtype == "C":
        f[(n, n)] = -n
    elif xtype == "D":
        f[(n - 1, n)] = -n
        f[(n, n)] = -(n - 1)
    return f


def _check_rank(xtype, n):
    low = {"A": 1, "B": 2, "C": 2, "D": 3}
    if xtype not in low:
        raise UnsupportedSpec(f"unsupported classical type {xtype}")
    if n < low[xtype]:
        raise UnsupportedSpec(f"type {xtype} needs rank >= {low[xtype]}")


class LetterCrystal:
    """A small crystal given by an explicit arrow table."""

    def __init__(self, letters, f_arrows, nodes):
        self.letters = tuple(letters)
        self.nodes = tuple(nodes)
        self._f = dict(f_arrows)
        self._e = {(w, i): v for (v, i), w in self._f.items()}
        self._eps = {}
        self._phi = {}
        for x in self.letters:
            for i in self.nodes:
                k, y = 0, x
                while (y, i) in self._e:
                    y = self._e[(y, i)]
                    k += 1
                self._eps[(x, i)] = k
                k, y = 0, x
                while (y, i) in self._f:
                    y = self._f[(y, i)]
                    k += 1
                self._phi[(x, i)] = k

    def f(self, x, i):
        return self._f.get((x, i))

    def e(self, x, i):
        return self._e.get((x, i))

    def eps(self, x, i):
        return self._eps.get((x, i), 0)

    def phi(self, x, i):
        return self._phi.get((x, i), 0)


@lru_cache(maxsize=None)
def standard_letters(xtype, n):
    _check_rank(xtype, n)
    return LetterCrystal(alphabet(xtype, n), _standard_arrows(xtype, n), range(1, n + 1))


def spin_letters_all(n):
    out = []
    for k in range(2 ** n):
        out.append("".join("-" if (k >> (n - 1 - j)) & 1 else "+" for j in range(n)))
    return out


@lru_cache(maxsize=None)
def spin_letters(xtype, n):
    """The crystal of signs ``(s_1..s_n)`` with weight ``(1/2) sum s_k e_k``.

    Type B gives ``B(omega_n)``; type D gives ``B(omega_n) + B(omega_{n-1})``
    (even and odd numbers of minus signs).
    """
    if xtype not in ("B", "D"):
        raise UnsupportedSpec("spin letters exist only in types B and D")
    _check_rank(xtype, n)
    f = {}
    for x in spin_letters_all(n):
        for i in range(1, n):
            if x[i - 1] == "+" and x[i] == "-":
                f[(x, i)] = x[:i - 1] + "-+" + x[i + 1:]
        if xtype == "B":
            if x[n - 1] == "+":
                f[(x, n)] = x[:n - 1] + "-"
        else:
            if x[n - 2:] == "++":
                f[(x, n)] = x[:n - 2] + "--"
    return LetterCrystal(spin_letters_all(n), f, range(1, n + 1))


def letter_eps_weight(x, n):
    """Weight of a letter in epsilon coordinates (length ``n``, or ``n+1`` for A)."""
    if isinstance(x, str):
        return tuple(Fraction(1, 2) if c == "+" else Fraction(-1, 2) for c in x)
    w = [0] * n
    if x > 0:
        w[x - 1] = 1
    elif x < 0:
        w[-x - 1] = -1
    return tuple(w)


def content(xtype, n, letters):
    """Total epsilon-coordinate weight of a sequence of letters."""
    size = n + 1 if xtype == "A" else n
    w = [0] * size
    for x in letters:
        for k, v in enumerate(letter_eps_weight(x, size)):
            w[k] += v
    return tuple(w)


# ---------------------------------------------------------------- words and tableaux

def word_op(lc, word, i, raising):
    """Apply ``e_i`` (``raising``) or ``f_i`` to a word in written order."""
    pairs = [(lc.eps(x, i), lc.phi(x, i)) for x in word]
    _, _, e_pos, f_pos = signature(pairs)
    pos = e_pos if raising else f_pos
    if pos is None:
        return None
    y = lc.e(word[pos], i) if raising else lc.f(word[pos], i)
    return word[:pos] + (y,) + word[pos + 1:]


def word_eps_phi(lc, word, i):
    eps, phi, _, _ = signature([(lc.eps(x, i), lc.phi(x, i)) for x in word])
    return eps, phi


def reading_word(tableau):
    out = []
    for col in tableau:
        out.extend(reversed(col))
    return tuple(out)


def shape_of(tableau):
    return tuple(len(c) for c in tableau)


def from_word(word, heights):
    cols = []
    k = 0
    for h in heights:
        seg = word[k:k + h]
        cols.append(tuple(reversed(seg)))
        k += h
    if k != len(word):
        raise ValueError("word length does not match the shape")
    return tuple(cols)


def column_reading(tableau):
    """Tableau to tensor word (written order)."""
    return reading_word(tableau)


def column_filling(word, heights):
    """Tensor word to tableau with the given column heights."""
    return from_word(word, heights)


def tableau_op(lc, tableau, i, raising):
    if isinstance(tableau, tuple) and tableau and isinstance(tableau[0], str):
        w = word_op(lc, tableau, i, raising)
        return w
    heights = shape_of(tableau)
    w = word_op(lc, reading_word(tableau), i, raising)
    return None if w is None else from_word(w, heights)


def tableau_eps_phi(lc, tableau, i):
    if tableau and isinstance(tableau[0], str):
        return word_eps_phi(lc, tableau, i)
    return word_eps_phi(lc, reading_word(tableau), i)


def letters_of(element):
    """Flat letters of a tableau (spin columns count as letters)."""
    if element and isinstance(element[0], str):
        return tuple(element)
    return reading_word(element)


# ---------------------------------------------------------------- weights

def positive_roots(xtype, n):
    roots = []
    dim = n + 1 if xtype == "A" else n
    def vec(pairs):
        v = [0] * dim
        for k, c in pairs:
            v[k] += c
        return tuple(v)
    if xtype == "A":
        for i in range(dim):
            for j in range(i + 1, dim):
                roots.append(vec([(i, 1), (j, -1)]))
        return roots
    for i in range(n):
        for j in range(i + 1, n):
            roots.append(vec([(i, 1), (j, -1)]))
            roots.append(vec([(i, 1), (j, 1)]))
    if xtype == "B":
        roots += [vec([(i, 1)]) for i in range(n)]
    elif xtype == "C":
        roots += [vec([(i, 2)]) for i in range(n)]
    return roots


def omega_eps(xtype, n, k):
    """Fundamental weight ``omega_k`` in epsilon coordinates."""
    dim = n + 1 if xtype == "A" else n
    v = [Fraction(0)] * dim
    if xtype == "B" and k == n:
        return tuple(Fraction(1, 2) for _ in range(n))
    if xtype == "D" and k == n:
        return tuple(Fraction(1, 2) for _ in range(n))
    if xtype == "D" and k == n - 1:
        return tuple(Fraction(1, 2) for _ in range(n - 1)) + (Fraction(-1, 2),)
    for j in range(k):
        v[j] = Fraction(1)
    return tuple(v)


def omega_to_eps(xtype, n, gamma):
    dim = n + 1 if xtype == "A" else n
    v = [Fraction(0)] * dim
    for k, m in enumerate(gamma, start=1):
        if m:
            for j, c in enumerate(omega_eps(xtype, n, k)):
                v[j] += m * c
    return tuple(v)


def eps_to_omega(xtype, n, v):
    """Coordinates ``<alpha_i^vee, v>``."""
    out = []
    for i in range(1, n + 1):
        if i < n or xtype == "A":
            out.append(v[i - 1] - v[i])
        elif xtype == "B":
            out.append(2 * v[n - 1])
        elif xtype == "C":
            out.append(v[n - 1])
        else:
            out.append(v[n - 2] + v[n - 1])
    return tuple(int(x) for x in out)


def _ip(a, b):
    return sum(Fraction(x) * y for x, y in zip(a, b))


def weyl_dimension(xtype, n, gamma):
    """Weyl dimension formula, computed from the root system."""
    roots = positive_roots(xtype, n)
    dim = len(roots[0])
    rho = [Fraction(0)] * dim
    for a in roots:
        for j in range(dim):
            rho[j] += Fraction(a[j], 2)
    lam = omega_to_eps(xtype, n, gamma)
    num = Fraction(1)
    for a in roots:
        num *= _ip([x + y for x, y in zip(lam, rho)], a) / _ip(rho, a)
    assert num.denominator == 1
    return int(num)


# ---------------------------------------------------------------- generalized partitions

@dataclass(frozen=True)
class GeneralizedPartition:
    """Column heights (weakly decreasing), an optional half column, a type-D color."""

    columns: tuple
    half: bool = False
    color: int | None = None

    @property
    def boxes(self):
        return sum(self.columns)

    def rows(self):
        top = self.columns[0] if self.columns else 0
        return tuple(sum(1 for c in self.columns if c >= h) for h in range(1, top + 1))


def lambda_partition(xtype, n, gamma):
    gamma = tuple(gamma)
    if len(gamma) != n or any(m < 0 for m in gamma):
        raise ValueError(f"{gamma} is not a dominant weight of rank {n}")
    cols = []
    half = False
    color = None
    if xtype in ("A", "C"):
        for h in range(n, 0, -1):
            cols += [h] * gamma[h - 1]
    elif xtype == "B":
        cols += [n] * (gamma[n - 1] // 2)
        half = bool(gamma[n - 1] % 2)
        for h in range(n - 1, 0, -1):
            cols += [h] * gamma[h - 1]
    elif xtype == "D":
        a, b = gamma[n - 2], gamma[n - 1]
        full, rem = divmod(abs(b - a), 2)
        cols += [n] * full
        half = bool(rem)
        if b != a:
            color = 1 if b > a else 2
        cols += [n - 1] * min(a, b)
        for h in range(n - 2, 0, -1):
            cols += [h] * gamma[h - 1]
    else:
        raise UnsupportedSpec(xtype)
    return GeneralizedPartition(tuple(cols), half, color)


def is_non_spin(xtype, n, gamma):
    if xtype == "B":
        return gamma[n - 1] % 2 == 0
    if xtype == "D":
        return gamma[n - 2] == gamma[n - 1]
    return True


def weight_of_columns(xtype, n, columns):
    """Dominant weight whose generalized partition has these (integral) columns."""
    g = [0] * n
    for h in columns:
        if xtype == "B" and h == n:
            g[n - 1] += 2
        elif xtype == "D" and h == n - 1:
            g[n - 2] += 1
            g[n - 1] += 1
        elif xtype == "D" and h == n:
            g[n - 1] += 2
        else:
            g[h - 1] += 1
    return tuple(g)


def highest_filling(columns):
    return tuple(tuple(range(1, h + 1)) for h in columns)


# ---------------------------------------------------------------- crystals

def standard_crystal(xtype, n):
    lc = standard_letters(xtype, n)
    edges = {(x, i): lc.f(x, i) for x in lc.letters for i in lc.nodes if lc.f(x, i) is not None}
    return CrystalGraph(lc.nodes, lc.letters, edges, name=f"B(omega_1) {xtype}{n}")


class TableauModel:
    """Crystal operators on tableaux of a fixed classical type."""

    def __init__(self, xtype, n, spin=False):
        self.xtype = xtype
        self.n = n
        self.lc = spin_letters(xtype, n) if spin else standard_letters(xtype, n)

    def e(self, b, i):
        return tableau_op(self.lc, b, i, True)

    def f(self, b, i):
        return tableau_op(self.lc, b, i, False)

    def eps_phi(self, b, i):
        return tableau_eps_phi(self.lc, b, i)


def kn_crystal(xtype, n, gamma, budget=DEFAULT_BUDGET):
    """``B(gamma)`` realized by KN tableaux (non-spin ``gamma``)."""
    _check_rank(xtype, n)
    gamma = tuple(gamma)
    if not is_non_spin(xtype, n, gamma):
        raise UnsupportedSpec(f"{gamma} is a spin weight; use spin_crystal")
    shape = lambda_partition(xtype, n, gamma)
    top = highest_filling(shape.columns)
    model = TableauModel(xtype, n)
    g = generate([top], model.e, model.f, tuple(range(1, n + 1)), budget,
                 name=f"B{gamma} {xtype}{n}", meta={"xtype": xtype, "n": n, "gamma": gamma})
    return g


def spin_highest(xtype, n, s, node=None):
    node = n if node is None else node
    col = "+" * n if node == n else "+" * (n - 1) + "-"
    return (col,) * s


def spin_crystal(xtype, n, s, node=None, budget=DEFAULT_BUDGET):
    """``B(s omega_node)`` for the spin node(s) inside the s-fold spin power."""
    if xtype not in ("B", "D"):
        raise UnsupportedSpec("spin crystals exist only in types B and D")
    node = n if node is None else node
    if node != n and not (xtype == "D" and node == n - 1):
        raise UnsupportedSpec(f"node {node} is not a spin node of {xtype}{n}")
    if s < 1:
        raise ValueError("s must be positive")
    model = TableauModel(xtype, n, spin=True)
    gamma = tuple(s if k == node else 0 for k in range(1, n + 1))
    return generate([spin_highest(xtype, n, s, node)], model.e, model.f, tuple(range(1, n + 1)),
                    budget, name=f"B{gamma} {xtype}{n} spin", meta={"xtype": xtype, "n": n, "gamma": gamma})


def classical_crystal(xtype, n, gamma, budget=DEFAULT_BUDGET):
    """Any ``B(gamma)`` that is either non-spin or a multiple of a spin weight."""
    gamma = tuple(gamma)
    if is_non_spin(xtype, n, gamma):
        return kn_crystal(xtype, n, gamma, budget)
    support = [k for k, m in enumerate(gamma, start=1) if m]
    if len(support) == 1:
        return spin_crystal(xtype, n, gamma[support[0] - 1], support[0], budget)
    raise UnsupportedSpec(f"no model for mixed spin weight {gamma}")


# ---------------------------------------------------------------- sanity conditions

def letter_rank(xtype, n, x):
    """Position in the standard crystal; ``n`` and ``-n`` share a rank in type D."""
    if xtype == "A":
        return x
    if x > 0:
        return x
    if x == 0:
        return n + 1
    if xtype == "D" and x == -n:
        return n
    return 2 * n + 2 - (-x) if xtype == "B" else 2 * n + 1 - (-x)


def precedes(xtype, n, x, y):
    """Strict order ``x < y``; ``n`` and ``-n`` are incomparable in type D."""
    if xtype == "D" and {x, y} == {n, -n}:
        return False
    return letter_rank(xtype, n, x) < letter_rank(xtype, n, y)


def is_semistandard_like(xtype, n, tableau):
    """Rows weakly increase; columns strictly increase after dropping the exceptions."""
    if tableau and isinstance(tableau[0], str):
        return True
    height = max((len(c) for c in tableau), default=0)
    for h in range(height):
        row = [c[h] for c in tableau if len(c) > h]
        for x, y in zip(row, row[1:]):
            if precedes(xtype, n, y, x):
                return False
    skip = {0} if xtype == "B" else {n, -n} if xtype == "D" else set()
    for col in tableau:
        kept = [x for x in col if x not in skip]
        for x, y in zip(kept, kept[1:]):
            if not precedes(xtype, n, x, y):
                return False
    return True


def highest_vertices(graph, nodes):
    return [b for b in graph.vertices if all(graph.e(b, i) is None for i in nodes)]


def relabel_alphabet(letter, shift):
    """Shift letter names by ``shift`` keeping bars and the zero letter."""
    if isinstance(letter, str) or letter == 0:
        return letter
    return letter + shift if letter > 0 else letter - shift

