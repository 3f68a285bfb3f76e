"""Cartan data for the non-exceptional affine types.

Node 0 is always the affine node. Matrix entries follow the convention
``a[i][j] = <alpha_i^vee, alpha_j>``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnsupportedSpec

FAMILIES = ("A1", "B1", "C1", "D1", "A2odd", "A2even", "D2")

# classical (finite) type of the subdiagram on nodes 1..n
CLASSICAL = {"A1": "A", "B1": "B", "C1": "C", "D1": "D",
             "A2odd": "C", "A2even": "C", "D2": "B"}

MIN_RANK = {"A1": 1, "B1": 2, "C1": 2, "D1": 4, "A2odd": 2, "A2even": 2, "D2": 2}


def _set(a, i, j, v):
    a[i][j] = v


def _cartan_matrix(family, n):
    size = n + 1
    a = [[0] * size for _ in range(size)]
    for i in range(size):
        a[i][i] = 2
    # chain 1 - 2 - ... - n
    for i in range(1, n):
        a[i][i + 1] = a[i + 1][i] = -1
    if family == "A1":
        if n == 1:
            a[0][1] = a[1][0] = -2
        else:
            a[0][1] = a[1][0] = -1
            a[0][n] = a[n][0] = -1
    elif family in ("B1", "A2odd"):
        # 0 and 1 both attached to 2
        a[0][2] = a[2][0] = -1
        if family == "B1":
            # alpha_n short
            _set(a, n, n - 1, -2)
            if n == 2:
                a[2][0] = -2
        else:
            # alpha_n long
            _set(a, n - 1, n, -2)
            if n == 2:
                a[0][2] = -2
    elif family == "C1":
        a[1][0] = -2
        a[0][1] = -1
        a[n - 1][n] = -2
    elif family == "D1":
        a[0][2] = a[2][0] = -1
        a[n - 2][n] = a[n][n - 2] = -1
        a[n - 1][n] = a[n][n - 1] = 0
    elif family == "A2even":
        a[0][1] = -2
        a[1][0] = -1
        a[n - 1][n] = -2
    elif family == "D2":
        a[0][1] = -2
        a[1][0] = -1
        a[n][n - 1] = -2
    return tuple(tuple(r) for r in a)


def _marks(family, n):
    """Kac labels ``a_i`` and dual labels ``a_i^vee``."""
    if family == "A1":
        return (1,) * (n + 1), (1,) * (n + 1)
    if family == "B1":
        marks = (1, 1) + (2,) * (n - 1)
        comarks = (1, 1) + (2,) * (n - 2) + (1,)
        return marks, comarks
    if family == "C1":
        return (1,) + (2,) * (n - 1) + (1,), (1,) * (n + 1)
    if family == "D1":
        m = (1, 1) + (2,) * (n - 3) + (1, 1)
        return m, m
    if family == "A2odd":
        marks = (1, 1) + (2,) * (n - 2) + (1,)
        comarks = (1, 1) + (2,) * (n - 1)
        return marks, comarks
    if family == "A2even":
        return (2,) * n + (1,), (1,) + (2,) * n
    if family == "D2":
        return (1,) * (n + 1), (1,) + (2,) * (n - 1) + (1,)
    raise UnsupportedSpec(f"unsupported family {family!r}")


@dataclass(frozen=True)
class CartanSpec:
    family: str
    rank: int
    matrix: tuple = field(repr=False)
    marks: tuple = field(repr=False)
    comarks: tuple = field(repr=False)

    @property
    def n(self):
        return self.rank

    @property
    def index_set(self):
        return tuple(range(self.rank + 1))

    @property
    def classical_nodes(self):
        return tuple(range(1, self.rank + 1))

    @property
    def classical_type(self):
        return CLASSICAL[self.family]

    @property
    def is_twisted(self):
        return self.family in ("A2odd", "A2even", "D2")

    def name(self):
        n = self.rank
        if self.family == "A2odd":
            return f"A{2 * n - 1}(2)"
        if self.family == "A2even":
            return f"A{2 * n}(2)"
        if self.family == "D2":
            return f"D{n + 1}(2)"
        return f"{self.family[0]}{n}(1)"

    def __str__(self):
        return self.name()


def make_spec(family, rank):
    """Build the Cartan data of an affine family.

    Parameters
    ----------
    family : str
        One of ``FAMILIES`` or a display name such as ``"A2(1)"`` or ``"D3(2)"``.
    rank : int or None
        Rank of the classical subdiagram; ignored when ``family`` is a display name.
    """
    if family not in FAMILIES:
        family, rank = parse_type(family)
    if not isinstance(rank, int) or rank < MIN_RANK[family]:
        raise UnsupportedSpec(
            f"{family} needs rank >= {MIN_RANK[family]}, got {rank}")
    marks, comarks = _marks(family, rank)
    return CartanSpec(family, rank, _cartan_matrix(family, rank), marks, comarks)


_TYPE_RE = re.compile(r"^\s*([ABCDabcd])_?\{?(\d+)\}?\s*(?:\^)?\(?([12])\)?\s*$")


def parse_type(text):
    """Parse names like ``A2(1)``, ``C_3(1)``, ``A4(2)``, ``D3(2)``."""
    m = _TYPE_RE.match(str(text))
    if not m:
        raise UnsupportedSpec(f"unsupported family {text!r}")
    letter, num, twist = m.group(1).upper(), int(m.group(2)), int(m.group(3))
    if twist == 1:
        return letter + "1", num
    if letter == "A":
        if num % 2:
            return "A2odd", (num + 1) // 2
        return "A2even", num // 2
    if letter == "D":
        return "D2", num - 1
    raise UnsupportedSpec(f"unsupported family {text!r}")


def _check_node(spec, r):
    if not isinstance(r, int) or not 1 <= r <= spec.rank:
        raise UnsupportedSpec(f"node {r} is not a classical node of {spec}")


def c_coefficient(spec, r):
    _check_node(spec, r)
    return max(1, spec.marks[r] // spec.comarks[r])


def dual_node(spec, r):
    """The node ``r*`` with ``omega_{r*} = -w_0(omega_r)``."""
    _check_node(spec, r)
    n = spec.rank
    if spec.family == "A1":
        return n + 1 - r
    if spec.family == "D1" and n % 2 == 1 and r in (n - 1, n):
        return 2 * n - 1 - r
    return r


def level(spec, coeffs):
    """Level of an affine weight given by its coefficients on the ``Lambda_i``."""
    return sum(c * a for c, a in zip(coeffs, spec.comarks))


def affine_from_classical(spec, wt):
    """Level-zero affine weight from classical coordinates ``(w_1..w_n)``."""
    w0 = -sum(spec.comarks[i] * wt[i - 1] for i in range(1, spec.rank + 1))
    w0 = Fraction(w0, spec.comarks[0])
    if w0.denominator != 1:
        raise ValueError("weight does not lift to an integral level-0 weight")
    return (int(w0),) + tuple(wt)


# ---------------------------------------------------------------- automorphisms

def is_automorphism(spec, perm):
    a = spec.matrix
    return all(a[perm[i]][perm[j]] == a[i][j]
               for i in spec.index_set for j in spec.index_set)


def compose(*perms):
    """Composite of permutations, rightmost applied first."""
    size = len(perms[0])
    out = tuple(range(size))
    for p in reversed(perms):
        out = tuple(p[x] for x in out)
    return out


def identity(spec):
    return tuple(spec.index_set)


def promotion_perm(spec, k=1):
    m = spec.rank + 1
    return tuple((i + k) % m for i in range(m))


def swap_perm(spec, i, j):
    p = list(spec.index_set)
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def flip_perm(spec):
    n = spec.rank
    return tuple(n - i for i in range(n + 1))


def power(perm, k):
    out = tuple(range(len(perm)))
    for _ in range(k):
        out = compose(perm, out)
    return out


def tau_for_kr(spec, r):
    """Diagram automorphism attached to ``B^{r, l c_r}`` (ground state table)."""
    _check_node(spec, r)
    n, fam = spec.rank, spec.family
    ident = identity(spec)
    if fam == "A1":
        return promotion_perm(spec, r)
    if fam in ("B1", "A2odd"):
        return ident if r % 2 == 0 else swap_perm(spec, 0, 1)
    if fam == "C1":
        return ident if r < n else flip_perm(spec)
    if fam == "D1":
        s01 = swap_perm(spec, 0, 1)
        snn = swap_perm(spec, n - 1, n)
        if r <= n - 2:
            return ident if r % 2 == 0 else compose(s01, snn)
        if r == n - 1:
            return compose(flip_perm(spec), s01, power(snn, n + 1))
        return compose(flip_perm(spec), power(snn, n))
    if fam == "D2":
        return ident if r < n else flip_perm(spec)
    if fam == "A2even":
        return ident
    raise UnsupportedSpec(str(spec))


def ground_state_table(spec, r):
    """Return ``(c_r, u, tau)`` where ``u`` names the dominant weight of ``u``.

    ``u`` is ``None`` for ``u(empty)`` and otherwise the node ``k`` of ``u(l Lambda_k)``.
    """
    _check_node(spec, r)
    n, fam = spec.rank, spec.family
    c = c_coefficient(spec, r)
    if fam == "A1":
        u = r
    elif fam in ("B1", "A2odd"):
        u = None if r % 2 == 0 else 1
    elif fam == "C1":
        u = None if r < n else n
    elif fam == "D1":
        if r <= n - 2:
            u = None if r % 2 == 0 else 1
        else:
            u = r
    elif fam == "D2":
        u = None if r < n else n
    else:
        u = None
    return c, u, tau_for_kr(spec, r)


# ---------------------------------------------------------------- affine Weyl group

def reflect(spec, i, point):
    """Simple reflection on an affine point given in the Lambda basis (mod delta)."""
    ci = point[i]
    a = spec.matrix
    return tuple(point[j] - ci * a[j][i] for j in spec.index_set)


def translate(spec, lam, point):
    """``t_lambda`` on a point; ``lam`` is in omega coordinates."""
    lev = level(spec, point)
    shift = (-sum(spec.comarks[i] * lam[i - 1] for i in range(1, spec.rank + 1)),) + tuple(lam)
    return tuple(p + lev * s for p, s in zip(point, shift))


def apply_perm(perm, point):
    out = [None] * len(point)
    for j, v in enumerate(point):
        out[perm[j]] = v
    return tuple(out)


def _generic_point(spec):
    # distinct positive coordinates so that tau is readable off the result
    return tuple(Fraction(1, 2 ** (k + 1)) + k for k in spec.index_set)


def translation_decompose(spec, lam):
    """Write ``t_lambda = w tau``.

    Returns ``(word, tau)`` where ``w = s_{word[0]} s_{word[1]} ...`` is reduced
    and ``tau`` is a diagram automorphism as a permutation tuple.
    """
    lam = tuple(int(x) for x in lam)
    if len(lam) != spec.rank:
        raise ValueError("weight has the wrong number of coordinates")
    for i, x in enumerate(lam, start=1):
        if x % c_coefficient(spec, i):
            raise ValueError(f"weight {lam} is not in the translation lattice")
    p = _generic_point(spec)
    y = translate(spec, lam, p)
    word = []
    while True:
        neg = [i for i in spec.index_set if y[i] < 0]
        if not neg:
            break
        i = neg[0]
        y = reflect(spec, i, y)
        word.append(i)
    tau = []
    for j in spec.index_set:
        hits = [k for k in spec.index_set if y[k] == p[j]]
        if len(hits) != 1:
            raise ValueError("residual element is not a diagram automorphism")
        tau.append(hits[0])
    tau = tuple(tau)
    if not is_automorphism(spec, tau):
        raise ValueError("residual permutation is not a diagram automorphism")
    return tuple(word), tau


def act(spec, word, tau, point):
    """Action of ``w tau`` on an affine point."""
    y = apply_perm(tau, point)
    for i in reversed(word):
        y = reflect(spec, i, y)
    return y
