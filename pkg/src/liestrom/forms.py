"""Exterior algebra of left-invariant forms on a complexified coframe.

A form lives on the 2n anticommuting generators

    e^1 < ... < e^n < eb^1 < ... < eb^n

where eb^i denotes the conjugate of e^i.  A basis word is a strictly
increasing product of generators, stored as a bitmask: bit i (0-based,
i < n) is e^(i+1) and bit n+i is eb^(i+1).  Coefficients are either complex
scalars (fiber size m == 1) or m x m complex matrices; scalar- and
matrix-valued forms share one type because curvature traces constantly mix
the two.

The exterior derivative is the one induced by the Maurer-Cartan relations

    d e^i = -(1/sqrt(2)) * sum_{j<k} c^i_{jk} e^j ^ e^k

for a structure-constant tensor c; a ``FrameDifferential`` packages the n
structure 2-forms and their conjugates.

All values are immutable after construction and every operation is a pure
function, so concurrent use is unrestricted.
"""

from __future__ import annotations

import math

import numpy as np

from .core import PRUNE_TOL, InputShapeError, max_abs

SQRT2 = math.sqrt(2.0)


def word_indices(word: int) -> tuple[int, ...]:
    """Generator positions of a word, ascending."""
    out = []
    while word:
        low = word & -word
        out.append(low.bit_length() - 1)
        word ^= low
    return tuple(out)


def word_from_indices(indices) -> int:
    word = 0
    for g in indices:
        bit = 1 << g
        if word & bit:
            raise InputShapeError(f"repeated generator {g} in word")
        word |= bit
    return word


def word_degree(word: int) -> int:
    return word.bit_count()


def word_bidegree(word: int, n: int) -> tuple[int, int]:
    """(holomorphic, antiholomorphic) generator counts of a word."""
    holo = word & ((1 << n) - 1)
    return holo.bit_count(), (word >> n).bit_count()


def merge_sign(w1: int, w2: int) -> int:
    """Sign of sorting the concatenation word(w1)·word(w2) into canonical order.

    Assumes w1 and w2 are disjoint.  Equals the parity of the number of pairs
    (a in w1, b in w2) with a > b.
    """
    parity = 0
    b = w2
    while b:
        low = b & -b
        pos = low.bit_length() - 1
        parity ^= (w1 >> (pos + 1)).bit_count() & 1
        b ^= low
    return -1 if parity else 1


def _sequence_parity_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions & 1 else 1


def _coeff_mag(c) -> float:
    if isinstance(c, np.ndarray):
        return max_abs(c)
    return abs(c)


class InvForm:
    """Graded exterior form with complex scalar or matrix coefficients."""

    __slots__ = ("n", "m", "terms")

    def __init__(self, n: int, m: int = 1, terms=None):
        if n < 1 or m < 1:
            raise InputShapeError("frame dimension and fiber size must be >= 1")
        self.n = int(n)
        self.m = int(m)
        clean: dict[int, complex | np.ndarray] = {}
        if terms:
            for word, coeff in terms.items():
                if word < 0 or word >= (1 << (2 * self.n)):
                    raise InputShapeError(f"word {word} outside the 2n-generator range")
                if self.m == 1:
                    coeff = complex(coeff)
                else:
                    coeff = np.array(coeff, dtype=complex)
                    if coeff.shape != (self.m, self.m):
                        raise InputShapeError(
                            f"coefficient shape {coeff.shape} != ({self.m}, {self.m})"
                        )
                if _coeff_mag(coeff) > PRUNE_TOL:
                    clean[int(word)] = coeff
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, m: int = 1) -> "InvForm":
        return cls(n, m, {})

    @classmethod
    def constant(cls, n: int, value, m: int = 1) -> "InvForm":
        """Degree-0 form with the given scalar or matrix coefficient."""
        return cls(n, m, {0: value})

    @classmethod
    def monomial(cls, n: int, word: int, coeff=1.0, m: int = 1) -> "InvForm":
        return cls(n, m, {word: coeff})

    # -- bookkeeping -------------------------------------------------------

    def words(self) -> list[int]:
        return sorted(self.terms)

    def coeff(self, word: int):
        c = self.terms.get(word)
        if c is None:
            return 0j if self.m == 1 else np.zeros((self.m, self.m), dtype=complex)
        return c if self.m == 1 else c.copy()

    def degrees(self) -> list[int]:
        return sorted({word_degree(w) for w in self.terms})

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted({word_bidegree(w, self.n) for w in self.terms})

    def bidegree_part(self, p: int, q: int) -> "InvForm":
        sel = {w: c for w, c in self.terms.items() if word_bidegree(w, self.n) == (p, q)}
        return InvForm(self.n, self.m, sel)

    def max_abs(self) -> float:
        if not self.terms:
            return 0.0
        return max(_coeff_mag(c) for c in self.terms.values())

    def norm(self) -> float:
        """Frobenius norm over all coefficients."""
        total = 0.0
        for c in self.terms.values():
            if isinstance(c, np.ndarray):
                total += float(np.sum(np.abs(c) ** 2))
            else:
                total += abs(c) ** 2
        return math.sqrt(total)

    def is_zero(self, tol: float = PRUNE_TOL) -> bool:
        return self.max_abs() <= tol

    def isclose(self, other: "InvForm", tol: float) -> bool:
        return (self - other).max_abs() <= tol

    # -- linear structure ---------------------------------------------------

    def _check_additive(self, other: "InvForm"):
        if not isinstance(other, InvForm):
            raise InputShapeError("can only combine with another InvForm")
        if self.n != other.n or self.m != other.m:
            raise InputShapeError(
                f"shape mismatch: (n={self.n}, m={self.m}) vs (n={other.n}, m={other.m})"
            )

    def __add__(self, other: "InvForm") -> "InvForm":
        self._check_additive(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            if w in out:
                out[w] = out[w] + c
            else:
                out[w] = c
        return InvForm(self.n, self.m, out)

    def __neg__(self) -> "InvForm":
        return self.scale(-1.0)

    def __sub__(self, other: "InvForm") -> "InvForm":
        return self + (-other)

    def scale(self, z) -> "InvForm":
        z = complex(z)
        return InvForm(self.n, self.m, {w: c * z for w, c in self.terms.items()})

    __mul__ = scale

    def __rmul__(self, z) -> "InvForm":
        return self.scale(z)

    def tensor(self, matrix: np.ndarray) -> "InvForm":
        """Matrix-valued form ``self (x) matrix`` from a scalar form."""
        if self.m != 1:
            raise InputShapeError("tensor() needs a scalar-valued form")
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InputShapeError("tensor() needs a square matrix")
        m = matrix.shape[0]
        return InvForm(self.n, m, {w: c * matrix for w, c in self.terms.items()})

    # -- multiplicative structure -------------------------------------------

    def wedge(self, other: "InvForm") -> "InvForm":
        if not isinstance(other, InvForm):
            raise InputShapeError("can only wedge with another InvForm")
        if self.n != other.n:
            raise InputShapeError(f"frame dimensions differ: {self.n} vs {other.n}")
        if self.m > 1 and other.m > 1 and self.m != other.m:
            raise InputShapeError(f"fiber sizes do not compose: {self.m} vs {other.m}")
        m = max(self.m, other.m)
        out: dict[int, complex | np.ndarray] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if w1 & w2:
                    continue
                sign = merge_sign(w1, w2)
                if isinstance(c1, np.ndarray) and isinstance(c2, np.ndarray):
                    coeff = c1 @ c2
                else:
                    coeff = c1 * c2
                if sign < 0:
                    coeff = -coeff
                w = w1 | w2
                if w in out:
                    out[w] = out[w] + coeff
                else:
                    out[w] = coeff
        return InvForm(self.n, m, out)

    __xor__ = wedge

    def conjugate(self) -> "InvForm":
        """Swap e^i <-> eb^i (with reordering sign) and conjugate coefficients."""
        out: dict[int, complex | np.ndarray] = {}
        for w, c in self.terms.items():
            mapped = [(g + self.n) % (2 * self.n) for g in word_indices(w)]
            sign = _sequence_parity_sign(mapped)
            coeff = np.conj(c) if isinstance(c, np.ndarray) else c.conjugate()
            if sign < 0:
                coeff = -coeff
            w2 = word_from_indices(mapped)
            if w2 in out:
                out[w2] = out[w2] + coeff
            else:
                out[w2] = coeff
        return InvForm(self.n, self.m, out)

    def trace(self) -> "InvForm":
        """Coefficient-wise matrix trace; scalar forms are rejected."""
        if self.m == 1:
            raise InputShapeError("trace of a scalar-valued form")
        return InvForm(self.n, 1, {w: complex(np.trace(c)) for w, c in self.terms.items()})

    # -- frame changes -------------------------------------------------------

    def change_coframe(self, M: np.ndarray) -> "InvForm":
        """Substitute e^j -> sum_i M[j, i] e^i (and the conjugate rule for eb^j)."""
        M = np.asarray(M, dtype=complex)
        if M.shape != (self.n, self.n):
            raise InputShapeError("coframe substitution matrix must be n x n")
        out: dict[int, complex | np.ndarray] = {}
        for w, c in self.terms.items():
            expansion: dict[int, complex] = {0: 1.0 + 0j}
            for g in word_indices(w):
                if g < self.n:
                    image = [(1 << i, M[g, i]) for i in range(self.n)]
                else:
                    image = [
                        (1 << (self.n + i), np.conj(M[g - self.n, i]))
                        for i in range(self.n)
                    ]
                nxt: dict[int, complex] = {}
                for w1, c1 in expansion.items():
                    for wg, cg in image:
                        if abs(cg) <= PRUNE_TOL or (w1 & wg):
                            continue
                        val = c1 * cg * merge_sign(w1, wg)
                        wn = w1 | wg
                        nxt[wn] = nxt.get(wn, 0j) + val
                expansion = nxt
            for w2, c2 in expansion.items():
                add = c2 * c
                if w2 in out:
                    out[w2] = out[w2] + add
                else:
                    out[w2] = add
        return InvForm(self.n, self.m, out)

    def conjugate_fiber(self, P: np.ndarray) -> "InvForm":
        """Similarity transform P . coeff . P^{-1} on every matrix coefficient."""
        if self.m == 1:
            raise InputShapeError("fiber conjugation needs a matrix-valued form")
        P = np.asarray(P, dtype=complex)
        Pinv = np.linalg.inv(P)
        return InvForm(self.n, self.m, {w: P @ c @ Pinv for w, c in self.terms.items()})

    # -- misc ------------------------------------------------------------------

    def to_json(self) -> list[dict]:
        """Dump format: words in bitmask order, 1-based generator indices,
        coefficients as m x m arrays of [re, im] pairs."""
        out = []
        for w in self.words():
            c = self.terms[w]
            mat = c if isinstance(c, np.ndarray) else np.array([[c]])
            out.append(
                {
                    "word": [g + 1 for g in word_indices(w)],
                    "coeff": [[[float(z.real), float(z.imag)] for z in row] for row in mat],
                }
            )
        return out

    def __repr__(self) -> str:
        return f"InvForm(n={self.n}, m={self.m}, nterms={len(self.terms)})"


def generator(n: int, i: int, bar: bool = False) -> InvForm:
    """The coframe 1-form e^(i+1), or its conjugate when ``bar`` (0-based i)."""
    if not 0 <= i < n:
        raise InputShapeError(f"generator index {i} outside 0..{n - 1}")
    return InvForm.monomial(n, 1 << (i + n if bar else i))


def wedge(a: InvForm, b: InvForm) -> InvForm:
    return a.wedge(b)


def conjugate(a: InvForm) -> InvForm:
    return a.conjugate()


def trace_form(a: InvForm) -> InvForm:
    return a.trace()


class FrameDifferential:
    """The n structure 2-forms d(e^i) and their conjugates for one frame."""

    __slots__ = ("n", "de", "debar")

    def __init__(self, n: int, de, debar):
        self.n = n
        self.de = tuple(de)
        self.debar = tuple(debar)

    @classmethod
    def from_structure(cls, c: np.ndarray) -> "FrameDifferential":
        """Build from a dense structure tensor c[i, j, k] = c^k_{ij}."""
        c = np.asarray(c, dtype=complex)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise InputShapeError("structure tensor must be n x n x n")
        de = []
        for i in range(n):
            terms: dict[int, complex] = {}
            for j in range(n):
                for k in range(j + 1, n):
                    val = -c[j, k, i] / SQRT2
                    if abs(val) > PRUNE_TOL:
                        terms[(1 << j) | (1 << k)] = val
            de.append(InvForm(n, 1, terms))
        debar = [f.conjugate() for f in de]
        return cls(n, de, debar)

    def of_generator(self, g: int) -> InvForm:
        return self.de[g] if g < self.n else self.debar[g - self.n]


def d(a: InvForm, fd: FrameDifferential) -> InvForm:
    """Exterior derivative induced by the Maurer-Cartan relations.

    Coefficients are invariant (constant), so d acts through the generators
    alone: d(g1^...^gk) = sum_i (-1)^(i-1) g1^...^(d g_i)^...^gk, and each
    2-form d(g_i) commutes past the prefix.
    """
    if a.n != fd.n:
        raise InputShapeError("form and frame differential dimensions differ")
    out: dict[int, complex | np.ndarray] = {}
    for w, coeff in a.terms.items():
        for idx, g in enumerate(word_indices(w)):
            rest = w & ~(1 << g)
            front = -1 if idx & 1 else 1
            for w2, c2 in fd.of_generator(g).terms.items():
                if w2 & rest:
                    continue
                val = coeff * (c2 * front * merge_sign(w2, rest))
                wn = w2 | rest
                if wn in out:
                    out[wn] = out[wn] + val
                else:
                    out[wn] = val
    return InvForm(a.n, a.m, out)


def omega(n: int) -> InvForm:
    """The Hermitian form (i/2) sum_i e^i ^ eb^i of an orthonormal frame."""
    return InvForm(n, 1, {(1 << i) | (1 << (n + i)): 0.5j for i in range(n)})


def ddbar_omega(fd: FrameDifferential) -> InvForm:
    """i del delbar omega = (1/2) sum_i d(e^i) ^ d(eb^i)."""
    n = fd.n
    total = InvForm.zero(n)
    for i in range(n):
        total = total + fd.de[i].wedge(fd.debar[i])
    total = total.scale(0.5)
    if not (total - total.bidegree_part(2, 2)).is_zero():
        raise ArithmeticError("i del delbar omega acquired parts outside bidegree (2,2)")
    return total


def omega_power(n: int, k: int) -> InvForm:
    out = InvForm.constant(n, 1.0)
    w = omega(n)
    for _ in range(k):
        out = out.wedge(w)
    return out


def balanced_check(fd: FrameDifferential, tol: float) -> bool:
    """Is d(omega^(n-1)) = 0 for this frame?"""
    power = omega_power(fd.n, fd.n - 1)
    return d(power, fd).max_abs() < tol
