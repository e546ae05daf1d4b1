"""Exact arithmetic in free graded-commutative algebras over Q.

Conventions, fixed once for the whole package:

* Generators have positive integer degrees.  The generator order of an
  algebra is (degree, name) ascending; it determines the canonical factor
  order inside monomials and the canonical enumeration of degree bases.
* Monomials are normal forms: factors sorted by generator order, exponents
  >= 1, odd-degree generators never squared (their square is zero).
* Reordering factors introduces the Koszul sign (-1) for every transposition
  of two odd-degree factors.
* Every coefficient is a `fractions.Fraction`.  No floating point anywhere.
* Each algebra carries a degree cap; products whose degree would exceed the
  cap are truncated away and the result is flagged as truncated.

The linear algebra here (kernel bases, solving inside the image of a matrix)
is exact sparse Gaussian elimination with deterministic pivoting, so every
"first solution" and every representative choice is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import AlgebraMismatchError, DegreeCapError, HomogeneityError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Generator:
    """A named generator of a fixed positive degree."""

    name: str
    degree: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("generator name must be non-empty")
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValueError("generator %r must have integer degree >= 1, got %r"
                             % (self.name, self.degree))

    @property
    def is_odd(self):
        return self.degree % 2 == 1


@dataclass(frozen=True, order=True)
class Monomial:
    """Normal-form monomial: ((generator_index, exponent), ...) plus its degree.

    Indices refer to the owning algebra's canonical generator order; factor
    tuples are strictly increasing in the index.  The unit monomial is the
    empty factor tuple in degree 0.
    """

    factors: tuple
    degree: int

    def __str__(self):
        return "<monomial %r deg %d>" % (self.factors, self.degree)


UNIT = Monomial((), 0)


class GradedAlgebra:
    """A free graded-commutative Q-algebra on named generators, truncated at a cap.

    The generator list is re-sorted into canonical (degree, name) order at
    construction; duplicate names are rejected.  Degree bases are enumerated
    lazily and cached (the cache fill is idempotent, so sharing an instance
    across threads is harmless).
    """

    def __init__(self, generators, cap):
        gens = [g if isinstance(g, Generator) else Generator(*g) for g in generators]
        gens.sort(key=lambda g: (g.degree, g.name))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError("duplicate generator names: %s" % ", ".join(dupes))
        if not isinstance(cap, int) or cap < 1:
            raise ValueError("cap must be an integer >= 1, got %r" % (cap,))
        self.generators = tuple(gens)
        self.cap = cap
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._basis_cache = {}

    # -- generator access ---------------------------------------------------

    def gen_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("no generator named %r in this algebra" % (name,)) from None

    def gen(self, name):
        return self.generators[self.gen_index(name)]

    def has_gen(self, name):
        return name in self._index

    # -- element constructors -----------------------------------------------

    def zero(self):
        return GradedPolynomial(self, {})

    def one(self):
        return GradedPolynomial(self, {UNIT: ONE})

    def gen_poly(self, name):
        """The generator `name` as a polynomial."""
        i = self.gen_index(name)
        m = Monomial(((i, 1),), self.generators[i].degree)
        return GradedPolynomial(self, {m: ONE})

    def scalar(self, q):
        q = Fraction(q)
        return GradedPolynomial(self, {UNIT: q} if q else {})

    def monomial_degree(self, factors):
        return sum(self.generators[i].degree * e for i, e in factors)

    def __repr__(self):
        return "GradedAlgebra(%s; cap=%d)" % (
            ", ".join("%s:%d" % (g.name, g.degree) for g in self.generators), self.cap)


def normalize_monomial(algebra, raw):
    """Normalize an unordered list of generator powers.

    `raw` is an iterable of (name, exponent) pairs in any order, repeats
    allowed.  Returns (sign, Monomial) where sign is +1 or -1, or (0, None)
    when the monomial vanishes (an odd generator appearing to total exponent
    >= 2).  The sign is (-1)**k where k counts the transpositions of
    odd-degree factors needed to sort the expanded factor sequence.
    """
    occurrences = []          # (index, parity) per single factor occurrence
    for name, exp in raw:
        if not isinstance(exp, int) or exp < 0:
            raise ValueError("exponent for %r must be a non-negative integer" % (name,))
        idx = algebra.gen_index(name)
        parity = algebra.generators[idx].degree % 2
        occurrences.extend([(idx, parity)] * exp)

    odd_seq = [idx for idx, parity in occurrences if parity]
    if len(odd_seq) != len(set(odd_seq)):
        return 0, None
    inversions = 0
    for a, b in itertools.combinations(odd_seq, 2):
        if a > b:
            inversions += 1
    sign = -1 if inversions % 2 else 1

    exps = {}
    for idx, _parity in occurrences:
        exps[idx] = exps.get(idx, 0) + 1
    factors = tuple(sorted(exps.items()))
    return sign, Monomial(factors, algebra.monomial_degree(factors))


def _merge_monomials(algebra, m1, m2):
    """Product of two normal monomials: (sign, Monomial) or (0, None)."""
    # Both inputs are sorted, so the Koszul sign counts only the odd-odd
    # crossings between the two factor lists.
    odd1 = [i for i, e in m1.factors if algebra.generators[i].is_odd]
    odd2 = [i for i, e in m2.factors if algebra.generators[i].is_odd]
    if set(odd1) & set(odd2):
        return 0, None
    inversions = sum(1 for a in odd1 for b in odd2 if a > b)
    sign = -1 if inversions % 2 else 1

    exps = dict(m1.factors)
    for i, e in m2.factors:
        exps[i] = exps.get(i, 0) + e
    factors = tuple(sorted(exps.items()))
    return sign, Monomial(factors, m1.degree + m2.degree)


class GradedPolynomial:
    """A Q-linear combination of normal-form monomials of one algebra.

    Treated as immutable: all arithmetic returns new instances.  The
    `truncated` flag records that some product term was discarded for
    exceeding the algebra cap somewhere in this value's history; it is
    metadata and does not participate in equality.
    """

    __slots__ = ("algebra", "terms", "truncated")

    def __init__(self, algebra, terms, truncated=False):
        clean = {}
        for m, c in (terms.items() if isinstance(terms, dict) else terms):
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, ZERO) + c
                if not clean[m]:
                    del clean[m]
        self.algebra = algebra
        self.terms = clean
        self.truncated = bool(truncated)

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({m.degree for m in self.terms})

    @property
    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Degree of a homogeneous polynomial; None for zero.

        Raises HomogeneityError on a mixed-degree polynomial.
        """
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise HomogeneityError("polynomial is not homogeneous (degrees %s)" % ds)
        return ds[0]

    def homogeneous_part(self, d):
        return GradedPolynomial(
            self.algebra, {m: c for m, c in self.terms.items() if m.degree == d},
            truncated=self.truncated)

    def coefficient(self, monomial):
        return self.terms.get(monomial, ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mc[0])

    # -- arithmetic ---------------------------------------------------------

    def _check_mate(self, other):
        if self.algebra is not other.algebra:
            raise AlgebraMismatchError(
                "operands belong to different algebras: %r vs %r"
                % (self.algebra, other.algebra))

    def __add__(self, other):
        self._check_mate(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, ZERO) + c
        return GradedPolynomial(self.algebra, terms,
                                truncated=self.truncated or other.truncated)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GradedPolynomial(self.algebra, {m: -c for m, c in self.terms.items()},
                                truncated=self.truncated)

    def scale(self, q):
        q = Fraction(q)
        return GradedPolynomial(self.algebra, {m: q * c for m, c in self.terms.items()},
                                truncated=self.truncated)

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(self.algebra, self, other)

    def __eq__(self, other):
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None  # mutable-dict backed; use format_polynomial for keys

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return "<poly %s>" % format_polynomial(self)


def multiply(algebra, p, q):
    """Product with Koszul signs; drops terms above the cap and flags it."""
    if p.algebra is not algebra or q.algebra is not algebra:
        raise AlgebraMismatchError("multiply: operands must live in the given algebra")
    terms = {}
    truncated = p.truncated or q.truncated
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            if m1.degree + m2.degree > algebra.cap:
                truncated = True
                continue
            sign, m = _merge_monomials(algebra, m1, m2)
            if sign == 0:
                continue
            terms[m] = terms.get(m, ZERO) + sign * c1 * c2
    return GradedPolynomial(algebra, terms, truncated=truncated)


def basis(algebra, degree):
    """Canonically ordered tuple of monomials of the given degree.

    Degrees above the cap raise DegreeCapError; negative degrees return the
    empty tuple (convenient at chain-complex boundaries).  Degree 0 is the
    unit monomial alone.
    """
    if degree > algebra.cap:
        raise DegreeCapError(
            "degree %d basis requested above cap %d" % (degree, algebra.cap))
    if degree < 0:
        return ()
    cached = algebra._basis_cache.get(degree)
    if cached is not None:
        return cached

    gens = algebra.generators
    found = []

    def extend(pos, remaining, acc):
        if remaining == 0:
            found.append(tuple(acc))
            return
        if pos >= len(gens):
            return
        g = gens[pos]
        extend(pos + 1, remaining, acc)
        if g.degree <= remaining:
            top = 1 if g.is_odd else remaining // g.degree
            for e in range(1, top + 1):
                acc.append((pos, e))
                extend(pos + 1, remaining - e * g.degree, acc)
                acc.pop()

    extend(0, degree, [])
    found.sort()
    out = tuple(Monomial(f, degree) for f in found)
    algebra._basis_cache[degree] = out
    return out


def poly_to_coords(p, basis_seq):
    """Coordinate tuple of `p` in the given monomial basis (must cover p)."""
    index = {m: i for i, m in enumerate(basis_seq)}
    coords = [ZERO] * len(basis_seq)
    for m, c in p.terms.items():
        try:
            coords[index[m]] = c
        except KeyError:
            raise HomogeneityError(
                "monomial %s does not belong to the given basis" % (m,)) from None
    return tuple(coords)


def coords_to_poly(algebra, coords, basis_seq):
    return GradedPolynomial(algebra,
                            {m: Fraction(c) for m, c in zip(basis_seq, coords)})


def format_polynomial(p):
    """Canonical text form, parseable back by the CLI expression parser."""
    if p.is_zero:
        return "0"
    chunks = []
    for m, c in p.sorted_terms():
        body = "*".join(
            ("%s^%d" % (p.algebra.generators[i].name, e)) if e > 1
            else p.algebra.generators[i].name
            for i, e in m.factors)
        if c < 0:
            lead, c = " - ", -c
        else:
            lead = " + "
        if not body:
            piece = str(c)
        elif c == 1:
            piece = body
        else:
            piece = "%s*%s" % (c, body)
        chunks.append(lead + piece)
    text = "".join(chunks)
    return text[3:] if text.startswith(" + ") else "-" + text[3:]


# ---------------------------------------------------------------------------
# Exact sparse linear algebra over Q
# ---------------------------------------------------------------------------

class RationalMatrix:
    """Sparse matrix of Fractions keyed by (row, col)."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                self.set(r, c, v)

    def set(self, r, c, v):
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError("entry (%d, %d) outside %dx%d matrix"
                             % (r, c, self.rows, self.cols))
        v = Fraction(v)
        if v:
            self.entries[(r, c)] = v
        else:
            self.entries.pop((r, c), None)

    def get(self, r, c):
        return self.entries.get((r, c), ZERO)

    @classmethod
    def from_columns(cls, columns, rows):
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    m.set(i, j, v)
        return m

    def column(self, j):
        return tuple(self.get(i, j) for i in range(self.rows))

    def row_list(self):
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def mult_vec(self, x):
        if len(x) != self.cols:
            raise ValueError("vector length %d != %d columns" % (len(x), self.cols))
        y = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            if x[c]:
                y[r] += v * x[c]
        return tuple(y)

    def __repr__(self):
        return "RationalMatrix(%dx%d, %d nonzero)" % (
            self.rows, self.cols, len(self.entries))


def _rref(rows, ncols):
    """Reduced row echelon form of dict-backed rows.

    Deterministic: scans columns left to right, picks the first remaining row
    with a nonzero entry.  Returns (rref_rows, pivot_cols); zero rows dropped.
    """
    work = [dict(r) for r in rows if r]
    pivots = []
    out = []
    for col in range(ncols):
        hit = None
        for i, r in enumerate(work):
            if r.get(col):
                hit = i
                break
        if hit is None:
            continue
        row = work.pop(hit)
        inv = ONE / row[col]
        row = {c: v * inv for c, v in row.items()}
        for prev in out:
            f = prev.get(col)
            if f:
                for c, v in row.items():
                    nv = prev.get(c, ZERO) - f * v
                    if nv:
                        prev[c] = nv
                    else:
                        prev.pop(c, None)
        nxt = []
        for r in work:
            f = r.get(col)
            if f:
                for c, v in row.items():
                    nv = r.get(c, ZERO) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
            if r:
                nxt.append(r)
        work = nxt
        out.append(row)
        pivots.append(col)
    return out, pivots


def _reduce_vector(vec_dict, rref_rows, pivots):
    """Reduce a dict-backed vector against RREF rows; returns the residue."""
    v = dict(vec_dict)
    for row, p in zip(rref_rows, pivots):
        f = v.get(p)
        if f:
            for c, rv in row.items():
                nv = v.get(c, ZERO) - f * rv
                if nv:
                    v[c] = nv
                else:
                    v.pop(c, None)
    return v


def kernel_basis(M):
    """Deterministic basis of the right kernel of M.

    One vector per free column, ordered by free column ascending, with entry 1
    at the free column.  Exactness means rank + len(kernel) == M.cols always.
    """
    rref_rows, pivots = _rref(M.row_list(), M.cols)
    pivot_set = set(pivots)
    out = []
    for fc in range(M.cols):
        if fc in pivot_set:
            continue
        vec = [ZERO] * M.cols
        vec[fc] = ONE
        for row, p in zip(rref_rows, pivots):
            coeff = row.get(fc)
            if coeff:
                vec[p] = -coeff
        out.append(tuple(vec))
    return out


@dataclass
class SolveResult:
    """Outcome of solve_in_image.

    `solution` is the deterministic first solution (free variables zero) when
    the target lies in the image, else None.  `residue` is the target reduced
    against a row-echelon spanning set of the column space: the zero vector
    exactly when solvable, otherwise a certificate of non-membership.
    """

    in_image: bool
    solution: tuple
    residue: tuple


def solve_in_image(M, target):
    """Solve M x = target over Q, or certify that no solution exists.

    Two independent routes are run and cross-checked: augmented elimination
    (for the solution) and reduction of the target against the column space
    (for the certificate).
    """
    target = [Fraction(t) for t in target]
    if len(target) != M.rows:
        raise ValueError("target length %d != %d rows" % (len(target), M.rows))

    # Route 1: residue of the target against the column space of M.
    col_rows = []
    for j in range(M.cols):
        col = {i: M.get(i, j) for i in range(M.rows) if M.get(i, j)}
        if col:
            col_rows.append(col)
    span_rref, span_pivots = _rref(col_rows, M.rows)
    t_dict = {i: v for i, v in enumerate(target) if v}
    residue_dict = _reduce_vector(t_dict, span_rref, span_pivots)
    residue = tuple(residue_dict.get(i, ZERO) for i in range(M.rows))
    feasible = not residue_dict

    # Route 2: augmented elimination for the first solution.
    aug_rows = []
    raw = M.row_list()
    for i in range(M.rows):
        r = dict(raw[i])
        if target[i]:
            r[M.cols] = target[i]
        if r:
            aug_rows.append(r)
    aug_rref, aug_pivots = _rref(aug_rows, M.cols + 1)
    consistent = M.cols not in aug_pivots

    if consistent != feasible:  # the two routes must always agree
        raise AssertionError("solve_in_image internal disagreement")

    if not feasible:
        return SolveResult(False, None, residue)

    x = [ZERO] * M.cols
    for row, p in zip(aug_rref, aug_pivots):
        x[p] = row.get(M.cols, ZERO)
    if M.mult_vec(x) != tuple(target):
        raise AssertionError("solve_in_image produced an invalid solution")
    return SolveResult(True, tuple(x), residue)


def span_rank(vectors, length):
    """Rank of a list of coordinate vectors."""
    rows = [{i: Fraction(v) for i, v in enumerate(vec) if v} for vec in vectors]
    rref_rows, _ = _rref(rows, length)
    return len(rref_rows)


def in_span(vectors, length, target):
    """Is `target` in the span of `vectors`?  (Exact, deterministic.)"""
    M = RationalMatrix.from_columns(vectors, length)
    return solve_in_image(M, target).in_image
