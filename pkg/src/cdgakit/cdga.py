"""Commutative differential graded algebras: differentials, cohomology, models.

A `FreeCdga` is a free graded-commutative algebra (see `algebra_core`)
equipped with a degree +1 derivation differential, validated at construction:
each d(generator) is homogeneous of the right degree and d∘d vanishes on every
generator.  d∘d is always decidable — even when d(g) lands exactly at the cap,
the one extra degree needed for the check is computed in an internal shadow
algebra capped one higher.

Cohomology H^d = ker(d^d) / im(d^(d-1)) is decidable exactly when d+1 <= cap
(the kernel condition needs the degree d+1 basis); anything beyond raises
rather than guessing.  Representatives come from deterministic echelon
reduction, so golden values in tests and reports are stable.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from .algebra_core import (
    GradedAlgebra,
    GradedPolynomial,
    Generator,
    Monomial,
    RationalMatrix,
    ZERO,
    ONE,
    _reduce_vector,
    _rref,
    basis,
    coords_to_poly,
    kernel_basis,
    multiply,
    normalize_monomial,
    poly_to_coords,
)
from .errors import (
    DegreeCapError,
    DifferentialError,
    HomogeneityError,
    ModelError,
    MorphismError,
    NotCocycleError,
)

log = logging.getLogger(__name__)


class FreeCdga(GradedAlgebra):
    """Free graded-commutative algebra with a derivation differential.

    `differential` is either None (zero differential) or a callable that
    receives the constructed algebra and returns {generator name:
    GradedPolynomial in that algebra}.  Generators not mentioned get d = 0.
    Instances are immutable after construction.
    """

    def __init__(self, generators, cap, differential=None, _validate=True):
        super().__init__(generators, cap)
        values = {}
        if differential is not None:
            values = differential(self)
        self._d = [self.zero() for _ in self.generators]
        for name, poly in values.items():
            i = self.gen_index(name)
            if poly.algebra is not self:
                raise DifferentialError(
                    "d(%s) must be built in the algebra under construction" % name)
            self._d[i] = poly
        self._shadow_alg = None
        if _validate:
            self._validate_differential()

    def d_of_gen(self, name):
        return self._d[self.gen_index(name)]

    def differential_items(self):
        return [(g.name, self._d[i]) for i, g in enumerate(self.generators)]

    def _shadow(self):
        """Same generators, cap one higher, same differential; unvalidated.

        Used to decide questions one degree above the cap (d∘d at the edge,
        overflow detection).  Generator order is identical, so term dicts
        transfer between the two algebras directly.
        """
        if self._shadow_alg is None:
            outer = self

            def lifted(alg):
                return {g.name: GradedPolynomial(alg, outer._d[i].terms)
                        for i, g in enumerate(outer.generators)}

            self._shadow_alg = FreeCdga(self.generators, self.cap + 1,
                                        differential=lifted, _validate=False)
        return self._shadow_alg

    def _validate_differential(self):
        for i, g in enumerate(self.generators):
            dg = self._d[i]
            if dg.is_zero:
                continue
            if dg.truncated:
                raise DifferentialError(
                    "d(%s) carries a truncation flag; differentials must be exact data"
                    % g.name)
            deg = dg.degree()
            if deg != g.degree + 1:
                raise DifferentialError(
                    "d(%s) must be homogeneous of degree %d, got degree %s"
                    % (g.name, g.degree + 1, deg))
            if deg > self.cap:
                raise DegreeCapError(
                    "d(%s) lives above the cap %d" % (g.name, self.cap))
        report = check_d_squared(self)
        if not report.ok:
            bad = ", ".join("d(d(%s)) = %s" % (n, w) for n, w in report.violations)
            raise DifferentialError("d∘d != 0: " + bad)


class DSquaredReport:
    """Outcome of check_d_squared: per-generator witnesses of any failure."""

    def __init__(self, violations):
        self.violations = list(violations)   # (generator name, witness poly)

    @property
    def ok(self):
        return not self.violations


def check_d_squared(A):
    """Verify d∘d = 0 on every generator, exactly.

    The second differentiation may need one degree above the cap; it is taken
    in the shadow algebra, so the answer is always exact, never truncated.
    """
    shadow = A._shadow()
    violations = []
    for i, g in enumerate(A.generators):
        dg = A._d[i]
        if dg.is_zero:
            continue
        ddg = differentiate(shadow, GradedPolynomial(shadow, dg.terms))
        if not ddg.is_zero:
            violations.append((g.name, ddg))
    return DSquaredReport(violations)


def differentiate(A, p):
    """Apply the derivation differential to a polynomial of A.

    Leibniz with Koszul signs:  d(ab) = (da)b + (-1)^|a| a(db).  Terms whose
    honest image would be nonzero above the cap raise DegreeCapError; terms at
    the cap whose image vanishes (decided exactly in the shadow) contribute
    nothing and are fine.
    """
    if not isinstance(A, FreeCdga):
        raise TypeError("differentiate needs a FreeCdga")
    if p.algebra is not A:
        raise ValueError("polynomial does not live in the given algebra")
    out = A.zero()
    for m, c in p.terms.items():
        if m.degree >= A.cap:
            shadow = A._shadow()
            img = _d_monomial(shadow, m)
            if not img.is_zero:
                raise DegreeCapError(
                    "differentiating a degree-%d term would produce a nonzero "
                    "value above the cap %d" % (m.degree, A.cap))
            continue
        out = out + c * _d_monomial(A, m)
    if p.truncated:
        out = GradedPolynomial(A, out.terms, truncated=True)
    return out


def _d_monomial(A, m):
    """d of a single normal monomial, computed in A (A deep enough to hold it)."""
    total = A.zero()
    prefix_degree = 0
    for pos, (i, e) in enumerate(m.factors):
        dg = A._d[i]
        if not dg.is_zero:
            sign = -1 if prefix_degree % 2 else 1
            pieces = []
            if pos:
                f = m.factors[:pos]
                pieces.append(GradedPolynomial(A, {Monomial(f, A.monomial_degree(f)): ONE}))
            if e > 1:
                f = ((i, e - 1),)
                pieces.append(GradedPolynomial(A, {Monomial(f, A.monomial_degree(f)): ONE}))
            pieces.append(dg)
            if pos + 1 < len(m.factors):
                f = m.factors[pos + 1:]
                pieces.append(GradedPolynomial(A, {Monomial(f, A.monomial_degree(f)): ONE}))
            term = pieces[0]
            for piece in pieces[1:]:
                term = multiply(A, term, piece)
            total = total + (sign * e) * term
        prefix_degree += e * A.generators[i].degree
    return total


def differential_matrix(A, degree):
    """Matrix of d: A^degree -> A^(degree+1) in the canonical bases."""
    dom = basis(A, degree)
    cod = basis(A, degree + 1)
    index = {m: i for i, m in enumerate(cod)}
    M = RationalMatrix(len(cod), len(dom))
    for j, m in enumerate(dom):
        img = differentiate(A, GradedPolynomial(A, {m: ONE}))
        for mm, c in img.terms.items():
            M.set(index[mm], j, c)
    return M


def solve_differential(A, degree, rhs):
    """Deterministic first solution X of d(X) = rhs with |X| = degree, or None.

    `rhs` must be homogeneous of degree+1 (or zero).  Returns None when rhs
    is not exact; the caller decides whether that is an error or an
    obstruction.
    """
    from .algebra_core import poly_to_coords, coords_to_poly, solve_in_image
    if not rhs.is_zero and rhs.degree() != degree + 1:
        raise HomogeneityError(
            "right-hand side must be homogeneous of degree %d" % (degree + 1))
    M = differential_matrix(A, degree)
    res = solve_in_image(M, poly_to_coords(rhs, basis(A, degree + 1)))
    if not res.in_image:
        return None
    return coords_to_poly(A, res.solution, basis(A, degree))


class CohomologyGroup:
    """H^degree of a FreeCdga with a frozen representative basis.

    Representatives are kernel vectors reduced to echelon form modulo the
    coboundaries; `class_of` returns exact coordinates in that basis.
    """

    def __init__(self, algebra, degree):
        if degree < 0:
            raise ValueError("cohomology degree must be >= 0")
        if degree + 1 > algebra.cap:
            raise DegreeCapError(
                "H^%d needs degree-%d elements; not decidable at cap %d"
                % (degree, degree + 1, algebra.cap))
        self.algebra = algebra
        self.degree = degree
        self._basis = basis(algebra, degree)
        n = len(self._basis)

        M = differential_matrix(algebra, degree)
        kernel = kernel_basis(M)

        im_rows = []
        for m in basis(algebra, degree - 1):
            img = differentiate(algebra, GradedPolynomial(algebra, {m: ONE}))
            row = {i: c for i, c in enumerate(poly_to_coords(img, self._basis)) if c}
            if row:
                im_rows.append(row)
        self._im_rref, self._im_pivots = _rref(im_rows, n)

        rep_rows = []
        rep_pivots = []
        for vec in kernel:
            row = {i: c for i, c in enumerate(vec) if c}
            row = _reduce_vector(row, self._im_rref, self._im_pivots)
            row = _reduce_vector(row, rep_rows, rep_pivots)
            if not row:
                continue
            pivot = min(row)
            inv = ONE / row[pivot]
            row = {c: v * inv for c, v in row.items()}
            rep_rows.append(row)
            rep_pivots.append(pivot)
        self._rep_rows = rep_rows
        self._rep_pivots = rep_pivots

    @property
    def dimension(self):
        return len(self._rep_rows)

    @property
    def representatives(self):
        out = []
        for row in self._rep_rows:
            vec = [row.get(i, ZERO) for i in range(len(self._basis))]
            out.append(coords_to_poly(self.algebra, vec, self._basis))
        return tuple(out)

    def class_of(self, p):
        """Exact coordinates of a cocycle's class in the representative basis.

        Raises NotCocycleError when d(p) != 0 and HomogeneityError when p is
        not homogeneous of this group's degree.
        """
        if p.algebra is not self.algebra:
            raise ValueError("cocycle lives in a different algebra")
        if p.is_zero:
            return tuple(ZERO for _ in self._rep_rows)
        if p.degree() != self.degree:
            raise HomogeneityError(
                "expected a homogeneous polynomial of degree %d" % self.degree)
        if not differentiate(self.algebra, p).is_zero:
            raise NotCocycleError("class_of input is not a cocycle: %s" % p)
        row = {i: c for i, c in enumerate(poly_to_coords(p, self._basis)) if c}
        row = _reduce_vector(row, self._im_rref, self._im_pivots)
        coords = []
        for rep, pivot in zip(self._rep_rows, self._rep_pivots):
            c = row.get(pivot, ZERO)
            coords.append(c)
            if c:
                for col, v in rep.items():
                    nv = row.get(col, ZERO) - c * v
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
        if row:
            raise AssertionError("cocycle escaped ker/im bookkeeping")
        return tuple(coords)

    def vanishes(self, p):
        return all(c == 0 for c in self.class_of(p))

    def from_coords(self, coords):
        out = self.algebra.zero()
        for c, rep in zip(coords, self.representatives):
            out = out + Fraction(c) * rep
        return out


def cohomology(A, degree):
    """H^degree(A) with frozen representatives; DegreeCapError if undecidable."""
    return CohomologyGroup(A, degree)


def class_of(H, p):
    """Coordinates of the cocycle p in the stored basis of H (see CohomologyGroup)."""
    return H.class_of(p)


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

class CdgaMorphism:
    """Algebra morphism commuting with the differentials.

    Built from {source generator name: target polynomial}.  Unassigned
    generators map to zero — that is legal but logged as a warning, because it
    is usually an oversight.  Validation checks degree preservation and
    d-commutation on every generator and raises MorphismError otherwise.
    """

    def __init__(self, source, target, values, check=True):
        self.source = source
        self.target = target
        vals = []
        seen = set(values)
        unknown = seen - {g.name for g in source.generators}
        if unknown:
            raise MorphismError("morphism assigns unknown generators: %s"
                                % ", ".join(sorted(unknown)))
        for g in source.generators:
            if g.name in values:
                v = values[g.name]
                if v.algebra is not target:
                    raise MorphismError(
                        "value for %s does not live in the target algebra" % g.name)
            else:
                log.warning("morphism leaves generator %r unassigned; mapping it to 0",
                            g.name)
                v = target.zero()
            vals.append(v)
        self.values = tuple(vals)
        if check:
            self._validate()

    def _validate(self):
        for g, v in zip(self.source.generators, self.values):
            if v.is_zero:
                continue
            if v.truncated:
                raise MorphismError("value for %s is truncated data" % g.name)
            if not v.is_homogeneous or v.degree() != g.degree:
                raise MorphismError(
                    "value for %s must be homogeneous of degree %d, got %s"
                    % (g.name, g.degree, v))
        if isinstance(self.source, FreeCdga) and isinstance(self.target, FreeCdga):
            for g in self.source.generators:
                lhs = self.apply(self.source.d_of_gen(g.name))
                rhs = differentiate(self.target, self.value_of(g.name))
                if lhs != rhs:
                    raise MorphismError(
                        "morphism does not commute with d on %s: "
                        "phi(d %s) = %s but d(phi %s) = %s"
                        % (g.name, g.name, lhs, g.name, rhs))

    def value_of(self, name):
        return self.values[self.source.gen_index(name)]

    def apply(self, p):
        return apply_morphism(self, p)

    @classmethod
    def identity(cls, A):
        return cls(A, A, {g.name: A.gen_poly(g.name) for g in A.generators})

    def __repr__(self):
        return "CdgaMorphism(%d generators)" % len(self.values)


def apply_morphism(phi, p):
    """Image of p under phi; Koszul signs arise from target renormalization."""
    if p.algebra is not phi.source:
        raise ValueError("polynomial does not live in the morphism source")
    out = phi.target.zero()
    for m, c in p.terms.items():
        term = phi.target.one()
        for i, e in m.factors:
            v = phi.values[i]
            for _ in range(e):
                term = multiply(phi.target, term, v)
            if term.is_zero:
                break
        out = out + c * term
    if p.truncated:
        out = GradedPolynomial(phi.target, out.terms, truncated=True)
    return out


# ---------------------------------------------------------------------------
# Model constructions
# ---------------------------------------------------------------------------

def gem_model(generators, cap):
    """Free CDGA on the given generators with zero differential."""
    return FreeCdga(generators, cap)


def cone_model(generators, cap, prime_suffix="'", bar_suffix="~"):
    """Contractible cone fragment on the given generators.

    Per input generator g of degree m >= 2 this contributes a pair
    g' (degree m) and g~ (degree m-1) with d(g~) = -g' and d(g') = 0.
    Degree-1 input is rejected: the contracting generator would land in
    degree 0.
    """
    gens = []
    pairs = []
    for g in generators:
        g = g if isinstance(g, Generator) else Generator(*g)
        if g.degree < 2:
            raise ModelError(
                "cone over degree-%d generator %r: contracting generator would "
                "have degree %d" % (g.degree, g.name, g.degree - 1))
        prime = Generator(g.name + prime_suffix, g.degree)
        bar = Generator(g.name + bar_suffix, g.degree - 1)
        gens.extend([prime, bar])
        pairs.append((prime, bar))

    def diff(alg):
        return {bar.name: -alg.gen_poly(prime.name) for prime, bar in pairs}

    return FreeCdga(gens, cap, differential=diff)


def suspension_model(generators, cap, suffix="~'"):
    """Degree -1 shift with zero differential: g (degree m) becomes g~' (m-1).

    Degree-1 input is rejected (the shift would leave the positive range).
    """
    gens = []
    for g in generators:
        g = g if isinstance(g, Generator) else Generator(*g)
        if g.degree < 2:
            raise ModelError(
                "suspension of degree-%d generator %r leaves the positive range"
                % (g.degree, g.name))
        gens.append(Generator(g.name + suffix, g.degree - 1))
    return FreeCdga(gens, cap)


class Coproduct:
    """Result of the pushout-free join: the algebra, inclusions, renames."""

    def __init__(self, algebra, left, right, renames):
        self.algebra = algebra
        self.left = left          # CdgaMorphism A -> algebra
        self.right = right        # CdgaMorphism B -> algebra
        self.renames = renames    # [(side, old name, new name)]


def coproduct(A, B, rename=True):
    """Coproduct of two free CDGAs: disjoint union of generators.

    Name collisions are renamed on the right factor with numeric suffixes
    (recorded in the result); with rename=False a collision raises ModelError.
    The cap is the minimum of the two caps.
    """
    cap = min(A.cap, B.cap)
    taken = {g.name for g in A.generators}
    renames = []
    right_names = {}
    for g in B.generators:
        name = g.name
        if name in taken:
            if not rename:
                raise ModelError("generator name collision on %r with renaming disabled"
                                 % name)
            k = 2
            while "%s_%d" % (g.name, k) in taken or "%s_%d" % (g.name, k) in right_names.values():
                k += 1
            name = "%s_%d" % (g.name, k)
            renames.append(("right", g.name, name))
        taken.add(name)
        right_names[g.name] = name

    gens = list(A.generators) + [Generator(right_names[g.name], g.degree)
                                 for g in B.generators]

    def diff(alg):
        values = {}
        for g in A.generators:
            dg = A.d_of_gen(g.name)
            if not dg.is_zero:
                values[g.name] = translate_poly(dg, alg, lambda n: n)
        for g in B.generators:
            dg = B.d_of_gen(g.name)
            if not dg.is_zero:
                values[right_names[g.name]] = translate_poly(
                    dg, alg, lambda n: right_names[n])
        return values

    C = FreeCdga(gens, cap, differential=diff)
    left = CdgaMorphism(A, C, {g.name: C.gen_poly(g.name) for g in A.generators},
                        check=False)
    right = CdgaMorphism(B, C, {g.name: C.gen_poly(right_names[g.name])
                                for g in B.generators}, check=False)
    return Coproduct(C, left, right, renames)


def translate_poly(p, target, name_map):
    """Rebuild p in `target` after renaming generators via name_map.

    Renaming can reorder same-degree generators, so every monomial is
    renormalized in the target (Koszul signs included).
    """
    out = target.zero()
    src = p.algebra
    for m, c in p.terms.items():
        raw = [(name_map(src.generators[i].name), e) for i, e in m.factors]
        sign, mono = normalize_monomial(target, raw)
        if sign:
            out = out + GradedPolynomial(target, {mono: sign * c})
    if p.truncated:
        out = GradedPolynomial(target, out.terms, truncated=True)
    return out
