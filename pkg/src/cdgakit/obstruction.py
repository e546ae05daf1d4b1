"""Secondary operations and obstruction classes.

Three computations live here, all sharing the same deterministic
nullhomotopy solver:

* ``massey_triple``:  the Massey triple product
  <[a],[b],[c]> = [ xi·c - (-1)^|a| a·eta ]   where d(xi) = a·b, d(eta) = b·c,
  with its indeterminacy subspace [a]·H + H·[c].

* ``extend_strand``:  stage-by-stage extension of an augmentation of a
  realization to an arbitrary CDGA realizing the same cohomology.  Stage n
  solves d(X) = (the forced value of d on the stage-n contracting
  generators); when a solve fails, the required cocycle's class is the
  obstruction.  Stage 1 extends whenever the assignment data is valid;
  stage 2 is where genuine obstructions appear; stage 3 and beyond are
  outside the truncation and refuse.

* ``map_obstruction``:  given phi: A -> B and a stage >= 1 realization of A,
  the class per level-1 generator g of
      [ X_g - phi(eps(gbar)) ]  in H^(|g|-1)(B),
  where X_g is the deterministic solution of d(X) = phi(eps(d gbar)).
  All components vanish iff phi's nullhomotopy data extends over the cone,
  i.e. iff phi is realized at this stage.

Every required cocycle is asserted closed before its class is taken; the
first nonvanishing component is the reported obstruction and any remaining
failures ride along informationally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra_core import ZERO, ONE, GradedPolynomial, multiply
from .algebra_core import _rref, _reduce_vector
from .cdga import (
    CdgaMorphism,
    CohomologyGroup,
    cohomology,
    differentiate,
    solve_differential,
)
from .errors import (
    DegreeCapError,
    HomogeneityError,
    MorphismError,
    NotCocycleError,
    StageError,
    UndefinedBracketError,
)


def _require_cocycle(A, p, what):
    if p.is_zero:
        return
    if not p.is_homogeneous:
        raise HomogeneityError("%s must be homogeneous" % what)
    if not differentiate(A, p).is_zero:
        raise NotCocycleError("%s is not a cocycle: %s" % (what, p))


@dataclass
class ObstructionComponent:
    """One generator's contribution to an obstruction."""

    generator: str
    degree: int
    representative: GradedPolynomial
    coordinates: tuple

    @property
    def vanishes(self):
        return all(c == 0 for c in self.coordinates)


@dataclass
class ObstructionClass:
    """A nonvanishing obstruction: the first failing component plus the rest."""

    stage: int
    component: ObstructionComponent
    also_failing: tuple = ()

    @property
    def generator(self):
        return self.component.generator

    @property
    def degree(self):
        return self.component.degree

    @property
    def representative(self):
        return self.component.representative

    @property
    def coordinates(self):
        return self.component.coordinates

    @property
    def vanishes(self):
        return False

    def __str__(self):
        return ("obstruction at stage %d, generator %s: class %s in H^%d "
                "(representative %s)" % (self.stage, self.generator,
                                         list(self.coordinates), self.degree,
                                         self.representative))


# ---------------------------------------------------------------------------
# Massey triple products
# ---------------------------------------------------------------------------

@dataclass
class MasseyResult:
    """Value and indeterminacy of a Massey triple product."""

    degree: int
    representative: GradedPolynomial
    coordinates: tuple
    indeterminacy_basis: tuple        # coordinate vectors in the same H basis
    xi: GradedPolynomial
    eta: GradedPolynomial
    group: CohomologyGroup

    @property
    def vanishes(self):
        return all(c == 0 for c in self.coordinates)

    @property
    def indeterminacy_dim(self):
        return len(self.indeterminacy_basis)

    @property
    def vanishes_mod_indeterminacy(self):
        row = {i: c for i, c in enumerate(self.coordinates) if c}
        rows = [{i: c for i, c in enumerate(v) if c} for v in self.indeterminacy_basis]
        rref, pivots = _rref(rows, len(self.coordinates))
        return not _reduce_vector(row, rref, pivots)


def massey_triple(A, a, b, c):
    """<[a],[b],[c]> for cocycles with [a][b] = [b][c] = 0.

    Nullhomotopies are the deterministic first solutions, so the reported
    representative is reproducible; the indeterminacy subspace
    [a]·H^(|b|+|c|-1) + H^(|a|+|b|-1)·[c] is returned alongside.  Raises
    UndefinedBracketError when a product class fails to vanish and
    DegreeCapError when any needed degree exceeds the cap.
    """
    for p, what in ((a, "first entry"), (b, "second entry"), (c, "third entry")):
        if p.algebra is not A:
            raise ValueError("%s lives in a different algebra" % what)
        if p.is_zero:
            raise UndefinedBracketError("%s is the zero class" % what)
        _require_cocycle(A, p, what)
    da, db, dc = a.degree(), b.degree(), c.degree()
    if da + db + dc - 1 + 1 > A.cap:
        raise DegreeCapError(
            "Massey value lives in H^%d; not decidable at cap %d"
            % (da + db + dc - 1, A.cap))

    ab = a * b
    if ab.truncated:
        raise DegreeCapError("product a·b exceeds the cap")
    xi = solve_differential(A, da + db - 1, ab)
    if xi is None:
        raise UndefinedBracketError("[a][b] != 0: d(xi) = %s has no solution" % ab)
    bc = b * c
    if bc.truncated:
        raise DegreeCapError("product b·c exceeds the cap")
    eta = solve_differential(A, db + dc - 1, bc)
    if eta is None:
        raise UndefinedBracketError("[b][c] != 0: d(eta) = %s has no solution" % bc)

    sign = -1 if da % 2 else 1
    value = xi * c - sign * (a * eta)
    if not differentiate(A, value).is_zero:
        raise AssertionError("Massey representative is not a cocycle")

    H = cohomology(A, da + db + dc - 1)
    coords = H.class_of(value)

    indet_rows = []
    for h in cohomology(A, db + dc - 1).representatives:
        prod = a * h
        if not prod.is_zero:
            vec = H.class_of(prod)
            if any(vec):
                indet_rows.append({i: v for i, v in enumerate(vec) if v})
    for h in cohomology(A, da + db - 1).representatives:
        prod = h * c
        if not prod.is_zero:
            vec = H.class_of(prod)
            if any(vec):
                indet_rows.append({i: v for i, v in enumerate(vec) if v})
    rref, _pivots = _rref(indet_rows, H.dimension)
    indet_basis = tuple(
        tuple(row.get(i, ZERO) for i in range(H.dimension)) for row in rref)

    return MasseyResult(degree=da + db + dc - 1, representative=value,
                        coordinates=coords, indeterminacy_basis=indet_basis,
                        xi=xi, eta=eta, group=H)


# ---------------------------------------------------------------------------
# Augmentation strands
# ---------------------------------------------------------------------------

class Strand:
    """Stage-n augmentation data: values in a target CDGA for every level-0
    generator the realization has acquired through stage n.

    Stage 0 covers the base fragment, stage 1 adds the cone pair values
    (g' forced, gbar solved), stage 2 adds the suspension-cone pair values.
    `validate` rechecks that the assignment commutes with the differentials
    wherever it is defined.
    """

    def __init__(self, realization, target, stage, values):
        self.realization = realization
        self.target = target
        self.stage = stage
        self.values = dict(values)

    def apply(self, p):
        """Name-based application to a polynomial over assigned generators."""
        src = p.algebra
        out = self.target.zero()
        for m, coeff in p.terms.items():
            term = self.target.one()
            for i, e in m.factors:
                name = src.generators[i].name
                if name not in self.values:
                    raise StageError(
                        "strand at stage %d has no value for generator %r"
                        % (self.stage, name))
                for _ in range(e):
                    term = multiply(self.target, term, self.values[name])
                if term.is_zero:
                    break
            out = out + coeff * term
        return out

    def validate(self):
        L0 = self.realization.level_algebra(0)
        for name, val in self.values.items():
            g = L0.gen(name)
            if not val.is_zero and (not val.is_homogeneous or val.degree() != g.degree):
                raise MorphismError(
                    "strand value for %s must be homogeneous of degree %d"
                    % (name, g.degree))
            lhs = differentiate(self.target, val)
            rhs = self.apply(L0.d_of_gen(name))
            if lhs != rhs:
                raise MorphismError(
                    "strand does not commute with d on %s: d(value) = %s, "
                    "value(d %s) = %s" % (name, lhs, name, rhs))
        return self


def make_strand(R, B, theta):
    """Stage-0 strand from base-generator assignments (each a cocycle in B)."""
    if R.stage < 0:
        raise StageError("realization has no assembled levels")
    base = R.cw_levels[0].generators
    values = {}
    for g in base:
        if g.name not in theta:
            raise MorphismError("theta assigns no value to base generator %r" % g.name)
        v = theta[g.name]
        if v.algebra is not B:
            raise MorphismError("theta value for %r is not built in the target" % g.name)
        if not v.is_zero and (not v.is_homogeneous or v.degree() != g.degree):
            raise MorphismError(
                "theta value for %r must be homogeneous of degree %d" % (g.name, g.degree))
        _require_cocycle(B, v, "theta value for %r" % g.name)
        values[g.name] = v
    extra = set(theta) - {g.name for g in base}
    if extra:
        raise MorphismError("theta assigns unknown generators: %s"
                            % ", ".join(sorted(extra)))
    return Strand(R, B, 0, values).validate()


def extend_strand(R, B, theta=None, S=None):
    """Extend a strand one stage; returns the new Strand or the obstruction.

    With S=None builds the stage-0 strand from `theta` (or, when that is
    also None, the default assignment of `default_theta`).  Stage 1 solves
    d(X) = -theta(attach g) per level-1 generator; stage 2 solves
    d(Y) = -S(F1(gbar)) per level-2 generator, where F1 is the realization's
    nullhomotopy face.  The required cocycle of a failed solve is reported at
    the first failing generator (the rest ride along informationally).
    """
    if S is None:
        return make_strand(R, B, default_theta(R, B) if theta is None else theta)
    n = S.stage + 1
    if n > 2:
        raise StageError("stage %d extension is not implemented (truncation at 2)" % n)
    if R.stage < n:
        raise StageError("realization is only assembled through stage %d" % R.stage)

    values = dict(S.values)
    failures = []
    cw = R.cw_levels[n]
    if n == 1:
        for g in cw.generators:
            eps_prime = S.apply(cw.attach[g.name])
            required = -eps_prime
            _require_cocycle(B, required, "stage-1 required cocycle for %s" % g.name)
            X = solve_differential(B, g.degree - 1, required)
            if X is None:
                H = cohomology(B, g.degree)
                failures.append(ObstructionComponent(
                    g.name, g.degree, required, H.class_of(required)))
                continue
            values[g.name + "'"] = eps_prime
            values[g.name + "~"] = X
    else:
        if not R.f1_bars:
            raise StageError("realization carries no stage-2 nullhomotopy data")
        for g in cw.generators:
            eps_f1 = S.apply(R.f1_bars[g.name])
            required = -eps_f1
            _require_cocycle(B, required, "stage-2 required cocycle for %s" % g.name)
            Y = solve_differential(B, g.degree - 2, required)
            if Y is None:
                H = cohomology(B, g.degree - 1)
                failures.append(ObstructionComponent(
                    g.name, g.degree - 1, required, H.class_of(required)))
                continue
            values[g.name + "~'"] = eps_f1
            values[g.name + "~~"] = Y

    if failures:
        return ObstructionClass(stage=n, component=failures[0],
                                also_failing=tuple(failures[1:]))
    return Strand(R, B, n, values).validate()


# ---------------------------------------------------------------------------
# Morphism realization obstruction
# ---------------------------------------------------------------------------

@dataclass
class MapObstructionResult:
    """Per-generator obstruction classes to realizing a morphism at stage 1."""

    components: tuple                  # ObstructionComponent per level-1 generator
    exactness_notes: tuple             # (base generator, phi(eps value) exact?)

    @property
    def vanishes(self):
        return all(c.vanishes for c in self.components)

    @property
    def obstruction(self):
        """The first nonvanishing component with the rest attached, or None."""
        bad = [c for c in self.components if not c.vanishes]
        if not bad:
            return None
        return ObstructionClass(stage=1, component=bad[0],
                                also_failing=tuple(bad[1:]))


def map_obstruction(phi, R):
    """Obstruction to realizing phi: A -> B over a stage >= 1 realization of A.

    For each level-1 generator g with cone pair (g', gbar) and defining
    augmentation eps, the deterministic solve d(X) = phi(eps(d gbar)) always
    succeeds (the right side is phi of an exact cocycle); the component class
    is [X - phi(eps(gbar))] in H^(|g|-1)(B).  The informational
    `exactness_notes` record whether phi kills the base classes — the
    condition under which all components are forced to vanish.
    """
    if R.stage < 1:
        raise StageError("map_obstruction needs a realization assembled to stage >= 1")
    if phi.source is not R.target:
        raise MorphismError(
            "the morphism source must be the realization's defining target")
    A, B = phi.source, phi.target

    notes = []
    for g in R.cw_levels[0].generators:
        val = phi.apply(R.augmentation.value_of(g.name))
        exact = val.is_zero or solve_differential(B, g.degree - 1, val) is not None
        notes.append((g.name, exact))

    components = []
    for g in R.cw_levels[1].generators:
        eps_prime = R.augmentation.value_of(g.name + "'")
        eps_bar = R.augmentation.value_of(g.name + "~")
        rhs = -phi.apply(eps_prime)
        X = solve_differential(B, g.degree - 1, rhs)
        if X is None:
            raise AssertionError(
                "phi of an exact cocycle failed to be exact on %s" % g.name)
        rep = X - phi.apply(eps_bar)
        if not differentiate(B, rep).is_zero:
            raise AssertionError("map obstruction representative is not a cocycle")
        H = cohomology(B, g.degree - 1)
        components.append(ObstructionComponent(
            g.name, g.degree - 1, rep, H.class_of(rep)))
    return MapObstructionResult(tuple(components), tuple(notes))


def default_theta(R, B):
    """Default stage-0 assignment for `extend_strand` targets.

    A base generator maps to the same-named generator of B when one exists;
    otherwise its stored defining augmentation value is carried over to B by
    generator names.  Raises KeyError when neither route is available.
    """
    theta = {}
    for g in R.cw_levels[0].generators:
        if B.has_gen(g.name):
            theta[g.name] = B.gen_poly(g.name)
        else:
            from .cdga import translate_poly
            theta[g.name] = translate_poly(R.augmentation.value_of(g.name),
                                           B, lambda n: n)
    return theta
