"""Truncated simplicial CDGA realizations of free graded-algebra resolutions.

A resolution is described by levels of free-algebra basis data:

* level 0: base generators with augmentation values in a target CDGA,
* level 1: generators with attaching values in the assembled level-0 algebra,
* level 2: generators with attaching values in the assembled level-1 algebra.

`assemble_level(R, k)` advances the realization to stage k.  Each stage glues
a cone fragment onto the previous stage and rebuilds every level at or below
k, so after stage 2 the level algebras are

    level 0:  V[0] ⨿ C(V[1]) ⨿ CS(V[2])
    level 1:  s0·V[0] ⨿ V[1] ⨿ s0·C(V[1]) ⨿ C(V[2]) ⨿ s0·CS(V[2])
    level 2:  V[2] ⨿ s0/s1 copies of V[1] and C(V[2]) ⨿ s1s0 copies of the rest

where C(-) is the cone (g', gbar with d(gbar) = -g') and CS(-) the cone on
the suspension (g~', g~~ with d(g~~) = -g~').  Degenerate copies are named by
the operator in normal form, e.g. ``s0(u)`` or ``s1(s0(x))``; the number of
copies of a level-j fragment at level k is C(k, k-j), the usual degeneracy
census.

Face maps are honest CDGA morphisms, validated for d-commutation when they
are built; the simplicial identities are reverified generator by generator by
`verify_simplicial_identities`, and `moore_verify` computes the Moore complex
on levelwise cohomology with the induced faces and compares its H0 against
the target's cohomology degree by degree.

Sign and direction conventions (fixed):

* inclusion face on a level-n basis generator:  d1(g) = +g'
* attaching face:                               d0(g) = attach(g)
* top face at level 2:                          d2(g) = 0
* quotient face on the stage-2 cone:            d1(g') = 0, d1(gbar) = +g~'
* nullhomotopy face:  d0(g') = d0(attach(g)),  d0(gbar) solves
  d(X) = -d0(g') jointly with augmentation-extension solvability in the
  defining target (the joint system pins X uniquely up to exact ambiguity and
  makes the extended augmentation well defined).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra_core import (
    Generator,
    GradedPolynomial,
    RationalMatrix,
    ZERO,
    ONE,
    basis,
    coords_to_poly,
    kernel_basis,
    poly_to_coords,
    solve_in_image,
    span_rank,
)
from .algebra_core import _rref, _reduce_vector
from .cdga import (
    CdgaMorphism,
    FreeCdga,
    cohomology,
    differential_matrix,
    differentiate,
    solve_differential,
    translate_poly,
)
from .errors import (
    AttachingMapError,
    DegreeCapError,
    HomogeneityError,
    StageError,
)

MAX_STAGE = 2          # simplicial truncation ceiling; stages beyond this refuse

_SDEG_RE = re.compile(r"^s(\d+)\((.*)\)$")


def degeneracy_name(j, name):
    """Canonical name of s_j applied to the element called `name`.

    Uses s_i s_j = s_(j+1) s_i (i <= j) to push indices into the normal form
    where outer indices strictly exceed inner ones, so every iterated
    degeneracy has exactly one spelling.
    """
    m = _SDEG_RE.match(name)
    if m:
        b = int(m.group(1))
        if j <= b:
            return "s%d(%s)" % (b + 1, degeneracy_name(j, m.group(2)))
    return "s%d(%s)" % (j, name)


@dataclass
class CwBasisLevel:
    """Basis data for one resolution level.

    `attach` maps generator names to polynomials: augmentation values in the
    target CDGA for dimension 0, attaching values in the previously assembled
    level algebra for dimensions >= 1.  `raw_attach` optionally keeps the
    source expressions for round-tripping.
    """

    dimension: int
    generators: tuple
    attach: dict
    raw_attach: dict = field(default_factory=dict)

    def __post_init__(self):
        self.generators = tuple(
            g if isinstance(g, Generator) else Generator(*g) for g in self.generators)
        names = {g.name for g in self.generators}
        missing = names - set(self.attach)
        if missing:
            raise AttachingMapError(
                "level %d: no attach value for %s"
                % (self.dimension, ", ".join(sorted(missing))))
        extra = set(self.attach) - names
        if extra:
            raise AttachingMapError(
                "level %d: attach values for unknown generators %s"
                % (self.dimension, ", ".join(sorted(extra))))


@dataclass
class Summand:
    """One labeled tensor factor of a level algebra."""

    label: str
    kind: str            # "basis" | "cone" | "suspension_cone"
    home_level: int
    operator: tuple      # degeneracy indices, outermost first; () = nondegenerate
    gen_names: tuple


class SimplicialLevel:
    """A level algebra together with its summand census and structure maps."""

    def __init__(self, dimension, algebra, summands):
        self.dimension = dimension
        self.algebra = algebra
        self.summands = tuple(summands)
        self.faces = []          # CdgaMorphism: this level -> level below
        self.degeneracies = []   # CdgaMorphism: level below -> this level

    def census(self):
        return [(s.label, len(s.gen_names)) for s in self.summands]


class TruncatedRealization:
    """A simplicial CDGA realization under construction, truncated at stage 2.

    Use `set_cw_level` to provide basis data, then `assemble_level(R, k)` for
    k = 0, 1, 2 in order.  The realization is immutable once assembled (no
    code here mutates finished levels).
    """

    def __init__(self, target, cap):
        if cap > target.cap:
            raise DegreeCapError(
                "realization cap %d exceeds target cap %d" % (cap, target.cap))
        self.target = target
        self.cap = cap
        self.cw_levels = {}
        self.levels = []
        self.augmentation = None      # CdgaMorphism: level 0 -> target
        self.f1_bars = {}             # level-2 basis name -> nullhomotopy poly
        self.f1_primes = {}           # level-2 basis name -> d0(attach) poly

    @property
    def stage(self):
        return len(self.levels) - 1

    def set_cw_level(self, dimension, generators, attach, raw_attach=None):
        if dimension > MAX_STAGE:
            raise StageError(
                "resolution data at dimension %d: only dimensions <= %d are implemented"
                % (dimension, MAX_STAGE))
        level = CwBasisLevel(dimension, tuple(generators), dict(attach),
                             dict(raw_attach or {}))
        self.cw_levels[dimension] = level
        return level

    def level_algebra(self, k):
        return self.levels[k].algebra

    def face(self, k, i):
        return self.levels[k].faces[i]

    def degeneracy(self, k, j):
        """s_j as a morphism from level k-1 into level k."""
        return self.levels[k].degeneracies[j]


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def assemble_level(R, k):
    """Advance the realization to stage k (builds level k, extends the lower ones).

    Stages must be assembled in order 0, 1, 2.  Raises AttachingMapError with
    a pointed message when the supplied attach data fails a structural check
    (inhomogeneity, d-closure, d1∘attach != 0, or unsolvable augmentation
    extension against the defining target).
    """
    if k != R.stage + 1:
        raise StageError("stage %d cannot be assembled at current stage %d"
                         % (k, R.stage))
    if k > MAX_STAGE:
        raise StageError("stage %d is beyond the implemented truncation (max %d)"
                         % (k, MAX_STAGE))
    if k not in R.cw_levels:
        raise StageError("no basis data supplied for dimension %d" % k)
    if k == 0:
        _assemble_stage0(R)
    elif k == 1:
        _assemble_stage1(R)
    else:
        _assemble_stage2(R)
    return R.levels[k]


def _check_attach_polys(cw, algebra, allow_zero=False):
    for g in cw.generators:
        val = cw.attach[g.name]
        if val.algebra is not algebra:
            raise AttachingMapError(
                "attach value for %s is not built in the expected algebra" % g.name)
        if val.is_zero:
            if allow_zero:
                continue
            raise AttachingMapError("attach value for %s is zero" % g.name)
        if not val.is_homogeneous or val.degree() != g.degree:
            raise AttachingMapError(
                "attach value for %s must be homogeneous of degree %d, got %s"
                % (g.name, g.degree, val))
        if val.truncated:
            raise AttachingMapError("attach value for %s is truncated data" % g.name)


def _assemble_stage0(R):
    cw = R.cw_levels[0]
    _check_attach_polys(cw, R.target, allow_zero=True)
    alg = FreeCdga(cw.generators, R.cap)
    level = SimplicialLevel(0, alg, [Summand("V[0]", "basis", 0, (), tuple(
        g.name for g in cw.generators))])
    R.levels.append(level)
    # Morphism validation enforces that each augmentation value is a cocycle
    # of the right degree (phi(d g) = 0 must equal d(phi g)).
    R.augmentation = CdgaMorphism(alg, R.target, dict(cw.attach))


def _reembed(p, new_alg):
    return translate_poly(p, new_alg, lambda n: n)


def _cone_gens(generators, prime_suffix, bar_suffix):
    pairs = []
    for g in generators:
        pairs.append((Generator(g.name + prime_suffix, g.degree),
                      Generator(g.name + bar_suffix, g.degree - 1), g))
    return pairs


def _assemble_stage1(R):
    cw = R.cw_levels[1]
    L0_old = R.level_algebra(0)
    _check_attach_polys(cw, L0_old)
    for g in cw.generators:
        if g.degree < 2:
            raise AttachingMapError(
                "level-1 generator %s has degree %d; cone fragments need degree >= 2"
                % (g.name, g.degree))
        if not differentiate(L0_old, cw.attach[g.name]).is_zero:
            raise AttachingMapError(
                "attach value for %s is not d-closed in the level-0 algebra" % g.name)

    cone = _cone_gens(cw.generators, "'", "~")

    # --- extended level 0: V[0] ⨿ C(V[1]) ---------------------------------
    base_names = tuple(g.name for g in R.cw_levels[0].generators)
    gens0 = list(L0_old.generators)
    for prime, bar, _src in cone:
        gens0 += [prime, bar]

    def diff0(alg):
        vals = {}
        for g in L0_old.generators:
            dg = L0_old.d_of_gen(g.name)
            if not dg.is_zero:
                vals[g.name] = _reembed(dg, alg)
        for prime, bar, _src in cone:
            vals[bar.name] = -alg.gen_poly(prime.name)
        return vals

    L0 = FreeCdga(gens0, R.cap, differential=diff0)
    summands0 = [
        Summand("V[0]", "basis", 0, (), base_names),
        Summand("C(V[1])", "cone", 0, (),
                tuple(n for prime, bar, _ in cone for n in (prime.name, bar.name))),
    ]

    # --- extended augmentation -------------------------------------------
    aug = {n: R.augmentation.value_of(n) for n in base_names}
    for prime, bar, src in cone:
        eps_prime = R.augmentation.apply(cw.attach[src.name])
        X = solve_differential(R.target, src.degree - 1, -eps_prime)
        if X is None:
            raise AttachingMapError(
                "augmentation does not annihilate the attaching class of %s: "
                "d(X) = -(%s) has no solution in the target" % (src.name, eps_prime))
        aug[prime.name] = eps_prime
        aug[bar.name] = X

    # --- level 1: s0·V[0] ⨿ V[1] ⨿ s0·C(V[1]) -----------------------------
    copy = {g.name: degeneracy_name(0, g.name) for g in L0.generators}
    gens1 = [Generator(copy[g.name], g.degree) for g in L0.generators]
    gens1 += [Generator(g.name, g.degree) for g in cw.generators]

    def diff1(alg):
        vals = {}
        for g in L0.generators:
            dg = L0.d_of_gen(g.name)
            if not dg.is_zero:
                vals[copy[g.name]] = translate_poly(dg, alg, lambda n: copy[n])
        return vals

    L1 = FreeCdga(gens1, R.cap, differential=diff1)
    summands1 = [
        Summand("s0·V[0]", "basis", 0, (0,), tuple(copy[n] for n in base_names)),
        Summand("V[1]", "basis", 1, (), tuple(g.name for g in cw.generators)),
        Summand("s0·C(V[1])", "cone", 0, (0,),
                tuple(copy[n] for prime, bar, _ in cone
                      for n in (prime.name, bar.name))),
    ]

    # faces and the degeneracy; morphism validation rechecks d-commutation
    d0_vals, d1_vals = {}, {}
    for g in L0.generators:
        d0_vals[copy[g.name]] = L0.gen_poly(g.name)
        d1_vals[copy[g.name]] = L0.gen_poly(g.name)
    for g in cw.generators:
        d0_vals[g.name] = _reembed(cw.attach[g.name], L0)
        d1_vals[g.name] = L0.gen_poly(g.name + "'")
    face0 = CdgaMorphism(L1, L0, d0_vals)
    face1 = CdgaMorphism(L1, L0, d1_vals)
    s0 = CdgaMorphism(L0, L1, {g.name: L1.gen_poly(copy[g.name])
                               for g in L0.generators})

    level0 = SimplicialLevel(0, L0, summands0)
    level1 = SimplicialLevel(1, L1, summands1)
    level1.faces = [face0, face1]
    level1.degeneracies = [s0]

    new_aug = CdgaMorphism(L0, R.target, aug)
    _check_coequalization(level1, new_aug)

    R.levels[0] = level0
    R.levels.append(level1)
    R.augmentation = new_aug


def _check_coequalization(level1, aug):
    """eps∘d0 = eps∘d1 on every level-1 generator (structural honesty check)."""
    for g in level1.algebra.generators:
        lhs = aug.apply(level1.faces[0].value_of(g.name))
        rhs = aug.apply(level1.faces[1].value_of(g.name))
        if lhs != rhs:
            raise AttachingMapError(
                "augmentation fails to coequalize the faces on %s: %s vs %s"
                % (g.name, lhs, rhs))


def _assemble_stage2(R):
    cw = R.cw_levels[2]
    L1_old = R.level_algebra(1)
    L0_old = R.level_algebra(0)
    _check_attach_polys(cw, L1_old)
    for g in cw.generators:
        if g.degree < 3:
            raise AttachingMapError(
                "level-2 generator %s has degree %d; the suspension cone needs "
                "degree >= 3" % (g.name, g.degree))
        if not differentiate(L1_old, cw.attach[g.name]).is_zero:
            raise AttachingMapError(
                "attach value for %s is not d-closed in the level-1 algebra" % g.name)

    # The quotient face must annihilate the attach value; otherwise the input
    # needs its degeneracy-side correction terms.
    for g in cw.generators:
        img = R.face(1, 1).apply(cw.attach[g.name])
        if not img.is_zero:
            raise AttachingMapError(
                "attaching value for %s fails d1∘attach = 0 (d1 image: %s); "
                "the attach needs correcting degeneracy terms such as "
                "-s0(...) before it glues simplicially" % (g.name, img))

    # Nullhomotopy data, solved jointly with the defining augmentation:
    #     d(X) = -d0(attach g)   in the stage-1 level-0 algebra,
    #     d(Y) = -eps(X)         in the target.
    # The stacked system makes the cocycle ambiguity of X land only where the
    # augmentation extension stays solvable.
    f1_primes, f1_bars, eps_sprime, eps_sbar = {}, {}, {}, {}
    for g in cw.generators:
        m = g.degree
        f1_prime = R.face(1, 0).apply(cw.attach[g.name])
        f1_primes[g.name] = f1_prime

        bas_X = basis(L0_old, m - 1)
        bas_dX = basis(L0_old, m)
        bas_Y = basis(R.target, m - 2)
        bas_dY = basis(R.target, m - 1)
        nX, nY = len(bas_X), len(bas_Y)
        rows = len(bas_dX) + len(bas_dY)
        M = RationalMatrix(rows, nX + nY)
        DX = differential_matrix(L0_old, m - 1)
        for (r, c), v in DX.entries.items():
            M.set(r, c, v)
        EPS = _morphism_matrix(R.augmentation, bas_X, bas_dY)
        for (r, c), v in EPS.entries.items():
            M.set(len(bas_dX) + r, c, v)
        DY = differential_matrix(R.target, m - 2)
        for (r, c), v in DY.entries.items():
            M.set(len(bas_dX) + r, nX + c, v)
        rhs = [-c for c in poly_to_coords(f1_prime, bas_dX)] + [ZERO] * len(bas_dY)
        res = solve_in_image(M, rhs)
        if not res.in_image:
            raise AttachingMapError(
                "no nullhomotopy for %s is compatible with the defining "
                "augmentation: the joint system d(X) = -d0(attach), "
                "d(Y) = -eps(X) is unsolvable" % g.name)
        X = coords_to_poly(L0_old, res.solution[:nX], bas_X)
        Y = coords_to_poly(R.target, res.solution[nX:], bas_Y)
        f1_bars[g.name] = X
        eps_sprime[g.name] = R.augmentation.apply(X)
        eps_sbar[g.name] = Y

    cone2 = _cone_gens(cw.generators, "'", "~")
    susp = [(Generator(g.name + "~'", g.degree - 1),
             Generator(g.name + "~~", g.degree - 2), g) for g in cw.generators]

    # --- extended level 0: += CS(V[2]) ------------------------------------
    gens0 = list(L0_old.generators) + [x for sp, sb, _ in susp for x in (sp, sb)]

    def diff0(alg):
        vals = {}
        for g in L0_old.generators:
            dg = L0_old.d_of_gen(g.name)
            if not dg.is_zero:
                vals[g.name] = _reembed(dg, alg)
        for sp, sb, _src in susp:
            vals[sb.name] = -alg.gen_poly(sp.name)
        return vals

    L0 = FreeCdga(gens0, R.cap, differential=diff0)
    summands0 = list(R.levels[0].summands) + [
        Summand("CS(V[2])", "suspension_cone", 0, (),
                tuple(n for sp, sb, _ in susp for n in (sp.name, sb.name)))]

    aug = {g.name: R.augmentation.value_of(g.name) for g in L0_old.generators}
    for sp, sb, src in susp:
        aug[sp.name] = eps_sprime[src.name]
        aug[sb.name] = eps_sbar[src.name]

    # --- rebuilt level 1: s0·(all of level 0) ⨿ V[1] ⨿ C(V[2]) ------------
    copy0 = {g.name: degeneracy_name(0, g.name) for g in L0.generators}
    cw1 = R.cw_levels[1]
    gens1 = [Generator(copy0[g.name], g.degree) for g in L0.generators]
    gens1 += [Generator(g.name, g.degree) for g in cw1.generators]
    gens1 += [x for prime, bar, _ in cone2 for x in (prime, bar)]

    def diff1(alg):
        vals = {}
        for g in L0.generators:
            dg = L0.d_of_gen(g.name)
            if not dg.is_zero:
                vals[copy0[g.name]] = translate_poly(dg, alg, lambda n: copy0[n])
        for prime, bar, _src in cone2:
            vals[bar.name] = -alg.gen_poly(prime.name)
        return vals

    L1 = FreeCdga(gens1, R.cap, differential=diff1)

    def relabel(summand):
        return Summand("s0·" + summand.label, summand.kind, summand.home_level,
                       (0,) + summand.operator,
                       tuple(copy0[n] for n in summand.gen_names))

    summands1 = [relabel(s) for s in summands0]
    summands1.insert(1, Summand("V[1]", "basis", 1, (),
                                tuple(g.name for g in cw1.generators)))
    summands1.append(Summand("C(V[2])", "cone", 1, (),
                             tuple(n for prime, bar, _ in cone2
                                   for n in (prime.name, bar.name))))

    d0_vals, d1_vals = {}, {}
    for g in L0.generators:
        d0_vals[copy0[g.name]] = L0.gen_poly(g.name)
        d1_vals[copy0[g.name]] = L0.gen_poly(g.name)
    for g in cw1.generators:
        d0_vals[g.name] = _reembed(cw1.attach[g.name], L0)
        d1_vals[g.name] = L0.gen_poly(g.name + "'")
    for prime, bar, src in cone2:
        d0_vals[prime.name] = _reembed(f1_primes[src.name], L0)
        d0_vals[bar.name] = _reembed(f1_bars[src.name], L0)
        d1_vals[prime.name] = L0.zero()
        d1_vals[bar.name] = L0.gen_poly(src.name + "~'")
    face10 = CdgaMorphism(L1, L0, d0_vals)
    face11 = CdgaMorphism(L1, L0, d1_vals)
    s0_01 = CdgaMorphism(L0, L1, {g.name: L1.gen_poly(copy0[g.name])
                                  for g in L0.generators})

    level0 = SimplicialLevel(0, L0, summands0)
    level1 = SimplicialLevel(1, L1, summands1)
    level1.faces = [face10, face11]
    level1.degeneracies = [s0_01]

    new_aug = CdgaMorphism(L0, R.target, aug)
    _check_coequalization(level1, new_aug)

    # --- level 2 ----------------------------------------------------------
    # Census: one copy per degeneracy operator in normal form; a level-j
    # fragment acquires C(2, 2-j) copies at level 2.
    nondeg1 = [s for s in level1.summands if not s.operator]
    gens2 = [Generator(g.name, g.degree) for g in cw.generators]
    summands2 = [Summand("V[2]", "basis", 2, (), tuple(g.name for g in cw.generators))]
    copy_maps = []          # (operator, {level-1 name -> level-2 name}) for copies
    for op in ((0,), (1,)):
        for s in nondeg1:
            named = {}
            for n in s.gen_names:
                cn = degeneracy_name(op[0], n)
                named[n] = cn
                gens2.append(Generator(cn, L1.gen(n).degree))
            summands2.append(Summand("s%d·%s" % (op[0], s.label), s.kind,
                                     s.home_level, op + s.operator,
                                     tuple(named[n] for n in s.gen_names)))
            copy_maps.append((op, s, named))
    for s in [x for x in level1.summands if x.operator == (0,)]:
        named = {}
        for n in s.gen_names:
            cn = degeneracy_name(1, n)       # normal form: s1(s0(...))
            named[n] = cn
            gens2.append(Generator(cn, L1.gen(n).degree))
        summands2.append(Summand("s1·" + s.label, s.kind, s.home_level,
                                 (1,) + s.operator,
                                 tuple(named[n] for n in s.gen_names)))
        copy_maps.append(((1,), s, named))

    def diff2(alg):
        vals = {}
        for _op, s, named in copy_maps:
            for n in s.gen_names:
                dg = L1.d_of_gen(n)
                if not dg.is_zero:
                    vals[named[n]] = translate_poly(
                        dg, alg, lambda x: named.get(x, x))
        return vals

    L2 = FreeCdga(gens2, R.cap, differential=diff2)

    s0_12 = CdgaMorphism(L1, L2, {g.name: L2.gen_poly(degeneracy_name(0, g.name))
                                  for g in L1.generators})
    s1_12 = CdgaMorphism(L1, L2, {g.name: L2.gen_poly(degeneracy_name(1, g.name))
                                  for g in L1.generators})
    degeneracies_12 = [s0_12, s1_12]

    face_vals = [dict(), dict(), dict()]
    for g in cw.generators:
        face_vals[0][g.name] = _reembed(cw.attach[g.name], L1)
        face_vals[1][g.name] = L1.gen_poly(g.name + "'")
        face_vals[2][g.name] = L1.zero()
    # d_i on a copy s_b(ξ):  s_(b-1)(d_i ξ) for i < b,  ξ for i in {b, b+1},
    # s_b(d_(i-1) ξ) for i > b+1.  Both non-identity branches land in the
    # image of s0: level 0 -> level 1, the only degeneracy at that height.
    for op, s, named in copy_maps:
        b = op[0]
        for n in s.gen_names:
            for i in range(3):
                if i == b or i == b + 1:
                    face_vals[i][named[n]] = L1.gen_poly(n)
                elif i < b:
                    face_vals[i][named[n]] = s0_01.apply(level1.faces[i].value_of(n))
                else:
                    face_vals[i][named[n]] = s0_01.apply(level1.faces[i - 1].value_of(n))
    faces2 = [CdgaMorphism(L2, L1, face_vals[i]) for i in range(3)]

    level2 = SimplicialLevel(2, L2, summands2)
    level2.faces = faces2
    level2.degeneracies = degeneracies_12

    R.levels[0] = level0
    R.levels[1] = level1
    R.levels.append(level2)
    R.augmentation = new_aug
    R.f1_primes = dict(f1_primes)
    R.f1_bars = dict(f1_bars)


def _morphism_matrix(phi, dom_basis, cod_basis):
    """Matrix of a morphism restricted to one degree in the canonical bases."""
    index = {m: i for i, m in enumerate(cod_basis)}
    M = RationalMatrix(len(cod_basis), len(dom_basis))
    for j, m in enumerate(dom_basis):
        img = phi.apply(GradedPolynomial(phi.source, {m: ONE}))
        for mm, c in img.terms.items():
            M.set(index[mm], j, c)
    return M


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass
class IdentityFailure:
    identity: str
    level: int
    generator: str
    lhs: str
    rhs: str


def verify_simplicial_identities(R):
    """Recheck every simplicial identity on every generator, by recomputation.

    Covers d_i d_j = d_(j-1) d_i (i < j), d_i s_j = s_(j-1) d_i / id / s_j
    d_(i-1), and s_i s_j = s_(j+1) s_i, at every composable level of the
    truncation.  Returns a list of IdentityFailure (empty = all good).
    """
    failures = []

    def record(identity, level, gen, lhs, rhs):
        if lhs != rhs:
            failures.append(IdentityFailure(identity, level, gen.name
                                            if isinstance(gen, Generator) else gen,
                                            str(lhs), str(rhs)))

    for k in range(2, R.stage + 1):
        for g in R.level_algebra(k).generators:
            gp = R.level_algebra(k).gen_poly(g.name)
            for j in range(1, k + 1):
                for i in range(j):
                    lhs = R.face(k - 1, i).apply(R.face(k, j).apply(gp))
                    rhs = R.face(k - 1, j - 1).apply(R.face(k, i).apply(gp))
                    record("d%d d%d = d%d d%d" % (i, j, j - 1, i), k, g, lhs, rhs)

    for k in range(1, R.stage + 1):
        # d_i s_j on every generator of level k-1
        for g in R.level_algebra(k - 1).generators:
            gp = R.level_algebra(k - 1).gen_poly(g.name)
            for j in range(k):
                sj = R.degeneracy(k, j).apply(gp)
                for i in range(k + 1):
                    lhs = R.face(k, i).apply(sj)
                    if i == j or i == j + 1:
                        rhs = gp
                    elif i < j:
                        rhs = R.degeneracy(k - 1, j - 1).apply(
                            R.face(k - 1, i).apply(gp))
                    else:
                        rhs = R.degeneracy(k - 1, j).apply(
                            R.face(k - 1, i - 1).apply(gp))
                    record("d%d s%d" % (i, j), k, g, lhs, rhs)

    for k in range(2, R.stage + 1):
        for g in R.level_algebra(k - 2).generators:
            gp = R.level_algebra(k - 2).gen_poly(g.name)
            for j in range(k - 1):
                for i in range(j + 1):
                    lhs = R.degeneracy(k, i).apply(R.degeneracy(k - 1, j).apply(gp))
                    rhs = R.degeneracy(k, j + 1).apply(R.degeneracy(k - 1, i).apply(gp))
                    record("s%d s%d = s%d s%d" % (i, j, j + 1, i), k, g, lhs, rhs)

    return failures


@dataclass
class MooreDegreeRow:
    degree: int
    level_dims: tuple          # dim H^degree(level k) for k = 0..stage
    h0_dim: int
    gamma_dim: int
    h0_matches: bool
    h0_reps: tuple             # representative cocycles in the level-0 algebra
    h1_dim: object             # int when decidable (stage >= 2), else None


class MooreReport:
    def __init__(self, rows, stage):
        self.rows = rows
        self.stage = stage

    @property
    def ok(self):
        for r in self.rows:
            if not r.h0_matches:
                return False
            if r.h1_dim not in (None, 0):
                return False
        return True

    def row(self, degree):
        for r in self.rows:
            if r.degree == degree:
                return r
        raise KeyError(degree)


def moore_verify(R, degrees=None, gamma=None):
    """Moore complex of the levelwise cohomology, compared against the target.

    For each degree the levelwise cohomology groups V_k = H^deg(level k) form
    a truncated simplicial vector space under the induced faces; the Moore
    chains are C_n = ∩_{i>=1} ker(d_i) with boundary induced by d_0.  H_0 must
    match the target cohomology Γ degreewise (`gamma` overrides the computed
    dimensions when given as {degree: dim}); H_1 must vanish wherever level-2
    data makes it decidable.
    """
    if R.stage < 1:
        raise StageError("moore_verify needs at least stage 1 assembled")
    if degrees is None:
        degrees = range(0, R.cap)
    rows = []
    for deg in degrees:
        if deg + 1 > R.cap:
            raise DegreeCapError("degree %d is undecidable at cap %d" % (deg, R.cap))
        H = [cohomology(R.level_algebra(k), deg) for k in range(R.stage + 1)]
        reps = [h.representatives for h in H]

        def face_matrix(k, i):
            cols = []
            for rep in reps[k]:
                img = R.face(k, i).apply(rep)
                cols.append(H[k - 1].class_of(img))
            return cols          # list of coordinate tuples in V_{k-1}

        # C1 and the boundary to V0
        v1 = len(reps[1])
        d1_cols = face_matrix(1, 1)
        M1 = RationalMatrix.from_columns(d1_cols, len(reps[0])) if v1 else \
            RationalMatrix(len(reps[0]), 0)
        c1_vectors = kernel_basis(M1)
        d0_cols = face_matrix(1, 0)

        def boundary1(vec):
            out = [ZERO] * len(reps[0])
            for j, c in enumerate(vec):
                if c:
                    for i, v in enumerate(d0_cols[j]):
                        out[i] += c * v
            return tuple(out)

        b1_images = [boundary1(v) for v in c1_vectors]
        rank_b1 = span_rank(b1_images, len(reps[0]))
        h0_dim = len(reps[0]) - rank_b1

        # representatives of H0: reduce V0 class basis modulo the boundary image
        im_rows = [{i: c for i, c in enumerate(v) if c} for v in b1_images]
        im_rref, im_pivots = _rref(im_rows, len(reps[0]))
        h0_reps = []
        acc_rows, acc_pivots = [], []
        for i, rep in enumerate(reps[0]):
            vec = {i: ONE}
            vec = _reduce_vector(vec, im_rref, im_pivots)
            vec = _reduce_vector(vec, acc_rows, acc_pivots)
            if not vec:
                continue
            piv = min(vec)
            inv = ONE / vec[piv]
            vec = {c: v * inv for c, v in vec.items()}
            acc_rows.append(vec)
            acc_pivots.append(piv)
            poly = R.level_algebra(0).zero()
            for c, v in vec.items():
                poly = poly + v * reps[0][c]
            h0_reps.append(poly)

        gamma_dim = (gamma or {}).get(deg) if gamma else None
        if gamma_dim is None:
            gamma_dim = cohomology(R.target, deg).dimension
        h1_dim = None
        if R.stage >= 2:
            d1_2 = face_matrix(2, 1)
            d2_2 = face_matrix(2, 2)
            rows2 = len(reps[1])
            stacked = RationalMatrix(2 * rows2, len(reps[2]))
            for j, col in enumerate(d1_2):
                for i, v in enumerate(col):
                    stacked.set(i, j, v)
            for j, col in enumerate(d2_2):
                for i, v in enumerate(col):
                    stacked.set(rows2 + i, j, v)
            c2_vectors = kernel_basis(stacked)
            d0_2 = face_matrix(2, 0)

            def boundary2(vec):
                out = [ZERO] * len(reps[1])
                for j, c in enumerate(vec):
                    if c:
                        for i, v in enumerate(d0_2[j]):
                            out[i] += c * v
                return tuple(out)

            ker_b1 = []
            for v in c1_vectors:
                if all(x == 0 for x in boundary1(v)):
                    ker_b1.append(v)
            b2_images = [boundary2(v) for v in c2_vectors]
            h1_dim = span_rank(ker_b1, v1) - span_rank(b2_images, len(reps[1]))

        rows.append(MooreDegreeRow(
            degree=deg,
            level_dims=tuple(len(r) for r in reps),
            h0_dim=h0_dim,
            gamma_dim=gamma_dim,
            h0_matches=(h0_dim == gamma_dim),
            h0_reps=tuple(h0_reps),
            h1_dim=h1_dim))
    return MooreReport(rows, R.stage)


# ---------------------------------------------------------------------------
# Minimal generator suggestions (dimensions 0 and 1 of a resolution)
# ---------------------------------------------------------------------------

def minimal_generators_dim0(B, max_degree=None):
    """Degreewise indecomposables of H*(B): a complement of (H+·H+)^d in H^d.

    Returns [(degree, representative cocycle)] in ascending degree with
    deterministic echelon representatives.  These are the degrees a free
    resolution of H*(B) needs at dimension 0.
    """
    top = max_degree if max_degree is not None else B.cap - 1
    groups = {}

    def H(d):
        if d not in groups:
            groups[d] = cohomology(B, d)
        return groups[d]

    out = []
    for d in range(1, top + 1):
        Hd = H(d)
        if Hd.dimension == 0:
            continue
        product_rows = []
        for e in range(1, d):
            He, Hf = H(e), H(d - e)
            for a in He.representatives:
                for b in Hf.representatives:
                    prod = a * b
                    if prod.is_zero:
                        continue
                    coords = Hd.class_of(prod)
                    row = {i: c for i, c in enumerate(coords) if c}
                    if row:
                        product_rows.append(row)
        rref, pivots = _rref(product_rows, Hd.dimension)
        acc_rows, acc_pivots = [], []
        for i in range(Hd.dimension):
            vec = _reduce_vector({i: ONE}, rref, pivots)
            vec = _reduce_vector(vec, acc_rows, acc_pivots)
            if not vec:
                continue
            piv = min(vec)
            inv = ONE / vec[piv]
            vec = {c: v * inv for c, v in vec.items()}
            acc_rows.append(vec)
            acc_pivots.append(piv)
            out.append((d, Hd.from_coords(
                tuple(vec.get(j, ZERO) for j in range(Hd.dimension)))))
    return out


def minimal_generators_dim1(eps, max_degree=None):
    """Degreewise minimal generators of ker(eps: V0 -> H*(B)) as an ideal.

    `eps` is a CdgaMorphism from a formal free algebra V0 into B whose values
    are cocycles.  Ascending through the degrees, the kernel of the induced
    map V0^d -> H^d(B) is computed exactly and reduced modulo
    (previously chosen generators)·V0; what survives is newly required in
    degree d.  Returns [(degree, polynomial in V0)].
    """
    V0, B = eps.source, eps.target
    top = max_degree if max_degree is not None else min(V0.cap, B.cap - 1)
    chosen = []          # (degree, poly in V0)
    for d in range(1, top + 1):
        bas = basis(V0, d)
        if not bas:
            continue
        Hd = cohomology(B, d)
        cols = []
        for m in bas:
            img = eps.apply(GradedPolynomial(V0, {m: ONE}))
            cols.append(Hd.class_of(img))
        M = RationalMatrix.from_columns(cols, Hd.dimension)
        kernel = kernel_basis(M)
        if not kernel:
            continue
        ideal_rows = []
        for (e, gen_poly) in chosen:
            for m in basis(V0, d - e):
                prod = gen_poly * GradedPolynomial(V0, {m: ONE})
                if prod.is_zero:
                    continue
                row = {i: c for i, c in enumerate(poly_to_coords(prod, bas)) if c}
                if row:
                    ideal_rows.append(row)
        rref, pivots = _rref(ideal_rows, len(bas))
        acc_rows, acc_pivots = [], []
        for vec in kernel:
            row = {i: c for i, c in enumerate(vec) if c}
            row = _reduce_vector(row, rref, pivots)
            row = _reduce_vector(row, acc_rows, acc_pivots)
            if not row:
                continue
            piv = min(row)
            inv = ONE / row[piv]
            row = {c: v * inv for c, v in row.items()}
            acc_rows.append(row)
            acc_pivots.append(piv)
            chosen.append((d, coords_to_poly(
                V0, tuple(row.get(j, ZERO) for j in range(len(bas))), bas)))
    return chosen
