"""Genus-zero moduli elements, the sewing partial operation, permutation
actions, and the bridge from geometry to algebra.

An element of arity n describes a sphere with n positively oriented
punctures plus one at infinity: the punctures sit at the given positions
with the last one pinned at zero, infinity carries a scale-one local
coordinate, and every local coordinate is encoded by a scale together
with the coefficient sequence of the exponential-flow parametrization

    exp(sum_j A_j x^{j+1} d/dx) . (a_0 x).

Sewing is implemented on the subclass whose coordinates at the two sewn
punctures extend to global fractional-linear maps (sequence part zero);
this covers the identity, scaling, standard two-puncture, and cap
elements. Results are renormalized to the canonical representative
(infinity at scale one, last puncture at zero) by an exact translation,
whose effect on the coordinate at infinity is recomputed by series
composition. The central-extension slot is carried along as an opaque
scalar with trivial multiplication.

The evaluation map sends an element with standard coordinates and
strictly decreasing puncture moduli to the matrix element of a product
of vertex operators at exact points; scales act per slot through the
grading. All arithmetic is over Gaussian rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import QQi
from .fock import GradedVector, HeisenbergVOA
from .reports import FixtureError, VerificationReport

ZERO = QQi(0)
ONE = QQi(1)


class UnsupportedSewing(Exception):
    """A sewn puncture's coordinate does not extend to a global map."""


class SewingUndefined(Exception):
    """The disjoint-disc radius condition fails or punctures collide."""


class DomainViolation(Exception):
    """Evaluation outside the series-convergence chamber or with
    non-standard coordinates."""


# -- truncated power series over Gaussian rationals -------------------------


class PSeries:
    """Power series sum c_k x^k truncated above x^order."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs, order: int):
        self.order = order
        self.c = [QQi.promote(x) for x in coeffs[:order + 1]]
        self.c += [ZERO] * (order + 1 - len(self.c))

    @staticmethod
    def x(order: int) -> "PSeries":
        return PSeries([ZERO, ONE], order)

    def __add__(self, other: "PSeries") -> "PSeries":
        return PSeries([a + b for a, b in zip(self.c, other.c)], self.order)

    def scale(self, k) -> "PSeries":
        k = QQi.promote(k)
        return PSeries([k * a for a in self.c], self.order)

    def mul(self, other: "PSeries") -> "PSeries":
        out = [ZERO] * (self.order + 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                if i + j > self.order:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        return PSeries(out, self.order)

    def compose(self, inner: "PSeries") -> "PSeries":
        """self(inner(x)) for inner with zero constant term."""
        if inner.c[0]:
            raise ValueError("composition needs a zero constant term")
        out = PSeries([self.c[self.order]], self.order)
        for k in range(self.order - 1, -1, -1):
            out = out.mul(inner)
            out.c[0] = out.c[0] + self.c[k]
        return out

    def derivative(self) -> "PSeries":
        out = [ZERO] * (self.order + 1)
        for k in range(1, self.order + 1):
            out[k - 1] = self.c[k] * k
        return PSeries(out, self.order)

    def is_zero(self) -> bool:
        return all(not a for a in self.c)

    def __eq__(self, other):
        return self.c == other.c

    def __repr__(self):
        return "PSeries(" + ", ".join(map(str, self.c)) + ")"


@dataclass(frozen=True)
class LocalCoordinate:
    """Scale plus exponential-flow coefficients of one local coordinate."""

    scale: QQi
    taylor: tuple[QQi, ...]

    def __post_init__(self):
        if not self.scale:
            raise ValueError("coordinate scale must be nonzero")

    @property
    def is_linear(self) -> bool:
        return all(not a for a in self.taylor)


def coordinate_series(scale, taylor=None, order: int | None = None) -> PSeries:
    """The power series of the coordinate with the given data, to degree
    ``order``: the exponential of the flow field applied to scale * x.

    Accepts either a LocalCoordinate plus the order, or the raw scale and
    flow coefficients."""
    if isinstance(scale, LocalCoordinate):
        coord, order = scale, taylor
        scale, taylor = coord.scale, coord.taylor
    f = PSeries.x(order).scale(scale)
    total = f
    term = f
    for k in range(1, order + 1):
        # apply the derivation sum_j A_j x^{j+1} d/dx once, divide by k
        d = term.derivative()
        nxt = PSeries([], order)
        for j, aj in enumerate(taylor, start=1):
            if not aj:
                continue
            mono = PSeries([ZERO] * (j + 1) + [aj], order)
            nxt = nxt + mono.mul(d)
        term = nxt.scale(Fraction(1, k))
        if term.is_zero():
            break
        total = total + term
    return total


def extract_coordinate_data(series: PSeries,
                            ncoeffs: int) -> tuple[QQi, tuple[QQi, ...]]:
    """Invert ``coordinate_series``: recover (scale, flow coefficients)
    from a power series with nonzero linear term."""
    a0 = series.c[1]
    if not a0:
        raise ValueError("series has vanishing linear coefficient")
    taylor: list[QQi] = []
    for j in range(1, ncoeffs + 1):
        current = coordinate_series(a0, tuple(taylor), series.order)
        if j + 1 > series.order:
            taylor.append(ZERO)
            continue
        defect = series.c[j + 1] - current.c[j + 1]
        taylor.append(defect / a0)
    return a0, tuple(taylor)


# -- moduli elements ---------------------------------------------------------


@dataclass(frozen=True)
class ModuliElement:
    """A point of the arity-n moduli space in canonical position.

    ``z`` lists the positions of punctures 1..n-1 (puncture n sits at 0);
    ``inf_coord`` is the flow sequence at infinity (scale pinned to one);
    ``coords`` gives one LocalCoordinate per positive puncture. ``order``
    bounds all stored sequences. The extension slot is an opaque exact
    scalar multiplied through sewing.
    """

    arity: int
    order: int
    z: tuple[QQi, ...]
    inf_coord: tuple[QQi, ...]
    coords: tuple[LocalCoordinate, ...]
    det_slot: Fraction = Fraction(1)

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be nonnegative")
        if len(self.z) != max(self.arity - 1, 0):
            raise ValueError("position list must have length arity-1")
        if len(self.coords) != self.arity:
            raise ValueError("need one coordinate per positive puncture")
        if len(self.inf_coord) != self.order:
            raise ValueError("infinity sequence must have length order")
        seen = set()
        for zz in self.z:
            if not zz:
                raise ValueError("puncture positions must be nonzero")
            if zz in seen:
                raise ValueError("puncture positions must be distinct")
            seen.add(zz)
        if self.arity == 0 and self.order >= 1 and self.inf_coord[0]:
            raise ValueError("arity-0 elements need a vanishing first "
                             "infinity coefficient")

    @property
    def positions(self) -> tuple[QQi, ...]:
        if self.arity == 0:
            return ()
        return self.z + (ZERO,)

    def standard_coordinates(self) -> bool:
        return all(not a for a in self.inf_coord) and \
            all(c.is_linear and c.scale == ONE for c in self.coords)

    def linear_coordinates(self) -> bool:
        return all(not a for a in self.inf_coord) and \
            all(c.is_linear for c in self.coords)


def _pad(seq, order) -> tuple[QQi, ...]:
    out = [QQi.promote(x) for x in seq]
    out += [ZERO] * (order - len(out))
    return tuple(out[:order])


def identity_element(order: int) -> ModuliElement:
    return ModuliElement(1, order, (), _pad((), order),
                         (LocalCoordinate(ONE, _pad((), order)),))


def scaling_element(a, order: int) -> ModuliElement:
    return ModuliElement(1, order, (), _pad((), order),
                         (LocalCoordinate(QQi.promote(a), _pad((), order)),))


def two_puncture_element(z, order: int) -> ModuliElement:
    std = LocalCoordinate(ONE, _pad((), order))
    return ModuliElement(2, order, (QQi.promote(z),), _pad((), order),
                         (std, std))


def cap_element(order: int) -> ModuliElement:
    return ModuliElement(0, order, (), _pad((), order), ())


@dataclass
class SewingResult:
    """Sewn element plus the exact transition data used to build it."""

    element: ModuliElement
    transition_scale: QQi = ONE
    transition_shift: QQi = ZERO
    renormalization_shift: QQi = ZERO


def _translated_inf(inf_coord, t: QQi, order: int) -> tuple[QQi, ...]:
    """Flow data at infinity after translating the sphere by -t: the old
    coordinate composed with 1/(w + t), i.e. x/(1 + t x) in the local
    parameter x = 1/w."""
    if not t:
        return tuple(inf_coord)
    series_order = order + 1
    inf_series = coordinate_series(ONE, tuple(inf_coord), series_order)
    geom = [ZERO] + [(-t) ** (k - 1) for k in range(1, series_order + 1)]
    composed = inf_series.compose(PSeries(geom, series_order))
    scale, taylor = extract_coordinate_data(composed, order)
    if scale != ONE:
        raise SewingUndefined("translation should preserve the scale at infinity")
    return taylor


def sew(Q1: ModuliElement, i: int, Q2: ModuliElement) -> SewingResult:
    """Glue the 0-th puncture of Q2 into the i-th positive puncture of Q1.

    Supported when both coordinates at the sewn punctures are global
    fractional-linear maps; raises otherwise. The disjoint-disc condition
    is checked exactly on moduli.
    """
    if Q1.order != Q2.order:
        raise ValueError("truncation orders must agree")
    if not (1 <= i <= Q1.arity):
        raise ValueError(f"no puncture {i} on an arity-{Q1.arity} element")
    order = Q1.order
    coord_i = Q1.coords[i - 1]
    if not coord_i.is_linear:
        raise UnsupportedSewing("sewn puncture coordinate is not linear")
    if any(a for a in Q2.inf_coord):
        raise UnsupportedSewing("second factor has a non-standard coordinate "
                                "at infinity")
    pos1 = Q1.positions
    p_i = pos1[i - 1]
    a_i = coord_i.scale
    # radius condition: the second factor's punctures, scaled into the
    # first sphere, must stay strictly inside the free disc around p_i
    q_norms = [q.norm2() for q in Q2.positions]
    max_q = max(q_norms, default=Fraction(0))
    dists = [(pos1[j] - p_i).norm2() for j in range(Q1.arity) if j != i - 1]
    if dists:
        if max_q * 1 >= a_i.norm2() * min(dists):
            raise SewingUndefined("no admissible sewing radius")
    transplanted_pos = tuple(p_i + q / a_i for q in Q2.positions)
    new_pos = pos1[:i - 1] + transplanted_pos + pos1[i:]
    if len(set(new_pos)) != len(new_pos):
        raise SewingUndefined("punctures collide after gluing")
    new_coords = []
    new_coords.extend(Q1.coords[:i - 1])
    for c in Q2.coords:
        taylor = tuple(c.taylor[k] * a_i ** (k + 1) for k in range(order))
        new_coords.append(LocalCoordinate(c.scale * a_i, taylor))
    new_coords.extend(Q1.coords[i:])
    arity = Q1.arity + Q2.arity - 1
    det = Q1.det_slot * Q2.det_slot
    if arity == 0:
        # normalize the capped sphere: translate to kill the first
        # infinity coefficient
        taylor = Q1.inf_coord
        t = taylor[0] if order >= 1 else ZERO
        if t:
            taylor = _translated_inf(taylor, t, order)
        elem = ModuliElement(0, order, (), taylor, (), det)
        return SewingResult(elem, ONE / a_i, p_i, t)
    shift = new_pos[-1]
    if shift:
        z_new = tuple(p - shift for p in new_pos[:-1])
        inf = _translated_inf(Q1.inf_coord, shift, order)
    else:
        z_new = new_pos[:-1]
        inf = Q1.inf_coord
    elem = ModuliElement(arity, order, z_new, inf, tuple(new_coords), det)
    return SewingResult(elem, ONE / a_i, p_i, shift)


def permute(Q: ModuliElement, perm: tuple[int, ...]) -> ModuliElement:
    """Reorder the positive punctures: new slot j holds old puncture
    perm[j] (one-based). Renormalizes by a translation when the zero
    puncture moves."""
    n = Q.arity
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    pos = Q.positions
    new_pos = tuple(pos[perm[j] - 1] for j in range(n))
    new_coords = tuple(Q.coords[perm[j] - 1] for j in range(n))
    shift = new_pos[-1] if n else ZERO
    z_new = tuple(p - shift for p in new_pos[:-1])
    inf = _translated_inf(Q.inf_coord, shift, Q.order)
    return ModuliElement(n, Q.order, z_new, inf, new_coords, Q.det_slot)


def compose_perms(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """The permutation acting as p-then-q under ``permute``."""
    return tuple(p[q[j] - 1] for j in range(len(p)))


# -- partial-operad axioms ----------------------------------------------------


def _slot_labels(m: int, i: int, n: int, relabel=None):
    rel = relabel or (lambda j: j)
    left = [("p", rel(j)) for j in range(1, i)]
    mid = [("q", k) for k in range(1, n + 1)]
    right = [("p", rel(j)) for j in range(i + 1, m + 1)]
    return left + mid + right


def _match_perm(target_labels, source_labels) -> tuple[int, ...]:
    index = {lab: k + 1 for k, lab in enumerate(source_labels)}
    return tuple(index[lab] for lab in target_labels)


def check_operad_axioms(sample: list[ModuliElement],
                        seed: int = 7) -> list[VerificationReport]:
    """Associativity, equivariance, and identity instances over a sample.

    Unsupported or undefined sewings are reported skipped, never failed.
    """
    rng = random.Random(seed)
    reports = []
    order = sample[0].order if sample else 8
    ident = identity_element(order)

    diffs = []
    skips = 0
    for qi, Q in enumerate(sample):
        for i in range(1, Q.arity + 1):
            try:
                got = sew(Q, i, ident).element
            except (UnsupportedSewing, SewingUndefined):
                skips += 1
                continue
            if got != Q:
                diffs.append(((qi, "right", i), "differs", ""))
        try:
            got = sew(ident, 1, Q).element
        except (UnsupportedSewing, SewingUndefined):
            skips += 1
            continue
        if got != Q:
            diffs.append(((qi, "left"), "differs", ""))
    rep = VerificationReport.from_diffs(
        "operad-identity", f"sample={len(sample)}", diffs,
        note=f"{skips} skipped" if skips else "")
    reports.append(rep)

    # associativity in the three index regimes
    diffs = []
    checked = {"low": 0, "nested": 0, "high": 0}
    skips = 0
    for Q1 in sample:
        for Q2 in sample:
            for Q3 in sample:
                j, k, l = Q1.arity, Q2.arity, Q3.arity
                for i1 in range(1, j + 1):
                    for i2 in range(1, j + k):
                        if i2 < i1:
                            regime = "low"
                        elif i2 < i1 + k:
                            regime = "nested"
                        else:
                            regime = "high"
                        try:
                            lhs = sew(sew(Q1, i1, Q2).element, i2, Q3).element
                            if regime == "low":
                                rhs = sew(sew(Q1, i2, Q3).element,
                                          l + i1 - 1, Q2).element
                            elif regime == "nested":
                                rhs = sew(Q1, i1,
                                          sew(Q2, i2 - i1 + 1, Q3).element
                                          ).element
                            else:
                                rhs = sew(sew(Q1, i2 - k + 1, Q3).element,
                                          i1, Q2).element
                        except (UnsupportedSewing, SewingUndefined):
                            skips += 1
                            continue
                        checked[regime] += 1
                        if lhs != rhs:
                            diffs.append(((regime, i1, i2), "differs", ""))
    note = ",".join(f"{k}={v}" for k, v in checked.items())
    if skips:
        note += f",skipped={skips}"
    reports.append(VerificationReport.from_diffs(
        "operad-associativity", f"sample={len(sample)}", diffs, note=note))

    # equivariance on both sides
    diffs = []
    checked_eq = 0
    skips = 0
    for Q1 in sample:
        for Q2 in sample:
            if Q1.arity < 1:
                continue
            sigma = list(range(1, Q1.arity + 1))
            rng.shuffle(sigma)
            sigma = tuple(sigma)
            for i in range(1, Q1.arity + 1):
                try:
                    lhs = sew(permute(Q1, sigma), i, Q2).element
                    # position i of the permuted element holds puncture
                    # sigma(i); sew there on the unpermuted element
                    inner = sew(Q1, sigma[i - 1], Q2).element
                except (UnsupportedSewing, SewingUndefined):
                    skips += 1
                    continue
                target = _slot_labels(Q1.arity, i, Q2.arity,
                                      relabel=lambda j: sigma[j - 1])
                source = _slot_labels(Q1.arity, sigma[i - 1], Q2.arity)
                block = _match_perm(target, source)
                rhs = permute(inner, block)
                checked_eq += 1
                if lhs != rhs:
                    diffs.append((("sigma", sigma, i), "differs", ""))
            if Q2.arity >= 1:
                tau = list(range(1, Q2.arity + 1))
                rng.shuffle(tau)
                tau = tuple(tau)
                i = 1 + (checked_eq % Q1.arity)
                try:
                    lhs = sew(Q1, i, permute(Q2, tau)).element
                    inner = sew(Q1, i, Q2).element
                except (UnsupportedSewing, SewingUndefined):
                    skips += 1
                    continue
                target = _slot_labels(Q1.arity, i, Q2.arity)
                mid = [("q", tau[k - 1]) for k in range(1, Q2.arity + 1)]
                target = target[:i - 1] + mid + target[i - 1 + Q2.arity:]
                source = _slot_labels(Q1.arity, i, Q2.arity)
                block = _match_perm(target, source)
                rhs = permute(inner, block)
                checked_eq += 1
                if lhs != rhs:
                    diffs.append((("tau", tau, i), "differs", ""))
    reports.append(VerificationReport.from_diffs(
        "operad-equivariance", f"sample={len(sample)}", diffs,
        note=f"checked={checked_eq}" + (f",skipped={skips}" if skips else "")))
    return reports


def random_supported_element(rng: random.Random, order: int,
                             max_arity: int = 3) -> ModuliElement:
    """A random element of the linear-coordinate subclass: distinct
    rational punctures and nonzero rational scales, zero flow data."""
    arity = rng.randint(1, max_arity)
    pool = [QQi(Fraction(num, den))
            for num in (-7, -5, -3, -2, 1, 2, 3, 4, 5, 8, 11)
            for den in (1, 2)]
    z = []
    for _ in range(arity - 1):
        cand = rng.choice(pool)
        while not cand or cand in z:
            cand = rng.choice(pool)
        z.append(cand)
    scales = [QQi(Fraction(rng.choice((1, 2, 3, -1, -2)),
                           rng.choice((1, 2)))) for _ in range(arity)]
    coords = tuple(LocalCoordinate(s, _pad((), order)) for s in scales)
    return ModuliElement(arity, order, tuple(z), _pad((), order), coords)


# -- evaluation ---------------------------------------------------------------


@dataclass
class NuResult:
    value: QQi
    stable: bool
    cutoff: int


def _scaled(v: GradedVector, a: QQi) -> GradedVector:
    """a^{-L(0)} v with exact Gaussian-rational entries."""
    out = {}
    for label, c in v.coeff.items():
        out[label] = QQi.promote(c) * a ** (-sum(label))
    return GradedVector(out)


def nu_state(V: HeisenbergVOA, Q: ModuliElement, vectors,
             cutoff: int) -> GradedVector:
    """The unpaired evaluation of an element on input vectors: the state
    produced at infinity, truncated at the cutoff weight."""
    if not all(not a for a in Q.inf_coord) or \
            not all(c.is_linear for c in Q.coords):
        raise DomainViolation("evaluation needs standard (linear, "
                              "zero-flow) coordinates")
    if len(vectors) != Q.arity:
        raise ValueError("need one input vector per positive puncture")
    if Q.arity == 0:
        return V.vacuum
    norms = [zz.norm2() for zz in Q.z]
    for a, b in zip(norms, norms[1:]):
        if not a > b:
            raise DomainViolation("puncture moduli must strictly decrease")
    if norms and not norms[-1] > 0:
        raise DomainViolation("punctures must avoid the origin")
    state = _scaled(vectors[-1], Q.coords[-1].scale)
    state, _ = state.clip(cutoff)
    for idx in range(Q.arity - 2, -1, -1):
        u = _scaled(vectors[idx], Q.coords[idx].scale)
        zz = Q.z[idx]
        new = GradedVector()
        for t in V.mode_range(u, state, cutoff):
            img = V.apply_mode(u, t, state, cutoff)
            if img:
                new = new + img.scale(zz ** (-t - 1))
        state = new
    return state


def _pair(vprime: GradedVector, state: GradedVector) -> QQi:
    total = QQi(0)
    for label, c in vprime.coeff.items():
        s = state.coeff.get(label)
        if s:
            total = total + QQi.promote(c) * QQi.promote(s)
    return total


def nu_evaluate(V: HeisenbergVOA, Q: ModuliElement, vectors,
                vprime: GradedVector, cutoff: int) -> NuResult:
    """Exact partial sum of the matrix element of the element's vertex-
    operator product, with a stabilization flag comparing the last two
    cutoff increments."""
    values = []
    for n in (cutoff - 2, cutoff - 1, cutoff):
        n = max(n, 0)
        values.append(_pair(vprime, nu_state(V, Q, vectors, n)))
    stable = values[0] == values[1] == values[2]
    return NuResult(values[-1], stable, cutoff)


def check_sewing_axiom(V: HeisenbergVOA, Q1: ModuliElement, i: int,
                       Q2: ModuliElement, vectors, vprime: GradedVector,
                       cutoffs: tuple[int, ...]) -> VerificationReport:
    """Compare evaluation of the sewn element against the contraction of
    the two evaluations over an increasing cutoff schedule.

    The difference at each cutoff is exact; the report records whether
    the magnitudes shrink monotonically and whether they vanish.
    """
    sewn = sew(Q1, i, Q2).element
    n2 = Q2.arity
    inner_slice = vectors[i - 1: i - 1 + n2]
    rest = list(vectors[:i - 1]) + [None] + list(vectors[i - 1 + n2:])
    series = []
    for N in cutoffs:
        lhs = _pair(vprime, nu_state(V, sewn, vectors, N))
        inner = nu_state(V, Q2, inner_slice, N)
        outer_inputs = list(rest)
        outer_inputs[i - 1] = inner
        rhs = _pair(vprime, nu_state(V, Q1, outer_inputs, N))
        series.append((N, lhs - rhs))
    mags = [d.norm2() for _, d in series]
    shrinking = True
    for a, b in zip(mags, mags[1:]):
        if a == 0 and b == 0:
            continue
        if not b < a:
            shrinking = False
    exact_zero = all(not d for _, d in series)
    diffs = [] if (exact_zero or shrinking) else \
        [(("magnitudes",), [str(m) for m in mags], "decreasing")]
    note = "exact-zero" if exact_zero else \
        ("shrinking " + ",".join(str(m) for m in mags))
    return VerificationReport.from_diffs(
        "sewing-evaluation",
        f"arity={Q1.arity}+{Q2.arity};i={i};cutoffs={','.join(map(str, cutoffs))}",
        diffs, note=note)


# -- fixture format -----------------------------------------------------------


def parse_moduli_element(text: str, name: str = "<moduli>") -> ModuliElement:
    """Parse the plain-text element format: ``arity n``, ``order M``,
    ``z: ...``, ``coord 0: A...``, ``coord i: a0 ; A...``."""
    arity = order = None
    z: list[QQi] = []
    inf: list[QQi] = []
    coords: dict[int, LocalCoordinate] = {}
    det = Fraction(1)
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("arity"):
                arity = int(line.split()[1])
            elif line.startswith("order"):
                order = int(line.split()[1])
            elif line.startswith("z:"):
                z = [QQi.parse(tok) for tok in line[2:].split()]
            elif line.startswith("det:"):
                det = Fraction(line[4:].strip())
            elif line.startswith("coord"):
                head, _, rest = line.partition(":")
                idx = int(head.split()[1])
                if idx == 0:
                    inf = [QQi.parse(tok) for tok in rest.split()]
                else:
                    a0_s, _, tail = rest.partition(";")
                    a0 = QQi.parse(a0_s.strip())
                    taylor = [QQi.parse(tok) for tok in tail.split()]
                    coords[idx] = (a0, taylor)
            else:
                raise FixtureError(f"{name}:{ln}: unrecognized line {line!r}")
        except (ValueError, IndexError) as e:
            raise FixtureError(f"{name}:{ln}: {e}")
    if arity is None or order is None:
        raise FixtureError(f"{name}: missing arity or order")
    coord_list = []
    for i in range(1, arity + 1):
        if i not in coords:
            raise FixtureError(f"{name}: missing coord {i}")
        a0, taylor = coords[i]
        coord_list.append(LocalCoordinate(a0, _pad(taylor, order)))
    try:
        return ModuliElement(arity, order, tuple(z), _pad(inf, order),
                             tuple(coord_list), det)
    except ValueError as e:
        raise FixtureError(f"{name}: {e}")


def load_moduli_element(path) -> ModuliElement:
    try:
        with open(path) as fh:
            return parse_moduli_element(fh.read(), str(path))
    except OSError as e:
        raise FixtureError(f"{path}: {e}")


def format_moduli_element(Q: ModuliElement) -> str:
    lines = [f"arity {Q.arity}", f"order {Q.order}"]
    if Q.z:
        lines.append("z: " + " ".join(repr(zz) for zz in Q.z))
    lines.append("coord 0: " + " ".join(repr(a) for a in Q.inf_coord))
    for i, c in enumerate(Q.coords, start=1):
        lines.append(f"coord {i}: {c.scale!r} ; "
                     + " ".join(repr(a) for a in c.taylor))
    if Q.det_slot != 1:
        lines.append(f"det: {Q.det_slot}")
    return "\n".join(lines) + "\n"
