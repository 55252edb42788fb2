"""Fusion-rule tensors, the Verlinde algebra, and a generic checker for
intertwining-operator data.

Fusion tensors arrive as fixture files rather than being computed from
module categories; the machinery here verifies their permutation
symmetry, builds the algebra they span, and brute-forces commutativity,
unit behavior, and associativity. Intertwiner data is checked against
lower truncation, the three-term identity, and the derivative property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .fock import GradedVector
from .reports import FixtureError, VerificationReport
from .series import Window


class SymmetryViolation(Exception):
    """Tensor fails the permutation symmetry required for the algebra."""


@dataclass(frozen=True)
class FusionTensor:
    """Nonnegative-integer tensor N^k_{ij} over a finite label set with a
    contragredient involution on labels. The first label is the algebra."""

    labels: tuple[str, ...]
    dual: tuple[tuple[str, str], ...]
    entries: tuple[tuple[tuple[str, str, str], int], ...]

    def __post_init__(self):
        d = dict(self.dual)
        for i in self.labels:
            j = d.get(i, i)
            if d.get(j, j) != i:
                raise ValueError(f"dual map is not an involution at {i}")
        for (i, j, k), n in self.entries:
            for lab in (i, j, k):
                if lab not in self.labels:
                    raise ValueError(f"unknown label {lab}")
            if n < 0:
                raise ValueError("fusion multiplicities must be nonnegative")

    @property
    def algebra_label(self) -> str:
        return self.labels[0]

    def dual_of(self, i: str) -> str:
        return dict(self.dual).get(i, i)

    def n(self, i: str, j: str, k: str) -> int:
        """N^k_{ij}, defaulting to zero for unlisted triples."""
        return dict(self.entries).get((i, j, k), 0)

    def lowered(self, i: str, j: str, k: str) -> int:
        """The fully lowered tensor N_{ijk} pairs the third slot through
        the involution."""
        return self.n(i, j, self.dual_of(k))


def parse_fusion_tensor(text: str, name: str = "<fusion>") -> FusionTensor:
    """Parse the fixture format: a ``labels:`` header, ``dual:`` pair
    lines, then one ``i j k N`` line per nonzero entry."""
    labels: tuple[str, ...] | None = None
    dual: list[tuple[str, str]] = []
    entries: list[tuple[tuple[str, str, str], int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("labels:"):
            labels = tuple(line[len("labels:"):].split())
            if not labels:
                raise FixtureError(f"{name}:{ln}: empty label list")
            continue
        if line.startswith("dual:"):
            for tok in line[len("dual:"):].split():
                pair = tok.replace("->", "→").split("→")
                if len(pair) != 2:
                    raise FixtureError(f"{name}:{ln}: malformed dual pair {tok!r}")
                dual.append((pair[0], pair[1]))
            continue
        parts = line.split()
        if len(parts) != 4:
            raise FixtureError(f"{name}:{ln}: expected 'i j k N', got {line!r}")
        i, j, k, ns = parts
        try:
            n = int(ns)
        except ValueError:
            raise FixtureError(f"{name}:{ln}: multiplicity {ns!r} is not an integer")
        entries.append(((i, j, k), n))
    if labels is None:
        raise FixtureError(f"{name}: missing 'labels:' header")
    try:
        return FusionTensor(labels, tuple(dual), tuple(entries))
    except ValueError as e:
        raise FixtureError(f"{name}: {e}")


def load_fusion_tensor(path) -> FusionTensor:
    try:
        with open(path) as fh:
            return parse_fusion_tensor(fh.read(), str(path))
    except OSError as e:
        raise FixtureError(f"{path}: {e}")


def check_s3_symmetry(T: FusionTensor) -> VerificationReport:
    """Invariance of the lowered tensor under all six slot permutations.

    Also notes whether the naive upper-index reading would have judged
    symmetry differently, since the two only agree through the involution.
    """
    diffs = []
    for i, j, k in product(T.labels, repeat=3):
        base = T.lowered(i, j, k)
        for perm in permutations((i, j, k)):
            other = T.lowered(*perm)
            if other != base:
                diffs.append(((i, j, k, "perm", perm), base, other))
    naive_sym = all(
        T.n(*perm) == T.n(i, j, k)
        for i, j, k in product(T.labels, repeat=3)
        for perm in permutations((i, j, k)))
    lowered_sym = not diffs
    note = ""
    if naive_sym != lowered_sym:
        note = "upper-index and involution readings disagree"
    return VerificationReport.from_diffs("fusion-s3-symmetry",
                                         f"labels={len(T.labels)}", diffs, note)


def check_positivity(T: FusionTensor) -> VerificationReport:
    """The algebra label must fuse with itself and act on every label."""
    V = T.algebra_label
    diffs = []
    if T.n(V, V, V) < 1:
        diffs.append((("selffusion", V), T.n(V, V, V), ">=1"))
    for i in T.labels:
        if T.n(V, i, i) < 1:
            diffs.append((("action", i), T.n(V, i, i), ">=1"))
        if T.n(i, V, i) < 1:
            diffs.append((("right-action", i), T.n(i, V, i), ">=1"))
    return VerificationReport.from_diffs("fusion-positivity",
                                         f"labels={len(T.labels)}", diffs)


@dataclass
class VerlindeAlgebra:
    """The algebra spanned by module classes with the fusion tensor as
    structure constants."""

    tensor: FusionTensor
    has_unit: bool = field(init=False)

    def __post_init__(self):
        V = self.tensor.algebra_label
        self.has_unit = all(
            self.tensor.n(V, i, j) == (1 if i == j else 0)
            and self.tensor.n(i, V, j) == (1 if i == j else 0)
            for i in self.tensor.labels for j in self.tensor.labels)

    def product(self, i: str, j: str) -> dict[str, int]:
        return {k: self.tensor.n(i, j, k) for k in self.tensor.labels
                if self.tensor.n(i, j, k)}

    def multiply(self, x: dict[str, Fraction],
                 y: dict[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, n in self.product(i, j).items():
                    s = out.get(k, Fraction(0)) + ci * cj * n
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out


def build_verlinde(T: FusionTensor) -> VerlindeAlgebra:
    rep = check_s3_symmetry(T)
    if not rep.passed:
        raise SymmetryViolation(f"{len(rep.diffs)} symmetry violations")
    return VerlindeAlgebra(T)


def check_commutativity(A: VerlindeAlgebra) -> VerificationReport:
    diffs = []
    for i, j in product(A.tensor.labels, repeat=2):
        if A.product(i, j) != A.product(j, i):
            diffs.append(((i, j), str(A.product(i, j)), str(A.product(j, i))))
    return VerificationReport.from_diffs(
        "verlinde-commutativity", f"labels={len(A.tensor.labels)}", diffs)


def check_associativity(A: VerlindeAlgebra) -> VerificationReport:
    """Brute force over all quadruples (i, j, l, m) of
    sum_k N_ij^k N_kl^m = sum_k N_jl^k N_ik^m."""
    T = A.tensor
    diffs = []
    for i, j, l, m in product(T.labels, repeat=4):
        lhs = sum(T.n(i, j, k) * T.n(k, l, m) for k in T.labels)
        rhs = sum(T.n(j, l, k) * T.n(i, k, m) for k in T.labels)
        if lhs != rhs:
            diffs.append(((i, j, l, m), lhs, rhs))
    return VerificationReport.from_diffs(
        "verlinde-associativity", f"labels={len(T.labels)}", diffs)


def check_unit(A: VerlindeAlgebra) -> VerificationReport:
    rep = VerificationReport.from_diffs(
        "verlinde-unit", f"labels={len(A.tensor.labels)}", [],
        note="two-sided unit" if A.has_unit else "no exact unit")
    return rep


# -- intertwining operators ----------------------------------------------


@dataclass
class IntertwinerData:
    """Mode maps of a candidate intertwining operator of a fixed type.

    Modes are stored at integer offsets j; the true mode index is j plus
    the declared rational shift, which must be shared by every entry.
    ``modes`` maps (w1 label, j, w2 label) to a dict of w3 labels with
    exact coefficients.
    """

    V: object                      # the acting algebra
    m1: object                     # module structure on the first slot
    m2: object                     # module structure on the second slot
    m3: object                     # module structure on the output
    shift: Fraction
    modes: dict
    true_nonzero_fn: object = None  # optional exact loss oracle

    @property
    def level(self) -> int:
        return min(self.m1.level, self.m2.level, self.m3.level)


class IntertwinerAction:
    """Adapter letting the three-term engine drive the stored mode maps."""

    def __init__(self, data: IntertwinerData):
        self.data = data
        self.level = data.m3.level

    def act(self, op: GradedVector, j: int, vec: GradedVector) -> GradedVector:
        acc: dict = {}
        for l1, c1 in op.coeff.items():
            for l2, c2 in vec.coeff.items():
                entry = self.data.modes.get((l1, j, l2))
                if not entry:
                    continue
                c = c1 * c2
                for l3, m in entry.items():
                    s = acc.get(l3, 0) + c * m
                    if s:
                        acc[l3] = s
                    else:
                        acc.pop(l3, None)
        out = GradedVector(acc)
        return out.clip(self.level)[0]

    def true_nonzero(self, op, j, vec) -> bool:
        if self.data.true_nonzero_fn is not None:
            return self.data.true_nonzero_fn(op, j, vec)
        return True  # unknown beyond the stored budget: assume loss

    def kron(self, op) -> int | None:
        return None


class _ModuleJacobiAction:
    def __init__(self, module):
        self.module = module
        self.level = module.level

    def act(self, op, n, vec):
        return self.module.act(op, n, vec, self.level)

    def true_nonzero(self, op, n, vec):
        return self.module.true_nonzero(op, n, vec)

    def kron(self, op):
        return -1 if self.module.V.is_vacuum_multiple(op) else None


def intertwiner_from_algebra(V) -> IntertwinerData:
    """The vertex operator of the algebra acting on itself, as the
    canonical intertwiner of self-type."""
    from .contragredient import VOAModule
    M = VOAModule(V)
    return _intertwiner_from_action(V, M, M, M)


def intertwiner_from_module(V, M) -> IntertwinerData:
    """The action of the algebra on a module, as the canonical intertwiner
    of module type (first slot the algebra)."""
    from .contragredient import VOAModule
    return _intertwiner_from_action(V, VOAModule(V), M, M)


def _intertwiner_from_action(V, m1, m2, m3) -> IntertwinerData:
    modes: dict = {}
    for l1 in m1.basis_upto():
        op = GradedVector.basis(l1)
        for l2 in m2.basis_upto():
            vec = GradedVector.basis(l2)
            for j in range(sum(l1) + sum(l2) - 1 - m3.level,
                           sum(l1) + sum(l2)):
                val = m3.act(op, j, vec)
                if val:
                    modes[(l1, j, l2)] = dict(val.coeff)

    def true_fn(op, j, vec):
        return m3.true_nonzero(op, j, vec)

    return IntertwinerData(V, m1, m2, m3, Fraction(0), modes, true_fn)


def shaped_jacobi_window(pw: int, qw: int, tw: int, level: int,
                         width: int) -> Window | None:
    """The largest symmetric-bottom window on which every inner mode of
    the three-term identity provably stays below the level, so nothing
    needs skipping. Returns None when the triple has no such positions."""
    a_hi = min(width, level - pw - qw)
    b_hi = min(width, level - pw - tw)
    c_hi = min(width, level - qw - tw)
    if a_hi < -width or b_hi < -width or c_hi < -width:
        return None
    return Window.of(x0=(-width, a_hi), x1=(-width, b_hi),
                     x2=(-width, c_hi))


def check_intertwiner(I: IntertwinerData, win: Window,
                      max_weight: int | None = None,
                      fail_fast: bool = False) -> list[VerificationReport]:
    """Lower truncation, derivative property, and the three-term identity
    for stored intertwiner data.

    The identity runs over all basis triples up to ``max_weight``, each on
    a window shaped so every intermediate stays below the level; this
    leaves no skipped instances, and every stored mode entry is pinned by
    some examined coefficient.
    """
    from .axioms import JacobiActions, three_term_check, _fmt_vec
    V = I.V
    cap = I.level if max_weight is None else max_weight
    width = max(win.hi(v) for v in win.variables) + I.level + 1
    reports = []

    # lower truncation: modes vanish once the offset exceeds the weight sum
    diffs = []
    for (l1, j, l2), entry in I.modes.items():
        if j >= sum(l1) + sum(l2) and any(entry.values()):
            diffs.append(((l1, j, l2), "nonzero", "zero"))
    reports.append(VerificationReport.from_diffs(
        "intertwiner-truncation", f"shift={I.shift}", diffs))
    if fail_fast and diffs:
        return reports

    # derivative: modes of the shifted operator against the raised vector
    diffs = []
    h = I.shift
    y_act = IntertwinerAction(I)
    for l1 in I.m1.basis_upto(I.m1.level - 1):
        w1 = GradedVector.basis(l1)
        dw1 = I.m1.virasoro(-1, w1)
        for l2 in I.m2.basis_upto():
            w2 = GradedVector.basis(l2)
            for j in range(-(2 * I.level + 2), sum(l1) + sum(l2) + 1):
                lhs = y_act.act(w1, j, w2).scale(-(Fraction(j) + h + 1))
                rhs = y_act.act(dw1, j + 1, w2)
                delta = lhs - rhs
                for label in sorted(delta.coeff):
                    diffs.append(((l1, l2, j, label),
                                  lhs.coeff.get(label, 0),
                                  rhs.coeff.get(label, 0)))
    reports.append(VerificationReport.from_diffs(
        "intertwiner-derivative", f"shift={I.shift}", diffs))
    if fail_fast and diffs:
        return reports

    # three-term identity on shaped windows
    acts = JacobiActions(
        out1=_ModuleJacobiAction(I.m3), in1=y_act,
        out2=y_act, in2=_ModuleJacobiAction(I.m2),
        iterate=_ModuleJacobiAction(I.m1), out3=y_act)
    fail_rep = None
    checked = 0
    done = False
    for lv in V.basis_upto(min(cap, 2)):
        v = GradedVector.basis(lv)
        for l1 in I.m1.basis_upto(cap):
            w1 = GradedVector.basis(l1)
            for l2 in I.m2.basis_upto(cap):
                w2 = GradedVector.basis(l2)
                shaped = shaped_jacobi_window(sum(lv), sum(l1), sum(l2),
                                              I.level, width)
                if shaped is None:
                    continue
                rep = three_term_check(
                    v, w1, w2, shaped, acts, "intertwiner-jacobi",
                    f"v={_fmt_vec(v)};w1={_fmt_vec(w1)};w2={_fmt_vec(w2)}")
                if rep.failed and fail_rep is None:
                    fail_rep = rep
                    if fail_fast:
                        done = True
                        break
                checked += 1
            if done:
                break
        if done:
            break
    if fail_rep is not None:
        reports.append(fail_rep)
    elif checked == 0:
        reports.append(VerificationReport.skipped(
            "intertwiner-jacobi", f"wt<=({cap})", "no in-budget window"))
    else:
        reports.append(VerificationReport.from_diffs(
            "intertwiner-jacobi", f"wt<=({cap})", [],
            note=f"{checked} instances"))
    return reports
