"""Exact feasibility over learned constraints: Select, witnesses, brute force.

Constraints have the normalized form <c, x> >= 1 over the probability
simplex.  ``select`` returns the lexicographically maximum feasible lottery
(or Infeasible), ``helly_witness`` shrinks an infeasible set to a minimal
infeasible subset of at most m owners, and ``feasible_full`` answers the
same question directly from a known instance without any oracle queries.

The LP engine is a small two-phase simplex over ``fractions.Fraction``
with Bland's least-index anti-cycling rule; problem sizes here are tiny
(m coordinates plus one slack per learned agent), so clarity wins over
sparse-matrix machinery.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from unanimity.core import AgentSpec, Instance, Lottery

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class ConstraintSet:
    """Halfspace rows <c, x> >= 1 over the m-simplex, one row per owner."""

    m: int
    rows: tuple[tuple[int, tuple[Fraction, ...]], ...]

    def __init__(self, m: int, rows: Sequence[tuple[int, Sequence]]) -> None:
        if m < 1:
            raise ValueError("need at least one alternative")
        packed = []
        seen: set[int] = set()
        for owner, coeffs in rows:
            coeffs = tuple(Fraction(c) for c in coeffs)
            if len(coeffs) != m:
                raise ValueError(f"row for agent {owner} has {len(coeffs)} coefficients, expected {m}")
            if owner in seen:
                raise ValueError(f"agent {owner} owns more than one row")
            if all(c == 0 for c in coeffs):
                # <0, x> >= 1 is RejectAll in disguise; solvers must surface
                # that as a Null outcome before ever building an LP.
                raise ValueError(f"agent {owner}: all-zero constraint row")
            seen.add(owner)
            packed.append((owner, coeffs))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "rows", tuple(packed))

    def owners(self) -> tuple[int, ...]:
        return tuple(owner for owner, _ in self.rows)

    def restrict(self, owners) -> "ConstraintSet":
        keep = set(owners)
        return ConstraintSet(self.m, [row for row in self.rows if row[0] in keep])


class SelectKind(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class SelectResult:
    """Either the unique lex-max feasible lottery, or Infeasible."""

    kind: SelectKind
    lottery: Optional[Lottery] = None

    @property
    def is_feasible(self) -> bool:
        return self.kind is SelectKind.FEASIBLE

    @staticmethod
    def feasible(x: Lottery) -> "SelectResult":
        return SelectResult(SelectKind.FEASIBLE, x)

    @staticmethod
    def infeasible() -> "SelectResult":
        return SelectResult(SelectKind.INFEASIBLE)


@dataclass(frozen=True)
class HellyWitness:
    """A minimal set of agents whose rows are jointly infeasible; size <= m."""

    agents: frozenset[int]


# --- exact two-phase simplex -------------------------------------------------


def _pivot(rows, obj, basis, r, c) -> None:
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    for idx in range(len(rows)):
        if idx != r and rows[idx][c] != 0:
            f = rows[idx][c]
            rows[idx] = [a - f * b for a, b in zip(rows[idx], rows[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, rows[r])]
    basis[r] = c


def _simplex_max(rows, obj, basis) -> bool:
    """Run pivots to optimality; False means unbounded.  Bland's rule."""
    ncols = len(obj) - 1
    while True:
        enter = next((j for j in range(ncols) if obj[j] > 0), None)
        if enter is None:
            return True
        leave = None
        best = None
        for r in range(len(rows)):
            coef = rows[r][enter]
            if coef > 0:
                ratio = rows[r][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            return False
        _pivot(rows, obj, basis, leave, enter)


def _solve_lp_max(objective, A, b):
    """Maximize <objective, x> subject to A x = b, x >= 0, exactly.

    Returns (feasible, x) where x attains the maximum.  Unboundedness is a
    caller bug here (all our feasible regions sit inside the simplex).
    """
    nvars = len(objective)
    nrows = len(A)
    rows = []
    for arow, rhs in zip(A, b):
        row = [Fraction(v) for v in arow] + [Fraction(rhs)]
        if row[-1] < 0:
            row = [-v for v in row]
        rows.append(row)

    # Phase 1: artificial basis, drive the artificials to zero.
    for r in range(nrows):
        rows[r] = rows[r][:-1] + [ONE if k == r else ZERO for k in range(nrows)] + [rows[r][-1]]
    basis = [nvars + r for r in range(nrows)]
    obj = [ZERO] * nvars + [-ONE] * nrows + [ZERO]
    for r in range(nrows):
        obj = [a + v for a, v in zip(obj, rows[r])]
    _simplex_max(rows, obj, basis)
    if any(basis[r] >= nvars and rows[r][-1] != 0 for r in range(nrows)):
        return False, None

    # Evict zero-valued artificials from the basis; drop redundant rows.
    keep = []
    for r in range(nrows):
        if basis[r] >= nvars:
            enter = next((j for j in range(nvars) if rows[r][j] != 0), None)
            if enter is None:
                continue
            _pivot(rows, obj, basis, r, enter)
        keep.append(r)
    rows = [rows[r][:nvars] + [rows[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]

    # Phase 2: the real objective over the feasible basis.
    obj = [Fraction(v) for v in objective] + [ZERO]
    for r, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [a - f * v for a, v in zip(obj, rows[r])]
    if not _simplex_max(rows, obj, basis):
        raise ArithmeticError("objective unbounded on a subset of the simplex")
    x = [ZERO] * nvars
    for r, bcol in enumerate(basis):
        x[bcol] = rows[r][-1]
    return True, x


# --- public operations -------------------------------------------------------


def _standard_form(C: ConstraintSet):
    """Equality embedding: m coordinates plus one surplus slack per row."""
    m, k = C.m, len(C.rows)
    nvars = m + k
    A = [[ONE] * m + [ZERO] * k]
    b = [ONE]
    for idx, (_, coeffs) in enumerate(C.rows):
        row = list(coeffs) + [ZERO] * k
        row[m + idx] = -ONE
        A.append(row)
        b.append(ONE)
    return nvars, A, b


def select(C: ConstraintSet) -> SelectResult:
    """Lexicographically maximum lottery satisfying every row, or Infeasible.

    Solves m exact LP phases: maximize x_1, pin it as an equality, then
    maximize x_2, and so on.  Issues zero oracle queries.
    """
    m = C.m
    nvars, A, b = _standard_form(C)
    pinned: list[Fraction] = []
    for j in range(m):
        objective = [ZERO] * nvars
        objective[j] = ONE
        feasible, x = _solve_lp_max(objective, A, b)
        if not feasible:
            return SelectResult.infeasible()
        pinned.append(x[j])
        row = [ZERO] * nvars
        row[j] = ONE
        A.append(row)
        b.append(x[j])
    return SelectResult.feasible(Lottery(pinned))


def helly_witness(C: ConstraintSet) -> HellyWitness:
    """Shrink an infeasible constraint set to a minimal infeasible owner set.

    Deletion filter in ascending owner order: drop each row and keep it
    dropped iff the remainder is still infeasible.  The result is minimal,
    hence of size at most m.
    """
    if select(C).is_feasible:
        raise ValueError("helly_witness requires an infeasible constraint set")
    kept = sorted(C.owners())
    for owner in sorted(C.owners()):
        trial = [o for o in kept if o != owner]
        if not select(C.restrict(trial)).is_feasible:
            kept = trial
    assert len(kept) <= C.m
    return HellyWitness(agents=frozenset(kept))


def normalized_row(agent: AgentSpec) -> Optional[tuple[Fraction, ...]]:
    """The agent's halfspace as c_j = (u_j - u_r)/(tau - u_r), r = first
    rejected vertex; None when the agent accepts every pure lottery."""
    reject = [j for j, u in enumerate(agent.utilities) if u < agent.threshold]
    if not reject:
        return None
    r = reject[0]
    u_r = agent.utilities[r]
    return tuple((u - u_r) / (agent.threshold - u_r) for u in agent.utilities)


def feasible_full(inst: Instance) -> SelectResult:
    """Zero-query ground truth: decide the instance from its hidden data.

    Skips agents that accept everything, short-circuits Infeasible on an
    agent that rejects every pure lottery, and otherwise runs select over
    the normalized rows.
    """
    rows = []
    for idx, agent in enumerate(inst.agents, start=1):
        if max(agent.utilities) < agent.threshold:
            return SelectResult.infeasible()
        row = normalized_row(agent)
        if row is not None:
            rows.append((idx, row))
    return select(ConstraintSet(inst.m, rows))
