"""The membership-query oracle and its query accounting.

The oracle is the only channel through which a solver may observe agent
preferences.  Every call is counted -- there is no transparent caching, so
query totals reflect oracle calls exactly.  Simulated mode answers from a
hidden :class:`~unanimity.core.Instance`; interactive mode prompts a human
on stdin and shares the same ledger.
"""

from __future__ import annotations

import csv
import enum
import sys
from dataclasses import dataclass, field
from typing import IO, Optional

from unanimity.core import Instance, Lottery, expected_utility, format_rational


class QueryCategory(enum.Enum):
    """Why a query was issued; totals are also tracked per category."""

    PURE_VERTEX = "PureVertex"
    THRESHOLD_SEARCH = "ThresholdSearch"
    VERIFICATION = "Verification"
    ADVICE_CHECK = "AdviceCheck"


@dataclass
class QueryLedger:
    """Running counters for oracle calls, with an optional bounded trace."""

    total: int = 0
    per_agent: dict[int, int] = field(default_factory=dict)
    per_category: dict[QueryCategory, int] = field(default_factory=dict)
    trace: Optional[list[tuple[int, QueryCategory, Lottery, bool]]] = None
    trace_cap: int = 10_000

    def record(self, agent: int, cat: QueryCategory, x: Lottery, answer: bool) -> None:
        self.total += 1
        self.per_agent[agent] = self.per_agent.get(agent, 0) + 1
        self.per_category[cat] = self.per_category.get(cat, 0) + 1
        if self.trace is not None and len(self.trace) < self.trace_cap:
            self.trace.append((agent, cat, x, answer))

    def copy(self) -> "QueryLedger":
        return QueryLedger(
            total=self.total,
            per_agent=dict(self.per_agent),
            per_category=dict(self.per_category),
            trace=None if self.trace is None else list(self.trace),
            trace_cap=self.trace_cap,
        )

    def count(self, cat: QueryCategory) -> int:
        return self.per_category.get(cat, 0)

    def check(self) -> None:
        """Assert the internal consistency invariant."""
        assert self.total == sum(self.per_agent.values())
        assert self.total == sum(self.per_category.values())

    def write_trace_csv(self, fh: IO[str]) -> None:
        if self.trace is None:
            raise ValueError("trace capture was not enabled")
        writer = csv.writer(fh)
        writer.writerow(["seq", "agent", "category", "lottery", "answer"])
        for seq, (agent, cat, x, answer) in enumerate(self.trace, start=1):
            rendered = ";".join(format_rational(p) for p in x.probs)
            writer.writerow([seq, agent, cat.value, rendered, answer])


class Oracle:
    """Counting accept/reject oracle over a hidden instance.

    One oracle is owned by exactly one solver run.  The hidden instance is
    deliberately not part of the solver-facing API; solvers receive only
    ``n``, ``m``, ``epsilon``, and yes/no answers.
    """

    def __init__(
        self,
        hidden: Instance,
        *,
        interactive: bool = False,
        capture_trace: bool = False,
        trace_cap: int = 10_000,
        prompt_out: IO[str] = sys.stdout,
        prompt_in: IO[str] = sys.stdin,
    ) -> None:
        self._hidden = hidden
        self.interactive = interactive
        self.ledger = QueryLedger(
            trace=[] if capture_trace else None, trace_cap=trace_cap
        )
        self._prompt_out = prompt_out
        self._prompt_in = prompt_in

    @property
    def n(self) -> int:
        return self._hidden.n

    @property
    def m(self) -> int:
        return self._hidden.m

    @property
    def epsilon(self):
        return self._hidden.epsilon

    def query(self, i: int, x: Lottery, cat: QueryCategory) -> bool:
        """Ask agent ``i`` (1-based) whether it accepts lottery ``x``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"agent index {i} out of range 1..{self.n}")
        if x.m != self.m:
            raise ValueError(f"lottery has {x.m} coordinates, expected {self.m}")
        if self.interactive:
            answer = self._ask_human(i, x)
        else:
            agent = self._hidden.agents[i - 1]
            answer = expected_utility(agent, x) >= agent.threshold
        self.ledger.record(i, cat, x, answer)
        return answer

    def snapshot_ledger(self) -> QueryLedger:
        return self.ledger.copy()

    def _ask_human(self, i: int, x: Lottery) -> bool:
        parts = []
        for j, p in enumerate(x.probs, start=1):
            pct = float(p) * 100.0
            parts.append(f"s{j}: {format_rational(p)} ({pct:.1f}%)")
        self._prompt_out.write(
            f"Agent {i}: do you accept the lottery [{', '.join(parts)}]? [y/n] "
        )
        self._prompt_out.flush()
        while True:
            line = self._prompt_in.readline()
            if not line:
                raise EOFError("interactive oracle: stdin closed")
            token = line.strip().lower()
            if token in ("y", "yes", "true", "1"):
                return True
            if token in ("n", "no", "false", "0"):
                return False
            self._prompt_out.write("please answer y or n: ")
            self._prompt_out.flush()
