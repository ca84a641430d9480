"""Shared machinery for the rule-based machines.

Every model is a catalog of guarded rules over an immutable
`MachineState`.  `enabled` lists every rule instance that may fire
(nondeterministic choices appear as separate instances), `apply` fires
one atomically and returns the successor state.  The explorer drives
these two methods and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import isa
from ..litmus import BoundTest, Outcome


@dataclass(frozen=True, slots=True)
class RuleInstance:
    """One enabled rule firing: rule id, acting processor, and the
    nondeterministic choice payload (ib entry index, store address, ...)."""

    rule: str
    proc: int
    payload: tuple = ()


@dataclass(frozen=True, slots=True)
class MachineState:
    """Monolithic memory plus one ProcState per thread.

    `gts` is the global memory-write clock (timestamped machine only);
    `next_tag` feeds store-tag allocation (tagged machine only).  Both
    stay 0 elsewhere.
    """

    m: tuple
    procs: tuple
    gts: int = 0
    next_tag: int = 0


def mem_get(m: tuple, a: int, default):
    for addr, value in m:
        if addr == a:
            return value
    return default


def mem_set(m: tuple, a: int, value) -> tuple:
    out = []
    placed = False
    for addr, old in m:
        if addr == a:
            out.append((addr, value))
            placed = True
        else:
            out.append((addr, old))
    if not placed:
        out.append((a, value))
        out.sort(key=lambda kv: kv[0])
    return tuple(out)


class BaseModel:
    model_id = ""

    def __init__(self, bound: BoundTest):
        self.bound = bound
        self.programs = tuple(th.instrs for th in bound.test.threads)
        self.thread_names = tuple(th.name for th in bound.test.threads)
        self.nprocs = len(self.programs)
        self.addr_map = bound.amap()
        self.locations = tuple(sorted(self.addr_map))
        self._addr_names = {a: n for n, a in self.addr_map.items()}
        self._proc_of = {name: i for i, name in enumerate(self.thread_names)}
        # (proc index, thread name, register) for each observed register
        self._observed = tuple((self._proc_of[t], t, r) for t, r in bound.observed)

    # -- state construction ------------------------------------------------

    def _initial_cell(self, value: int):
        return value

    def _initial_memory(self) -> tuple:
        values = {name: 0 for name in self.locations}
        values.update(dict(self.bound.test.init))
        return tuple(sorted((self.addr_map[name], self._initial_cell(value))
                            for name, value in values.items()))

    def initial_state(self) -> MachineState:
        procs = tuple(isa.ProcState() for _ in range(self.nprocs))
        return MachineState(self._initial_memory(), procs)

    # -- decode ------------------------------------------------------------

    def decode_at(self, state: MachineState, i: int):
        return isa.decode(self.programs[i], state.procs[i], self.addr_map)

    # -- termination and outcomes -------------------------------------------

    def is_terminal(self, state: MachineState) -> bool:
        """All threads decode Halt and every store buffer has drained."""
        if any(proc.sb for proc in state.procs):
            return False
        return all(isinstance(self.decode_at(state, i), isa.Halt)
                   for i in range(self.nprocs))

    def reg_value(self, state: MachineState, i: int, name: str) -> int:
        return isa.reg_get(state.procs[i].regs, name, 0)

    def mem_value(self, state: MachineState, name: str) -> int:
        return mem_get(state.m, self.addr_map[name], 0)

    def outcome(self, state: MachineState) -> Outcome:
        regs = tuple(((t, r), self.reg_value(state, i, r)) for i, t, r in self._observed)
        mem = tuple((name, self.mem_value(state, name)) for name in self.locations)
        return Outcome(regs, mem)

    # -- exploration hooks ---------------------------------------------------

    def canonical_key(self, state: MachineState):
        """Dedup fingerprint; states compare equal iff they behave alike."""
        return state

    def check_invariants(self, state: MachineState) -> None:
        """Raise AssertionError if a structural invariant is broken."""

    def enabled(self, state: MachineState) -> list[RuleInstance]:
        raise NotImplementedError

    def apply(self, state: MachineState, rule: RuleInstance) -> MachineState:
        raise NotImplementedError

    # -- presentation --------------------------------------------------------

    def addr_name(self, a: int) -> str:
        return self._addr_names.get(a, str(a))

    def describe_rule(self, rule: RuleInstance) -> str:
        text = f"{self.thread_names[rule.proc]}: {rule.rule}"
        if rule.payload:
            detail = self._describe_payload(rule)
            if detail:
                text += f" ({detail})"
        return text

    def _describe_payload(self, rule: RuleInstance) -> str:
        return ", ".join(str(p) for p in rule.payload)
