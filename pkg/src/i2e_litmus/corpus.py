"""The embedded litmus corpus.

Each entry carries the test source plus, per model, whether its
final-state condition is reachable (satisfiable by some terminal
outcome).  The `check allowed:`/`check forbidden:` line inside the
source states the headline claim for the test's `model:` hint; the
per-model table is what `--corpus` runs are judged against.

Several tests store an address *as data* (``St b a``) and then compare
a register against that address in the condition.  Their init sections
deliberately list a harmless location first so the interesting address
does not bind to base 0, which the initial memory value would alias.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .litmus import LitmusTest, parse


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    text: str
    expected: dict[str, bool]  # model id -> condition satisfiable
    test: LitmusTest

    def expected_for(self, model_id: str):
        return self.expected.get(model_id)


def _entry(name: str, expected: dict[str, bool], text: str) -> CorpusEntry:
    text = text.strip() + "\n"
    test = parse(text)
    assert test.name == name
    return CorpusEntry(name, text, expected, test)


def _expect(sc=False, tso=False, pso=False, wmm=False, wmm_d=False, wmm_s=False):
    return {"sc": sc, "tso": tso, "pso": pso,
            "wmm": wmm, "wmm-d": wmm_d, "wmm-s": wmm_s}


_ENTRIES = [
    # -- mutual exclusion --------------------------------------------------
    _entry("dekker", _expect(), """
i2e-litmus v1
name: dekker
model: wmm
init:
  a = 0
  b = 0
thread P1:
  St a 1
  Commit
  Reconcile
  r1 = Ld b
thread P2:
  St b 1
  Commit
  Reconcile
  r2 = Ld a
check forbidden: r1 = 0 & r2 = 0
"""),
    _entry("dekker-nofence",
           _expect(tso=True, pso=True, wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: dekker-nofence
init:
  a = 0
  b = 0
thread P1:
  St a 1
  r1 = Ld b
thread P2:
  St b 1
  r2 = Ld a
check forbidden: r1 = 0 & r2 = 0
"""),
    _entry("dekker-no-commit-p1",
           _expect(tso=True, pso=True, wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: dekker-no-commit-p1
model: wmm
init:
  a = 0
  b = 0
thread P1:
  St a 1
  Reconcile
  r1 = Ld b
thread P2:
  St b 1
  Commit
  Reconcile
  r2 = Ld a
check allowed: r1 = 0 & r2 = 0
"""),
    _entry("dekker-no-reconcile-p1",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: dekker-no-reconcile-p1
model: wmm
init:
  a = 0
  b = 0
thread P1:
  St a 1
  Commit
  r1 = Ld b
thread P2:
  St b 1
  Commit
  Reconcile
  r2 = Ld a
check allowed: r1 = 0 & r2 = 0
"""),
    _entry("dekker-no-commit-p2",
           _expect(tso=True, pso=True, wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: dekker-no-commit-p2
model: wmm
init:
  a = 0
  b = 0
thread P1:
  St a 1
  Commit
  Reconcile
  r1 = Ld b
thread P2:
  St b 1
  Reconcile
  r2 = Ld a
check allowed: r1 = 0 & r2 = 0
"""),
    _entry("dekker-no-reconcile-p2",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: dekker-no-reconcile-p2
model: wmm
init:
  a = 0
  b = 0
thread P1:
  St a 1
  Commit
  Reconcile
  r1 = Ld b
thread P2:
  St b 1
  Commit
  r2 = Ld a
check allowed: r1 = 0 & r2 = 0
"""),
    # -- message passing ---------------------------------------------------
    _entry("mp", _expect(), """
i2e-litmus v1
name: mp
model: wmm
init:
  a = 0
  f = 0
thread P1:
  St a 42
  Commit
  St f 1
thread P2:
  r1 = Ld f
  Reconcile
  r2 = Ld a
check forbidden: r1 = 1 & r2 = 0
"""),
    _entry("mp-no-commit",
           _expect(pso=True, wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: mp-no-commit
model: wmm
init:
  a = 0
  f = 0
thread P1:
  St a 42
  St f 1
thread P2:
  r1 = Ld f
  Reconcile
  r2 = Ld a
check allowed: r1 = 1 & r2 = 0
"""),
    _entry("mp-no-reconcile",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: mp-no-reconcile
model: wmm
init:
  a = 0
  f = 0
thread P1:
  St a 42
  Commit
  St f 1
thread P2:
  r1 = Ld f
  r2 = Ld a
check allowed: r1 = 1 & r2 = 0
"""),
    _entry("mp-nofence",
           _expect(pso=True, wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: mp-nofence
init:
  a = 0
  f = 0
thread P1:
  St a 42
  St f 1
thread P2:
  r1 = Ld f
  r2 = Ld a
check forbidden: r1 = 1 & r2 = 0
"""),
    # -- coherence ----------------------------------------------------------
    _entry("corr", _expect(), """
i2e-litmus v1
name: corr
model: wmm
init:
  a = 0
thread P1:
  r1 = Ld a
  r2 = Ld a
thread P2:
  St a 1
check forbidden: r1 = 1 & r2 = 0
"""),
    _entry("thin-air", _expect(), """
i2e-litmus v1
name: thin-air
model: wmm
init:
  a = 0
  b = 0
thread P1:
  r1 = Ld a
  St b r1
thread P2:
  r2 = Ld b
  St a r2
check forbidden: r1 = 42 & r2 = 42
"""),
    # -- speculation -------------------------------------------------------
    _entry("mem-dep-prediction",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: mem-dep-prediction
model: wmm
init:
  a = 0
  b = 0
  c = 0
thread P1:
  St a 1
  Commit
  St b 1
thread P2:
  r1 = Ld b
  St (r1 + c - 1) 1
  r2 = Ld a
check allowed: r1 = 1 & r2 = 0
"""),
    _entry("load-value-prediction",
           _expect(wmm=True, wmm_s=True), """
i2e-litmus v1
name: load-value-prediction
model: wmm
init:
  b = 0
  a = 0
thread P1:
  St a 1
  Commit
  St b a
thread P2:
  r1 = Ld b
  r2 = Ld r1
check allowed: r1 = a & r2 = 0
"""),
    _entry("transitive-dep",
           _expect(wmm=True, wmm_s=True), """
i2e-litmus v1
name: transitive-dep
model: wmm-d
init:
  b = 0
  c = 0
  a = 0
thread P1:
  St a 1
  Commit
  St b a
thread P2:
  r1 = Ld b
  St c r1
  r2 = Ld c
  r3 = Ld r2
check forbidden: r1 = a & r2 = a & r3 = 0
"""),
    _entry("transitive-dep-mod",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: transitive-dep-mod
model: wmm-d
init:
  b = 0
  c = 0
  a = 0
thread P1:
  St a 1
  Commit
  St b a
thread P2:
  r1 = Ld b
  St c a
  Commit
  r2 = Ld c
  r3 = Ld r2
check allowed: r1 = a & r2 = a & r3 = 0
"""),
    _entry("rsw",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: rsw
model: wmm-d
init:
  a = 0
  b = 0
  c = 0
thread P1:
  St a 1
  Commit
  St b 1
thread P2:
  r1 = Ld b
  r2 = r1 + c - 1
  r3 = Ld r2
  r4 = Ld c
  r5 = r4 + a
  r6 = Ld r5
check allowed: r1 = 1 & r2 = c & r3 = 0 & r4 = 0 & r5 = a & r6 = 0
"""),
    _entry("rmo-speculation",
           _expect(wmm=True, wmm_d=True, wmm_s=True), """
i2e-litmus v1
name: rmo-speculation
model: wmm-d
init:
  a = 0
  b = 0
  c = 0
thread P1:
  St a 1
  Commit
  St b 1
thread P2:
  r1 = Ld b
  r5 = r1 - 1
  bnez r5 out
  St c 1
  r2 = Ld c
  r3 = a + r2 - 1
  r4 = Ld r3
  out:
check allowed: r1 = 1 & r2 = 1 & r3 = a & r4 = 0
"""),
    # -- store atomicity ----------------------------------------------------
    _entry("wwc", _expect(wmm_s=True), """
i2e-litmus v1
name: wwc
model: wmm-s
init:
  a = 0
  b = 0
thread P1:
  St a 2
thread P2:
  r1 = Ld a
  St b (r1 - 1)
thread P3:
  r2 = Ld b
  St a r2
check allowed: r1 = 2 & r2 = 1 & m[a] = 2
"""),
    _entry("wwc-commit", _expect(), """
i2e-litmus v1
name: wwc-commit
model: wmm-s
init:
  a = 0
  b = 0
thread P1:
  St a 2
thread P2:
  r1 = Ld a
  Commit
  St b (r1 - 1)
thread P3:
  r2 = Ld b
  St a r2
check forbidden: r1 = 2 & r2 = 1 & m[a] = 2
"""),
    _entry("iriw", _expect(wmm_s=True), """
i2e-litmus v1
name: iriw
model: wmm-s
init:
  a = 0
  b = 0
thread P1:
  St a 1
thread P2:
  St b 1
thread P3:
  r1 = Ld a
  Reconcile
  r2 = Ld b
thread P4:
  r3 = Ld b
  Reconcile
  r4 = Ld a
check allowed: r1 = 1 & r2 = 0 & r3 = 1 & r4 = 0
"""),
    _entry("iriw-commit", _expect(), """
i2e-litmus v1
name: iriw-commit
model: wmm-s
init:
  a = 0
  b = 0
thread P1:
  St a 1
thread P2:
  St b 1
thread P3:
  r1 = Ld a
  Commit
  Reconcile
  r2 = Ld b
thread P4:
  r3 = Ld b
  Commit
  Reconcile
  r4 = Ld a
check forbidden: r1 = 1 & r2 = 0 & r3 = 1 & r4 = 0
"""),
]

_BY_NAME = {entry.name: entry for entry in _ENTRIES}
assert len(_BY_NAME) == len(_ENTRIES)


def load_corpus() -> list[CorpusEntry]:
    """Every embedded test, with its per-model expectations."""
    return list(_ENTRIES)


def corpus_test(name: str) -> CorpusEntry:
    return _BY_NAME[name]


def corpus_names() -> list[str]:
    return [entry.name for entry in _ENTRIES]


def write_corpus_dir(path) -> list[Path]:
    """Export each embedded test as an individual .litmus file."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in _ENTRIES:
        target = root / f"{entry.name}.litmus"
        target.write_text(entry.text, encoding="utf-8")
        written.append(target)
    return written
