"""Fault-injection registry for harness self-tests.

The verify sweep must detect its own corruption: flipping the gap
comparison or shaving one off the bound table has to turn the standard
sweep red.  Faults are process-global and explicit; nothing here is used
in normal operation.
"""

KNOWN = ("gap-flip", "bound-off-by-one")

active: set = set()


def inject(name: str):
    if name not in KNOWN:
        raise ValueError(f"unknown fault {name!r}; known: {KNOWN}")
    active.add(name)


def clear():
    active.clear()
