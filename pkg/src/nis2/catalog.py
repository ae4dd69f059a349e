"""Named algebras over F_2 used by the CLI and the theorem checker."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

from . import build
from .liesuper import SuperAlgebra, abelian, from_entries


@dataclass(frozen=True)
class Entry:
    name: str
    description: str
    builder: Callable[[], SuperAlgebra]
    lie: bool = True


def odd_square_counterexample() -> SuperAlgebra:
    """A 2|3 superalgebra that satisfies [x^2,x]=0 but not [x^2,y]=[x,[x,y]] over F_2.

    Basis A, B even and X, Y, Z odd; [A,Y]=Z, [B,X]=Z, X^2=A, Y^2=B.
    """
    return from_entries(
        2,
        2,
        3,
        [(0, 3, 4, 1), (1, 2, 4, 1)],
        [(2, 0, 1), (3, 1, 1)],
        labels=["A", "B", "X", "Y", "Z"],
        name="example-3-2-1",
    )


def sl3_extension() -> SuperAlgebra:
    g, _ = build.scalar_extension(build.sl3(), [1, 1, 1], name="sl3-ext")
    return g


def _entries() -> list[Entry]:
    F = build.Format.standard
    return [
        Entry("abelian(2|1)", "abelian superalgebra, zero squaring", lambda: abelian(2, 1, 2)),
        Entry("example-3-2-1", "superalgebra failing the odd squaring identity", odd_square_counterexample, lie=False),
        Entry("gl(1|1)", "general linear superalgebra", lambda: build.gl(F(1, 1))),
        Entry("gl(2|1)", "general linear superalgebra", lambda: build.gl(F(2, 1))),
        Entry("psl(2|2)", "sl(2|2) modulo its center", lambda: build.psl(F(2, 2))),
        Entry("psl(4)", "sl(4) modulo the scalars", lambda: build.psl(F(4, 0))),
        Entry("psq(2)", "sq(2) modulo scalars", lambda: build.psq(2)),
        Entry("psq(3)", "sq(3) modulo scalars", lambda: build.psq(3)),
        Entry("q(2)", "queer superalgebra", lambda: build.queer_q(2)),
        Entry("qof(sl3)", "queerification of sl(3)", lambda: build.queerify(build.sl3()).renamed("qof(sl3)")),
        Entry("qof(psl4)", "queerification of psl(4)", lambda: build.queerify(build.psl(F(4, 0))).renamed("qof(psl4)")),
        Entry("sesq(2)", "queertraceless and halftraceless q(2)", lambda: build.s_e_sq(2)),
        Entry("sl(2)", "sl(2); h is central over F_2", build.sl2),
        Entry("sl(2|1)", "special linear superalgebra", lambda: build.sl(F(2, 1))),
        Entry("sl(3)", "sl(3) in the Chevalley basis", build.sl3),
        Entry("sl3-ext", "sl(3) over F_4 = F_2[x]/(x^2+x+1), as an F_2-algebra", sl3_extension),
        Entry("sq(2)", "queertraceless q(2)", lambda: build.sq(2)),
    ]


CATALOG: dict[str, Entry] = {e.name: e for e in _entries()}


def names() -> list[str]:
    return sorted(CATALOG)


@functools.lru_cache(maxsize=None)
def get(name: str) -> SuperAlgebra:
    """Build (once) and return the named algebra; the result is read-only."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(names())}") from None
    g = entry.builder()
    if g.name != name:
        g = g.renamed(name)
    assert not g.bracket.flags.writeable
    return g
