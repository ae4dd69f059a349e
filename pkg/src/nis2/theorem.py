"""Batch checks of the NIS classification theorem on concrete algebras."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from .forms import TheoremViolation, invariant_symmetric_forms, nis_superdimension, queer_operator
from .liesuper import SuperAlgebra, even_part, is_simple, validate
from .restricted import find_p_structure

ALLOWED = {(0, 0), (1, 0), (0, 1), (1, 1)}


@dataclass
class TheoremRow:
    name: str
    sdim: str
    status: str
    nis: str = "-"
    classification: str = "-"
    certificate: str = "-"
    even_core: str = "-"
    detail: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def violation(self) -> bool:
        return self.status == "VIOLATION"

    def to_dict(self) -> dict:
        return asdict(self)


def check_algebra(g: SuperAlgebra) -> TheoremRow:
    """Run every theorem-level assertion that applies to g.

    Not-simple inputs are skipped.  For simple g: the NIS superdimension is
    one of 0|0, 1|0, 0|1, 1|1 (components above 1 are reported when the
    algebra is not absolutely simple); a NIS forces the commutant to be all
    of g; and 1|1 forces the queer-operator certificate plus a restricted
    simple even core that carries a NIS.
    """
    t0 = time.perf_counter()
    row = TheoremRow(g.name, g.sdim, "PASS")
    try:
        rep = validate(g)
        if not rep.ok:
            row.status = "skipped: not a Lie superalgebra"
            row.detail = [a.key for a in rep.failed()] + rep.structural_errors
            return row
        if not is_simple(g):
            row.status = "skipped: not simple"
            return row
        try:
            nis = nis_superdimension(g)
        except TheoremViolation as exc:
            row.status = "VIOLATION"
            row.detail.append(str(exc))
            return row
        row.nis = nis.label
        row.classification = nis.classification
        row.detail.extend(nis.notes)
        if nis.nis_sdim not in ALLOWED:
            if nis.absolutely_simple is False:
                row.status = "PASS (field not closed)"
            else:
                row.status = "VIOLATION"
                row.detail.append(f"NIS superdimension {nis.label} outside 0|0, 1|0, 0|1, 1|1")
            return row
        if nis.nis_sdim != (0, 0) and not nis.perfect:
            row.status = "VIOLATION"
            row.detail.append("NIS present but the commutant is not the whole algebra")
            return row
        if nis.nis_sdim == (1, 1):
            space = nis.forms
            cert = queer_operator(g, space.even_scan.witness, space.odd_scan.witness)
            row.certificate = "PASS" if cert.ok else "FAIL"
            if not cert.ok:
                row.status = "VIOLATION"
                row.detail.append(cert.message)
                return row
            core = even_part(g)
            core_simple = is_simple(core).simple
            restricted = bool(find_p_structure(g))
            core_nis = invariant_symmetric_forms(core).nis_superdimension
            ok = core_simple and restricted and core_nis != (0, 0)
            row.even_core = "PASS" if ok else "FAIL"
            if not ok:
                row.status = "VIOLATION"
                row.detail.append(
                    f"even core: simple={core_simple} restricted={restricted} NIS={core_nis[0]}|{core_nis[1]}"
                )
        return row
    finally:
        row.seconds = round(time.perf_counter() - t0, 3)


def check_many(algebras: list[SuperAlgebra]) -> list[TheoremRow]:
    rows = [check_algebra(g) for g in algebras]
    return sorted(rows, key=lambda r: r.name)


def format_table(rows: list[TheoremRow]) -> str:
    head = f"{'algebra':<16} {'sdim':<7} {'NIS':<5} {'certificate':<11} {'even core':<9} status"
    lines = [head, "-" * len(head)]
    for r in rows:
        line = f"{r.name:<16} {r.sdim:<7} {r.nis:<5} {r.certificate:<11} {r.even_core:<9} {r.status}"
        if r.detail and (r.violation or r.status.startswith("PASS (")):
            line += "  [" + "; ".join(r.detail) + "]"
        lines.append(line)
    n_viol = sum(r.violation for r in rows)
    lines.append(f"{len(rows)} algebras, {n_viol} violations")
    return "\n".join(lines)
