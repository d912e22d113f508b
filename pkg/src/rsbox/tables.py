"""Regeneration of the published tables, and golden-file comparison."""
from __future__ import annotations

from importlib import resources
from typing import Callable

from .boolfun import anf
from .circulant import count_invertible_circulant, count_shift_invariant_bijections, orbit_profile
from .metrics import metrics_record
from .sbox import induce, inv_set
from .search import SearchConstraints, classify_essential, enumerate_liftings, nonlinear

INV_RANGE = 15

# Representatives as printed, used to pick which class member names a row.
TABLE3_REPS = (
    "x1+x3+x1*x2", "x1+x5+x1*x3", "x1+x2+x2*x3", "x2+x4+x2*x3", "x1+x5+x1*x4",
    "x1+x2+x1*x5", "x2+x5+x1*x2+x2*x3+x3*x4", "x1+x5+x1*x2+x2*x4+x3*x4",
    "x2+x1*x3+x2*x4+x1*x5+x3*x5", "x2+x1*x3+x1*x4+x2*x5+x3*x5",
    "x2+x4+x5+x1*x2+x1*x3+x1*x4+x2*x4", "x3+x5+x1*x2+x1*x3+x1*x4+x2*x4+x3*x4",
    "x1+x4+x1*x2+x1*x3+x1*x4+x2*x4+x2*x5",
    "x1+x2+x3+x4+x1*x3+x2*x3+x2*x4+x3*x4+x3*x5",
)
TABLE4_REPS = (
    "x1+x3+x1*x2", "x1+x5+x1*x3", "x1+x2+x2*x3", "x2+x4+x2*x3",
    "x3+x1*x2+x2*x4+x1*x5+x4*x5", "x1+x4+x2*x5",
)
TABLE5_REPS = (
    "x4+x1*x2+x1*x2*x3", "x4+x2*x3+x1*x2*x3", "x2+x5+x1*x2+x2*x4+x1*x2*x3",
    "x1+x4+x1*x2+x1*x5+x1*x2*x3", "x5+x1*x2+x1*x2*x4", "x3+x1*x4+x1*x2*x4",
    "x2+x3+x4+x5+x2*x3+x1*x4+x1*x2*x4", "x3+x2*x4+x1*x2*x4", "x5+x2*x4+x1*x2*x4",
    "x4+x5+x2*x4+x3*x4+x1*x2*x4", "x3+x4+x1*x4+x4*x5+x1*x2*x4", "x4+x1*x5+x1*x2*x5",
    "x4+x2*x5+x1*x2*x5", "x1+x2+x3+x4+x5+x1*x3+x2*x5+x3*x5+x1*x2*x5",
    "x1+x2*x3+x2*x3*x4", "x5+x2*x3+x2*x3*x4", "x2+x1*x3+x1*x3*x4", "x5+x1*x3+x1*x3*x4",
    "x2+x1*x4+x1*x3*x4", "x5+x1*x4+x1*x3*x4", "x5+x3*x4+x1*x3*x4",
    "x1+x3+x4+x1*x2+x1*x3+x4*x5+x1*x3*x4", "x1+x5+x1*x2+x2*x3+x1*x4+x4*x5+x1*x3*x4",
)

Row = tuple


def _fmt(rows: list[Row], header: tuple[str, ...]) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join("" if v is None else str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def table1(n_max: int = 7) -> str:
    rows = []
    for n in range(1, n_max + 1):
        profile = ",".join(f"{d}:{c}" for d, c in orbit_profile(n).items())
        rows.append((n, profile, count_shift_invariant_bijections(n)))
    return _fmt(rows, ("n", "cycles", "bijections"))


def table2(n_max: int = 15, progress: Callable | None = None) -> str:
    rows = []
    for k in (4, 5):
        ns = tuple(range(k, n_max + 1))
        if k == 4:
            total = enumerate_liftings(SearchConstraints(k, ns), classify=False, progress=progress)
        d1 = enumerate_liftings(SearchConstraints(k, ns, max_degree=1), classify=False)
        d2 = enumerate_liftings(SearchConstraints(k, ns, max_degree=2), classify=False)
        for n in ns:
            if k == 4:
                full = sum(n in r.inv for r in total)
            else:
                # every shift-invariant map on n = k bits has a k-variable rule
                full = count_shift_invariant_bijections(n) // 2 if n == k else None
            rows.append((k, n, full, sum(n in r.inv for r in d1), sum(n in r.inv for r in d2)))
    return _fmt(rows, ("k", "n", "liftings", "deg<=1", "deg<=2"))


def _canonical(text: str) -> str:
    return str(anf(text, 5).anf)


def _class_rows(classes, reps: tuple[str, ...], n: int, keep=None) -> list[Row]:
    wanted = {_canonical(s): i for i, s in enumerate(reps)}
    rows = []
    for members in classes:
        named = [r for r in members if r.anf in wanted]
        if named:
            rep = named[0]
            order = wanted[rep.anf]
        else:
            rep = min(members, key=lambda r: (len(r.generator.anf.monomials), r.generator.to_int()))
            order = len(reps) + rep.generator.to_int()
        if keep is not None and not keep(members):
            continue
        f = rep.generator
        inv = ",".join(map(str, sorted(inv_set(f, INV_RANGE))))
        m = metrics_record(induce(f, n))
        rows.append((order, (inv, rep.anf, m.nl, m.plateaued, m.du, m.bu)))
    return [r for _, r in sorted(rows)]


HEADER = ("inv15", "polynomial", "nl", "p", "du", "bu")


def _quad_terms(r) -> int:
    return sum(1 for m in r.generator.anf.monomials if bin(m).count("1") == 2)


def table3() -> str:
    reports = enumerate_liftings(SearchConstraints(5, tuple(range(7, INV_RANGE + 1)), max_degree=2))
    classes = classify_essential([r for r in nonlinear(reports) if 7 in r.inv])
    keep = lambda ms: min(map(_quad_terms, ms)) <= 5
    return _fmt(_class_rows(classes, TABLE3_REPS, 7, keep), HEADER)


def table4() -> str:
    reports = enumerate_liftings(SearchConstraints(5, (9,), quadratic_only=True))
    return _fmt(_class_rows(classify_essential(reports), TABLE4_REPS, 9), HEADER)


def table5() -> str:
    reports = enumerate_liftings(SearchConstraints(5, (7,), one_cubic_term=True))
    return _fmt(_class_rows(classify_essential(reports), TABLE5_REPS, 7), HEADER)


def oeis_a003473(n_max: int = 32) -> str:
    return "".join(f"{n}\t{count_invertible_circulant(n)}\n" for n in range(1, n_max + 1))


TABLES: dict[str, Callable[[], str]] = {
    "table1": table1,
    "table2": table2,
    "table3": table3,
    "table4": table4,
    "table5": table5,
    "a003473": oeis_a003473,
}


def golden(name: str) -> str:
    """Checked-in golden text, with '#' comment lines removed."""
    text = resources.files("rsbox").joinpath("data", f"{name}.tsv").read_text()
    return "".join(ln + "\n" for ln in text.splitlines() if not ln.startswith("#"))


def diff_lines(live: str, gold: str) -> list[str]:
    a, b = live.splitlines(), gold.splitlines()
    out = []
    for i in range(max(len(a), len(b))):
        x = a[i] if i < len(a) else "<missing>"
        y = b[i] if i < len(b) else "<missing>"
        if x != y:
            out.append(f"line {i + 1}: got {x!r}, golden {y!r}")
    return out
