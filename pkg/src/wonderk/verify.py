"""Named verification suites driving the invariants of every module.

Each suite returns a report dictionary with one entry per check; a check
that fails carries its counterexample data.  Suites accept an optional
cooperative deadline so long runs can stop with partial results.
"""

from __future__ import annotations

import random
import time

from .equivariant import (
    PiecewiseClass,
    basis_class,
    lambda_poly,
    membership_check,
    multiply_wonderful,
    product_formula,
    rank_generators,
    wonderful_decompose,
)
from .errors import TimeoutExceeded, UnknownSuite
from .fantoric import (
    SRElement,
    c_tau_decompose,
    chamber_fan,
    localization_check,
    restrict_to_maximal_cone,
    sr_normal_form,
    subdivided_positive_fan,
)
from .laurent import LaurentPoly, embed_block, is_invariant
from .ordinary import kx_basis_product, pushdown
from .rootweyl import RootSystem, subset_indices, weyl_group, word_str
from .steinberg import steinberg_basis, verify_basis_identities


class Deadline:
    """Cooperative timeout; poll() raises once the budget is exhausted."""

    def __init__(self, seconds=None):
        self.seconds = seconds
        self.start = time.monotonic()
        self.partial = None

    def poll(self):
        if self.seconds is not None and time.monotonic() - self.start > self.seconds:
            raise TimeoutExceeded(
                f"deadline of {self.seconds}s exhausted", partial=self.partial
            )


def _report(name, checks):
    passed = sum(1 for c in checks if c["ok"])
    return {
        "name": name,
        "checks": checks,
        "passed": passed,
        "failed": len(checks) - passed,
        "ok": passed == len(checks),
    }


def _orbit_sum(rs, grp, lam):
    orbit = {tuple(lam)}
    frontier = [tuple(lam)]
    while frontier:
        nxt = []
        for mu in frontier:
            for s in grp.simple:
                img = grp.act(s, mu)
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    return LaurentPoly({mu: 1 for mu in orbit}, rs.rank, 1)


def _random_member(rs, rng):
    basis = steinberg_basis(rs)
    total = LaurentPoly.zero(rs.rank, 2)
    for v in basis.group.elements:
        if rng.random() < 0.5:
            continue
        first = LaurentPoly.from_terms(
            [
                (
                    tuple(rng.randint(-2, 2) for _ in range(rs.rank)),
                    rng.randint(-3, 3),
                )
                for _ in range(2)
            ],
            rs.rank,
        )
        inv = _orbit_sum(rs, basis.group, [rng.randint(-1, 1) for _ in range(rs.rank)])
        coeff = embed_block(first, "first") * embed_block(inv, "second")
        total = total + coeff * basis_class(rs, v)
    return total


def suite_prop18(rs: RootSystem, deadline=None, seed=0):
    rep = verify_basis_identities(rs, deadline)
    checks = [
        c
        for c in rep["checks"]
        if c["check"] in ("refine-to-monomials", "refine-between-levels")
    ]
    return _report("prop1.8", checks)


def suite_lemma19(rs: RootSystem, deadline=None, seed=0):
    rep = verify_basis_identities(rs, deadline)
    checks = [
        c
        for c in rep["checks"]
        if c["check"] in ("basis-support", "eliminant-nonzero")
    ]
    # partition bookkeeping of the index cells
    grp = weyl_group(rs)
    cells = grp.c_sets()
    total = sum(len(ws) for ws in cells.values())
    checks.append({"check": "cells-partition", "ok": total == grp.order})
    full = (1 << rs.rank) - 1
    for mask in range(1 << rs.rank):
        union = sum(
            len(cells[sub]) for sub in range(1 << rs.rank) if sub & mask == sub
        )
        checks.append(
            {
                "check": "cells-union-count",
                "I": list(subset_indices(mask)),
                "ok": union == len(grp.minimal_coset_reps(full & ~mask)),
            }
        )
        if deadline is not None:
            deadline.poll()
    return _report("lemma1.9", checks)


def suite_membership(rs: RootSystem, deadline=None, seed=0, count=100):
    rng = random.Random(seed)
    grp = weyl_group(rs)
    _, fan_plus, _ = chamber_fan(rs)
    checks = []
    accepted = rejected = 0
    for k in range(count):
        f = _random_member(rs, rng)
        ok = membership_check(PiecewiseClass(fan_plus, {0: f}), rs)
        accepted += ok
        if not ok:
            checks.append({"check": "member-accepted", "index": k, "ok": False})
        lam = tuple(rng.randint(-2, 2) for _ in range(rs.rank))
        while not any(lam):
            lam = tuple(rng.randint(-2, 2) for _ in range(rs.rank))
        spoiled = f + embed_block(LaurentPoly.monomial(lam), "second")
        bad = membership_check(PiecewiseClass(fan_plus, {0: spoiled}), rs)
        rejected += not bad
        if bad:
            checks.append({"check": "non-member-rejected", "index": k, "ok": False})
        if deadline is not None:
            deadline.poll()
    checks.append({"check": "members-accepted", "count": accepted, "ok": accepted == count})
    checks.append({"check": "non-members-rejected", "count": rejected, "ok": rejected == count})
    return _report("membership", checks)


def suite_two_path(rs: RootSystem, deadline=None, seed=0):
    basis = steinberg_basis(rs)
    grp = basis.group
    decs = {v: wonderful_decompose(rs, basis_class(rs, v)) for v in grp.elements}
    checks = []
    for v in grp.elements:
        for vp in grp.elements:
            direct = multiply_wonderful(decs[v], decs[vp])
            formula = product_formula(rs, v, vp)
            full = {}
            for w, n in formula.items():
                g = embed_block(lambda_poly(rs, basis.cell_of(w)), "first") * n
                if not g.is_zero:
                    full[w] = g
            checks.append(
                {
                    "check": "two-path-product",
                    "v": word_str(v),
                    "vp": word_str(vp),
                    "ok": direct.coords == full,
                }
            )
            if deadline is not None:
                deadline.poll()
    return _report("two-path-product", checks)


def suite_pushdown(rs: RootSystem, deadline=None, seed=0):
    basis = steinberg_basis(rs)
    grp = basis.group
    checks = []
    for v in grp.elements:
        for vp in grp.elements:
            formula = product_formula(rs, v, vp)
            down = {w: pushdown(rs, n) for w, n in formula.items()}
            down = {w: c for w, c in down.items() if not c.is_zero}
            want = kx_basis_product(rs, v, vp).coords
            checks.append(
                {
                    "check": "pushdown-product",
                    "v": word_str(v),
                    "vp": word_str(vp),
                    "ok": down == want,
                }
            )
            if deadline is not None:
                deadline.poll()
    return _report("pushdown", checks)


def standard_split_fan(rs: RootSystem):
    """Split of a rank-2 positive chamber along the sum of the two
    fundamental coweights; smooth for every rank-2 type."""
    if rs.rank != 2:
        return None
    return subdivided_positive_fan(
        rs, [[1, 0], [1, 1], [0, 1]], [[0], [1], [2], [0, 1], [1, 2]]
    )


def _random_sr(rng, fan, steps=4):
    e = SRElement.zero(fan)
    for _ in range(steps):
        j = rng.randrange(len(fan.rays))
        e = e + SRElement.variable(fan, j, rng.randint(-2, 2)) * rng.randint(-3, 3)
    return e


def suite_toric(rs: RootSystem, deadline=None, seed=0, count=100):
    rng = random.Random(seed)
    fan, fan_plus, _ = chamber_fan(rs)
    checks = []
    round_trips = 0
    for _ in range(count):
        e = _random_sr(rng, fan)
        parts = c_tau_decompose(e)
        total = SRElement.zero(fan)
        for comp in parts.values():
            total = total + comp
        ok = total == e and sr_normal_form(e) == e
        round_trips += ok
        if deadline is not None:
            deadline.poll()
    checks.append(
        {"check": "split-recombines", "count": round_trips, "ok": round_trips == count}
    )
    split = standard_split_fan(rs)
    fans = [("chamber", fan_plus)] + ([("split", split)] if split else [])
    for name, f in fans:
        good = bad_caught = 0
        trials = 20
        for _ in range(trials):
            e = _random_sr(rng, f, steps=3)
            e = e * e
            fam = {
                i: restrict_to_maximal_cone(e, c) for i, c in enumerate(f.maximal)
            }
            good += localization_check(f, fam)
            if len(f.maximal) > 1:
                lam = tuple(rng.randint(-2, 2) for _ in range(rs.rank))
                while not any(lam):
                    lam = tuple(rng.randint(-2, 2) for _ in range(rs.rank))
                fam[0] = fam[0] + LaurentPoly.monomial(lam) - LaurentPoly.one(rs.rank)
                bad_caught += not localization_check(f, fam)
            if deadline is not None:
                deadline.poll()
        checks.append(
            {"check": f"{name}-families-accepted", "count": good, "ok": good == trials}
        )
        if len(f.maximal) > 1:
            checks.append(
                {
                    "check": f"{name}-violators-rejected",
                    "count": bad_caught,
                    "ok": bad_caught == trials,
                }
            )
        if split:
            for _ in range(10):
                e = _random_sr(rng, split)
                parts = c_tau_decompose(e)
                total = SRElement.zero(split)
                for comp in parts.values():
                    total = total + comp
                if total != e:
                    checks.append({"check": "split-fan-recombines", "ok": False})
                    break
            else:
                checks.append({"check": "split-fan-recombines", "ok": True})
            split = None
    return _report("toric-decomp", checks)


SUITES = {
    "prop1.8": suite_prop18,
    "lemma1.9": suite_lemma19,
    "membership": suite_membership,
    "two-path-product": suite_two_path,
    "pushdown": suite_pushdown,
    "toric-decomp": suite_toric,
}


def verify_suites(rs: RootSystem, names=None, deadline=None, seed=0) -> dict:
    """Run the named suites (all of them when names is None)."""
    if names is None:
        names = list(SUITES)
    reports = []
    for name in names:
        fn = SUITES.get(name)
        if fn is None:
            raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        if deadline is not None:
            deadline.partial = {
                "type": str(rs.label),
                "suites": reports,
                "ok": all(r["ok"] for r in reports),
                "incomplete": True,
            }
        reports.append(fn(rs, deadline=deadline, seed=seed))
    return {
        "type": str(rs.label),
        "suites": reports,
        "ok": all(r["ok"] for r in reports),
    }
