#!/usr/bin/env python3
"""
Invariant suites for generated instances and solver outputs.

Checks collect human-readable error strings instead of stopping at the first
failure; ``VerificationReport.raise_if_failed`` turns a non-empty list into a
``VerificationFailure``.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..generators.reductions import tci_answer_from_lp, tci_to_lp
from ..generators.tci import TciInstance, max_abs_slope
from ..solvers.lptype import Kind, LpValue, Ordering, order_compare, violates
from ..solvers.problems import (LpInstance, ProblemInstance, SvmInstance,
                                lp_solve_lexmin_sequential)
from ..solvers.small_solver import solve_small
from ..utils.errors import NoCrossing, VerificationFailure
from .oracle import brute_lp, brute_solve, brute_tci, within_limit

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """Names of passed checks and messages of failed ones."""
    subject: str
    passed: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def check(self, name: str, condition: bool, detail: str = ""):
        if condition:
            self.passed.append(name)
        else:
            self.errors.append(f"{name}: {detail}" if detail else name)

    def extend(self, name: str, errors: Sequence[str]):
        if errors:
            self.errors.extend(f"{name}: {e}" for e in errors)
        else:
            self.passed.append(name)

    def skip(self, name: str, reason: str):
        logger.warning("skipping %s on %s: %s", name, self.subject, reason)
        self.skipped.append(f"{name}: {reason}")

    def raise_if_failed(self):
        if self.errors:
            raise VerificationFailure(f"{self.subject}: " + "; ".join(self.errors))

    def summary(self) -> Dict[str, Any]:
        return {'subject': self.subject, 'ok': self.ok, 'passed': len(self.passed),
                'errors': list(self.errors), 'skipped': list(self.skipped)}


# --- TCI -------------------------------------------------------------------

def monotone_convex_errors(A: Sequence[Fraction], B: Sequence[Fraction]) -> List[str]:
    """A strictly increasing and B strictly decreasing, both with nondecreasing gaps."""
    errors = []
    if len(A) != len(B):
        return [f"A has {len(A)} points, B has {len(B)}"]
    gaps_a = [y - x for x, y in zip(A, A[1:])]
    gaps_b = [y - x for x, y in zip(B, B[1:])]
    for i, g in enumerate(gaps_a, start=1):
        if g <= 0:
            errors.append(f"A not increasing at {i}")
    for i, g in enumerate(gaps_b, start=1):
        if g >= 0:
            errors.append(f"B not decreasing at {i}")
    for name, gaps in (("A", gaps_a), ("B", gaps_b)):
        for i, (g, h) in enumerate(zip(gaps, gaps[1:]), start=2):
            if h < g:
                errors.append(f"{name} not convex at {i}")
    return errors


def reconstruct_special(t: TciInstance) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """Undo normalisation, translation and shear of block z* using only t and its meta.

    The shear is recomputed from the recorded neighbouring block, so this
    also checks that the logged slope and anchor follow from the fooling
    inputs.

    Raises:
        VerificationFailure: The recorded slope or anchor does not match.
    """
    meta = t.meta
    N, r, zstar = meta['N'], meta['r'], meta['zstar']
    even = meta['parity'] == 'even'
    n_sub = N ** (r - 1)
    fooling = meta['fooling']
    dy = Fraction(meta['shift'][1])
    A = [v - dy for v in t.A]
    B = [v - dy for v in t.B]
    lo, hi = (zstar - 1) * n_sub, zstar * n_sub
    block_a, block_b = A[lo:hi], B[lo:hi]
    if (tuple(block_a), tuple(block_b)) != (tuple(fooling[zstar - 1][0]),
                                            tuple(fooling[zstar - 1][1])):
        raise VerificationFailure(f"block {zstar} differs from its recorded placement")

    neighbour = zstar if even else zstar - 2
    if 0 <= neighbour < N:
        na, nb = fooling[neighbour]
        alpha = max_abs_slope(na, nb)
        anchor = nb[0] + alpha if even else na[-1] + alpha
    else:
        alpha, anchor = Fraction(0), Fraction(0)
    if alpha != Fraction(meta['alphas'][zstar - 1]):
        raise VerificationFailure(f"slope of block {zstar} is {meta['alphas'][zstar - 1]}, "
                                  f"neighbour gives {alpha}")
    placed_anchor = block_b[-1] if even else block_a[0]
    if placed_anchor != anchor:
        raise VerificationFailure(f"block {zstar} anchored at {placed_anchor}, expected {anchor}")

    base = block_a[0]
    sheared_a = [v - base for v in block_a]
    sheared_b = [v - base for v in block_b]
    local = brute_tci(sheared_a, sheared_b)
    sub_a = tuple(v - alpha * (j - 1) for j, v in enumerate(sheared_a, start=1))
    sub_b = tuple(v - alpha * (2 * local - j) for j, v in enumerate(sheared_b, start=1))
    return sub_a, sub_b


def rng_trace_oblivious(log: Sequence[Sequence[Any]]) -> bool:
    """Every z* draw comes after all draws of the blocks at its level."""
    paths = [tuple(p) for p in log]
    for pos, path in enumerate(paths):
        if not path or path[-1] != "zstar":
            continue
        prefix = path[:-1]
        for later in paths[pos + 1:]:
            if later[:len(prefix) + 1] == prefix + ("block",):
                return False
    return True


def tci_errors(t: TciInstance, depth: int = 0) -> List[str]:
    """Full invariant suite, recursing into the special sub-instance."""
    where = f"level {t.meta.get('r', '?')}"
    errors = [f"{where}: {e}" for e in monotone_convex_errors(t.A, t.B)]
    try:
        found = brute_tci(t.A, t.B)
    except NoCrossing as e:
        return errors + [f"{where}: {e}"]
    if found != t.answer:
        errors.append(f"{where}: recorded answer {t.answer}, scan finds {found}")

    if t.meta.get('parity') in ('even', 'odd'):
        special: TciInstance = t.meta['special']
        n_sub = t.meta['N'] ** (t.meta['r'] - 1)
        if t.answer != (t.meta['zstar'] - 1) * n_sub + special.answer:
            errors.append(f"{where}: answer does not embed the special block's answer")
        try:
            sub_a, sub_b = reconstruct_special(t)
            if (sub_a, sub_b) != (special.A, special.B):
                errors.append(f"{where}: undoing the operators does not give the special block")
        except VerificationFailure as e:
            errors.append(f"{where}: {e}")
        errors += tci_errors(special, depth + 1)
    elif t.meta.get('parity') == 'base':
        bits, istar = t.meta['x'], t.meta['istar']
        stated = istar if bits[istar - 1] == 1 else istar + 1
        if stated != t.answer:
            errors.append(f"{where}: base answer {t.answer}, indexing rule gives {stated}")

    if depth == 0 and 'rng_log' in t.meta and not rng_trace_oblivious(t.meta['rng_log']):
        errors.append("z* drawn before all blocks of its level")
    return errors


def verify_tci(t: TciInstance, with_lp: bool = True) -> VerificationReport:
    """Invariant suite plus the LP bridge, checked with the vertex oracle."""
    report = VerificationReport(f"tci n={t.n}")
    report.extend("tci invariants", tci_errors(t))
    if with_lp:
        lp, rule = tci_to_lp(t)
        try:
            value = brute_lp(lp)
            report.check("tci lp bridge", rule(value) == t.answer,
                         f"floor(x*) = {rule(value)}, answer {t.answer}")
        except Exception as e:
            report.check("tci lp bridge", False, str(e))
    return report


# --- LP / SVM / MEB ----------------------------------------------------------

def ground_truth_errors(inst: ProblemInstance, value) -> List[str]:
    """Compare a value with whatever ground truth the instance carries."""
    errors = []
    meta = inst.meta
    planted = meta.get('planted')
    if isinstance(inst, LpInstance) and planted is not None:
        bad = [i for i, h in enumerate(inst.constraints)
               if violates(LpValue(Fraction(0), planted), h)]
        if bad:
            errors.append(f"planted point violates constraints {bad[:5]}")
    if isinstance(inst, SvmInstance) and planted is not None:
        margin = Fraction(meta.get('margin', 1))
        u = [Fraction(v) / margin for v in planted]
        if any(s.y * sum(a * b for a, b in zip(u, s.x)) < 1 for s in inst.samples):
            errors.append("planted separator does not reach unit margin")
        elif value is not None and value.norm_sq > sum(v * v for v in u):
            errors.append("optimum has a larger norm than the planted separator")
    expected = meta.get('expected_objective')
    if expected is not None and value is not None and isinstance(value, LpValue):
        if value.objective != Fraction(expected):
            errors.append(f"objective {value.objective}, expected {expected}")
    if meta.get('family') == 'tci' and value is not None:
        if tci_answer_from_lp(value) != meta.get('answer'):
            errors.append(f"floor(x*) = {tci_answer_from_lp(value)}, "
                          f"TCI answer {meta.get('answer')}")
    return errors


def feasibility_errors(inst: ProblemInstance, value) -> List[str]:
    bad = [i for i, e in enumerate(inst.elements) if violates(value, e)]
    return [f"value violates elements {bad[:5]}"] if bad else []


def verify_problem(inst: ProblemInstance, oracle_limit: Optional[int] = None
                   ) -> VerificationReport:
    """solve_small against the brute-force oracle, the sequential LP path and ground truth."""
    kind = inst.kind
    report = VerificationReport(f"{kind.value} n={len(inst.elements)} d={inst.d}")
    value, basis = solve_small(inst.elements, inst.definition)
    report.extend("feasible optimum", feasibility_errors(inst, value))
    report.check("basis value", order_compare(basis.value, value) is Ordering.EQ)
    report.check("basis size", len(basis) <= inst.definition.nu,
                 f"{len(basis)} > {inst.definition.nu}")
    limit_ok = within_limit(inst) if oracle_limit is None else within_limit(inst, oracle_limit)
    if limit_ok:
        expected = brute_solve(inst)
        report.check("oracle", order_compare(value, expected) is Ordering.EQ,
                     f"solver {value}, oracle {expected}")
    else:
        report.skip("oracle", "too many candidate supports")
    if kind is Kind.LP:
        sequential = lp_solve_lexmin_sequential(inst)
        report.check("sequential lexmin", sequential == value,
                     f"sequential {sequential}, solver {value}")
    report.extend("ground truth", ground_truth_errors(inst, value))
    logger.debug("verified %s: %d passed, %d errors", report.subject,
                 len(report.passed), len(report.errors))
    return report

