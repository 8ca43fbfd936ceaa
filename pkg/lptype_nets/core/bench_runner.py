#!/usr/bin/env python3
"""
Bench Runner
Instance families, model dispatch and the acceptance-suite matrix
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import pandas as pd

from ..generators.random_instances import (gen_digit_lp, gen_meb_points, gen_random_lp,
                                           gen_svm_separable)
from ..generators.reductions import combine_2d, disj_to_lp, tci_to_lp
from ..generators.tci import TciInstance, tci_base, tci_recursive
from ..models.coord_sim import run_coordinator
from ..models.mpc_sim import run_mpc
from ..models.stream_sim import run_streaming
from ..solvers.lptype import Basis, Ordering, SolutionValue, order_compare
from ..solvers.meta_solver import run_meta
from ..solvers.problems import ProblemInstance
from ..utils.errors import LpTypeError, MonteCarloFail
from ..utils.rng_streams import RngStreams
from ..verification.invariants import ground_truth_errors, tci_errors
from ..verification.oracle import brute_solve, within_limit
from .config_manager import Model, RunConfig, parse_fraction, read_mapping
from .output_manager import OutputManager, Stopwatch

logger = logging.getLogger(__name__)


# --- instance families -------------------------------------------------------

def _bits(text: str) -> List[int]:
    return [int(v) for v in text.replace(' ', '').split(',') if v != '']


def _sets(text: str) -> List[List[int]]:
    return [_bits(row) for row in text.split(';') if row.strip()]


def _case_bits(case: int, width: int, total: int) -> List[int]:
    if not 0 <= case < total:
        raise ValueError(f"case {case} is outside the {total} enumerated cases")
    return [(case >> (width - 1 - j)) & 1 for j in range(width)]


def _tci_base(p: Dict[str, Any], seed: int) -> TciInstance:
    if p.get('enumerate'):
        # instance i is bit vector i // (n-1) with i* = i mod (n-1) + 1
        n = int(p['n'])
        bits = _case_bits(seed // (n - 1), n - 1, 2 ** (n - 1))
        return tci_base(bits, seed % (n - 1) + 1)
    if p.get('bits') is not None:
        bits = _bits(p['bits']) if isinstance(p['bits'], str) else list(p['bits'])
        istar = p.get('istar')
        if istar is None:
            raise ValueError("tci-base with explicit bits needs istar")
        return tci_base(bits, int(istar))
    n = int(p['n'])
    g = RngStreams(seed).generator("tci-base", n)
    bits = [int(v) for v in g.integers(0, 2, size=n - 1)]
    istar = int(p['istar']) if p.get('istar') is not None else int(g.integers(1, n))
    return tci_base(bits, istar)


def _disj(p: Dict[str, Any], seed: int):
    if p.get('enumerate'):
        sites, d = int(p['sites']), int(p['d'])
        flat = _case_bits(seed, sites * d, 2 ** (sites * d))
        return disj_to_lp([flat[i * d:(i + 1) * d] for i in range(sites)])
    if p.get('sets') is not None:
        X = _sets(p['sets']) if isinstance(p['sets'], str) else [list(r) for r in p['sets']]
    else:
        g = RngStreams(seed).generator("disj", p['sites'], p['d'])
        X = [[int(v) for v in g.integers(0, 2, size=int(p['d']))] for _ in range(int(p['sites']))]
    return disj_to_lp(X)


def _direct_sum(p: Dict[str, Any], seed: int):
    M = int(p['M'])
    g = RngStreams(seed).generator("direct-sum", p['count'])
    digits = [int(v) for v in g.integers(0, M, size=int(p['count']))]
    inst = combine_2d([gen_digit_lp(f, seed + i) for i, f in enumerate(digits)], M)
    inst.meta['digits'] = digits
    return inst


# family -> (builder, required parameters, optional parameters)
FAMILIES: Dict[str, Tuple[Callable[[Dict[str, Any], int], Any], Tuple[str, ...], Tuple[str, ...]]] = {
    'lp': (lambda p, s: gen_random_lp(int(p['n']), int(p['d']), s,
                                      parse_fraction(p.get('box', 2 ** 20))),
           ('n', 'd'), ('box',)),
    'svm': (lambda p, s: gen_svm_separable(int(p['n']), int(p['d']), s,
                                           parse_fraction(p.get('margin', 1))),
            ('n', 'd'), ('margin',)),
    'meb': (lambda p, s: gen_meb_points(int(p['n']), int(p['d']), s), ('n', 'd'), ()),
    'tci-base': (_tci_base, (), ('n', 'bits', 'istar', 'enumerate')),
    'tci-rec': (lambda p, s: tci_recursive(int(p['rounds']), int(p['N']), s), ('rounds', 'N'), ()),
    'disj-lp': (_disj, (), ('sets', 'sites', 'd', 'enumerate')),
    'direct-sum': (_direct_sum, ('count', 'M'), ()),
}


def family_errors(family: str, params: Dict[str, Any]) -> List[str]:
    """Unknown families, missing and irrelevant parameters."""
    if family not in FAMILIES:
        return [f"unknown family {family!r}; choose from {', '.join(FAMILIES)}"]
    _, required, optional = FAMILIES[family]
    given = {k for k, v in params.items() if v is not None}
    errors = [f"family {family} needs --{k}" for k in required if k not in given]
    errors += [f"--{k} does not apply to family {family}" for k in sorted(given - set(required) - set(optional))]
    if family == 'tci-base' and not given & {'n', 'bits'}:
        errors.append("family tci-base needs --n or --bits")
    if family == 'disj-lp' and 'sets' not in given and not {'sites', 'd'} <= given:
        errors.append("family disj-lp needs --sets or both --sites and --d")
    return errors


def build_instance(family: str, params: Dict[str, Any], seed: int):
    """Generate one instance of a family.

    Raises:
        ValueError: Unknown family or wrong parameters.
    """
    errors = family_errors(family, params)
    if errors:
        raise ValueError("; ".join(errors))
    builder = FAMILIES[family][0]
    return builder({k: v for k, v in params.items() if v is not None}, seed)


# --- model dispatch ----------------------------------------------------------

@dataclass
class RunResult:
    value: SolutionValue
    basis: Basis
    trace: Any
    timing: Any = None


def run_model(inst: ProblemInstance, config: RunConfig) -> RunResult:
    """Run the configured execution model on one instance.

    Raises:
        MonteCarloFail: Monte-Carlo mode hit an unsuccessful iteration.
    """
    n = len(inst.elements)
    seed = config.seed
    with Stopwatch() as watch:
        if config.model is Model.RAM:
            value, basis, trace = run_meta(inst, config.effective_r(n), config.mode, seed,
                                           config.net_scale, config.max_iterations)
        elif config.model is Model.STREAM:
            value, basis, trace = run_streaming(inst, config.effective_r(n), config.mode, seed,
                                                config.fused, config.net_scale,
                                                config.max_iterations)
        elif config.model is Model.COORD:
            value, basis, trace = run_coordinator(inst, config.effective_k(), config.effective_r(n),
                                                  config.mode, seed, config.effective_scheme(),
                                                  config.net_scale, config.max_iterations)
        else:
            value, basis, trace = run_mpc(inst, config.effective_delta(), config.mode, seed,
                                          config.memory_cap, config.net_scale,
                                          config.max_iterations)
    return RunResult(value, basis, trace, watch.timing if config.record_timing else None)


def run_fields(config: RunConfig, n: int) -> Dict[str, Any]:
    """Trace-row columns describing the configuration."""
    fields = {
        'model': config.model.value,
        'seed': config.seed,
        'n': n,
        'fused': config.fused if config.model is Model.STREAM else None,
        'net_scale': str(config.net_scale),
    }
    if config.model is Model.MPC:
        fields['delta'] = str(config.effective_delta())
    else:
        fields['r'] = config.effective_r(n)
    if config.model is Model.COORD:
        fields['k'] = config.effective_k()
        fields['scheme'] = config.effective_scheme().value
    return fields


# --- suites ------------------------------------------------------------------

RUN_KEYS = ('model', 'mode', 'r', 'delta', 'k', 'scheme', 'fused', 'net_scale',
            'max_iterations', 'memory_cap', 'oracle')
SWEEP_KEYS = ('n', 'd', 'r', 'delta', 'k', 'scheme', 'rounds', 'N', 'sites', 'count', 'M')
CELL_KEYS = ('name', 'family', 'seeds', 'instances', 'instance_seed', 'check', 'slow')


def _as_list(value) -> List[Any]:
    return list(value) if isinstance(value, (list, tuple)) else [value]


class BenchRunner:
    """Expands a suite of cells into runs and collects one trace row per run.

    A cell names a model, an instance family with its parameters, a number of
    instances and a list of run seeds; list-valued parameters are swept as a
    Cartesian product. Cells marked ``slow: true`` only run with include_slow.
    """

    def __init__(self, suite: Dict[str, Any], include_slow: bool = False):
        if not isinstance(suite.get('cells'), list) or not suite['cells']:
            raise ValueError("bench suite needs a non-empty 'cells' list")
        self.defaults = dict(suite.get('defaults') or {})
        self.cells = [dict(self.defaults, **cell) for cell in suite['cells']]
        self.include_slow = include_slow
        self.rows: List[Dict[str, Any]] = []

    @classmethod
    def from_path(cls, path: str, include_slow: bool = False) -> 'BenchRunner':
        return cls(read_mapping(path), include_slow)

    def validate(self) -> List[str]:
        errors = []
        for i, cell in enumerate(self.cells):
            label = cell.get('name', f"cell {i}")
            unknown = set(cell) - set(RUN_KEYS) - set(SWEEP_KEYS) - set(CELL_KEYS) - {
                'bits', 'istar', 'sets', 'box', 'margin', 'enumerate'}
            if unknown:
                errors.append(f"{label}: unknown keys {sorted(unknown)}")
            if 'family' not in cell:
                errors.append(f"{label}: missing family")
        return errors

    def expand(self, cell: Dict[str, Any]) -> Iterator[Tuple[Dict[str, Any], RunConfig]]:
        """(family parameters, run configuration) for every sweep point and seed."""
        sweep = [k for k in SWEEP_KEYS if k in cell]
        for combo in itertools.product(*(_as_list(cell[k]) for k in sweep)):
            point = dict(cell, **dict(zip(sweep, combo)))
            family_params = {k: point[k] for k in point
                             if k not in RUN_KEYS and k not in CELL_KEYS}
            run_dict = {k: point[k] for k in RUN_KEYS if k in point}
            if 'model' not in run_dict:
                run_dict['model'] = 'ram'
            yield family_params, run_dict

    def run(self) -> pd.DataFrame:
        """Run every cell; rows are sorted deterministically."""
        self.rows = []
        for index, cell in enumerate(self.cells):
            name = cell.get('name', f"cell {index}")
            if cell.get('slow') and not self.include_slow:
                logger.info("skipping slow cell %s", name)
                continue
            logger.info("running %s", name)
            for family_params, run_dict in self.expand(cell):
                self._run_point(cell, family_params, run_dict)
        return OutputManager.to_frame(self.rows)

    def _run_point(self, cell: Dict[str, Any], family_params: Dict[str, Any],
                   run_dict: Dict[str, Any]):
        family = cell['family']
        instance_seed = int(cell.get('instance_seed', 0))
        for i in range(int(cell.get('instances', 1))):
            generated = build_instance(family, family_params, instance_seed + i)
            tci = generated if isinstance(generated, TciInstance) else None
            invariants_ok: Optional[bool] = None
            if tci is not None:
                invariants_ok = not tci_errors(tci)
                inst, rule = tci_to_lp(tci)
            else:
                inst, rule = generated, None
            if cell.get('check') == 'invariants':
                self.rows.append({'model': 'none', 'family': family, 'instance': i,
                                  'n': tci.n if tci else len(inst.elements), 'd': inst.d,
                                  'invariants_ok': invariants_ok})
                continue
            expected = None
            if run_dict.get('oracle') and within_limit(inst):
                expected = brute_solve(inst)
            for seed in _as_list(cell.get('seeds', [0])):
                config = RunConfig()
                config.from_dict(dict(run_dict, seed=int(seed)))
                problems = config.validate()
                if problems:
                    raise ValueError(f"{cell.get('name', family)}: " + "; ".join(problems))
                self.rows.append(self._run_one(inst, config, family, i, expected, rule,
                                               tci, invariants_ok))

    @staticmethod
    def _run_one(inst, config: RunConfig, family: str, index: int, expected, rule,
                 tci: Optional[TciInstance], invariants_ok: Optional[bool]) -> Dict[str, Any]:
        n = len(inst.elements)
        fields = dict(run_fields(config, n), family=family, instance=index, d=inst.d)
        try:
            result = run_model(inst, config)
        except MonteCarloFail as e:
            return OutputManager.trace_row(e.trace, **fields)
        except LpTypeError as e:
            logger.warning("%s run failed: %s", family, e)
            return dict(fields, value=f"error: {e.code_name}")
        except RuntimeError as e:
            logger.warning("%s run did not terminate: %s", family, e)
            return dict(fields, value="error: no-termination")
        matches = None
        if expected is not None:
            matches = order_compare(result.value, expected) is Ordering.EQ
        if rule is not None:
            matches = (matches is not False) and rule(result.value) == tci.answer
        elif invariants_ok is None:
            invariants_ok = not ground_truth_errors(inst, result.value)
        timing = {}
        if result.timing is not None:
            timing = {'wall_time_s': result.timing.wall_time_s,
                      'peak_rss_mb': result.timing.peak_rss_mb}
        return OutputManager.trace_row(result.trace, **fields, value=str(result.value),
                                       matches_oracle=matches, invariants_ok=invariants_ok,
                                       **timing)

