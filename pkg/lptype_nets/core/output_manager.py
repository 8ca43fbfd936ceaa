#!/usr/bin/env python3
"""
Output Manager
Trace rows, trace files and resource timing
"""

import os
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import psutil

from .config_manager import TraceFormat

TRACE_COLUMNS = [
    'model', 'family', 'instance', 'seed', 'n', 'd', 'r', 'delta', 'k', 'scheme', 'mode',
    'fused', 'net_scale', 'm', 'iterations', 'successes', 'updates', 'iteration_budget',
    'within_budget', 'passes', 'rounds', 'bits_total', 'weight_bits', 'count_bits',
    'max_load_bits', 'load_within_cap', 'rounds_per_iteration', 'peak_stored_elements',
    'peak_stored_bases', 'peak_bits', 'net_size_alg', 'net_size_alt', 'sandwich_violations',
    'exponents_consistent', 'failed', 'value', 'matches_oracle', 'invariants_ok',
    'wall_time_s', 'peak_rss_mb',
]

SORT_KEYS = ['model', 'family', 'n', 'd', 'instance', 'seed', 'r', 'delta', 'k', 'scheme']


@dataclass
class Timing:
    wall_time_s: float
    peak_rss_mb: float


class Stopwatch:
    """Wall time and resident memory around a run."""

    def __enter__(self) -> 'Stopwatch':
        self._start = time.perf_counter()
        self.timing: Optional[Timing] = None
        return self

    def __exit__(self, *exc):
        rss = psutil.Process(os.getpid()).memory_info().rss / (1024 * 1024)
        self.timing = Timing(time.perf_counter() - self._start, rss)
        return False


class OutputManager:
    """Builds trace rows and writes them with pandas."""

    @staticmethod
    def determine_trace_format(path: str, choice: Optional[TraceFormat] = None) -> TraceFormat:
        """Explicit choice first, then the file extension, CSV otherwise."""
        if choice is not None:
            return choice
        if os.path.splitext(path)[1].lower() == '.json':
            return TraceFormat.JSON
        return TraceFormat.CSV

    @staticmethod
    def trace_row(trace, **fields: Any) -> Dict[str, Any]:
        """Flatten a run trace of any model into one row.

        Args:
            trace: MetaTrace, StreamTrace, CoordTrace or MpcTrace.
            fields: Run metadata (model, family, seed, n, ...) and results.
        """
        meta = getattr(trace, 'meta', trace)
        row: Dict[str, Any] = {key: None for key in TRACE_COLUMNS}
        row.update({
            'mode': meta.mode.value,
            'm': meta.params.m,
            'iterations': meta.iterations,
            'successes': meta.successes,
            'updates': meta.updates,
            'iteration_budget': meta.iteration_budget,
            'within_budget': meta.iterations <= meta.iteration_budget,
            'sandwich_violations': meta.sandwich_violations,
            'exponents_consistent': meta.exponents_consistent,
            'failed': meta.failed,
        })
        if meta is not trace:
            for key in ('passes', 'rounds', 'peak_stored_elements', 'peak_stored_bases',
                        'peak_bits', 'max_load_bits', 'count_bits', 'net_size_alg',
                        'net_size_alt', 'fused', 'load_within_cap'):
                if hasattr(trace, key):
                    row[key] = getattr(trace, key)
            if hasattr(trace, 'total_bits'):
                row['bits_total'] = trace.total_bits
                row['weight_bits'] = sum(trace.weight_bits)
            if hasattr(trace, 'r'):
                row['r'] = trace.r
            if hasattr(trace, 'config') and meta.iterations:
                # the first aggregation happens once, before the loop
                row['rounds_per_iteration'] = (trace.rounds - trace.config.depth) / meta.iterations
        row.update({k: v for k, v in fields.items() if k in row and v is not None})
        return row

    @staticmethod
    def to_frame(rows: Sequence[Dict[str, Any]]) -> pd.DataFrame:
        """Rows in canonical column order, sorted deterministically."""
        frame = pd.DataFrame(list(rows), columns=TRACE_COLUMNS)
        if frame.empty:
            return frame
        keys = frame[SORT_KEYS].astype(str)
        order = keys.sort_values(SORT_KEYS, kind='mergesort').index
        return frame.loc[order].reset_index(drop=True)

    @staticmethod
    def write_trace(rows: Sequence[Dict[str, Any]], path: str,
                    fmt: Optional[TraceFormat] = None) -> pd.DataFrame:
        """Write rows to CSV or JSON and return the frame written."""
        frame = OutputManager.to_frame(rows)
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        if OutputManager.determine_trace_format(path, fmt) is TraceFormat.JSON:
            frame.to_json(path, orient='records', indent=2)
        else:
            frame.to_csv(path, index=False)
        return frame

    @staticmethod
    def summarize(frame: pd.DataFrame) -> Dict[str, Any]:
        """Acceptance statistics over a trace frame."""
        summary: Dict[str, Any] = {'runs': int(len(frame))}
        if frame.empty:
            return summary
        checked = frame['matches_oracle'].dropna()
        if len(checked):
            summary['exactness_rate'] = float(checked.astype(bool).mean())
        iterations = frame['iterations'].dropna()
        if len(iterations):
            summary['iterations_p99'] = float(iterations.quantile(0.99))
            summary['within_budget_rate'] = float(frame['within_budget'].dropna().astype(bool).mean())
        total_it = frame['iterations'].fillna(0).sum()
        if total_it:
            summary['success_fraction'] = float(frame['successes'].fillna(0).sum() / total_it)
        summary['sandwich_violations'] = int(frame['sandwich_violations'].fillna(0).sum())
        failed = frame['failed'].dropna()
        if len(failed):
            summary['fail_rate'] = float(failed.astype(bool).mean())
        invariants = frame['invariants_ok'].dropna()
        if len(invariants):
            summary['invariants_rate'] = float(invariants.astype(bool).mean())
        return summary

    @staticmethod
    def resource_errors(frame: pd.DataFrame) -> List[str]:
        """Per-model resource identities that must hold on every row."""
        errors = []
        for _, row in frame.iterrows():
            it = row['iterations']
            if pd.isna(it) or (not pd.isna(row['failed']) and bool(row['failed'])):
                continue
            label = f"{row['model']} {row['family']} seed={row['seed']}"
            if row['model'] == 'stream':
                expected = it + 1 if row['fused'] else 2 * it + 1
                if row['passes'] != expected:
                    errors.append(f"{label}: {row['passes']} passes, expected {expected}")
                if row['peak_stored_bases'] > it:
                    errors.append(f"{label}: stored more bases than iterations")
            elif row['model'] == 'coord' and row['rounds'] != 3 * it:
                errors.append(f"{label}: {row['rounds']} rounds for {it} iterations")
            elif row['model'] == 'mpc' and not row['load_within_cap']:
                errors.append(f"{label}: load above the memory cap")
        return errors
