#!/usr/bin/env python3
"""
Instance File Manager
JSON instance documents with exact "num/den" scalars
"""

import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Union

from ..generators.tci import TciInstance
from ..solvers.lptype import Halfspace, LabeledPoint, Point
from ..solvers.problems import LpInstance, MebInstance, ProblemInstance, SvmInstance

logger = logging.getLogger(__name__)

AnyInstance = Union[ProblemInstance, TciInstance]

KINDS = ('lp', 'svm', 'meb', 'tci')


def format_scalar(q) -> str:
    """Canonical "num/den" form, denominator always written."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(text: Any) -> Fraction:
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"scalars must be strings such as '3/4', got {text!r}")
    return Fraction(text.strip())


def _scalars(values: Sequence) -> List[str]:
    return [format_scalar(v) for v in values]


def _parse_row(row: Sequence, width: int, where: str) -> List[Fraction]:
    if not isinstance(row, list) or len(row) != width:
        raise ValueError(f"{where}: expected {width} scalars, got {row!r}")
    return [parse_scalar(v) for v in row]


def encode_meta(obj: Any) -> Any:
    """Fractions become "num/den" strings, tuples become lists, TCI blocks nest."""
    if isinstance(obj, TciInstance):
        return {'A': _scalars(obj.A), 'B': _scalars(obj.B), 'answer': obj.answer,
                'meta': encode_meta(obj.meta)}
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, dict):
        return {str(k): encode_meta(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode_meta(v) for v in obj]
    return obj


def _decode_tci_meta(meta: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(meta)
    if 'special' in out:
        out['special'] = _decode_tci(out['special'])
    if 'alphas' in out:
        out['alphas'] = [parse_scalar(v) for v in out['alphas']]
    if 'shift' in out:
        out['shift'] = tuple(parse_scalar(v) for v in out['shift'])
    if 'targets' in out:
        out['targets'] = [tuple(parse_scalar(v) for v in p) for p in out['targets']]
    if 'fooling' in out:
        out['fooling'] = [(tuple(parse_scalar(v) for v in a), tuple(parse_scalar(v) for v in b))
                          for a, b in out['fooling']]
    return out


def _decode_tci(doc: Dict[str, Any]) -> TciInstance:
    return TciInstance([parse_scalar(v) for v in doc['A']], [parse_scalar(v) for v in doc['B']],
                       int(doc['answer']), _decode_tci_meta(doc.get('meta') or {}))


class InstanceFileManager:
    """Reads and writes instance documents.

    LP documents list only the core constraints as [a_1, ..., a_d, b]; the
    box is stored once under "box" and re-added on load. SVM rows are
    [x_1, ..., x_d, y], MEB rows [p_1, ..., p_d] and TCI rows [a_i, b_i].
    """

    @staticmethod
    def to_document(inst: AnyInstance) -> Dict[str, Any]:
        if isinstance(inst, TciInstance):
            return {'kind': 'tci', 'd': 2,
                    'elements': [[format_scalar(a), format_scalar(b)] for a, b in zip(inst.A, inst.B)],
                    'answer': inst.answer,
                    'meta': encode_meta(inst.meta)}
        doc: Dict[str, Any] = {'kind': inst.kind.value, 'd': inst.d}
        if isinstance(inst, LpInstance):
            doc['c'] = _scalars(inst.c)
            doc['box'] = None if inst.box is None else format_scalar(inst.box)
            doc['elements'] = [_scalars(h.a) + [format_scalar(h.b)]
                               for h in inst.core_constraints()]
        elif isinstance(inst, SvmInstance):
            doc['elements'] = [_scalars(s.x) + [s.y] for s in inst.samples]
        else:
            doc['elements'] = [_scalars(p.p) for p in inst.points]
        doc['meta'] = encode_meta(inst.meta)
        return doc

    @staticmethod
    def from_document(doc: Dict[str, Any]) -> AnyInstance:
        """Build an instance from a parsed document.

        Raises:
            ValueError: Unknown kind or malformed rows.
        """
        if not isinstance(doc, dict):
            raise ValueError("instance document must be a JSON object")
        kind = doc.get('kind')
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        rows = doc.get('elements')
        if not isinstance(rows, list):
            raise ValueError("'elements' must be a list")
        meta = doc.get('meta') or {}

        if kind == 'tci':
            pairs = [_parse_row(row, 2, f"element {i}") for i, row in enumerate(rows)]
            return TciInstance([a for a, _ in pairs], [b for _, b in pairs],
                               int(doc['answer']), _decode_tci_meta(meta))

        d = doc.get('d')
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"'d' must be a positive integer, got {d!r}")
        if kind == 'lp':
            c = _parse_row(doc.get('c'), d, "objective")
            box = doc.get('box')
            core = []
            for i, row in enumerate(rows):
                values = _parse_row(row, d + 1, f"element {i}")
                core.append(Halfspace(values[:d], values[d]))
            return LpInstance.with_box(d, c, core, None if box is None else parse_scalar(box), meta)
        if kind == 'svm':
            samples = []
            for i, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != d + 1:
                    raise ValueError(f"element {i}: expected {d} scalars and a label")
                samples.append(LabeledPoint(_parse_row(row[:d], d, f"element {i}"), int(row[d])))
            return SvmInstance(d, samples, meta)
        points = [Point(_parse_row(row, d, f"element {i}")) for i, row in enumerate(rows)]
        return MebInstance(d, points, meta)

    @staticmethod
    def dumps(inst: AnyInstance) -> str:
        return json.dumps(InstanceFileManager.to_document(inst), indent=2) + "\n"

    @staticmethod
    def save(inst: AnyInstance, path: str) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(InstanceFileManager.dumps(inst))
        logger.info("wrote %s", path)
        return path

    @staticmethod
    def load(path: str) -> AnyInstance:
        """Read an instance file.

        Raises:
            FileNotFoundError: If the file does not exist.
            ValueError: If the document is not valid JSON or not an instance.
        """
        if not os.path.exists(path):
            raise FileNotFoundError(f"Instance file not found: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in instance file: {e}") from e
        inst = InstanceFileManager.from_document(doc)
        logger.debug("loaded %s instance from %s", doc['kind'], path)
        return inst
