"""
实例文件的读写工具。

实例文件是 JSON，结构如下：

    {
      "n": 3,
      "f": {"type": "dicut", "edges": [[0, 1, 1.0], [1, 2, 0.5]]},
      "ell": [0.0, -0.2, 0.1],
      "constraint": {"type": "cardinality", "k": 2}
    }

f 的 type 取 dicut / cut / hyperdicut / coverage / table；
constraint 可以省略或为 null（无约束），或取 cardinality / partition / explicit。
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Callable, Dict, Optional, TypeVar, Union

import numpy as np

from ..core import (
    Coverage,
    DirectedCut,
    ExplicitTable,
    HyperDirectedCut,
    Instance,
    LinearFn,
    SubmodularFn,
    UndirectedCut,
)
from ..exceptions import InstanceParseError, RegSubmodError
from ..matroid import Explicit, Matroid, Partition, Uniform

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
T = TypeVar("T")


def _line_of(text: str, key: str) -> Optional[int]:
    """返回 key 第一次出现的行号（从 1 开始），找不到时返回 None。"""
    match = re.search(rf'"{re.escape(key)}"\s*:', text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


def _function_from_dict(n: int, raw: Dict[str, Any]) -> SubmodularFn:
    kind = raw.get("type")
    if kind == "dicut":
        return DirectedCut(n, tuple(tuple(e) for e in raw["edges"]))
    if kind == "cut":
        return UndirectedCut(n, tuple(tuple(e) for e in raw["edges"]))
    if kind == "hyperdicut":
        return HyperDirectedCut(
            n, tuple((frozenset(t), frozenset(h), float(w)) for t, h, w in raw["hyperedges"])
        )
    if kind == "coverage":
        return Coverage(n, tuple(frozenset(c) for c in raw["covers"]), tuple(raw["item_weights"]))
    if kind == "table":
        return ExplicitTable(n, np.array(raw["values"], dtype=float))
    raise KeyError(f"unknown function type {kind!r}")


def _constraint_from_dict(n: int, raw: Optional[Dict[str, Any]]) -> Optional[Matroid]:
    if raw is None:
        return None
    kind = raw.get("type")
    if kind == "cardinality":
        return Uniform(n, int(raw["k"]))
    if kind == "partition":
        return Partition(n, tuple(frozenset(b) for b in raw["blocks"]), tuple(raw["caps"]))
    if kind == "explicit":
        return Explicit(n, frozenset(int(m) for m in raw["independent"]))
    raise KeyError(f"unknown constraint type {kind!r}")


def _stage(text: str, source: Optional[str], field: str, build: Callable[[], T]) -> T:
    """执行一步解析；出错时换成带行号的 InstanceParseError。"""
    try:
        return build()
    except (KeyError, TypeError, ValueError, AttributeError, RegSubmodError) as e:
        raise InstanceParseError(f"Invalid field {field!r}: {e}", path=source, line=_line_of(text, field)) from e


def _ell_from(n: int, raw: Any) -> LinearFn:
    return LinearFn.zeros(n) if raw is None else LinearFn(np.array(raw, dtype=float))


def instance_from_dict(data: Dict[str, Any]) -> Instance:
    """
    从字典构造 Instance。

    Raises:
        KeyError / TypeError / ValueError: 字段缺失或类型不对。
        RegSubmodError: 字段合法但描述的对象不合法（比如越界的端点）。
    """
    n = int(data["n"])
    f = _function_from_dict(n, data["f"])
    return Instance(f, _ell_from(n, data.get("ell")), _constraint_from_dict(n, data.get("constraint")))


def loads_instance(text: str, path: Optional[PathLike] = None) -> Instance:
    """
    解析 JSON 文本。

    Raises:
        InstanceParseError: JSON 语法错误或字段不合法；带上文件路径和行号。
    """
    source = str(path) if path is not None else None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"Invalid JSON: {e.msg}", path=source, line=e.lineno) from e
    if not isinstance(data, dict):
        raise InstanceParseError("Instance file must hold a JSON object", path=source, line=1)
    n = _stage(text, source, "n", lambda: int(data["n"]))
    f = _stage(text, source, "f", lambda: _function_from_dict(n, data["f"]))
    ell = _stage(text, source, "ell", lambda: _ell_from(n, data.get("ell")))
    constraint = _stage(text, source, "constraint", lambda: _constraint_from_dict(n, data.get("constraint")))
    return _stage(text, source, "ell", lambda: Instance(f, ell, constraint))


def load_instance(path: PathLike) -> Instance:
    """读取实例文件。"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceParseError(f"Cannot read instance file: {e}", path=str(path)) from e
    instance = loads_instance(text, path)
    logger.debug(f"Loaded instance from {path}: n={instance.n}, f={instance.f.kind}")
    return instance


def _function_to_dict(f: SubmodularFn) -> Dict[str, Any]:
    if isinstance(f, (DirectedCut, UndirectedCut)):
        return {"type": f.kind, "edges": [[int(a), int(b), float(w)] for a, b, w in f.edges]}
    if isinstance(f, HyperDirectedCut):
        return {
            "type": f.kind,
            "hyperedges": [[sorted(t), sorted(h), float(w)] for t, h, w in f.hyperedges],
        }
    if isinstance(f, Coverage):
        return {
            "type": f.kind,
            "covers": [sorted(c) for c in f.covers],
            "item_weights": [float(w) for w in f.item_weights],
        }
    return {"type": "table", "values": [float(v) for v in f.to_table().values]}


def _constraint_to_dict(constraint: Optional[Matroid]) -> Optional[Dict[str, Any]]:
    if constraint is None:
        return None
    if isinstance(constraint, Uniform):
        return {"type": "cardinality", "k": constraint.k}
    if isinstance(constraint, Partition):
        return {
            "type": "partition",
            "blocks": [sorted(b) for b in constraint.blocks],
            "caps": list(constraint.caps),
        }
    if isinstance(constraint, Explicit):
        return {"type": "explicit", "independent": sorted(constraint.independent)}
    raise TypeError(f"Cannot serialize constraint of type {type(constraint).__name__}")


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    return {
        "n": instance.n,
        "f": _function_to_dict(instance.f),
        "ell": [float(w) for w in instance.ell.weights],
        "constraint": _constraint_to_dict(instance.constraint),
    }


def dump_instance(instance: Instance, path: PathLike) -> Path:
    """把实例写成带缩进的 JSON，返回写入的路径。"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote instance to {path}")
    return path
