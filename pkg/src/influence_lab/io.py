"""JSON file formats: functions, trees, and analysis reports.

Function files: {"arities": [...], "values": [...], "weights": [[...], ...]?}
with values in mixed-radix rank order, coordinate 1 most significant.
Tree files: nested {"var": i, "children": [...]} | {"leaf": v} with 1-based
coordinates; a raw leaf is {"leaf": null}. Reports are schema-versioned JSON.

Numbers round-trip losslessly: floats go through repr (shortest exact
round-trip, never more than 17 significant digits), exact rationals carry a
["ratio", num, den] pair next to the float, and infinities are encoded as
strings.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from typing import Any

from .core import DecisionTree, Domain, Leaf, Node, Scalar, TabulatedFunction, TreeNode
from .errors import DomainError

SCHEMA = "influence-lab-report/1"
TOOL_VERSION = "0.1.0"


def encode_number(x: Scalar) -> Any:
    """JSON value for a Scalar; Fractions keep their exact count/total pair."""
    if isinstance(x, Fraction):
        return {"float": float(x), "ratio": [x.numerator, x.denominator]}
    x = float(x)
    if math.isinf(x):
        return {"float": "Infinity" if x > 0 else "-Infinity"}
    return x


def decode_number(v: Any) -> Scalar:
    if isinstance(v, dict):
        if "ratio" in v:
            return Fraction(v["ratio"][0], v["ratio"][1])
        f = v["float"]
        return math.inf if f == "Infinity" else -math.inf if f == "-Infinity" else float(f)
    return float(v)


# ---------------------------------------------------------------------------
# Functions


def function_to_dict(f: TabulatedFunction) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "arities": list(f.domain.arities),
        "values": [float(v) for v in f.values],
    }
    if f.domain.weights is not None:
        doc["weights"] = [list(row) for row in f.domain.weights]
    return doc


def function_from_dict(doc: dict[str, Any]) -> TabulatedFunction:
    try:
        arities = doc["arities"]
        values = doc["values"]
    except (KeyError, TypeError) as exc:
        raise DomainError("function file needs 'arities' and 'values'") from exc
    weights = doc.get("weights")
    dom = Domain(tuple(int(r) for r in arities), None if weights is None else tuple(map(tuple, weights)))
    return TabulatedFunction(dom, values)


def save_function(f: TabulatedFunction, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(function_to_dict(f), fh)
        fh.write("\n")


def load_function(path: str) -> TabulatedFunction:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed function file {path}: {exc}") from exc
    return function_from_dict(doc)


# ---------------------------------------------------------------------------
# Trees (1-based coordinates on disk)


def tree_to_dict(tree: DecisionTree) -> dict[str, Any]:
    def enc(node: TreeNode) -> dict[str, Any]:
        if isinstance(node, Leaf):
            return {"leaf": node.value}
        return {"var": node.coord + 1, "children": [enc(c) for c in node.children]}

    return enc(tree.root)


def tree_from_dict(doc: dict[str, Any]) -> DecisionTree:
    def dec(node: Any) -> TreeNode:
        if not isinstance(node, dict):
            raise DomainError(f"malformed tree node: {node!r}")
        if "leaf" in node:
            v = node["leaf"]
            return Leaf(None if v is None else float(v))
        if "var" not in node or "children" not in node:
            raise DomainError(f"tree node needs 'var' and 'children': {node!r}")
        return Node(int(node["var"]) - 1, tuple(dec(c) for c in node["children"]))

    return DecisionTree(dec(doc))


def save_tree(tree: DecisionTree, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(tree_to_dict(tree), fh)
        fh.write("\n")


def load_tree(path: str) -> DecisionTree:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed tree file {path}: {exc}") from exc
    return tree_from_dict(doc)


# ---------------------------------------------------------------------------
# Reports


def input_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def new_report(command: str, parameters: dict[str, Any], digest: str | None = None) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "tool_version": TOOL_VERSION,
        "command": command,
        "input_digest": digest,
        "parameters": parameters,
        "sections": {},
    }


def dump_report(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, allow_nan=False, sort_keys=False)


def parse_report(text: str) -> dict[str, Any]:
    return json.loads(text)
