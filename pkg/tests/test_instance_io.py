"""Tests for reading and writing instance files."""

import json

import numpy as np
import pytest

from regsubmod import InstanceParseError, Partition, dump_instance, load_instance, loads_instance
from regsubmod.basic_utils import instance_from_dict, instance_to_dict
from regsubmod.bench import random_coverage, random_dicut

TEXT = """{
  "n": 3,
  "f": {"type": "dicut", "edges": [[0, 1, 1.0], [1, 2, 0.5]]},
  "ell": [0.0, -0.2, 0.1],
  "constraint": {"type": "cardinality", "k": 2}
}
"""


def test_loads_instance():
    """Test parsing a small directed cut with a cardinality constraint."""
    inst = loads_instance(TEXT)
    assert inst.n == 3
    assert inst.f.kind == "dicut"
    assert inst.objective({0}) == pytest.approx(1.0)
    assert inst.constraint is not None
    assert inst.constraint.is_independent({0, 1})
    assert not inst.constraint.is_independent({0, 1, 2})


def test_missing_ell_defaults_to_zero():
    """Test that an omitted ℓ is the zero function."""
    inst = instance_from_dict({"n": 2, "f": {"type": "cut", "edges": [[0, 1, 1.0]]}})
    assert inst.ell.is_zero()
    assert inst.constraint is None


def test_round_trip_through_file(tmp_path):
    """Test dump then load for a dicut and a coverage instance."""
    for inst in (random_dicut(5, seed=4), random_coverage(4, seed=2)):
        path = dump_instance(inst, tmp_path / "nested" / f"{inst.f.kind}.json")
        loaded = load_instance(path)
        assert np.allclose(loaded.f.values_all(), inst.f.values_all())
        assert np.allclose(loaded.ell.weights, inst.ell.weights)


def test_partition_constraint_serialized():
    """Test that partition blocks and caps are written out."""
    inst = random_dicut(4, seed=1, constraint=Partition(4, (frozenset({0, 1}), frozenset({2, 3})), (1, 2)))
    data = instance_to_dict(inst)
    assert data["constraint"] == {"type": "partition", "blocks": [[0, 1], [2, 3]], "caps": [1, 2]}
    assert json.loads(json.dumps(data)) == data


def test_invalid_json_reports_line():
    """Test that syntax errors carry the line number."""
    with pytest.raises(InstanceParseError) as exc_info:
        loads_instance('{\n  "n": 3,\n  "f": oops\n}', path="bad.json")
    assert exc_info.value.line == 3
    assert exc_info.value.path == "bad.json"


def test_out_of_range_edge_reports_field_line():
    """Test that an invalid edge points at the line of the f field."""
    text = TEXT.replace("[1, 2, 0.5]", "[1, 7, 0.5]")
    with pytest.raises(InstanceParseError) as exc_info:
        loads_instance(text)
    assert exc_info.value.line == 3


def test_unknown_function_type():
    """Test that an unknown function type is rejected."""
    with pytest.raises(InstanceParseError):
        loads_instance('{"n": 2, "f": {"type": "matching"}}')


def test_non_object_rejected():
    """Test that the top level must be an object."""
    with pytest.raises(InstanceParseError):
        loads_instance("[1, 2, 3]")


def test_missing_file(tmp_path):
    """Test that an unreadable path is a parse error with the path attached."""
    with pytest.raises(InstanceParseError) as exc_info:
        load_instance(tmp_path / "missing.json")
    assert exc_info.value.path.endswith("missing.json")
