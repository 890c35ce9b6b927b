import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mat
from hermrank.errors import DimensionMismatch, InputError
from hermrank.extremal import analyze
from hermrank.io import (
    instance_from_json,
    instance_to_json,
    load_instance,
    loads_instance,
    matrix_from_json,
    matrix_to_json,
    report_from_json,
    report_to_json,
    save_instance,
)
from hermrank.numeric import EXACT, FLOAT, Matrix, TolerancePolicy
from hermrank.oracle import KINDS, gen_instance
from hermrank.sampling import random_matrix, rng_for


def same_instance(a, b):
    return type(a) is type(b) and a.kind == b.kind and all(
        getattr(a, k) == getattr(b, k) for k in vars(a) if isinstance(getattr(a, k), Matrix))


@given(st.integers(0, 2**32), st.sampled_from(KINDS), st.integers(1, 3))
def test_instance_round_trip(seed, kind, n):
    inst, X = gen_instance(kind, n, seed=seed)
    doc = json.loads(json.dumps(instance_to_json(inst, X)))
    assert same_instance(instance_from_json(doc), inst)
    assert matrix_from_json(doc["witness"])[0] == X


def test_save_and_load(tmp_path):
    inst, X = gen_instance("linear", 2, seed=5)
    path = tmp_path / "inst.json"
    save_instance(path, inst, X)
    assert same_instance(load_instance(path), inst)


def test_matrix_round_trip_with_fractions_and_imaginary_parts():
    M = mat([["1/3", "-2/5+7i"], ["i", 0]])
    doc = matrix_to_json(M)
    assert doc["entries"][0] == ["1/3", "-2/5+7i"]
    assert matrix_from_json(doc) == (M, EXACT)


def test_float_entries_and_pairs():
    M, b = matrix_from_json({"rows": 1, "cols": 2, "entries": [[1.5, [0.0, -2.0]]]})
    assert b == FLOAT and M.backend == FLOAT
    assert M.to_complex()[0, 1] == -2j
    assert matrix_to_json(M)["entries"] == [[1.5, [0.0, -2.0]]]


def test_empty_matrix():
    M, b = matrix_from_json({"rows": 0, "cols": 3, "entries": []})
    assert M.shape == (0, 3) and b is None


def test_conversion_to_float_backend():
    inst, _ = gen_instance("pair", 2, seed=1)
    f = instance_from_json(instance_to_json(inst), backend=FLOAT)
    assert f.A1.backend == FLOAT
    assert abs(f.A1.to_complex() - inst.A1.to_complex()).max() < 1e-12


def doc_with(kind="linear", **mats):
    base = {name: {"rows": 1, "cols": 1, "entries": [["1"]]}
            for name in ("A1", "B1", "A4", "B4")}
    base.update(mats)
    return {"kind": kind, "matrices": base}


@pytest.mark.parametrize("doc, where", [
    ([], "top level"),
    ({"kind": "triple", "matrices": {}}, "kind"),
    ({"kind": "linear"}, "matrices"),
    ({"kind": "linear", "matrices": {"A1": {}}}, "missing"),
    (doc_with(C={"rows": 1, "cols": 1, "entries": [["1"]]}), "unexpected"),
    (doc_with(B1={"rows": 1, "cols": 1, "entries": [["x"]]}), "matrices.B1.entries[0][0]"),
    (doc_with(B1={"rows": 1, "cols": 2, "entries": [["1"]]}), "matrices.B1.entries[0]"),
    (doc_with(B1={"rows": 2, "cols": 1, "entries": [["1"]]}), "matrices.B1.entries"),
    (doc_with(B1={"rows": 1, "entries": [["1"]]}), "missing field 'cols'"),
    (doc_with(B1={"rows": -1, "cols": 1, "entries": []}), "non-negative"),
    (doc_with(B1={"rows": 1, "cols": 1, "entries": [[True]]}), "booleans"),
    (doc_with(B1={"rows": 1, "cols": 2, "entries": [["1", 2.0]]}), "mix"),
    (doc_with(B1={"rows": 1, "cols": 1, "entries": [[2.0]]}), "mixes exact and float"),
])
def test_errors_name_the_field(doc, where):
    with pytest.raises(InputError) as err:
        instance_from_json(doc)
    assert where in str(err.value)


def test_malformed_json_reports_position():
    with pytest.raises(InputError) as err:
        loads_instance('{"kind": "linear",\n  "matrices": }')
    assert "line 2" in str(err.value) and "column" in str(err.value)


def test_shape_errors_surface_at_analysis():
    # files are parsed slot by slot; conformance is checked by the engine
    inst = instance_from_json(doc_with(B1={"rows": 2, "cols": 1, "entries": [["1"], ["2"]]}))
    with pytest.raises(DimensionMismatch):
        analyze(inst)


def test_report_round_trip():
    inst, _ = gen_instance("partitioned", 3, seed=2)
    objs = analyze(inst)
    doc = json.loads(json.dumps(report_to_json(inst.kind, objs, ["premise"], EXACT,
                                               TolerancePolicy())))
    back = report_from_json(doc)
    assert [(n, s) for n, s, _ in back] == [(n, s) for n, s, _ in objs]
    for (_, _, rep), (_, _, decisions) in zip(objs, back):
        assert [d.verdict for _, d in rep.items()] == [d.verdict for d in decisions]
    assert doc["summary"] == objs[0][1].as_dict()


def test_report_without_objectives_list():
    inst, _ = gen_instance("pair", 2, seed=3)
    (_, s, _), = analyze(inst)
    back = report_from_json({"summary": s.as_dict()})
    assert back[0][1] == s


@pytest.mark.parametrize("doc", [{}, {"summary": {"max_rank": 1}}, {"objectives": [{}]}, []])
def test_report_errors(doc):
    with pytest.raises(InputError):
        report_from_json(doc)


def test_random_exact_matrices_round_trip():
    rng = rng_for(0)
    for _ in range(20):
        M = random_matrix(rng, 2, 3, den=5)
        assert matrix_from_json(json.loads(json.dumps(matrix_to_json(M))))[0] == M
