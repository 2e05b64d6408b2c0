import itertools
import json
import random

import numpy as np
import pytest

from genus5.enumeration import (STAGES, CandidateRecord, Prefilter, SearchTask, _part_paths, _run_part,
                                build_system, candidate_vectors, case_ii_tasks, config_summary,
                                discriminant_precompute, index_to_vector_ints, ints_to_digits,
                                iterate_candidates, projective_key, projective_total, run_range,
                                slow_filter, solution_basis)
from genus5.field_tower import get_field
from genus5.fixtures import case_ii_constraints, listed_representatives, reference_curves
from genus5.linear_algebra import Matrix, NullBasis, rank
from genus5.point_counting import count_smooth_model
from genus5.polynomials.forms import sextic_from_vector, sextic_to_residues
from genus5.singularity import discriminant, multiplicity, tangent_cone


@pytest.fixture(scope="module")
def example2():
    return next(c for c in reference_curves() if c.name == "example-2")


@pytest.fixture(scope="module")
def slice_task(example2):
    """A 7-dimensional slice of the null space that contains the example (2) sextic."""
    B = solution_basis(example2.config)
    rows = [tuple(int(x) for x in sextic_to_residues(example2.form))] + list(B.vectors[:6])
    F = get_field(1)
    assert rank(Matrix.from_rows(1, [[F.from_int(x) for x in r] for r in rows])) == 7
    return NullBasis(tuple(rows))


def test_projective_indexing_is_a_bijection():
    d = 5
    t = np.arange(projective_total(d))
    V = ints_to_digits(index_to_vector_ints(t, d), d)
    keys = {tuple(v) for v in V}
    assert len(keys) == projective_total(d)
    for v in V:
        lead = next(x for x in v if x)
        assert lead == 1
    assert {projective_key(v) for v in itertools.product(range(3), repeat=d) if any(v)} == keys


def test_null_space_members_are_singular_at_the_configuration(example2):
    B = solution_basis(example2.config)
    assert B.dim == 13
    rng = random.Random(1)
    for _ in range(20):
        v = [rng.randrange(3) for _ in range(B.dim)]
        F = sextic_from_vector(B.combine(v))
        if not F:
            continue
        for P, m in example2.config.points:
            assert multiplicity(F, P) >= m


def test_prefilter_matches_exact_evaluation(example2):
    cfg = example2.config
    B = solution_basis(cfg)
    task = SearchTask(cfg, B, 0)
    pre = Prefilter.build(cfg)
    rng = random.Random(2)
    starts = [rng.randrange(task.total - 64) for _ in range(4)]
    checked = 0
    for s in starts:
        _idx, _V, C = candidate_vectors(task, s, s + 64)
        vals = (C @ pre.table) % 3
        ok, n1 = pre.evaluate(vals)
        for i in range(len(C)):
            F = sextic_from_vector(C[i])
            exact_ok = all(multiplicity(F, P) == m for P, m in cfg.points)
            assert bool(ok[i]) == exact_ok
            if exact_ok:
                assert int(n1[i]) == count_smooth_model(F, cfg, 2)
                checked += 1
    assert checked > 20


def test_discriminant_precompute(example2):
    cfg = example2.config
    B = solution_basis(cfg)
    ds = discriminant_precompute(cfg)
    rng = random.Random(3)
    for _ in range(10):
        c = B.combine([rng.randrange(3) for _ in range(B.dim)])
        F = sextic_from_vector(c)
        if not F:
            continue
        for D in ds:
            h = tangent_cone(F, D.point) if multiplicity(F, D.point) == 2 else None
            if h is not None:
                assert D.evaluate(c) == discriminant(h)


@pytest.mark.parametrize("N", [32, 28])
def test_search_is_complete_on_a_slice(example2, slice_task, N):
    """Every nonzero vector through the exact filters in the original order, against the pipeline."""
    cfg = example2.config
    task = SearchTask(cfg, slice_task, N)
    res = run_range(task, 0, task.total)
    fast = {projective_key(r.vector) for r in res.records}
    slow = set()
    A = slice_task.as_array()
    for v in itertools.product(range(3), repeat=slice_task.dim):
        if not any(v):
            continue
        c = np.array(v) @ A % 3
        stage, _n1 = slow_filter(sextic_from_vector(c), cfg, N)
        if stage is None:
            slow.add(projective_key(c))
    assert fast == slow
    if N == 32:
        assert projective_key(sextic_to_residues(example2.form)) in fast
    assert sum(res.rejected.values()) + len(res.records) == res.visited == task.total


def test_checkpoint_resume(example2, slice_task, tmp_path):
    task = SearchTask(example2.config, slice_task, 28)
    whole = run_range(task, 0, task.total)
    ck = tmp_path / "ck"
    # run the first half of one part, then simulate a crash leaving a stray record
    part = (0, task.total)
    _run_part(task, "t", 0, 500, str(ck), 128)
    state_p, rec_p = _part_paths(ck, "t", 0)
    state = json.loads(state_p.read_text())
    assert state["next"] == 500
    with rec_p.open("a") as fh:
        fh.write(json.dumps({**whole.records[-1].to_json(), "index": 10 ** 6}) + "\n")
    resumed = _run_part(task, "t", *part, str(ck), 128)
    assert resumed.visited == task.total
    assert [r.index for r in resumed.records] == [r.index for r in whole.records]
    assert resumed.rejected == whole.rejected


def test_parallel_driver_agrees_with_serial(example2, slice_task, tmp_path):
    task = SearchTask(example2.config, slice_task, 28)
    got = []
    summary = iterate_candidates(task, sink=got.append, workers=2, checkpoint_dir=tmp_path,
                                 part_size=300, batch=64, task_id="par")
    serial = run_range(task, 0, task.total)
    assert [r.index for r in got] == [r.index for r in serial.records]
    assert summary.rejected == serial.rejected
    assert set(summary.rejected) == set(STAGES)
    # rerunning over the same checkpoint directory does no new work and returns the same result
    again = iterate_candidates(task, workers=1, checkpoint_dir=tmp_path, part_size=300, batch=64, task_id="par")
    assert again.rejected == summary.rejected and len(again.survivors) == len(got)


def test_record_json_roundtrip(example2, slice_task):
    res = run_range(SearchTask(example2.config, slice_task, 32), 0, 200)
    for r in res.records:
        assert CandidateRecord.from_json(json.loads(json.dumps(r.to_json()))) == r


def test_system_shape(example2):
    M = build_system(example2.config)
    assert M.shape == (15, 28)
    s = config_summary(example2.config)
    assert s["d"] == 13 and s["rank"] == 15


def test_case_ii_tasks():
    cfg = listed_representatives("II:2")[0]
    B = solution_basis(cfg)
    assert B.dim == 16
    slots, tuples = case_ii_constraints("II:2")
    tasks = case_ii_tasks(cfg, 32, slots, tuples)
    assert tasks
    for t in tasks:
        assert t.affine and t.total == 3 ** t.basis.dim
        _i, _V, C = candidate_vectors(t, 0, min(50, t.total))
        for c in C:
            F = sextic_from_vector(c)
            for P, m in cfg.points:
                assert multiplicity(F, P) >= m


def test_range_validation(example2):
    B = solution_basis(example2.config)
    with pytest.raises(ValueError):
        SearchTask(example2.config, B, 32, start=5, end=2)
