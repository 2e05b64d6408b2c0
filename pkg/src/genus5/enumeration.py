"""Exhaustive search for non-special sextics with many GF(9)-points.

For a configuration of singular points the sextics singular there form a
linear system.  Its GF(3)-rational null space is enumerated projectively
(first nonzero coordinate equal to 1, so each sextic appears once up to
scalar) and every candidate passes through a filter pipeline:

1. exact multiplicity at every configured point,
2. N1 = #C(GF(9)) >= N, from a vectorized count on P^2(GF(9)),
3. geometric irreducibility,
4. the singular locus is exactly the configuration, each point resolved by one blow-up.

Stages 1 and 2 are F3-linear in the coefficient vector and run on numpy
batches; only survivors reach the exact per-candidate checks.
"""
from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .field_tower import embed_value, get_field
from .linear_algebra import Matrix, NullBasis, galois_descent_nullspace, intersect_affine, rank
from .point_counting import (count_vector, irreducibility_report, weil_from_counts, _p2_points)
from .polynomials.forms import SEXTIC_MONOMIALS, MPoly, sextic_from_vector, taylor_terms
from .singularity import SingularConfig, non_special_report

log = logging.getLogger(__name__)

RECORD_SCHEMA = 1
STAGES = ("multiplicity", "count", "irreducible", "non_special")
DEFAULT_BATCH = 1 << 15


# --- the linear system ---------------------------------------------------------

def _point_rows(P, degree, field_degree):
    """Rows (one per monomial X^s Y^t with s + t == degree) of Taylor coefficients at P."""
    E = get_field(field_degree)
    Q = P.embed(field_degree)
    exps = [(s, degree - s) for s in range(degree, -1, -1)]
    rows = {st: [0] * 28 for st in exps}
    for i, m in enumerate(SEXTIC_MONOMIALS):
        for st, v in taylor_terms(m, Q, E).items():
            if st in rows:
                rows[st][i] = v
    return [rows[st] for st in exps]


def build_system(config: SingularConfig) -> Matrix:
    """Vanishing conditions of order m at every configured point, over the compositum."""
    L = config.compositum_degree
    rows = []
    for P, m in config.points:
        for deg in range(m):
            rows.extend(_point_rows(P, deg, L))
    return Matrix.from_rows(L, rows)


def solution_basis(config: SingularConfig) -> NullBasis:
    return galois_descent_nullspace(build_system(config), 28)


@dataclass
class PointDiscriminant:
    """Delta(h_P) = b^2 - ac as a function of the sextic's coefficients."""

    point: object
    a: list
    b: list
    c: list

    def evaluate(self, coeffs):
        E = self.point.field
        lin = []
        for row in (self.a, self.b, self.c):
            acc = 0
            for w, x in zip(row, coeffs):
                x %= 3
                if w and x:
                    acc = E.add(acc, w if x == 1 else E.neg(w))
            lin.append(acc)
        a, b, c = lin
        return E.sub(E.mul(b, b), E.mul(a, c))


def discriminant_precompute(config: SingularConfig):
    out = []
    for P, m in config.points:
        if m != 2:
            raise ValueError("discriminants are defined for double points only")
        a, b, c = _point_rows(P, 2, P.field_degree)  # X^2, XY, Y^2
        out.append(PointDiscriminant(P, a, b, c))
    return out


# --- vectorized prefilter ----------------------------------------------------

def _digits_of_values(vals, k):
    """(len(vals), k) F3 digits of stored GF(3^k) values."""
    E = get_field(k)
    packed = E.val_to_pack[np.asarray(vals, dtype=np.int64)]
    out = np.zeros((packed.shape[0], k), dtype=np.int64)
    for j in range(k):
        out[:, j] = packed % 3
        packed = packed // 3
    return out


def _p2_f9_table():
    """(28, 91 * 2) digit table: column block per point of P^2(GF(9))."""
    E = get_field(2)
    X, Y, Z = _p2_points(2)
    cols = []
    for m in SEXTIC_MONOMIALS:
        v = np.ones_like(X)
        for col, k in zip((X, Y, Z), m):
            if k:
                v = E.vmul(v, E.vpow(col, k))
        cols.append(_digits_of_values(v, 2).reshape(-1))
    return np.array(cols, dtype=np.int64)


def _cone_tables(P, m):
    """Digit tables for the degree-m Taylor part at P.

    Returns (nonzero table over GF(3^k), evaluation table on P^1(GF(9)) or
    None when P is not GF(9)-rational).
    """
    k = P.field_degree
    rows = _point_rows(P, m, k)  # coefficient of X^(m-t) Y^t, t = 0..m
    coef = np.array([_digits_of_values(r, k) for r in rows])  # (m+1, 28, k)
    nz = coef.transpose(1, 0, 2).reshape(28, -1)
    if 2 % k:
        return nz, None
    E = get_field(2)
    emb = [[embed_value(v, k, 2) for v in r] for r in rows]
    pts = [(1, u) for u in range(E.q)] + [(0, 1)]
    cols = []
    for x, y in pts:
        vals = []
        for i in range(28):
            acc = 0
            for t in range(m + 1):
                w = emb[t][i]
                if not w:
                    continue
                mon = E.mul(E.pow(x, m - t) if x else int(m - t == 0), E.pow(y, t) if y else int(t == 0))
                acc = E.add(acc, E.mul(w, mon))
            vals.append(acc)
        cols.append(_digits_of_values(vals, 2))
    ev = np.stack(cols, axis=1).reshape(28, -1)
    return nz, ev


@dataclass
class Prefilter:
    """F3-linear maps whose zero patterns give multiplicities and #C(GF(9))."""

    table: np.ndarray  # (28, K)
    nz_slices: list
    ev_slices: list
    p2_slice: slice

    @classmethod
    def build(cls, config: SingularConfig):
        blocks = [_p2_f9_table()]
        p2 = slice(0, blocks[0].shape[1])
        pos = p2.stop
        nz_s, ev_s = [], []
        for P, m in config.points:
            nz, ev = _cone_tables(P, m)
            blocks.append(nz)
            nz_s.append(slice(pos, pos + nz.shape[1]))
            pos += nz.shape[1]
            if ev is not None:
                blocks.append(ev)
                ev_s.append(slice(pos, pos + ev.shape[1]))
                pos += ev.shape[1]
        return cls(np.concatenate(blocks, axis=1), nz_s, ev_s, p2)

    def evaluate(self, values):
        """values: (n, K) residues of C @ table.  Returns (multiplicity ok, N1)."""
        ok = np.ones(values.shape[0], dtype=bool)
        for s in self.nz_slices:
            ok &= values[:, s].any(axis=1)
        p2 = values[:, self.p2_slice].reshape(values.shape[0], -1, 2)
        n1 = (~p2.any(axis=2)).sum(axis=1)
        for s in self.ev_slices:
            ev = values[:, s].reshape(values.shape[0], -1, 2)
            n1 += (~ev.any(axis=2)).sum(axis=1) - 1
        return ok, n1


# --- candidate indexing --------------------------------------------------------

def projective_total(d: int) -> int:
    return (3 ** d - 1) // 2


def index_to_vector_ints(t, d: int):
    """Mixed-radix integers n (digits v1..vd, v1 most significant) for projective indices t."""
    t = np.asarray(t, dtype=np.int64)
    # block j holds (3^j - 1)/2 <= t < (3^(j+1) - 1)/2, i.e. leading digit 1 at position j
    starts = np.array([(3 ** j - 1) // 2 for j in range(d + 1)], dtype=np.int64)
    j = np.searchsorted(starts, t, side="right") - 1
    return t + (3 ** j + 1) // 2


def ints_to_digits(n, d: int):
    n = np.asarray(n, dtype=np.int64).copy()
    out = np.zeros((n.shape[0], d), dtype=np.int64)
    for i in range(d - 1, -1, -1):
        out[:, i] = n % 3
        n //= 3
    return out


def candidate_vectors(task: "SearchTask", start: int, stop: int):
    """(indices, v digits, coefficient vectors) for candidate indices in [start, stop)."""
    t = np.arange(start, stop, dtype=np.int64)
    B = task.basis.as_array()
    d = task.basis.dim
    n = t if task.affine else index_to_vector_ints(t, d)
    V = ints_to_digits(n, d)
    C = V @ B if d else np.zeros((len(t), 28), dtype=np.int64)
    if task.particular is not None:
        C = C + np.asarray(task.particular, dtype=np.int64)
    return t, V, C % 3


# --- tasks -------------------------------------------------------------------

@dataclass
class SearchTask:
    config: SingularConfig
    basis: NullBasis
    N: int
    start: int = 0
    end: int | None = None
    particular: tuple | None = None
    affine: bool = False
    label: str = ""

    def __post_init__(self):
        if self.end is None:
            self.end = self.total
        if not 0 <= self.start <= self.end <= self.total:
            raise ValueError(f"range [{self.start}, {self.end}) outside 0..{self.total}")

    @property
    def total(self):
        d = self.basis.dim
        return 3 ** d if self.affine else projective_total(d)

    def sub_ranges(self, size):
        return [(s, min(s + size, self.end)) for s in range(self.start, self.end, size)]


def case_ii_tasks(config: SingularConfig, N: int, slots, tuples, label=""):
    """One affine task per admissible (b1, b2, b3), on the intersected null space."""
    B = solution_basis(config)
    out = []
    for bt in tuples:
        res = intersect_affine(B, dict(zip(slots, bt)))
        if res is None:
            log.info("b = %s is incompatible with the configuration", bt)
            continue
        part, hom = res
        out.append(SearchTask(config, hom, N, particular=part, affine=True,
                              label=f"{label}b={''.join(map(str, bt))}"))
    return out


# --- records ---------------------------------------------------------------------

@dataclass
class CandidateRecord:
    index: int
    vector: tuple
    sextic: str
    trace: str
    counts: tuple = ()
    weil: tuple = ()
    weil_factored: str = ""
    task: str = ""

    def to_json(self):
        return {"schema": RECORD_SCHEMA, "task": self.task, "index": self.index,
                "vector": "".join(map(str, self.vector)), "sextic": self.sextic, "trace": self.trace,
                "N": list(self.counts), "weil": list(self.weil), "weil_factored": self.weil_factored}

    @classmethod
    def from_json(cls, d):
        return cls(d["index"], tuple(int(c) for c in d["vector"]), d["sextic"], d["trace"],
                   tuple(d["N"]), tuple(d["weil"]), d["weil_factored"], d.get("task", ""))


def exact_filters(F: MPoly, config: SingularConfig):
    """Stages 3 and 4 for one candidate; returns the failing stage or None."""
    if not irreducibility_report(F).irreducible:
        return "irreducible"
    if not non_special_report(F, config, check_irreducible=False).ok:
        return "non_special"
    return None


def finish_record(F, config, index, vec, task_label):
    cv = count_vector(F, config)
    W = weil_from_counts(cv.N)
    return CandidateRecord(index, tuple(int(x) for x in vec), str(F), "pass", cv.N, W.coeffs,
                           W.factored(), task_label)


@dataclass
class RangeResult:
    start: int
    stop: int
    visited: int = 0
    rejected: dict = field(default_factory=lambda: {s: 0 for s in STAGES})
    records: list = field(default_factory=list)

    def merge(self, other: "RangeResult"):
        self.visited += other.visited
        for k, v in other.rejected.items():
            self.rejected[k] += v
        self.records.extend(other.records)


def run_range(task: SearchTask, start: int, stop: int, prefilter: Prefilter | None = None,
              batch: int = DEFAULT_BATCH) -> RangeResult:
    pre = prefilter or Prefilter.build(task.config)
    BT = None
    res = RangeResult(start, stop)
    for s in range(start, stop, batch):
        e = min(s + batch, stop)
        idx, _V, C = candidate_vectors(task, s, e)
        if BT is None:
            BT = pre.table.astype(np.float32)
        vals = np.rint(C.astype(np.float32) @ BT).astype(np.int64) % 3
        ok, n1 = pre.evaluate(vals)
        res.visited += len(idx)
        res.rejected["multiplicity"] += int((~ok).sum())
        keep = ok & (n1 >= task.N)
        res.rejected["count"] += int((ok & ~keep).sum())
        for i in np.nonzero(keep)[0]:
            F = sextic_from_vector(C[i])
            stage = exact_filters(F, task.config)
            if stage:
                res.rejected[stage] += 1
                continue
            rec = finish_record(F, task.config, int(idx[i]), C[i], task.label)
            if rec.counts[0] != int(n1[i]):
                raise AssertionError(f"vectorized N1 {n1[i]} disagrees with exact count {rec.counts[0]}")
            res.records.append(rec)
    return res


# --- checkpointed, parallel driver -------------------------------------------------

class SearchInterrupted(RuntimeError):
    pass


def _part_paths(ckdir: Path, task_id: str, start: int):
    stem = f"{task_id}.{start:012d}"
    return ckdir / f"{stem}.state.json", ckdir / f"{stem}.jsonl"


def _run_part(task: SearchTask, task_id: str, start: int, stop: int, ckdir: str | None, batch: int):
    """Worker entry point: process [start, stop) with a resumable state file."""
    if ckdir is None:
        return run_range(task, start, stop, batch=batch)
    ck = Path(ckdir)
    ck.mkdir(parents=True, exist_ok=True)
    state_p, rec_p = _part_paths(ck, task_id, start)
    state = {"next": start, "visited": 0, "rejected": {s: 0 for s in STAGES}}
    if state_p.exists():
        state = json.loads(state_p.read_text())
    # drop records written past the last committed position
    kept = []
    if rec_p.exists():
        for line in rec_p.read_text().splitlines():
            r = json.loads(line)
            if r["index"] < state["next"]:
                kept.append(line)
        rec_p.write_text("".join(x + "\n" for x in kept))
    pre = Prefilter.build(task.config)
    pos = state["next"]
    while pos < stop:
        e = min(pos + batch, stop)
        r = run_range(task, pos, e, pre, batch)
        with rec_p.open("a") as fh:
            for rec in r.records:
                fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
        state["visited"] += r.visited
        for k, v in r.rejected.items():
            state["rejected"][k] += v
        state["next"] = e
        tmp = state_p.parent / (state_p.name + ".tmp")
        tmp.write_text(json.dumps(state))
        os.replace(tmp, state_p)
        pos = e
    out = RangeResult(start, stop, state["visited"], state["rejected"])
    if rec_p.exists():
        out.records = [CandidateRecord.from_json(json.loads(x)) for x in rec_p.read_text().splitlines() if x]
    return out


@dataclass
class SearchSummary:
    total: int
    visited: int
    rejected: dict
    survivors: list
    seconds: float

    def to_json(self):
        return {"total": self.total, "visited": self.visited, "rejected": self.rejected,
                "survivors": len(self.survivors), "seconds": round(self.seconds, 2)}


def iterate_candidates(task: SearchTask, sink=None, workers: int = 1, checkpoint_dir=None,
                       part_size: int = 1 << 17, batch: int = DEFAULT_BATCH, task_id: str = "task",
                       progress=None) -> SearchSummary:
    """Run the filter pipeline over the task's range; survivors go to ``sink`` sorted by index."""
    t0 = time.time()
    parts = task.sub_ranges(part_size)
    total = RangeResult(task.start, task.end)
    if checkpoint_dir is not None:
        Path(checkpoint_dir).mkdir(parents=True, exist_ok=True)
    if workers <= 1:
        for s, e in parts:
            total.merge(_run_part(task, task_id, s, e, checkpoint_dir, batch))
            if progress:
                progress(total.visited, task.end - task.start)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_run_part, task, task_id, s, e, checkpoint_dir, batch) for s, e in parts]
            for f in as_completed(futs):
                total.merge(f.result())
                if progress:
                    progress(total.visited, task.end - task.start)
    total.records.sort(key=lambda r: r.index)
    if sink is not None:
        for r in total.records:
            sink(r)
    if total.visited != task.end - task.start:
        raise AssertionError("visited count does not match the range")
    if sum(total.rejected.values()) + len(total.records) != total.visited:
        raise AssertionError("stage counters do not add up")
    return SearchSummary(task.end - task.start, total.visited, total.rejected, total.records, time.time() - t0)


# --- slow reference path -------------------------------------------------------------

def slow_filter(F: MPoly, config: SingularConfig, N: int):
    """The same decision taken candidate by candidate with exact arithmetic only.

    Returns (stage or None, N1).
    """
    from .point_counting import count_smooth_model
    from .singularity import multiplicity
    for P, m in config.points:
        if multiplicity(F, P) != m:
            return "multiplicity", None
    if not irreducibility_report(F).irreducible:
        return "irreducible", None
    if not non_special_report(F, config, check_irreducible=False).ok:
        return "non_special", None
    n1 = count_smooth_model(F, config, 2)
    if n1 < N:
        return "count", n1
    return None, n1


def projective_key(vec):
    """Normalize a residue vector so that its first nonzero entry is 1."""
    v = [int(x) % 3 for x in vec]
    lead = next((x for x in v if x), 1)
    return tuple(x * lead % 3 for x in v)  # lead^-1 = lead in GF(3)


def config_summary(config: SingularConfig, basis: NullBasis | None = None):
    B = basis or solution_basis(config)
    M = build_system(config)
    return {"points": [[str(P), m] for P, m in config.points], "rows": M.shape[0],
            "rank": rank(M), "d": B.dim, "basis_digest": B.digest(),
            "compositum": config.compositum_degree}
