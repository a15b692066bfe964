"""Vectorised census kernels: exhaustive and sampled sweeps over 3x3
matrices that verify the classification and cardinality statements at
scale.

The key trick: for a fixed point P the absolute condition x^T A x^sigma = 0
is linear in the entries of A, and splits over the rows of A as
sum_i P_i * (row_i . P^sigma).  Tables indexed by (row encoding, point)
therefore reduce the absolute count of a matrix to three gathers and two
additions over the full point set, which batches cleanly over millions of
matrices.  Row vectors (a,b,c) are encoded as a*Q^2 + b*Q + c.

Random sampling uses a counter-based SplitMix64 stream so any run is
reproducible from (seed, counter) alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classify import (KIND_CF, KIND_CONE, KIND_DEGENERATE_CF,
                       KIND_KESTENBAND, KIND_TWO_LINES, allowed_cardinalities,
                       classify_plane_form, is_diagonal, kestenband_profile,
                       line_spectrum, lines_points_array)
from .fields import FieldTower
from .forms import SesquiForm, absolute_mask
from .projective import ProjectiveSpace, projective_space

EXHAUSTIVE_CAP = 100_000_000  # matrices up to scalar


class CapExceeded(RuntimeError):
    """The requested exhaustive sweep is beyond the configured budget."""


# -- deterministic counter-based randomness ----------------------------------

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(seed: int, counter: int) -> int:
    """Reference scalar implementation of the sampling stream."""
    z = (seed + (counter + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def rand_stream(seed: int, start: int, count: int) -> np.ndarray:
    c = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = (np.uint64(seed & _MASK64) + c * np.uint64(_GOLDEN))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def sample_matrix_entries(order: int, seed: int, start: int, count: int) -> np.ndarray:
    """(count, 9) matrix entries; sample i consumes counters 9i..9i+8."""
    vals = rand_stream(seed, start, 9 * count)
    return (vals % np.uint64(order)).astype(np.uint32).reshape(count, 9)


# -- the batched absolute-count kernel ----------------------------------------

class PlaneKernel:
    """Per-plane tables mapping row encodings to their point functionals."""

    def __init__(self, space: ProjectiveSpace):
        t = space.tower
        Q = t.order
        self.space = space
        self.tower = t
        self.Q = Q
        n_rows = Q ** 3
        if n_rows * space.n_points > 200_000_000:
            raise CapExceeded("row-functional tables would be too large")
        renc = np.arange(n_rows, dtype=np.int64)
        w = t.vsigma(space.points)
        dtype = np.uint8 if Q <= 256 else np.uint32
        g = t.vadd(t.vadd(t.vmul((renc // (Q * Q)).astype(np.uint32)[:, None], w[None, :, 0]),
                          t.vmul(((renc // Q) % Q).astype(np.uint32)[:, None], w[None, :, 1])),
                   t.vmul((renc % Q).astype(np.uint32)[:, None], w[None, :, 2]))
        self.h = [t.vmul(space.points[:, i][None, :], g).astype(dtype) for i in range(3)]
        del g
        # scalar multiples of every row vector, as encodings
        lam = np.arange(Q, dtype=np.uint32)
        d0 = (renc // (Q * Q)).astype(np.uint32)
        d1 = ((renc // Q) % Q).astype(np.uint32)
        d2 = (renc % Q).astype(np.uint32)
        self.smul = (t.vmul(lam[:, None], d0[None, :]).astype(np.int64) * Q * Q
                     + t.vmul(lam[:, None], d1[None, :]).astype(np.int64) * Q
                     + t.vmul(lam[:, None], d2[None, :]).astype(np.int64))
        self._row_digits = (d0, d1, d2)

    def row_encode(self, entries: np.ndarray) -> tuple:
        """Row encodings (r1, r2, r3) for (K, 9) matrix entry arrays."""
        e = entries.astype(np.int64)
        Q = self.Q
        return tuple(e[:, 3 * i] * Q * Q + e[:, 3 * i + 1] * Q + e[:, 3 * i + 2]
                     for i in range(3))

    def renc_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Coordinate-wise field addition of row encodings."""
        t, Q = self.tower, self.Q
        if t.p == 2:
            return np.bitwise_xor(a, b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for shift in (Q * Q, Q, 1):
            da = ((a // shift) % Q).astype(np.uint32)
            db = ((b // shift) % Q).astype(np.uint32)
            out += t.vadd(da, db).astype(np.int64) * shift
        return out

    def masks(self, r1, r2, r3) -> np.ndarray:
        t = self.tower
        return t.vadd(t.vadd(self.h[0][r1], self.h[1][r2]), self.h[2][r3]) == 0

    def counts(self, r1, r2, r3) -> np.ndarray:
        return self.masks(r1, r2, r3).sum(axis=1)


def plane_kernel(space: ProjectiveSpace) -> PlaneKernel:
    kern = getattr(space, "_kernel", None)
    if kern is None:
        kern = PlaneKernel(space)
        space._kernel = kern
    return kern


# -- vectorised matrix algebra on entry columns -------------------------------

def _vdet3(t: FieldTower, e: np.ndarray) -> np.ndarray:
    """Determinants for (K, 9) entry arrays."""
    def mul(a, b):
        return t.vmul(e[:, a], e[:, b])
    def minor(a, b, c, d):
        return t.vsub(mul(a, d), mul(b, c))
    m0 = minor(4, 5, 7, 8)
    m1 = minor(3, 5, 6, 8)
    m2 = minor(3, 4, 6, 7)
    return t.vadd(t.vsub(t.vmul(e[:, 0], m0), t.vmul(e[:, 1], m1)),
                  t.vmul(e[:, 2], m2))


def _vrank_le1(t: FieldTower, e: np.ndarray) -> np.ndarray:
    """Mask of matrices with all 2x2 minors zero (rank <= 1)."""
    ok = np.ones(len(e), dtype=bool)
    for r1, r2 in ((0, 1), (0, 2), (1, 2)):
        for c1, c2 in ((0, 1), (0, 2), (1, 2)):
            a = 3 * r1 + c1
            b = 3 * r1 + c2
            c = 3 * r2 + c1
            d = 3 * r2 + c2
            ok &= t.vsub(t.vmul(e[:, a], e[:, d]), t.vmul(e[:, b], e[:, c])) == 0
    return ok


def _vcross(t: FieldTower, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    out[:, 0] = t.vsub(t.vmul(u[:, 1], v[:, 2]), t.vmul(u[:, 2], v[:, 1]))
    out[:, 1] = t.vsub(t.vmul(u[:, 2], v[:, 0]), t.vmul(u[:, 0], v[:, 2]))
    out[:, 2] = t.vsub(t.vmul(u[:, 0], v[:, 1]), t.vmul(u[:, 1], v[:, 0]))
    return out


def _first_nonzero_rows(cands) -> np.ndarray:
    """Row-wise first candidate vector that is not identically zero."""
    out = cands[-1].copy()
    taken = np.zeros(len(out), dtype=bool)
    for c in cands:
        nz = c.any(axis=1) & ~taken
        out[nz] = c[nz]
        taken |= nz
    return out


def _pair_eval(t: FieldTower, e: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorised x^T A y^sigma for entry columns e and vector batches x, y."""
    w = t.vsigma(y)
    acc = np.zeros(len(e), dtype=np.uint32)
    for i in range(3):
        row = np.zeros(len(e), dtype=np.uint32)
        for j in range(3):
            row = t.vadd(row, t.vmul(e[:, 3 * i + j], w[:, j]))
        acc = t.vadd(acc, t.vmul(x[:, i], row))
    return acc


# -- census data structures ----------------------------------------------------

@dataclass
class CensusSummary:
    field_params: tuple
    mode: str
    histogram: dict = field(default_factory=dict)
    kind_counts: dict = field(default_factory=dict)
    total: int = 0
    violations: list = field(default_factory=list)
    records: list = field(default_factory=list)

    def add_counts(self, counts: np.ndarray):
        vals, freq = np.unique(counts, return_counts=True)
        for v, f in zip(vals, freq):
            self.histogram[int(v)] = self.histogram.get(int(v), 0) + int(f)
        self.total += int(counts.size)

    def bump(self, kind: str, k: int = 1):
        self.kind_counts[kind] = self.kind_counts.get(kind, 0) + k


def _violation(matrix_entries, reason: str) -> dict:
    return {"matrix": [int(x) for x in matrix_entries], "reason": reason}


# -- exhaustive invertible census ----------------------------------------------

def exhaustive_invertible_census(tower: FieldTower,
                                 check_allowed: bool = True) -> CensusSummary:
    """Absolute-count histogram over all invertible matrices up to scalars.

    Enumerates (projective first row, independent second row, third row off
    the span); every scalar class of GL(3, q^n) appears exactly once.
    """
    space = projective_space(tower, 2)
    Q = tower.order
    if (Q ** 9 - 1) // (Q - 1) > EXHAUSTIVE_CAP:
        raise CapExceeded("exhaustive census beyond the matrix budget; "
                          "use random sampling")
    kern = plane_kernel(space)
    t = tower
    allowed = None
    if check_allowed and tower.n > 1:
        allowed = np.array(sorted(allowed_cardinalities(tower, False)[0]
                                  | allowed_cardinalities(tower, True)[0]),
                           dtype=np.int64)
    summary = CensusSummary(field_params=(t.p, t.e, t.n, t.m), mode="exhaustive-gl")
    proj_rows = (space.points[:, 0].astype(np.int64) * Q * Q
                 + space.points[:, 1].astype(np.int64) * Q
                 + space.points[:, 2].astype(np.int64))
    all_rows = np.arange(Q ** 3, dtype=np.int64)
    for r1 in proj_rows:
        span1 = kern.smul[:, r1]
        ok2 = np.ones(Q ** 3, dtype=bool)
        ok2[span1] = False
        r2s = all_rows[ok2]
        h1r1 = kern.h[0][r1]
        for r2 in r2s:
            span = kern.renc_add(kern.smul[:, r1][:, None],
                                 kern.smul[:, r2][None, :]).ravel()
            ok3 = np.ones(Q ** 3, dtype=bool)
            ok3[span] = False
            r3s = all_rows[ok3]
            base = t.vadd(h1r1, kern.h[1][r2])
            y = t.vadd(base[None, :], kern.h[2][r3s])
            counts = (y == 0).sum(axis=1)
            summary.add_counts(counts)
            if allowed is not None:
                bad = ~np.isin(counts, allowed)
                if bad.any():
                    for r3 in r3s[bad]:
                        summary.violations.append(_violation(
                            _rows_to_entries(Q, r1, r2, int(r3)),
                            "cardinality outside the admissible menu"))
    return summary


def _rows_to_entries(Q: int, r1: int, r2: int, r3: int) -> list:
    out = []
    for r in (r1, r2, r3):
        out.extend([(r // (Q * Q)) % Q, (r // Q) % Q, r % Q])
    return out


def diagonal_census(tower: FieldTower) -> CensusSummary:
    """Absolute counts over invertible diagonal matrices up to scalars."""
    space = projective_space(tower, 2)
    kern = plane_kernel(space)
    t = tower
    Q = t.order
    summary = CensusSummary(field_params=(t.p, t.e, t.n, t.m), mode="diagonal")
    allowed = np.array(sorted(allowed_cardinalities(tower, True)[0]), dtype=np.int64) \
        if tower.n > 1 else None
    bs, cs = np.meshgrid(np.arange(1, Q, dtype=np.int64),
                         np.arange(1, Q, dtype=np.int64), indexing="ij")
    r1 = np.full(bs.size, Q * Q, dtype=np.int64)          # row (1, 0, 0)
    r2 = (bs.ravel() * Q)                                  # row (0, b, 0)
    r3 = cs.ravel()                                        # row (0, 0, c)
    counts = kern.counts(r1, r2, r3)
    summary.add_counts(counts)
    if allowed is not None:
        bad = ~np.isin(counts, allowed)
        for b, c in zip(bs.ravel()[bad], cs.ravel()[bad]):
            summary.violations.append(_violation(
                [1, 0, 0, 0, int(b), 0, 0, 0, int(c)],
                "diagonal cardinality outside the admissible menu"))
    return summary


# -- rank <= 2 exhaustive census -------------------------------------------------

def _enumerate_scalar_classes(Q: int, chunk: int):
    """Yield (K, 9) entry arrays covering every nonzero matrix up to scalars:
    entries before the leading one are zero, the leading entry is 1."""
    for lead in range(9):
        free = 8 - lead
        total = Q ** free
        for start in range(0, total, chunk):
            stop = min(start + chunk, total)
            idx = np.arange(start, stop, dtype=np.int64)
            e = np.zeros((stop - start, 9), dtype=np.uint32)
            e[:, lead] = 1
            rest = idx
            for pos in range(8, lead, -1):
                e[:, pos] = (rest % Q).astype(np.uint32)
                rest //= Q
            yield e


def rank_le2_census(tower: FieldTower, steiner: bool = True,
                    chunk: int = 1 << 16) -> CensusSummary:
    """Exhaustive classification of every rank <= 2 matrix up to scalars.

    Verifies, per matrix: the union-of-lines shape for rank 1; for rank 2,
    the cone / degenerate / non-degenerate split with the expected
    cardinalities, cone base shapes, and (optionally) that the Steiner locus
    of the attached pencil collineation reproduces the absolute set.
    """
    space = projective_space(tower, 2)
    Q = tower.order
    if (Q ** 9 - 1) // (Q - 1) > EXHAUSTIVE_CAP:
        raise CapExceeded("rank<=2 sweep beyond the matrix budget")
    summary = CensusSummary(field_params=(tower.p, tower.e, tower.n, tower.m),
                            mode="exhaustive-rank-le2")
    for e in _enumerate_scalar_classes(Q, chunk):
        singular = _vdet3(tower, e) == 0
        e = e[singular]
        if not len(e):
            continue
        rank1 = _vrank_le1(tower, e)
        _verify_rank1_batch(tower, space, e[rank1], summary)
        _verify_rank2_batch(tower, space, e[~rank1], summary, steiner)
    return summary


def _verify_rank1_batch(tower, space, e, summary):
    if not len(e):
        return
    t = tower
    kern = plane_kernel(space)
    inc = space.incidence()
    cols = [e[:, i::3] for i in range(3)]          # column vectors
    u = _first_nonzero_rows([cols[0], cols[1], cols[2]])
    rows = [e[:, 3 * i:3 * i + 3] for i in range(3)]
    w = _first_nonzero_rows(rows)
    w_tw = t.vfrobq(w, (t.n - t.m) % t.n)
    left_idx = space.index_rows(u)
    right_idx = space.index_rows(w_tw)
    expect = inc[left_idx] | inc[right_idx]
    mask = kern.masks(*kern.row_encode(e))
    ok = (mask == expect).all(axis=1)
    summary.add_counts(mask.sum(axis=1))
    summary.bump(KIND_TWO_LINES, len(e))
    summary.bump("two_lines_coincident", int((left_idx == right_idx).sum()))
    for bad in np.nonzero(~ok)[0]:
        summary.violations.append(_violation(e[bad],
                                             "rank-1 set is not the union of "
                                             "its radical lines"))


_STD = np.eye(3, dtype=np.uint32)


def _verify_rank2_batch(tower, space, e, summary, steiner):
    if not len(e):
        return
    t = tower
    kern = plane_kernel(space)
    mask = kern.masks(*kern.row_encode(e))
    counts = mask.sum(axis=1)
    summary.add_counts(counts)

    rows = [e[:, 3 * i:3 * i + 3] for i in range(3)]
    cols = [e[:, i::3] for i in range(3)]
    null_r = _first_nonzero_rows([_vcross(t, rows[0], rows[1]),
                                  _vcross(t, rows[0], rows[2]),
                                  _vcross(t, rows[1], rows[2])])
    v_r = space.normalize_rows(t.vfrobq(null_r, (t.n - t.m) % t.n))
    v_l = space.normalize_rows(_first_nonzero_rows(
        [_vcross(t, cols[0], cols[1]), _vcross(t, cols[0], cols[2]),
         _vcross(t, cols[1], cols[2])]))
    same = (v_r == v_l).all(axis=1)

    _verify_cone_batch(tower, space, e[same], v_r[same], mask[same],
                       counts[same], summary)
    sel = ~same
    _verify_cf_batch(tower, space, e[sel], v_r[sel], v_l[sel], mask[sel],
                     counts[sel], summary, steiner)


def _verify_cone_batch(tower, space, e, vert, mask, counts, summary):
    if not len(e):
        return
    t = tower
    Q = t.order
    q = t.q
    summary.bump(KIND_CONE, len(e))
    # complement the vertex with two standard basis vectors; the block of
    # the congruent matrix is then just a 2x2 submatrix of A
    pair_idx = np.where(vert[:, 2] != 0, 0,
                        np.where(vert[:, 1] != 0, 1, 2))
    pairs = np.array([[0, 1], [0, 2], [1, 2]])[pair_idx]
    i, j = pairs[:, 0], pairs[:, 1]
    a = e[np.arange(len(e)), 3 * i + i]
    b = e[np.arange(len(e)), 3 * i + j]
    c = e[np.arange(len(e)), 3 * j + i]
    d = e[np.arange(len(e)), 3 * j + j]
    line = projective_space(t, 1)
    lam, mu = line.points[:, 0], line.points[:, 1]
    lam_s, mu_s = t.vsigma(lam), t.vsigma(mu)
    phi = t.vadd(
        t.vmul(lam[None, :], t.vadd(t.vmul(a[:, None], lam_s[None, :]),
                                    t.vmul(b[:, None], mu_s[None, :]))),
        t.vmul(mu[None, :], t.vadd(t.vmul(c[:, None], lam_s[None, :]),
                                   t.vmul(d[:, None], mu_s[None, :]))))
    base_counts = (phi == 0).sum(axis=1)
    ok_size = counts == 1 + base_counts.astype(np.int64) * Q
    ok_base = np.isin(base_counts, [0, 1, 2, q + 1])
    for bad in np.nonzero(~(ok_size & ok_base))[0]:
        summary.violations.append(_violation(e[bad],
                                             "cone cardinality does not match "
                                             "its base shape"))
    # bases with q+1 points must be sublines; confirm via the line machinery
    for k in np.nonzero(base_counts == q + 1)[0]:
        block = ((int(a[k]), int(b[k])), (int(c[k]), int(d[k])))
        ids = np.nonzero(phi[k] == 0)[0]
        if not line.is_fq_subline(ids):
            summary.violations.append(_violation(e[k], "cone base of size q+1 "
                                                       "is not a subline"))
    summary.bump("cone_base_subline", int((base_counts == q + 1).sum()))


def _verify_cf_batch(tower, space, e, v_r, v_l, mask, counts, summary, steiner):
    if not len(e):
        return
    t = tower
    Q = t.order
    kern = plane_kernel(space)
    bval = _pair_eval(t, e, v_r, v_l)
    deg = bval == 0
    summary.bump(KIND_DEGENERATE_CF, int(deg.sum()))
    summary.bump(KIND_CF, int((~deg).sum()))
    expect = np.where(deg, 2 * Q + 1, Q + 1)
    for bad in np.nonzero(counts != expect)[0]:
        summary.violations.append(_violation(e[bad],
                                             "cf cardinality does not match "
                                             "the tangent-line split"))
    if not steiner:
        return
    # build the midpoint column and the pencil block in normal coordinates
    rl = _vcross(t, v_r, v_l)
    k_mid = np.where(rl[:, 0] != 0, 0, np.where(rl[:, 1] != 0, 1, 2))
    mid = _STD[k_mid]
    a = _pair_eval(t, e, v_r, mid)
    c = _pair_eval(t, e, mid, mid)
    d = _pair_eval(t, e, mid, v_l)
    alpha = np.concatenate([np.ones(Q, dtype=np.uint32), [0]])
    beta = np.concatenate([np.arange(Q, dtype=np.uint32), [1]])
    al_s, be_s = t.vsigma(alpha), t.vsigma(beta)
    alp = t.vadd(t.vmul(a[:, None], al_s[None, :]),
                 t.vmul(bval[:, None], be_s[None, :]))
    bep = t.vadd(t.vmul(c[:, None], al_s[None, :]),
                 t.vmul(d[:, None], be_s[None, :]))
    whole_line = (alp == 0) & (alpha[None, :] == 0)
    at_vertex = (alp == 0) & (alpha[None, :] != 0)
    safe = np.where(alp == 0, 1, alp)
    lam = t.vmul(t.vneg(t.vmul(bep, t.vinv(safe))), alpha[None, :])
    K, P = lam.shape
    local = np.empty((K, P, 3), dtype=np.uint32)
    local[:, :, 0] = np.where(at_vertex, 1, lam)
    local[:, :, 1] = np.where(at_vertex, 0, alpha[None, :])
    local[:, :, 2] = np.where(at_vertex, 0, beta[None, :])
    # map through the basis (v_r, mid, v_l)
    orig = np.empty_like(local)
    for coord in range(3):
        acc = t.vmul(v_r[:, coord][:, None], local[:, :, 0])
        acc = t.vadd(acc, t.vmul(mid[:, coord][:, None], local[:, :, 1]))
        acc = t.vadd(acc, t.vmul(v_l[:, coord][:, None], local[:, :, 2]))
        orig[:, :, coord] = acc
    idx = space.index_rows(orig.reshape(K * P, 3)).reshape(K, P)
    member = np.take_along_axis(mask, idx, axis=1)
    single = ~whole_line
    ok = (member | whole_line).all(axis=1)
    # distinctness of the single points
    sort_idx = np.sort(np.where(whole_line, -1, idx), axis=1)
    dup = (sort_idx[:, 1:] == sort_idx[:, :-1]) & (sort_idx[:, 1:] >= 0)
    ok &= ~dup.any(axis=1)
    # totals: singles plus (for the degenerate case) the full line RL
    n_single = single.sum(axis=1)
    rl_idx = space.index_rows(rl)
    has_line = whole_line.any(axis=1)
    if has_line.any():
        lines_pts = lines_points_array(space)[rl_idx[has_line]]
        on_line = np.take_along_axis(mask[has_line], lines_pts, axis=1)
        line_ok = on_line.all(axis=1)
        tmp = ok[has_line]
        tmp &= line_ok
        ok[has_line] = tmp
    totals = n_single + np.where(has_line, Q + 1, 0)
    ok &= totals == counts
    ok &= has_line == deg
    summary.bump("steiner_checked", int(len(e)))
    for bad in np.nonzero(~ok)[0]:
        summary.violations.append(_violation(e[bad],
                                             "steiner locus differs from the "
                                             "absolute set"))


def matrix_ranks(tower: FieldTower, entries: np.ndarray) -> np.ndarray:
    """Vectorised 3x3 ranks (0..3) for (K, 9) entry arrays."""
    det = _vdet3(tower, entries)
    le1 = _vrank_le1(tower, entries)
    nonzero = entries.any(axis=1)
    return np.where(det != 0, 3,
                    np.where(~nonzero, 0, np.where(le1, 1, 2))).astype(np.int64)


def line_census(tower: FieldTower) -> CensusSummary:
    """Exhaustive sweep over all nonzero 2x2 matrices up to scalars: the
    absolute set on PG(1,q^n) must be empty, a point, two points, or an
    F_q-subline (verified point set by point set via reparameterisation)."""
    from .classify import LINE_SUBLINE, classify_line_form
    t = tower
    line = projective_space(t, 1)
    Q = t.order
    pts = line.points
    w = t.vsigma(pts)
    coef = np.stack([t.vmul(pts[:, i], w[:, j]) for i in (0, 1) for j in (0, 1)],
                    axis=1)
    e = _gl2_scalar_classes(Q)
    summary = CensusSummary(field_params=(t.p, t.e, t.n, t.m), mode="line-2x2")
    allowed = np.array([0, 1, 2, t.q + 1], dtype=np.int64)
    for start in range(0, len(e), 1 << 16):
        blk = e[start:start + (1 << 16)]
        phi = np.zeros((len(blk), Q + 1), dtype=np.uint32)
        for k in range(4):
            phi = t.vadd(phi, t.vmul(blk[:, k][:, None], coef[None, :, k]))
        counts = (phi == 0).sum(axis=1)
        summary.add_counts(counts)
        for bad in np.nonzero(~np.isin(counts, allowed))[0]:
            summary.violations.append(_violation(blk[bad],
                                                 "line absolute count outside "
                                                 "{0, 1, 2, q+1}"))
        for k in np.nonzero(counts == t.q + 1)[0]:
            rows = ((int(blk[k, 0]), int(blk[k, 1])),
                    (int(blk[k, 2]), int(blk[k, 3])))
            try:
                cls = classify_line_form(SesquiForm(t, rows), line)
                ok = cls.kind == LINE_SUBLINE
            except AssertionError:
                ok = False
            if ok:
                summary.bump("subline_verified")
            else:
                summary.violations.append(_violation(blk[k],
                                                     "q+1 absolute points do "
                                                     "not form a subline"))
    return summary


def rank1_census(tower: FieldTower) -> CensusSummary:
    """Exhaustive check over every rank-1 matrix up to scalars that the
    absolute set is the union of the two radical lines.

    Scalar classes of rank-1 matrices are exactly the outer products of a
    projective column with a projective row, so the sweep has
    (q^(2n) + q^n + 1)^2 entries and stays feasible where the full rank <= 2
    enumeration does not.
    """
    space = projective_space(tower, 2)
    kern = plane_kernel(space)
    t = tower
    Q = t.order
    inc = space.incidence()
    summary = CensusSummary(field_params=(t.p, t.e, t.n, t.m), mode="rank1")
    proj_rows = (space.points[:, 0].astype(np.int64) * Q * Q
                 + space.points[:, 1].astype(np.int64) * Q
                 + space.points[:, 2].astype(np.int64))
    twisted = space.index_rows(t.vfrobq(space.points, (t.n - t.m) % t.n))
    right_masks = inc[twisted]
    for u_idx in range(space.n_points):
        u = space.points[u_idx]
        rows = [kern.smul[int(u[i]), proj_rows] for i in range(3)]
        mask = kern.masks(rows[0], rows[1], rows[2])
        expect = inc[u_idx][None, :] | right_masks
        ok = (mask == expect).all(axis=1)
        summary.add_counts(mask.sum(axis=1))
        summary.bump(KIND_TWO_LINES, space.n_points)
        summary.bump("two_lines_coincident", int((twisted == u_idx).sum()))
        for w_idx in np.nonzero(~ok)[0]:
            entries = _rows_to_entries(Q, int(rows[0][w_idx]),
                                       int(rows[1][w_idx]), int(rows[2][w_idx]))
            summary.violations.append(_violation(entries,
                                                 "rank-1 set is not the union "
                                                 "of its radical lines"))
    return summary


def _gl2_scalar_classes(Q: int) -> np.ndarray:
    """(K, 4) entries (a, b, c, d) of invertible 2x2 matrices up to scalars."""
    blocks = []
    for lead in range(4):
        free = 3 - lead
        idx = np.arange(Q ** free, dtype=np.int64)
        e = np.zeros((Q ** free, 4), dtype=np.uint32)
        e[:, lead] = 1
        rest = idx
        for pos in range(3, lead, -1):
            e[:, pos] = (rest % Q).astype(np.uint32)
            rest //= Q
        blocks.append(e)
    e = np.concatenate(blocks)
    return e


def rank2_normal_census(tower: FieldTower, steiner: bool = True) -> CensusSummary:
    """Exhaustive sweep over the rank-2 matrices in the two radical-normal
    layouts: distinct radicals at (1,0,0)/(0,0,1) and the coincident-radical
    cone layout, each over all invertible blocks up to scalars."""
    space = projective_space(tower, 2)
    t = tower
    summary = CensusSummary(field_params=(t.p, t.e, t.n, t.m),
                            mode="rank2-normal")
    blk = _gl2_scalar_classes(t.order)
    det = t.vsub(t.vmul(blk[:, 0], blk[:, 3]), t.vmul(blk[:, 1], blk[:, 2]))
    blk = blk[det != 0]
    zero = np.zeros(len(blk), dtype=np.uint32)
    distinct = np.stack([zero, blk[:, 0], blk[:, 1],
                         zero, blk[:, 2], blk[:, 3],
                         zero, zero, zero], axis=1)
    cone = np.stack([zero, zero, zero,
                     zero, blk[:, 0], blk[:, 1],
                     zero, blk[:, 2], blk[:, 3]], axis=1)
    for e in (distinct, cone):
        for start in range(0, len(e), 1 << 15):
            _verify_rank2_batch(tower, space, e[start:start + (1 << 15)],
                                summary, steiner)
    return summary


def rank2_random_census(tower: FieldTower, count: int, seed: int,
                        steiner: bool = True) -> CensusSummary:
    """Full verification of `count` sampled rank-2 matrices in general
    position (deterministic rejection sampling)."""
    space = projective_space(tower, 2)
    t = tower
    summary = CensusSummary(field_params=(t.p, t.e, t.n, t.m),
                            mode=f"rank2-random(seed={seed}, count={count})")
    got = 0
    counter = 0
    while got < count:
        batch = 1 << 15
        e = sample_matrix_entries(t.order, seed, counter, batch)
        counter += 9 * batch
        keep = (_vdet3(t, e) == 0) & ~_vrank_le1(t, e) & e.any(axis=1)
        kept = e[keep][:count - got]
        if len(kept):
            _verify_rank2_batch(tower, space, kept, summary, steiner)
            got += len(kept)
    return summary


# -- random censuses --------------------------------------------------------------

def random_invertible_entries(tower: FieldTower, count: int, seed: int):
    """Deterministic rejection sampling of invertible matrices; the counter
    advances by nine per draw whether or not the draw is kept."""
    out = []
    got = 0
    counter = 0
    while got < count:
        batch = max(1024, count - got + (count - got) // 4)
        e = sample_matrix_entries(tower.order, seed, counter, batch)
        counter += 9 * batch
        keep = _vdet3(tower, e) != 0
        kept = e[keep]
        take = min(len(kept), count - got)
        out.append(kept[:take])
        got += take
    return np.concatenate(out, axis=0)


def random_census(tower: FieldTower, count: int, seed: int,
                  invertible_only: bool = True,
                  collect_records: bool = False,
                  record_limit: int | None = None,
                  steiner: bool = False) -> CensusSummary:
    """Sampled census.  The light mode only histograms absolute counts; with
    `collect_records` every sampled matrix is fully classified and profiled."""
    space = projective_space(tower, 2)
    kern = plane_kernel(space)
    summary = CensusSummary(field_params=(tower.p, tower.e, tower.n, tower.m),
                            mode=f"random(seed={seed}, count={count})")
    if invertible_only:
        entries = random_invertible_entries(tower, count, seed)
    else:
        entries = sample_matrix_entries(tower.order, seed, 0, count)
        entries = entries[entries.any(axis=1)]
    allowed = None
    if invertible_only and tower.n > 1:
        allowed = np.array(sorted(allowed_cardinalities(tower, False)[0]
                                  | allowed_cardinalities(tower, True)[0]),
                           dtype=np.int64)
    for start in range(0, len(entries), 4096):
        e = entries[start:start + 4096]
        counts = kern.counts(*kern.row_encode(e))
        summary.add_counts(counts)
        if allowed is not None:
            for bad in np.nonzero(~np.isin(counts, allowed))[0]:
                summary.violations.append(_violation(
                    e[bad], "cardinality outside the admissible menu"))
    if collect_records:
        limit = len(entries) if record_limit is None else min(record_limit,
                                                              len(entries))
        summary.records = [form_record(SesquiForm(tower, _to_rows(entries[i])),
                                       space, steiner=steiner)
                           for i in range(limit)]
        for rec in summary.records:
            summary.bump(rec["kind"])
            for v in rec["violations"]:
                summary.violations.append({"matrix": rec["matrix"], "reason": v})
    return summary


def _to_rows(entries) -> tuple:
    e = [int(x) for x in entries]
    return tuple(tuple(e[3 * i:3 * i + 3]) for i in range(3))


def form_record(form: SesquiForm, space: ProjectiveSpace | None = None,
                steiner: bool = False, spectrum: bool = True) -> dict:
    """One census record: classification, cardinality, profile, spectrum."""
    space = space or form.space()
    t = form.tower
    Q = t.order
    cls = classify_plane_form(form, space)
    rec = {
        "matrix": [x for row in form.matrix for x in row],
        "rank": cls.rank,
        "kind": cls.kind,
        "absolute": cls.absolute_count,
        "family": None,
        "epsilon": None,
        "fixed_in": None,
        "fixed_out": None,
        "spectrum": {},
        "violations": [],
    }
    violations = []
    if spectrum:
        spec = line_spectrum(cls.point_ids, space)
        vals, freq = np.unique(spec, return_counts=True)
        rec["spectrum"] = {int(v): int(f) for v, f in zip(vals, freq)}
        legal = {0, 1, 2, t.q + 1, Q + 1}
        if not set(rec["spectrum"]) <= legal:
            violations.append(f"line intersections {sorted(set(rec['spectrum']) - legal)} "
                              "outside {0, 1, 2, q+1, full}")
        if Q + 1 in rec["spectrum"] and cls.rank == 3:
            violations.append("an invertible form may not contain a line")
    if cls.rank == 3 and t.n > 1:
        prof = kestenband_profile(form, space)
        rec.update(family=prof.family, epsilon=prof.epsilon,
                   fixed_in=prof.fixed_in, fixed_out=prof.fixed_out)
        violations.extend(prof.violations)
    elif cls.rank == 2 and cls.kind in (KIND_CF, KIND_DEGENERATE_CF):
        expect = 2 * Q + 1 if cls.kind == KIND_DEGENERATE_CF else Q + 1
        if cls.absolute_count != expect:
            violations.append(f"expected {expect} absolute points, "
                              f"got {cls.absolute_count}")
        if steiner:
            from .cfsets import steiner_matches_form
            if not steiner_matches_form(form, space):
                violations.append("steiner locus differs from the absolute set")
    rec["violations"] = violations
    return rec
