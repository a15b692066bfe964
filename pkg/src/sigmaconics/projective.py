"""Points, lines, pencils, sublines and subplanes of PG(1,q^n) and PG(2,q^n).

Projective points are stored normalized (leading nonzero coordinate 1) and
enumerated in ascending lexicographic order of their coordinate encodings,
so indices are reproducible and can be computed arithmetically.  Lines of
PG(2,q^n) are represented by dual coordinates with the same normalization
and ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fields import FieldTower, build_field
from .linalg import cross3, dot, mat_det, normalize

_INCIDENCE_MAX_CELLS = 64_000_000


@dataclass(frozen=True)
class Subplane:
    """A PG(2,q) subgeometry given by its point set and a frame."""
    point_ids: frozenset
    frame: tuple
    q: int


@dataclass(frozen=True)
class Pencil:
    center: int
    line_ids: tuple


class ProjectiveSpace:
    """PG(d, q^n) for d in {1, 2} over a FieldTower."""

    def __init__(self, tower: FieldTower, d: int):
        if d not in (1, 2):
            raise ValueError("only PG(1,.) and PG(2,.) are supported")
        self.tower = tower
        self.d = d
        Q = tower.order
        self.n_points = (Q ** (d + 1) - 1) // (Q - 1)
        self.points = self._enumerate()
        self._incidence = None
        self._pencils = None

    def _enumerate(self) -> np.ndarray:
        Q = self.tower.order
        if self.d == 1:
            pts = np.zeros((Q + 1, 2), dtype=np.uint32)
            pts[0] = (0, 1)
            pts[1:, 0] = 1
            pts[1:, 1] = np.arange(Q)
        else:
            pts = np.zeros((self.n_points, 3), dtype=np.uint32)
            pts[0] = (0, 0, 1)
            pts[1:Q + 1, 1] = 1
            pts[1:Q + 1, 2] = np.arange(Q)
            pts[Q + 1:, 0] = 1
            pts[Q + 1:, 1] = np.repeat(np.arange(Q), Q)
            pts[Q + 1:, 2] = np.tile(np.arange(Q), Q)
        return pts

    # -- indexing ------------------------------------------------------------

    def point_vec(self, idx: int) -> tuple:
        return tuple(int(c) for c in self.points[idx])

    def point_index(self, vec) -> int:
        v = normalize(self.tower, vec)
        Q = self.tower.order
        if self.d == 1:
            return 0 if v[0] == 0 else 1 + v[1]
        if v[0] == 1:
            return 1 + Q + v[1] * Q + v[2]
        if v[1] == 1:
            return 1 + v[2]
        return 0

    # lines of PG(2,.) share the enumeration of points via dual coordinates
    line_vec = point_vec
    line_index = point_index

    @property
    def n_lines(self) -> int:
        self._require_plane()
        return self.n_points

    def _require_plane(self):
        if self.d != 2:
            raise ValueError("operation requires PG(2,q^n)")

    # -- incidence -------------------------------------------------------------

    def incidence(self) -> np.ndarray:
        """Boolean matrix I with I[line, point] true when the point is on the line."""
        self._require_plane()
        if self._incidence is None:
            t = self.tower
            N = self.n_points
            if N * N > _INCIDENCE_MAX_CELLS:
                raise ValueError("plane too large for dense incidence")
            P = self.points
            acc = np.zeros((N, N), dtype=np.uint32)
            for k in range(3):
                acc = t.vadd(acc, t.vmul(P[:, k][:, None], P[:, k][None, :]))
            self._incidence = acc == 0
        return self._incidence

    def line_points(self, line) -> np.ndarray:
        """Indices of the q^n + 1 points on a line (index or dual vector)."""
        idx = line if isinstance(line, (int, np.integer)) else self.line_index(line)
        return np.nonzero(self.incidence()[idx])[0]

    def point_lines(self, point) -> np.ndarray:
        idx = point if isinstance(point, (int, np.integer)) else self.point_index(point)
        return np.nonzero(self.incidence()[:, idx])[0]

    def pencil(self, point) -> Pencil:
        idx = point if isinstance(point, (int, np.integer)) else self.point_index(point)
        return Pencil(center=idx, line_ids=tuple(int(i) for i in self.point_lines(idx)))

    def line_through(self, p, r) -> tuple:
        """Dual coordinates (normalized) of the unique line through two points."""
        self._require_plane()
        u = p if not isinstance(p, (int, np.integer)) else self.point_vec(p)
        v = r if not isinstance(r, (int, np.integer)) else self.point_vec(r)
        c = cross3(self.tower, u, v)
        if all(x == 0 for x in c):
            raise ValueError("coincident points do not span a line")
        return normalize(self.tower, c)

    def collinear(self, a, b, c) -> bool:
        self._require_plane()
        vecs = [x if not isinstance(x, (int, np.integer)) else self.point_vec(x)
                for x in (a, b, c)]
        return mat_det(self.tower, tuple(vecs)) == 0

    # -- vectorised coordinate helpers (rows of encodings, no zero rows) -------

    def normalize_rows(self, v: np.ndarray) -> np.ndarray:
        t = self.tower
        if self.d == 1:
            lead = np.where(v[:, 0] != 0, v[:, 0], v[:, 1])
        else:
            lead = np.where(v[:, 0] != 0, v[:, 0],
                            np.where(v[:, 1] != 0, v[:, 1], v[:, 2]))
        return t.vmul(t.vinv(lead)[:, None], v)

    def index_rows(self, v: np.ndarray) -> np.ndarray:
        """Point (or line) indices for an array of coordinate rows."""
        w = self.normalize_rows(v)
        Q = self.tower.order
        if self.d == 1:
            return np.where(w[:, 0] == 0, 0, 1 + w[:, 1].astype(np.int64))
        w1 = w[:, 1].astype(np.int64)
        w2 = w[:, 2].astype(np.int64)
        return np.where(w[:, 0] != 0, 1 + Q + w1 * Q + w2,
                        np.where(w[:, 1] != 0, 1 + w2, 0))

    # -- sublines ---------------------------------------------------------------

    def _params_on_span(self, base_y, base_z, vecs):
        """Coordinates (lam, mu) of each vector in the basis (base_y, base_z)."""
        t = self.tower
        cols = list(zip(base_y, base_z))
        pick = None
        for i in range(len(cols)):
            for j in range(i + 1, len(cols)):
                det = t.sub(t.mul(cols[i][0], cols[j][1]), t.mul(cols[i][1], cols[j][0]))
                if det != 0:
                    pick = (i, j, det)
                    break
            if pick:
                break
        i, j, det = pick
        di = t.inv(det)
        out = []
        for v in vecs:
            lam = t.mul(di, t.sub(t.mul(v[i], cols[j][1]), t.mul(v[j], cols[i][1])))
            mu = t.mul(di, t.sub(t.mul(cols[i][0], v[j]), t.mul(cols[j][0], v[i])))
            out.append((lam, mu))
        return out

    def is_fq_subline(self, point_ids) -> bool:
        """Whether q+1 collinear points form a PG(1,q) inside their line.

        Three of the points are sent to the parameters 0, 1 and infinity of
        the line; the set is a subline exactly when every remaining point
        gets a parameter in F_q.
        """
        t = self.tower
        ids = sorted(int(i) for i in point_ids)
        if len(ids) != t.q + 1 or len(set(ids)) != len(ids):
            raise ValueError(f"a subline test needs q+1 = {t.q + 1} distinct points")
        vecs = [self.point_vec(i) for i in ids]
        if self.d == 2:
            line = self.line_through(vecs[0], vecs[1])
            if any(dot(t, line, v) != 0 for v in vecs[2:]):
                raise ValueError("points are not collinear")
        params = self._params_on_span(vecs[0], vecs[1], vecs[2:])
        lam1, mu1 = params[0]
        # rescale so the third point has parameter (1, 1)
        li, mi = t.inv(lam1), t.inv(mu1)
        for lam, mu in params[1:]:
            lam, mu = t.mul(li, lam), t.mul(mi, mu)
            if mu != 0 and not t.in_subfield(t.div(lam, mu)):
                return False
        return True

    # -- subplanes -----------------------------------------------------------

    def canonical_subplane(self) -> Subplane:
        """The PG(2,q) of points with all coordinates in F_q."""
        self._require_plane()
        t = self.tower
        sub = t.subfield
        ids = [0]
        ids += [self.point_index((0, 1, c)) for c in sub]
        ids += [self.point_index((1, b, c)) for b in sub for c in sub]
        frame = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))
        return Subplane(point_ids=frozenset(ids), frame=frame, q=t.q)

    def __repr__(self):
        return f"ProjectiveSpace(d={self.d}, order={self.tower.order})"


@lru_cache(maxsize=None)
def _space(p, e, n, m, d):
    return ProjectiveSpace(build_field(p, e, n, m), d)


def projective_space(tower: FieldTower, d: int) -> ProjectiveSpace:
    """Cached PG(d, q^n) for the given tower."""
    return _space(tower.p, tower.e, tower.n, tower.m, d)
