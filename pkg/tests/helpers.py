"""Shared machinery for the acceptance suite: vectorized exhaustive checks
for the tensor factorization criterion and bitmask-encoded Bohrification
frames for fast preservation sweeps."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from pbalg.core import PartialBooleanAlgebra, enumerate_morphisms
from pbalg.colimit import TensorResult, tensor_factorization, tensor_product
from pbalg.bohr import BohrFrame, FrameMap


# ---------------------------------------------------------------------------
# exhaustive tensor factorization criterion
# ---------------------------------------------------------------------------

def _z_tables(Z: PartialBooleanAlgebra):
    meet = np.array(Z.meet, dtype=np.int64)
    join = np.array(Z.join, dtype=np.int64)
    comm = np.zeros((Z.n, Z.n), dtype=bool)
    for i in range(Z.n):
        for j in range(Z.n):
            comm[i, j] = Z.comm_pair(i, j)
    neg = np.array(Z.neg, dtype=np.int64)
    return meet, join, comm, neg


def _tensor_arrays(T: TensorResult):
    nT = T.algebra.n
    width = max((len(p) for p in T.atom_pairs), default=0)
    pa = np.zeros((nT, max(width, 1)), dtype=np.int64)
    pb = np.zeros((nT, max(width, 1)), dtype=np.int64)
    valid = np.zeros((nT, max(width, 1)), dtype=bool)
    for t, pairs in enumerate(T.atom_pairs):
        for k, (a, b) in enumerate(pairs):
            pa[t, k], pb[t, k], valid[t, k] = a, b, True
    TA = T.algebra
    i_arr, j_arr, m_arr, jn_arr = [], [], [], []
    for i in range(nT):
        for j in range(i + 1, nT):
            if TA.comm_pair(i, j):
                i_arr.append(i)
                j_arr.append(j)
                m_arr.append(TA.meet[i][j])
                jn_arr.append(TA.join[i][j])
    return (pa, pb, valid,
            np.array(i_arr), np.array(j_arr), np.array(m_arr), np.array(jn_arr),
            np.array(T.algebra.neg, dtype=np.int64))


def tensor_iff_exhaustive(A: PartialBooleanAlgebra, B: PartialBooleanAlgebra,
                          Z: PartialBooleanAlgebra,
                          T: TensorResult | None = None,
                          spot_check_stride: int = 997) -> dict:
    """Check the factorization criterion over every morphism pair
    (f: A -> Z, g: B -> Z).

    Where the commeasurability condition holds, the factorizing map is
    constructed and verified to be a morphism restricting to f and g along
    the canonical injections (vectorized); where it fails, no factorization
    can exist because the injection images are always commeasurable in the
    tensor carrier (checked once) and morphisms preserve commeasurability.
    A strided subsample is re-verified through the reference path.
    """
    if T is None:
        T = tensor_product(A, B)
    TA = T.algebra
    # the cross-commeasurability property that rules out factorizations of
    # refused pairs
    for a in range(A.n):
        for b in range(B.n):
            assert TA.comm_pair(T.kappa_a.map[a], T.kappa_b.map[b])

    homA = enumerate_morphisms(A, Z)
    homB = enumerate_morphisms(B, Z)
    Zmeet, Zjoin, Zcomm, Zneg = _z_tables(Z)
    pa, pb, valid, i_arr, j_arr, m_arr, jn_arr, negT = _tensor_arrays(T)
    kapA = np.array(T.kappa_a.map, dtype=np.int64)
    kapB = np.array(T.kappa_b.map, dtype=np.int64)
    Fmat = np.array([f.map for f in homA], dtype=np.int64)
    Gmat = np.array([g.map for g in homB], dtype=np.int64)

    # condition by image sets (memoized: few distinct images)
    imagesA = [frozenset(f.map) for f in homA]
    imagesB = [frozenset(g.map) for g in homB]

    @lru_cache(maxsize=None)
    def images_ok(im_f: frozenset, im_g: frozenset) -> bool:
        return all(Zcomm[x, y] for x in im_f for y in im_g)

    stats = {"pairs": 0, "positive": 0, "negative": 0, "spot_checked": 0}
    width = pa.shape[1]
    for fi, f in enumerate(homA):
        cond = np.array([images_ok(imagesA[fi], im) for im in imagesB])
        stats["pairs"] += len(homB)
        stats["negative"] += int((~cond).sum())
        if not cond.any():
            continue
        G = Gmat[cond]
        ng = G.shape[0]
        stats["positive"] += ng
        # vectorized cotuple: h[g, t] = join over slots of f(pa) meet g(pb)
        h = np.zeros((ng, TA.n), dtype=np.int64)
        h[:, :] = Z.zero
        fvals = Fmat[fi]
        for k in range(width):
            vals = Zmeet[fvals[pa[:, k]][None, :], G[:, pb[:, k]]]
            vals = np.where(valid[:, k][None, :], vals, Z.zero)
            h = Zjoin[h, vals]
        assert (h >= 0).all(), "cotuple escaped a common block"
        # restriction along the canonical injections
        assert (h[:, kapA] == fvals[None, :]).all()
        assert (h[:, kapB] == G).all()
        # morphism clauses, batched
        assert (h[:, TA.zero] == Z.zero).all() and (h[:, TA.one] == Z.one).all()
        assert (Zneg[h] == h[:, negT]).all()
        hi, hj = h[:, i_arr], h[:, j_arr]
        assert Zcomm[hi, hj].all()
        assert (Zmeet[hi, hj] == h[:, m_arr]).all()
        assert (Zjoin[hi, hj] == h[:, jn_arr]).all()

    # strided reference-path re-verification, including refusal witnesses
    idx = 0
    for fi, f in enumerate(homA):
        for gi, g in enumerate(homB):
            idx += 1
            if idx % spot_check_stride:
                continue
            stats["spot_checked"] += 1
            r = tensor_factorization(f, g, T=T)
            assert r.factorizes == images_ok(imagesA[fi], imagesB[gi])
            if not r.factorizes:
                a, b = r.witness
                assert not Z.comm_pair(f.map[a], g.map[b])
    return stats


# ---------------------------------------------------------------------------
# bitmask-encoded frames
# ---------------------------------------------------------------------------

class FrameIndex:
    """A Bohrification frame with elements encoded as point bitmasks, plus
    meet/join index tables for fast preservation sweeps."""

    def __init__(self, A: PartialBooleanAlgebra):
        self.frame = BohrFrame(A)
        self.offsets = []
        total = 0
        for pts in self.frame.spectra:
            self.offsets.append(total)
            total += len(pts)
        self.point_pos = [
            {p: k for k, p in enumerate(pts)} for pts in self.frame.spectra]
        self.elements = self.frame.elements()
        self.codes = [self.encode(F) for F in self.elements]
        self.index = {c: i for i, c in enumerate(self.codes)}
        n = len(self.elements)
        self.meet_idx = [[self.index[self.codes[i] & self.codes[j]]
                          for j in range(n)] for i in range(n)]
        self.join_idx = [[self.index[self.codes[i] | self.codes[j]]
                          for j in range(n)] for i in range(n)]
        self.top_index = self.index[self.encode(self.frame.top())]
        self.bottom_index = self.index[self.encode(self.frame.bottom())]

    def encode(self, F) -> int:
        code = 0
        for i, opens in enumerate(F):
            for p in opens:
                code |= 1 << (self.offsets[i] + self.point_pos[i][p])
        return code


_FRAME_CACHE: dict[PartialBooleanAlgebra, FrameIndex] = {}


def frame_index(A: PartialBooleanAlgebra) -> FrameIndex:
    if A not in _FRAME_CACHE:
        _FRAME_CACHE[A] = FrameIndex(A)
    return _FRAME_CACHE[A]


def frame_preservation(f, src: FrameIndex, dst: FrameIndex) -> dict:
    """Top/join/meet preservation of the induced frame map over the whole
    enumerated source frame, with a witness for the first meet failure."""
    fm = FrameMap(f, src=src.frame, dst=dst.frame)
    img = [dst.encode(fm(F)) for F in src.elements]
    out = {"top": img[src.top_index] == dst.codes[dst.top_index],
           "joins": True, "meets": True, "meet_witness": None}
    n = len(src.elements)
    for i in range(n):
        for j in range(i, n):
            if img[src.join_idx[i][j]] != img[i] | img[j]:
                out["joins"] = False
    for i in range(n):
        for j in range(i, n):
            if img[src.meet_idx[i][j]] != img[i] & img[j]:
                out["meets"] = False
                if out["meet_witness"] is None:
                    out["meet_witness"] = (src.elements[i], src.elements[j])
    return out
