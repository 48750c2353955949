"""Finite-dimensional fragments of matrix partial C*-algebras.

Normal complex matrices with commutation as commeasurability: commutative
*-subalgebra generation, joint spectral projections, support projections,
projection suprema, the bridge from projection families to partial Boolean
algebras, mediating maps for cocones of *-morphisms, and ray-set ingestion
for Kochen-Specker pipelines.

The subalgebra diagram of a matrix algebra is infinite; everything here acts
on the fragment generated by the seed's spectral projections and subsets of
generators (the "enumerated fragment").  Default tolerances: 1e-9 for
structural predicates, 1e-8 for derived equalities; projections are
deduplicated by norm-distance clustering with the nearest distinct pair
required to exceed ten times the structural tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AmbiguousSpectrumError,
    CoconeError,
    DomainError,
    InvalidAlgebraError,
    SearchCutoffError,
    StructuralError,
)
from .core import (
    PartialBooleanAlgebra,
    bron_kerbosch,
    block_hypergraph,
    make_pba,
    maximal_cliques,
    validate,
)
from .poset import _set_partitions, boolean_subalgebras

STRUCT_TOL = 1e-9
DERIVED_TOL = 1e-8


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructuralError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StructuralError("matrix has non-finite entries")
    return m


def operator_norm(a) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(_as_matrix(a), 2))


def is_normal(a, tol: float = STRUCT_TOL) -> bool:
    m = _as_matrix(a)
    return operator_norm(m @ m.conj().T - m.conj().T @ m) <= tol * max(
        1.0, operator_norm(m)) ** 2


def selfadjoint_parts(a) -> tuple[np.ndarray, np.ndarray]:
    """The unique self-adjoint pair (a1, a2) with a = a1 + i a2."""
    m = _as_matrix(a)
    return (m + m.conj().T) / 2, (m - m.conj().T) / 2j


def commeasurable(a, b, tol: float = STRUCT_TOL) -> bool:
    """Commutation of two normal matrices; non-normal inputs are never
    commeasurable (reflexivity forces normality)."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if not (is_normal(ma, tol) and is_normal(mb, tol)):
        return False
    scale = max(1.0, operator_norm(ma)) * max(1.0, operator_norm(mb))
    return operator_norm(ma @ mb - mb @ ma) <= tol * scale


@dataclass(eq=False)
class MatrixSeed:
    """A finite list of equal-sized normal generators plus the working
    tolerance; presents a fragment of the normal part of a matrix algebra."""

    dim: int
    generators: list[np.ndarray]
    tol: float = STRUCT_TOL

    def __post_init__(self):
        self.generators = [_as_matrix(g) for g in self.generators]
        for i, g in enumerate(self.generators):
            if g.shape != (self.dim, self.dim):
                raise StructuralError(f"generator {i} has shape {g.shape}, "
                                      f"expected {(self.dim, self.dim)}")
            if not is_normal(g, self.tol):
                raise DomainError(f"generator {i} is not normal")


# ---------------------------------------------------------------------------
# Commutative *-subalgebras
# ---------------------------------------------------------------------------

def _hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))


def _orthonormal_extend(basis: list[np.ndarray], m: np.ndarray,
                        tol: float) -> bool:
    """Gram-Schmidt step against the Hilbert-Schmidt inner product; adds the
    residual direction when it is numerically nonzero."""
    r = m.copy()
    for _ in range(2):  # re-orthogonalize once for stability
        for b in basis:
            r = r - _hs_inner(b, r) * b
    norm = float(np.linalg.norm(r))
    if norm <= tol * max(1.0, float(np.linalg.norm(m))):
        return False
    basis.append(r / norm)
    return True


def _eigenspace_refinement(sa_mats: Sequence[np.ndarray], dim: int,
                           cluster_tol: float = 1e-6) -> list[np.ndarray]:
    """Joint eigenspaces of a commuting self-adjoint family, as orthonormal
    column frames, deterministically ordered by ascending eigenvalue along
    each refinement step."""
    spaces = [np.eye(dim, dtype=complex)]
    for g in sa_mats:
        scale = max(1.0, operator_norm(g))
        nxt = []
        for V in spaces:
            sub = V.conj().T @ g @ V
            w, U = np.linalg.eigh((sub + sub.conj().T) / 2)
            start = 0
            for i in range(1, len(w) + 1):
                if i == len(w) or w[i] - w[i - 1] > cluster_tol * scale:
                    nxt.append(V @ U[:, start:i])
                    start = i
        spaces = nxt
    return spaces


def generated_commutative_algebra(
    S: Sequence[np.ndarray],
    dim: int | None = None,
    tol: float = STRUCT_TOL,
) -> "CommutativeStarSubalgebra":
    """Least unital *-closed, product-closed span containing a pairwise
    commeasurable family of normal matrices."""
    mats = [_as_matrix(m) for m in S]
    if dim is None:
        if not mats:
            raise DomainError("need a dimension for the empty generating set")
        dim = mats[0].shape[0]
    for i, j in itertools.combinations(range(len(mats)), 2):
        if not commeasurable(mats[i], mats[j], tol):
            raise DomainError(f"generators {i} and {j} do not commute")
    for i, m in enumerate(mats):
        if m.shape != (dim, dim):
            raise StructuralError(f"generator {i} has mismatched dimension")
        if not is_normal(m, tol):
            raise DomainError(f"generator {i} is not normal")

    basis: list[np.ndarray] = []
    _orthonormal_extend(basis, np.eye(dim, dtype=complex), tol)
    queue = list(mats) + [m.conj().T for m in mats]
    for m in queue:
        _orthonormal_extend(basis, m, tol)
    changed = True
    while changed:
        changed = False
        snapshot = list(basis)
        for a in snapshot:
            if _orthonormal_extend(basis, a.conj().T, tol):
                changed = True
        for a, b in itertools.product(snapshot, repeat=2):
            if _orthonormal_extend(basis, a @ b, tol):
                changed = True
        if len(basis) > dim * dim:
            raise StructuralError("span closure exceeded the full matrix algebra")

    sa_parts: list[np.ndarray] = []
    for b in basis:
        h1, h2 = selfadjoint_parts(b)
        sa_parts.extend([h1, h2])
    spaces = _eigenspace_refinement(sa_parts, dim)
    if len(spaces) != len(basis):
        raise AmbiguousSpectrumError(
            f"found {len(spaces)} joint eigenspaces for a {len(basis)}-dimensional "
            "commutative algebra; eigenvalues are too close for the tolerance. "
            "Use exactly representable inputs or a looser clustering.",
        )
    projections = [V @ V.conj().T for V in spaces]
    return CommutativeStarSubalgebra(
        dim=dim, basis=basis, minimal_projections=projections,
        generators=mats, tol=tol)


@dataclass(eq=False)
class CommutativeStarSubalgebra:
    """A finite-dimensional commutative *-subalgebra of a matrix algebra:
    Hilbert-Schmidt orthonormal basis of the span, joint spectral projections
    summing to the identity, and the generators it came from."""

    dim: int
    basis: list[np.ndarray]
    minimal_projections: list[np.ndarray]
    generators: list[np.ndarray]
    tol: float = STRUCT_TOL

    def algebra_dim(self) -> int:
        return len(self.basis)

    def contains(self, m, tol: float | None = None) -> bool:
        m = _as_matrix(m)
        tol = tol if tol is not None else DERIVED_TOL
        r = m.copy()
        for b in self.basis:
            r = r - _hs_inner(b, r) * b
        return float(np.linalg.norm(r)) <= tol * max(1.0, float(np.linalg.norm(m)))

    def includes(self, other: "CommutativeStarSubalgebra") -> bool:
        return all(self.contains(b) for b in other.basis)

    def coefficients(self, m) -> np.ndarray:
        """Expansion of a member in the orthonormal basis."""
        m = _as_matrix(m)
        if not self.contains(m):
            raise DomainError("matrix lies outside the subalgebra span")
        return np.array([_hs_inner(b, m) for b in self.basis])


def joint_spectral_projections(C: CommutativeStarSubalgebra) -> list[np.ndarray]:
    """The minimal projections of a commutative subalgebra: pairwise
    orthogonal, summing to the identity, spanning the algebra."""
    ps = C.minimal_projections
    dim = C.dim
    acc = np.zeros((dim, dim), dtype=complex)
    for i, p in enumerate(ps):
        if operator_norm(p @ p - p) > DERIVED_TOL or \
           operator_norm(p - p.conj().T) > DERIVED_TOL:
            raise StructuralError(f"minimal projection {i} is not a projection")
        for q in ps[i + 1:]:
            if operator_norm(p @ q) > DERIVED_TOL:
                raise StructuralError("minimal projections are not orthogonal")
        acc = acc + p
    if operator_norm(acc - np.eye(dim)) > DERIVED_TOL:
        raise StructuralError("minimal projections do not sum to the identity")
    for b in C.basis:
        coeffs = [complex(np.trace(p @ b)) / max(1, round(np.trace(p).real)) for p in ps]
        recon = sum(c * p for c, p in zip(coeffs, ps))
        if operator_norm(recon - b) > DERIVED_TOL * max(1.0, operator_norm(b)):
            raise StructuralError("basis element is not spanned by the projections")
    return list(ps)


# ---------------------------------------------------------------------------
# Support projections and projection suprema
# ---------------------------------------------------------------------------

def support_projection(a, context: CommutativeStarSubalgebra | None = None,
                       tol: float = STRUCT_TOL) -> np.ndarray:
    """The projection onto the range of a normal matrix: the sum of its
    spectral projections at nonzero eigenvalues.  The complement generates
    the annihilator inside a commutative context (checked when given).

    Eigenvalues in the dead zone (tol, 10*tol] raise an ambiguity error
    reporting the offending magnitude.
    """
    m = _as_matrix(a)
    if not is_normal(m, tol):
        raise DomainError("support projection needs a normal matrix")
    dim = m.shape[0]
    h1, h2 = selfadjoint_parts(m)
    spaces = _eigenspace_refinement([h1, h2], dim)
    scale = max(1.0, operator_norm(m))
    rp = np.zeros((dim, dim), dtype=complex)
    for V in spaces:
        sub = V.conj().T @ m @ V
        lam = complex(np.trace(sub)) / V.shape[1]
        mag = abs(lam)
        if tol * scale < mag <= 10 * tol * scale:
            raise AmbiguousSpectrumError(
                f"eigenvalue magnitude {mag:.3e} sits between the zero tolerance "
                f"{tol * scale:.3e} and its safety factor", gap=mag)
        if mag > 10 * tol * scale:
            rp = rp + V @ V.conj().T
    if operator_norm(m @ (np.eye(dim) - rp)) > DERIVED_TOL * scale:
        raise StructuralError("support projection does not annihilate the kernel")
    if context is not None:
        _check_annihilator(m, rp, context)
    return rp


def _check_annihilator(a: np.ndarray, rp: np.ndarray,
                       C: CommutativeStarSubalgebra) -> None:
    """(1 - RP(a)) * C must span exactly {b in C : ab = 0}."""
    if not C.contains(a):
        raise DomainError("element lies outside its commutative context")
    dim = C.dim
    comp = np.eye(dim) - rp
    # dimension of the annihilator inside C
    rows = np.array([(a @ b).ravel() for b in C.basis])
    s = np.linalg.svd(rows.T, compute_uv=False) if len(C.basis) else np.array([])
    ann_dim = len(C.basis) - int(np.sum(s > DERIVED_TOL * max(1.0, operator_norm(a))))
    # dimension of (1 - RP) C, and containment in the annihilator
    comp_rows = []
    for b in C.basis:
        cb = comp @ b
        comp_rows.append(cb.ravel())
        if operator_norm(a @ cb) > DERIVED_TOL * max(1.0, operator_norm(a)):
            raise StructuralError("(1-RP)C is not contained in the annihilator")
    s2 = np.linalg.svd(np.array(comp_rows).T, compute_uv=False)
    comp_dim = int(np.sum(s2 > DERIVED_TOL))
    if comp_dim != ann_dim:
        raise StructuralError(
            f"annihilator dimension {ann_dim} differs from (1-RP)C dimension {comp_dim}")


def projection_supremum(ps: Sequence[np.ndarray], dim: int | None = None,
                        tol: float = STRUCT_TOL) -> np.ndarray:
    """Least upper bound of pairwise commuting projections: the projection
    onto the sum of their ranges (empty input gives 0)."""
    mats = [_as_matrix(p) for p in ps]
    if dim is None:
        if not mats:
            raise DomainError("need a dimension for the empty supremum")
        dim = mats[0].shape[0]
    for i, p in enumerate(mats):
        if operator_norm(p @ p - p) > tol or operator_norm(p - p.conj().T) > tol:
            raise DomainError(f"input {i} is not a projection")
    for i, j in itertools.combinations(range(len(mats)), 2):
        if operator_norm(mats[i] @ mats[j] - mats[j] @ mats[i]) > tol:
            raise DomainError(f"projections {i} and {j} do not commute")
    if not mats:
        return np.zeros((dim, dim), dtype=complex)
    stacked = np.hstack(mats)
    u, s, _ = np.linalg.svd(stacked)
    rank = int(np.sum(s > 10 * tol))
    ur = u[:, :rank]
    return ur @ ur.conj().T


# ---------------------------------------------------------------------------
# Projection closures and the bridge to partial Boolean algebras
# ---------------------------------------------------------------------------

class _ProjectionPool:
    """Deduplicated projection store: rounded-entry fast path plus a final
    gap assertion (nearest distinct pair must exceed 10x the tolerance)."""

    def __init__(self, dim: int, tol: float):
        self.dim = dim
        self.tol = tol
        self.mats: list[np.ndarray] = []
        self._index: dict[tuple, int] = {}

    @staticmethod
    def _key(m: np.ndarray) -> tuple:
        r = np.round(m, 7) + 0.0  # normalize -0.0
        return tuple(r.ravel().tolist())

    def add(self, m: np.ndarray) -> int:
        k = self._key(m)
        if k in self._index:
            return self._index[k]
        i = len(self.mats)
        self.mats.append(m)
        self._index[k] = i
        return i

    def find(self, m: np.ndarray) -> int | None:
        return self._index.get(self._key(m))

    def assert_gap(self):
        eps = 10 * self.tol
        for i, j in itertools.combinations(range(len(self.mats)), 2):
            d = float(np.linalg.norm(self.mats[i] - self.mats[j]))
            if d <= eps:
                raise StructuralError(
                    f"projections {i} and {j} are {d:.2e} apart, inside the "
                    f"deduplication gap {eps:.2e}")


def _projection_closure(seeds: Sequence[np.ndarray], dim: int, tol: float,
                        max_projections: int) -> _ProjectionPool:
    """Close a projection family under complement and commuting meet/join.
    The result is operation-closed, so its maximal commuting cliques are
    Boolean blocks and the induced partial Boolean algebra is valid."""
    pool = _ProjectionPool(dim, tol)
    eye = np.eye(dim, dtype=complex)
    pool.add(np.zeros((dim, dim), dtype=complex))
    pool.add(eye)
    for p in seeds:
        pool.add(_as_matrix(p))
    changed = True
    while changed:
        changed = False
        count = len(pool.mats)
        for i in range(count):
            if pool.add(eye - pool.mats[i]) >= count:
                changed = True
        count = len(pool.mats)
        for i in range(count):
            p = pool.mats[i]
            for j in range(i + 1, count):
                q = pool.mats[j]
                pq = p @ q
                if float(np.abs(pq - q @ p).max()) > tol:
                    continue
                if pool.add(pq) >= count or pool.add(p + q - pq) >= count:
                    changed = True
        if len(pool.mats) > max_projections:
            raise SearchCutoffError(
                f"projection closure exceeded {max_projections} elements",
                limit=max_projections)
    pool.assert_gap()
    return pool


def _pool_to_pba(pool: _ProjectionPool, labels: list[str] | None,
                 tol: float) -> tuple[PartialBooleanAlgebra, list[np.ndarray]]:
    """Order a closed projection pool canonically and read off the partial
    Boolean algebra (commutation, complement, product meets)."""
    dim = pool.dim
    eye = np.eye(dim, dtype=complex)

    def rank_of(m):
        return int(round(float(np.trace(m).real)))

    def sort_key(m):
        r = np.round(m, 7) + 0.0
        return tuple(x for v in r.ravel().tolist() for x in (v.real, v.imag))

    order = sorted(range(len(pool.mats)),
                   key=lambda i: (rank_of(pool.mats[i]) != 0,
                                  rank_of(pool.mats[i]),
                                  sort_key(pool.mats[i])))
    mats = [pool.mats[i] for i in order]
    zero = next(i for i, m in enumerate(mats) if rank_of(m) == 0)
    one = next(i for i, m in enumerate(mats) if operator_norm(m - eye) <= tol)
    n = len(mats)
    index = {pool._key(m): i for i, m in enumerate(mats)}

    def idx(m) -> int:
        k = _ProjectionPool._key(m)
        if k not in index:
            raise StructuralError("closure is not operation-closed numerically")
        return index[k]

    neg = [idx(eye - m) for m in mats]
    comm_pairs, meets, joins = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            p, q = mats[i], mats[j]
            pq = p @ q
            if float(np.abs(pq - q @ p).max()) <= tol:
                comm_pairs.append((i, j))
                meets.append((i, j, idx(pq)))
                joins.append((i, j, idx(p + q - pq)))
    if labels is None:
        labels = ["0" if i == zero else "1" if i == one else f"p{i}"
                  for i in range(n)]
    A = make_pba(n, zero, one, neg, comm_pairs, meets, joins, labels)
    report = validate(A)
    if not report.ok:
        raise InvalidAlgebraError("projection algebra fails validation",
                                  report=report)
    return A, mats


@dataclass(eq=False)
class ProjectionAlgebra:
    """The partial Boolean algebra of projections in the enumerated fragment
    of a matrix seed, with the carrier matrices element by element."""

    algebra: PartialBooleanAlgebra
    projections: list[np.ndarray]
    seed: MatrixSeed

    def element_of(self, p) -> int:
        key = _ProjectionPool._key(_as_matrix(p))
        for i, m in enumerate(self.projections):
            if _ProjectionPool._key(m) == key:
                return i
        raise DomainError("projection is not in the enumerated carrier")


def spectral_projections(a, tol: float = STRUCT_TOL) -> list[np.ndarray]:
    """Spectral projections of one normal matrix, deterministically ordered."""
    m = _as_matrix(a)
    if not is_normal(m, tol):
        raise DomainError("spectral projections need a normal matrix")
    h1, h2 = selfadjoint_parts(m)
    spaces = _eigenspace_refinement([h1, h2], m.shape[0])
    return [V @ V.conj().T for V in spaces]


def projection_algebra(seed: MatrixSeed,
                       max_projections: int = 4000) -> ProjectionAlgebra:
    """The partial Boolean algebra generated by the seed's spectral
    projections: commutation as commeasurability, complement as negation,
    product as meet on commuting pairs.  Validated before returning."""
    base: list[np.ndarray] = []
    for g in seed.generators:
        base.extend(spectral_projections(g, seed.tol))
    pool = _projection_closure(base, seed.dim, seed.tol, max_projections)
    A, mats = _pool_to_pba(pool, None, seed.tol)
    return ProjectionAlgebra(algebra=A, projections=mats, seed=seed)


def proj_commutes_with_subalgebra_functor(pa: ProjectionAlgebra) -> bool:
    """Check {Proj(C) : C enumerated commutative subalgebra} equals the set
    of Boolean subalgebras of the projection algebra.

    The left side enumerates, per Boolean block, the subalgebras spanned by
    the partition-sums of its minimal projections (matrix side); the right
    side enumerates Boolean subalgebras of the carrier (order side).
    """
    A = pa.algebra
    index = {_ProjectionPool._key(m): i for i, m in enumerate(pa.projections)}

    def idx(m) -> int:
        k = _ProjectionPool._key(m)
        if k not in index:
            return -1
        return index[k]

    lhs: set[frozenset[int]] = set()
    for clique in maximal_cliques(A):
        elems = [i for i in range(A.n) if (clique >> i) & 1]
        block_alg = generated_commutative_algebra(
            [pa.projections[i] for i in elems if i != A.zero],
            dim=pa.seed.dim, tol=pa.seed.tol)
        minimal = block_alg.minimal_projections
        for partition in _set_partitions(list(range(len(minimal)))):
            sums = [sum(minimal[i] for i in part) for part in partition]
            member = set()
            for r in range(len(sums) + 1):
                for chosen in itertools.combinations(range(len(sums)), r):
                    total = np.zeros((pa.seed.dim, pa.seed.dim), dtype=complex)
                    for c in chosen:
                        total = total + sums[c]
                    e = idx(total)
                    if e < 0:
                        return False  # matrix-side member escapes the carrier
                    member.add(e)
            lhs.add(frozenset(member))
    rhs = set(boolean_subalgebras(A).members)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Mediating maps for cocones of *-morphisms
# ---------------------------------------------------------------------------

def enumerated_subalgebras(seed: MatrixSeed) -> list[CommutativeStarSubalgebra]:
    """The fragment of the commutative subalgebra diagram generated by
    pairwise commeasurable subsets of the seed generators."""
    out = []
    gens = seed.generators
    for r in range(len(gens) + 1):
        for subset in itertools.combinations(range(len(gens)), r):
            mats = [gens[i] for i in subset]
            if all(commeasurable(a, b, seed.tol)
                   for a, b in itertools.combinations(mats, 2)):
                out.append(generated_commutative_algebra(
                    mats, dim=seed.dim, tol=seed.tol))
    return out


def mediating_star_map(
    seed: MatrixSeed,
    leg: Callable[[CommutativeStarSubalgebra, np.ndarray], np.ndarray],
) -> Callable[[np.ndarray], np.ndarray]:
    """Assemble the map induced by a cocone of *-morphisms on the enumerated
    fragment: each element evaluates through the subalgebras generated by
    its self-adjoint parts, m(a) = leg(<a1>, a1) + i leg(<a2>, a2).

    Cocone coherence (legs agree along inclusions) and the restriction
    property m . i_C = leg_C are checked on the enumerated fragment before
    the map is returned; incoherent cocones raise CoconeError.
    """
    fragment = enumerated_subalgebras(seed)
    for C in fragment:
        for D in fragment:
            if C is D or not D.includes(C):
                continue
            for b in C.basis:
                if operator_norm(leg(C, b) - leg(D, b)) > DERIVED_TOL * max(
                        1.0, operator_norm(b)):
                    raise CoconeError(
                        "cocone legs disagree on a nested subalgebra pair",
                        pair=(C, D))

    def mediate(a: np.ndarray) -> np.ndarray:
        a = _as_matrix(a)
        if not is_normal(a, seed.tol):
            raise DomainError("mediating map is defined on normal elements")
        a1, a2 = selfadjoint_parts(a)
        c1 = generated_commutative_algebra([a1], dim=seed.dim, tol=seed.tol)
        c2 = generated_commutative_algebra([a2], dim=seed.dim, tol=seed.tol)
        return leg(c1, a1) + 1j * leg(c2, a2)

    for C in fragment:
        for b in C.basis:
            if operator_norm(mediate(b) - leg(C, b)) > DERIVED_TOL * max(
                    1.0, operator_norm(b)):
                raise CoconeError(
                    "mediating map does not restrict to a cocone leg",
                    pair=(C, None))
    return mediate


def star_morphism_defect(f: Callable[[np.ndarray], np.ndarray],
                         pairs: Sequence[tuple[np.ndarray, np.ndarray]],
                         scalars: Sequence[complex] = (1, 1j, 2 - 3j),
                         tol: float = STRUCT_TOL) -> float:
    """Largest violation of the partial *-morphism clauses over given
    commeasurable pairs: preservation of commeasurability, multiplicativity,
    additivity, scalar action, adjoints, the unit, and the split
    f(a + ib) = f(a) + i f(b) for self-adjoint parts."""
    worst = 0.0
    for a, b in pairs:
        if not commeasurable(a, b, tol):
            raise DomainError("defect pairs must be commeasurable")
        fa, fb = f(a), f(b)
        worst = max(worst, operator_norm(fa @ fb - fb @ fa))
        worst = max(worst, operator_norm(f(a @ b) - fa @ fb))
        worst = max(worst, operator_norm(f(a + b) - (fa + fb)))
        for z in scalars:
            worst = max(worst, operator_norm(f(z * a) - z * f(a)))
        worst = max(worst, operator_norm(f(a.conj().T) - fa.conj().T))
        a1, a2 = selfadjoint_parts(a)
        worst = max(worst, operator_norm(f(a1 + 1j * a2) - (f(a1) + 1j * f(a2))))
        dim = _as_matrix(a).shape[0]
        eye = np.eye(dim, dtype=complex)
        feye = f(eye)
        worst = max(worst, operator_norm(
            feye - np.eye(feye.shape[0], dtype=complex)))
    return worst


# ---------------------------------------------------------------------------
# Ray ingestion
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class RayAlgebra:
    """Result of ingesting a ray set: the induced block hypergraph (maximal
    orthogonal bases found among the rays) and the partial Boolean algebra
    generated by the rank-1 projections."""

    algebra: PartialBooleanAlgebra
    projections: list[np.ndarray]
    blocks: tuple[frozenset[str], ...]
    ray_elements: dict[str, int]


def rays_to_pba(rays: Sequence[Sequence[complex]], dim: int,
                tol: float = STRUCT_TOL,
                labels: Sequence[str] | None = None,
                max_projections: int = 4000) -> RayAlgebra:
    """Build the partial Boolean algebra generated by the rank-1 projections
    of a ray set.

    Blocks are the maximal mutually orthogonal dim-sized subsets; at least
    one complete basis must occur.  The carrier is the closure of the ray
    projections under complement and commuting meet/join: for ray sets whose
    orthogonality lives entirely inside blocks this is exactly the pasted
    block algebra, and for Kochen-Specker sets (where pairwise orthogonal
    tuples need not share a block) it is the least valid carrier containing
    them."""
    vecs = []
    for i, r in enumerate(rays):
        v = np.asarray(r, dtype=complex).reshape(-1)
        if v.shape != (dim,):
            raise StructuralError(f"ray {i} has length {v.shape[0]}, expected {dim}")
        norm = float(np.linalg.norm(v))
        if norm <= tol:
            raise DomainError(f"ray {i} is numerically zero")
        vecs.append(v / norm)
    if labels is None:
        labels = [f"r{i}" for i in range(len(vecs))]
    labels = list(labels)

    # deduplicate parallel rays
    keep: list[int] = []
    for i, v in enumerate(vecs):
        if not any(abs(abs(np.vdot(vecs[j], v)) - 1.0) <= 10 * tol for j in keep):
            keep.append(i)
    vecs = [vecs[i] for i in keep]
    labels = [labels[i] for i in keep]

    n = len(vecs)
    adj = [0] * n
    for i, j in itertools.combinations(range(n), 2):
        if abs(np.vdot(vecs[i], vecs[j])) <= 10 * tol:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    blocks = []
    for clique in bron_kerbosch(adj, n):
        size = bin(clique).count("1")
        if size == dim:
            blocks.append(frozenset(labels[i] for i in range(n) if (clique >> i) & 1))
    if not blocks:
        raise DomainError("no complete orthogonal basis among the rays")
    covered = set().union(*blocks)
    missing = [lab for lab in labels if lab not in covered]
    if missing:
        raise DomainError(f"rays {missing} lie in no complete basis")
    hypergraph = block_hypergraph(sorted(blocks, key=sorted))

    projections = [np.outer(v, v.conj()) for v in vecs]
    pool = _projection_closure(projections, dim, tol, max_projections)
    carrier_labels: list[str] | None = None
    A, mats = _pool_to_pba(pool, carrier_labels, tol)

    index = {_ProjectionPool._key(m): i for i, m in enumerate(mats)}
    ray_elements = {}
    relabel = list(A.labels)
    for lab, p in zip(labels, projections):
        e = index[_ProjectionPool._key(p)]
        ray_elements[lab] = e
        relabel[e] = lab
        ne = A.neg[e]
        if relabel[ne].startswith("p"):
            relabel[ne] = "~" + lab
    A = PartialBooleanAlgebra(
        n=A.n, zero=A.zero, one=A.one, neg=A.neg, comm=A.comm,
        meet=A.meet, join=A.join, labels=tuple(relabel))
    return RayAlgebra(algebra=A, projections=mats,
                      blocks=hypergraph.blocks, ray_elements=ray_elements)


def amplify(a, k: int) -> np.ndarray:
    """Tensor a matrix with the k-dimensional identity (the block-diagonal
    amplification); preserves normality, commutation, and non-commutation."""
    m = _as_matrix(a)
    if k < 1:
        raise DomainError("amplification factor must be positive")
    if not is_normal(m):
        raise DomainError("amplification is defined on normal elements")
    return np.kron(m, np.eye(k, dtype=complex))
