"""The inclusion-ordered family of total Boolean subalgebras of a finite
partial Boolean algebra, with its structural reports.

Enumeration goes block by block: every totally commeasurable subset lives
inside a maximal clique, and the Boolean subalgebras of a finite Boolean
block correspond to the set partitions of its atoms.  This avoids scanning
all subsets of the carrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, SearchCutoffError
from .core import (
    PartialBooleanAlgebra,
    atoms_of_subalgebra,
    join_all,
    maximal_cliques,
)


def _set_partitions(items: list):
    """All partitions of a list, each a list of lists; deterministic order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@dataclass(frozen=True)
class SubalgebraPoset:
    """All total Boolean subalgebras of ``algebra``, ordered by inclusion.

    ``members`` is canonically ordered (by size, then element tuple);
    ``leq[i]`` is the bitmask of members that contain member i.
    """

    algebra: PartialBooleanAlgebra
    members: tuple[frozenset[int], ...]
    leq: tuple[int, ...]

    def index_of(self, member: frozenset[int]) -> int:
        try:
            return self.members.index(member)
        except ValueError:
            raise DomainError("not a member of the subalgebra poset") from None

    def contains(self, i: int, j: int) -> bool:
        """True iff member i is included in member j."""
        return bool((self.leq[i] >> j) & 1)

    def least(self) -> int:
        return self.index_of(frozenset({self.algebra.zero, self.algebra.one}))

    def maximal_indices(self) -> list[int]:
        n = len(self.members)
        return [i for i in range(n)
                if all(not self.contains(i, j) for j in range(n) if j != i)]

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover pairs (i, j) with member i directly below member j."""
        n = len(self.members)
        edges = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.contains(i, j):
                    continue
                if not any(k != i and k != j and self.contains(i, k)
                           and self.contains(k, j) for k in range(n)):
                    edges.append((i, j))
        return edges


@lru_cache(maxsize=None)
def boolean_subalgebras(A: PartialBooleanAlgebra,
                        max_members: int = 100_000) -> SubalgebraPoset:
    """Enumerate every total Boolean subalgebra of A, deduplicated and
    canonically ordered, together with the inclusion order."""
    found: set[frozenset[int]] = set()
    for clique in maximal_cliques(A):
        elems = frozenset(i for i in range(A.n) if (clique >> i) & 1)
        atoms = atoms_of_subalgebra(A, elems)
        for partition in _set_partitions(atoms):
            member = frozenset(
                join_all(A, [a for part in chosen for a in part])
                for r in range(len(partition) + 1)
                for chosen in itertools.combinations(partition, r))
            found.add(member)
            if len(found) > max_members:
                raise SearchCutoffError(
                    f"subalgebra enumeration exceeded {max_members} members",
                    limit=max_members)
    members = tuple(sorted(found, key=lambda s: (len(s), tuple(sorted(s)))))
    leq = []
    for s in members:
        row = 0
        for j, t in enumerate(members):
            if s <= t:
                row |= 1 << j
        leq.append(row)
    return SubalgebraPoset(algebra=A, members=members, leq=tuple(leq))


def boolean_subalgebras_oracle(A: PartialBooleanAlgebra) -> set[frozenset[int]]:
    """Slow oracle: scan all subsets of the carrier for operation-closed,
    pairwise commeasurable sets (small carriers only)."""
    out = set()
    for r in range(2, A.n + 1):
        for subset in itertools.combinations(range(A.n), r):
            s = set(subset)
            if A.zero not in s or A.one not in s:
                continue
            if not all(A.comm_pair(a, b) for a, b in itertools.combinations(s, 2)):
                continue
            if not all(A.neg[a] in s for a in s):
                continue
            if not all(A.meet[a][b] in s and A.join[a][b] in s
                       for a, b in itertools.combinations(s, 2)):
                continue
            out.add(frozenset(s))
    if A.n == 1:
        out.add(frozenset({A.zero}))
    return out


@dataclass(frozen=True)
class StructureReport:
    least: frozenset[int]
    atoms: tuple[frozenset[int], ...]
    is_filtered: bool
    maximum: frozenset[int] | None


def structure_report(P: SubalgebraPoset) -> StructureReport:
    """Least member, poset atoms, filteredness, and the maximum when the
    poset is filtered (equivalently: when the algebra is Boolean)."""
    A = P.algebra
    least = frozenset({A.zero, A.one})
    li = P.index_of(least)
    n = len(P.members)
    atoms = tuple(P.members[i] for i in range(n)
                  if i != li and not any(
                      j != li and j != i and P.contains(j, i) for j in range(n)))
    is_filtered = all(
        any(P.contains(i, k) and P.contains(j, k) for k in range(n))
        for i in range(n) for j in range(i + 1, n))
    maximum = None
    for i in range(n):
        if all(P.contains(j, i) for j in range(n)):
            maximum = P.members[i]
    return StructureReport(least=least, atoms=atoms,
                           is_filtered=is_filtered, maximum=maximum)


# ---------------------------------------------------------------------------
# Down-sets vs partition lattices
# ---------------------------------------------------------------------------

def partition_lattice(k: int) -> tuple[list[frozenset[frozenset[int]]], list[int]]:
    """The lattice of set partitions of {0..k-1} ordered by refinement:
    returns (elements, leq rows) with leq[i] bit j set iff i refines j."""
    elems = []
    for part in _set_partitions(list(range(k))):
        elems.append(frozenset(frozenset(p) for p in part))
    elems = sorted(set(elems), key=lambda p: (len(p), sorted(tuple(sorted(b)) for b in p)))
    leq = []
    for p in elems:
        row = 0
        for j, q in enumerate(elems):
            if all(any(block <= qblock for qblock in q) for block in p):
                row |= 1 << j
        leq.append(row)
    return elems, leq


def _poset_isomorphic(leq_a: list[int], leq_b: list[int]) -> bool:
    """Backtracking isomorphism search between two finite posets given as
    bitmask rows."""
    n = len(leq_a)
    if n != len(leq_b):
        return False

    def profile(leq, i):
        down = sum(1 for j in range(n) if (leq[j] >> i) & 1)
        up = bin(leq[i]).count("1")
        return (down, up)

    prof_b: dict[tuple, list[int]] = {}
    for j in range(n):
        prof_b.setdefault(profile(leq_b, j), []).append(j)
    order = sorted(range(n), key=lambda i: len(prof_b.get(profile(leq_a, i), [])))
    mapping = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in prof_b.get(profile(leq_a, i), []):
            if used[j]:
                continue
            ok = True
            for i2 in range(n):
                j2 = mapping[i2]
                if j2 == -1:
                    continue
                if ((leq_a[i] >> i2) & 1) != ((leq_b[j] >> j2) & 1):
                    ok = False
                    break
                if ((leq_a[i2] >> i) & 1) != ((leq_b[j2] >> j) & 1):
                    ok = False
                    break
            if ok:
                mapping[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                mapping[i] = -1
                used[j] = False
        return False

    return extend(0)


def downset_matches_partition_lattice(P: SubalgebraPoset, member: frozenset[int]) -> bool:
    """True iff the down-set of ``member`` is dually isomorphic to the
    partition lattice of the atom set of ``member`` (by isomorphism search,
    independent of the partition correspondence used for enumeration)."""
    i = P.index_of(member)
    down = [j for j in range(len(P.members)) if P.contains(j, i)]
    sub_leq = []
    for a in down:
        row = 0
        for bj, b in enumerate(down):
            if P.contains(a, b):
                row |= 1 << bj
        sub_leq.append(row)
    atoms = atoms_of_subalgebra(P.algebra, member)
    k = max(len(atoms), 1)
    _, pl_leq = partition_lattice(k)
    dual = [0] * len(pl_leq)
    for a in range(len(pl_leq)):
        for b in range(len(pl_leq)):
            if (pl_leq[b] >> a) & 1:
                dual[a] |= 1 << b
    return _poset_isomorphic(sub_leq, dual)


def commeasurability_from_members(P: SubalgebraPoset) -> list[int]:
    """Recover the commeasurability relation from the poset: a ⊙ b iff both
    belong to some member.  Used as a structural cross-check."""
    A = P.algebra
    comm = [0] * A.n
    for member in P.members:
        for a in member:
            for b in member:
                comm[a] |= 1 << b
    return comm


def report_text(P: SubalgebraPoset) -> str:
    """Human-readable structure report: members by label plus Hasse edges."""
    A = P.algebra
    rep = structure_report(P)
    lines = [f"subalgebra poset of a {A.n}-element algebra: {len(P.members)} members"]
    for i, member in enumerate(P.members):
        names = ",".join(A.labels[a] for a in sorted(member))
        lines.append(f"  member {i}: {{{names}}}")
    lines.append("hasse edges: " + " ".join(
        f"{i}<{j}" for i, j in P.hasse_edges()))
    lines.append(f"least: {{{','.join(A.labels[a] for a in sorted(rep.least))}}}")
    lines.append(f"atoms: {len(rep.atoms)}")
    lines.append(f"filtered: {'yes' if rep.is_filtered else 'no'}")
    if rep.maximum is not None:
        lines.append("maximum: present")
    return "\n".join(lines)
