"""Finite Stone duality over the subalgebra diagram: spectra of Boolean
members, the limit of spectra (compatible point families, equivalently
two-valued morphisms), the Boolean reflection with its unit, and
Kochen-Specker detection.

The limit is computed by constraint propagation over blocks (one true atom
per maximal Boolean block, consistent across shared elements), which is
exponentially smaller than backtracking over the whole member poset; the
poset-limit definition is kept as a cross-check oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError
from .core import (
    PartialBooleanAlgebra,
    PbaMorphism,
    atoms_of_subalgebra,
    boolean_algebra,
    check_morphism,
    generated_subalgebra,
    maximal_cliques,
)
from .colimit import coproduct
from .poset import SubalgebraPoset, boolean_subalgebras


# ---------------------------------------------------------------------------
# Spectra of Boolean members
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StoneSpace:
    """The spectrum of a Boolean member: its atoms as points.  The point at
    atom p is the two-valued morphism sending x to 1 iff p lies below x."""

    member: frozenset[int]
    points: tuple[int, ...]

    def evaluate(self, A: PartialBooleanAlgebra, p: int, x: int) -> int:
        if p not in self.points or x not in self.member:
            raise DomainError("evaluation outside the spectrum")
        return 1 if A.meet[p][x] == p else 0


def stone_spectrum(A: PartialBooleanAlgebra, C: frozenset[int]) -> StoneSpace:
    """Points of a total Boolean subalgebra: its atoms, in ascending order."""
    for a, b in itertools.combinations(sorted(C), 2):
        if not A.comm_pair(a, b):
            raise DomainError("spectrum needs a totally commeasurable subalgebra")
    if generated_subalgebra(A, C) != frozenset(C):
        raise DomainError("spectrum needs an operation-closed subalgebra")
    return StoneSpace(member=frozenset(C), points=tuple(atoms_of_subalgebra(A, frozenset(C))))


def restriction_map(A: PartialBooleanAlgebra, C: frozenset[int],
                    Cp: frozenset[int]) -> dict[int, int]:
    """For C included in C', the point map Spec(C') -> Spec(C): each atom of
    C' goes to the unique atom of C above it."""
    if not C <= Cp:
        raise DomainError("restriction needs nested members")
    small = stone_spectrum(A, C).points
    out = {}
    for q in stone_spectrum(A, Cp).points:
        above = [p for p in small if A.meet[q][p] == q]
        if len(above) != 1:
            raise DomainError("point restriction is not single-valued")
        out[q] = above[0]
    return out


# ---------------------------------------------------------------------------
# The limit of spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompatibleFamily:
    """A choice of one spectrum point per member, compatible under the
    restriction maps.  ``valuation`` is the induced two-valued map on the
    whole carrier."""

    choice: tuple[tuple[frozenset[int], int], ...]
    valuation: tuple[int, ...]

    def point_at(self, member: frozenset[int]) -> int:
        for m, p in self.choice:
            if m == member:
                return p
        raise DomainError("no choice recorded for that member")


def _family_from_valuation(A: PartialBooleanAlgebra, P: SubalgebraPoset,
                           v: tuple[int, ...]) -> CompatibleFamily:
    choice = []
    for member in P.members:
        true_atoms = [p for p in atoms_of_subalgebra(A, member) if v[p] == 1]
        if len(true_atoms) != 1:
            raise DomainError("valuation is not a point on some member")
        choice.append((member, true_atoms[0]))
    return CompatibleFamily(choice=tuple(choice), valuation=v)


def stone_limit(A: PartialBooleanAlgebra,
                P: SubalgebraPoset | None = None,
                max_solutions: int | None = None) -> tuple[CompatibleFamily, ...]:
    """All compatible families of spectrum points over the member poset,
    canonically ordered by valuation.

    Search runs per block: choose the true atom of each maximal Boolean
    block and propagate consistency through shared elements.
    """
    blocks = [frozenset(i for i in range(A.n) if (clique >> i) & 1)
              for clique in maximal_cliques(A)]
    block_atoms = [atoms_of_subalgebra(A, blk) for blk in blocks]
    order = sorted(range(len(blocks)),
                   key=lambda i: tuple(sorted(blocks[i])))

    solutions: list[tuple[int, ...]] = []
    v: list[int | None] = [None] * A.n

    def value_in_block(bi: int, atom: int, x: int) -> int:
        return 1 if A.meet[atom][x] == atom else 0

    def assign(k: int):
        if max_solutions is not None and len(solutions) >= max_solutions:
            return
        if k == len(order):
            solutions.append(tuple(v))
            return
        bi = order[k]
        for atom in block_atoms[bi]:
            updates = []
            ok = True
            for x in sorted(blocks[bi]):
                val = value_in_block(bi, atom, x)
                if v[x] is None:
                    updates.append(x)
                    v[x] = val
                elif v[x] != val:
                    ok = False
                    break
            if ok:
                assign(k + 1)
            for x in updates:
                v[x] = None

    assign(0)
    # a degenerate carrier (0 = 1) has blocks without atoms, hence no family
    P = P or boolean_subalgebras(A)
    families = [_family_from_valuation(A, P, tuple(int(x) for x in sol))
                for sol in sorted(solutions)]
    return tuple(families)


def stone_limit_poset_oracle(A: PartialBooleanAlgebra,
                             P: SubalgebraPoset | None = None
                             ) -> tuple[tuple[tuple[frozenset[int], int], ...], ...]:
    """The limit computed directly from its definition: backtracking over
    members with the restriction-map compatibility constraints.  Slow; used
    to cross-check the block search."""
    P = P or boolean_subalgebras(A)
    members = list(P.members)
    spectra = {m: stone_spectrum(A, m).points for m in members}
    restrictions = {}
    for s in members:
        for t in members:
            if s < t:
                restrictions[(s, t)] = restriction_map(A, s, t)

    out = []
    choice: dict[frozenset[int], int] = {}

    def assign(k: int):
        if k == len(members):
            out.append(tuple(sorted(choice.items(), key=lambda kv: tuple(sorted(kv[0])))))
            return
        m = members[k]
        for p in spectra[m]:
            ok = True
            for prev in members[:k]:
                if prev < m and restrictions[(prev, m)][p] != choice[prev]:
                    ok = False
                elif m < prev and restrictions[(m, prev)][choice[prev]] != p:
                    ok = False
                if not ok:
                    break
            if ok:
                choice[m] = p
                assign(k + 1)
                del choice[m]

    if A.n > 1:
        assign(0)
    return tuple(out)


def two_valued_morphisms(A: PartialBooleanAlgebra) -> list[PbaMorphism]:
    """Morphisms into the initial algebra, read off the limit families."""
    two = boolean_algebra(1)
    return [PbaMorphism(A, two, fam.valuation) for fam in stone_limit(A)]


def limit_action(f: PbaMorphism) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Contravariant action on limits: a morphism f: A -> B turns each
    family over B into one over A by composing valuations.  Keys and values
    are valuations."""
    fams_b = stone_limit(f.cod)
    fams_a = {fam.valuation: fam for fam in stone_limit(f.dom)}
    out = {}
    for fam in fams_b:
        pulled = tuple(fam.valuation[f.map[a]] for a in range(f.dom.n))
        if pulled not in fams_a:
            raise DomainError("pullback of a two-valued state is not a state")
        out[fam.valuation] = pulled
    return out


# ---------------------------------------------------------------------------
# The Boolean reflection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reflection:
    """The powerset algebra over the limit points together with the unit
    morphism eta sending a to the set of points that hold at a."""

    reflection: PartialBooleanAlgebra
    eta: PbaMorphism
    families: tuple[CompatibleFamily, ...]


def boolean_reflection(A: PartialBooleanAlgebra) -> Reflection:
    """Left reflection into total Boolean algebras: the powerset of the
    limit point set, with eta(a) = the points valuing a at 1.  For carriers
    with no two-valued states the reflection is the one-element algebra."""
    families = stone_limit(A)
    k = len(families)
    L = boolean_algebra(k)
    values = []
    for a in range(A.n):
        mask = 0
        for i, fam in enumerate(families):
            if fam.valuation[a] == 1:
                mask |= 1 << i
        values.append(mask)
    eta = PbaMorphism(A, L, tuple(values))
    chk = check_morphism(eta)
    if not chk.ok:
        raise DomainError(f"reflection unit is not a morphism: {chk.message}")
    return Reflection(reflection=L, eta=eta, families=families)


def is_kochen_specker(A: PartialBooleanAlgebra) -> bool:
    """True iff the carrier admits no two-valued state (empty limit;
    equivalently, the Boolean reflection is the one-element algebra)."""
    return len(stone_limit(A, max_solutions=1)) == 0


def coproduct_stays_kochen_specker(A: PartialBooleanAlgebra,
                                   B: PartialBooleanAlgebra) -> bool:
    """Kochen-Specker carriers absorb coproducts: check that A + B is again
    Kochen-Specker (requires A to be Kochen-Specker)."""
    if not is_kochen_specker(A):
        raise DomainError("first summand must be Kochen-Specker")
    C, _ = coproduct([A, B])
    return is_kochen_specker(C)
