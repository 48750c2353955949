"""The external Bohrification frame of a finite partial Boolean algebra and
its action on morphisms.

A frame element assigns to every Boolean member an open (point subset) of
its spectrum, admissibly: along every inclusion of members, points whose
restriction lies in the chosen open must themselves be chosen.  This is the
pullback reading of monotonicity; plain containment is meaningless across
different spectra.

Meets and joins are pointwise; the action of a morphism pushes opens forward
through the point maps of all members landing below a target member.  It
always preserves the top and all joins; it preserves binary meets when the
morphism reflects commeasurability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, PbalgError, SearchCutoffError, StructuralError
from .core import PartialBooleanAlgebra, PbaMorphism, atoms_of_subalgebra
from .poset import SubalgebraPoset, boolean_subalgebras

FrameElement = tuple[frozenset[int], ...]


class BohrFrame:
    """The frame of admissible spectral-open families over the Boolean
    subalgebra poset of one carrier."""

    def __init__(self, A: PartialBooleanAlgebra, P: SubalgebraPoset | None = None):
        self.algebra = A
        self.poset = P or boolean_subalgebras(A)
        members = self.poset.members
        self.spectra: list[tuple[int, ...]] = [
            tuple(atoms_of_subalgebra(A, m)) for m in members]
        # restriction maps for strict inclusions: point of the larger member
        # to the unique atom of the smaller member above it
        self.restrictions: dict[tuple[int, int], dict[int, int]] = {}
        for i, small in enumerate(members):
            for j, large in enumerate(members):
                if i == j or not self.poset.contains(i, j):
                    continue
                rho = {}
                for q in self.spectra[j]:
                    above = [p for p in self.spectra[i] if A.meet[q][p] == q]
                    if len(above) != 1:
                        raise StructuralError("point restriction not single-valued")
                    rho[q] = above[0]
                self.restrictions[(i, j)] = rho

    # -- element structure ---------------------------------------------------

    def check_shape(self, fam: FrameElement) -> None:
        if len(fam) != len(self.poset.members):
            raise DomainError("family is not indexed by the member poset")
        for i, opens in enumerate(fam):
            if not opens <= set(self.spectra[i]):
                raise DomainError(f"opens at member {i} are not spectrum points")

    def admissible(self, fam: FrameElement) -> bool:
        """Pullback admissibility along every comparable member pair."""
        self.check_shape(fam)
        for (i, j), rho in self.restrictions.items():
            for q in self.spectra[j]:
                if rho[q] in fam[i] and q not in fam[j]:
                    return False
        return True

    def bottom(self) -> FrameElement:
        return tuple(frozenset() for _ in self.spectra)

    def top(self) -> FrameElement:
        return tuple(frozenset(pts) for pts in self.spectra)

    def meet(self, F: FrameElement, G: FrameElement) -> FrameElement:
        return tuple(f & g for f, g in zip(F, G))

    def join(self, F: FrameElement, G: FrameElement) -> FrameElement:
        return tuple(f | g for f, g in zip(F, G))

    def join_all(self, fams: Sequence[FrameElement]) -> FrameElement:
        acc = self.bottom()
        for f in fams:
            acc = self.join(acc, f)
        return acc

    def principal(self, member_index: int, points: frozenset[int]) -> FrameElement:
        """Least admissible family whose open at the given member contains
        the given points (upward closure along restrictions)."""
        fam = [set() for _ in self.spectra]
        fam[member_index] = set(points)
        changed = True
        while changed:
            changed = False
            for (i, j), rho in self.restrictions.items():
                for q in self.spectra[j]:
                    if rho[q] in fam[i] and q not in fam[j]:
                        fam[j].add(q)
                        changed = True
        return tuple(frozenset(s) for s in fam)

    # -- enumeration ----------------------------------------------------------

    def size_bound(self) -> int:
        b = 1
        for pts in self.spectra:
            b <<= len(pts)
        return b

    def elements(self, max_frame: int = 65536) -> tuple[FrameElement, ...]:
        """All admissible families by brute force over the product of open
        sets, canonically ordered."""
        if self.size_bound() > max_frame:
            raise SearchCutoffError(
                f"frame enumeration bound {self.size_bound()} exceeds {max_frame}",
                limit=max_frame)
        per_member = []
        for pts in self.spectra:
            subsets = [frozenset(c) for r in range(len(pts) + 1)
                       for c in itertools.combinations(pts, r)]
            per_member.append(subsets)
        out = [fam for fam in itertools.product(*per_member)
               if self.admissible(fam)]
        return tuple(sorted(out, key=self._sort_key))

    def elements_recursive(self, max_frame: int = 65536) -> tuple[FrameElement, ...]:
        """Independent enumeration: assign opens member by member in size
        order, only ever extending the forced upward closure."""
        order = sorted(range(len(self.poset.members)),
                       key=lambda i: (len(self.poset.members[i]),
                                      tuple(sorted(self.poset.members[i]))))
        out: list[FrameElement] = []
        fam: list[frozenset[int]] = [frozenset()] * len(order)

        def assign(k: int):
            if len(out) > max_frame:
                raise SearchCutoffError("frame enumeration exceeded the cutoff",
                                        limit=max_frame)
            if k == len(order):
                out.append(tuple(fam))
                return
            j = order[k]
            required = set()
            for i in order[:k]:
                if (i, j) in self.restrictions:
                    rho = self.restrictions[(i, j)]
                    required |= {q for q in self.spectra[j] if rho[q] in fam[i]}
            free = [q for q in self.spectra[j] if q not in required]
            for r in range(len(free) + 1):
                for extra in itertools.combinations(free, r):
                    fam[j] = frozenset(required) | frozenset(extra)
                    assign(k + 1)
            fam[j] = frozenset()

        assign(0)
        return tuple(sorted(out, key=self._sort_key))

    def _sort_key(self, fam: FrameElement):
        return tuple(tuple(sorted(s)) for s in fam)

    def check_frame_laws(self, elements: Sequence[FrameElement]) -> None:
        """Bounded-lattice and distributivity laws of the finite frame: meets
        distribute over arbitrary joins of the enumerated elements."""
        elems = list(elements)
        top, bot = self.top(), self.bottom()
        for F in elems:
            assert self.meet(F, top) == F and self.join(F, bot) == F
            assert self.admissible(F)
        for F, G in itertools.combinations(elems, 2):
            if not (self.admissible(self.meet(F, G))
                    and self.admissible(self.join(F, G))):
                raise PbalgError("frame not closed under meet/join")
        for F in elems:
            for G, H in itertools.combinations(elems, 2):
                lhs = self.meet(F, self.join(G, H))
                rhs = self.join(self.meet(F, G), self.meet(F, H))
                if lhs != rhs:
                    raise PbalgError("finite distributivity fails")
        # meet against the join of every enumerated subset of size three
        for combo in itertools.combinations(elems, 3):
            big = self.join_all(combo)
            for F in elems[: min(len(elems), 8)]:
                lhs = self.meet(F, big)
                rhs = self.join_all([self.meet(F, G) for G in combo])
                if lhs != rhs:
                    raise PbalgError("distributivity over wider joins fails")


# ---------------------------------------------------------------------------
# Morphism action
# ---------------------------------------------------------------------------

def member_image(f: PbaMorphism, member: frozenset[int]) -> frozenset[int]:
    return frozenset(f.map[a] for a in member)


@dataclass(frozen=True)
class FrameMorphismReport:
    preserves_top: bool
    preserves_joins: bool
    preserves_binary_meets: bool
    meet_witness: tuple[FrameElement, FrameElement, int] | None
    join_witness: tuple[FrameElement, FrameElement, int] | None


class FrameMap:
    """The frame morphism induced on Bohrification frames by a morphism of
    partial Boolean algebras: push each open forward through all members
    whose image lands below the target member."""

    def __init__(self, f: PbaMorphism, src: BohrFrame | None = None,
                 dst: BohrFrame | None = None):
        self.morphism = f
        self.src = src or BohrFrame(f.dom)
        self.dst = dst or BohrFrame(f.cod)
        B = f.cod
        # qualifying pairs: source member i with image inside target member j,
        # with the point map Spec(D_j) -> Spec(C_i)
        self.point_maps: dict[tuple[int, int], dict[int, int]] = {}
        for i, C in enumerate(self.src.poset.members):
            img = member_image(f, C)
            for j, D in enumerate(self.dst.poset.members):
                if not img <= D:
                    continue
                ptmap = {}
                for q in self.dst.spectra[j]:
                    cs = [c for c in self.src.spectra[i]
                          if B.meet[q][f.map[c]] == q]
                    if len(cs) != 1:
                        raise StructuralError("induced point map not single-valued")
                    ptmap[q] = cs[0]
                self.point_maps[(i, j)] = ptmap

    def __call__(self, F: FrameElement) -> FrameElement:
        self.src.check_shape(F)
        out = []
        for j in range(len(self.dst.poset.members)):
            opens: set[int] = set()
            for (i, jj), ptmap in self.point_maps.items():
                if jj != j:
                    continue
                opens |= {q for q, c in ptmap.items() if c in F[i]}
            out.append(frozenset(opens))
        fam = tuple(out)
        if not self.dst.admissible(fam):
            raise StructuralError("morphism action produced an inadmissible family")
        return fam

    def report(self, elements: Sequence[FrameElement] | None = None,
               max_frame: int = 65536) -> FrameMorphismReport:
        """Exhaustive preservation report over the enumerated source frame.
        Witnesses are re-checkable (families plus the failing member)."""
        elems = list(elements) if elements is not None else \
            list(self.src.elements(max_frame=max_frame))
        top_ok = self(self.src.top()) == self.dst.top()
        join_ok, join_witness = True, None
        meet_ok, meet_witness = True, None
        images = {F: self(F) for F in elems}
        for F, G in itertools.combinations_with_replacement(elems, 2):
            j_img = images.get(self.src.join(F, G))
            if j_img is None:
                j_img = self(self.src.join(F, G))
            expected = self.dst.join(images[F], images[G])
            if j_img != expected:
                join_ok = False
                join_witness = (F, G, next(
                    j for j in range(len(j_img)) if j_img[j] != expected[j]))
                break
        for F, G in itertools.combinations_with_replacement(elems, 2):
            m_img = images.get(self.src.meet(F, G))
            if m_img is None:
                m_img = self(self.src.meet(F, G))
            expected = self.dst.meet(images[F], images[G])
            if m_img != expected:
                meet_ok = False
                meet_witness = (F, G, next(
                    j for j in range(len(m_img)) if m_img[j] != expected[j]))
                break
        return FrameMorphismReport(
            preserves_top=top_ok, preserves_joins=join_ok,
            preserves_binary_meets=meet_ok,
            meet_witness=meet_witness, join_witness=join_witness)


def reflects_commeasurability(f: PbaMorphism) -> bool:
    """True iff commeasurable images force commeasurable arguments.  The
    elementwise condition is computed directly and asserted equal to its
    diagram formulation (joint refinement of members into a common image
    target), which is computed independently."""
    A, B = f.dom, f.cod
    elementwise = True
    for a in range(A.n):
        for b in range(A.n):
            if B.comm_pair(f.map[a], f.map[b]) and not A.comm_pair(a, b):
                elementwise = False
                break
        if not elementwise:
            break

    PA = boolean_subalgebras(A)
    PB = boolean_subalgebras(B)
    diagrammatic = True
    for C in PA.members:
        for Cp in PA.members:
            for D in PB.members:
                if not (member_image(f, C) <= D and member_image(f, Cp) <= D):
                    continue
                if not any(C <= Cpp and Cp <= Cpp and member_image(f, Cpp) <= D
                           for Cpp in PA.members):
                    diagrammatic = False
                    break
            if not diagrammatic:
                break
        if not diagrammatic:
            break
    if elementwise != diagrammatic:
        raise PbalgError(
            "elementwise and diagrammatic commeasurability reflection disagree")
    return elementwise


def frame_nontrivial_without_states(A: PartialBooleanAlgebra) -> bool:
    """Witness that the two-dimensional picture can be nontrivial where the
    one-dimensional one is empty: true iff no two-valued state exists while
    the Bohrification frame has at least three distinct elements (bottom,
    top, and a principal family)."""
    from .stone import stone_limit

    if len(stone_limit(A, max_solutions=1)) > 0:
        return False
    frame = BohrFrame(A)
    candidates = [frame.bottom(), frame.top()]
    atom_member = next(
        (i for i, m in enumerate(frame.poset.members) if len(m) == 4), None)
    if atom_member is not None:
        candidates.append(frame.principal(
            atom_member, frozenset(frame.spectra[atom_member])))
    distinct = {frame._sort_key(F) for F in candidates}
    return all(frame.admissible(F) for F in candidates) and len(distinct) >= 3
