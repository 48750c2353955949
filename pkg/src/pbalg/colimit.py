"""Categorical constructions in the finite fragment: mediating morphisms and
colimit verification over the Boolean subalgebra diagram, coproducts,
products, equalizers, Boolean free products, and the commeasurable tensor
product with its factorization criterion.

Colimit carriers are built by amalgamation: quotient the disjoint union of
the diagram carriers by the equivalence generated by the diagram maps, read
commeasurability off shared objects, and certify the result by validation
and universal-property checks.  Conflicting identifications raise rather
than being repaired.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    AmalgamError,
    CoconeError,
    DomainError,
    InvalidAlgebraError,
    SearchCutoffError,
)
from .core import (
    UNDEF,
    PartialBooleanAlgebra,
    PbaMorphism,
    atoms_of_subalgebra,
    check_morphism,
    compose,
    enumerate_morphisms,
    generated_subalgebra,
    make_pba,
    sub_algebra,
    validate,
)
from .poset import SubalgebraPoset, boolean_subalgebras


# ---------------------------------------------------------------------------
# Cocones over the subalgebra diagram
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cocone:
    """A family of maps out of the Boolean subalgebra diagram into an apex:
    one leg per member, given element-wise on the member's carrier."""

    apex: PartialBooleanAlgebra
    legs: Mapping[frozenset[int], Mapping[int, int]]

    def leg(self, member: frozenset[int]) -> Mapping[int, int]:
        return self.legs[member]


def check_cocone(A: PartialBooleanAlgebra, P: SubalgebraPoset, c: Cocone) -> None:
    """Raise CoconeError unless every member has a leg, each leg is a
    morphism, and legs restrict compatibly along inclusions."""
    for member in P.members:
        if member not in c.legs:
            raise CoconeError(f"cocone lacks a leg for a member of size {len(member)}",
                              pair=(member, None))
        sub, embed = sub_algebra(A, member)
        leg = c.legs[member]
        f = PbaMorphism(sub, c.apex, tuple(leg[a] for a in embed))
        chk = check_morphism(f)
        if not chk.ok:
            raise CoconeError(f"cocone leg is not a morphism: {chk.message}",
                              pair=(member, None))
    for s in P.members:
        for t in P.members:
            if s < t:
                if any(c.legs[t][a] != c.legs[s][a] for a in s):
                    raise CoconeError(
                        "cocone legs disagree on a nested member pair",
                        pair=(s, t))


def inclusion_cocone(A: PartialBooleanAlgebra, P: SubalgebraPoset | None = None) -> Cocone:
    """The tautological cocone: every leg is the inclusion into A itself."""
    P = P or boolean_subalgebras(A)
    legs = {member: {a: a for a in member} for member in P.members}
    return Cocone(apex=A, legs=legs)


def cocone_from_morphism(A: PartialBooleanAlgebra, f: PbaMorphism,
                         P: SubalgebraPoset | None = None) -> Cocone:
    """Restrict a morphism out of A to every member of the diagram."""
    P = P or boolean_subalgebras(A)
    legs = {member: {a: f.map[a] for a in member} for member in P.members}
    return Cocone(apex=f.cod, legs=legs)


def mediating_morphism(A: PartialBooleanAlgebra, c: Cocone,
                       P: SubalgebraPoset | None = None) -> PbaMorphism:
    """The unique morphism m with m ∘ i_C = leg_C for every member C,
    computed element-wise as m(x) = leg over the subalgebra generated by x."""
    P = P or boolean_subalgebras(A)
    check_cocone(A, P, c)
    values = []
    for x in range(A.n):
        gen = generated_subalgebra(A, [x])
        values.append(c.legs[gen][x])
    m = PbaMorphism(A, c.apex, tuple(values))
    chk = check_morphism(m)
    if not chk.ok:
        raise InvalidAlgebraError(
            f"mediating map is not a morphism ({chk.message}); "
            "the input diagram is not a valid partial Boolean algebra")
    for member in P.members:
        for a in member:
            assert m.map[a] == c.legs[member][a]
    return m


# ---------------------------------------------------------------------------
# Cocone generation and colimit verification
# ---------------------------------------------------------------------------

def cocones_into(A: PartialBooleanAlgebra, B: PartialBooleanAlgebra,
                 P: SubalgebraPoset | None = None,
                 max_cocones: int | None = None,
                 rng: random.Random | None = None,
                 max_nodes: int = 2_000_000) -> list[Cocone]:
    """All cocones over the subalgebra diagram of A into B, assembled from
    compatible families of morphisms on the maximal members.  When
    ``max_cocones`` is given and fewer cocones are wanted than exist, a
    deterministic seeded sample is returned."""
    P = P or boolean_subalgebras(A)
    maximal = P.maximal_indices()
    # overlap-greedy ordering: each new member should share as many elements
    # as possible with the ones already placed, so that compatibility
    # constraints prune the assembly early
    ordered: list[int] = []
    remaining = list(maximal)
    covered: set[int] = set()
    while remaining:
        best = max(remaining, key=lambda i: (len(P.members[i] & covered),
                                             -len(P.members[i])))
        ordered.append(best)
        covered |= P.members[best]
        remaining.remove(best)
    per_member: list[list[dict[int, int]]] = []
    for i in ordered:
        member = P.members[i]
        sub, embed = sub_algebra(A, member)
        homs = enumerate_morphisms(sub, B, max_nodes=max_nodes)
        per_member.append([dict(zip(embed, h.map)) for h in homs])

    members_list = [P.members[i] for i in ordered]
    out: list[Cocone] = []
    chosen: list[dict[int, int]] = []
    # with sampling requested, enumerate a deterministic prefix several times
    # larger than the sample and draw from it; unbounded enumeration of the
    # full cocone space can explode combinatorially
    hard_cap = None
    if max_cocones is not None:
        hard_cap = max_cocones if rng is None else max(64 * max_cocones, 512)
    nodes = 0

    def assemble(k: int):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise SearchCutoffError(
                f"search too large: cocone assembly exceeded {max_nodes} nodes",
                limit=max_nodes)
        if hard_cap is not None and len(out) >= hard_cap:
            return
        if k == len(members_list):
            legs: dict[frozenset[int], dict[int, int]] = {}
            for member in P.members:
                big = next(idx for idx, mm in enumerate(members_list) if member <= mm)
                legs[member] = {a: chosen[big][a] for a in member}
            out.append(Cocone(apex=B, legs=legs))
            return
        for cand in per_member[k]:
            ok = True
            for prev_i in range(k):
                shared = members_list[k] & members_list[prev_i]
                if any(cand[a] != chosen[prev_i][a] for a in shared):
                    ok = False
                    break
            if ok:
                chosen.append(cand)
                assemble(k + 1)
                chosen.pop()

    assemble(0)
    if max_cocones is not None and rng is not None and len(out) > max_cocones:
        out = rng.sample(out, max_cocones)
    return out


@dataclass(frozen=True)
class ColimitEntry:
    target_n: int
    cocone_index: int
    mediates: bool
    is_morphism: bool
    unique: bool
    alternatives: int
    uniqueness_route: str  # "filtered-enumeration" or "constrained-search"


@dataclass(frozen=True)
class ColimitReport:
    entries: tuple[ColimitEntry, ...]
    cocones_checked: int

    @property
    def ok(self) -> bool:
        return all(e.mediates and e.is_morphism and e.unique for e in self.entries)


def verify_colimit(A: PartialBooleanAlgebra,
                   targets: Sequence[PartialBooleanAlgebra] | None = None,
                   max_cocones_per_target: int = 8,
                   seed: int = 0,
                   max_apex: int = 16,
                   full_enumeration_budget: int = 200_000) -> ColimitReport:
    """Check that A is the colimit of its Boolean subalgebra diagram against
    generated trial cocones: the mediating morphism exists, is a morphism,
    satisfies the cocone equations, and is the only morphism that does.

    Uniqueness runs as an exhaustive search over the constrained solution
    space (all morphisms pinned to the cocone values); when the raw morphism
    space fits the node budget the unconstrained enumeration-plus-filter
    oracle runs as well.  Apexes larger than ``max_apex`` are rejected.
    """
    from .core import boolean_algebra  # local to avoid import cycle at top

    if targets is None:
        targets = [boolean_algebra(1), boolean_algebra(2), boolean_algebra(3)]
    for B in targets:
        if B.n > max_apex:
            raise DomainError(f"apex of size {B.n} exceeds max_apex={max_apex}")
    P = boolean_subalgebras(A)
    rng = random.Random(seed)
    entries: list[ColimitEntry] = []
    total = 0
    for B in targets:
        cocones = cocones_into(A, B, P, max_cocones=max_cocones_per_target, rng=rng)
        try:
            all_homs = enumerate_morphisms(A, B, max_nodes=full_enumeration_budget)
        except SearchCutoffError:
            all_homs = None
        for ci, c in enumerate(cocones):
            total += 1
            m = mediating_morphism(A, c, P)
            mediates = all(m.map[a] == c.legs[member][a]
                           for member in P.members for a in member)
            is_morphism = check_morphism(m).ok
            prescribed = {a: c.legs[member][a]
                          for member in P.members for a in member}
            solutions = enumerate_morphisms(A, B, prescribed=prescribed)
            unique = len(solutions) == 1 and solutions[0].map == m.map
            route = "constrained-search"
            alternatives = len(solutions)
            if all_homs is not None:
                matching = [h for h in all_homs
                            if all(h.map[a] == c.legs[member][a]
                                   for member in P.members for a in member)]
                unique = unique and len(matching) == 1 and matching[0].map == m.map
                alternatives = len(matching)
                route = "filtered-enumeration"
            entries.append(ColimitEntry(
                target_n=B.n, cocone_index=ci, mediates=mediates,
                is_morphism=is_morphism, unique=unique,
                alternatives=alternatives, uniqueness_route=route))
    return ColimitReport(entries=tuple(entries), cocones_checked=total)


# ---------------------------------------------------------------------------
# Coproducts, products, equalizers
# ---------------------------------------------------------------------------

def coproduct(algs: Sequence[PartialBooleanAlgebra]) -> tuple[PartialBooleanAlgebra, list[PbaMorphism]]:
    """Disjoint union with all bottoms identified and all tops identified;
    elements of different summands are never commeasurable.  The empty
    coproduct is the initial algebra {0, 1}."""
    from .core import boolean_algebra

    for A in algs:
        if A.zero == A.one:
            raise DomainError("coproduct summands must have 0 distinct from 1")
    offsets = []
    labels = ["0", "1"]
    origin = []  # (summand, element) per nontrivial carrier slot
    for si, A in enumerate(algs):
        offsets.append(len(labels))
        for a in A.nontrivial():
            labels.append(A.labels[a])
            origin.append((si, a))
    n = len(labels)
    if n == 2 and not algs:
        return boolean_algebra(1), []

    seen: set[str] = set()
    for i, lab in enumerate(labels):
        if lab in seen and i >= 2:
            base = f"{lab}_{origin[i - 2][0]}"
            candidate = base
            k = 0
            while candidate in seen:
                k += 1
                candidate = f"{base}.{k}"
            labels[i] = candidate
        seen.add(labels[i])

    pos: list[dict[int, int]] = []
    for si, A in enumerate(algs):
        table = {A.zero: 0, A.one: 1}
        nontriv = A.nontrivial()
        for k, a in enumerate(nontriv):
            table[a] = offsets[si] + k
        pos.append(table)

    neg = [1, 0] + [UNDEF] * (n - 2)
    comm_pairs, meets, joins = [], [], []
    for si, A in enumerate(algs):
        t = pos[si]
        for a in A.elements():
            neg_target = t[A.neg[a]]
            if t[a] >= 2:
                neg[t[a]] = neg_target
        for a in A.elements():
            for b in A.elements():
                if a < b and A.comm_pair(a, b):
                    comm_pairs.append((t[a], t[b]))
                    meets.append((t[a], t[b], t[A.meet[a][b]]))
                    joins.append((t[a], t[b], t[A.join[a][b]]))
    out = make_pba(n, 0, 1, neg, comm_pairs, meets, joins, labels)
    report = validate(out)
    if not report.ok:
        raise InvalidAlgebraError("coproduct carrier fails validation", report=report)
    injections = [PbaMorphism(A, out, tuple(pos[si][a] for a in A.elements()))
                  for si, A in enumerate(algs)]
    for inj in injections:
        assert check_morphism(inj).ok
    return out, injections


def product(algs: Sequence[PartialBooleanAlgebra]) -> tuple[PartialBooleanAlgebra, list[PbaMorphism]]:
    """Cartesian product with commeasurability and operations defined
    componentwise.  The empty product is the terminal one-element algebra."""
    from .core import boolean_algebra

    if not algs:
        return boolean_algebra(0), []
    tuples = list(itertools.product(*[range(A.n) for A in algs]))
    index = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)
    zero = index[tuple(A.zero for A in algs)]
    one = index[tuple(A.one for A in algs)]
    labels = ["(" + ",".join(A.labels[x] for A, x in zip(algs, t)) + ")"
              for t in tuples]
    neg = [index[tuple(A.neg[x] for A, x in zip(algs, t))] for t in tuples]
    comm_pairs, meets, joins = [], [], []
    for i, s in enumerate(tuples):
        for j in range(i + 1, n):
            t = tuples[j]
            if all(A.comm_pair(x, y) for A, x, y in zip(algs, s, t)):
                comm_pairs.append((i, j))
                meets.append((i, j, index[tuple(
                    A.meet[x][y] for A, x, y in zip(algs, s, t))]))
                joins.append((i, j, index[tuple(
                    A.join[x][y] for A, x, y in zip(algs, s, t))]))
    out = make_pba(n, zero, one, neg, comm_pairs, meets, joins, labels)
    report = validate(out)
    if not report.ok:
        raise InvalidAlgebraError("product carrier fails validation", report=report)
    projections = [PbaMorphism(out, A, tuple(t[k] for t in tuples))
                   for k, A in enumerate(algs)]
    for p in projections:
        assert check_morphism(p).ok
    return out, projections


def equalizer(f: PbaMorphism, g: PbaMorphism) -> tuple[PartialBooleanAlgebra, PbaMorphism]:
    """The subalgebra {a : f(a) = g(a)} with inherited structure, plus its
    inclusion."""
    if f.dom != g.dom or f.cod != g.cod:
        raise DomainError("equalizer needs a parallel pair")
    S = [a for a in f.dom.elements() if f.map[a] == g.map[a]]
    sub, embed = sub_algebra(f.dom, S)
    report = validate(sub)
    if not report.ok:
        raise InvalidAlgebraError("equalizer carrier fails validation", report=report)
    return sub, PbaMorphism(sub, f.dom, embed)


# ---------------------------------------------------------------------------
# Boolean free products
# ---------------------------------------------------------------------------

def boolean_coproduct(C: PartialBooleanAlgebra, D: PartialBooleanAlgebra
                      ) -> tuple[PartialBooleanAlgebra, PbaMorphism, PbaMorphism]:
    """The coproduct of two finite total Boolean algebras: the free product,
    whose atoms are the pairs of atoms."""
    for X in (C, D):
        if not X.is_total():
            raise DomainError("boolean coproduct needs total Boolean inputs")
    atoms_c = atoms_of_subalgebra(C, frozenset(C.elements()))
    atoms_d = atoms_of_subalgebra(D, frozenset(D.elements()))
    k = len(atoms_c) * len(atoms_d)
    from .core import boolean_algebra

    out = boolean_algebra(k)
    pair_index = {(c, d): i for i, (c, d) in
                  enumerate(itertools.product(atoms_c, atoms_d))}

    def inj_c(x: int) -> int:
        mask = 0
        for (c, d), i in pair_index.items():
            if C.meet[c][x] == c:
                mask |= 1 << i
        return mask

    def inj_d(y: int) -> int:
        mask = 0
        for (c, d), i in pair_index.items():
            if D.meet[d][y] == d:
                mask |= 1 << i
        return mask

    kc = PbaMorphism(C, out, tuple(inj_c(x) for x in C.elements()))
    kd = PbaMorphism(D, out, tuple(inj_d(y) for y in D.elements()))
    assert check_morphism(kc).ok and check_morphism(kd).ok
    return out, kc, kd


# ---------------------------------------------------------------------------
# The commeasurable tensor product
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorResult:
    algebra: PartialBooleanAlgebra
    kappa_a: PbaMorphism
    kappa_b: PbaMorphism
    # decomposition of every carrier element for factorization: a tuple of
    # atom pairs (element of A, element of B) whose images join to it
    atom_pairs: tuple[tuple[tuple[int, int], ...], ...]


def tensor_product(A: PartialBooleanAlgebra, B: PartialBooleanAlgebra,
                   max_carrier: int = 5000) -> TensorResult:
    """Amalgamated colimit of the grid of Boolean free products of members
    of the two subalgebra diagrams.  Elements coming from the two factors
    are always commeasurable, unlike in the coproduct.  The carrier is
    certified by validation; conflicting identifications raise AmalgamError.
    """
    PA = boolean_subalgebras(A)
    PB = boolean_subalgebras(B)
    atoms_a = [atoms_of_subalgebra(A, m) for m in PA.members]
    atoms_b = [atoms_of_subalgebra(B, m) for m in PB.members]

    # object (i, j): free product on atom pairs atoms_a[i] x atoms_b[j];
    # its elements are submasks over those pairs
    pair_lists: dict[tuple[int, int], list[tuple[int, int]]] = {}
    obj_offsets: dict[tuple[int, int], int] = {}
    total = 0
    objects = [(i, j) for i in range(len(PA.members)) for j in range(len(PB.members))]
    for obj in objects:
        i, j = obj
        pairs = list(itertools.product(atoms_a[i], atoms_b[j]))
        pair_lists[obj] = pairs
        obj_offsets[obj] = total
        total += 1 << len(pairs)
        if total > 50_000_000:
            raise SearchCutoffError("tensor grid too large", limit=max_carrier)

    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    def slot(obj, mask: int) -> int:
        return obj_offsets[obj] + mask

    # atom splitting along inclusions: atom p of the smaller member is the
    # join of the atoms of the larger member below it
    def atom_split(X: PartialBooleanAlgebra, small: list[int], large: list[int]
                   ) -> dict[int, list[int]]:
        return {p: [q for q in large if X.meet[q][p] == q] for p in small}

    for (i, j) in objects:
        for (i2, j2) in objects:
            if (i2, j2) == (i, j):
                continue
            if not (PA.contains(i, i2) and PB.contains(j, j2)):
                continue
            split_a = atom_split(A, atoms_a[i], atoms_a[i2])
            split_b = atom_split(B, atoms_b[j], atoms_b[j2])
            src_pairs = pair_lists[(i, j)]
            dst_index = {p: k for k, p in enumerate(pair_lists[(i2, j2)])}
            img = []
            for (pa, pb) in src_pairs:
                m = 0
                for qa in split_a[pa]:
                    for qb in split_b[pb]:
                        m |= 1 << dst_index[(qa, qb)]
                img.append(m)
            for mask in range(1 << len(src_pairs)):
                target = 0
                mm = mask
                while mm:
                    low = mm & -mm
                    target |= img[low.bit_length() - 1]
                    mm ^= low
                union(slot((i, j), mask), slot((i2, j2), target))

    # classes, canonically ordered with 0 first and 1 second
    class_rep: dict[int, int] = {}
    for obj in objects:
        npairs = len(pair_lists[obj])
        for mask in range(1 << npairs):
            s = slot(obj, mask)
            r = find(s)
            class_rep.setdefault(r, s)
    zero_root = find(slot(objects[0], 0))
    one_root = find(slot(objects[0], (1 << len(pair_lists[objects[0]])) - 1))
    roots = sorted(class_rep, key=lambda r: (r != zero_root, r != one_root, r))
    if len(roots) > max_carrier:
        raise SearchCutoffError(
            f"tensor carrier has {len(roots)} elements, over the cutoff",
            limit=max_carrier)
    root_index = {r: i for i, r in enumerate(roots)}
    n = len(roots)
    zero_idx = root_index[zero_root]
    one_idx = root_index[one_root]

    members_of: list[list[tuple[tuple[int, int], int]]] = [[] for _ in range(n)]
    for obj in objects:
        npairs = len(pair_lists[obj])
        for mask in range(1 << npairs):
            members_of[root_index[find(slot(obj, mask))]].append((obj, mask))

    neg = [UNDEF] * n
    comm_rows = [0] * n
    meet = [[UNDEF] * n for _ in range(n)]
    join = [[UNDEF] * n for _ in range(n)]
    for obj in objects:
        npairs = len(pair_lists[obj])
        full = (1 << npairs) - 1
        local = [root_index[find(slot(obj, mask))] for mask in range(1 << npairs)]
        for mask in range(1 << npairs):
            e = local[mask]
            ne = local[full ^ mask]
            if neg[e] == UNDEF:
                neg[e] = ne
            elif neg[e] != ne:
                raise AmalgamError("negation ill-defined on the tensor carrier")
        for ma in range(1 << npairs):
            ea = local[ma]
            for mb in range(ma, 1 << npairs):
                eb = local[mb]
                comm_rows[ea] |= 1 << eb
                comm_rows[eb] |= 1 << ea
                mval, jval = local[ma & mb], local[ma | mb]
                for x, y in ((ea, eb), (eb, ea)):
                    if meet[x][y] == UNDEF:
                        meet[x][y] = mval
                    elif meet[x][y] != mval:
                        raise AmalgamError("meet ill-defined on the tensor carrier")
                    if join[x][y] == UNDEF:
                        join[x][y] = jval
                    elif join[x][y] != jval:
                        raise AmalgamError("join ill-defined on the tensor carrier")

    labels = [f"t{i}" for i in range(n)]
    labels[zero_idx] = "0"
    if one_idx != zero_idx:
        labels[one_idx] = "1"
    T = PartialBooleanAlgebra(
        n=n, zero=zero_idx, one=one_idx, neg=tuple(neg), comm=tuple(comm_rows),
        meet=tuple(tuple(r) for r in meet), join=tuple(tuple(r) for r in join),
        labels=tuple(labels))
    report = validate(T)
    if not report.ok:
        raise AmalgamError(f"tensor carrier fails validation: {report}")

    # canonical injections: x goes through the object (<x>, <0>)
    least_b = PB.index_of(frozenset({B.zero, B.one}))
    least_a = PA.index_of(frozenset({A.zero, A.one}))

    def kappa_a_value(x: int) -> int:
        gi = PA.index_of(generated_subalgebra(A, [x]))
        obj = (gi, least_b)
        mask = 0
        for k, (pa, pb) in enumerate(pair_lists[obj]):
            if A.meet[pa][x] == pa:
                mask |= 1 << k
        return root_index[find(slot(obj, mask))]

    def kappa_b_value(y: int) -> int:
        gj = PB.index_of(generated_subalgebra(B, [y]))
        obj = (least_a, gj)
        mask = 0
        for k, (pa, pb) in enumerate(pair_lists[obj]):
            if B.meet[pb][y] == pb:
                mask |= 1 << k
        return root_index[find(slot(obj, mask))]

    ka = PbaMorphism(A, T, tuple(kappa_a_value(x) for x in A.elements()))
    kb = PbaMorphism(B, T, tuple(kappa_b_value(y) for y in B.elements()))
    for kmor in (ka, kb):
        chk = check_morphism(kmor)
        if not chk.ok:
            raise AmalgamError(f"canonical tensor injection fails: {chk.message}")

    decomp = []
    for i in range(n):
        obj, mask = min(members_of[i])
        pairs = tuple(pair_lists[obj][k]
                      for k in range(len(pair_lists[obj])) if (mask >> k) & 1)
        decomp.append(pairs)
    return TensorResult(algebra=T, kappa_a=ka, kappa_b=kb,
                        atom_pairs=tuple(decomp))


@dataclass(frozen=True)
class FactorizationResult:
    morphism: PbaMorphism | None
    witness: tuple[int, int] | None

    @property
    def factorizes(self) -> bool:
        return self.morphism is not None


def tensor_factorization(f: PbaMorphism, g: PbaMorphism,
                         T: TensorResult | None = None,
                         verify: bool = True) -> FactorizationResult:
    """Factor the cotuple of f and g through the tensor product of their
    domains: possible exactly when every f-image is commeasurable with every
    g-image; otherwise the first witnessing pair is returned."""
    if f.cod != g.cod:
        raise DomainError("factorization needs a common codomain")
    A, B, Z = f.dom, g.dom, f.cod
    for a in range(A.n):
        for b in range(B.n):
            if not Z.comm_pair(f.map[a], g.map[b]):
                return FactorizationResult(morphism=None, witness=(a, b))
    if T is None:
        T = tensor_product(A, B)
    values = []
    for pairs in T.atom_pairs:
        acc = Z.zero
        for (pa, pb) in pairs:
            v = Z.meet[f.map[pa]][g.map[pb]]
            if v == UNDEF:
                raise AmalgamError("cotuple values escape a common block")
            nxt = Z.join[acc][v]
            if nxt == UNDEF:
                raise AmalgamError("cotuple values escape a common block")
            acc = nxt
        values.append(acc)
    h = PbaMorphism(T.algebra, Z, tuple(values))
    if verify:
        chk = check_morphism(h)
        if not chk.ok:
            raise AmalgamError(f"factorizing map is not a morphism: {chk.message}")
        if compose(h, T.kappa_a).map != f.map or compose(h, T.kappa_b).map != g.map:
            raise AmalgamError("factorizing map does not restrict to the inputs")
    return FactorizationResult(morphism=h, witness=None)
