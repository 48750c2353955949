"""Finite partial Boolean algebras.

A partial Boolean algebra is a finite carrier with a reflexive symmetric
commeasurability relation, a total negation, partial meet/join defined exactly
on commeasurable pairs, and distinguished 0 and 1, such that every set of
pairwise commeasurable elements extends to a total Boolean subalgebra.

Elements are dense integer indices; the commeasurability relation is stored as
one bitmask per row, and the partial operation tables use -1 for undefined
entries.  Values are immutable after construction and all operations here are
pure functions, so instances can be shared freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    DomainError,
    InvalidAlgebraError,
    SearchCutoffError,
    StructuralError,
    UndefinedOperationError,
)

UNDEF = -1


def _bit(i: int) -> int:
    return 1 << i


def _bits(mask: int):
    """Iterate set bit positions of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


# ---------------------------------------------------------------------------
# The carrier type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialBooleanAlgebra:
    """Immutable finite partial Boolean algebra.

    Fields:
        n:      element count; elements are the indices 0..n-1.
        zero:   index of the bottom element.
        one:    index of the top element.
        neg:    total negation table, one entry per element.
        comm:   commeasurability relation; ``comm[a]`` is the bitmask of all
                b with a ⊙ b.
        meet:   partial binary table; ``meet[a][b]`` is -1 when undefined.
        join:   partial binary table, same convention.
        labels: one display name per element (whitespace-free).
    """

    n: int
    zero: int
    one: int
    neg: tuple[int, ...]
    comm: tuple[int, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        n = self.n
        if n <= 0:
            raise StructuralError(f"element count must be positive, got {n}")
        for name, idx in (("zero", self.zero), ("one", self.one)):
            if not 0 <= idx < n:
                raise StructuralError(f"{name} index {idx} out of range 0..{n - 1}")
        if len(self.neg) != n:
            raise StructuralError(f"neg table has {len(self.neg)} entries, expected {n}")
        for a, v in enumerate(self.neg):
            if not 0 <= v < n:
                raise StructuralError(f"neg[{a}] = {v} out of range")
        if len(self.comm) != n:
            raise StructuralError(f"comm relation has {len(self.comm)} rows, expected {n}")
        full = (1 << n) - 1
        for a, row in enumerate(self.comm):
            if row & ~full:
                raise StructuralError(f"comm[{a}] references elements beyond {n - 1}")
        for name, table in (("meet", self.meet), ("join", self.join)):
            if len(table) != n:
                raise StructuralError(f"{name} table has {len(table)} rows, expected {n}")
            for a, row in enumerate(table):
                if len(row) != n:
                    raise StructuralError(f"{name}[{a}] has {len(row)} entries, expected {n}")
                for b, v in enumerate(row):
                    if v != UNDEF and not 0 <= v < n:
                        raise StructuralError(f"{name}[{a}][{b}] = {v} out of range")
        if len(self.labels) != n:
            raise StructuralError(f"labels has {len(self.labels)} entries, expected {n}")

    # -- basic accessors ----------------------------------------------------

    def comm_pair(self, a: int, b: int) -> bool:
        return bool((self.comm[a] >> b) & 1)

    def neg_of(self, a: int) -> int:
        return self.neg[a]

    def meet_of(self, a: int, b: int) -> int:
        v = self.meet[a][b]
        if v == UNDEF:
            raise UndefinedOperationError(
                f"meet undefined on ({self.labels[a]}, {self.labels[b]})")
        return v

    def join_of(self, a: int, b: int) -> int:
        v = self.join[a][b]
        if v == UNDEF:
            raise UndefinedOperationError(
                f"join undefined on ({self.labels[a]}, {self.labels[b]})")
        return v

    def leq(self, a: int, b: int) -> bool:
        """Order within a common block: a <= b iff a ∧ b = a (requires a ⊙ b)."""
        return self.meet_of(a, b) == a

    def elements(self) -> range:
        return range(self.n)

    def nontrivial(self) -> list[int]:
        return [a for a in range(self.n) if a != self.zero and a != self.one]

    def is_total(self) -> bool:
        full = (1 << self.n) - 1
        return all(row == full for row in self.comm)

    def is_boolean(self) -> bool:
        """Total commeasurability plus a clean validation report."""
        return self.is_total() and validate(self).ok

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"no element labelled {label!r}") from None

    def __repr__(self):  # keep reprs short; tables are large
        return f"PartialBooleanAlgebra(n={self.n}, labels={list(self.labels)!r})"


def default_labels(n: int, zero: int, one: int) -> tuple[str, ...]:
    if zero == one:
        return tuple("0" if i == zero else f"e{i}" for i in range(n))
    out = []
    for i in range(n):
        out.append("0" if i == zero else "1" if i == one else f"e{i}")
    return tuple(out)


def make_pba(
    n: int,
    zero: int,
    one: int,
    neg: Sequence[int],
    comm_pairs: Iterable[tuple[int, int]] = (),
    meet_entries: Iterable[tuple[int, int, int]] = (),
    join_entries: Iterable[tuple[int, int, int]] = (),
    labels: Sequence[str] | None = None,
) -> PartialBooleanAlgebra:
    """Assemble a carrier from sparse tables, filling in the forced entries.

    Commeasurability is closed under reflexivity, symmetry, the 0/1 rows and
    complement pairs.  Meets and joins with 0, 1, an element itself, or its
    complement are forced by Boolean structure and filled automatically
    (explicit entries win; conflicting explicit entries are structural
    errors).  No semantic validation happens here: feed the result to
    :func:`validate`.
    """
    neg = tuple(neg)
    if len(neg) != n:
        raise StructuralError(f"neg table has {len(neg)} entries, expected {n}")
    comm = [0] * n
    for a in range(n):
        comm[a] |= _bit(a) | _bit(zero) | _bit(one)
        comm[zero] |= _bit(a)
        comm[one] |= _bit(a)
        b = neg[a]
        if 0 <= b < n:
            comm[a] |= _bit(b)
            comm[b] |= _bit(a)
    for a, b in comm_pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise StructuralError(f"comm pair ({a}, {b}) out of range")
        comm[a] |= _bit(b)
        comm[b] |= _bit(a)

    meet = [[UNDEF] * n for _ in range(n)]
    join = [[UNDEF] * n for _ in range(n)]

    def _set(table, a, b, v, name):
        if not (0 <= a < n and 0 <= b < n and 0 <= v < n):
            raise StructuralError(f"{name} entry ({a}, {b}) -> {v} out of range")
        for x, y in ((a, b), (b, a)):
            if table[x][y] not in (UNDEF, v):
                raise StructuralError(
                    f"conflicting {name} entries for ({a}, {b}): {table[x][y]} vs {v}")
            table[x][y] = v

    for a, b, v in meet_entries:
        _set(meet, a, b, v, "meet")
    for a, b, v in join_entries:
        _set(join, a, b, v, "join")

    def _fill(table, a, b, v):
        if table[a][b] == UNDEF:
            table[a][b] = v
        if table[b][a] == UNDEF:
            table[b][a] = v

    for a in range(n):
        _fill(meet, a, a, a)
        _fill(join, a, a, a)
        _fill(meet, zero, a, zero)
        _fill(join, zero, a, a)
        _fill(meet, one, a, a)
        _fill(join, one, a, one)
        b = neg[a]
        if 0 <= b < n:
            _fill(meet, a, b, zero)
            _fill(join, a, b, one)

    if labels is None:
        labels = default_labels(n, zero, one)
    return PartialBooleanAlgebra(
        n=n, zero=zero, one=one, neg=neg,
        comm=tuple(comm),
        meet=tuple(tuple(r) for r in meet),
        join=tuple(tuple(r) for r in join),
        labels=tuple(labels),
    )


# ---------------------------------------------------------------------------
# Stock algebras
# ---------------------------------------------------------------------------

def boolean_algebra(k: int) -> PartialBooleanAlgebra:
    """The total Boolean algebra 2^k on bitmask elements (k = 0 gives the
    one-element terminal algebra with 0 = 1)."""
    if k < 0:
        raise DomainError("atom count must be >= 0")
    n = 1 << k
    full = n - 1
    labels = tuple(format(x, f"0{k}b") if k else "0" for x in range(n))
    comm = tuple(( _bit(n) - 1) for _ in range(n))
    meet = tuple(tuple(a & b for b in range(n)) for a in range(n))
    join = tuple(tuple(a | b for b in range(n)) for a in range(n))
    neg = tuple(full ^ a for a in range(n))
    return PartialBooleanAlgebra(n=n, zero=0, one=full, neg=neg, comm=comm,
                                 meet=meet, join=join, labels=labels)


def trivial_algebra() -> PartialBooleanAlgebra:
    """The terminal algebra: a single element 0 = 1."""
    return boolean_algebra(0)


def initial_algebra() -> PartialBooleanAlgebra:
    """The initial algebra {0, 1} with two distinct elements."""
    return boolean_algebra(1)


# ---------------------------------------------------------------------------
# Maximal cliques of the commeasurability relation (Bron-Kerbosch, bitsets)
# ---------------------------------------------------------------------------

def bron_kerbosch(adj: Sequence[int], n: int) -> list[int]:
    """All maximal cliques of an irreflexive adjacency given as row bitmasks,
    with pivoting, returned in canonical (popcount, value) order."""
    out: list[int] = []

    def expand(r: int, p: int, x: int):
        if p == 0 and x == 0:
            out.append(r)
            return
        pool = p | x
        best_u, best = -1, -1
        m = pool
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            c = _popcount(p & adj[u])
            if c > best:
                best, best_u = c, u
        ext = p & ~adj[best_u]
        while ext:
            v = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            expand(r | _bit(v), p & adj[v], x & adj[v])
            p &= ~_bit(v)
            x |= _bit(v)

    expand(0, (1 << n) - 1, 0)
    return sorted(out, key=lambda m: (_popcount(m), m))


@lru_cache(maxsize=None)
def maximal_cliques(A: PartialBooleanAlgebra) -> tuple[int, ...]:
    """All maximal cliques of the commeasurability graph, as bitmasks, in a
    canonical (popcount, value) order.  These are the candidate blocks."""
    adj = [A.comm[v] & ~_bit(v) for v in range(A.n)]
    return tuple(bron_kerbosch(adj, A.n))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    witness: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __str__(self):
        if self.ok:
            return "valid"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  [{v.rule}] {v.message}" for v in self.violations]
        return "\n".join(lines)


def _boolean_axiom_violations(A: PartialBooleanAlgebra, elems: list[int]) -> list[Violation]:
    """Check that a clique, with the restricted operations, is a Boolean
    algebra: closure, lattice axioms, distributivity, bounds, complements."""
    out = []
    lab = A.labels
    inside = set(elems)
    first = {}  # rule -> already reported

    def report(rule, witness, message):
        if rule not in first:
            first[rule] = True
            out.append(Violation(rule, witness, message))

    for a in elems:
        if A.neg[a] not in inside:
            report("clique_closed_neg", (a,), f"clique not closed under neg at {lab[a]}")
    for a, b in itertools.combinations_with_replacement(elems, 2):
        m = A.meet[a][b]
        j = A.join[a][b]
        if m == UNDEF or j == UNDEF:
            report("op_undefined_on_comm", (a, b),
                   f"meet/join undefined on commeasurable pair ({lab[a]}, {lab[b]})")
            continue
        if m not in inside or j not in inside:
            report("clique_closed_ops", (a, b),
                   f"clique not closed under meet/join at ({lab[a]}, {lab[b]})")
    if out:
        return out  # closure failed; deeper axioms would read bad cells

    if len(elems) > 32:
        return _boolean_transport_violations(A, elems)

    meet = A.meet
    join = A.join
    for a in elems:
        if meet[a][A.one] != a or join[a][A.zero] != a:
            report("bounds", (a,), f"0/1 are not bounds at {lab[a]}")
        if meet[a][A.neg[a]] != A.zero or join[a][A.neg[a]] != A.one:
            report("complement", (a,), f"neg({lab[a]}) is not a complement")
    for a, b in itertools.combinations(elems, 2):
        if join[a][meet[a][b]] != a or meet[a][join[a][b]] != a:
            report("absorption", (a, b), f"absorption fails at ({lab[a]}, {lab[b]})")
    for a, b, c in itertools.combinations_with_replacement(elems, 3):
        # associativity and distributivity, all rotations
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if meet[meet[x][y]][z] != meet[x][meet[y][z]]:
                report("assoc_meet", (x, y, z),
                       f"meet not associative at ({lab[x]}, {lab[y]}, {lab[z]})")
            if join[join[x][y]][z] != join[x][join[y][z]]:
                report("assoc_join", (x, y, z),
                       f"join not associative at ({lab[x]}, {lab[y]}, {lab[z]})")
            if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                report("distributive", (x, y, z),
                       f"meet does not distribute over join at ({lab[x]}, {lab[y]}, {lab[z]})")
            if join[x][meet[y][z]] != meet[join[x][y]][join[x][z]]:
                report("distributive", (x, y, z),
                       f"join does not distribute over meet at ({lab[x]}, {lab[y]}, {lab[z]})")
    return out


def _boolean_transport_violations(A: PartialBooleanAlgebra, elems: list[int]) -> list[Violation]:
    """Equivalent Boolean check for large cliques: the clique must map
    bijectively onto the powerset of its atoms with meet/join/neg carried to
    intersection/union/complement.  Quadratic instead of cubic."""
    lab = A.labels
    inside = set(elems)
    nonzero = [a for a in elems if a != A.zero]
    atoms = [a for a in nonzero
             if not any(b != a and A.meet[a][b] == b for b in nonzero)]
    k = len(atoms)
    if len(elems) != 1 << k:
        return [Violation("clique_not_boolean", tuple(elems[:3]),
                          f"clique of size {len(elems)} has {k} atoms")]
    masks: dict[int, int] = {}
    seen_mask: dict[int, int] = {}
    for t in elems:
        m = 0
        for i, a in enumerate(atoms):
            if A.meet[a][t] == a:
                m |= 1 << i
        if m in seen_mask:
            return [Violation("clique_not_boolean", (seen_mask[m], t),
                              f"elements {lab[seen_mask[m]]} and {lab[t]} sit "
                              "over the same atom set")]
        seen_mask[m] = t
        masks[t] = m
    full = (1 << k) - 1
    for t in elems:
        if A.neg[t] not in inside or masks[A.neg[t]] != full ^ masks[t]:
            return [Violation("complement", (t,),
                              f"neg({lab[t]}) is not the atomwise complement")]
    for a in elems:
        for b in elems:
            if masks[A.meet[a][b]] != masks[a] & masks[b]:
                return [Violation("clique_not_boolean", (a, b),
                                  f"meet({lab[a]}, {lab[b]}) is not the atom "
                                  "intersection")]
            if masks[A.join[a][b]] != masks[a] | masks[b]:
                return [Violation("clique_not_boolean", (a, b),
                                  f"join({lab[a]}, {lab[b]}) is not the atom "
                                  "union")]
    return []


def validate(A: PartialBooleanAlgebra) -> ValidationReport:
    """Check every structural invariant and return a report with witnesses.

    The extension clause is checked on the maximal cliques of the
    commeasurability relation: every pairwise-commeasurable set extends to a
    maximal clique, so it suffices that each maximal clique is closed under
    the operations and Boolean under them (the exhaustive all-subsets check
    is kept as a slow test oracle).
    """
    out: list[Violation] = []
    lab = A.labels
    n = A.n

    for a in range(n):
        if not A.comm_pair(a, a):
            out.append(Violation("comm_reflexive", (a,), f"{lab[a]} not commeasurable with itself"))
        if not A.comm_pair(A.zero, a):
            out.append(Violation("comm_zero", (a,), f"0 not commeasurable with {lab[a]}"))
        if not A.comm_pair(A.one, a):
            out.append(Violation("comm_one", (a,), f"1 not commeasurable with {lab[a]}"))
        if not A.comm_pair(a, A.neg[a]):
            out.append(Violation("comm_neg", (a,), f"{lab[a]} not commeasurable with its negation"))
        if A.neg[A.neg[a]] != a:
            out.append(Violation("neg_involution", (a,),
                                 f"neg(neg({lab[a]})) = {lab[A.neg[A.neg[a]]]} != {lab[a]}"))
    if A.neg[A.zero] != A.one:
        out.append(Violation("neg_zero", (A.zero,), "neg(0) != 1"))

    for a in range(n):
        for b in range(a, n):
            if A.comm_pair(a, b) != A.comm_pair(b, a):
                out.append(Violation("comm_symmetric", (a, b),
                                     f"comm asymmetric on ({lab[a]}, {lab[b]})"))
            defined = A.comm_pair(a, b)
            for name, table in (("meet", A.meet), ("join", A.join)):
                if (table[a][b] != UNDEF) != defined:
                    word = "undefined on commeasurable" if defined else "defined on non-commeasurable"
                    out.append(Violation("op_defined_iff_comm", (a, b),
                                         f"{name} {word} pair ({lab[a]}, {lab[b]})"))
                if table[a][b] != table[b][a]:
                    out.append(Violation(f"{name}_commutative", (a, b),
                                         f"{name} not commutative on ({lab[a]}, {lab[b]})"))

    if not any(v.rule.startswith(("comm_", "neg_", "op_defined")) for v in out):
        for clique in maximal_cliques(A):
            out.extend(_boolean_axiom_violations(A, list(_bits(clique))))

    return ValidationReport(tuple(out))


def extension_clause_oracle(A: PartialBooleanAlgebra) -> bool:
    """Slow oracle for the extension clause: every pairwise-commeasurable
    subset is contained in some pairwise-commeasurable, operation-closed,
    Boolean superset.  Exhaustive over all subsets; use for small carriers.
    """
    cliques = maximal_cliques(A)
    good: list[set[int]] = []
    for clique in cliques:
        elems = list(_bits(clique))
        if not _boolean_axiom_violations(A, elems):
            good.append(set(elems))
    for r in range(1, A.n + 1):
        for subset in itertools.combinations(range(A.n), r):
            if all(A.comm_pair(a, b) for a, b in itertools.combinations(subset, 2)):
                if not any(set(subset) <= g for g in good):
                    return False
    return True


# ---------------------------------------------------------------------------
# Block pasting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockHypergraph:
    """Atom labels plus blocks, each block the atom set of a maximal Boolean
    subalgebra.  Standard Greechie-diagram style input."""

    atoms: tuple[str, ...]
    blocks: tuple[frozenset[str], ...]

    def __post_init__(self):
        seen = set(self.atoms)
        if len(seen) != len(self.atoms):
            raise StructuralError("duplicate atom labels")
        for blk in self.blocks:
            if len(blk) < 2:
                raise StructuralError(f"block {sorted(blk)} has fewer than 2 atoms")
            if not blk <= seen:
                raise StructuralError(f"block {sorted(blk)} uses undeclared atoms")
        for b1, b2 in itertools.combinations(self.blocks, 2):
            if b1 <= b2 or b2 <= b1:
                raise StructuralError(
                    f"block {sorted(b1)} is contained in block {sorted(b2)}")
            if len(b1 & b2) > 1:
                raise StructuralError(
                    f"blocks {sorted(b1)} and {sorted(b2)} share more than one atom")
        covered = set().union(*self.blocks) if self.blocks else set()
        if covered != seen:
            missing = sorted(seen - covered)
            raise StructuralError(f"atoms {missing} occur in no block")


def block_hypergraph(blocks: Iterable[Iterable[str]]) -> BlockHypergraph:
    blocks = tuple(frozenset(b) for b in blocks)
    atoms = tuple(sorted(set().union(*blocks))) if blocks else ()
    return BlockHypergraph(atoms=atoms, blocks=blocks)


def paste_blocks(h: BlockHypergraph) -> PartialBooleanAlgebra:
    """Glue the powerset algebras of the blocks into one partial Boolean
    algebra.

    The carrier consists of global 0 and 1 plus equivalence classes of
    (block, proper nonempty atom subset) pairs under the least equivalence
    that identifies equal atom sets and is closed under in-block
    complementation.  Two classes are commeasurable iff they have
    representatives in a single block.  The output is certified with
    :func:`validate`; pathological pastings are rejected there rather than by
    input-side conditions.
    """
    pairs: list[tuple[int, frozenset[str]]] = []
    index: dict[tuple[int, frozenset[str]], int] = {}
    for bi, blk in enumerate(h.blocks):
        members = sorted(blk)
        for r in range(1, len(members)):
            for sub in itertools.combinations(members, r):
                key = (bi, frozenset(sub))
                index[key] = len(pairs)
                pairs.append(key)

    parent = list(range(len(pairs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            return True
        return False

    # Identify equal atom sets, then close under complementation until stable.
    by_atoms: dict[frozenset[str], list[int]] = {}
    for i, (_, sub) in enumerate(pairs):
        by_atoms.setdefault(sub, []).append(i)
    for idxs in by_atoms.values():
        for j in idxs[1:]:
            union(idxs[0], j)
    changed = True
    while changed:
        changed = False
        groups: dict[int, list[int]] = {}
        for i in range(len(pairs)):
            groups.setdefault(find(i), []).append(i)
        for members in groups.values():
            comps = []
            for i in members:
                bi, sub = pairs[i]
                comps.append(index[(bi, frozenset(h.blocks[bi]) - sub)])
            for j in comps[1:]:
                if union(comps[0], j):
                    changed = True

    roots = sorted({find(i) for i in range(len(pairs))})

    def class_label(root: int) -> str:
        reps = [pairs[i] for i in range(len(pairs)) if find(i) == root]
        best = min(reps, key=lambda p: (len(p[1]), tuple(sorted(p[1]))))
        bi, sub = best
        if len(sub) == 1:
            return next(iter(sub))
        blk = h.blocks[bi]
        if len(sub) == len(blk) - 1:
            (missing,) = blk - sub
            return "~" + missing
        return "+".join(sorted(sub))

    n = 2 + len(roots)
    zero, one = 0, 1
    labels = ["0", "1"] + [class_label(r) for r in roots]
    root_index = {r: 2 + i for i, r in enumerate(roots)}

    def elem_of(bi: int, sub: frozenset[str]) -> int:
        if not sub:
            return zero
        if sub == h.blocks[bi]:
            return one
        return root_index[find(index[(bi, sub)])]

    neg = [one, zero] + [UNDEF] * len(roots)
    comm_pairs = []
    meets = []
    joins = []
    for bi, blk in enumerate(h.blocks):
        members = sorted(blk)
        subs = [frozenset(s) for r in range(0, len(members) + 1)
                for s in itertools.combinations(members, r)]
        for s in subs:
            e = elem_of(bi, s)
            ne = elem_of(bi, blk - s)
            if neg[e] == UNDEF:
                neg[e] = ne
            elif neg[e] != ne:
                raise InvalidAlgebraError(
                    f"pasting makes negation ill-defined at element {labels[e]}")
        for s, t in itertools.combinations(subs, 2):
            e, f = elem_of(bi, s), elem_of(bi, t)
            comm_pairs.append((e, f))
            meets.append((e, f, elem_of(bi, s & t)))
            joins.append((e, f, elem_of(bi, s | t)))

    try:
        A = make_pba(n, zero, one, neg, comm_pairs, meets, joins, labels)
    except StructuralError as exc:
        raise InvalidAlgebraError(f"pasting produced conflicting tables: {exc}") from exc
    report = validate(A)
    if not report.ok:
        raise InvalidAlgebraError("pasted algebra fails validation", report=report)
    return A


# ---------------------------------------------------------------------------
# Orthomodular lattice input
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmlSpec:
    """A finite orthomodular lattice given by its order relation and its
    orthocomplementation table."""

    n: int
    leq: tuple[int, ...]       # row bitmasks: leq[a] has bit b iff a <= b
    ortho: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        n = self.n
        if len(self.leq) != n or len(self.ortho) != n:
            raise StructuralError("order/orthocomplement table size mismatch")
        full = (1 << n) - 1
        for a in range(n):
            if self.leq[a] & ~full:
                raise StructuralError(f"leq[{a}] out of range")
            if not 0 <= self.ortho[a] < n:
                raise StructuralError(f"ortho[{a}] out of range")

    def holds(self, a: int, b: int) -> bool:
        return bool((self.leq[a] >> b) & 1)


def _lattice_tables(L: OmlSpec) -> tuple[int, int, list[list[int]], list[list[int]]]:
    """Bottom, top and total meet/join tables of a finite lattice (rejecting
    inputs where some pair lacks a unique glb/lub)."""
    n = L.n
    for a in range(n):
        if not L.holds(a, a):
            raise DomainError(f"order not reflexive at {L.labels[a]}")
        for b in range(n):
            if L.holds(a, b) and L.holds(b, a) and a != b:
                raise DomainError("order not antisymmetric")
            for c in range(n):
                if L.holds(a, b) and L.holds(b, c) and not L.holds(a, c):
                    raise DomainError("order not transitive")
    bottoms = [a for a in range(n) if all(L.holds(a, b) for b in range(n))]
    tops = [a for a in range(n) if all(L.holds(b, a) for b in range(n))]
    if len(bottoms) != 1 or len(tops) != 1:
        raise DomainError("lattice must be bounded")
    meet = [[UNDEF] * n for _ in range(n)]
    join = [[UNDEF] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lowers = [c for c in range(n) if L.holds(c, a) and L.holds(c, b)]
            glbs = [c for c in lowers if all(L.holds(d, c) for d in lowers)]
            uppers = [c for c in range(n) if L.holds(a, c) and L.holds(b, c)]
            lubs = [c for c in uppers if all(L.holds(c, d) for d in uppers)]
            if len(glbs) != 1 or len(lubs) != 1:
                raise DomainError(
                    f"pair ({L.labels[a]}, {L.labels[b]}) lacks a meet or join")
            meet[a][b] = glbs[0]
            join[a][b] = lubs[0]
    return bottoms[0], tops[0], meet, join


def from_orthomodular(L: OmlSpec) -> PartialBooleanAlgebra:
    """View an orthomodular lattice as a partial Boolean algebra: a ⊙ b iff
    a = (a ∧ b) ∨ (a ∧ b'), with meet/join restricted to such pairs."""
    n = L.n
    zero, one, meet, join = _lattice_tables(L)
    for a in range(n):
        c = L.ortho[a]
        if L.ortho[c] != a:
            raise DomainError(f"orthocomplement not involutive at {L.labels[a]}")
        if meet[a][c] != zero or join[a][c] != one:
            raise DomainError(f"orthocomplement of {L.labels[a]} is not a complement")
        for b in range(n):
            if L.holds(a, b) and not L.holds(L.ortho[b], c):
                raise DomainError("orthocomplement not order-reversing")
            if L.holds(a, b) and join[a][meet[L.ortho[a]][b]] != b:
                raise DomainError(
                    f"orthomodular law fails at ({L.labels[a]}, {L.labels[b]})")

    def compatible(a: int, b: int) -> bool:
        return join[meet[a][b]][meet[a][L.ortho[b]]] == a

    pairs = []
    for a in range(n):
        for b in range(a + 1, n):
            ab = compatible(a, b)
            if ab != compatible(b, a):
                raise DomainError("compatibility relation asymmetric; not orthomodular")
            if ab:
                pairs.append((a, b))
    meets = [(a, b, meet[a][b]) for a, b in pairs]
    joins = [(a, b, join[a][b]) for a, b in pairs]
    A = make_pba(n, zero, one, L.ortho, pairs, meets, joins, L.labels)
    report = validate(A)
    if not report.ok:
        raise InvalidAlgebraError("orthomodular input fails validation", report=report)
    return A


def mo_lattice(k: int) -> OmlSpec:
    """MO(k): the horizontal sum of k four-element blocks glued at 0 and 1;
    MO(2) is the standard six-element example."""
    if k < 1:
        raise DomainError("need at least one block")
    n = 2 + 2 * k
    labels = ["0", "1"]
    for i in range(k):
        labels += [f"x{i}", f"x{i}'"]
    leq = [0] * n
    for a in range(n):
        leq[a] |= _bit(a) | _bit(1)   # a <= a and a <= 1
    leq[0] = (1 << n) - 1             # 0 below everything
    ortho = [1, 0]
    for i in range(k):
        ortho += [2 * i + 3, 2 * i + 2]
    return OmlSpec(n=n, leq=tuple(leq), ortho=tuple(ortho), labels=tuple(labels))


# ---------------------------------------------------------------------------
# Generated subalgebras
# ---------------------------------------------------------------------------

def _require_pairwise_comm(A: PartialBooleanAlgebra, S: Iterable[int]) -> list[int]:
    S = sorted(set(S))
    for a, b in itertools.combinations(S, 2):
        if not A.comm_pair(a, b):
            raise DomainError(
                f"elements {A.labels[a]} and {A.labels[b]} are not commeasurable")
    return S


def generated_subalgebra(A: PartialBooleanAlgebra, S: Iterable[int]) -> frozenset[int]:
    """The least operation-closed superset of S ∪ {0, 1}: the Boolean
    subalgebra generated by a pairwise commeasurable set."""
    S = _require_pairwise_comm(A, S)
    closed = {A.zero, A.one, *S}
    frontier = list(closed)
    while frontier:
        fresh = set()
        for a in frontier:
            b = A.neg[a]
            if b not in closed:
                fresh.add(b)
        for a, b in itertools.combinations(sorted(closed), 2):
            if A.comm_pair(a, b):
                for v in (A.meet_of(a, b), A.join_of(a, b)):
                    if v not in closed:
                        fresh.add(v)
        closed |= fresh
        frontier = list(fresh)
    return frozenset(closed)


def generated_subalgebra_oracle(A: PartialBooleanAlgebra, S: Iterable[int]) -> frozenset[int]:
    """Independent oracle: intersection of all operation-closed supersets of
    S ∪ {0, 1}.  Exponential; small carriers only."""
    S = set(_require_pairwise_comm(A, S)) | {A.zero, A.one}
    best: set[int] | None = None
    rest = [a for a in range(A.n) if a not in S]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            candidate = S | set(extra)
            if not all(A.comm_pair(a, b) for a, b in itertools.combinations(candidate, 2)):
                continue
            ok = all(A.neg[a] in candidate for a in candidate)
            if ok:
                for a, b in itertools.combinations(candidate, 2):
                    if A.meet_of(a, b) not in candidate or A.join_of(a, b) not in candidate:
                        ok = False
                        break
            if ok and (best is None or len(candidate) < len(best)):
                best = candidate
        if best is not None:
            break  # supersets found at this size are minimal by construction
    if best is None:
        raise DomainError("no closed superset found; algebra invalid")
    return frozenset(best)


def join_all(A: PartialBooleanAlgebra, S: Iterable[int]) -> int:
    """Iterated binary join of a pairwise commeasurable set (empty join = 0).
    The fold happens inside the generated subalgebra, so the result is
    independent of iteration order."""
    S = _require_pairwise_comm(A, S)
    acc = A.zero
    for a in S:
        acc = A.join_of(acc, a)
    return acc


def meet_all(A: PartialBooleanAlgebra, S: Iterable[int]) -> int:
    S = _require_pairwise_comm(A, S)
    acc = A.one
    for a in S:
        acc = A.meet_of(acc, a)
    return acc


def atoms_of_subalgebra(A: PartialBooleanAlgebra, S: frozenset[int]) -> list[int]:
    """Minimal nonzero elements of a totally commeasurable subalgebra."""
    nonzero = [a for a in sorted(S) if a != A.zero]
    return [a for a in nonzero
            if not any(b != a and A.meet_of(a, b) == b for b in nonzero)]


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PbaMorphism:
    """A total map between carriers, to be checked against the morphism
    clauses (preservation of comm, 0, 1, neg, and meet/join where defined)."""

    dom: PartialBooleanAlgebra
    cod: PartialBooleanAlgebra
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.dom.n:
            raise StructuralError(
                f"map has {len(self.map)} entries, expected {self.dom.n}")
        for a, v in enumerate(self.map):
            if not 0 <= v < self.cod.n:
                raise StructuralError(f"map[{a}] = {v} out of codomain range")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __repr__(self):
        return f"PbaMorphism({self.dom.n}->{self.cod.n}, map={list(self.map)!r})"


def identity_morphism(A: PartialBooleanAlgebra) -> PbaMorphism:
    return PbaMorphism(A, A, tuple(range(A.n)))


def compose(g: PbaMorphism, f: PbaMorphism) -> PbaMorphism:
    if f.cod is not g.dom and f.cod != g.dom:
        raise DomainError("morphisms not composable")
    return PbaMorphism(f.dom, g.cod, tuple(g.map[v] for v in f.map))


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    clause: str | None = None
    witness: tuple[int, ...] = ()
    message: str = ""

    def __bool__(self):
        return self.ok


def check_morphism(f: PbaMorphism) -> MorphismCheck:
    """True iff all morphism clauses hold; otherwise the first violated
    clause (in a fixed deterministic order) with witnesses."""
    A, B, m = f.dom, f.cod, f.map
    if m[A.zero] != B.zero:
        return MorphismCheck(False, "zero", (A.zero,), "does not preserve 0")
    if m[A.one] != B.one:
        return MorphismCheck(False, "one", (A.one,), "does not preserve 1")
    for a in range(A.n):
        if m[A.neg[a]] != B.neg[m[a]]:
            return MorphismCheck(False, "neg", (a,),
                                 f"neg not preserved at {A.labels[a]}")
    for a in range(A.n):
        for b in range(a + 1, A.n):
            if not A.comm_pair(a, b):
                continue
            if not B.comm_pair(m[a], m[b]):
                return MorphismCheck(False, "comm", (a, b),
                                     f"commeasurability not preserved at ({A.labels[a]}, {A.labels[b]})")
    for a in range(A.n):
        for b in range(a + 1, A.n):
            if not A.comm_pair(a, b):
                continue
            if m[A.meet[a][b]] != B.meet[m[a]][m[b]]:
                return MorphismCheck(False, "meet", (a, b),
                                     f"meet not preserved at ({A.labels[a]}, {A.labels[b]})")
            if m[A.join[a][b]] != B.join[m[a]][m[b]]:
                return MorphismCheck(False, "join", (a, b),
                                     f"join not preserved at ({A.labels[a]}, {A.labels[b]})")
    return MorphismCheck(True)


def enumerate_morphisms(
    A: PartialBooleanAlgebra,
    B: PartialBooleanAlgebra,
    max_nodes: int = 5_000_000,
    prescribed: dict[int, int] | None = None,
) -> list[PbaMorphism]:
    """Complete duplicate-free list of morphisms A -> B in lexicographic
    order on the underlying map.  Backtracking with constraint propagation;
    raises SearchCutoffError('search too large') past the node budget.

    ``prescribed`` pins chosen elements to fixed images; the search then
    exhausts exactly the morphisms extending that partial map (used for
    uniqueness checks against cocone equations)."""
    n = A.n
    # pairs whose meet/join lands at element t, for deferred checks
    meet_last: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    join_last: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if A.comm_pair(a, b):
                t = A.meet[a][b]
                u = A.join[a][b]
                if t > max(a, b):
                    meet_last[t].append((a, b))
                if u > max(a, b):
                    join_last[u].append((a, b))

    f = [UNDEF] * n
    out: list[PbaMorphism] = []
    nodes = 0

    def consistent(k: int, z: int) -> bool:
        if k == A.zero and z != B.zero:
            return False
        if k == A.one and z != B.one:
            return False
        if A.neg[k] < k and z != B.neg[f[A.neg[k]]]:
            return False
        for j in range(k):
            if not A.comm_pair(k, j):
                continue
            w = f[j]
            if not B.comm_pair(z, w):
                return False
            t = A.meet[k][j]
            tv = z if t == k else f[t] if t < k else UNDEF
            if tv != UNDEF and B.meet[z][w] != tv:
                return False
            u = A.join[k][j]
            uv = z if u == k else f[u] if u < k else UNDEF
            if uv != UNDEF and B.join[z][w] != uv:
                return False
        for i, j in meet_last[k]:
            if i < k and j < k and B.meet[f[i]][f[j]] != z:
                return False
        for i, j in join_last[k]:
            if i < k and j < k and B.join[f[i]][f[j]] != z:
                return False
        return True

    def assign(k: int):
        nonlocal nodes
        if k == n:
            out.append(PbaMorphism(A, B, tuple(f)))
            return
        if prescribed is not None and k in prescribed:
            candidates = (prescribed[k],)
        elif k == A.zero:
            candidates = (B.zero,)
        elif k == A.one:
            candidates = (B.one,)
        elif A.neg[k] < k:
            candidates = (B.neg[f[A.neg[k]]],)
        else:
            candidates = range(B.n)
        for z in candidates:
            nodes += 1
            if nodes > max_nodes:
                raise SearchCutoffError(
                    f"search too large: morphism enumeration exceeded {max_nodes} nodes",
                    limit=max_nodes)
            if consistent(k, z):
                f[k] = z
                assign(k + 1)
                f[k] = UNDEF

    assign(0)
    return out


# ---------------------------------------------------------------------------
# Subalgebras as standalone carriers, image factorization
# ---------------------------------------------------------------------------

def sub_algebra(
    A: PartialBooleanAlgebra, S: Iterable[int]
) -> tuple[PartialBooleanAlgebra, tuple[int, ...]]:
    """Restrict A to an operation-closed subset S (0 and 1 must belong).
    Returns the restricted carrier and the embedding table sub-index ->
    A-index."""
    embed = tuple(sorted(set(S)))
    pos = {a: i for i, a in enumerate(embed)}
    if A.zero not in pos or A.one not in pos:
        raise DomainError("subset must contain 0 and 1")
    n = len(embed)
    comm = []
    for a in embed:
        row = 0
        for b in embed:
            if A.comm_pair(a, b):
                row |= _bit(pos[b])
        comm.append(row)
    neg = []
    for a in embed:
        v = A.neg[a]
        if v not in pos:
            raise DomainError(f"subset not closed under neg at {A.labels[a]}")
        neg.append(pos[v])
    meet = [[UNDEF] * n for _ in range(n)]
    join = [[UNDEF] * n for _ in range(n)]
    for i, a in enumerate(embed):
        for j, b in enumerate(embed):
            if A.comm_pair(a, b):
                for name, src, dst in (("meet", A.meet, meet), ("join", A.join, join)):
                    v = src[a][b]
                    if v not in pos:
                        raise DomainError(
                            f"subset not closed under {name} at ({A.labels[a]}, {A.labels[b]})")
                    dst[i][j] = pos[v]
    sub = PartialBooleanAlgebra(
        n=n, zero=pos[A.zero], one=pos[A.one], neg=tuple(neg), comm=tuple(comm),
        meet=tuple(tuple(r) for r in meet), join=tuple(tuple(r) for r in join),
        labels=tuple(A.labels[a] for a in embed))
    return sub, embed


def inclusion_morphism(A: PartialBooleanAlgebra, S: Iterable[int]) -> PbaMorphism:
    sub, embed = sub_algebra(A, S)
    return PbaMorphism(sub, A, embed)


@dataclass(frozen=True)
class ImageFactorization:
    image: PartialBooleanAlgebra
    surjection: PbaMorphism   # dom -> image
    inclusion: PbaMorphism    # image -> cod


def image_factorization(f: PbaMorphism) -> ImageFactorization:
    """Factor a morphism through its set-theoretic image.  The image carries
    the pushforward commeasurability (x ⊙ y iff some preimage pair is
    commeasurable) and the operations of the codomain."""
    chk = check_morphism(f)
    if not chk:
        raise DomainError(f"not a morphism: {chk.message}")
    A, B = f.dom, f.cod
    embed = tuple(sorted(set(f.map)))
    pos = {v: i for i, v in enumerate(embed)}
    n = len(embed)
    comm = [0] * n
    for a in range(A.n):
        for b in range(A.n):
            if A.comm_pair(a, b):
                comm[pos[f.map[a]]] |= _bit(pos[f.map[b]])
    meet = [[UNDEF] * n for _ in range(n)]
    join = [[UNDEF] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if (comm[i] >> j) & 1:
                meet[i][j] = pos[B.meet[embed[i]][embed[j]]]
                join[i][j] = pos[B.join[embed[i]][embed[j]]]
    image = PartialBooleanAlgebra(
        n=n, zero=pos[B.zero], one=pos[B.one],
        neg=tuple(pos[B.neg[v]] for v in embed),
        comm=tuple(comm),
        meet=tuple(tuple(r) for r in meet), join=tuple(tuple(r) for r in join),
        labels=tuple(B.labels[v] for v in embed))
    report = validate(image)
    if not report.ok:
        raise InvalidAlgebraError("image carrier fails validation", report=report)
    surj = PbaMorphism(A, image, tuple(pos[v] for v in f.map))
    incl = PbaMorphism(image, B, embed)
    return ImageFactorization(image=image, surjection=surj, inclusion=incl)


# ---------------------------------------------------------------------------
# Isomorphism search
# ---------------------------------------------------------------------------

def _signature(A: PartialBooleanAlgebra, a: int) -> tuple:
    deg = _popcount(A.comm[a])
    return (a == A.zero, a == A.one, a == A.neg[a], deg)


def find_isomorphism(A: PartialBooleanAlgebra, B: PartialBooleanAlgebra) -> tuple[int, ...] | None:
    """Search for a bijection preserving 0, 1, neg, comm, meet and join.
    Returns the map A-index -> B-index, or None."""
    if A.n != B.n:
        return None
    sig_b: dict[tuple, list[int]] = {}
    for b in range(B.n):
        sig_b.setdefault(_signature(B, b), []).append(b)
    for a in range(A.n):
        if len(sig_b.get(_signature(A, a), [])) == 0:
            return None

    order = sorted(range(A.n), key=lambda a: len(sig_b[_signature(A, a)]))
    f = [UNDEF] * A.n
    used = [False] * B.n

    def extend(k: int) -> bool:
        if k == A.n:
            return True
        a = order[k]
        for b in sig_b[_signature(A, a)]:
            if used[b]:
                continue
            if (a == A.zero) != (b == B.zero) or (a == A.one) != (b == B.one):
                continue
            ok = True
            if f[A.neg[a]] != UNDEF and f[A.neg[a]] != B.neg[b]:
                ok = False
            if ok:
                for a2 in range(A.n):
                    v = f[a2]
                    if v == UNDEF:
                        continue
                    if A.comm_pair(a, a2) != B.comm_pair(b, v):
                        ok = False
                        break
                    if A.comm_pair(a, a2):
                        ma = f[A.meet[a][a2]]
                        if ma != UNDEF and ma != B.meet[b][v]:
                            ok = False
                            break
                        ja = f[A.join[a][a2]]
                        if ja != UNDEF and ja != B.join[b][v]:
                            ok = False
                            break
            if ok:
                f[a] = b
                used[b] = True
                if extend(k + 1):
                    return True
                f[a] = UNDEF
                used[b] = False
        return False

    if extend(0):
        iso = PbaMorphism(A, B, tuple(f))
        assert check_morphism(iso).ok
        return tuple(f)
    return None


def is_isomorphic(A: PartialBooleanAlgebra, B: PartialBooleanAlgebra) -> bool:
    return find_isomorphism(A, B) is not None
