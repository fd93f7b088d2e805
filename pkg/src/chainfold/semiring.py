"""Permutation problems of bounded degree over arbitrary semirings.

A degree-d problem assigns each permutation pi of [n] the product

    f(pi) = (x) over j of  local_cost({pi(1)..pi(j)}, last min(d, j) entries)

and asks for the sum (+) of f(pi) over all permutations.  TSP-as-a-problem is
(min, +) with edge weights as local costs (yielding the minimum Hamiltonian
*path* weight); counting linear extensions is (+, *) with a 0/1 downset
check.

Three evaluators, strongest preconditions last:

* evaluate_brute -- fold over all n! permutations; the oracle.
* evaluate_dp    -- subset DP with the last d-1 entries in the state.
* evaluate_restricted / evaluate_unique -- per-member restricted DPs over a
  covering family, combined with (+).  Restricted needs an additively
  idempotent semiring (overlapping members would otherwise double-count);
  unique accepts any semiring because each permutation is supported exactly
  once.

Degree is capped at 3: the DP state carries the last d-1 entries, and beyond
that the state blowup defeats the desk-scale purpose.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations as iter_permutations
from math import inf

from .cover import CoverFamily
from .systems import CapError, FormatError

DEGREE_CAP = 3
BRUTE_CAP = 8
DP_CAP = 20


@dataclass(frozen=True)
class SemiringDescriptor:
    """Opaque value domain with caller-supplied operations.

    (add, zero) must be a commutative monoid, (mul, one) a monoid, mul must
    distribute over add; idempotent asserts add(x, x) == x for all x.
    """

    name: str
    add: callable
    mul: callable
    zero: object
    one: object
    idempotent: bool


MIN_PLUS = SemiringDescriptor("min-plus", min, lambda a, b: a + b, inf, 0, True)
COUNTING = SemiringDescriptor(
    "count", lambda a, b: a + b, lambda a, b: a * b, 0, 1, False
)
MAX_TIMES = SemiringDescriptor(
    "max-times", max, lambda a, b: a * b, Fraction(0), Fraction(1), True
)


@dataclass(frozen=True)
class PermutationProblem:
    """n, degree d, local-cost oracle, and the semiring to fold in.

    local_cost(prefix_mask, tail) receives the prefix-set *including* the
    newest entry and the last min(d, j) entries in order; short prefixes pass
    fewer entries.
    """

    n: int
    degree: int
    local_cost: callable
    semiring: SemiringDescriptor

    def __post_init__(self):
        if not 0 <= self.degree <= DEGREE_CAP:
            raise ValueError(f"degree must be in [0, {DEGREE_CAP}]")

    def value(self, perm) -> object:
        """f(pi): the local-cost product along one permutation."""
        mul = self.semiring.mul
        d = self.degree
        total = self.semiring.one
        mask = 0
        for j, v in enumerate(perm, start=1):
            mask |= 1 << (v - 1)
            tail = perm[max(0, j - d):j]
            total = mul(total, self.local_cost(mask, tail))
        return total


def evaluate_brute(p: PermutationProblem):
    """Sum of f(pi) over all n! permutations, in lexicographic order."""
    if p.n > BRUTE_CAP:
        raise CapError(f"brute evaluation caps at n <= {BRUTE_CAP}")
    add = p.semiring.add
    total = p.semiring.zero
    for perm in iter_permutations(range(1, p.n + 1)):
        total = add(total, p.value(perm))
    return total


def _dp_over_masks(p: PermutationProblem, allowed=None):
    """Subset DP with states (prefix mask, last d-1 entries).

    allowed, when given, restricts prefix masks to a set system's masks; the
    per-state sums then range over exactly the supported permutations.
    """
    add, mul = p.semiring.add, p.semiring.mul
    cost = p.local_cost
    n, d = p.n, p.degree
    keep = max(0, d - 1)
    if allowed is not None and 0 not in allowed:
        return p.semiring.zero
    states = {(0, ()): p.semiring.one}
    for _ in range(n):
        nxt = {}
        for (mask, tail), val in states.items():
            for v in range(1, n + 1):
                bit = 1 << (v - 1)
                if mask & bit:
                    continue
                m2 = mask | bit
                if allowed is not None and m2 not in allowed:
                    continue
                args = tail + (v,)
                w = cost(m2, args[-d:] if d else ())
                t2 = args[-keep:] if keep else ()
                key = (m2, t2)
                contrib = mul(val, w)
                if key in nxt:
                    nxt[key] = add(nxt[key], contrib)
                else:
                    nxt[key] = contrib
        states = nxt
    total = p.semiring.zero
    for val in states.values():
        total = add(total, val)
    return total


def evaluate_dp(p: PermutationProblem):
    """DP evaluation over all permutations; equals evaluate_brute."""
    if p.n > DP_CAP:
        raise CapError(f"DP evaluation caps at n <= {DP_CAP}")
    return _dp_over_masks(p)


def evaluate_restricted(p: PermutationProblem, family: CoverFamily):
    """Sum the per-member restricted DPs of a covering family.

    Safe only for additively idempotent semirings: a permutation supported by
    several members contributes once per member, and idempotence is what
    collapses the duplicates.
    """
    if not p.semiring.idempotent:
        raise ValueError(
            "restricted evaluation over a plain cover needs an additively "
            "idempotent semiring; use a unique-mode family instead"
        )
    add = p.semiring.add
    total = p.semiring.zero
    for member in family.systems():
        if member.n != p.n:
            raise ValueError("family ground set does not match problem size")
        total = add(total, _dp_over_masks(p, member.mask_set()))
    return total


def evaluate_unique(p: PermutationProblem, family: CoverFamily):
    """Sum the per-member restricted DPs of an exact-once family; correct
    over arbitrary semirings."""
    if not family.unique_mode:
        raise ValueError("evaluate_unique needs a unique-mode family")
    add = p.semiring.add
    total = p.semiring.zero
    for member in family.systems():
        if member.n != p.n:
            raise ValueError("family ground set does not match problem size")
        total = add(total, _dp_over_masks(p, member.mask_set()))
    return total


def tsp_path_problem(inst) -> PermutationProblem:
    """TSP reduced to minimum-weight Hamiltonian path: degree 2 over
    (min, +), the first step free and every later step an edge weight."""
    d = inst.dist

    def cost(mask, tail):
        if len(tail) < 2:
            return 0
        return d[tail[0]][tail[1]]

    return PermutationProblem(inst.n, 2, cost, MIN_PLUS)


# ---------------------------------------------------------------------------
# posets and counting linear extensions


@dataclass(frozen=True)
class Poset:
    """Strict partial order on [n]; pred_masks[i] = bitmask of elements
    required to precede i+1.  Transitively closed and irreflexive."""

    n: int
    pred_masks: tuple

    @staticmethod
    def from_relations(n: int, relations) -> "Poset":
        """Build from covering relations (a, b) meaning a precedes b;
        transitive closure computed here, cycles rejected."""
        preds = [0] * (n + 1)
        for a, b in relations:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"relation ({a}, {b}) outside [1, {n}]")
            preds[b] |= 1 << (a - 1)
        changed = True
        while changed:
            changed = False
            for b in range(1, n + 1):
                rest = preds[b]
                merged = rest
                while rest:
                    bit = rest & -rest
                    merged |= preds[bit.bit_length()]
                    rest ^= bit
                if merged != preds[b]:
                    preds[b] = merged
                    changed = True
        for b in range(1, n + 1):
            if preds[b] >> (b - 1) & 1:
                raise ValueError(f"relation is cyclic at element {b}")
        return Poset(n, tuple(preds[1:]))

    def precedes(self, a: int, b: int) -> bool:
        return bool(self.pred_masks[b - 1] >> (a - 1) & 1)

    def extends(self, perm) -> bool:
        """True iff perm lists every element after all its predecessors."""
        seen = 0
        for v in perm:
            if self.pred_masks[v - 1] & ~seen:
                return False
            seen |= 1 << (v - 1)
        return True


def linear_extension_problem(poset: Poset) -> PermutationProblem:
    """Counting linear extensions as a permutation problem over (+, *).

    The local cost admits an element only once all its predecessors are
    placed (a downset check); it needs just the prefix and the newest entry,
    so the problem has degree 1.
    """
    preds = poset.pred_masks

    def cost(mask, tail):
        return 1 if not preds[tail[-1] - 1] & ~mask else 0

    return PermutationProblem(poset.n, 1, cost, COUNTING)


def count_linear_extensions(poset: Poset) -> int:
    """Number of total orders extending the poset."""
    if poset.n > DP_CAP:
        raise CapError(f"extension counting caps at n <= {DP_CAP}")
    return evaluate_dp(linear_extension_problem(poset))


def count_linear_extensions_brute(poset: Poset) -> int:
    """Oracle: test all n! orders."""
    if poset.n > BRUTE_CAP:
        raise CapError(f"brute extension counting caps at n <= {BRUTE_CAP}")
    return sum(1 for p in iter_permutations(range(1, poset.n + 1)) if poset.extends(p))


# ---------------------------------------------------------------------------
# poset file format: line 1 "n <n>", then one "a < b" line per covering
# relation; transitive closure is computed on load.


def dump_poset(poset: Poset, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"n {poset.n}\n")
        for b in range(1, poset.n + 1):
            rest = poset.pred_masks[b - 1]
            while rest:
                bit = rest & -rest
                fh.write(f"{bit.bit_length()} < {b}\n")
                rest ^= bit


def load_poset(path) -> Poset:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise FormatError(f"{path}: missing 'n' header")
    try:
        n = int(lines[0][2:])
    except ValueError as exc:
        raise FormatError(f"{path}: bad header: {exc}") from None
    relations = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3 or parts[1] != "<":
            raise FormatError(f"{path}: bad relation line {ln!r}")
        try:
            relations.append((int(parts[0]), int(parts[2])))
        except ValueError:
            raise FormatError(f"{path}: bad relation line {ln!r}") from None
    try:
        return Poset.from_relations(n, relations)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
