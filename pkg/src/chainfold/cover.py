"""Families of isomorphic set systems that jointly cover all permutations.

A CoverFamily holds a base system plus relabelings sigma_j; member j is
relabel(base, sigma_j), minus an optional per-member removal list in unique
mode.  Plain mode guarantees every permutation of [n] is supported by at
least one member; unique mode by exactly one.

Unique mode rests on the *regular intersection* property: two systems F1, F2
are regularly intersecting when some witness G ⊆ F1 ∩ F2 catches every
permutation supported by both (at least one prefix in G) while touching no
permutation supported by F1 only.  The checker computes the maximal
candidate

    G* = {s in F1 ∩ F2 : s is not a prefix-set of any permutation
                          supported by F1 but not F2}

which is decision-complete: any valid witness is contained in G*, and G*
inherits both clauses, so a witness exists iff G* is one.  Uniqueness is then
manufactured by subtracting, from each member i, the union of its witnesses
against all earlier members -- exactly once per ordered pair, in index order,
making the result deterministic.

Everything here is enumeration-verified and therefore capped at small n.
"""

from dataclasses import dataclass, field
from itertools import permutations as iter_permutations
from math import ceil, factorial
from os import path as os_path

from .rng import SplitMix64
from .systems import (
    CapError,
    FormatError,
    SetSystem,
    check_permutation,
    count_chains,
    dump_system,
    load_system,
    relabel,
    supports,
)

COVER_CAP = 10  # coverage verified by enumerating all n! permutations
REGULAR_CAP = 8  # pairwise witness search enumerates permutations
SELF_INTERSECT_CAP = 6  # all n! relabelings checked


@dataclass
class CoverFamily:
    """Base system, relabelings, and optional unique-mode removals."""

    base: SetSystem
    relabelings: tuple
    unique_mode: bool = False
    removed: tuple = ()  # per member: tuple of masks dropped (unique mode)
    _systems: list = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.relabelings)

    def systems(self) -> list[SetSystem]:
        """Member systems, in member order; cached."""
        if self._systems is None:
            members = [relabel(self.base, s) for s in self.relabelings]
            if self.unique_mode and self.removed:
                members = [
                    SetSystem(g.n, g.mask_set() - set(rm))
                    for g, rm in zip(members, self.removed)
                ]
            self._systems = members
        return self._systems


def _all_perms(n: int):
    return iter_permutations(range(1, n + 1))

def supported_set(f: SetSystem) -> set:
    """All permutations supported by f, by full enumeration."""
    return {p for p in _all_perms(f.n) if supports(f, p)}


def covers_all(family: CoverFamily) -> bool:
    """Exhaustive plain-mode coverage check (n capped)."""
    n = family.base.n
    if n > COVER_CAP:
        raise CapError(f"coverage check enumerates {n}! permutations; cap {COVER_CAP}")
    members = family.systems()
    return all(any(supports(g, p) for g in members) for p in _all_perms(n))


def exactly_once(family: CoverFamily) -> bool:
    """Exhaustive unique-mode check: every permutation hits one member."""
    n = family.base.n
    if n > COVER_CAP:
        raise CapError(f"uniqueness check enumerates {n}! permutations; cap {COVER_CAP}")
    members = family.systems()
    return all(sum(1 for g in members if supports(g, p)) == 1 for p in _all_perms(n))


def prescribed_family_size(f: SetSystem) -> int:
    """The probabilistic-argument family size P(F)^n * n^2 (rounded up).

    Far above the minimum at small n; exposed for comparison only.
    """
    n = f.n
    c = count_chains(f)
    if c == 0:
        raise ValueError("base supports no permutation")
    # P^n * n^2 = (n!/C) * n^2, exact before rounding
    return ceil(factorial(n) * n * n / c)


def random_cover(base: SetSystem, seed: int, max_tries: int) -> CoverFamily:
    """Grow a family from seeded random relabelings until it covers all
    permutations.

    The first member is the identity relabeling (a deterministic anchor:
    bases that already cover everything yield a family of size 1); further
    members are uniform random permutations from the seeded generator.
    Raises if coverage is not reached within max_tries draws.
    """
    n = base.n
    if n > COVER_CAP:
        raise CapError(f"random_cover verifies coverage by enumeration; cap {COVER_CAP}")
    base_support = supported_set(base)
    if not base_support:
        raise ValueError("base supports no permutation; cover impossible")
    gen = SplitMix64(seed)
    identity = tuple(range(1, n + 1))
    relabelings = [identity]
    # support of relabel(base, sigma) = {sigma o tau : tau in base_support}
    covered = set(base_support)
    universe = factorial(n)
    tries = 0
    while len(covered) < universe:
        if tries >= max_tries:
            raise ValueError(f"no complete cover within {max_tries} draws")
        sigma = gen.permutation(n)
        tries += 1
        relabelings.append(sigma)
        for tau in base_support:
            covered.add(tuple(sigma[v - 1] for v in tau))
    return CoverFamily(base, tuple(relabelings))


def greedy_prune(family: CoverFamily) -> CoverFamily:
    """Greedy set cover over the support incidence: repeatedly keep the
    member covering the most still-uncovered permutations, ties broken by
    lowest member index."""
    n = family.base.n
    if n > COVER_CAP:
        raise CapError(f"greedy_prune enumerates permutations; cap {COVER_CAP}")
    supports_by_member = [supported_set(g) for g in family.systems()]
    uncovered = set()
    for s in supports_by_member:
        uncovered |= s
    if len(uncovered) < factorial(n):
        raise ValueError("family does not cover all permutations")
    keep = []
    while uncovered:
        best, best_gain = None, -1
        for j, s in enumerate(supports_by_member):
            gain = len(uncovered & s)
            if gain > best_gain:
                best, best_gain = j, gain
        keep.append(best)
        uncovered -= supports_by_member[best]
    keep.sort()
    return CoverFamily(family.base, tuple(family.relabelings[j] for j in keep))


def exact_min_cover(base: SetSystem) -> CoverFamily:
    """Minimum-cardinality covering family, by branch and bound over the
    (deduplicated) relabelings of the base."""
    n = base.n
    if n > 5:
        raise CapError(f"exact_min_cover branches over {n}! relabelings; cap 5")
    base_support = supported_set(base)
    if not base_support:
        raise ValueError("base supports no permutation; cover impossible")
    perms = sorted(_all_perms(n))
    index = {p: i for i, p in enumerate(perms)}
    universe = (1 << len(perms)) - 1
    # candidate supports as bitmasks over permutations, deduplicated
    seen = {}
    for sigma in sorted(_all_perms(n)):
        bits = 0
        for tau in base_support:
            bits |= 1 << index[tuple(sigma[v - 1] for v in tau)]
        if bits not in seen:
            seen[bits] = sigma
    cands = sorted(seen.items(), key=lambda kv: (-bin(kv[0]).count("1"), kv[1]))
    cand_bits = [b for b, _ in cands]
    max_gain = max(bin(b).count("1") for b in cand_bits)

    best: list[int] = []
    best_size = len(cand_bits) + 1

    def descend(uncov: int, chosen: list[int]) -> None:
        nonlocal best, best_size
        if not uncov:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best = list(chosen)
            return
        need = -(-bin(uncov).count("1") // max_gain)
        if len(chosen) + need >= best_size:
            return
        # branch on the uncovered permutation with fewest candidates
        low = uncov & -uncov
        options = [j for j, b in enumerate(cand_bits) if b & low]
        for j in options:
            chosen.append(j)
            descend(uncov & ~cand_bits[j], chosen)
            chosen.pop()

    descend(universe, [])
    relabelings = sorted(cands[j][1] for j in best)
    return CoverFamily(base, tuple(relabelings))


def regularly_intersecting(f1: SetSystem, f2: SetSystem):
    """Maximal-candidate witness for the regular-intersection property, or
    None when no witness exists.

    Returns the witness as a sorted tuple of masks; the empty tuple is a
    valid witness when no permutation is supported by both systems.
    """
    if f1.n != f2.n:
        raise ValueError("ground-set mismatch")
    if f1.n > REGULAR_CAP:
        raise CapError(f"witness search enumerates permutations; cap {REGULAR_CAP}")
    s1 = supported_set(f1)
    s2 = supported_set(f2)
    forbidden = set()
    for p in s1 - s2:
        m = 0
        forbidden.add(m)
        for v in p:
            m |= 1 << (v - 1)
            forbidden.add(m)
    candidate = (f1.mask_set() & f2.mask_set()) - forbidden
    for p in s1 & s2:
        m = 0
        if m in candidate:
            continue
        for v in p:
            m |= 1 << (v - 1)
            if m in candidate:
                break
        else:
            return None
    return tuple(sorted(candidate, key=lambda m: (bin(m).count("1"), m)))


def regularly_self_intersecting(f: SetSystem) -> bool:
    """True iff f is regularly intersecting with every relabeling of itself
    (exhaustive over distinct images; n capped)."""
    if f.n > SELF_INTERSECT_CAP:
        raise CapError(f"self-intersection checks {f.n}! relabelings; cap {SELF_INTERSECT_CAP}")
    seen = set()
    for sigma in _all_perms(f.n):
        g = relabel(f, sigma)
        key = g.mask_set()
        if key in seen:
            continue
        seen.add(key)
        if regularly_intersecting(f, g) is None:
            return False
    return True


def make_unique(family: CoverFamily) -> CoverFamily:
    """Turn a covering family over a regularly self-intersecting base into a
    unique-support family.

    Member i drops the union of its maximal witnesses against members k < i;
    the witness clauses guarantee each permutation survives in exactly the
    first member that supported it.
    """
    base = family.base
    n = base.n
    if n > SELF_INTERSECT_CAP:
        raise CapError(f"make_unique enumerates permutations; cap {SELF_INTERSECT_CAP}")
    if not regularly_self_intersecting(base):
        raise ValueError("base is not regularly self-intersecting")
    if not covers_all(family):
        raise ValueError("family does not cover all permutations")
    members = family.systems()
    removed = [()]
    for i in range(1, len(members)):
        drop: set[int] = set()
        for k in range(i):
            witness = regularly_intersecting(members[i], members[k])
            if witness is None:
                raise ValueError(f"members {i} and {k} are not regularly intersecting")
            drop.update(witness)
        removed.append(tuple(sorted(drop, key=lambda m: (bin(m).count("1"), m))))
    return CoverFamily(base, family.relabelings, unique_mode=True, removed=tuple(removed))


# ---------------------------------------------------------------------------
# file format: "base <file>", "mode plain|unique", one relabeling per line
# (space-separated images), then optional "removed <j>: <hex masks>" lines.


def dump_family(family: CoverFamily, path, base_path) -> None:
    dump_system(family.base, base_path)
    rel = os_path.relpath(base_path, os_path.dirname(os_path.abspath(path)))
    with open(path, "w", newline="\n") as fh:
        fh.write(f"base {rel}\n")
        fh.write(f"mode {'unique' if family.unique_mode else 'plain'}\n")
        for sigma in family.relabelings:
            fh.write(" ".join(map(str, sigma)) + "\n")
        if family.unique_mode:
            for j, masks in enumerate(family.removed, start=1):
                if masks:
                    fh.write(f"removed {j}: " + " ".join(format(m, "x") for m in masks) + "\n")


def load_family(path) -> CoverFamily:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("base ") or not lines[1].startswith("mode "):
        raise FormatError(f"{path}: missing 'base'/'mode' header")
    base_path = lines[0][5:]
    if not os_path.isabs(base_path):
        base_path = os_path.join(os_path.dirname(os_path.abspath(path)), base_path)
    base = load_system(base_path)
    mode = lines[1][5:]
    if mode not in ("plain", "unique"):
        raise FormatError(f"{path}: unknown mode {mode!r}")
    relabelings = []
    removed: dict[int, tuple] = {}
    for ln in lines[2:]:
        if ln.startswith("removed "):
            head, _, rest = ln.partition(":")
            try:
                j = int(head[8:])
                masks = tuple(int(t, 16) for t in rest.split())
            except ValueError:
                raise FormatError(f"{path}: bad removed line {ln!r}") from None
            if not 1 <= j <= len(relabelings):
                raise FormatError(f"{path}: removed index {j} out of range")
            removed[j] = masks
        else:
            try:
                sigma = tuple(int(t) for t in ln.split())
            except ValueError:
                raise FormatError(f"{path}: bad relabeling line {ln!r}") from None
            check_permutation(sigma, base.n)
            relabelings.append(sigma)
    if mode == "plain":
        if removed:
            raise FormatError(f"{path}: removed lines in plain mode")
        return CoverFamily(base, tuple(relabelings))
    rem = tuple(removed.get(j, ()) for j in range(1, len(relabelings) + 1))
    return CoverFamily(base, tuple(relabelings), unique_mode=True, removed=rem)
