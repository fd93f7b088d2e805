"""Set systems over a ground set [n] and their chain/permutation structure.

A set s ⊆ [n] is an n-bit mask (bit i-1 = element i).  A SetSystem is a
duplicate-free collection of such masks, stored per cardinality so that the
maximal-chain count is a single upward sweep:

    paths(empty) = 1,  paths(s) = sum of paths(s minus e) over e with s minus e in F

and C(F) = paths([n]).  A permutation pi of [n] is *supported* by F when all
of its prefix-sets {pi(1)..pi(i)} are in F; supported permutations are in
bijection with maximal chains.  The normalized quantities

    S(F) = |F|^(1/n)        (space base of the restricted DP)
    P(F) = (n!/C(F))^(1/n)  (inverse chain density; guessing overhead)

drive everything downstream: a system with small S and P yields a TSP
algorithm with space S^(n+o(n)) and time (S*P)^(n+o(n)).

Chain counts are exact arbitrary-precision integers (n! overflows 64 bits at
n=21); floats enter only in the final metric normalization.  Permutations are
tuples of the values 1..n.  All operations are pure; values are immutable
after construction and safe to share across threads.
"""

import math
from dataclasses import dataclass
from itertools import permutations as iter_permutations

POWERSET_CAP = 28  # full-powerset enumeration refuses larger ground sets
GROUND_CAP = 63  # sparse systems stay within one machine word
ORACLE_CAP = 10  # n! enumeration oracles


class CapError(ValueError):
    """A resource cap (ground-set size, enumeration limit) was exceeded."""


class EmptyGroundSetError(ValueError):
    """Operation requires a nonempty ground set (the normalizations use 1/n)."""


class FormatError(ValueError):
    """A serialized artifact violates its file format or invariants."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(elems) -> int:
    """Bitmask of an iterable of 1-based elements."""
    m = 0
    for e in elems:
        m |= 1 << (e - 1)
    return m


def elems_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based elements of a bitmask."""
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def check_permutation(perm, n: int) -> None:
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of [{n}]: {perm!r}")


class SetSystem:
    """Immutable collection of subsets of [n], grouped by cardinality."""

    __slots__ = ("n", "levels", "_mask_set", "_succ", "_elems")

    def __init__(self, n: int, masks):
        if n < 0:
            raise ValueError("ground-set size must be nonnegative")
        if n > GROUND_CAP:
            raise CapError(f"ground set {n} exceeds cap {GROUND_CAP}")
        top = 1 << n
        levels: list[list[int]] = [[] for _ in range(n + 1)]
        seen = set()
        for m in masks:
            if not 0 <= m < top:
                raise ValueError(f"mask {m:#x} outside ground set [{n}]")
            if m not in seen:
                seen.add(m)
                levels[popcount(m)].append(m)
        self.n = n
        self.levels = tuple(tuple(sorted(lv)) for lv in levels)
        self._mask_set = frozenset(seen)
        self._succ = None
        self._elems = None

    @property
    def masks(self) -> tuple[int, ...]:
        """All masks, ascending by (popcount, value)."""
        return tuple(m for lv in self.levels for m in lv)

    def __len__(self) -> int:
        return len(self._mask_set)

    def __contains__(self, mask: int) -> bool:
        return mask in self._mask_set

    def mask_set(self) -> frozenset:
        return self._mask_set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SetSystem)
            and self.n == other.n
            and self._mask_set == other._mask_set
        )

    def __hash__(self) -> int:
        return hash((self.n, self._mask_set))

    def __repr__(self) -> str:
        return f"SetSystem(n={self.n}, size={len(self)})"

    def successors(self) -> dict:
        """mask -> tuple of (added element, next mask in F); cached."""
        if self._succ is None:
            succ = {m: [] for m in self._mask_set}
            for lv in self.levels[1:]:
                for m in lv:
                    rest = m
                    while rest:
                        b = rest & -rest
                        prev = m ^ b
                        if prev in self._mask_set:
                            succ[prev].append((b.bit_length(), m))
                        rest ^= b
            self._succ = {m: tuple(v) for m, v in succ.items()}
        return self._succ

    def elements(self) -> dict:
        """mask -> tuple of its 1-based elements; cached."""
        if self._elems is None:
            self._elems = {m: elems_of(m) for m in self._mask_set}
        return self._elems


@dataclass(frozen=True)
class Metrics:
    """Exact counts plus the normalized size/density pair."""

    sets: int
    chains: int
    size_s: float
    density_p: float
    product_st: float  # S^2 * P, the space-time product of the induced solver


def prefix_chain(perm) -> tuple[int, ...]:
    """The n+1 prefix-sets of a permutation, from empty set to full set."""
    n = len(perm)
    check_permutation(perm, n)
    out = [0]
    m = 0
    for v in perm:
        m |= 1 << (v - 1)
        out.append(m)
    return tuple(out)


def supports(f: SetSystem, perm) -> bool:
    """True iff every prefix-set of perm is in f."""
    if len(perm) != f.n:
        raise ValueError(f"permutation of [{len(perm)}] vs ground set [{f.n}]")
    ms = f.mask_set()
    if 0 not in ms:
        return False
    m = 0
    for v in perm:
        m |= 1 << (v - 1)
        if m not in ms:
            return False
    return True


def count_chains(f: SetSystem) -> int:
    """Exact number of maximal chains ∅ = S_0 ⊊ ... ⊊ S_n = [n] within f.

    Level-by-level path-count DP; each set's count is the sum over its
    single-element-removed predecessors.
    """
    if not f.levels[0]:
        return 0
    paths = {0: 1}
    for lv in f.levels[1:]:
        nxt = {}
        for m in lv:
            total = 0
            rest = m
            while rest:
                b = rest & -rest
                p = paths.get(m ^ b)
                if p:
                    total += p
                rest ^= b
            if total:
                nxt[m] = total
        paths = nxt
        if not paths:
            return 0
    return paths.get((1 << f.n) - 1, 0)


def metrics(f: SetSystem) -> Metrics:
    """Exact |F| and C(F); normalized S(F), P(F) and the product S^2*P."""
    if f.n == 0:
        raise EmptyGroundSetError("metrics need a ground set of size >= 1")
    size = len(f)
    chains = count_chains(f)
    s = math.exp(math.log(size) / f.n)
    if chains == 0:
        p = math.inf
    else:
        p = math.exp((math.log(math.factorial(f.n)) - math.log(chains)) / f.n)
    return Metrics(size, chains, s, p, s * s * p)


def supported_permutation_count(f: SetSystem) -> int:
    """Count supported permutations by brute enumeration of all n!.

    Independent oracle for count_chains; refuses n beyond the enumeration cap.
    """
    if f.n > ORACLE_CAP:
        raise CapError(f"n={f.n} too large for the n! enumeration oracle")
    ms = f.mask_set()
    if 0 not in ms:
        return 0
    count = 0
    for perm in iter_permutations(range(1, f.n + 1)):
        m = 0
        ok = True
        for v in perm:
            m |= 1 << (v - 1)
            if m not in ms:
                ok = False
                break
        if ok:
            count += 1
    return count


def union_product(f1: SetSystem, f2: SetSystem) -> SetSystem:
    """All unions s1 ∪ (s2 shifted past [n1]) over pairs from f1 x f2.

    Sizes multiply; chain counts multiply times the interleaving binomial
    C(n1+n2, n1).
    """
    n = f1.n + f2.n
    if n > GROUND_CAP:
        raise CapError(f"combined ground set {n} exceeds cap {GROUND_CAP}")
    shift = f1.n
    m1 = f1.masks
    return SetSystem(n, (a | (b << shift) for b in f2.masks for a in m1))


def induced_split(perm, sizes) -> tuple[tuple[int, ...], ...]:
    """Split perm into the orders it induces on consecutive ground-set blocks.

    Block i covers sizes[i] consecutive elements; each part keeps the relative
    order of its block's elements, renumbered from 1.
    """
    n = len(perm)
    check_permutation(perm, n)
    sizes = tuple(sizes)
    if any(s <= 0 for s in sizes) or sum(sizes) != n:
        raise ValueError(f"block sizes {sizes} do not partition [{n}]")
    parts = []
    lo = 0
    for s in sizes:
        hi = lo + s
        parts.append(tuple(v - lo for v in perm if lo < v <= hi))
        lo = hi
    return tuple(parts)


def relabel(f: SetSystem, sigma) -> SetSystem:
    """Map every set elementwise through the permutation sigma."""
    check_permutation(sigma, f.n)
    bits = [1 << (v - 1) for v in sigma]  # element i -> sigma(i)
    out = []
    for m in f.masks:
        nm = 0
        rest = m
        while rest:
            b = rest & -rest
            nm |= bits[b.bit_length() - 1]
            rest ^= b
        out.append(nm)
    return SetSystem(f.n, out)


def closure_from_permutations(n: int, perms) -> SetSystem:
    """Minimal system supporting every given permutation: the union of all
    their prefix-sets.  Duplicate permutations are deduplicated silently."""
    masks = set()
    for p in perms:
        check_permutation(p, n)
        m = 0
        masks.add(m)
        for v in p:
            m |= 1 << (v - 1)
            masks.add(m)
    return SetSystem(n, masks)


def relabeling_orbit(f: SetSystem):
    """Distinct images of f under all n! relabelings, with multiplicity.

    Returns (images, support_identity) where images maps each distinct image
    (as a frozenset of masks) to its multiplicity N_i, and support_identity is
    the total multiplicity of images supporting the identity permutation.
    Exhaustive; capped by the n! oracle limit.
    """
    if f.n > ORACLE_CAP:
        raise CapError(f"n={f.n} too large for relabeling enumeration")
    identity_chain = prefix_chain(tuple(range(1, f.n + 1)))
    images: dict[frozenset, int] = {}
    supporting = 0
    for sigma in iter_permutations(range(1, f.n + 1)):
        g = relabel(f, sigma)
        key = g.mask_set()
        images[key] = images.get(key, 0) + 1
        if all(m in key for m in identity_chain):
            supporting += 1
    return images, supporting


# ---------------------------------------------------------------------------
# file format: line 1 "n <n>", line 2 "count <|F|>", then one lowercase hex
# mask per line, ascending by (popcount, value).


def dump_system(f: SetSystem, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"n {f.n}\n")
        fh.write(f"count {len(f)}\n")
        for m in f.masks:
            fh.write(format(m, "x") + "\n")


def load_system(path) -> SetSystem:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("n ") or not lines[1].startswith("count "):
        raise FormatError(f"{path}: missing 'n'/'count' header")
    try:
        n = int(lines[0][2:])
        count = int(lines[1][6:])
    except ValueError as exc:
        raise FormatError(f"{path}: bad header: {exc}") from None
    if n < 0:
        raise FormatError(f"{path}: negative ground-set size")
    if n > GROUND_CAP:
        raise CapError(f"{path}: ground set {n} exceeds cap {GROUND_CAP}")
    body = lines[2:]
    if len(body) != count:
        raise FormatError(f"{path}: count says {count}, found {len(body)} masks")
    masks = []
    prev_key = None
    for ln in body:
        try:
            m = int(ln, 16)
        except ValueError:
            raise FormatError(f"{path}: bad hex mask {ln!r}") from None
        if m < 0 or m >= 1 << n:
            raise FormatError(f"{path}: mask {ln} outside ground set [{n}]")
        key = (popcount(m), m)
        if prev_key is not None and key <= prev_key:
            raise FormatError(f"{path}: masks not ascending by (popcount, value)")
        prev_key = key
        masks.append(m)
    return SetSystem(n, masks)
