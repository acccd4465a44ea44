"""Slow pure-Python reference implementations used to derive expected values.

Nothing here imports the package's kernels: tables are Python ints with bit
``v`` holding ``f(v)`` and every quantity is computed by direct loops.
"""

from fractions import Fraction
from itertools import combinations, product


def bit(table: int, v: int) -> int:
    return (table >> v) & 1


def var_table(n: int, i: int) -> int:
    return sum(1 << v for v in range(1 << n) if (v >> i) & 1)


def full(n: int) -> int:
    return (1 << (1 << n)) - 1


def from_fn(n: int, fn) -> int:
    return sum(1 << v for v in range(1 << n) if fn(tuple((v >> i) & 1 for i in range(n))))


def extensions(n: int, values) -> list[int]:
    """Input indices extending a tuple of 0/1/None, star pattern ascending."""
    stars = [i for i in range(n) if values[i] is None]
    base = sum(1 << i for i in range(n) if values[i] == 1)
    out = []
    for y in range(1 << len(stars)):
        out.append(base | sum(1 << s for j, s in enumerate(stars) if (y >> j) & 1))
    return out


def project(table: int, n: int, values) -> int:
    return sum(bit(table, v) << y for y, v in enumerate(extensions(n, values)))


def constant_on(table: int, n: int, values):
    seen = {bit(table, v) for v in extensions(n, values)}
    return seen.pop() if len(seen) == 1 else None


def essential(table: int, n: int) -> set[int]:
    return {i for i in range(n) for v in range(1 << n) if bit(table, v) != bit(table, v ^ (1 << i))}


def depends_on_all(table: int, n: int, base_values, subset) -> bool:
    """Projection obtained by starring ``subset`` in ``base_values`` depends on all of it."""
    values = list(base_values)
    for i in subset:
        values[i] = None
    sub = project(table, n, values)
    return essential(sub, len(subset)) == set(range(len(subset)))


def first_hypercube_base(table: int, n: int, subset):
    others = [i for i in range(n) if i not in subset]
    for m in range(1 << len(others)):
        values = [None] * n
        for j, i in enumerate(others):
            values[i] = (m >> j) & 1
        if depends_on_all(table, n, values, subset):
            return values
    return None


def discriminatory(table: int, n: int):
    for size in range(1, n):
        for subset in combinations(range(n), size):
            rest = [i for i in range(n) if i not in subset]
            good = True
            for a in product((0, 1), repeat=size):
                values = [None] * n
                for i, b in zip(subset, a):
                    values[i] = b
                if depends_on_all(table, n, values, rest):
                    good = False
                    break
            if good:
                return set(subset)
    return None


def _binary(t: int, a: int, b: int, mask: int) -> int:
    out = 0
    for u in range(4):
        if (t >> u) & 1:
            out |= (a if u & 1 else ~a) & (b if u & 2 else ~b)
    return out & mask


def b2_read_once(n: int) -> set[int]:
    """Tables of read-once formulas over B2 in ``n`` variables (syntactic recursion)."""
    mask = full(n)
    memo: dict = {}

    def funcs(leaves: tuple) -> set[int]:
        if leaves in memo:
            return memo[leaves]
        if len(leaves) == 1:
            x = var_table(n, leaves[0])
            out = {x, mask & ~x, 0, mask}
        else:
            out = set()
            first, rest = leaves[0], leaves[1:]
            for r in range(len(rest)):
                for extra in combinations(rest, r):
                    left = (first, *extra)
                    right = tuple(v for v in rest if v not in extra)
                    for a in funcs(left):
                        for b in funcs(right):
                            for t in range(16):
                                out.add(_binary(t, a, b, mask))
        memo[leaves] = out
        return out

    result = {0, mask}
    for size in range(1, n + 1):
        for leaves in combinations(range(n), size):
            result |= funcs(leaves)
    return result


def monotone_read_once(n: int) -> set[int]:
    """Tables of read-once formulas over {AND, OR} (no constants)."""
    mask = full(n)
    memo: dict = {}

    def funcs(leaves: tuple) -> set[int]:
        if leaves in memo:
            return memo[leaves]
        if len(leaves) == 1:
            out = {var_table(n, leaves[0])}
        else:
            out = set()
            first, rest = leaves[0], leaves[1:]
            for r in range(len(rest)):
                for extra in combinations(rest, r):
                    left = (first, *extra)
                    right = tuple(v for v in rest if v not in extra)
                    for a in funcs(left):
                        for b in funcs(right):
                            out.add(a & b)
                            out.add((a | b) & mask)
        memo[leaves] = out
        return out

    result = set()
    for size in range(1, n + 1):
        for leaves in combinations(range(n), size):
            result |= funcs(leaves)
    return result


def threshold(weights, theta) -> int:
    n = len(weights)
    w = [Fraction(x) for x in weights]
    return from_fn(n, lambda x: sum(a * b for a, b in zip(w, x)) >= Fraction(theta))
