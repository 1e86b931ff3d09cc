"""Pure-Python versions of the enumeration kernels.

These are the reference implementations; ``_ckernels.pyx`` mirrors them
line for line and must produce identical output in identical order.
"""


def solve_functional(sizes, constraints, limit=-1):
    """Enumerate assignments satisfying functional binary constraints.

    ``sizes[v]`` is the domain size of variable ``v``.  Each constraint
    ``(a, b, table)`` requires ``value[b] == table[value[a]]``; a table
    entry of ``-1`` forbids that value of ``a`` outright.  Variables are
    assigned in index order and values in ascending order, so solutions
    come out in lexicographic order.  ``limit < 0`` means no limit.
    """
    n = len(sizes)
    forced = [[] for _ in range(n)]
    checks = [[] for _ in range(n)]
    allowed = [[True] * s for s in sizes]
    for a, b, table in constraints:
        if a == b:
            for x in range(sizes[a]):
                if table[x] != x:
                    allowed[a][x] = False
        elif a < b:
            forced[b].append((a, table))
        else:
            checks[a].append((b, table))

    solutions = []
    if n == 0:
        return [()]
    if any(s == 0 for s in sizes):
        return solutions

    value = [0] * n
    cand = [None] * n
    pos = [0] * n

    def candidates(v):
        if forced[v]:
            a, table = forced[v][0]
            x = table[value[a]]
            if x < 0 or not allowed[v][x]:
                return ()
            for a2, t2 in forced[v][1:]:
                if t2[value[a2]] != x:
                    return ()
            return (x,)
        return [x for x in range(sizes[v]) if allowed[v][x]]

    def consistent(v, x):
        for b, table in checks[v]:
            if table[x] != value[b]:
                return False
        return True

    v = 0
    cand[0] = candidates(0)
    pos[0] = 0
    while v >= 0:
        cs = cand[v]
        i = pos[v]
        placed = False
        while i < len(cs):
            x = cs[i]
            i += 1
            if consistent(v, x):
                value[v] = x
                placed = True
                break
        pos[v] = i
        if not placed:
            v -= 1
            continue
        if v == n - 1:
            solutions.append(tuple(value))
            if 0 <= limit <= len(solutions):
                return solutions
            continue
        v += 1
        cand[v] = candidates(v)
        pos[v] = 0
    return solutions


def partition(n, pairs):
    """Union-find over ``range(n)``; returns the least member of each element's class."""
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return [find(x) for x in range(n)]
