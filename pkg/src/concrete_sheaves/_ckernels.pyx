# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; behaviour must match _pykernels exactly."""

from libc.stdlib cimport malloc, free


def solve_functional(sizes, constraints, long limit=-1):
    cdef Py_ssize_t n = len(sizes)
    cdef Py_ssize_t m = len(constraints)
    cdef Py_ssize_t i, j, k, v, off, total_dom = 0, total_table = 0
    cdef int a, b, x, t, ok
    if n == 0:
        return [()]
    for s in sizes:
        if s == 0:
            return []
    for con in constraints:
        total_table += len(con[2])

    cdef int *size = <int *> malloc(n * sizeof(int))
    cdef int *dom_off = <int *> malloc((n + 1) * sizeof(int))
    cdef int *tables = <int *> malloc((total_table + 1) * sizeof(int))
    cdef int *f_count = <int *> malloc(n * sizeof(int))
    cdef int *c_count = <int *> malloc(n * sizeof(int))
    cdef int *f_start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *c_start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *f_var = <int *> malloc((m + 1) * sizeof(int))
    cdef int *f_tab = <int *> malloc((m + 1) * sizeof(int))
    cdef int *c_var = <int *> malloc((m + 1) * sizeof(int))
    cdef int *c_tab = <int *> malloc((m + 1) * sizeof(int))
    cdef char *allowed = NULL
    cdef int *value = <int *> malloc(n * sizeof(int))
    cdef int *pos = <int *> malloc(n * sizeof(int))
    cdef int *fixed = <int *> malloc(n * sizeof(int))

    solutions = []
    try:
        for i in range(n):
            size[i] = sizes[i]
            dom_off[i] = total_dom
            total_dom += size[i]
            f_count[i] = 0
            c_count[i] = 0
        dom_off[n] = total_dom
        allowed = <char *> malloc(total_dom + 1)
        for i in range(total_dom):
            allowed[i] = 1

        table_offsets = []
        off = 0
        for con in constraints:
            a = con[0]
            b = con[1]
            table_offsets.append(off)
            j = off
            for item in con[2]:
                tables[off] = item
                off += 1
            if a == b:
                for x in range(size[a]):
                    if tables[j + x] != x:
                        allowed[dom_off[a] + x] = 0
            elif a < b:
                f_count[b] += 1
            else:
                c_count[a] += 1

        f_start[0] = 0
        c_start[0] = 0
        for i in range(n):
            f_start[i + 1] = f_start[i] + f_count[i]
            c_start[i + 1] = c_start[i] + c_count[i]
            f_count[i] = 0
            c_count[i] = 0
        k = 0
        for con in constraints:
            a = con[0]
            b = con[1]
            off = table_offsets[k]
            k += 1
            if a < b:
                j = f_start[b] + f_count[b]
                f_count[b] += 1
                f_var[j] = a
                f_tab[j] = off
            elif a > b:
                j = c_start[a] + c_count[a]
                c_count[a] += 1
                c_var[j] = b
                c_tab[j] = off

        # pos[v]: next candidate index; fixed[v]: forced value, -2 if free, -1 if none.
        v = 0
        pos[0] = 0
        fixed[0] = -2
        while v >= 0:
            if pos[v] == 0 and f_start[v + 1] > f_start[v]:
                j = f_start[v]
                x = tables[f_tab[j] + value[f_var[j]]]
                if x < 0 or not allowed[dom_off[v] + x]:
                    x = -1
                else:
                    for j in range(f_start[v] + 1, f_start[v + 1]):
                        if tables[f_tab[j] + value[f_var[j]]] != x:
                            x = -1
                            break
                fixed[v] = x
            elif pos[v] == 0:
                fixed[v] = -2

            ok = 0
            if fixed[v] != -2:
                if pos[v] == 0 and fixed[v] >= 0:
                    x = fixed[v]
                    pos[v] = 1
                    ok = 1
                    for j in range(c_start[v], c_start[v + 1]):
                        if tables[c_tab[j] + x] != value[c_var[j]]:
                            ok = 0
                            break
                else:
                    pos[v] = 1
            else:
                while pos[v] < size[v]:
                    x = pos[v]
                    pos[v] += 1
                    if not allowed[dom_off[v] + x]:
                        continue
                    ok = 1
                    for j in range(c_start[v], c_start[v + 1]):
                        if tables[c_tab[j] + x] != value[c_var[j]]:
                            ok = 0
                            break
                    if ok:
                        break
            if not ok:
                pos[v] = 0
                v -= 1
                continue
            value[v] = x
            if v == n - 1:
                solutions.append(tuple([value[i] for i in range(n)]))
                if 0 <= limit <= len(solutions):
                    return solutions
                continue
            v += 1
            pos[v] = 0
        return solutions
    finally:
        free(size)
        free(dom_off)
        free(tables)
        free(f_count)
        free(c_count)
        free(f_start)
        free(c_start)
        free(f_var)
        free(f_tab)
        free(c_var)
        free(c_tab)
        if allowed != NULL:
            free(allowed)
        free(value)
        free(pos)
        free(fixed)


def partition(Py_ssize_t n, pairs):
    cdef int *parent = <int *> malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t i
    cdef int a, b, ra, rb, nxt
    try:
        for i in range(n):
            parent[i] = i
        for pair in pairs:
            a = pair[0]
            b = pair[1]
            ra = a
            while parent[ra] != ra:
                ra = parent[ra]
            while parent[a] != ra:
                nxt = parent[a]
                parent[a] = ra
                a = nxt
            rb = b
            while parent[rb] != rb:
                rb = parent[rb]
            while parent[b] != rb:
                nxt = parent[b]
                parent[b] = rb
                b = nxt
            if ra < rb:
                parent[rb] = ra
            elif rb < ra:
                parent[ra] = rb
        out = []
        for i in range(n):
            a = i
            while parent[a] != a:
                a = parent[a]
            out.append(a)
        return out
    finally:
        free(parent)
