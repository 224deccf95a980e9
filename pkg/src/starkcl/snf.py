"""Smith normal form over Z with tracked column transforms."""


def smith_normal_form(A):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns ``(diag, V, Vinv)`` where ``U A V = diag(d_1, d_2, ...)`` for some
    unimodular ``U`` (not tracked), ``d_1 | d_2 | ...`` and ``Vinv = V^-1``.
    Only square inputs are needed here.
    """
    A = [list(row) for row in A]
    n = len(A)
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [row[:] for row in V]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        if q == 0:
            return
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]
        Vi[src] = [x + q * y for x, y in zip(Vi[src], Vi[dst])]

    for t in range(n):
        while True:
            piv = None
            for i in range(t, n):
                for j in range(t, n):
                    if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            i, j = piv
            A[t], A[i] = A[i], A[t]
            if j != t:
                swap_cols(t, j)
            a = A[t][t]
            for i in range(t + 1, n):
                q = A[i][t] // a
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            for j in range(t + 1, n):
                add_col(j, t, A[t][j] // a)
            if any(A[i][t] for i in range(t + 1, n)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, n)
                        if any(A[i][j] % a for j in range(t + 1, n))), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
    return [A[i][i] for i in range(n)], V, Vi
