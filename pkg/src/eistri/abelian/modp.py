"""Small dense linear algebra and polynomial helpers over the prime field Z/p."""

from __future__ import annotations

import random

Poly = list[int]  # coefficients, lowest degree first, no trailing zeros


def ptrim(a: Poly) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pscale(a: Poly, c: int, p: int) -> Poly:
    return ptrim([(c * x) % p for x in a])


def pmul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return ptrim(out)


def pdivmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = ptrim(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = (a[-1] * inv) % p
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] = (a[i + d] - c * y) % p
        a = ptrim(a)
    return ptrim(q), a


def pmonic(a: Poly, p: int) -> Poly:
    return pscale(a, pow(a[-1], -1, p), p) if a else a


def companion(poly: Poly, p: int) -> list[list[int]]:
    """Companion matrix of a monic polynomial: ones on the subdiagonal,
    last column the negated low coefficients."""
    d = len(poly) - 1
    C = [[0] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = 1
    for i in range(d):
        C[i][d - 1] = (-poly[i]) % p
    return C


def matmul(A, B, p: int):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) % p for j in range(m)] for i in range(n)]


def row_reduce(M, p: int):
    """Reduced row echelon form; returns (R, pivot columns)."""
    R = [[x % p for x in row] for row in M]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [(x * inv) % p for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(x - f * y) % p for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace(M, p: int) -> list[list[int]]:
    cols = len(M[0])
    R, pivots = row_reduce(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r][f]) % p
        basis.append(v)
    return basis


def rank(M, p: int) -> int:
    return len(row_reduce(M, p)[1]) if M else 0


def det(M, p: int) -> int:
    n = len(M)
    A = [[x % p for x in row] for row in M]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return d % p


def inverse(M, p: int):
    n = len(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = row_reduce(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return [row[n:] for row in R]


def intertwiners(A, B, p: int) -> list[list[list[int]]]:
    """Basis of {P : A P = P B} over Z/p."""
    n = len(A)
    # unknown P[r][c] at index r*n + c; equation (AP - PB)[i][j] = 0
    eqs = []
    for i in range(n):
        for j in range(n):
            row = [0] * (n * n)
            for t in range(n):
                row[t * n + j] += A[i][t]
                row[i * n + t] -= B[t][j]
            eqs.append([x % p for x in row])
    return [[v[r * n:(r + 1) * n] for r in range(n)] for v in nullspace(eqs, p)]


def invertible_intertwiner(A, B, p: int, seed: int = 0, tries: int = 200):
    """Some invertible P with A P = P B, or None if none was found.

    The intertwiner space is searched by seeded random combinations; over a
    field the invertible ones form a nonempty Zariski-open set whenever A and B
    are similar, so failures after many tries mean the inputs are not similar
    only in combination with an invariant check done by the caller.
    """
    basis = intertwiners(A, B, p)
    if not basis:
        return None
    n = len(A)
    rng = random.Random(seed)
    for t in range(tries):
        if t < len(basis):
            coeffs = [int(i == t) for i in range(len(basis))]
        else:
            coeffs = [rng.randrange(p) for _ in basis]
        P = [[sum(c * Bm[i][j] for c, Bm in zip(coeffs, basis)) % p for j in range(n)] for i in range(n)]
        if det(P, p):
            return P
    if p ** len(basis) <= 4096:
        import itertools

        for coeffs in itertools.product(range(p), repeat=len(basis)):
            P = [[sum(c * Bm[i][j] for c, Bm in zip(coeffs, basis)) % p for j in range(n)] for i in range(n)]
            if det(P, p):
                return P
    return None
