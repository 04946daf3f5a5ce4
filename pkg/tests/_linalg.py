"""Independent exact linear algebra used only as test oracles.

Deliberately different algorithms from the package: determinants by plain
fraction elimination, signatures by Descartes' rule on the characteristic
polynomial (exact for symmetric matrices, whose eigenvalues are all real),
Alexander polynomials by interpolation.  Nothing here imports emfd.
"""

from fractions import Fraction


def det(matrix):
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    assert all(len(row) == n for row in m)
    sign = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def rank(matrix):
    if not matrix:
        return 0
    m = [[Fraction(x) for x in row] for row in matrix]
    rows, cols = len(m), len(m[0])
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(rows):
            if i != r and m[i][col] != 0:
                f = m[i][col] / m[r][col]
                for c in range(cols):
                    m[i][c] -= f * m[r][c]
        r += 1
    return r


def char_poly(matrix):
    """Coefficients [1, a_{n-1}, ..., a_0] of det(tI - A), Faddeev-LeVerrier."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A*M + c_{k-1} * I ; c_k = -tr(A*M')/k
        for i in range(n):
            m[i][i] += coeffs[-1]
        am = [[sum(a[i][j] * m[j][c] for j in range(n)) for c in range(n)] for i in range(n)]
        ck = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(ck)
        m = am
    return coeffs


def _variations(coeffs):
    signs = [c for c in coeffs if c != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if (x > 0) != (y > 0))


def signature_oracle(matrix):
    """Signature of a symmetric rational matrix via Descartes' rule.

    All eigenvalues are real, so the number of positive (resp. negative)
    eigenvalues equals the sign variations of p(t) (resp. p(-t)).
    """
    n = len(matrix)
    for i in range(n):
        for j in range(n):
            assert Fraction(matrix[i][j]) == Fraction(matrix[j][i]), "not symmetric"
    p = char_poly(matrix)
    neg_t = [c if k % 2 == 0 else -c for k, c in enumerate(p)]
    return _variations(p) - _variations(neg_t)


def _lagrange(points):
    """Polynomial coefficients (ascending) through exact points [(x, y)]."""
    n = len(points)
    out = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            denom *= xi - xj
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):   # multiply by (x - xj)
                nxt[k] -= c * xj
                nxt[k + 1] += c
            basis = nxt
        for k, c in enumerate(basis):
            out[k] += yi * c / denom
    return out


def alexander(V):
    """Normalized coefficients of det(V - t*V^T) from a Seifert matrix.

    Ascending coefficients with zero runs stripped from both ends and the
    constant term made positive — the Alexander polynomial up to units.
    An all-zero result is returned as [0].
    """
    n = len(V)
    if n == 0:
        return [1]
    points = []
    for t in range(n + 1):
        m = [[Fraction(V[i][j] - t * V[j][i]) for j in range(n)] for i in range(n)]
        points.append((Fraction(t), det(m)))
    coeffs = _lagrange(points)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        return [0]
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]
