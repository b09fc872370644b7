"""Slow, definition-level reference computations used by the tests.

Nothing here reuses the package's enumeration or localization code; only the
raw operation tables of rings and modules are read.
"""

import itertools


def subsets(n):
    for mask in range(1 << n):
        yield [i for i in range(n) if mask >> i & 1]


def ideals(R):
    out = []
    for S in subsets(R.order):
        s = set(S)
        if R.zero not in s:
            continue
        if all(R.add[a][b] in s for a in s for b in s) and \
                all(R.mul[r][a] in s for r in range(R.order) for a in s):
            out.append(frozenset(s))
    return out


def primes(R):
    out = []
    for I in ideals(R):
        if len(I) == R.order:
            continue
        if all(a in I or b in I for a in range(R.order) for b in range(R.order)
               if R.mul[a][b] in I):
            out.append(I)
    return out


def submodules(M):
    out = []
    R = M.ring
    for S in subsets(M.order):
        s = set(S)
        if M.zero not in s:
            continue
        if all(M.add[a][b] in s for a in s for b in s) and \
                all(M.act[r][a] in s for r in range(R.order) for a in s):
            out.append(frozenset(s))
    return out


def annihilator(M, elems):
    R = M.ring
    return frozenset(r for r in range(R.order) if all(M.act[r][m] == M.zero for m in elems))


def is_second(M, elems):
    elems = frozenset(elems)
    if elems == {M.zero}:
        return False
    for r in range(M.ring.order):
        rN = frozenset(M.act[r][m] for m in elems)
        if rN != {M.zero} and rN != elems:
            return False
    return True


def second_submodules(M):
    return [N for N in submodules(M) if is_second(M, N)]


def fraction_classes(M, S):
    """Classes of pairs ``(m, s)`` under ``(m,s) ~ (m',s')`` iff ``u(s'm - sm') = 0``."""
    S = sorted(S)
    pairs = [(m, s) for m in range(M.order) for s in S]

    def neg(x):
        return next(y for y in range(M.order) if M.add[x][y] == M.zero)

    def equiv(a, b):
        (m, s), (m2, t) = a, b
        diff = M.add[M.act[t][m]][neg(M.act[s][m2])]
        return any(M.act[u][diff] == M.zero for u in S)

    cls = {}
    reps = []
    for p in pairs:
        for i, q in enumerate(reps):
            if equiv(p, q):
                cls[p] = i
                break
        else:
            cls[p] = len(reps)
            reps.append(p)
    return cls, len(reps)


def complement(R, ideal):
    return frozenset(range(R.order)) - frozenset(ideal)


def sections(M_spectrum_points, N, opens, point_primes):
    """Literal sections over each open, with localizations by fraction pairs.

    ``opens`` are frozensets of point indices; ``point_primes[i]`` a frozenset.
    Returns ``{open: number of sections}``.
    """
    R = N.ring
    classes = {}
    for p in set(point_primes):
        classes[p] = fraction_classes(N, complement(R, p))
    out = {}
    for U in opens:
        supp = sorted({point_primes[i] for i in U}, key=sorted)
        sizes = [classes[p][1] for p in supp]
        local = []
        for Q in U:
            opts = []
            for W in opens:
                if Q in W and W <= U:
                    wp = sorted({point_primes[i] for i in W}, key=sorted)
                    pos = [supp.index(p) for p in wp]
                    dens = [t for t in range(R.order) if all(t not in p for p in wp)]
                    germs = {tuple(classes[p][0][(m, t)] for p in wp)
                             for m in range(N.order) for t in dens}
                    opts.append((pos, germs))
            local.append(opts)
        count = 0
        for beta in itertools.product(*(range(s) for s in sizes)):
            if all(any(tuple(beta[i] for i in pos) in g for pos, g in opts) for opts in local):
                count += 1
        out[frozenset(U)] = count
    return out


def homs(A, B):
    """All R-linear maps by brute force over all functions (tiny modules only)."""
    R = A.ring
    out = []
    for vals in itertools.product(range(B.order), repeat=A.order):
        if all(vals[A.add[a][b]] == B.add[vals[a]][vals[b]]
               for a in range(A.order) for b in range(A.order)) and \
                all(vals[A.act[r][a]] == B.act[r][vals[a]]
                    for r in range(R.order) for a in range(A.order)):
            out.append(vals)
    return out


def ideal_homs(R, N, ideal):
    """Number of R-linear maps from the ideal (given as ring elements) into ``N``."""
    I = sorted(ideal)
    pos = {x: i for i, x in enumerate(I)}
    count = 0
    for vals in itertools.product(range(N.order), repeat=len(I)):
        if all(vals[pos[R.add[a][b]]] == N.add[vals[pos[a]]][vals[pos[b]]] for a in I for b in I) and \
                all(vals[pos[R.mul[r][a]]] == N.act[r][vals[pos[a]]] for r in range(R.order) for a in I):
            count += 1
    return count


def torsion(N, r):
    """Elements of ``N`` killed by some power of the ring element ``r``."""
    R = N.ring
    out = set()
    for m in range(N.order):
        s = r
        for _ in range(R.order + 1):
            if N.act[s][m] == N.zero:
                out.add(m)
                break
            s = R.mul[s][r]
    return frozenset(out)
