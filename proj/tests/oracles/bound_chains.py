"""Independent exact-rational oracle for the bound chains.

Iterates the diagonal reduction step one application at a time (no closed
forms) and prints the values frozen into tests/test_bounds.cpp.
"""
from math import comb

PHI = {  # p: (phi2, phi3, phi4, phi5)
    2: (4, 3, 15, 5), 3: (4, 4, 8, 5), 5: (4, 3, 16, 7),
    7: (4, 6, 8, 5), 11: (4, 3, 8, 15), 13: (4, 6, 12, 5),
}


def step(prof, phi):
    d = len(prof)
    r = {d - i: prof[i] for i in range(d)}
    new = {j: sum(r[i] * comb(phi + i - j - 1, i - j) for i in range(j, d + 1))
           for j in range(1, d)}
    new[d] = r[d] - 1
    return tuple(new[d - i] for i in range(d))


def u(r, p):
    cands = []
    table = {0: 0, 1: 4, 2: 8, 3: 16, 4: 24, 5: 40, 6: 56}
    if r in table:
        cands.append(table[r])
    if r >= 8 and r % 2 == 0:
        cands.append(2 * r * r - 16)
    if r >= 7 and r % 2 == 1:
        cands.append(2 * r * r - 14)
    if p >= 11:
        t5 = {3: 12, 4: 24, 5: 32, 6: 56}
        if r in t5:
            cands.append(t5[r])
        if r >= 7 and r % 3 == 1:
            cands.append(2 * r * r - 2 * r - 12)
        if r >= 8 and r % 3 == 2:
            cands.append(2 * r * r - 2 * r - 8)
        if r >= 9 and r % 3 == 0:
            cands.append(2 * r * r - 2 * r - 8)
    return min(cands)


def chain(prof, p, cost_steps):
    """Reduce a profile down to quadratics by single steps."""
    cost = 0
    prof = tuple(prof)
    while len(prof) > 2:
        d = len(prof)
        phi = PHI[p][d - 2]
        while prof[0] > 0:
            prof = step(prof, phi)
            if cost_steps:
                cost += phi
        prof = prof[1:]
    return cost + u(prof[0], p) + prof[1]


def newresult_chain(prof, p):
    a, b, c = prof
    while a > 0:
        a, b, c = a - 1, b + 6 * (a - 1), c + 6 * b + 9 * a
    return u(b, p) + c


for p in PHI:
    print("wooley", p, chain((1, 0, 0, 0, 0), p, True))
    print("hb_quintic", p, chain((1, 0, 0, 0, 0), p, False))
print("alt5", chain((25, 175, 350), 5, False))
print("hb(10,20,25;7)", chain((10, 20, 25), 7, False))
print("newresult(15,20,25;2)", newresult_chain((15, 20, 25), 2))
for p in (2, 3, 5, 7, 11, 13):
    print("u(1842300)", p, u(1842300, p))
