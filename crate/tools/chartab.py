"""Numerical Burnside oracle for small complex reflection groups.

Builds the group from its generators, splits it into classes, computes the
character table from class-multiplication coefficients and rounds every value
to Z[w] with w = exp(2 pi i / 3).  Output is the text format read by
`spets::tabledata::chartab`.
"""
import itertools
import sys

import numpy as np

W = np.exp(2j * np.pi / 3)

GROUPS = {
    # name: (generator names, generator matrices)
    "G4": ("st", [np.array([[0, W * W], [-W * W, -W * W]]), np.array([[W, 0], [-W, 1]])]),
    "G312": ("ts", [np.diag([W, 1]), np.array([[0, 1], [1, 0]], dtype=complex)]),
}


def key(m):
    r = np.round(m, 6) + 0.0
    return tuple(complex(z) for z in r.flatten())


def elements(gens):
    one = np.eye(gens[0].shape[0], dtype=complex)
    seen = {key(one): ("", one)}
    frontier = [("", one)]
    while frontier:
        nxt = []
        for word, m in frontier:
            for i, g in enumerate(gens):
                p = m @ g
                k = key(p)
                if k not in seen:
                    seen[k] = (word + str(i), p)
                    nxt.append(seen[k])
        frontier = nxt
    return list(seen.values())


def to_zw(z):
    b = z.imag / (np.sqrt(3) / 2)
    a = z.real + b / 2
    ra, rb = round(a), round(b)
    assert abs(a - ra) < 1e-6 and abs(b - rb) < 1e-6, z
    return ra, rb


def fmt_zw(a, b):
    # a + b w with w = E(3,1); the canonical basis of Q(w) is {w, w^2}, 1 = -w - w^2
    if b == 0:
        return str(a)
    c1, c2 = b - a, -a
    terms = []
    for c, k in ((c1, 1), (c2, 2)):
        if c:
            s = f"{abs(c)}*E(3,{k})"
            terms.append(("-" if c < 0 else "+") + s)
    out = "".join(terms)
    return out[1:] if out.startswith("+") else out


def table(gens):
    els = elements(gens)
    n = len(els)
    idx = {key(m): i for i, (_, m) in enumerate(els)}
    inv = [idx[key(np.linalg.inv(m))] for _, m in els]
    cls = [-1] * n
    classes = []
    for i in range(n):
        if cls[i] >= 0:
            continue
        c = set()
        for _, g in els:
            c.add(idx[key(g @ els[i][1] @ np.linalg.inv(g))])
        for j in c:
            cls[j] = len(classes)
        classes.append(sorted(c))
    classes.sort(key=lambda c: (len(els[c[0]][0]), els[c[0]][0]))
    for ci, c in enumerate(classes):
        for j in c:
            cls[j] = ci
    r = len(classes)
    mult = np.zeros((r, r, r))
    for j in range(r):
        for k in range(r):
            for l in range(r):
                g = els[classes[l][0]][1]
                cnt = 0
                for x in classes[j]:
                    y = idx.get(key(np.linalg.inv(els[x][1]) @ g))
                    if cls[y] == k:
                        cnt += 1
                mult[j, k, l] = cnt
    rng = np.random.default_rng(7)
    coeff = rng.normal(size=r)
    a = sum(coeff[j] * mult[j] for j in range(r))
    # rows omega_chi(C_k): omega(C_j) omega(C_k) = sum_l a_jkl omega(C_l)
    vals, vecs = np.linalg.eig(a)
    rows = []
    for v in vecs.T:
        v = v / v[0]
        size = np.array([len(c) for c in classes])
        deg2 = n / np.sum(np.abs(v) ** 2 / size)
        d = np.sqrt(deg2)
        chi = v * d / size
        rows.append([to_zw(z) for z in chi])
    return els, classes, rows


def b_value(els, chi, classes):
    # lowest n with sum_w chi(w) h_n(conj w) != 0
    cls_of = {}
    for ci, c in enumerate(classes):
        for j in c:
            cls_of[j] = ci
    vals = [complex(a + b * W) for a, b in chi]
    for n in range(0, 40):
        tot = 0
        for j, (_, m) in enumerate(els):
            ev = np.conj(np.linalg.eigvals(m))
            h = sum(np.prod([ev[i] for i in comb])
                    for comb in itertools.combinations_with_replacement(range(len(ev)), n))
            tot += vals[cls_of[j]] * h
        if abs(tot) > 1e-6:
            return n
    raise ValueError


def name_of(group, els, classes, chi):
    if group == "G4":
        return f"phi{chi[0][0]},{b_value(els, chi, classes)}"
    # wreath labels: position a of the tripartition is the character t -> w^a
    t = complex(chi[1][0] + chi[1][1] * W)
    s = chi[2][0]
    parts = ["", "", ""]
    if chi[0][0] == 1:
        a = [k for k in range(3) if abs(W ** k - t) < 1e-6][0]
        parts[a] = "2" if s == 1 else "11"
    else:
        for a, b in ((0, 1), (0, 2), (1, 2)):
            if abs(W ** a + W ** b - t) < 1e-6:
                parts[a] = parts[b] = "1"
    return ".".join(parts)


def main(name):
    letters, gens = GROUPS[name]
    els, classes, rows = table(gens)
    print(f"group {name}")
    print("gens " + " ".join(letters))
    words = []
    for c in classes:
        w = els[c[0]][0]
        words.append("".join(letters[int(ch)] for ch in w) or "1")
    print("classes " + " ".join(words))
    print("sizes " + " ".join(str(len(c)) for c in classes))
    for row in sorted(rows, key=lambda r: (r[0], [(-x[0], -x[1]) for x in r])):
        print("char " + name_of(name, els, classes, row) + " " + " ".join(fmt_zw(*v) for v in row))


if __name__ == "__main__":
    main(sys.argv[1])
