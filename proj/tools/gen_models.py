#!/usr/bin/env python3
"""Generate finite-group character-table model files (data/models/*.tbl).

Each model ships: conjugacy classes (sizes, power maps up to 6), irreducible
characters (computed as traces of explicit matrix representations, so the
tables are independent of the C++ rewrite rules they validate), and subgroup
blocks with class fusion, a Galois (outer conjugation) action, and the
subgroup's own characters.

Groups: D8 and D12 (dihedral atoms with their cyclic index-2 subgroups),
the binary tetrahedral group 2T = SL(2,3), the binary octahedral group 2O
(with 2T as its index-2 subgroup), and elementary abelian 2-groups for the
positivity checks.
"""

import cmath
import math
import os
import sys

TOL = 1e-9


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def mat_key(m):
    return tuple(
        (round(z.real, 7) + 0.0, round(z.imag, 7) + 0.0) for row in m for z in row
    )


def close(gens):
    seen = {}
    frontier = list(gens)
    for g in gens:
        seen[mat_key(g)] = g
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = mat_mul(a, b)
                k = mat_key(c)
                if k not in seen:
                    seen[k] = c
                    nxt.append(c)
        frontier = nxt
    return list(seen.values())


def inv(m):
    # works for the unitary matrices used here: inverse = conjugate transpose
    n = len(m)
    return tuple(tuple(m[j][i].conjugate() for j in range(n)) for i in range(n))


def conj_classes(elems):
    index = {mat_key(g): i for i, g in enumerate(elems)}
    assigned = [None] * len(elems)
    classes = []
    for i, g in enumerate(elems):
        if assigned[i] is not None:
            continue
        cls = set()
        for h in elems:
            x = mat_mul(mat_mul(h, g), inv(h))
            cls.add(index[mat_key(x)])
        cid = len(classes)
        for j in cls:
            assigned[j] = cid
        classes.append(sorted(cls))
    return classes, assigned


def power_map(elems, assigned, classes, k):
    index = {mat_key(g): i for i, g in enumerate(elems)}
    out = []
    for cls in classes:
        g = elems[cls[0]]
        p = g
        for _ in range(k - 1):
            p = mat_mul(p, g)
        out.append(assigned[index[mat_key(p)]])
    return out


def trace(m):
    return sum(m[i][i] for i in range(len(m)))


def char_of_rep(rep, elems, classes):
    return [trace(rep(elems[c[0]])) for c in classes]


def inner(sizes, order, a, b):
    return sum(s * x * y.conjugate() for s, x, y in zip(sizes, a, b)) / order


def check_irreducible(name, sizes, order, chi):
    ip = inner(sizes, order, chi, chi)
    assert abs(ip - 1) < TOL, f"{name}: <chi,chi> = {ip}"


def fmt(z):
    return f"{z.real:.12g},{z.imag:.12g}"


class Model:
    def __init__(self, name, elems):
        self.name = name
        self.elems = elems
        self.classes, self.assigned = conj_classes(elems)
        # identity class first so values[0] is the dimension
        def is_identity(cls):
            g = elems[cls[0]]
            n = len(g)
            return all(abs(g[r][c] - (1 if r == c else 0)) < TOL
                       for r in range(n) for c in range(n))
        self.classes.sort(key=lambda cls: (not is_identity(cls), cls[0]))
        elem_to_class = {}
        for new_id, cls in enumerate(self.classes):
            for j in cls:
                elem_to_class[j] = new_id
        self.assigned = [elem_to_class[i] for i in range(len(elems))]
        self.sizes = [len(c) for c in self.classes]
        self.order = len(elems)
        self.chars = []  # (name, values)
        self.subgroups = []

    def add_char(self, name, values):
        check_irreducible(f"{self.name}/{name}", self.sizes, self.order, values)
        for _, v in self.chars:
            ip = inner(self.sizes, self.order, values, v)
            assert abs(ip) < TOL, f"{self.name}/{name} not orthogonal"
        self.chars.append((name, values))

    def emit(self):
        lines = [f"model {self.name}", f"order {self.order}",
                 f"nclasses {len(self.classes)}",
                 "sizes " + " ".join(map(str, self.sizes))]
        for k in range(2, 7):
            pm = power_map(self.elems, self.assigned, self.classes, k)
            lines.append(f"pow {k} " + " ".join(map(str, pm)))
        for name, values in self.chars:
            dim = int(round(values[0].real))
            lines.append(f"char {name} {dim} " + " ".join(fmt(v) for v in values))
        for sub in self.subgroups:
            lines.extend(sub)
        lines.append("end")
        return "\n".join(lines) + "\n"

    def add_subgroup(self, name, sub_elems, theta_elem, sub_chars):
        """theta_elem: parent element whose conjugation is the Galois action."""
        sm = Model(name, sub_elems)
        pidx = {mat_key(g): i for i, g in enumerate(self.elems)}
        sidx = {mat_key(g): i for i, g in enumerate(sub_elems)}
        fusion = [self.assigned[pidx[mat_key(sub_elems[c[0]])]] for c in sm.classes]
        # Galois action on subgroup classes: h -> theta h theta^-1
        theta = []
        for c in sm.classes:
            h = sub_elems[c[0]]
            x = mat_mul(mat_mul(theta_elem, h), inv(theta_elem))
            theta.append(sm.assigned[sidx[mat_key(x)]])
        for cname, values in sub_chars:
            sm.add_char(cname, values)
        block = [f"subgroup {name} {sm.order} {len(sm.classes)}",
                 "sizes " + " ".join(map(str, sm.sizes)),
                 "fusion " + " ".join(map(str, fusion)),
                 "theta " + " ".join(map(str, theta))]
        for k in range(2, 7):
            pm = power_map(sub_elems, sm.assigned, sm.classes, k)
            block.append(f"pow {k} " + " ".join(map(str, pm)))
        for cname, values in sm.chars:
            dim = int(round(values[0].real))
            block.append(f"char {cname} {dim} " + " ".join(fmt(v) for v in values))
        block.append("endsub")
        self.subgroups.append(block)
        # Frobenius reciprocity spot check for every (sub char, parent char)
        for cname, sv in sm.chars:
            ind = induce(self, sm, fusion, sv)
            for pname, pv in self.chars:
                lhs = inner(self.sizes, self.order, ind, pv)
                res = [pv[fusion[i]] for i in range(len(sm.classes))]
                rhs = inner(sm.sizes, sm.order, sv, res)
                assert abs(lhs - rhs) < TOL, \
                    f"Frobenius fails: {self.name} Ind {cname} vs {pname}"
        return sm, fusion


def induce(parent, sub, fusion, sv):
    idx = parent.order // sub.order
    out = []
    for ci in range(len(parent.classes)):
        acc = 0
        for sj in range(len(sub.classes)):
            if fusion[sj] == ci:
                acc += sub.sizes[sj] * sv[sj]
        # Ind chi(g) = [G:H] * (1/|cl_G(g)|) * sum_{H-classes fused} |cl_H| chi
        out.append(idx * acc / parent.sizes[ci])
    return out


# --------------------------------------------------------------------------
# Dihedral groups D_{2n} = <r, s | r^n = s^2 = 1, s r s = r^-1>
# --------------------------------------------------------------------------

def rot(a):
    return ((cmath.exp(1j * a), 0), (0, cmath.exp(-1j * a)))


def refl():
    return ((0, 1), (1, 0))


def dihedral(n):
    r = rot(2 * math.pi / n)
    s = refl()
    return close([r, s]), r, s


def build_dihedral(name, n):
    elems, r, s = dihedral(n)
    m = Model(name, elems)
    # linear characters: r -> 1, s -> +-1; for even n also r -> -1
    def word(g):
        # classify g = r^k or s r^k by matrix shape
        return abs(g[0][1]) < 1e-9  # True: rotation

    def lin(rv, sv):
        vals = []
        for c in m.classes:
            g = elems[c[0]]
            if word(g):
                k = round(cmath.phase(g[0][0]) / (2 * math.pi / n)) % n
                vals.append(complex(rv ** k))
            else:
                # g = s r^k: value sv * rv^k with rv = +-1
                prod = mat_mul(s, g)  # r^k
                k = round(cmath.phase(prod[0][0]) / (2 * math.pi / n)) % n
                vals.append(complex(sv * rv ** k))
        return vals

    m.add_char("triv", lin(1, 1))
    m.add_char("sgn", lin(1, -1))
    if n % 2 == 0:
        m.add_char("eps", lin(-1, 1))
        m.add_char("epssgn", lin(-1, -1))
    for j in range(1, (n - 1) // 2 + 1):
        rep = lambda g, j=j: rotpow_rep(g, j, n, s)
        vals = char_of_rep(rep, elems, m.classes)
        if abs(inner(m.sizes, m.order, vals, vals) - 1) < TOL:
            m.add_char(f"rho{j}", vals)
    # cyclic subgroup C_n with Galois action = conjugation by s
    sub_elems = close([r])
    zeta = cmath.exp(2j * math.pi / n)
    sub_chars = []
    # build after class structure known: C_n is abelian, each element a class
    sm_probe = Model("probe", sub_elems)
    for j in range(n):
        vals = []
        for c in sm_probe.classes:
            g = sub_elems[c[0]]
            k = round(cmath.phase(g[0][0]) / (2 * math.pi / n)) % n
            vals.append(zeta ** (j * k))
        sub_chars.append((f"x{j}", vals))
    m.add_subgroup(f"C{n}", sub_elems, s, sub_chars)
    return m


def rotpow_rep(g, j, n, s):
    # 2-dim irrep rho_j of D_2n: r^k -> diag(z^jk, z^-jk), s r^k -> antidiag
    if abs(g[0][1]) < 1e-9:
        k = round(cmath.phase(g[0][0]) / (2 * math.pi / n)) % n
        z = cmath.exp(2j * math.pi * j * k / n)
        return ((z, 0), (0, z.conjugate()))
    prod = mat_mul(s, g)
    k = round(cmath.phase(prod[0][0]) / (2 * math.pi / n)) % n
    z = cmath.exp(2j * math.pi * j * k / n)
    return ((0, z.conjugate()), (z, 0))


# --------------------------------------------------------------------------
# Binary tetrahedral 2T = SL(2,3) and binary octahedral 2O, via quaternions
# q = a+bi+cj+dk  <->  [[a+bi, c+di], [-c+di, a-bi]]
# --------------------------------------------------------------------------

def quat(a, b, c, d):
    return ((complex(a, b), complex(c, d)), (complex(-c, d), complex(a, -b)))


def sym_power_char(chi_pows, k):
    """Complete homogeneous h_k from power sums p_i = chi(g^i) (2-dim rep)."""
    # h_0 = 1; k h_k = sum_{i=1..k} p_i h_{k-i}
    h = [1]
    for m in range(1, k + 1):
        h.append(sum(chi_pows[i] * h[m - i] for i in range(1, m + 1)) / m)
    return h[k]


def chars_from_rep(model, rep):
    return char_of_rep(rep, model.elems, model.classes)


def sym_char(model, base_vals, k):
    out = []
    for ci in range(len(model.classes)):
        pows = [2]  # p_0 = dim = 2
        cj = ci
        pmaps = [power_map(model.elems, model.assigned, model.classes, t)
                 for t in range(2, k + 1)]
        pvals = [complex(2)]
        pvals.append(base_vals[ci])
        for t in range(2, k + 1):
            pvals.append(base_vals[pmaps[t - 2][ci]])
        out.append(sym_power_char(pvals, k))
    return out


def build_2T():
    i = quat(0, 1, 0, 0)
    j = quat(0, 0, 1, 0)
    w = quat(-0.5, 0.5, 0.5, 0.5)
    elems = close([i, j, w])
    assert len(elems) == 24
    m = Model("2T", elems)
    # quotient 2T -> C3: kernel Q8 (elements with all coords in {0,+-1}
    # up to the quaternion unit structure). Determine via: g in Q8 iff g^4 = id
    # ... safer: Q8 = closure of {i, j}.
    q8 = set(mat_key(g) for g in close([i, j]))
    # coset labels: assign omega^t by testing g * w^-t in Q8
    winv = inv(w)

    def nu_val(g, power=1):
        x = g
        for t in range(3):
            if mat_key(x) in q8:
                return cmath.exp(2j * math.pi * t * power / 3)
            x = mat_mul(x, winv)
        raise AssertionError("coset labeling failed")

    nu1 = [nu_val(elems[c[0]], 1) for c in m.classes]
    nu2 = [nu_val(elems[c[0]], 2) for c in m.classes]
    pi = char_of_rep(lambda g: g, elems, m.classes)
    ad = sym_char(m, pi, 2)  # det = 1 so Sym^2 = Ad
    m.add_char("triv", [complex(1)] * len(m.classes))
    m.add_char("nu", nu1)
    m.add_char("nu2", nu2)
    m.add_char("pi", pi)
    m.add_char("pinu", [a * b for a, b in zip(pi, nu1)])
    m.add_char("pinu2", [a * b for a, b in zip(pi, nu2)])
    m.add_char("ad", ad)
    return m, (i, j, w)


def build_2O():
    i = quat(0, 1, 0, 0)
    j = quat(0, 0, 1, 0)
    w = quat(-0.5, 0.5, 0.5, 0.5)
    s2 = 1 / math.sqrt(2)
    e = quat(s2, s2, 0, 0)  # (1+i)/sqrt 2
    elems = close([i, j, w, e])
    assert len(elems) == 48
    m = Model("2O", elems)
    in2t = set(mat_key(g) for g in close([i, j, w]))

    def sgn_val(g):
        return complex(1) if mat_key(g) in in2t else complex(-1)

    sgn = [sgn_val(elems[c[0]]) for c in m.classes]
    pi = char_of_rep(lambda g: g, elems, m.classes)
    ad = sym_char(m, pi, 2)
    sym3 = sym_char(m, pi, 3)
    m.add_char("triv", [complex(1)] * len(m.classes))
    m.add_char("sgn", sgn)
    m.add_char("pi", pi)
    m.add_char("pisgn", [a * b for a, b in zip(pi, sgn)])
    m.add_char("ad", ad)
    m.add_char("adsgn", [a * b for a, b in zip(ad, sgn)])
    m.add_char("sym3", sym3)
    # remaining 2-dim irrep (lift of the S4 two-dimensional): Ad (x) Ad
    # contains it; extract by orthogonality from the product character
    prod = [a * a for a in ad]
    rest = list(prod)
    for name, v in m.chars:
        c = inner(m.sizes, m.order, prod, v)
        rest = [r - c * x for r, x in zip(rest, v)]
    assert abs(rest[0].real - 2) < TOL, f"2-dim extraction got dim {rest[0]}"
    m.add_char("two", rest)
    # subgroup 2T with theta = conjugation by e (the outer flip)
    sub_elems = close([i, j, w])
    t_model, _ = build_2T()
    # align sub_elems ordering with t_model's own enumeration
    m.add_subgroup("2T", sub_elems, e, [])
    # re-emit with 2T characters: recompute on sub_elems ordering
    m.subgroups.pop()
    sm = Model("2T", sub_elems)
    q8 = set(mat_key(g) for g in close([i, j]))
    winv = inv(w)

    def nu_val(g, power=1):
        x = g
        for t in range(3):
            if mat_key(x) in q8:
                return cmath.exp(2j * math.pi * t * power / 3)
            x = mat_mul(x, winv)
        raise AssertionError

    spi = char_of_rep(lambda g: g, sub_elems, sm.classes)
    snu = [nu_val(sub_elems[c[0]]) for c in sm.classes]
    snu2 = [nu_val(sub_elems[c[0]], 2) for c in sm.classes]
    sad = sym_char(sm, spi, 2)
    subchars = [("triv", [complex(1)] * len(sm.classes)), ("nu", snu),
                ("nu2", snu2), ("pi", spi),
                ("pinu", [a * b for a, b in zip(spi, snu)]),
                ("pinu2", [a * b for a, b in zip(spi, snu2)]), ("ad", sad)]
    m.add_subgroup("2T", sub_elems, e, subchars)
    return m


# --------------------------------------------------------------------------
# Elementary abelian 2-groups
# --------------------------------------------------------------------------

def build_z2k(k):
    n = 1 << k
    # diagonal +-1 matrices of size 1: model as 1x1 "matrices" with entries
    # indexed by sign patterns; use kxk diagonal to keep them distinct
    elems = []
    for mask in range(n):
        d = tuple(tuple((1.0 if r != c else (-1.0 if (mask >> r) & 1 else 1.0)) * (1 if r == c else 0)
                        for c in range(k)) for r in range(k))
        elems.append(tuple(tuple(complex(x) for x in row) for row in d))
    m = Model(f"Z2_{k}", elems)
    assert len(m.classes) == n
    for cmask in range(n):
        vals = []
        for c in m.classes:
            g = elems[c[0]]
            mask = 0
            for r in range(k):
                if g[r][r].real < 0:
                    mask |= 1 << r
            par = bin(mask & cmask).count("1") & 1
            vals.append(complex(-1 if par else 1))
        m.add_char(f"c{cmask}", vals)
    return m


def main(outdir):
    os.makedirs(outdir, exist_ok=True)
    models = [build_dihedral("D8", 4), build_dihedral("D12", 6),
              build_2T()[0], build_2O(), build_z2k(2), build_z2k(3)]
    for m in models:
        path = os.path.join(outdir, m.name + ".tbl")
        with open(path, "w") as f:
            f.write(m.emit())
        print(f"wrote {path}: order {m.order}, {len(m.classes)} classes, "
              f"{len(m.chars)} chars, {len(m.subgroups)} subgroups")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/models")
