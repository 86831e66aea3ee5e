#!/usr/bin/env python3
"""Independent brute-force oracle for the Hochschild cohomology golden values.

Rebuilds, from the shipped model files alone, the cochain complex of the
basis category (degree-p part: one block per non-strict inclusion chain
U_0 <= ... <= U_p of basis members, holding maps O(U_{p-1}) (x) ... (x)
O(U_0) -> O(U_0)), assembles the bar-type differential by direct evaluation
over exact fractions, and compares kernel/image ranks against the expected
dimensions. No code is shared with the C++ library: matrices are dense
lists of Fractions and rank is plain Gaussian elimination.

Usage: oracle_hochschild.py <models-dir>
Exit status 0 iff every golden value matches.
"""

import itertools
import json
import sys
from fractions import Fraction

GOLDEN = {
    # model file -> expected dim H^q for q = 0, 1, 2
    "point_field.json": [1, 0, 0],
    "point_dual.json": [2, 1, 1],
    "chain2.json": [1, 0, 0],
    "pseudocircle.json": [1, 1, 0],
}

MAX_Q = 2  # H^0..H^2 need differentials up to d^2: C^0..C^3


def load_model(path):
    with open(path) as fh:
        doc = json.load(fh)
    points = doc["space"]["points"]
    pidx = {p: i for i, p in enumerate(points)}

    def mask(names):
        m = 0
        for n in names:
            m |= 1 << pidx[n]
        return m

    algebras = {}
    for name, body in doc["algebras"].items():
        dim = body["dim"]
        table = [[[Fraction(str(c)) for c in cell] for cell in row] for row in body["table"]]
        unit = [Fraction(str(c)) for c in body["unit"]]
        algebras[name] = {"dim": dim, "table": table, "unit": unit}

    assign = {}
    st = doc["structure"]
    if "constant" in st:
        # constant structure: same algebra on every member we will ever see
        default = st["constant"]
    else:
        default = None
    for entry in st.get("assign", []):
        assign[mask(entry["open"])] = entry["algebra"]

    restrictions = {}
    for entry in st.get("restrictions", []):
        key = (mask(entry["from"]), mask(entry["to"]))
        restrictions[key] = [[Fraction(str(c)) for c in row] for row in entry["matrix"]]

    members = [mask(o) for o in doc["basis"]]
    return members, algebras, assign, default, restrictions


def alg_at(u, algebras, assign, default):
    return algebras[assign.get(u, default)]


def rho(u, v, algebras, assign, default, restrictions):
    """Restriction matrix O(U) -> O(V) for V <= U."""
    if (u, v) in restrictions:
        return restrictions[(u, v)]
    a, b = assign.get(u, default), assign.get(v, default)
    if a == b:
        d = algebras[a]["dim"]
        return [[Fraction(i == j) for j in range(d)] for i in range(d)]
    raise KeyError("no restriction map")


def mat_vec(m, v):
    return [sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m))]


def mul(alg, x, y):
    out = [Fraction(0)] * alg["dim"]
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            for k in range(alg["dim"]):
                out[k] += xi * yj * alg["table"][i][j][k]
    return out


def chains(members, length):
    """Non-strict inclusion chains U_0 <= ... <= U_{length-1}, lexicographic."""
    out = []

    def rec(prefix):
        if len(prefix) == length:
            out.append(tuple(prefix))
            return
        for m in members:
            if not prefix or (prefix[-1] & ~m) == 0:
                rec(prefix + [m])

    rec([])
    return out


def rank(mat):
    if not mat or not mat[0]:
        return 0
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


class Complex:
    """C^p blocks and coordinates for one basis category."""

    def __init__(self, members, algebras, assign, default, restrictions, max_p):
        self.members = members
        self.ctx = (algebras, assign, default, restrictions)
        self.chains = [chains(members, p + 1) for p in range(max_p + 1)]
        self.offsets = []
        self.dims = []
        for p in range(max_p + 1):
            offs, total = {}, 0
            for ch in self.chains[p]:
                offs[ch] = total
                total += self.block_dim(ch)
            self.offsets.append(offs)
            self.dims.append(total)

    def dim_of(self, u):
        algebras, assign, default, _ = self.ctx
        return alg_at(u, algebras, assign, default)["dim"]

    def arg_dims(self, ch):
        # a_1 lives on the top inclusion, a_p on the bottom one
        return [self.dim_of(ch[l]) for l in range(len(ch) - 2, -1, -1)]

    def block_dim(self, ch):
        d = self.dim_of(ch[0])
        for a in self.arg_dims(ch):
            d *= a
        return d

    def coord(self, p, ch, in_idx, out_idx):
        base = self.offsets[p][ch]
        flat = 0
        for d, i in zip(self.arg_dims(ch), in_idx):
            flat = flat * d + i
        return base + flat * self.dim_of(ch[0]) + out_idx

    def evaluate(self, phi, p, ch, args):
        """Multilinear evaluation of a coordinate vector phi on vector args."""
        algebras, assign, default, _ = self.ctx
        dims = self.arg_dims(ch)
        out_dim = self.dim_of(ch[0])
        out = [Fraction(0)] * out_dim
        for idx in itertools.product(*[range(d) for d in dims]):
            coeff = Fraction(1)
            for l, i in enumerate(idx):
                coeff *= args[l][i]
                if coeff == 0:
                    break
            if coeff == 0:
                continue
            for o in range(out_dim):
                out[o] += coeff * phi[self.coord(p, ch, idx, o)]
        return out

    def differential(self, p):
        """Matrix of d: C^p -> C^{p+1}, one column per basis cochain."""
        algebras, assign, default, restrictions = self.ctx
        mat = [[Fraction(0)] * self.dims[p] for _ in range(self.dims[p + 1])]
        for col in range(self.dims[p]):
            phi = [Fraction(0)] * self.dims[p]
            phi[col] = Fraction(1)
            for ch in self.chains[p + 1]:
                dims = self.arg_dims(ch)
                out_dim = self.dim_of(ch[0])
                for idx in itertools.product(*[range(d) for d in dims]):
                    args = []
                    for l, i in enumerate(idx):
                        v = [Fraction(0)] * dims[l]
                        v[i] = Fraction(1)
                        args.append(v)
                    # chain U_0 <= ... <= U_{p+1}; a_l lives on U_{p+1-l}
                    n = p + 1
                    val = [Fraction(0)] * out_dim
                    # first face: a_1 composed with phi(a_2, ..., a_{p+1})
                    inner = self.evaluate(phi, p, ch[: n], args[1:])
                    r = rho(ch[n - 1], ch[0], algebras, assign, default, restrictions)
                    prod = mul(alg_at(ch[0], algebras, assign, default),
                               mat_vec(r, args[0]), inner)
                    val = [a + b for a, b in zip(val, prod)]
                    # middle faces: compose a_i with a_{i+1}
                    for i in range(1, n):
                        sub = ch[: n - i] + ch[n - i + 1 :]
                        u_hi, u_lo = ch[n - i], ch[n - i - 1]
                        r = rho(u_hi, u_lo, algebras, assign, default, restrictions)
                        merged = mul(alg_at(u_lo, algebras, assign, default),
                                     mat_vec(r, args[i - 1]), args[i])
                        new_args = args[: i - 1] + [merged] + args[i + 1 :]
                        inner = self.evaluate(phi, p, sub, new_args)
                        sign = -1 if i % 2 else 1
                        val = [a + sign * b for a, b in zip(val, inner)]
                    # last face: phi(a_1, ..., a_p) composed with a_{p+1}
                    inner = self.evaluate(phi, p, ch[1:], args[:-1])
                    r = rho(ch[1], ch[0], algebras, assign, default, restrictions)
                    prod = mul(alg_at(ch[0], algebras, assign, default),
                               mat_vec(r, inner), args[-1])
                    sign = -1 if (n % 2) else 1
                    val = [a + sign * b for a, b in zip(val, prod)]
                    for o in range(out_dim):
                        row = self.coord(p + 1, ch, idx, o)
                        mat[row][col] += val[o]
        return mat


def cohomology_dims(path, max_q):
    members, algebras, assign, default, restrictions = load_model(path)
    cx = Complex(members, algebras, assign, default, restrictions, max_q + 1)
    d = [cx.differential(p) for p in range(max_q + 1)]
    # sanity: d^2 = 0 wherever two consecutive differentials exist
    for p in range(max_q):
        prod_rank = rank([mat_vec(d[p + 1], col)
                          for col in zip(*d[p])]) if cx.dims[p] else 0
        if prod_rank != 0:
            raise AssertionError(f"{path}: d^2 != 0 at p={p}")
    h = []
    for q in range(max_q + 1):
        z = cx.dims[q] - rank(d[q])
        b = rank(d[q - 1]) if q > 0 else 0
        h.append(z - b)
    return h


def main():
    if len(sys.argv) != 2:
        print("usage: oracle_hochschild.py <models-dir>", file=sys.stderr)
        return 2
    models = sys.argv[1].rstrip("/")
    failures = 0
    for fname, expected in sorted(GOLDEN.items()):
        got = cohomology_dims(f"{models}/{fname}", MAX_Q)
        status = "ok" if got == expected else "MISMATCH"
        if got != expected:
            failures += 1
        print(f"{fname}: H^0..H^{MAX_Q} = {got}, expected {expected} ... {status}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
