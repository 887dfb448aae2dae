"""Independent symbolic values for frozen curvature tests.

z and zb are treated as independent symbols. Prints C++ initializer lists.
"""
import sympy as sp

def metric(name, n, eps=0.3, b=1.0):
    z = sp.symbols(f"z1:{n+1}")
    zb = sp.symbols(f"zb1:{n+1}")
    r = sum(z[i] * zb[i] for i in range(n))
    G = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            d = 1 if i == j else 0
            if name == "example_2_2":
                G[i, j] = (1 + r) * d + (eps - 2) * zb[i] * z[j]
            elif name == "dual":
                G[i, j] = d / (1 + r) + (2 - eps) * zb[i] * z[j] / ((1 + r) * (1 - (1 - eps) * r))
            elif name == "fs":
                G[i, j] = d / (1 + r) - zb[i] * z[j] / (1 + r) ** 2
    if name == "example_2_3":
        G[0, 0] = 1 - z[0] * zb[0] + (1 + b) * z[1] * zb[1]
        G[0, 1] = (1 + b) * z[1] * zb[0]
        G[1, 0] = (1 + b) * zb[1] * z[0]
        G[1, 1] = 1 - (1 + 4 * b) * z[0] * zb[0] - z[1] * zb[1]
    return z, zb, G

def compute(name, point, **kw):
    n = len(point)
    z, zb, G = metric(name, n, **kw)
    subs = {}
    for i, p in enumerate(point):
        subs[z[i]] = p
        subs[zb[i]] = sp.conjugate(p)
    ev = lambda e: complex(sp.N(e.subs(subs), 30))
    Gv = sp.Matrix(n, n, lambda i, j: G[i, j].subs(subs))
    Hinv = Gv.inv()
    H = lambda p, q: Hinv[q, p]  # g^{p qbar}
    dG = [[[sp.diff(G[k, l], z[i]).subs(subs) for l in range(n)] for k in range(n)] for i in range(n)]
    dGb = [[[sp.diff(G[k, l], zb[j]).subs(subs) for l in range(n)] for k in range(n)] for j in range(n)]
    R = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    v = -sp.diff(G[k, l], z[i], zb[j]).subs(subs)
                    v += sum(H(p, q) * dG[i][k][q] * dGb[j][p][l] for p in range(n) for q in range(n))
                    R[i, j, k, l] = complex(sp.N(v, 30))
    Gamma = {(k, i, j): complex(sp.N(sum(H(k, q) * dG[i][j][q] for q in range(n)), 30))
             for k in range(n) for i in range(n) for j in range(n)}
    eta = [sum(Gamma[i, i, j] - Gamma[i, j, i] for i in range(n)) for j in range(n)]
    Hn = [[complex(sp.N(H(p, q), 30)) for q in range(n)] for p in range(n)]
    ric1 = [[sum(Hn[k][l] * R[i, j, k, l] for k in range(n) for l in range(n)) for j in range(n)] for i in range(n)]
    ric2 = [[sum(Hn[k][l] * R[k, l, i, j] for k in range(n) for l in range(n)) for j in range(n)] for i in range(n)]
    ric3 = [[sum(Hn[k][l] * R[i, l, k, j] for k in range(n) for l in range(n)) for j in range(n)] for i in range(n)]
    return R, eta, ric1, ric2, ric3

def fmt(c):
    return "{%.17g, %.17g}" % (c.real, c.imag)

if __name__ == "__main__":
    p = [sp.Rational(1, 10) + sp.I * sp.Rational(1, 20), -sp.Rational(7, 100) + sp.I * sp.Rational(1, 50)]
    out = ["// Generated by tests/oracles/chern_oracle.py; do not edit.",
           "#pragma once", "", "#include <complex>", "", "namespace oracle {", "",
           "using C = std::complex<double>;", "",
           "// Evaluation point (0.1+0.05i, -0.07+0.02i).",
           "inline constexpr double kPoint[4] = {0.1, 0.05, -0.07, 0.02};", ""]
    for tag, name, kw in [("ex23", "example_2_3", {"b": 1}), ("ex22", "example_2_2", {"eps": 0.3}),
                          ("dual", "dual", {"eps": 0.3})]:
        R, eta, r1, r2, r3 = compute(name, p, **kw)
        out.append("// %s %s" % (name, ", ".join("%s=%s" % kv for kv in kw.items())))
        out.append("inline const C %s_R[16] = {%s};" % (tag, ", ".join("C" + fmt(R[key]) for key in sorted(R))))
        out.append("inline const C %s_eta[2] = {%s};" % (tag, ", ".join("C" + fmt(e) for e in eta)))
        for lab, m in (("ric1", r1), ("ric2", r2), ("ric3", r3)):
            out.append("inline const C %s_%s[4] = {%s};" % (tag, lab, ", ".join("C" + fmt(m[i][j]) for i in range(2) for j in range(2))))
        out.append("")
    out.append("} // namespace oracle")
    open("../oracle_values.hpp", "w").write("\n".join(out) + "\n")
