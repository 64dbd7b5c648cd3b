"""Smoke test for the deltarray extension module.

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/deltarray-*.whl
    python python/smoke_test.py
"""

import math

import deltarray as da


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


# single barrier: T = 1 / (1 + λ²/4)
arr = da.BarrierArray([(0.0, 2.0)])
close(arr.transmission(1.0), 0.5, 1e-12)

tm = da.compose(da.BarrierArray([(0.0, 0.7), (1.3, -0.4), (2.9, 1.1)]), 1.7)
close(abs(tm.det() - 1), 0.0, 1e-12)
close(tm.transmission() + tm.reflection(), 1.0, 1e-12)
exp = da.compose_expansion(da.BarrierArray([(0.0, 0.7), (1.3, -0.4), (2.9, 1.1)]), 1.7)
close(abs(exp[1][0] - tm.m21), 0.0, 1e-12)

l = da.lmatrix(0.3)
sq = [[sum(l[i][m] * l[m][j] for m in range(2)) for j in range(2)] for i in range(2)]
assert max(abs(v) for row in sq for v in row) < 1e-14

# spacing π at k = 1 merges everything into one barrier
red = da.reduce(da.BarrierArray([(0.0, 0.5), (math.pi, 0.5), (2 * math.pi, -1.0)]), 1.0)
assert red.classification == "EffectiveSingle", red.classification
assert red.zero_strength_single
close(red.transmission, 1.0, 1e-10)

# symmetric triple at λ = 1
for s in (0.5 * math.pi, math.acos(-0.8)):
    close(da.BarrierArray.equally_spaced(3, 1.0, s).transmission(1.0), 1.0, 1e-12)
roots, _ = da.find_perfect_tunnelling(da.BarrierArray.equally_spaced(3, 1.0, 1.0), 0.3, 3.0, grid=4000)
assert roots and all(abs(r.transmission - 1) < 1e-9 for r in roots)
close(da.qbs_residual_n3(1.0, math.acos(-0.8)), 0.0, 1e-9)

derived, printed = da.audit_pair(1.0)
assert derived.passes and not printed.passes
quad = da.audit_symmetric(4, 1.0)
print("quadruple printed form passes:", quad.passes, [r.residual for r in quad.at_oracle_roots])

gaas = da.Material.gaas()
g = da.reduced_strength(2.0, gaas)
k = da.pair_resonance_k(g, 100.0, 2)
e = da.energy_from_k(k, gaas)
close(e, 4.56, 0.05)
d = da.design_pair_cell(4.56, gaas, 2.0)
assert 25.0 <= d <= 32.0, d

flat = da.flatten_cells(
    [da.BarrierArray([(0.0, g), (100.0, g)]), da.BarrierArray([(0.0, g), (d, g)])], [150.0]
)
spec = da.scan_energy(flat, gaas, 0.1, 15.0, 4001)
top = max(da.peak_analysis(spec, 0.0), key=lambda p: p.t_max)
close(top.energy_mev, 4.56, 0.1)
assert top.t_max >= 0.99

print("deltarray smoke test ok: composite peak T=%.5f at %.4f meV" % (top.t_max, top.energy_mev))
