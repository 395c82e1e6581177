"""Smoke test for the morphpy extension module.

Build first:  cargo build --release -p morph-py
An installed morphpy (maturin/pip) is used if present; otherwise the
library is looked up in the directories given as arguments, then in
target/release and target/debug.
"""
import importlib.util
import pathlib
import sys
from fractions import Fraction


def load():
    try:
        import morphpy
        return morphpy
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    dirs = [pathlib.Path(p) for p in sys.argv[1:]] + [root / "target" / "release", root / "target" / "debug"]
    for lib in (d / n for d in dirs for n in ("libmorphpy.so", "libmorphpy.dylib", "morphpy.dll")):
        if lib.exists():
            spec = importlib.util.spec_from_file_location("morphpy", lib)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("morphpy not built; run `cargo build --release -p morph-py`")


def coeffs(terms, upto):
    c = [Fraction(0)] * (upto + 1)
    for power, num, den in terms:
        if power <= upto:
            c[power] = Fraction(int(num), int(den))
    return c


def main():
    m = load()

    steane = m.Code.catalog("steane")
    assert (steane.n, steane.k, steane.distance()) == (7, 1, 3)

    qrm3 = m.Code.catalog("qrm3")
    assert m.Code.from_json(qrm3.to_json()).n == 15

    p_s, _, series = m.distillation_polynomials("10", 3)
    assert coeffs(p_s, 2) == [1, -8, 29]
    assert coeffs(series, 3) == [0, 0, 1, 9]
    _, _, series15 = m.distillation_polynomials("15", 3)
    assert coeffs(series15, 3) == [0, 0, 0, 35]

    seq, cost, p_actual = m.optimize_cost(0.01, 1e-7)
    assert seq == ["10", "10"] and abs(cost - 69.41) < 0.35, (seq, cost)

    lat = m.Lattice.generate(9, "A1", 0.6, 7)
    assert lat.code().k == 4
    err = [3, 40]
    syn = lat.syndrome(err)
    corr = lat.decode(syn)
    assert lat.syndrome(corr) == syn
    assert lat.judge(err, corr)

    ok, report = m.run_scenario("morph-steane")
    assert ok, report

    rows = m.threshold_sweep("A1", 0.0, [6, 9], [0.05], lattices=2, trials=20, seed=1)
    assert len(rows) == 2 and all(r[2] == 40 for r in rows)

    print("morphpy smoke test passed")


if __name__ == "__main__":
    main()
