"""Acceptance gate: twelve headline checks at their stated tolerances.

Each criterion is one test, so the verbose run prints exactly one pass/fail
line per criterion; a trailing stdout line repeats the verdict for logs that
strip pytest's own formatting.
"""

import functools
import json
import math
import time

from scipy.special import beta

from akh import cli
from akh import constants as ct
from akh import grid as gr
from akh import liemodel as lm
from akh import operators as op
from akh import verification as vf

MODELS = ("kodaira-thurston", "nilpotent6", "torus4")


def criterion(num, text):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"criterion {num:2d}: FAIL — {text}")
                raise
            print(f"criterion {num:2d}: PASS — {text}")
        return wrapper
    return deco


def entries(model_name, suite, ident=None):
    rep = vf.verify_model(lm.load_model(model_name), suites=[suite])
    out = rep.entries
    if ident is not None:
        out = [e for e in out if e.identity == ident]
    assert out, f"no entries for {suite}/{ident} on {model_name}"
    return out


def worst(rows):
    return max(e.residual for e in rows)


@criterion(1, "the seven bidegree relations of d^2 = 0 vanish on every model")
def test_criterion_01_d_squared_relations():
    t0 = time.perf_counter()
    for name in MODELS:
        rows = entries(name, "d2")
        assert len(rows) == 7
        assert worst(rows) < 1e-12
    assert time.perf_counter() - t0 < 5.0


@criterion(2, "the ten commutator identities hold, integrability not assumed")
def test_criterion_02_commutator_identities():
    twisted = 0
    for name in MODELS:
        model = lm.load_model(name)
        rows = entries(name, "ak")
        assert len(rows) == 10
        assert worst(rows) < 1e-11
        if model.nijenhuis_operator().norm(model.frame) > 0.1:
            twisted += 1
    assert twisted >= 1, "need a model with nonvanishing torsion in the mix"


@criterion(3, "the Laplacian comparison relations hold on every model")
def test_criterion_03_laplacian_relations():
    for name in MODELS:
        assert worst(entries(name, "laplacians")) < 1e-11


@criterion(4, "sl(2) counting is exact and the Lefschetz maps are bijective "
              "on joint kernels")
def test_criterion_04_lefschetz():
    for name in MODELS:
        rows = entries(name, "sl2")
        for ident in ("counting", "bracket-L", "bracket-Lam"):
            assert all(e.verdict == "exact" for e in rows
                       if e.identity == ident)
        lef = [e for e in rows if e.identity == "hard-lefschetz"]
        assert lef and worst(lef) < 1e-10
        rec = [e for e in rows if e.identity == "primitive-reconstruction"]
        assert rec and worst(rec) < 1e-10


@criterion(5, "kernel dimensions carry the conjugation and star symmetries; "
              "degree dims (1, 3, 4, 3, 1) on the twisted nilmanifold")
def test_criterion_05_duality_tables():
    for name in MODELS:
        rows = entries(name, "dualities")
        for ident in ("conjugation", "star-duality", "d-degree-symmetry"):
            picked = [e for e in rows if e.identity == ident]
            assert picked and all(e.verdict == "exact" for e in picked)
    model = lm.load_model("kodaira-thurston")
    parts = model.split_differential()
    d = (parts["mu"] + parts["del"] + parts["delbar"] + parts["mubar"])
    dims = [op.harmonic_space(d, model.frame, degree=k).dim for k in range(5)]
    assert dims == [1, 3, 4, 3, 1]


@criterion(6, "torsion operator matches (mu + mubar), norms couple as "
              "|nabla J|^2 = |N|^2 / 4, and both contraction routes agree")
def test_criterion_06_torsion_couplings():
    for name in MODELS:
        rows = entries(name, "nijenhuis")
        for ident in ("mu-operator-match", "nabla-j-norm",
                      "two-route-commutator"):
            picked = [e for e in rows if e.identity == ident]
            assert picked and worst(picked) < 1e-10


@criterion(7, "six-term pairing identity and its expansions: exact on the "
              "invariant models, order >= 1.9 on refining grids, under 120 s")
def test_criterion_07_pairing_identity_and_convergence():
    t0 = time.perf_counter()
    for name in MODELS:
        rows = entries(name, "vanishing")
        for ident in ("six-term", "term-one", "term-two", "term-reduction"):
            picked = [e for e in rows if e.identity == ident]
            assert picked and worst(picked) < 1e-10
    studies = gr.convergence_suite(
        ["six-term-pairing", "djdf-expansion", "djdf-terms"], [8, 16, 32])
    for s in studies:
        assert s["order"] == "exact" or s["order"] >= 1.9, s
    assert time.perf_counter() - t0 < 120.0


@criterion(8, "closed and coclosed joint kernels pair to zero against the "
              "twisted wedge in every degree")
def test_criterion_08_orthogonality():
    rows = entries("kodaira-thurston", "orthogonality", "coexact-pairing")
    assert worst(rows) < 1e-10


@criterion(9, "isoperimetric constants reproduce 1/(128 pi^2) and the "
              "Beta-function closed form for n = 2..6")
def test_criterion_09_constants():
    got = ct.croke_constants(2)
    assert abs(got["C_tilde_n"] - 1.0 / (128.0 * math.pi ** 2)) < 1e-10
    for n in range(2, 7):
        moment = 0.5 * beta((2 * n - 1) / (2.0 * (n - 1)), (2 * n - 1) / 2.0)
        v_even = ct.sphere_volume(2 * n - 2)
        v_odd = ct.sphere_volume(2 * n - 1)
        c_tilde = (v_even ** (2 * n - 2) / v_odd ** (2 * n - 1)
                   * moment ** (2 * n - 2))
        c_n = ((2.0 * n - 1) / (n - 1)) ** 2 * c_tilde ** (1.0 / n)
        got = ct.croke_constants(n)
        assert abs(got["C_tilde_n"] / c_tilde - 1.0) < 1e-10
        assert abs(got["C_n"] / c_n - 1.0) < 1e-10


@criterion(10, "the rough-Laplacian comparison on one-forms closes on every "
               "model")
def test_criterion_10_weitzenbock():
    for name in MODELS:
        assert worst(entries(name, "weitzenbock")) < 1e-10


@criterion(11, "discrete d^2 = 0 is exact on the flat grid and the harmonic "
               "count is (1, 4, 6, 4, 1)")
def test_criterion_11_grid_exactness():
    gm = gr.build_grid({"grid": {"N": 8}})
    rep = vf.verify_model(gm, suites=["d2"])
    assert all(e.verdict == "exact" for e in rep.entries)
    assert worst(rep.entries) < 1e-12
    assert list(gr.harmonic_dims(gm)) == [1, 4, 6, 4, 1]


@criterion(12, "repeated default verification runs emit byte-identical "
               "reports")
def test_criterion_12_reproducible_reports(tmp_path, capsys):
    paths = [str(tmp_path / f"run{i}.json") for i in (1, 2)]
    for path in paths:
        code = cli.main(["verify", "--model", "kodaira-thurston",
                         "--out", path])
        assert code == 0
    capsys.readouterr()
    with open(paths[0], "rb") as fa, open(paths[1], "rb") as fb:
        first, second = fa.read(), fb.read()
    assert first == second
    assert json.loads(first)["ok"] is True
