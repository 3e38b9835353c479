#!/usr/bin/env python3
# Writes the catalog models and a grid recipe out as TOML, then reads each
# back through the loaders — a worked example of both file formats.

import os
import sys

import numpy as np

from akh import grid as gr
from akh import liemodel as lm

OUT = sys.argv[1] if len(sys.argv) > 1 else "/tmp/akh-models"
os.makedirs(OUT, exist_ok=True)

# structure constants as [target, i, j, coeff]: d e_target += coeff e_i ^ e_j
DCOEFFS = {
    "torus4": [],
    "kodaira-thurston": [[4, 1, 2, 1.0]],
    "nilpotent6": [[5, 1, 3, 1.0], [5, 2, 4, -1.0],
                   [6, 1, 4, 1.0], [6, 2, 3, 1.0]],
}


def matrix_rows(A):
    return "[\n" + ",\n".join(
        "  [" + ", ".join(f"{v:.1f}" for v in row) + "]" for row in A
    ) + ",\n]"


for name in lm.CATALOG:
    model = lm.load_model(name)
    m = 2 * model.n
    rows = [f'[model]\nname = "{name}"\ndim = {m}\n',
            "[structure]\ndcoeffs = ["]
    rows += [f"  [{t}, {i}, {j}, {c}]," for t, i, j, c in DCOEFFS[name]]
    rows += ["]\n", '[metric]\ng = "identity"\n',
             f"[acs]\nJ = {matrix_rows(model.J)}"]
    path = os.path.join(OUT, f"{name}.toml")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")

    back = lm.load_model(path)
    same = (np.allclose(back.J, model.J)
            and np.allclose(back.images, model.images))
    print(f"wrote {path}  round-trip {'ok' if same else 'MISMATCH'}")

recipe = os.path.join(OUT, "grid-default.toml")
with open(recipe, "w") as fh:
    fh.write("""[grid]
N = 8

[fields.j_perturbation]
axis_pair = [2, 3]
amplitude = 0.15
mode = [1, 0, 0, 0]

[fields.omega_perturbation]
amplitude = 0.08
mode = [0, 1, 0, 0]

[fields.f]
offset = 2.0
amplitude = 1.0
mode = [0, 1, 0, 0]

[fields.theta.components.c1]
offset = 0.4
amplitude = 0.3
mode = [0, 0, 1, 0]

[fields.theta.components.c3]
offset = -0.2
amplitude = 0.25
mode = [1, 0, 0, 0]
""")
gm = gr.build_grid(recipe)
print(f"wrote {recipe}  builds N={gm.N} with sup|N_J| = "
      f"{gm.sup_nijenhuis():.4f}")
print("\ntry:  akh verify --model", recipe)
