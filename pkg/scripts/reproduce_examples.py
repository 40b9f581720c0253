"""Solve the two 2x2 worked examples and write their result JSON and SVG figures.

    python scripts/reproduce_examples.py --out figures/
"""
from __future__ import annotations

import argparse
from pathlib import Path

from tropopt.linalg import Mat, mat_mul, spectral_radius, star, tr_sum
from tropopt.optimizer import OptProblem, minimize
from tropopt.plot import render_svg
from tropopt.serialize import ProblemFile, dumps, result_to_json
from tropopt.semifield import Semifield

MP = Semifield.MAX_PLUS

EXAMPLES = {
    "irreducible": ([[0, -2], [-7, -3]], [[0, -10], [4, -3]], [-9, 6]),
    "reducible": ([[-2, None], [-4, 0]], [[0, -6], [None, -4]], [3, 4]),
}


def show(name: str, M: Mat) -> str:
    rows = ["[" + ", ".join("." if v is None else f"{v:g}" for v in r) + "]" for r in M.to_rows()]
    return f"  {name:<22} {' '.join(rows)}"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figures"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name, (a, c, g) in EXAMPLES.items():
        A, C, gv = Mat.from_rows(MP, a), Mat.from_rows(MP, c), Mat.column(MP, g)
        res = minimize(OptProblem(A, C, gv))
        print(f"{name}:")
        print(f"  lambda(A) = {spectral_radius(A).value:g}, Tr(C) = {tr_sum(C).value:g}, theta = {res.theta.value:g}")
        for label, M in (("A*", star(A)), ("C*", star(C)), ("A C", mat_mul(A, C)),
                         ("(A/theta + C)*", res.solutions.generator), ("minimal x", res.minimal)):
            print(show(label, M))
        (args.out / f"{name}.json").write_text(dumps(result_to_json(res)))
        svg = render_svg(ProblemFile(MP, A, C, gv, None), res)
        (args.out / f"{name}.svg").write_text(svg)
    print(f"wrote results and figures to {args.out}/")


if __name__ == "__main__":
    main()
