"""Write the three (|p|, |q|) figures as CSV and SVG.

    python3 scripts/make_figures.py --outdir out/figures
"""

import argparse
from pathlib import Path

from focusfocus import figures
from focusfocus.core import InvariantPolynomial, ModelParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="out/figures")
    ap.add_argument("--fibers", default="0.02,0.05,0.08")
    ap.add_argument("--cubic", action="store_true", help="use a generic cubic S instead of S = 0")
    args = ap.parse_args()

    inv = InvariantPolynomial.zero()
    if args.cubic:
        inv = InvariantPolynomial.from_coeffs({(1, 0): 0.3, (0, 1): -0.2, (2, 0): 0.5, (1, 1): 0.4})
    params = ModelParams(0.1, 0.3, inv)
    fibers = [float(v) for v in args.fibers.split(",")]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for kind in figures.FigureKind:
        lines = figures.make_figure(kind, params, fibers)
        rows = figures.write_csv(lines, outdir / f"{kind.value}.csv")
        figures.write_svg(lines, outdir / f"{kind.value}.svg", title=kind.value)
        print(f"{kind.value}: {len(lines)} curves, {rows} rows")


if __name__ == "__main__":
    main()
