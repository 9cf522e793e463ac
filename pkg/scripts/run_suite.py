"""Run the verification suite for S = 0 and a generic cubic S and write JSON reports.

    python3 scripts/run_suite.py --samples 1000 --outdir out/
"""

import argparse
import json
import time
from dataclasses import replace
from pathlib import Path

from focusfocus.core import InvariantPolynomial, ModelParams
from focusfocus.verify import ToleranceConfig, run_suite, suite_passed

INVARIANTS = {
    "zero": InvariantPolynomial.zero(),
    "cubic": InvariantPolynomial.from_coeffs(
        {(1, 0): 0.3, (0, 1): -0.2, (2, 0): 0.5, (1, 1): 0.4, (3, 0): 0.7, (0, 3): 0.6}
    ),
    "bilinear": InvariantPolynomial.from_coeffs({(1, 0): 0.3, (0, 1): 0.2, (1, 1): 0.1}),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=0.3)
    ap.add_argument("--outdir", default="out")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tol = replace(ToleranceConfig(), samples=args.samples, seed=args.seed)
    all_ok = True
    for name, inv in INVARIANTS.items():
        params = ModelParams(args.epsilon, args.delta, inv)
        t0 = time.perf_counter()
        reports = run_suite(params, tol)
        dt = time.perf_counter() - t0
        ok = suite_passed(reports)
        all_ok &= ok
        print(f"S={name}: {'PASS' if ok else 'FAIL'} in {dt:.1f}s")
        for r in reports:
            print(f"  {'ok ' if r.passed else 'BAD'} {r.check_id:26s} {r.max_error:.2e} / {r.threshold:.0e}")
        doc = {"S": inv.to_triples(), "suite": [r.to_dict() for r in reports], "pass": ok, "seconds": dt}
        (outdir / f"report_{name}.json").write_text(json.dumps(doc, indent=2))
    raise SystemExit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
