"""Experiment: recompute S_beta for a sweep of alpha-phases and relate each
result to the one at the reference phase by the shortest braid word.

Admissibility fails exactly on the Stokes rays, so the sweep skips those phases
and records them.  Output is a JSON list, one record per phase.

    python3 scripts/rotate_beta.py --f "x + x^-3" --den 16
"""

import argparse
import json
from fractions import Fraction

from mirror_stokes.braid import search_equivalence
from mirror_stokes.errors import InadmissibleDirection, NotFound
from mirror_stokes.geometry import format_phase
from mirror_stokes.pipeline import RunSettings, run_stokes_pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--f", default="x + x^-3")
    ap.add_argument("--reference", default="pi/8")
    ap.add_argument("--den", type=int, default=16, help="phases k*pi/den for k = 0..2*den-1")
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()

    ref = run_stokes_pipeline(RunSettings(args.f, args.reference))["stokes"]["S_beta"]
    records = []
    for k in range(2 * args.den):
        phase = format_phase(Fraction(k, args.den))
        rec = {"alpha_phase": phase}
        try:
            S = run_stokes_pipeline(RunSettings(args.f, phase))["stokes"]["S_beta"]
        except InadmissibleDirection as exc:
            rec["inadmissible"] = str(exc)
            records.append(rec)
            continue
        rec["S_beta"] = S
        try:
            cert = search_equivalence(ref, S, max_depth=args.depth)
            rec.update(word=cert.word.to_json(), signs=list(cert.signs))
        except NotFound:
            rec["word"] = None
        records.append(rec)
        print(phase, rec.get("word"), flush=True)
    print(json.dumps(records, indent=1))


if __name__ == "__main__":
    main()
