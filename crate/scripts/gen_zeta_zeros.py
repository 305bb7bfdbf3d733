#!/usr/bin/env python3
"""Regenerate data/zeta_zeros_100k.txt: ordinates of the first N zeta zeros.

Uses Arb (python-flint) rigorous zero isolation. Output follows the
zero-file format read by `li_lab::ingest::parse_ordinates`.
"""
import sys

import flint

N = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
OUT = sys.argv[2] if len(sys.argv) > 2 else "crates/core/data/zeta_zeros_100k.txt"
BATCH = 2000

flint.ctx.prec = 64
with open(OUT, "w") as fh:
    fh.write(f"# first {N} nontrivial zeros of zeta(s), imaginary parts\n")
    fh.write("# computed with Arb acb_dirichlet_zeta_zeros at 64-bit working precision\n")
    done = 0
    while done < N:
        k = min(BATCH, N - done)
        for z in flint.acb.zeta_zeros(done + 1, k):
            fh.write(f"{float(z.imag.mid()):.12f}\n")
        done += k
        fh.flush()
        print(done, file=sys.stderr)
