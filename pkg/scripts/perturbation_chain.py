"""Resolvent chain on real lattices against the closed-form shift.

For each hop length R the chain is evaluated at order R + 2 on the
smallest lattice with a straight boundary segment of that length.
"""

import argparse

from toric_obc.boundary import BoundaryCouplings, delta_E, ordering_factor, resolvent_shift
from toric_obc.cli import straight_segment
from toric_obc.groundspace import BoundaryConfig
from toric_obc.lattice import build_lattice

LATTICES = {1: (2, 2), 2: (3, 3), 3: (4, 3)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--hx", type=float, default=0.01)
    ap.add_argument("--jm", type=float, default=1.0)
    ap.add_argument("--rmax", type=int, default=3, choices=[1, 2, 3])
    args = ap.parse_args()
    print("R,lattice,chain,delta_E,ratio,orderings")
    for R in range(1, args.rmax + 1):
        lat = build_lattice(*LATTICES[R])
        L = lat.ring_length
        c = BoundaryCouplings(args.hx, args.jm, L)
        seg = straight_segment(lat, R)
        chain = resolvent_shift(
            lat, BoundaryConfig.from_positions(L, []), BoundaryConfig.from_positions(L, seg), c, R + 2
        )
        d = delta_E(R, c)
        print(f"{R},{lat.rows}x{lat.cols},{chain:.12g},{d:.12g},{chain / d:.12g},{ordering_factor(R):g}", flush=True)


if __name__ == "__main__":
    main()
