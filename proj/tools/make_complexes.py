#!/usr/bin/env python3
"""Generate the bundled simplicial complexes as JSON facet lists.

Products of ordered complexes use the staircase triangulation, which is a
triangulation of the product space for any total vertex order.
"""
import argparse
import itertools
import json
import pathlib


def staircase(a, b):
    """Maximal simplices of the product of two ordered simplices."""
    p, q = len(a) - 1, len(b) - 1
    out = []
    for moves in set(itertools.permutations([0] * p + [1] * q)):
        i = j = 0
        chain = [(a[0], b[0])]
        for m in moves:
            if m == 0:
                i += 1
            else:
                j += 1
            chain.append((a[i], b[j]))
        out.append(chain)
    return out


def product(facets_a, facets_b):
    verts = {}
    out = set()
    for fa in facets_a:
        for fb in facets_b:
            for chain in staircase(sorted(fa), sorted(fb)):
                ids = []
                for v in chain:
                    if v not in verts:
                        verts[v] = None
                    ids.append(v)
                out.add(tuple(ids))
    order = sorted({v for f in out for v in f})
    index = {v: i for i, v in enumerate(order)}
    return sorted(sorted(index[v] for v in f) for f in out)


INTERVAL = [[0, 1]]
CIRCLE = [[0, 1], [1, 2], [0, 2]]
TRIANGLE = [[0, 1, 2]]
SPHERE2 = [list(c) for c in itertools.combinations(range(4), 3)]
MOEBIUS = [[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 3, 4], [0, 1, 4]]

COMPLEXES = {
    "interval": {"facets": INTERVAL, "dim": 1, "orientable": True},
    "circle": {"facets": CIRCLE, "dim": 1, "orientable": True},
    "disk": {"facets": TRIANGLE, "dim": 2, "orientable": True},
    "annulus": {"facets": product(CIRCLE, INTERVAL), "dim": 2, "orientable": True},
    "moebius": {"facets": MOEBIUS, "dim": 2, "orientable": False},
    "torus": {"facets": product(CIRCLE, CIRCLE), "dim": 2, "orientable": True},
    "solid_torus": {"facets": product(TRIANGLE, CIRCLE), "dim": 3, "orientable": True},
    "s2_x_s1": {"facets": product(SPHERE2, CIRCLE), "dim": 3, "orientable": True},
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent
                                             / "data" / "complexes"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, spec in COMPLEXES.items():
        facets = ",\n    ".join(json.dumps(f) for f in spec["facets"])
        text = (f'{{\n  "name": {json.dumps(name)},\n  "dim": {spec["dim"]},\n'
                f'  "orientable": {json.dumps(spec["orientable"])},\n'
                f'  "facets": [\n    {facets}\n  ]\n}}\n')
        json.loads(text)
        (out / f"{name}.json").write_text(text)


if __name__ == "__main__":
    main()
