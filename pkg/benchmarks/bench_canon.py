"""Compare the compiled and pure-Python canonical-labelling kernels.

Usage: python benchmarks/bench_canon.py [--repeat N]

Diagrams are random composites in the bread theory, grouped by box count.
Both kernels get the same flattened arrays and must return the same order.
"""

import argparse
import random
import sys
import timeit
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from ledgercat import _backend  # noqa: E402
from ledgercat.diagram import flatten, to_diagram  # noqa: E402
from ledgercat.terms import Par, Seq  # noqa: E402
from ledgercat.theory import typecheck  # noqa: E402
from tests.support import bread, random_term, random_word  # noqa: E402

TH = bread()


def sample(rng, target):
    """A random diagram with at least ``target`` boxes."""
    term, boxes = None, 0
    while boxes < target:
        chunk = random_term(rng, TH, random_word(rng, TH, 4, 2), 8)
        for _ in range(3):
            chunk = Seq(chunk, random_term(rng, TH, typecheck(chunk, TH)[1], 8))
        term = chunk if term is None else Par(term, chunk)
        boxes += len(to_diagram(chunk, TH).nodes)
    return to_diagram(term, TH)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--per-size", type=int, default=20)
    args = ap.parse_args()

    if _backend.BACKEND != "cython":
        print("compiled kernel not built; only the pure-Python kernel is available")
    rng = random.Random(0)
    print(f"{'boxes':>6} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for size in (10, 40, 160, 640):
        arrays = [flatten(sample(rng, size)) for _ in range(args.per_size)]
        for a in arrays:
            assert _backend.canonical_order(*a) == _backend.python_canonical_order(*a)

        def run(fn):
            return min(timeit.repeat(lambda: [fn(*a) for a in arrays], number=1, repeat=args.repeat))

        py = run(_backend.python_canonical_order) / len(arrays) * 1e3
        cy = run(_backend.canonical_order) / len(arrays) * 1e3
        print(f"{size:>6} {py:>10.3f} {cy:>12.3f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
