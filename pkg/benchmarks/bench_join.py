"""Compare the compiled and pure-Python join kernels.

Usage: python benchmarks/bench_join.py [--size N] [--repeat R]

Two workloads per backend: a raw three-pattern join over a random graph,
and the deductive closure of a transitivity rule over a chain.
"""

import argparse
import random
import time

from n3logic import kernels
from n3logic.engine import conclusion
from n3logic.model import Formula, Iri, Triple
from n3logic.parser import parse_document
from n3logic.store import TripleStore

EX = "http://example.org/#"


def random_store(n: int, seed: int = 0) -> TripleStore:
    rng = random.Random(seed)
    nodes = [Iri(f"{EX}n{i}") for i in range(max(2, n // 8))]
    preds = [Iri(f"{EX}p{i}") for i in range(4)]
    return TripleStore.from_triples(
        Triple(rng.choice(nodes), rng.choice(preds), rng.choice(nodes)) for _ in range(n)
    )


def raw_join(join, store: TripleStore) -> int:
    p0, p1, p2 = (store.lookup(Iri(f"{EX}p{i}")) for i in range(3))
    # ?a p0 ?b . ?b p1 ?c . ?c p2 ?a
    patterns = [(-1, p0, -2), (-2, p1, -3), (-3, p2, -1)]
    rows = join(patterns, 3, [-1, -1, -1], *store.kernel_args(), [0] * 3, [1 << 62] * 3)
    return len(rows)


def chain_closure(length: int) -> Formula:
    body = "".join(f":n{i} :next :n{i + 1} .\n" for i in range(length))
    return parse_document(
        f"@prefix : <{EX}> .\n{body}{{ ?x :next ?y . ?y :next ?z }} => {{ ?x :next ?z }} ."
    )


def timed(fn, repeat: int):
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=20000, help="triples in the random graph")
    ap.add_argument("--chain", type=int, default=60, help="length of the transitive chain")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    store = random_store(args.size)
    kb = chain_closure(args.chain)
    backends = kernels.available_backends()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(sorted(backends))}")
    print(f"{'backend':<8} {'workload':<28} {'seconds':>9} {'result':>9}")
    results = {}
    original = kernels.join
    try:
        for name, join in sorted(backends.items()):
            kernels.join = join
            t, rows = timed(lambda: raw_join(join, store), args.repeat)
            results[name, "join"] = t
            print(f"{name:<8} {f'triangle join, {args.size} triples':<28} {t:>9.4f} {rows:>9}")
            t, closed = timed(lambda: conclusion(kb), args.repeat)
            results[name, "closure"] = t
            print(f"{name:<8} {f'transitive chain, n={args.chain}':<28} {t:>9.4f} {len(closed):>9}")
    finally:
        kernels.join = original
    if "cython" in backends:
        for work in ("join", "closure"):
            print(f"speedup ({work}): {results['python', work] / results['cython', work]:.1f}x")


if __name__ == "__main__":
    main()
