"""Fragment of a synthetic schema.org style graph under a five-definition schema.

Prints wall time, peak resident memory and fragment size. With --json the
same numbers are printed as one JSON object.
"""
import argparse
import json
import resource
import time

from shapefrag.conformance import validate
from shapefrag.fragments import frag_schema
from shapefrag.generators import offer_graph, offer_schema


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--triples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--validate", action="store_true", help="also validate and time it")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    g = offer_graph(args.triples, args.seed)
    h = offer_schema()
    t1 = time.perf_counter()
    result = frag_schema(g, h, threads=args.threads)
    t2 = time.perf_counter()
    stats = {
        "triples": len(g),
        "generate_seconds": round(t1 - t0, 3),
        "fragment_seconds": round(t2 - t1, 3),
        "fragment_triples": len(result.fragment),
        "conforming_pairs": len(result.conforming_nodes),
    }
    if args.validate:
        report = validate(h, g)
        stats["validate_seconds"] = round(time.perf_counter() - t2, 3)
        stats["violations"] = len(report.violations)
    # ru_maxrss is in kilobytes on Linux
    stats["peak_rss_mb"] = round(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024, 1)
    if args.json:
        print(json.dumps(stats, sort_keys=True))
    else:
        for k, v in stats.items():
            print(f"{k:>18}: {v}")


if __name__ == "__main__":
    main()
