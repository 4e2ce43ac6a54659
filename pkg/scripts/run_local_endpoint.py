"""Serve an in-memory Oxigraph store over the SPARQL protocol until interrupted.

Queries go to /sparql and updates to /update. Optionally preloads a Turtle file.
"""
import argparse
import time

from shapefrag.endpoint import load_graph
from shapefrag.local_endpoint import LocalEndpoint
from shapefrag.turtle import parse_turtle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--port", type=int, default=7878)
    ap.add_argument("--load", help="Turtle file to load into the default graph")
    args = ap.parse_args()
    with LocalEndpoint(port=args.port) as ep:
        if args.load:
            with open(args.load, encoding="utf-8") as f:
                load_graph(ep.update_url, parse_turtle(f.read()))
        print(f"query endpoint:  {ep.query_url}")
        print(f"update endpoint: {ep.update_url}")
        try:
            while True:
                time.sleep(3600)
        except KeyboardInterrupt:
            pass


if __name__ == "__main__":
    main()
