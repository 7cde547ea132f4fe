"""Smoke tests for the python bindings: one BFS per variant, codec round
trips, and report plumbing."""

import json
import os
import sys
import tempfile

import bfsim


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    cfg = bfsim.GraphConfig(scale=8, edgefactor=8, seed=11)
    check(cfg.num_vertices == 256, "vertex count")
    check(cfg.num_edges == 2048, "edge count")

    runs = {}
    for alg in ("bit", "wah", "dir-wah"):
        runs[alg] = bfsim.run_bfs(cfg, alg=alg, ranks=4, source=3, codec="wah:64")
        check(runs[alg]["valid"], f"{alg} validation")
        check(runs[alg]["errors"] == [], f"{alg} error list")

    base = runs["bit"]
    for alg in ("wah", "dir-wah"):
        check(runs[alg]["parents"] == base["parents"], f"{alg} parents differ")
        check(runs[alg]["levels"] == base["levels"], f"{alg} levels differ")
    check(base["levels"][3] == 0, "source level")
    check(base["parents"][3] == 3, "source parent")

    report = json.loads(base["report_json"])
    for key in ("config", "per_level", "totals", "validation"):
        check(key in report, f"report key {key}")
    check(report["totals"]["d"] == base["d"], "report depth")
    rows = report["per_level"]
    check(all(r["bytes"]["raw"] == rows[0]["bytes"]["raw"] for r in rows),
          "raw bitmap column constant")
    check(all(r["bytes"]["sparse"] == 8 * r["frontier_count"] for r in rows),
          "sparse bytes track the frontier count")

    # codec round trip over the wire format
    bitmap = bfsim.Bitmap(1000)
    for k in (0, 3, 5, 977):
        bitmap.set_bit(k)
    for codec in ("raw", "wah:64", "wah:4", "sparse", "rle"):
        blob = bfsim.encode_message(codec, bitmap)
        back = bfsim.decode_message(blob)
        check(back == bitmap, f"{codec} round trip")
        check(len(blob) == bfsim.encoded_size(codec, bitmap), f"{codec} size")
    check(bitmap.set_positions() == [0, 3, 5, 977], "set positions")

    # graph generation is deterministic and file io round-trips
    edges = bfsim.generate_kronecker(cfg)
    check(len(edges) == 2048, "tuple count")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "g.kronel")
        bfsim.write_edge_list(path, edges)
        back = bfsim.read_edge_list(path)
        check(back.num_vertices == edges.num_vertices, "file vertex count")
        check(len(back) == len(edges), "file tuple count")
        check(back.edge(0) == edges.edge(0), "file first tuple")

    csr = bfsim.build_csr(edges, edges.num_vertices)
    check(csr.n == 256, "csr size")
    check(csr.entry_count() > 0, "csr entries")

    try:
        bfsim.decode_message(b"\x09bogus")
        check(False, "bad message accepted")
    except bfsim.DecodeError:
        pass

    print("python smoke tests passed")


if __name__ == "__main__":
    main()
