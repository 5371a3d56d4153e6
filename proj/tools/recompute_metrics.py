#!/usr/bin/env python3
"""Recompute TS/AS from episode traces and compare with the recorded values.

Usage: recompute_metrics.py TRACE_FILE [TRACE_FILE ...]
       recompute_metrics.py TRACE_DIR

TS is recomputed as the sum over agents of (last acting tick - first acting
tick + 1); AS as that span for the finisher. Exits 0 iff every file matches.
"""
import json
import os
import sys


def check(path):
    first = {}
    last = {}
    end = None
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            if "actions" in rec:
                for agent in rec["actions"]:
                    first.setdefault(agent, rec["tick"])
                    last[agent] = rec["tick"]
            elif "success" in rec:
                end = rec
    if end is None:
        return ["no end record"]
    ts = sum(last[a] - first[a] + 1 for a in first)
    errors = []
    if ts != end["ts"]:
        errors.append(f"ts: recomputed {ts} recorded {end['ts']}")
    if end["success"]:
        fin = str(end["finisher"])
        as_ = last[fin] - first[fin] + 1 if fin in first else -1
        if as_ != end["as"]:
            errors.append(f"as: recomputed {as_} recorded {end['as']}")
        final_tick = max(last.values())
        if final_tick + 1 != end["ticks_used"]:
            errors.append(
                f"ticks_used: final tick {final_tick} recorded {end['ticks_used']}")
    elif end["as"] != 0:
        errors.append(f"as: recorded {end['as']} on failed episode")
    return errors


def main(argv):
    paths = []
    for arg in argv:
        if os.path.isdir(arg):
            paths += sorted(
                os.path.join(arg, f) for f in os.listdir(arg) if f.endswith(".jsonl"))
        else:
            paths.append(arg)
    if not paths:
        print("no trace files given", file=sys.stderr)
        return 2
    bad = 0
    for path in paths:
        errors = check(path)
        if errors:
            bad += 1
            print(f"FAIL {path}: {'; '.join(errors)}")
        else:
            print(f"OK   {path}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
