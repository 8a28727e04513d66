#!/usr/bin/env python3
"""Runs the CLI on the fixtures, validates every JSON report against the
schema and checks exit codes and a few values.

    cli_reports.py <tbnet> <report.schema.json> <data dir>
"""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path, data = sys.argv[1:4]
with open(schema_path) as f:
    validator = jsonschema.Draft202012Validator(json.load(f))

failures = []


def run(*args, code=0, stdin=None):
    proc = subprocess.run([cli, *args], capture_output=True, text=True, input=stdin)
    if proc.returncode != code:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, wanted {code}\n{proc.stderr}")
    return proc


def report(*args, code=0, stdin=None):
    proc = run(*args, "--json", code=code, stdin=stdin)
    try:
        doc = json.loads(proc.stdout)
    except json.JSONDecodeError as e:
        failures.append(f"{' '.join(args)}: not JSON ({e})")
        return {}
    for err in validator.iter_errors(doc):
        failures.append(f"{' '.join(args)}: schema: {err.message} at {list(err.absolute_path)}")
    return doc.get("result", {})


def expect(label, got, want):
    if got != want:
        failures.append(f"{label}: got {got!r}, wanted {want!r}")


def fixture(name):
    return os.path.join(data, name)


one_leaf = fixture("one_leaf.edges")
tree_based = fixture("tree_based.edges")
linked = fixture("linked_not_tree_based.edges")

r = report("check", tree_based)
expect("check tree-based", (r.get("tree_based"), r.get("certificate", {}).get("type")), (True, "base_tree"))
r = report("check", linked, code=1)
expect("check counterexample", (r.get("tree_based"), r.get("certificate", {}).get("type")), (False, "rr_path"))
r = report("check", fixture("one_leaf.nwk"), code=1)
expect("check one-leaf eNewick", r.get("certificate", {}).get("reticulations"), ["f"])

proc = run("check", fixture("malformed.nwk"), code=2)
if "unbalanced" not in proc.stderr:
    failures.append(f"malformed input: stderr lacks location message: {proc.stderr!r}")
run("check", fixture("does_not_exist.edges"), code=2)
run("check", "-", "--format", "edgelist", code=2, stdin="r a\n")  # root with one child

expect("indices", report("indices", one_leaf), {"l": 1, "p": 1, "t": 1, "u_gn": 2, "x_size": 1, "d": 2})
expect("indices via stdin", report("indices", "-", "--format", "edgelist",
                                   stdin=open(one_leaf).read()).get("p"), 1)
expect("paths count", report("paths", one_leaf).get("count"), 2)
expect("spanning-tree l", report("spanning-tree", one_leaf).get("l"), 1)

expect("complete tree", report("complete", fixture("tree5.nwk")).get("attachments"), 0)
with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "completed.nwk")
    r = report("complete", one_leaf, "--out", out)
    expect("complete one-leaf", r.get("attachments"), 1)
    if not os.path.exists(out):
        failures.append("complete --out wrote nothing")
    else:
        expect("completed network is tree-based", report("check", out).get("tree_based"), True)

    dot = os.path.join(tmp, "paths.dot")
    run("paths", one_leaf, "--dot", dot)
    if not os.path.exists(dot) or not open(dot).read().startswith("digraph"):
        failures.append("paths --dot did not write a DOT file")

    gen_file = os.path.join(tmp, "g.edges")
    run("gen", "--leaves", "4", "--retics", "3", "--seed", "11", "--out", gen_file, "--format", "edgelist")
    expect("generated file parses", report("indices", gen_file).get("x_size"), 4)

r = report("antichain", linked, "--max")
expect("max antichain", r.get("size"), 3)
r = report("antichain", linked, "--check-property")
expect("property on counterexample", r.get("holds"), True)
r = report("antichain", one_leaf, "--check-property", code=1)
expect("property on one-leaf", (r.get("holds"), r.get("violating")), (False, ["d", "e"]))
r = report("antichain", one_leaf, "--set", "d,e", code=1)
expect("set d,e", r.get("linked"), False)
r = report("antichain", tree_based, "--set", "x1,x2")
expect("set x1,x2", r.get("linked"), True)
run("antichain", one_leaf, "--set", "a,x", code=2)  # not an antichain

expect("temporal one-leaf", report("temporal", one_leaf).get("temporal"), True)
expect("temporal counterexample", report("temporal", linked, code=1).get("temporal"), False)

a = report("gen", "--leaves", "3", "--retics", "1", "--seed", "7")
b = report("gen", "--leaves", "3", "--retics", "1", "--seed", "7")
expect("gen deterministic", a.get("text"), b.get("text"))
expect("gen size", a.get("network", {}).get("vertices"), 7)
r = report("gen", "--leaves", "3", "--retics", "2", "--seed", "5", "--temporal")
expect("gen temporal", r.get("network", {}).get("reticulations"), 2)

r = report("bench", "--leaves", "20", "--retics", "20", "--repeat", "1")
expect("bench runs", len(r.get("runs", [])), 1)

for f in failures:
    print("FAIL:", f)
print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
