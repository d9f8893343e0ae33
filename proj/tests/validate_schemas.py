#!/usr/bin/env python3
"""Run every JSON-emitting subcommand and validate its output against docs/."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli = sys.argv[1]
docs = pathlib.Path(sys.argv[2])


def run(*args):
    out = subprocess.run([cli, *args], check=True, capture_output=True, text=True).stdout
    return json.loads(out)


def check(schema_name, doc):
    schema = json.loads((docs / f"{schema_name}.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)
    print(f"ok {schema_name}")


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    graph = tmp / "g.txt"
    tree = tmp / "t.txt"
    init = tmp / "p.txt"
    tree_init = tmp / "tp.txt"
    tree_init.write_text("0 1\n3 0.5\n")
    subprocess.run([cli, "gen", "--family", "random_regular", "--nodes", "12", "--degree", "3",
                    "--b", "uniform:0:0.5", "--seed", "4", "--out", str(graph),
                    "--init-out", str(init), "--seed-count", "2"], check=True)
    subprocess.run([cli, "gen", "--family", "random_tree", "--nodes", "9", "--out", str(tree)], check=True)
    g = ["--graph", str(graph), "--init", str(init)]

    check("estimate", run("estimate", *g, "--horizon", "3"))
    check("estimate", run("estimate", *g, "--horizon", "3", "--trajectory"))
    check("estimate", run("lt-estimate", "--graph", str(tree), "--init", str(tree_init), "--horizon", "3"))
    check("estimate_inf", run("estimate-inf", *g))
    check("mc", run("mc", *g, "--horizon", "3", "--runs", "200"))
    check("mc", run("mc", *g, "--inf", "--runs", "200"))
    check("mc", run("mc", "--graph", str(tree), "--init", str(tree_init), "--model", "lt", "--horizon", "2",
                    "--runs", "200"))
    check("oracle", run("oracle", "--graph", str(tree), "--init", str(tree_init), "--horizon", "2", "--messages"))
    check("oracle", run("oracle", "--graph", str(tree), "--init", str(tree_init), "--inf"))
    check("compare", run("compare", *g, "--horizon", "3", "--runs", "200"))
    check("certify", run("certify", "--graph", str(graph), "--horizon", "2"))
    check("certify", run("certify", "--graph", str(tree), "--inf"))
    check("bracket", run("bracket", *g, "--horizon", "3"))
    check("bracket", run("bracket", *g, "--inf", "--tree-strategy", "random", "--tree-seed", "3"))
    check("bench", run("bench", "--sizes", "200,400", "--repetitions", "1"))
    check("accuracy", run("accuracy", "--nodes", "100", "--runs", "100", "--repetitions", "1"))
