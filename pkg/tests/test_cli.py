"""Command-line interface: exit codes, outputs, determinism, precedence."""

import json
from pathlib import Path

import pytest

from pgraph.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, main
from pgraph.embedding import Aggregation, EmbeddingTable, embed_number
from pgraph.export import from_json
from pgraph.graph import NodeKind

from modgen import random_module_text

FIXTURES = Path(__file__).parent / "fixtures"

IPP = (FIXTURES / "ipp.ll").read_text()

BROKEN = """
define void @f() {
entry:
  %v = frobnicate i32 1
  ret void
}
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def load_graph(path):
    return from_json(Path(path).read_bytes())


def kind_count(g, kind):
    return sum(1 for n in g.node_ids() if g.kind(n) == kind)


# --- build ---


def test_build_writes_graph(tmp_path):
    src = write(tmp_path, "ipp.ll", IPP)
    out = tmp_path / "out"
    assert main(["build", str(src), "-o", str(out)]) == EXIT_OK
    g = load_graph(out / "ipp.pg.json")
    names = [g.attrs(n).full_text for n in g.node_ids()
             if g.kind(n) == NodeKind.VARIABLE and g.attrs(n).full_text == "i32* %i"]
    assert len(names) == 1  # unified by default


def test_build_defaults_to_source_dir(tmp_path):
    src = write(tmp_path, "ipp.ll", IPP)
    assert main(["build", str(src)]) == EXIT_OK
    assert (tmp_path / "ipp.pg.json").exists()


def test_build_listing_has_three_dims(tmp_path):
    out = tmp_path / "out"
    assert main(["build", str(FIXTURES / "listing1.ll"), "-o", str(out)]) == EXIT_OK
    g = load_graph(out / "listing1.pg.json")
    assert kind_count(g, NodeKind.AGGREGATE_DIM) == 3


def test_build_no_aggregate(tmp_path):
    out = tmp_path / "out"
    assert main(["build", str(FIXTURES / "listing1.ll"), "-o", str(out), "--no-aggregate"]) == EXIT_OK
    g = load_graph(out / "listing1.pg.json")
    assert kind_count(g, NodeKind.AGGREGATE_DIM) == 0


def test_build_no_unify_keeps_duplicates(tmp_path):
    src = write(tmp_path, "ipp.ll", IPP)
    out = tmp_path / "out"
    assert main(["build", str(src), "-o", str(out), "--no-unify", "--no-store-edges"]) == EXIT_OK
    g = load_graph(out / "ipp.pg.json")
    dups = [n for n in g.node_ids() if g.attrs(n).full_text == "i32* %i"]
    assert len(dups) == 4


def test_build_store_edges_require_unify(tmp_path):
    src = write(tmp_path, "ipp.ll", IPP)
    assert main(["build", str(src), "--no-unify"]) == EXIT_IO  # usage error


def test_build_dot_output(tmp_path):
    src = write(tmp_path, "ipp.ll", IPP)
    out = tmp_path / "out"
    assert main(["build", str(src), "-o", str(out), "--dot"]) == EXIT_OK
    text = (out / "ipp.dot").read_text()
    assert text.startswith("digraph")
    assert "dashed" in text


def test_build_parse_failure_exit_1(tmp_path, capsys):
    src = write(tmp_path, "garbage.ll", "this is not IR {{{")
    assert main(["build", str(src)]) == EXIT_FAIL
    assert capsys.readouterr().err


def test_build_unknown_opcode_strict_vs_lenient(tmp_path):
    src = write(tmp_path, "odd.ll", BROKEN)
    out = tmp_path / "out"
    assert main(["build", str(src), "-o", str(out)]) == EXIT_FAIL
    assert main(["build", str(src), "-o", str(out), "--lenient"]) == EXIT_OK


def test_build_missing_input_exit_2(tmp_path):
    assert main(["build", str(tmp_path / "nope.ll")]) == EXIT_IO


# --- corpus ---


def make_corpus(tmp_path, n=3):
    indir = tmp_path / "corpus"
    indir.mkdir()
    for seed in range(n):
        write(indir, f"mod{seed:03}.ll", random_module_text(seed))
    return indir


def test_corpus_happy_path(tmp_path):
    indir = make_corpus(tmp_path, 3)
    out = tmp_path / "out"
    assert main(["corpus", str(indir), "-o", str(out)]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert [f["status"] for f in manifest["files"]] == ["ok", "ok", "ok"]
    assert (out / "vocab.json").exists()
    for entry in manifest["files"]:
        g = load_graph(out / entry["graph"])
        assert g.node_count == entry["nodes"]
        bundle_dir = out / entry["bundle"]
        assert (bundle_dir / "manifest.json").exists()


def test_corpus_keep_going_records_failure(tmp_path):
    indir = make_corpus(tmp_path, 2)
    write(indir, "zzz-broken.ll", BROKEN)
    out = tmp_path / "out"
    assert main(["corpus", str(indir), "-o", str(out)]) == EXIT_FAIL
    assert main(["corpus", str(indir), "-o", str(out), "--keep-going"]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    statuses = {f["file"]: f["status"] for f in manifest["files"]}
    assert statuses["zzz-broken.ll"] == "error"
    assert sum(1 for s in statuses.values() if s == "ok") == 2
    assert "error" in manifest["files"][-1]


def test_corpus_all_broken_fails(tmp_path):
    indir = tmp_path / "corpus"
    indir.mkdir()
    write(indir, "a.ll", BROKEN)
    write(indir, "b.ll", "nonsense ((")
    out = tmp_path / "out"
    assert main(["corpus", str(indir), "-o", str(out), "--keep-going"]) == EXIT_FAIL


def test_corpus_empty_dir_fails(tmp_path):
    indir = tmp_path / "corpus"
    indir.mkdir()
    assert main(["corpus", str(indir), "-o", str(tmp_path / "out")]) == EXIT_FAIL


def test_corpus_missing_dir_is_io_error(tmp_path):
    assert main(["corpus", str(tmp_path / "nope"), "-o", str(tmp_path / "out")]) == EXIT_IO


def tree_bytes(root):
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(Path(root).rglob("*"))
        if p.is_file()
    }


def test_corpus_reruns_byte_identical_across_job_counts(tmp_path):
    indir = make_corpus(tmp_path, 4)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["corpus", str(indir), "-o", str(out1), "--jobs", "1", "--dot"]) == EXIT_OK
    assert main(["corpus", str(indir), "-o", str(out2), "--jobs", "3", "--dot"]) == EXIT_OK
    assert tree_bytes(out1) == tree_bytes(out2)


# --- stats ---


def test_stats_json(tmp_path, capsys):
    src = write(tmp_path, "ipp.ll", IPP)
    assert main(["build", str(src), "-o", str(tmp_path)]) == EXIT_OK
    capsys.readouterr()
    assert main(["stats", str(tmp_path / "ipp.pg.json"), "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["nodes"]["Instruction"] == 6
    assert doc["edges"]["StoreModify"] == 2


def test_stats_table(tmp_path, capsys):
    src = write(tmp_path, "ipp.ll", IPP)
    main(["build", str(src), "-o", str(tmp_path)])
    capsys.readouterr()
    assert main(["stats", str(tmp_path / "ipp.pg.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Instruction" in out and "StoreModify" in out


def test_stats_bad_file(tmp_path):
    bad = write(tmp_path, "bad.pg.json", "{not json")
    assert main(["stats", str(bad)]) == EXIT_FAIL
    assert main(["stats", str(tmp_path / "missing.pg.json")]) == EXIT_IO


# --- embed ---


def test_embed_prints_k_numbers(capsys):
    assert main(["embed", "--number", "1997", "--k", "3"]) == EXIT_OK
    values = [float(x) for x in capsys.readouterr().out.split()]
    assert len(values) == 3


def test_embed_matches_library(capsys):
    assert main(["embed", "--number", "1997", "--k", "5", "--seed", "7", "--agg", "sum"]) == EXIT_OK
    values = [float(x) for x in capsys.readouterr().out.split()]
    table = EmbeddingTable.minimal(seed=7, k=5)
    expected = embed_number("1997", table, Aggregation.SUM)
    assert values == list(expected)


def test_embed_non_numeric_exit_1(capsys):
    assert main(["embed", "--number", "xyz"]) == EXIT_FAIL
    assert capsys.readouterr().err


def test_embed_env_precedence(monkeypatch, capsys):
    monkeypatch.setenv("PG_EMBED_DIM", "4")
    monkeypatch.setenv("PG_SEED", "99")
    assert main(["embed", "--number", "5"]) == EXIT_OK
    values = [float(x) for x in capsys.readouterr().out.split()]
    assert len(values) == 4
    table = EmbeddingTable.minimal(seed=99, k=4)
    assert values == list(embed_number("5", table, Aggregation.MEAN))
    # flags beat env
    assert main(["embed", "--number", "5", "--k", "2", "--seed", "1"]) == EXIT_OK
    values = [float(x) for x in capsys.readouterr().out.split()]
    table = EmbeddingTable.minimal(seed=1, k=2)
    assert values == list(embed_number("5", table, Aggregation.MEAN))


def test_embed_invalid_env_is_io_error(monkeypatch, capsys):
    monkeypatch.setenv("PG_SEED", "banana")
    assert main(["embed", "--number", "5"]) == EXIT_IO
    assert capsys.readouterr().err


def test_unknown_subcommand_exit_2():
    assert main(["frobnicate"]) == EXIT_IO


def test_corpus_requires_output_flag(tmp_path):
    indir = make_corpus(tmp_path, 1)
    assert main(["corpus", str(indir)]) == EXIT_IO
