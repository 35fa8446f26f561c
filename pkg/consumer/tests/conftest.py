"""Shared fixtures: corpora produced by the pg command line.

The producer is driven only through its public surface (the pg executable
and the files it writes), never imported by the package under test.
"""

import subprocess
from pathlib import Path

import pytest

COUNTER_LOOP = """\
define i32 @f() {
entry:
  %i = alloca i32
  store i32 0, i32* %i
  br label %loop
loop:
  %0 = load i32, i32* %i
  %1 = add nsw i32 %0, 1
  store i32 %1, i32* %i
  br label %loop
}
"""

GOLDENS = """\
define i32 @f(i32 %a) {
entry:
  %p = alloca i32
  store i32 1997, i32* %p
  %v = load i32, i32* %p
  %x = fadd float 2.5, 0x40091EB860000000
  %y = add i32 %v, 1997
  ret i32 %y
}
"""


def arith_module(name, n):
    lines = [f"define i32 @{name}(i32 %a, i32 %b) {{", "entry:"]
    prev = "%a"
    for i in range(n):
        op = ["add", "mul", "sub", "xor"][i % 4]
        lines.append(f"  %t{i} = {op} i32 {prev}, %b")
        prev = f"%t{i}"
    lines += [f"  ret i32 {prev}", "}"]
    return "\n".join(lines) + "\n"


def loopy_module(name, n):
    lines = [f"define i32 @{name}(i32 %n) {{", "entry:",
             "  %acc = alloca i32", "  %i = alloca i32",
             "  store i32 0, i32* %acc", "  store i32 0, i32* %i",
             "  br label %loop", "loop:"]
    for i in range(n):
        lines += [f"  %v{i} = load i32, i32* %acc",
                  f"  %s{i} = add i32 %v{i}, {i + 1}",
                  f"  store i32 %s{i}, i32* %acc"]
    lines += ["  %iv = load i32, i32* %i", "  %inext = add i32 %iv, 1",
              "  store i32 %inext, i32* %i",
              "  %done = icmp sge i32 %inext, %n",
              "  br i1 %done, label %exit, label %loop",
              "exit:", "  %r = load i32, i32* %acc", "  ret i32 %r", "}"]
    return "\n".join(lines) + "\n"


def build_corpus(root: Path, sources: dict[str, str]) -> Path:
    src = root / "src"
    src.mkdir(parents=True)
    for name, text in sources.items():
        (src / f"{name}.ll").write_text(text)
    out = root / "bundles"
    proc = subprocess.run(["pg", "corpus", str(src), "-o", str(out), "--jobs", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(scope="session")
def toy_corpus(tmp_path_factory) -> Path:
    """8 modules, two obviously different shapes: 4 straight-line
    arithmetic functions and 4 load/store counter loops."""
    sources = {}
    for i in range(4):
        sources[f"arith{i}"] = arith_module(f"fa{i}", 3 + i)
        sources[f"loopy{i}"] = loopy_module(f"fm{i}", 2 + i)
    return build_corpus(tmp_path_factory.mktemp("toy"), sources)


@pytest.fixture(scope="session")
def counter_corpus(tmp_path_factory) -> Path:
    return build_corpus(tmp_path_factory.mktemp("counter"), {"counter": COUNTER_LOOP})


@pytest.fixture(scope="session")
def goldens_corpus(tmp_path_factory) -> Path:
    return build_corpus(tmp_path_factory.mktemp("goldens"), {"goldens": GOLDENS})
