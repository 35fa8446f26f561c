"""Walkthrough: the full loop, IR sources to a trained classifier.

Produces a labeled bundle corpus with the pg command line, then hands it
to the pgtrain package (see consumer/), which reads only the exported
files.  Skips gracefully if pgtrain is not installed.
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path


def arith(name, n):
    body = "\n".join(f"  %t{i} = {'add mul sub xor'.split()[i % 4]} i32 "
                     f"{'%a' if i == 0 else f'%t{i - 1}'}, %b" for i in range(n))
    return f"define i32 @{name}(i32 %a, i32 %b) {{\nentry:\n{body}\n  ret i32 %t{n - 1}\n}}\n"


def loopy(name, n):
    body = "\n".join(f"  %v{i} = load i32, i32* %acc\n"
                     f"  %s{i} = add i32 %v{i}, {i + 1}\n"
                     f"  store i32 %s{i}, i32* %acc" for i in range(n))
    return (f"define i32 @{name}(i32 %n) {{\nentry:\n  %acc = alloca i32\n"
            f"  store i32 0, i32* %acc\n  br label %loop\nloop:\n{body}\n"
            f"  %r = load i32, i32* %acc\n  ret i32 %r\n}}\n")


def main():
    if shutil.which("pgtrain") is None:
        print("pgtrain not installed; run: pip install -e consumer --no-build-isolation")
        return 0

    out = Path(__file__).with_name("out") / "train"
    src = out / "src"
    src.mkdir(parents=True, exist_ok=True)
    labels = {}
    for i in range(4):
        (src / f"arith{i}.ll").write_text(arith(f"fa{i}", 3 + i))
        (src / f"loopy{i}.ll").write_text(loopy(f"fm{i}", 2 + i))
        labels[f"arith{i}.bundle"] = 0
        labels[f"loopy{i}.bundle"] = 1
    (out / "labels.json").write_text(json.dumps(labels, indent=2))

    subprocess.run(["pg", "corpus", str(src), "-o", str(out / "bundles")], check=True)
    subprocess.run(["pgtrain", str(out / "bundles"), str(out / "labels.json"),
                    "-o", str(out / "metrics.json")], check=True)

    metrics = json.loads((out / "metrics.json").read_text())
    print(f"accuracy {metrics['train_accuracy']}, {metrics['epochs_run']} epochs, "
          f"hidden {metrics['hidden_dim']}, {metrics['conv_layers']} conv layers")
    return 0


if __name__ == "__main__":
    sys.exit(main())
