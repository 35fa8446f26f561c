"""Walkthrough: the pg command line, end to end.

Drives every subcommand against throwaway inputs under demos/out/ and
echoes what each call produced.
"""

import json
import subprocess
from pathlib import Path

SOURCE = """\
define i32 @twice(i32 %x) {
entry:
  %r = add i32 %x, %x
  ret i32 %r
}
"""


def run(*args):
    cmd = ["pg", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    print(f"$ {' '.join(cmd)}  (exit {proc.returncode})")
    for line in (proc.stdout + proc.stderr).splitlines():
        print(f"  {line}")
    return proc


def main():
    out = Path(__file__).with_name("out") / "cli"
    src = out / "src"
    src.mkdir(parents=True, exist_ok=True)
    (src / "twice.ll").write_text(SOURCE)
    (src / "thrice.ll").write_text(SOURCE.replace("@twice", "@thrice"))

    run("build", str(src / "twice.ll"), "-o", str(out / "single"), "--dot")
    run("stats", str(out / "single" / "twice.pg.json"), "--json")
    run("corpus", str(src), "-o", str(out / "bundles"), "--jobs", "2")
    run("embed", "--number", "1997", "--k", "4")

    manifest = json.loads((out / "bundles" / "manifest.json").read_text())
    names = [Path(f["file"]).name for f in manifest["files"]]
    print(f"\nmanifest lists {len(names)} files: {', '.join(sorted(names))}")


if __name__ == "__main__":
    main()
