"""Walkthrough: from IR text to a program graph.

Parses a small counter loop, builds the raw graph, then the transformed
one, and prints both so the duplicate-collapse behavior is visible.
"""

from pgraph import EdgeKind, NodeKind, build_base_graph, build_program_graph, parse_module

SOURCE = """\
define i32 @count(i32 %n) {
entry:
  %i = alloca i32
  store i32 0, i32* %i
  br label %loop
loop:
  %v = load i32, i32* %i
  %next = add nsw i32 %v, 1
  store i32 %next, i32* %i
  %done = icmp sge i32 %next, %n
  br i1 %done, label %exit, label %loop
exit:
  ret i32 %v
}
"""


def dump(graph, title):
    print(f"\n{title}  ({graph.node_count} nodes, {len(graph.edges)} edges)")
    for n in graph.node_ids():
        a = graph.attrs(n)
        ty = f" : {a.type_string}" if a.type_string else ""
        print(f"  n{n:<3} {graph.kind(n).value:<12} {a.full_text or a.text_token}{ty}")
    by_kind = {}
    for e in graph.edges:
        by_kind.setdefault(e.kind, []).append(e)
    for kind, edges in sorted(by_kind.items(), key=lambda kv: kv[0].value):
        pairs = " ".join(f"n{e.src}->n{e.dst}" for e in edges)
        print(f"  {kind.value:<12} {pairs}")


def main():
    module, diags = parse_module(SOURCE)
    print(f"parsed @{module.functions[0].name}: "
          f"{sum(len(b.instructions) for b in module.functions[0].blocks)} instructions, "
          f"{diags.skipped_instructions} skipped")

    base = build_base_graph(module)
    dump(base, "raw graph (one Variable node per use of %i)")

    full = build_program_graph(module)
    dump(full, "transformed graph (uses of %i share one node)")

    # the two store instructions now both point at the surviving %i node
    i_nodes = [n for n in full.node_ids()
               if full.kind(n) == NodeKind.VARIABLE and full.attrs(n).full_text == "i32* %i"]
    writes = [e for e in full.edges if e.kind == EdgeKind.STORE_MODIFY]
    print(f"\n%i appears as {len(i_nodes)} node; {len(writes)} write edges target it: "
          f"{all(e.dst == i_nodes[0] for e in writes)}")


if __name__ == "__main__":
    main()
