"""Seeded generator of small, strict-parseable IR modules.

Pure function of the seed, so property tests and corpus fixtures are
reproducible byte-for-byte.  Uses only named values/labels to stay clear
of the unnamed-slot numbering rules.
"""

import random

_SCALAR_ARRAYS = ["[4 x i32]", "[2 x [3 x i32]]", "[2 x [3 x [4 x float]]]", "[8 x float]"]
_INT_CONSTS = ["0", "1", "2", "7", "13", "42", "100", "1997", "-5", "65536"]
_FLOAT_CONSTS = ["0.000000e+00", "1.000000e+00", "2.500000e+00", "-3.125000e-01", "0x4004000000000000"]


class _FnState:
    def __init__(self, name, rng):
        self.name = name
        self.rng = rng
        self.counter = 0
        self.ints = []       # i32 ssa names
        self.floats = []     # float ssa names
        self.bools = []      # i1 ssa names
        self.int_ptrs = []   # i32* ssa names
        self.arr_ptrs = []   # (name, array type string)

    def fresh(self):
        name = f"t{self.counter}"
        self.counter += 1
        return name

    def int_value(self):
        if self.ints and self.rng.random() < 0.6:
            return f"%{self.rng.choice(self.ints)}"
        return self.rng.choice(_INT_CONSTS)

    def float_value(self):
        if self.floats and self.rng.random() < 0.6:
            return f"%{self.rng.choice(self.floats)}"
        return self.rng.choice(_FLOAT_CONSTS)


def _gen_instruction(st, lines, globals_pool, callables):
    rng = st.rng
    choices = ["alloca", "arith", "icmp"]
    if st.int_ptrs or globals_pool:
        choices += ["store", "store", "load", "load"]
    if st.arr_ptrs:
        choices.append("gep")
    if st.floats or rng.random() < 0.3:
        choices.append("fmath")
    if st.ints:
        choices.append("cast")
    if callables:
        choices.append("call")
    kind = rng.choice(choices)

    if kind == "alloca":
        name = st.fresh()
        if rng.random() < 0.5:
            ty = rng.choice(_SCALAR_ARRAYS)
            lines.append(f"  %{name} = alloca {ty}, align 16")
            st.arr_ptrs.append((name, ty))
        else:
            lines.append(f"  %{name} = alloca i32, align 4")
            st.int_ptrs.append(name)
    elif kind == "store":
        targets = [f"%{p}" for p in st.int_ptrs] + [f"@{g}" for g in globals_pool]
        lines.append(f"  store i32 {st.int_value()}, i32* {rng.choice(targets)}, align 4")
    elif kind == "load":
        targets = [f"%{p}" for p in st.int_ptrs] + [f"@{g}" for g in globals_pool]
        name = st.fresh()
        lines.append(f"  %{name} = load i32, i32* {rng.choice(targets)}, align 4")
        st.ints.append(name)
    elif kind == "gep":
        base, ty = rng.choice(st.arr_ptrs)
        depth = ty.count("[")
        idx = ", ".join(f"i64 {rng.randint(0, 1)}" for _ in range(depth + 1))
        name = st.fresh()
        lines.append(f"  %{name} = getelementptr inbounds {ty}, {ty}* %{base}, {idx}")
        if "float" in ty:
            lines.append(f"  store float {st.float_value()}, float* %{name}, align 4")
        else:
            st.int_ptrs.append(name)
    elif kind == "arith":
        op = rng.choice(["add", "sub", "mul", "and", "or", "xor", "shl"])
        nsw = "nsw " if op in ("add", "sub", "mul") and rng.random() < 0.5 else ""
        name = st.fresh()
        lines.append(f"  %{name} = {op} {nsw}i32 {st.int_value()}, {st.int_value()}")
        st.ints.append(name)
    elif kind == "icmp":
        pred = rng.choice(["eq", "ne", "slt", "sgt", "ule"])
        name = st.fresh()
        lines.append(f"  %{name} = icmp {pred} i32 {st.int_value()}, {st.int_value()}")
        st.bools.append(name)
    elif kind == "fmath":
        op = rng.choice(["fadd", "fsub", "fmul"])
        name = st.fresh()
        lines.append(f"  %{name} = {op} float {st.float_value()}, {st.float_value()}")
        st.floats.append(name)
    elif kind == "cast":
        name = st.fresh()
        if rng.random() < 0.5:
            lines.append(f"  %{name} = sitofp i32 %{rng.choice(st.ints)} to float")
            st.floats.append(name)
        else:
            lines.append(f"  %{name} = mul i32 %{rng.choice(st.ints)}, 3")
            st.ints.append(name)
    elif kind == "call":
        callee, arity = rng.choice(callables)
        args = ", ".join(f"i32 {st.int_value()}" for _ in range(arity))
        name = st.fresh()
        lines.append(f"  %{name} = call i32 @{callee}({args})")
        st.ints.append(name)


def _gen_function(name, rng, n_params, globals_pool, callables):
    st = _FnState(name, rng)
    params = []
    for i in range(n_params):
        pname = f"p{i}"
        params.append(f"i32 %{pname}")
        st.ints.append(pname)
    n_blocks = rng.randint(1, 3)
    labels = ["entry"] + [f"b{i}" for i in range(1, n_blocks)]
    lines = [f"define i32 @{name}({', '.join(params)}) {{"]
    for bi, label in enumerate(labels):
        lines.append(f"{label}:")
        for _ in range(rng.randint(1, 5)):
            _gen_instruction(st, lines, globals_pool, callables)
        last = bi == len(labels) - 1
        if not last:
            nxt = labels[bi + 1]
            if st.bools and rng.random() < 0.5:
                other = rng.choice(labels[bi + 1:])
                lines.append(f"  br i1 %{rng.choice(st.bools)}, label %{nxt}, label %{other}")
            elif rng.random() < 0.15:
                cases = f"    i32 0, label %{nxt}\n    i32 1, label %{rng.choice(labels[bi + 1:])}"
                lines.append(f"  switch i32 {st.int_value()}, label %{nxt} [\n{cases}\n  ]")
            else:
                lines.append(f"  br label %{nxt}")
        else:
            lines.append(f"  ret i32 {st.int_value()}")
    lines.append("}")
    return "\n".join(lines)


def random_module_text(seed: int) -> str:
    rng = random.Random(seed)
    parts = []
    globals_pool = []
    if rng.random() < 0.4:
        gname = f"g{seed % 1000}"
        parts.append(f"@{gname} = dso_local global i32 {rng.choice(_INT_CONSTS)}, align 4")
        globals_pool.append(gname)
    callables = []
    if rng.random() < 0.3:
        parts.append("declare i32 @extfn(i32)")
        callables.append(("extfn", 1))
    n_funcs = rng.randint(1, 2)
    names = [f"fn{i}" for i in range(n_funcs)]
    for name in names:
        # functions may call previously generated ones or the declaration
        n_params = rng.randint(0, 2)
        parts.append(_gen_function(name, rng, n_params, globals_pool, callables))
        callables.append((name, n_params))
    return "\n\n".join(parts) + "\n"


def count_stores(text: str) -> int:
    return sum(1 for line in text.splitlines() if line.lstrip().startswith("store "))
