def _q(s):
    return '"{}"'.format(str(s).replace('"', r"\""))


def to_dot(name, states, initials, finals, edges):
    """Render a labelled graph; ``edges`` is an iterable of ``(src, label, dst)``."""
    out = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for st in states:
        shape = "doublecircle" if st in finals else "circle"
        out.append(f"  {_q(st)} [shape={shape}];")
    for i, st in enumerate(initials):
        out.append(f"  __start{i} [shape=point];")
        out.append(f"  __start{i} -> {_q(st)};")
    for src, label, dst in edges:
        out.append(f"  {_q(src)} -> {_q(dst)} [label={_q(label)}];")
    out.append("}")
    return "\n".join(out) + "\n"
