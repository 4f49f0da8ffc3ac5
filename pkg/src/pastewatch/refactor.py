"""Extract Method back end: def-use analysis over the subset grammar,
extractability checking, and the source transformation with call-site
replacement.

The subset grammar has no aliasing, so def-use reduces to a forward scan
of declarations, writes, and reads in source order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clones import EXACT, CloneMatch
from .errors import NameCollision, NotExtractable, ParseError, StaleSpans
from .syntax import Fragment, SourceFile, parse, token_bag
from .syntax.nodes import Node

MULTIPLE_LIVE_OUT = "MultipleLiveOut"
ILLEGAL_JUMP = "IllegalJump"
CONTAINS_RETURN = "ContainsReturn"

INDENT_UNIT = "    "


@dataclass(frozen=True)
class DataFlowFacts:
    params_in: tuple  # (name, type) in first-use order
    live_out: tuple  # (name, type)
    illegal_jumps: tuple  # boundary-crossing break/continue nodes
    returns: tuple  # return statements inside the fragment


@dataclass(frozen=True)
class RefactoringPlan:
    new_method_name: str
    parameters: tuple  # (name, type)
    return_var: tuple | None  # (name, type)
    new_method_text: str
    call_text: str
    replacement_sites: tuple  # (start, end, expected_text)
    enclosing_method_end: int
    insertion_indent: str


def _var_events(method: Node):
    """(kind, name, pos, type) events over the method, source order.
    kind is one of decl/read/write/rw. Only local variables and
    parameters participate; field names that are never declared as
    locals are ignored."""
    events = []
    for pname, ptype in method.attrs["params"]:
        events.append(("decl", pname, method.start, ptype))

    body = method.attrs["body"]
    for n in body.walk():
        if n.kind in ("LocalVarDecl", "ForInitDecl"):
            for name, vtype, init, tok in n.attrs["decls"]:
                events.append(("decl", name, tok.start, vtype))
                if init is not None:
                    events.append(("write", name, tok.start, None))
        elif n.kind == "CatchClause":
            pname, ptype = n.attrs["param"]
            events.append(("decl", pname, n.start, ptype))
            events.append(("write", pname, n.start, None))
        elif n.kind == "Assign":
            target = n.attrs["target"]
            if target.kind == "Name":
                kind = "write" if n.attrs["op"] == "=" else "rw"
                events.append((kind, target.attrs["name"], target.start, None))
        elif n.kind in ("Unary", "Postfix") and n.attrs["op"] in ("++", "--"):
            operand = n.attrs["operand"]
            if operand.kind == "Name":
                events.append(("rw", operand.attrs["name"], operand.start,
                               None))
        elif n.kind == "Name":
            events.append(("read", n.attrs["name"], n.start, None))
        elif n.kind == "Call" and n.attrs["target"] is None:
            callee = n.children[0]
            events.append(("skipread", n.attrs["name"], callee.start, None))

    # remove reads that are really assignment targets or bare-call callees
    write_positions = {(name, pos) for k, name, pos, _ in events
                       if k in ("write", "rw")}
    skip_positions = {(name, pos) for k, name, pos, _ in events
                      if k == "skipread"}
    cleaned = []
    for k, name, pos, t in events:
        if k == "skipread":
            continue
        if k == "read" and ((name, pos) in write_positions
                            or (name, pos) in skip_positions):
            continue
        cleaned.append((k, name, pos, t))
    cleaned.sort(key=lambda e: e[2])
    return cleaned


def _jump_targets(fragment: Fragment):
    """break/continue nodes in the fragment whose loop or switch is
    outside it, plus return statements inside it."""
    illegal = []
    returns = []

    def walk(stmt, loops, switches):
        k = stmt.kind
        if k == "Break":
            if loops == 0 and switches == 0:
                illegal.append(stmt)
            return
        if k == "Continue":
            if loops == 0:
                illegal.append(stmt)
            return
        if k == "Return":
            returns.append(stmt)
            return
        in_loop = k in ("For", "While", "DoWhile")
        in_switch = k == "Switch"
        for child in stmt.children:
            if isinstance(child, Node):
                for inner in _immediate_statements(child):
                    walk(inner, loops + (1 if in_loop else 0),
                         switches + (1 if in_switch else 0))

    for s in fragment.statements:
        walk(s, 0, 0)
    return tuple(illegal), tuple(returns)


def _immediate_statements(node):
    """Statement nodes reachable from node without descending into a
    nested statement."""
    from .syntax.nodes import STATEMENT_KINDS
    if node.kind in STATEMENT_KINDS:
        return [node]
    out = []
    for child in node.children:
        if isinstance(child, Node):
            out.extend(_immediate_statements(child))
    return out


def analyze_dataflow(fragment: Fragment, method: Node) -> DataFlowFacts:
    events = _var_events(method)
    start, end = fragment.span
    types = {}
    decl_pos = {}
    for k, name, pos, t in events:
        if k == "decl" and name not in decl_pos:
            decl_pos[name] = pos
            types[name] = t

    params_in = []
    frag_declared = set()
    frag_written = set()
    first_frag_event = {}
    read_after = set()
    for k, name, pos, t in events:
        if name not in decl_pos:
            continue  # a field or unknown name, not a local
        if start <= pos < end:
            if k == "decl":
                frag_declared.add(name)
            if k in ("write", "rw"):
                frag_written.add(name)
            if name not in first_frag_event:
                first_frag_event[name] = (k, pos)
        elif pos >= end and k in ("read", "rw"):
            read_after.add(name)

    for name, (k, pos) in sorted(first_frag_event.items(),
                                 key=lambda item: item[1][1]):
        if name in frag_declared:
            continue
        if decl_pos[name] < start and k in ("read", "rw"):
            params_in.append((name, types[name]))

    live_out = tuple(sorted(
        ((name, types[name]) for name in
         (frag_declared | frag_written) & read_after),
        key=lambda nt: nt[0]))
    illegal, returns = _jump_targets(fragment)
    return DataFlowFacts(params_in=tuple(params_in), live_out=live_out,
                         illegal_jumps=illegal, returns=returns)


def check_extractable(facts: DataFlowFacts) -> None:
    """Raises NotExtractable with the failing reason; returns None when
    the fragment can be extracted."""
    if facts.returns:
        raise NotExtractable(CONTAINS_RETURN)
    if facts.illegal_jumps:
        raise NotExtractable(ILLEGAL_JUMP)
    if len(facts.live_out) > 1:
        raise NotExtractable(MULTIPLE_LIVE_OUT)


def is_extractable(facts: DataFlowFacts) -> bool:
    try:
        check_extractable(facts)
    except NotExtractable:
        return False
    return True


def _line_start(content: str, offset: int) -> int:
    return content.rfind("\n", 0, offset) + 1


def _indent_of(content: str, offset: int) -> str:
    ls = _line_start(content, offset)
    i = ls
    while i < len(content) and content[i] in " \t":
        i += 1
    return content[ls:i]


def _rebased_body(fragment: Fragment, target_indent: str) -> str:
    content = fragment.file.content
    start, end = fragment.span
    base_indent = _indent_of(content, start)
    text = content[_line_start(content, start):end]
    lines = text.split("\n")
    out = []
    for line in lines:
        if line.startswith(base_indent):
            line = line[len(base_indent):]
        else:
            line = line.lstrip()
        out.append(target_indent + line if line.strip() else "")
    return "\n".join(out)


def plan_extraction(fragment: Fragment, method: Node, class_node: Node,
                    name: str,
                    matches: list[CloneMatch] | None = None) -> RefactoringPlan:
    facts = analyze_dataflow(fragment, method)
    check_extractable(facts)
    taken = {m.attrs["name"] for m in class_node.attrs["methods"]}
    taken |= {n for f in class_node.attrs["fields"] for n in f.attrs["names"]}
    if name in taken:
        raise NameCollision(f"class already declares {name!r}")

    content = fragment.file.content
    method_indent = _indent_of(content, method.start)
    body_indent = method_indent + INDENT_UNIT
    ret = facts.live_out[0] if facts.live_out else None
    ret_type = ret[1] if ret else "void"
    mods = "private static" if "static" in method.attrs["modifiers"] \
        else "private"
    params_sig = ", ".join(f"{t} {n}" for n, t in facts.params_in)
    body = _rebased_body(fragment, body_indent)
    lines = [f"{method_indent}{mods} {ret_type} {name}({params_sig}) {{",
             body]
    if ret:
        lines.append(f"{body_indent}return {ret[0]};")
    lines.append(method_indent + "}")
    new_method_text = "\n".join(lines)

    args = ", ".join(n for n, _ in facts.params_in)
    if ret:
        call_text = f"{ret_type} {ret[0]} = {name}({args});"
    else:
        call_text = f"{name}({args});"

    try:
        wrapped = parse("class __P {\n" + new_method_text + "\n}")
        assert wrapped.attrs["classes"][0].attrs["methods"]
        parse("class __P { void __m() { " + call_text + " } }")
    except ParseError as exc:  # pragma: no cover - internal consistency
        raise AssertionError(f"generated code does not parse: {exc}") from exc

    sites = [(fragment.span[0], fragment.span[1],
              content[fragment.span[0]:fragment.span[1]])]
    for m in matches or []:
        if m.kind != EXACT:
            continue
        s, e = m.span
        sites.append((s, e, content[s:e]))
    sites.sort()
    disjoint = []
    for site in sites:
        if disjoint and site[0] < disjoint[-1][1]:
            continue  # overlapping duplicate windows: keep the first
        disjoint.append(site)
    return RefactoringPlan(
        new_method_name=name, parameters=facts.params_in, return_var=ret,
        new_method_text=new_method_text, call_text=call_text,
        replacement_sites=tuple(disjoint),
        enclosing_method_end=method.end, insertion_indent=method_indent)


def apply_plan(plan: RefactoringPlan, file: SourceFile) -> SourceFile:
    """Apply a plan: replace every site with the call and insert the new
    method after the enclosing method. Returns the re-parsed file."""
    content = file.content
    for start, end, expected in plan.replacement_sites:
        if content[start:end] != expected:
            raise StaleSpans(f"span [{start},{end}) changed since planning")
    insertion = (plan.enclosing_method_end, plan.enclosing_method_end,
                 None)
    edits = sorted(list(plan.replacement_sites) + [insertion], reverse=True)
    new_content = content
    for start, end, expected in edits:
        if expected is None:
            blob = "\n\n" + plan.new_method_text
            new_content = new_content[:start] + blob + new_content[end:]
        else:
            new_content = (new_content[:start] + plan.call_text
                           + new_content[end:])
    return SourceFile(path=file.path, content=new_content,
                      tree=parse(new_content))
