"""Recursive-descent parser for the Java-subset grammar.

Supported: classes, fields, methods, the statement kinds of the node
model, primitive and identifier types (with array suffixes), and standard
expressions. No generics, lambdas, annotations, or inner classes.
"""

from __future__ import annotations

from ..errors import ParseError
from .nodes import Node
from .tokens import (CHARLIT, EOF, IDENT, KW, NUMBER, OP, PRIMITIVE_TYPES,
                     STRING, Token, tokenize)

MODIFIERS = ("public", "private", "protected", "static", "final")

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}

# binary precedence: higher binds tighter
BINARY_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers ------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text, kind=None) -> bool:
        t = self.cur
        if kind is not None and t.kind != kind:
            return False
        return t.text == text

    def at_kw(self, *words) -> bool:
        return self.cur.kind == KW and self.cur.text in words

    def advance(self) -> Token:
        t = self.cur
        if t.kind != EOF:
            self.pos += 1
        return t

    def expect(self, text) -> Token:
        if self.cur.text != text or self.cur.kind == EOF:
            raise ParseError(
                f"expected {text!r}, found {self.cur.text or 'end of input'!r}",
                self.cur.start, expected={text})
        return self.advance()

    def expect_ident(self) -> Token:
        if self.cur.kind != IDENT:
            raise ParseError(
                f"expected identifier, found {self.cur.text or 'end of input'!r}",
                self.cur.start, expected={"<identifier>"})
        return self.advance()

    # -- top level ----------------------------------------------------

    def parse_compilation_unit(self) -> Node:
        classes = []
        while not self.cur.kind == EOF:
            classes.append(self.parse_class())
        eof = self.cur
        unit = Node("CompilationUnit", classes + [eof], classes=classes)
        return unit

    def parse_class(self) -> Node:
        kids = []
        while self.at_kw(*MODIFIERS):
            kids.append(self.advance())
        if not self.at_kw("class"):
            raise ParseError(
                f"expected 'class', found {self.cur.text or 'end of input'!r}",
                self.cur.start, expected={"class"})
        kids.append(self.advance())
        name_tok = self.expect_ident()
        kids.append(name_tok)
        kids.append(self.expect("{"))
        fields, methods = [], []
        while not self.at("}") and self.cur.kind != EOF:
            member = self.parse_member()
            kids.append(member)
            (methods if member.kind == "MethodDecl" else fields).append(member)
        kids.append(self.expect("}"))
        return Node("ClassDecl", kids, name=name_tok.text, fields=fields,
                    methods=methods)

    def parse_member(self) -> Node:
        kids = []
        modifiers = []
        while self.at_kw(*MODIFIERS):
            t = self.advance()
            modifiers.append(t.text)
            kids.append(t)
        type_toks, type_name = self.parse_type(allow_void=True)
        kids.extend(type_toks)
        name_tok = self.expect_ident()
        kids.append(name_tok)
        if self.at("("):
            return self.parse_method_rest(kids, modifiers, type_name, name_tok)
        return self.parse_field_rest(kids, modifiers, type_name, name_tok)

    def parse_type(self, allow_void=False):
        """Returns (tokens, canonical type string)."""
        t = self.cur
        if t.kind == KW and (t.text in PRIMITIVE_TYPES
                             or (allow_void and t.text == "void")):
            toks = [self.advance()]
        elif t.kind == IDENT:
            toks = [self.advance()]
        else:
            raise ParseError(
                f"expected type, found {t.text or 'end of input'!r}",
                t.start, expected={"<type>"})
        name = toks[0].text
        while self.at("[") and self.peek().text == "]":
            toks.append(self.advance())
            toks.append(self.advance())
            name += "[]"
        return toks, name

    def parse_field_rest(self, kids, modifiers, type_name, name_tok) -> Node:
        names = [name_tok.text]
        if self.at("="):
            kids.append(self.advance())
            kids.append(self.parse_expression())
        while self.at(","):
            kids.append(self.advance())
            nt = self.expect_ident()
            kids.append(nt)
            names.append(nt.text)
            if self.at("="):
                kids.append(self.advance())
                kids.append(self.parse_expression())
        kids.append(self.expect(";"))
        return Node("FieldDecl", kids, names=names, type_name=type_name,
                    modifiers=modifiers)

    def parse_method_rest(self, kids, modifiers, return_type, name_tok) -> Node:
        kids.append(self.expect("("))
        params = []
        if not self.at(")"):
            while True:
                ptoks, ptype = self.parse_type()
                kids.extend(ptoks)
                pn = self.expect_ident()
                kids.append(pn)
                params.append((pn.text, ptype))
                if not self.at(","):
                    break
                kids.append(self.advance())
        kids.append(self.expect(")"))
        body = self.parse_body()
        kids.append(body)
        method = Node("MethodDecl", kids, name=name_tok.text, params=params,
                      return_type=return_type, modifiers=modifiers, body=body)
        assign_depths(body, 0)
        return method

    # -- statements ---------------------------------------------------

    def parse_body(self) -> Node:
        """Braced statement list used as a method/construct body."""
        kids = [self.expect("{")]
        stmts = []
        while not self.at("}") and self.cur.kind != EOF:
            s = self.parse_statement()
            kids.append(s)
            stmts.append(s)
        kids.append(self.expect("}"))
        return Node("Body", kids, stmts=stmts)

    def parse_statement(self) -> Node:
        t = self.cur
        if t.kind == OP and t.text == "{":
            body = self.parse_body()
            return Node("Block", [body], stmts=body.stmts, body=body)
        if t.kind == KW:
            word = t.text
            if word == "if":
                return self.parse_if()
            if word == "for":
                return self.parse_for()
            if word == "while":
                return self.parse_while()
            if word == "do":
                return self.parse_do_while()
            if word == "switch":
                return self.parse_switch()
            if word == "try":
                return self.parse_try()
            if word == "return":
                kids = [self.advance()]
                expr = None
                if not self.at(";"):
                    expr = self.parse_expression()
                    kids.append(expr)
                kids.append(self.expect(";"))
                return Node("Return", kids, expr=expr)
            if word == "throw":
                kids = [self.advance(), self.parse_expression(),
                        self.expect(";")]
                return Node("Throw", kids, expr=kids[1])
            if word == "break":
                return Node("Break", [self.advance(), self.expect(";")])
            if word == "continue":
                return Node("Continue", [self.advance(), self.expect(";")])
            if word == "assert":
                kids = [self.advance(), self.parse_expression()]
                if self.at(":"):
                    kids.append(self.advance())
                    kids.append(self.parse_expression())
                kids.append(self.expect(";"))
                return Node("Assert", kids)
            if word == "synchronized":
                kids = [self.advance(), self.expect("(")]
                lock = self.parse_expression()
                kids.append(lock)
                kids.append(self.expect(")"))
                body = self.parse_body()
                kids.append(body)
                return Node("Synchronized", kids, lock=lock, body=body)
            if word in PRIMITIVE_TYPES or word == "final":
                return self.parse_local_var_decl()
        if t.kind == IDENT and self.starts_decl():
            return self.parse_local_var_decl()
        expr = self.parse_expression()
        kids = [expr, self.expect(";")]
        return Node("ExprStatement", kids, expr=expr)

    def starts_decl(self) -> bool:
        # IDENT IDENT or IDENT [ ] -> declaration with a class type
        nxt = self.peek()
        if nxt.kind == IDENT:
            return True
        return nxt.text == "[" and self.peek(2).text == "]"

    def parse_local_var_decl(self, terminated=True) -> Node:
        kids = []
        modifiers = []
        while self.at_kw("final"):
            t = self.advance()
            modifiers.append(t.text)
            kids.append(t)
        type_toks, type_name = self.parse_type()
        kids.extend(type_toks)
        decls = []
        while True:
            nt = self.expect_ident()
            kids.append(nt)
            init = None
            if self.at("="):
                kids.append(self.advance())
                init = self.parse_expression()
                kids.append(init)
            decls.append((nt.text, type_name, init, nt))
            if not self.at(","):
                break
            kids.append(self.advance())
        if terminated:
            kids.append(self.expect(";"))
        return Node("LocalVarDecl", kids, decls=decls, type_name=type_name,
                    modifiers=modifiers)

    def parse_if(self) -> Node:
        kids = [self.advance(), self.expect("(")]
        cond = self.parse_expression()
        kids.extend([cond, self.expect(")")])
        then = self.parse_statement_or_body()
        kids.append(then)
        els = None
        if self.at_kw("else"):
            kids.append(self.advance())
            els = self.parse_statement_or_body()
            kids.append(els)
        return Node("If", kids, cond=cond, then=then, els=els)

    def parse_statement_or_body(self) -> Node:
        if self.at("{"):
            return self.parse_body()
        return self.parse_statement()

    def parse_for(self) -> Node:
        kids = [self.advance(), self.expect("(")]
        init = None
        if not self.at(";"):
            if self.at_kw(*PRIMITIVE_TYPES) or self.at_kw("final") or (
                    self.cur.kind == IDENT and self.starts_decl()):
                init = self.parse_local_var_decl(terminated=False)
                # for-init declarations are part of the header, not a
                # freestanding statement
                init.kind = "ForInitDecl"
            else:
                init = Node("ForInit", [self.parse_expression()])
            kids.append(init)
        kids.append(self.expect(";"))
        cond = None
        if not self.at(";"):
            cond = self.parse_expression()
            kids.append(cond)
        kids.append(self.expect(";"))
        update = None
        if not self.at(")"):
            upd_kids = [self.parse_expression()]
            while self.at(","):
                upd_kids.append(self.advance())
                upd_kids.append(self.parse_expression())
            update = Node("ForUpdate", upd_kids)
            kids.append(update)
        kids.append(self.expect(")"))
        body = self.parse_statement_or_body()
        kids.append(body)
        return Node("For", kids, init=init, cond=cond, update=update, body=body)

    def parse_while(self) -> Node:
        kids = [self.advance(), self.expect("(")]
        cond = self.parse_expression()
        kids.extend([cond, self.expect(")")])
        body = self.parse_statement_or_body()
        kids.append(body)
        return Node("While", kids, cond=cond, body=body)

    def parse_do_while(self) -> Node:
        kids = [self.advance()]
        body = self.parse_statement_or_body()
        kids.append(body)
        kids.append(self.expect("while"))
        kids.append(self.expect("("))
        cond = self.parse_expression()
        kids.extend([cond, self.expect(")"), self.expect(";")])
        return Node("DoWhile", kids, cond=cond, body=body)

    def parse_switch(self) -> Node:
        kids = [self.advance(), self.expect("(")]
        expr = self.parse_expression()
        kids.extend([expr, self.expect(")"), self.expect("{")])
        cases = []
        while not self.at("}") and self.cur.kind != EOF:
            ckids = []
            if self.at_kw("case"):
                ckids.append(self.advance())
                ckids.append(self.parse_expression())
            elif self.at_kw("default"):
                ckids.append(self.advance())
            else:
                raise ParseError(
                    f"expected 'case' or 'default', found {self.cur.text!r}",
                    self.cur.start, expected={"case", "default"})
            ckids.append(self.expect(":"))
            stmts = []
            while (not self.at("}") and not self.at_kw("case", "default")
                   and self.cur.kind != EOF):
                s = self.parse_statement()
                ckids.append(s)
                stmts.append(s)
            case = Node("SwitchCase", ckids, stmts=stmts)
            cases.append(case)
            kids.append(case)
        kids.append(self.expect("}"))
        return Node("Switch", kids, expr=expr, cases=cases)

    def parse_try(self) -> Node:
        kids = [self.advance()]
        body = self.parse_body()
        kids.append(body)
        catches = []
        while self.at_kw("catch"):
            ckids = [self.advance(), self.expect("(")]
            type_toks, type_name = self.parse_type()
            ckids.extend(type_toks)
            pn = self.expect_ident()
            ckids.append(pn)
            ckids.append(self.expect(")"))
            cbody = self.parse_body()
            ckids.append(cbody)
            catch = Node("CatchClause", ckids, param=(pn.text, type_name),
                         body=cbody)
            catches.append(catch)
            kids.append(catch)
        finally_body = None
        if self.at_kw("finally"):
            kids.append(self.advance())
            finally_body = self.parse_body()
            kids.append(finally_body)
        if not catches and finally_body is None:
            raise ParseError("try without catch or finally", self.cur.start,
                             expected={"catch", "finally"})
        return Node("Try", kids, body=body, catches=catches,
                    finally_body=finally_body)

    # -- expressions --------------------------------------------------

    def parse_expression(self) -> Node:
        return self.parse_assignment()

    def parse_assignment(self) -> Node:
        left = self.parse_ternary()
        if self.cur.kind == OP and self.cur.text in ASSIGN_OPS:
            op = self.advance()
            right = self.parse_assignment()
            return Node("Assign", [left, op, right], target=left, op=op.text,
                        value=right)
        return left

    def parse_ternary(self) -> Node:
        cond = self.parse_binary(1)
        if self.at("?"):
            q = self.advance()
            a = self.parse_expression()
            c = self.expect(":")
            b = self.parse_ternary()
            return Node("Ternary", [cond, q, a, c, b])
        return cond

    def parse_binary(self, min_prec) -> Node:
        left = self.parse_unary()
        while True:
            t = self.cur
            text = t.text
            if t.kind == KW and text == "instanceof":
                prec = BINARY_PREC["instanceof"]
            elif t.kind == OP and text in BINARY_PREC:
                prec = BINARY_PREC[text]
            else:
                return left
            if prec < min_prec:
                return left
            op = self.advance()
            if text == "instanceof":
                type_toks, _ = self.parse_type()
                right = Node("Name", type_toks, name=type_toks[0].text)
            else:
                right = self.parse_binary(prec + 1)
            left = Node("Binary", [left, op, right], op=text)

    def parse_unary(self) -> Node:
        t = self.cur
        if t.kind == OP and t.text in ("!", "~", "+", "-", "++", "--"):
            op = self.advance()
            operand = self.parse_unary()
            return Node("Unary", [op, operand], op=op.text, operand=operand)
        if (t.text == "(" and self.peek().kind == KW
                and self.peek().text in PRIMITIVE_TYPES
                and self.peek(2).text == ")"):
            kids = [self.advance(), self.advance(), self.advance()]
            operand = self.parse_unary()
            kids.append(operand)
            return Node("Cast", kids, type_name=kids[1].text, operand=operand)
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        expr = self.parse_primary()
        while True:
            t = self.cur
            if t.kind != OP:
                return expr
            if t.text == ".":
                dot = self.advance()
                name_tok = self.expect_ident()
                if self.at("("):
                    args, akids = self.parse_args()
                    expr = Node("Call", [expr, dot, name_tok] + akids,
                                target=expr, name=name_tok.text,
                                name_token=name_tok, args=args)
                else:
                    expr = Node("FieldAccess", [expr, dot, name_tok],
                                target=expr, name=name_tok.text,
                                name_token=name_tok)
            elif t.text == "(" and expr.kind == "Name":
                args, akids = self.parse_args()
                expr = Node("Call", [expr] + akids, target=None,
                            name=expr.attrs["name"],
                            name_token=expr.children[0], args=args)
            elif t.text == "[":
                kids = [expr, self.advance(), self.parse_expression(),
                        self.expect("]")]
                expr = Node("Index", kids, target=expr, index=kids[2])
            elif t.text in ("++", "--"):
                op = self.advance()
                expr = Node("Postfix", [expr, op], op=op.text, operand=expr)
            else:
                return expr

    def parse_args(self):
        kids = [self.expect("(")]
        args = []
        if not self.at(")"):
            while True:
                a = self.parse_expression()
                args.append(a)
                kids.append(a)
                if not self.at(","):
                    break
                kids.append(self.advance())
        kids.append(self.expect(")"))
        return args, kids

    def parse_primary(self) -> Node:
        t = self.cur
        if t.kind in (NUMBER, STRING, CHARLIT):
            return Node("Literal", [self.advance()])
        if t.kind == KW:
            if t.text in ("true", "false", "null"):
                return Node("Literal", [self.advance()])
            if t.text in ("this", "super"):
                return Node("Name", [self.advance()], name=t.text)
            if t.text == "new":
                return self.parse_new()
        if t.kind == IDENT:
            tok = self.advance()
            return Node("Name", [tok], name=tok.text)
        if t.text == "(":
            kids = [self.advance(), self.parse_expression(), self.expect(")")]
            return Node("Paren", kids, inner=kids[1])
        raise ParseError(
            f"expected expression, found {t.text or 'end of input'!r}",
            t.start, expected={"<expression>"})

    def parse_new(self) -> Node:
        kids = [self.advance()]
        type_toks, type_name = self.parse_type()
        kids.extend(type_toks)
        if self.at("["):
            kids.append(self.advance())
            kids.append(self.parse_expression())
            kids.append(self.expect("]"))
            return Node("NewArray", kids, type_name=type_name)
        args, akids = self.parse_args()
        return Node("New", kids + akids, type_name=type_name, args=args)


def assign_depths(body: Node, depth: int):
    """Set .depth on every statement in a body; top level of the method
    body is depth 0, each construct body adds one level."""
    body.depth = depth
    for stmt in body.attrs["stmts"]:
        _assign_stmt_depth(stmt, depth)


def _assign_stmt_depth(stmt: Node, depth: int):
    stmt.depth = depth
    k = stmt.kind
    if k == "Block":
        assign_depths(stmt.attrs["body"], depth + 1)
    elif k == "If":
        _assign_sub(stmt.attrs["then"], depth)
        if stmt.attrs["els"] is not None:
            _assign_sub(stmt.attrs["els"], depth)
    elif k in ("For", "While", "Synchronized"):
        _assign_sub(stmt.attrs["body"], depth)
    elif k == "DoWhile":
        _assign_sub(stmt.attrs["body"], depth)
    elif k == "Switch":
        for case in stmt.attrs["cases"]:
            for s in case.attrs["stmts"]:
                _assign_stmt_depth(s, depth + 1)
    elif k == "Try":
        assign_depths(stmt.attrs["body"], depth + 1)
        for catch in stmt.attrs["catches"]:
            assign_depths(catch.attrs["body"], depth + 1)
        if stmt.attrs["finally_body"] is not None:
            assign_depths(stmt.attrs["finally_body"], depth + 1)


def _assign_sub(sub: Node, construct_depth: int):
    if sub.kind == "Body":
        assign_depths(sub, construct_depth + 1)
    else:
        _assign_stmt_depth(sub, construct_depth + 1)


def parse(source: str) -> Node:
    """Parse a full compilation unit. Raises ParseError on non-grammar
    input, including trailing unparsed tokens."""
    parser = Parser(tokenize(source))
    return parser.parse_compilation_unit()


def parse_statements(fragment_text: str) -> list[Node]:
    """Parse text that must consist of one or more complete statements."""
    parser = Parser(tokenize(fragment_text))
    stmts = []
    while parser.cur.kind != EOF:
        stmts.append(parser.parse_statement())
    if not stmts:
        raise ParseError("expected at least one statement", 0,
                         expected={"<statement>"})
    for s in stmts:
        _assign_stmt_depth(s, 0)
    return stmts
