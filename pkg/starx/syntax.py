from __future__ import annotations

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from starx.formulas import Arrow, Atom, Formula, Sequent
from starx.terms import (
    Capsule,
    Cut,
    CutL,
    CutR,
    DuplL,
    DuplR,
    EraserL,
    EraserR,
    Exporter,
    Importer,
    Name,
    NameKind,
    Term,
    binders,
    children,
    fresh_name,
    names_of,
    own_names,
)

GRAMMAR = r"""
    term: "cap" "(" _name "," _name ")"                                -> cap
        | "exp" "(" _name "," term "," _name "," _name ")"             -> exp
        | "imp" "(" term "," _name "," _name "," _name "," term ")"    -> imp
        | CUT "(" term "," _name "," _name "," term ")"                -> cut
        | "eraL" "(" _name "," term ")"                                -> eral
        | "eraR" "(" term "," _name ")"                                -> erar
        | "dupL" "(" term "," _name "," _name "," _name ")"            -> dupl
        | "dupR" "(" term "," _name "," _name "," _name ")"            -> dupr

    sequent: context "|-" context
    context: (entry ("," entry)*)?
    entry: _name ":" formula

    ?formula: atomic "->" formula -> arrow
            | atomic
    ?atomic: ATOM -> atom
           | "(" formula ")"

    _name: IN | OUT

    CUT.2: "cutL" | "cutR" | "cut"
    IN: /[a-z][A-Za-z0-9_]*/
    OUT: /'[a-z][A-Za-z0-9_]*/
    ATOM: /[A-Z][A-Za-z0-9]*/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(
    GRAMMAR, start=["term", "sequent", "formula"], parser="lalr", lexer="contextual", propagate_positions=True
)

_CUTS = {"cut": Cut, "cutL": CutL, "cutR": CutR}
_CUT_KEYWORDS = {cls: word for word, cls in _CUTS.items()}
_KIND_WORD = {NameKind.IN: "inname", NameKind.OUT: "outname"}


class TermSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None and line > 0 else ""
        super().__init__(f"{where}{message}")


def _parse_tree(text: str, start: str) -> Tree:
    if not text.strip():
        raise TermSyntaxError("empty input")
    try:
        return _PARSER.parse(text, start=start)
    except UnexpectedEOF as exc:
        raise TermSyntaxError("unexpected end of input") from exc
    except UnexpectedToken as exc:
        raise TermSyntaxError(f"unexpected {exc.token!r}", exc.line, exc.column) from exc
    except UnexpectedCharacters as exc:
        raise TermSyntaxError(f"unexpected character {exc.char!r}", exc.line, exc.column) from exc
    except UnexpectedInput as exc:
        raise TermSyntaxError(str(exc), getattr(exc, "line", None), getattr(exc, "column", None)) from exc


def _kind_of(token: Token) -> NameKind:
    return NameKind.IN if token.type == "IN" else NameKind.OUT


def _expect(token: Token, kind: NameKind) -> str:
    found = _kind_of(token)
    if found is not kind:
        raise TermSyntaxError(
            f"expected an {_KIND_WORD[kind]} but found {_KIND_WORD[found]} {token}",
            token.line,
            token.column,
        )
    return str(token).lstrip("'")


class _TermBuilder:
    """Turns a parse tree into a term, giving every binder a fresh uid."""

    def __init__(self, allow_structural: bool) -> None:
        self.allow_structural = allow_structural

    def free(self, token: Token, kind: NameKind, env: dict[tuple[NameKind, str], Name]) -> Name:
        base = _expect(token, kind)
        return env.get((kind, base), Name(kind, base, 0))

    def bind(
        self,
        tokens: list[tuple[Token, NameKind]],
        env: dict[tuple[NameKind, str], Name],
    ) -> tuple[list[Name], dict[tuple[NameKind, str], Name]]:
        inner = dict(env)
        seen: set[tuple[NameKind, str]] = set()
        names = []
        for token, kind in tokens:
            base = _expect(token, kind)
            if (kind, base) in seen:
                raise TermSyntaxError(f"duplicate binder {token}", token.line, token.column)
            seen.add((kind, base))
            name = fresh_name(kind, base)
            inner[(kind, base)] = name
            names.append(name)
        return names, inner

    def build(self, tree: Tree, env: dict[tuple[NameKind, str], Name]) -> Term:
        rule = tree.data
        args = tree.children
        IN, OUT = NameKind.IN, NameKind.OUT
        if rule in {"eral", "erar", "dupl", "dupr"} and not self.allow_structural:
            meta = tree.meta
            raise TermSyntaxError(
                "erasers and duplicators are not X terms",
                getattr(meta, "line", None),
                getattr(meta, "column", None),
            )
        if rule == "cap":
            return Capsule(self.free(args[0], IN, env), self.free(args[1], OUT, env))
        if rule == "exp":
            x_tok, body, b_tok, a_tok = args
            (x, b), inner = self.bind([(x_tok, IN), (b_tok, OUT)], env)
            return Exporter(x, self.build(body, inner), b, self.free(a_tok, OUT, env))
        if rule == "imp":
            left, a_tok, x_tok, y_tok, right = args
            (a,), left_env = self.bind([(a_tok, OUT)], env)
            (y,), right_env = self.bind([(y_tok, IN)], env)
            return Importer(
                self.build(left, left_env), a, self.free(x_tok, IN, env), y, self.build(right, right_env)
            )
        if rule == "cut":
            kw, left, a_tok, x_tok, right = args
            (a,), left_env = self.bind([(a_tok, OUT)], env)
            (x,), right_env = self.bind([(x_tok, IN)], env)
            return _CUTS[str(kw)](self.build(left, left_env), a, x, self.build(right, right_env))
        if rule == "eral":
            return EraserL(self.free(args[0], IN, env), self.build(args[1], env))
        if rule == "erar":
            return EraserR(self.build(args[0], env), self.free(args[1], OUT, env))
        if rule == "dupl":
            body, t1, t2, src = args
            (x1, x2), inner = self.bind([(t1, IN), (t2, IN)], env)
            return DuplL(self.build(body, inner), x1, x2, self.free(src, IN, env))
        body, t1, t2, src = args
        (a1, a2), inner = self.bind([(t1, OUT), (t2, OUT)], env)
        return DuplR(self.build(body, inner), a1, a2, self.free(src, OUT, env))


def parse(text: str, *, allow_structural: bool = True) -> Term:
    tree = _parse_tree(text, "term")
    return _TermBuilder(allow_structural).build(tree, {})


def parse_formula(text: str) -> Formula:
    return _formula(_parse_tree(text, "formula"))


def _formula(tree: Tree | Token) -> Formula:
    if tree.data == "atom":
        return Atom(str(tree.children[0]))
    left, right = tree.children
    return Arrow(_formula(left), _formula(right))


def parse_sequent(text: str) -> Sequent:
    tree = _parse_tree(text, "sequent")
    gamma_tree, delta_tree = tree.children
    sequent = Sequent()
    for ctx_tree, target, kind in ((gamma_tree, sequent.gamma, NameKind.IN), (delta_tree, sequent.delta, NameKind.OUT)):
        for entry in ctx_tree.children:
            token, formula_tree = entry.children
            name = Name(kind, _expect(token, kind), 0)
            formula = _formula(formula_tree)
            if name in target and target[name] != formula:
                raise TermSyntaxError(f"{name} is given two different formulas", token.line, token.column)
            target[name] = formula
    return sequent


def display_names(t: Term) -> dict[Name, str]:
    """Collision-free printable names: free names first, then binders in preorder."""
    ordered: list[Name] = sorted(names_of(t))

    def walk(s: Term) -> None:
        for bound in binders(s):
            ordered.extend(bound)
        for name in own_names(s):
            ordered.append(name)
        for child in children(s):
            walk(child)

    walk(t)
    shown: dict[Name, str] = {}
    used: set[tuple[NameKind, str]] = set()
    for name in ordered:
        if name in shown:
            continue
        text = name.base
        k = 1
        while (name.kind, text) in used:
            text = f"{name.base}_{k}"
            k += 1
        used.add((name.kind, text))
        shown[name] = text if name.is_in else f"'{text}"
    return shown


def format_term(t: Term) -> str:
    shown = display_names(t)

    def fmt(s: Term) -> str:
        n = shown.__getitem__
        if isinstance(s, Capsule):
            return f"cap({n(s.x)},{n(s.a)})"
        if isinstance(s, Exporter):
            return f"exp({n(s.x)},{fmt(s.body)},{n(s.b)},{n(s.a)})"
        if isinstance(s, Importer):
            return f"imp({fmt(s.left)},{n(s.a)},{n(s.x)},{n(s.y)},{fmt(s.right)})"
        if isinstance(s, (Cut, CutL, CutR)):
            return f"{_CUT_KEYWORDS[type(s)]}({fmt(s.left)},{n(s.a)},{n(s.x)},{fmt(s.right)})"
        if isinstance(s, EraserL):
            return f"eraL({n(s.x)},{fmt(s.body)})"
        if isinstance(s, EraserR):
            return f"eraR({fmt(s.body)},{n(s.a)})"
        if isinstance(s, DuplL):
            return f"dupL({fmt(s.body)},{n(s.x1)},{n(s.x2)},{n(s.x)})"
        return f"dupR({fmt(s.body)},{n(s.a1)},{n(s.a2)},{n(s.a)})"

    return fmt(t)


def format_infix(t: Term) -> str:
    """Reading notation: ``<x.'a>`` capsules, hats on binders, † and ‡ for active cuts."""
    shown = display_names(t)

    def fmt(s: Term) -> str:
        n = shown.__getitem__
        if isinstance(s, Capsule):
            return f"<{n(s.x)}.{n(s.a)}>"
        if isinstance(s, Exporter):
            return f"{n(s.x)}^({fmt(s.body)}){n(s.b)}^.{n(s.a)}"
        if isinstance(s, Importer):
            return f"({fmt(s.left)}){n(s.a)}^[{n(s.x)}]{n(s.y)}^({fmt(s.right)})"
        if isinstance(s, (Cut, CutL, CutR)):
            mark = {Cut: "*", CutL: "†", CutR: "‡"}[type(s)]
            return f"({fmt(s.left)}){n(s.a)}^ {mark} {n(s.x)}^({fmt(s.right)})"
        if isinstance(s, EraserL):
            return f"{n(s.x)} ⊙ {fmt(s.body)}"
        if isinstance(s, EraserR):
            return f"({fmt(s.body)}) ⊙ {n(s.a)}"
        if isinstance(s, DuplL):
            return f"{n(s.x)}<{n(s.x1)}|{n(s.x2)}>({fmt(s.body)})"
        return f"({fmt(s.body)})<{n(s.a1)}|{n(s.a2)}>{n(s.a)}"

    return fmt(t)
