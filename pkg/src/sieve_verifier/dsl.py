"""Declarative language for the loss integrals.

Each integral lives in a text file so the region ledgers, integrand factors
and measure can be audited side by side with their source.  Format:

    # optional comments
    integral LOSS_S42 group S42 sign + paper 0.7226
      var t1 in [1/35, 17/35]
      var t2 in [1/35, min(t1, (1 - t1)/2)]
      require L(t1, t2)
      factor omega_exact ((1 - t1 - t2) / t2)
      measure 1 / (t1 * t2^2)
    end

Expressions use +, -, *, / at conventional precedence, unary minus, min/max,
integer and decimal literals, and variables t1…t8.  Rationals are written
p/q.  Variable bounds may reference earlier variables only.  `require` lines
hold one region atom or several joined by `or` (the ledgers contain genuine
either/or clauses); `!` negates an atom.  Atoms: T0/2, T1/2, T21/3, T22/3,
T23/3, T2/3, I/1..8, J/1..8, L/2, M/2, N/2 and the ledger macros UM1…UM7,
UN01…UN14.  The measure is 1 over a product of monomial terms with exponent
1 or 2 (a term may be min/max of two variables).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import regions

VAR_NAMES = tuple(f"t{i}" for i in range(1, 9))

FACTOR_KINDS = ("omega_exact", "omega_lower", "omega_upper", "omega_simple")

GROUPS = ("S42", "M", "N0", "N1")

_FIXED_ARITY = {
    "T0": 2, "T1": 2, "T21": 3, "T22": 3, "T23": 3, "T2": 3,
    "L": 2, "M": 2, "N": 2,
}

BUILTIN_NAMES = (
    ["LOSS_S42"]
    + [f"LOSS_M{i}" for i in range(1, 8)]
    + [f"LOSS_N{i:02d}" for i in range(1, 15)]
)


class DslError(ValueError):
    """Base for parse and validation failures."""


class DslSyntaxError(DslError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# ───────────────────────── expressions ─────────────────────────


@dataclass(frozen=True)
class Num:
    value: Fraction

    def eval(self, env):
        return float(self.value)

    def pretty(self) -> str:
        v = self.value
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Var:
    name: str

    def eval(self, env):
        return env[self.name]

    def pretty(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "Expr"

    def eval(self, env):
        return -self.arg.eval(env)

    def pretty(self) -> str:
        return f"-{_paren(self.arg, 30)}"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"

    def eval(self, env):
        a = self.left.eval(env)
        b = self.right.eval(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        out = a / b
        if np.any(np.asarray(b) == 0.0):
            raise ZeroDivisionError(f"zero denominator in {self.pretty()}")
        return out

    def pretty(self) -> str:
        prec = _PREC[self.op]
        left = _paren(self.left, prec)
        # -/÷ are left-associative: right operand needs the next tighter level
        right = _paren(self.right, prec + (1 if self.op in "-/" else 0))
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple

    def eval(self, env):
        a = self.args[0].eval(env)
        b = self.args[1].eval(env)
        return np.minimum(a, b) if self.fn == "min" else np.maximum(a, b)

    def pretty(self) -> str:
        return f"{self.fn}({self.args[0].pretty()}, {self.args[1].pretty()})"


Expr = (Num, Var, Neg, Bin, Call)

_PREC = {"+": 10, "-": 10, "*": 20, "/": 20}


def _prec_of(e) -> int:
    if isinstance(e, Bin):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 25
    return 100


def _paren(e, parent_prec: int) -> str:
    text = e.pretty()
    return f"({text})" if _prec_of(e) < parent_prec else text


def expr_vars(e) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return expr_vars(e.arg)
    if isinstance(e, Bin):
        return expr_vars(e.left) | expr_vars(e.right)
    if isinstance(e, Call):
        return expr_vars(e.args[0]) | expr_vars(e.args[1])
    return set()


def _is_monomial(e) -> bool:
    if isinstance(e, (Num, Var)):
        return True
    if isinstance(e, Bin) and e.op == "*":
        return _is_monomial(e.left) and _is_monomial(e.right)
    return False


def _check_divisors(e, line: int):
    """Division is restricted to monomial denominators (spec invariant:
    samplers can then reject nonpositive denominators cleanly)."""
    if isinstance(e, Bin):
        if e.op == "/" and not _is_monomial(e.right):
            raise DslSyntaxError(
                f"denominator must be a monomial: {e.right.pretty()}", line
            )
        _check_divisors(e.left, line)
        _check_divisors(e.right, line)
    elif isinstance(e, Neg):
        _check_divisors(e.arg, line)
    elif isinstance(e, Call):
        for a in e.args:
            _check_divisors(a, line)


# ───────────────────────── tokenizer / expression parser ─────────────────────────

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[()+\-*/,^!\[\]]))"
)


def _tokenize(text: str, line: int):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
            break
        if m.lastgroup:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup) + 1))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, tokens, line: int, declared):
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.declared = declared

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, 0)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, col = self.next()
        if val != value:
            raise DslSyntaxError(f"expected {value!r}, found {val!r}", self.line, col)

    def parse_expr(self):
        node = self.parse_term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = Bin(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            node = Bin(op, node, self.parse_unary())
        return node

    def parse_unary(self):
        if self.peek()[1] == "-":
            self.next()
            return Neg(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        kind, val, col = self.next()
        if kind == "num":
            return Num(Fraction(val))
        if kind == "name":
            if val in ("min", "max"):
                self.expect("(")
                a = self.parse_expr()
                self.expect(",")
                b = self.parse_expr()
                self.expect(")")
                return Call(val, (a, b))
            if val not in VAR_NAMES:
                raise DslSyntaxError(f"unknown identifier {val!r}", self.line, col)
            if val not in self.declared:
                raise DslSyntaxError(
                    f"forward reference to {val!r}", self.line, col
                )
            return Var(val)
        if val == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        raise DslSyntaxError(f"unexpected token {val!r}", self.line, col)

    def done(self):
        if self.i != len(self.tokens):
            kind, val, col = self.peek()
            raise DslSyntaxError(f"trailing input {val!r}", self.line, col)


def _parse_expr_text(text: str, line: int, declared) -> "Expr":
    p = _ExprParser(_tokenize(text, line), line, declared)
    node = p.parse_expr()
    p.done()
    _check_divisors(node, line)
    return node


# ───────────────────────── statements ─────────────────────────


@dataclass(frozen=True)
class Literal:
    negated: bool
    atom: str
    args: tuple

    def pretty(self) -> str:
        bang = "!" if self.negated else ""
        inner = ", ".join(a.pretty() for a in self.args)
        return f"{bang}{self.atom}({inner})"


@dataclass(frozen=True)
class VarDecl:
    name: str
    lower: "Expr"
    upper: "Expr"

    def pretty(self) -> str:
        return f"var {self.name} in [{self.lower.pretty()}, {self.upper.pretty()}]"


@dataclass(frozen=True)
class Requirement:
    """Disjunction of literals; a bare atom is a one-literal clause."""

    literals: tuple

    def pretty(self) -> str:
        return "require " + " or ".join(l.pretty() for l in self.literals)


@dataclass(frozen=True)
class IntegralSpec:
    name: str
    group: str
    sign: int
    paper_value: Fraction
    statements: tuple  # VarDecl / Requirement in file order
    factors: tuple  # (kind, Expr)
    measure: tuple  # (Expr, exponent)

    @property
    def variables(self):
        return tuple(s for s in self.statements if isinstance(s, VarDecl))

    @property
    def requirements(self):
        return tuple(s for s in self.statements if isinstance(s, Requirement))

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def pretty(self) -> str:
        sign = "+" if self.sign > 0 else "-"
        paper = Num(self.paper_value).pretty()
        lines = [f"integral {self.name} group {self.group} sign {sign} paper {paper}"]
        for s in self.statements:
            lines.append(f"  {s.pretty()}")
        for kind, e in self.factors:
            lines.append(f"  factor {kind} ({e.pretty()})")
        if self.measure:
            terms = []
            for e, k in self.measure:
                body = e.pretty()
                if not isinstance(e, (Var, Call)):
                    body = f"({body})"
                terms.append(body if k == 1 else f"{body}^2")
            lines.append(f"  measure 1 / ({' * '.join(terms)})")
        else:
            lines.append("  measure 1")
        lines.append("end")
        return "\n".join(lines) + "\n"

    # membership of a concrete point in the declared region (ranges use
    # lower ≤ t < upper; boundary convention only matters on null sets)
    def contains_vec(self, cols, semantics: str = regions.EMPTY):
        env = {v.name: np.asarray(c, dtype=float) for v, c in zip(self.variables, cols)}
        n = next(iter(env.values())).shape[0]
        alive = np.ones(n, dtype=bool)
        for stmt in self.statements:
            if isinstance(stmt, VarDecl):
                t = env[stmt.name]
                lo = _eval_masked(stmt.lower, env, alive)
                hi = _eval_masked(stmt.upper, env, alive)
                alive &= (t >= lo) & (t < hi)
            else:
                hit = np.zeros(n, dtype=bool)
                for lit in stmt.literals:
                    hit |= eval_literal(lit, env, alive & ~hit, semantics)
                alive &= hit
        return alive

    def contains(self, point, semantics: str = regions.EMPTY) -> bool:
        cols = [np.array([float(x)]) for x in point]
        return bool(self.contains_vec(cols, semantics)[0])


def _eval_masked(expr, env, alive):
    # full-width evaluation is fine here; bounds are total on the box
    return expr.eval(env)


def eval_literal(lit: Literal, env, mask, semantics: str = regions.EMPTY):
    """Evaluate one region literal on the masked points of a vector env."""
    n = next(iter(env.values())).shape[0]
    out = np.zeros(n, dtype=bool)
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return out
    sub = {k: v[idx] for k, v in env.items()}
    cols = [np.asarray(a.eval(sub), dtype=float) for a in lit.args]
    cols = [np.broadcast_to(c, (idx.size,)).astype(float) if c.ndim == 0 else c for c in cols]
    val = regions.eval_atom_vec(lit.atom, cols, semantics)
    out[idx] = ~val if lit.negated else val
    return out


# ───────────────────────── file parser ─────────────────────────

_HEADER_RE = re.compile(
    r"^integral\s+(?P<name>[A-Za-z_0-9]+)\s+group\s+(?P<group>[A-Za-z_0-9]+)"
    r"\s+sign\s+(?P<sign>[+-])\s+paper\s+(?P<paper>[0-9./]+)\s*$"
)
_VAR_RE = re.compile(r"^var\s+(?P<name>t[1-8])\s+in\s+\[(?P<body>.*)\]\s*$")
_ATOM_RE = re.compile(r"^(?P<neg>!?)\s*(?P<name>[A-Za-z_0-9]+)\s*\((?P<args>.*)\)\s*$")


def _split_top_level(text: str, sep: str, line: int):
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DslSyntaxError("unbalanced parentheses", line)
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise DslSyntaxError("unbalanced parentheses", line)
    parts.append("".join(cur))
    return parts


def _atom_arity(name: str, line: int) -> tuple:
    """Returns (canonical name, (min_arity, max_arity))."""
    if name in _FIXED_ARITY:
        return name, (_FIXED_ARITY[name], _FIXED_ARITY[name])
    if name in ("I", "J"):
        return name, (1, 8)
    key = name.upper().replace("_", "")
    if key in regions.U_LEDGERS:
        dim = regions.U_LEDGERS[key][0]
        return key, (dim, dim)
    raise DslSyntaxError(f"unknown region atom {name!r}", line)


def _parse_literal(text: str, line: int, declared) -> Literal:
    m = _ATOM_RE.match(text.strip())
    if not m:
        raise DslSyntaxError(f"malformed region atom {text.strip()!r}", line)
    name, (lo, hi) = _atom_arity(m.group("name"), line)
    args = tuple(
        _parse_expr_text(part, line, declared)
        for part in _split_top_level(m.group("args"), ",", line)
    )
    if not (lo <= len(args) <= hi):
        want = f"{lo}" if lo == hi else f"{lo}..{hi}"
        raise DslSyntaxError(
            f"{name} takes {want} arguments, got {len(args)}", line
        )
    return Literal(negated=m.group("neg") == "!", atom=name, args=args)


def _parse_measure(text: str, line: int, declared):
    text = text.strip()
    if not text.startswith("1"):
        raise DslSyntaxError("measure must be of the form 1 / (...)", line)
    rest = text[1:].strip()
    if not rest:
        return ()  # measure 1: Lebesgue measure, no monomial denominator
    if not rest.startswith("/"):
        raise DslSyntaxError("measure must be of the form 1 / (...)", line)
    body = rest[1:].strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    terms = []
    for part in _split_top_level(body, "*", line):
        part = part.strip()
        if "^" in part:
            base, _, exp = part.partition("^")
            k = exp.strip()
            if k not in ("1", "2"):
                raise DslSyntaxError(f"measure exponent must be 1 or 2, got {k}", line)
            terms.append((_parse_expr_text(base, line, declared), int(k)))
        else:
            terms.append((_parse_expr_text(part, line, declared), 1))
    return tuple(terms)


def parse(source: str, name_hint: str = "<string>") -> IntegralSpec:
    header = None
    statements = []
    factors = []
    measure = None
    closed = False
    declared: set = set()

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if closed:
            raise DslSyntaxError("content after end", lineno)
        if header is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise DslSyntaxError("expected integral header", lineno)
            paper = Fraction(m.group("paper"))
            if paper < 0:
                raise DslSyntaxError("paper value must be nonnegative", lineno)
            if m.group("group") not in GROUPS:
                raise DslSyntaxError(f"unknown group {m.group('group')!r}", lineno)
            header = (
                m.group("name"),
                m.group("group"),
                1 if m.group("sign") == "+" else -1,
                paper,
            )
            continue
        if line == "end":
            closed = True
            continue
        if line.startswith("var "):
            m = _VAR_RE.match(line)
            if not m:
                raise DslSyntaxError("malformed var declaration", lineno)
            vname = m.group("name")
            if vname in declared:
                raise DslSyntaxError(f"duplicate variable {vname}", lineno)
            expected = f"t{len(declared) + 1}"
            if vname != expected:
                raise DslSyntaxError(
                    f"variables must be declared in order; expected {expected}", lineno
                )
            lo_text, hi_text = _split_top_level(m.group("body"), ",", lineno)
            lo = _parse_expr_text(lo_text, lineno, declared)
            hi = _parse_expr_text(hi_text, lineno, declared)
            statements.append(VarDecl(vname, lo, hi))
            declared.add(vname)
            continue
        if line.startswith("require "):
            body = line[len("require "):]
            lits = tuple(
                _parse_literal(part, lineno, declared)
                for part in re.split(r"\s+or\s+", body)
            )
            statements.append(Requirement(lits))
            continue
        if line.startswith("factor "):
            body = line[len("factor "):].strip()
            kind, _, expr_text = body.partition(" ")
            if kind not in FACTOR_KINDS:
                raise DslSyntaxError(f"unknown factor kind {kind!r}", lineno)
            factors.append((kind, _parse_expr_text(expr_text, lineno, declared)))
            continue
        if line.startswith("measure "):
            if measure is not None:
                raise DslSyntaxError("duplicate measure", lineno)
            measure = _parse_measure(line[len("measure "):], lineno, declared)
            continue
        raise DslSyntaxError(f"unrecognized statement {line!r}", lineno)

    if header is None:
        raise DslError(f"{name_hint}: empty integral file")
    if not closed:
        raise DslError(f"{name_hint}: missing end")
    if measure is None:
        measure = ()
    if not statements or not isinstance(statements[0], VarDecl):
        raise DslError(f"{name_hint}: first statement must declare t1")
    return IntegralSpec(
        name=header[0],
        group=header[1],
        sign=header[2],
        paper_value=header[3],
        statements=tuple(statements),
        factors=tuple(factors),
        measure=tuple(measure),
    )


def parse_file(path) -> IntegralSpec:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), name_hint=str(path))


def specs_dir() -> Path:
    return Path(__file__).parent / "specs"


def builtin_specs(directory=None) -> list:
    """The 22 loss integrals, in budget order (S42, M1–M7, N01–N14)."""
    base = Path(directory) if directory is not None else specs_dir()
    out = []
    for name in BUILTIN_NAMES:
        spec = parse_file(base / f"{name}.loss")
        if spec.name != name:
            raise DslError(f"{name}.loss declares {spec.name!r}")
        out.append(spec)
    return out
