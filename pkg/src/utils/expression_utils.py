"""
Arithmetic expressions for model files.

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom ("^" unary)?
    atom    := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"
    FUNC    := "sin" | "cos" | "exp" | "log" | "sqrt"

Expressions are built as sympy trees, differentiated symbolically and
lambdified to numpy.
"""
import re
from collections import namedtuple

import numpy as np
import sympy as sp

from algebroid.errors import ModelFileError

FUNCTIONS = {
    'sin': sp.sin,
    'cos': sp.cos,
    'exp': sp.exp,
    'log': sp.log,
    'sqrt': sp.sqrt,
}
CONSTANTS = {'pi': sp.pi}

Token = namedtuple('Token', ['type', 'value', 'pos'])

_TOKEN_REGEXP = re.compile(r"""
    \s*(?:
    (?P<NUMBER>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
    |(?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<OP>[-+*/^()])
    )""", re.VERBOSE)

def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN_REGEXP.match(text, pos)
        if match is None or match.end() == pos:
            raise ModelFileError("Unexpected character {!r} at position {} in '{}'.".format(
                text[pos:].strip()[:1], pos, text))
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens

class ExpressionParser(object):
    def __init__(self, text, symbols):
        self.text = text
        self.tokens = tokenize(text)
        self.symbols = symbols
        self.pos = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def match(self, *values):
        token = self.peek()
        if token is not None and token.type == 'OP' and token.value in values:
            self.pos += 1
            return token
        return None

    def expect(self, value):
        if self.match(value) is None:
            self.error("expected '{}'".format(value))

    def error(self, what):
        token = self.peek()
        where = "end of input" if token is None else "'{}' at position {}".format(token.value, token.pos)
        raise ModelFileError("Parse error in '{}': {} near {}.".format(self.text, what, where))

    def parse(self):
        if not self.tokens:
            raise ModelFileError("Empty expression.")
        expr = self.parse_expr()
        if self.peek() is not None:
            self.error("unexpected token")
        return expr

    def parse_expr(self):
        left = self.parse_term()
        while True:
            if self.match('+'):
                left = left + self.parse_term()
            elif self.match('-'):
                left = left - self.parse_term()
            else:
                return left

    def parse_term(self):
        left = self.parse_unary()
        while True:
            if self.match('*'):
                left = left * self.parse_unary()
            elif self.match('/'):
                left = left / self.parse_unary()
            else:
                return left

    def parse_unary(self):
        if self.match('-'):
            return -self.parse_unary()
        if self.match('+'):
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.match('^'):
            # right-associative: the exponent is a full unary
            return sp.Pow(base, self.parse_unary())
        return base

    def parse_atom(self):
        token = self.peek()
        if token is None:
            self.error("expected an operand")

        if token.type == 'NUMBER':
            self.pos += 1
            if token.value.isdigit():
                return sp.Integer(token.value)
            return sp.Float(token.value)

        if token.type == 'NAME':
            self.pos += 1
            if token.value in FUNCTIONS:
                self.expect('(')
                arg = self.parse_expr()
                self.expect(')')
                return FUNCTIONS[token.value](arg)
            if token.value in self.symbols:
                return self.symbols[token.value]
            if token.value in CONSTANTS:
                return CONSTANTS[token.value]
            raise ModelFileError("Unknown name '{}' in '{}' (allowed: {}).".format(
                token.value, self.text, ', '.join(self.symbols) or 'none'))

        if self.match('('):
            expr = self.parse_expr()
            self.expect(')')
            return expr

        self.error("expected an operand")

def make_symbols(names):
    return {name: sp.Symbol(name, real=True) for name in names}

def parse_expression(text, symbols):
    """text -> sympy expression over the given {name: Symbol} map."""
    if isinstance(text, (int, float)):
        return sp.sympify(text)
    if not isinstance(text, str):
        raise ModelFileError("Expression must be a string or a number, got {!r}.".format(text))
    return ExpressionParser(text, symbols).parse()

def parse_array(entries, symbols):
    """Nested lists of expression strings -> sympy Array."""
    def walk(node):
        if isinstance(node, (list, tuple)):
            return [walk(n) for n in node]
        return parse_expression(node, symbols)
    try:
        return sp.Array(walk(entries))
    except ValueError as e:
        raise ModelFileError("Ragged expression array: {}".format(e))

#####################################################
#                    COMPILATION                    #
#####################################################

def lambdify(variables, tree):
    """
    numpy callable f(x) for a sympy expression or Array in the ordered
    variables; x is a 1-d array and f(x) an ndarray of the tree's shape.
    """
    variables = list(variables)
    if isinstance(tree, sp.NDimArray):
        shape = tree.shape
        flat = list(tree.reshape(len(tree))) if len(tree) else []
    else:
        shape = ()
        flat = [tree]

    if not variables:
        value = np.array([float(e) for e in flat], dtype=float).reshape(shape)
        return lambda x: value

    func = sp.lambdify([variables], flat, modules='numpy')
    return lambda x: np.array(func(np.asarray(x, dtype=float)), dtype=float).reshape(shape)

def derivative_array(tree, variables):
    """d tree / d v as a sympy Array with the variable axis last."""
    variables = list(variables)
    if not isinstance(tree, sp.NDimArray):
        return sp.Array([sp.diff(tree, v) for v in variables])
    derived = sp.derive_by_array(tree, variables)
    # derive_by_array puts the variable axis first
    rank = len(derived.shape)
    return sp.permutedims(derived, list(range(1, rank)) + [0])
