import ast
from typing import Annotated, Any

from mpmath import mp, mpc, mpf
from pydantic import AfterValidator

from .types import Scalar

_NAMES = {
    "pi": lambda: +mp.pi,
    "e": lambda: +mp.e,
    "inf": lambda: mp.inf,
}

_FUNCS = {
    "sqrt": mp.sqrt,
    "exp": mp.exp,
    "log": mp.log,
    "sin": mp.sin,
    "cos": mp.cos,
    "tan": mp.tan,
    "atan": mp.atan,
}


class ScalarExprVisitor(ast.NodeVisitor):
    """
    Evaluates a small arithmetic expression (e.g. `pi*(1-2/50)`) to an mpmath number
      at the current working precision. Only numbers, `+ - * / **`, unary minus,
      the names `pi`, `e`, `inf` and a handful of elementary functions are allowed.
    """

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_BinOp(self, node):
        left = self.visit(node.left)
        right = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        elif isinstance(node.op, ast.Sub):
            return left - right
        elif isinstance(node.op, ast.Mult):
            return left * right
        elif isinstance(node.op, ast.Div):
            return left / right
        elif isinstance(node.op, ast.Pow):
            return left**right
        raise ValueError(f"Unsupported operator: {type(node.op).__name__}")

    def visit_UnaryOp(self, node):
        operand = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -operand
        elif isinstance(node.op, ast.UAdd):
            return +operand
        raise ValueError(f"Unsupported operator: {type(node.op).__name__}")

    def visit_Call(self, node):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS or node.keywords:
            raise ValueError(f"Unsupported call in expression: {ast.dump(node.func)}")
        args = [self.visit(a) for a in node.args]
        return _FUNCS[node.func.id](*args)

    def visit_Name(self, node):
        if node.id not in _NAMES:
            raise ValueError(f"Unknown name in expression: {node.id}")
        return _NAMES[node.id]()

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int | float | complex):
            raise ValueError(f"Unsupported constant: {node.value!r}")
        # Parse decimal literals from their text so "0.1" means 1/10 at working precision
        if isinstance(node.value, float):
            return mpf(repr(node.value))
        if isinstance(node.value, complex):
            return mpc(node.value)
        return mpf(node.value)

    def generic_visit(self, node):
        raise ValueError(f"Unsupported syntax in expression: {type(node).__name__}")


def parse_scalar(text: str) -> Any:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise ValueError(f"Could not parse expression {text!r}: {e.msg}")
    return ScalarExprVisitor().visit(tree)


def to_mp(value: Scalar) -> mpf | mpc:
    """
    Converts a user-facing scalar to an mpmath number at the working precision.
    """
    match value:
        case str():
            return parse_scalar(value)
        case bool():
            raise ValueError("Booleans are not scalars")
        case int():
            return mpf(value)
        case float():
            # Decimal reading, so 0.1 means 1/10 at the working precision
            return mpf(repr(value))
        case complex():
            return mpc(mpf(repr(value.real)), mpf(repr(value.imag)))
        case mpf() | mpc():
            return +value
    raise ValueError(f"Not a scalar: {value!r}")


def to_mpf(value: Scalar) -> mpf:
    res = to_mp(value)
    if isinstance(res, mpc):
        if res.imag != 0:
            raise ValueError(f"Expected a real value, got {value!r}")
        return res.real
    return res


def is_inf(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip() in ("inf", "+inf")
    try:
        return bool(mp.isinf(value)) and value > 0
    except TypeError:
        return False


def check_scalar(value: Any) -> Any:
    """
    Field validator: accepts anything `to_mp` understands and keeps it as given, so
      expressions are re-evaluated at whatever precision the field is later read at.
    """
    if value is None:
        return value
    with mp.workprec(64):
        to_mp(value)
    return value


ScalarField = Annotated[Any, AfterValidator(check_scalar)]
