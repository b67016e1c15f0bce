"""
Function-spec files: UTF-8 JSON describing one auxiliary function.

    {"type": "step", "breakpoints": ["0.236901"], "values": ["0.971239", "0.873362"]}
    {"type": "constant", "value": "0.888888"}
    {"type": "reference_tv"}

Numbers may be JSON numbers, decimal strings or "p/q" fraction strings; all
of them are read as exact rationals from their text.
"""
import json
import logging
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from app.core.errors import FunctionSpecError
from app.models import AuxFunction, Constant, Dual, ReferenceTV, StepFunction

logger = logging.getLogger(__name__)

NumberText = Union[Decimal, str]


class StepSpec(BaseModel):
    type: Literal["step"]
    breakpoints: List[NumberText]
    values: List[NumberText]


class ConstantSpec(BaseModel):
    type: Literal["constant"]
    value: NumberText


class ReferenceTVSpec(BaseModel):
    type: Literal["reference_tv"]


FunctionSpec = Annotated[Union[StepSpec, ConstantSpec, ReferenceTVSpec], Field(discriminator="type")]

_spec_adapter = TypeAdapter(FunctionSpec)


def spec_to_function(spec: Union[StepSpec, ConstantSpec, ReferenceTVSpec]) -> AuxFunction:
    """Build the domain function; invariants are left to validate()"""
    if isinstance(spec, StepSpec):
        return StepFunction.of(spec.breakpoints, spec.values)
    if isinstance(spec, ConstantSpec):
        return Constant.of(spec.value)
    return ReferenceTV()


def parse_function_text(text: str) -> AuxFunction:
    """
    Parse function-spec JSON text.

    Raises:
        FunctionSpecError: On malformed JSON (with line/column) or schema mismatch
        DomainError: On number text that is not a finite rational
    """
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise FunctionSpecError(f"malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        spec = _spec_adapter.validate_python(raw)
    except ValidationError as e:
        raise FunctionSpecError(f"invalid function spec: {e.errors()[0]['msg']}") from e
    return spec_to_function(spec)


def load_function(path: Union[str, Path]) -> AuxFunction:
    h = parse_function_text(Path(path).read_text(encoding="utf-8"))
    logger.info(f"Loaded {h.kind.value} function from {path}")
    return h


def fraction_text(value: Fraction) -> str:
    """Plain decimal when the expansion terminates, "p/q" otherwise"""
    denominator = value.denominator
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value.numerator * 10**digits // value.denominator
    return format(Decimal(scaled).scaleb(-digits), "f")


def dual_text(d: Dual) -> str:
    return fraction_text(d.exact) if d.is_exact else repr(d.value)


def function_to_spec(h: AuxFunction) -> Dict[str, Any]:
    if isinstance(h, StepFunction):
        return {
            "type": "step",
            "breakpoints": [dual_text(b) for b in h.breakpoints],
            "values": [dual_text(v) for v in h.values],
        }
    if isinstance(h, Constant):
        return {"type": "constant", "value": dual_text(h.value)}
    return {"type": "reference_tv"}


def write_function(path: Union[str, Path], h: AuxFunction) -> None:
    Path(path).write_text(json.dumps(function_to_spec(h), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {h.kind.value} function to {path}")
