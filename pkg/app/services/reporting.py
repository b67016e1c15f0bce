"""
Serialisable views of certificates and results, shared by the CLI and the API.
"""
import decimal
from decimal import Decimal
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

import mpmath
from pydantic import BaseModel

from app.core.config import settings
from app.models import ArithmeticMode, FeasibilityCertificate, OptimizeResult, RatioResult, TwoStepParams
from app.services.function_io import function_to_spec


def format_number(value: Any, digits: Optional[int] = None) -> str:
    """Decimal text with the given number of significant digits"""
    digits = settings.OUTPUT_DIGITS if digits is None else digits
    if isinstance(value, Fraction):
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            return format(Decimal(value.numerator) / Decimal(value.denominator), "g")
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, digits)
    return f"{float(value):.{digits}g}"


class ExactNumber(BaseModel):
    numerator: str
    denominator: str


JsonNumber = Union[ExactNumber, str]


def to_json_number(value: Any, digits: Optional[int] = None) -> JsonNumber:
    if isinstance(value, Fraction):
        return ExactNumber(numerator=str(value.numerator), denominator=str(value.denominator))
    return format_number(value, max(12, settings.OUTPUT_DIGITS if digits is None else digits))


class QuadraticPieceOut(BaseModel):
    left: JsonNumber
    right: JsonNumber
    a: JsonNumber
    b: JsonNumber
    c: JsonNumber
    worst_z: JsonNumber
    margin: JsonNumber


class CertificateOut(BaseModel):
    verdict: str
    mode: str
    worst_z: JsonNumber
    worst_margin: JsonNumber
    witness: Optional[JsonNumber] = None
    pieces: List[QuadraticPieceOut] = []

    @classmethod
    def from_certificate(cls, cert: FeasibilityCertificate, digits: Optional[int] = None) -> "CertificateOut":
        return cls(
            verdict=cert.verdict.value,
            mode=cert.mode.value,
            worst_z=to_json_number(cert.worst_z, digits),
            worst_margin=to_json_number(cert.worst_margin, digits),
            witness=None if cert.witness is None else to_json_number(cert.witness, digits),
            pieces=[
                QuadraticPieceOut(
                    left=to_json_number(p.left, digits),
                    right=to_json_number(p.right, digits),
                    a=to_json_number(p.a, digits),
                    b=to_json_number(p.b, digits),
                    c=to_json_number(p.c, digits),
                    worst_z=to_json_number(bound.z, digits),
                    margin=to_json_number(bound.margin, digits),
                )
                for p, bound in zip(cert.pieces, cert.piece_bounds)
            ],
        )


def certificate_summary(cert: FeasibilityCertificate, digits: Optional[int] = None) -> str:
    """One-line human summary"""
    line = (
        f"{cert.verdict.value} ({cert.mode.value}) worst_z={format_number(cert.worst_z, digits)} "
        f"worst_margin={format_number(cert.worst_margin, digits)}"
    )
    if cert.mode == ArithmeticMode.EXACT:
        line += f" pieces={len(cert.pieces)}"
    return line


class RatioOut(BaseModel):
    rho: str
    integral_h: str
    certificate: Optional[CertificateOut] = None

    @classmethod
    def from_result(cls, result: RatioResult, digits: Optional[int] = None) -> "RatioOut":
        return cls(
            rho=format_number(result.rho, digits),
            integral_h=format_number(result.integral_h, digits),
            certificate=None
            if result.feasibility is None
            else CertificateOut.from_certificate(result.feasibility, digits),
        )


class TwoStepOut(BaseModel):
    alpha: str
    beta: str
    x: str
    residuals: List[str]
    rho: str

    @classmethod
    def from_params(cls, p: TwoStepParams, rho: Any, digits: int = 15) -> "TwoStepOut":
        return cls(
            alpha=format_number(p.alpha, digits),
            beta=format_number(p.beta, digits),
            x=format_number(p.x, digits),
            residuals=[format_number(r, digits) for r in p.residuals],
            rho=format_number(rho, digits),
        )


class ClosedFormOut(BaseModel):
    alpha: str
    beta: str
    x: str
    rho: str
    alpha_imag_residue: str
    rho_imag_residue: str


class DiscriminantsOut(BaseModel):
    d1: JsonNumber
    d2: JsonNumber
    d3: JsonNumber
    paper_mode: str


class OptimizeOut(BaseModel):
    function: Dict[str, Any]
    rho: str
    integral_h: str
    rounds: int
    cuts: int
    certificate: CertificateOut

    @classmethod
    def from_result(cls, result: OptimizeResult, digits: Optional[int] = None) -> "OptimizeOut":
        return cls(
            function=function_to_spec(result.h),
            rho=format_number(result.rho, digits),
            integral_h=format_number(result.integral_h, digits),
            rounds=result.rounds,
            cuts=len(result.cuts_used),
            certificate=CertificateOut.from_certificate(result.certificate, digits),
        )
