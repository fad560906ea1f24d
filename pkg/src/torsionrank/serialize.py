"""Lossless JSON form of balls: exact decimal midpoint, radius as mantissa * 2**exponent."""

from __future__ import annotations

from fractions import Fraction

from mpmath.libmp import fzero

from .balls import ComplexBall, RealBall, decimal_to_mpf, mpf_to_decimal

__all__ = ["ball_to_json", "ball_from_json", "mpf_to_json", "to_jsonable"]


def _radius_parts(rad) -> tuple[int, int]:
    if rad == fzero:
        return 0, 0
    sign, man, exp, _ = rad
    if sign:
        raise ValueError("negative radius")
    return int(man), int(exp)


def mpf_to_json(x) -> str:
    return mpf_to_decimal(x)


def ball_to_json(x) -> dict:
    if isinstance(x, ComplexBall):
        return {"re": ball_to_json(x.re), "im": ball_to_json(x.im)}
    if isinstance(x, RealBall):
        man, exp = _radius_parts(x.rad)
        return {"mid": mpf_to_decimal(x.mid), "rad_man": man, "rad_exp": exp}
    raise TypeError(f"not a ball: {type(x).__name__}")


def ball_from_json(d: dict, prec: int = 152):
    if "re" in d:
        return ComplexBall(ball_from_json(d["re"], prec), ball_from_json(d["im"], prec))
    man, exp = d["rad_man"], d["rad_exp"]
    rad = fzero if man == 0 else (0, man, exp, man.bit_length())
    return RealBall(decimal_to_mpf(d["mid"]), rad, prec)


def to_jsonable(obj):
    """Recursively convert balls, Fractions and tuples into JSON-ready values."""
    if isinstance(obj, (RealBall, ComplexBall)):
        return ball_to_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj
