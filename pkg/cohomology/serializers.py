"""Serializers for the JSON file formats: series, problem configs and reports"""

# Standard library imports
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

# Third party imports
import numpy as np
from rest_framework import serializers

# Local imports
from .errors import TorusCohomologyError
from .fourier import FourierSeries, from_samples
from .lattice_core import AffineTorusMap, parse_rational
from .utils import read_json


class ComplexField(serializers.Field):
    """Complex number as {"re": float, "im": float}"""

    def to_representation(self, value):
        value = complex(value)
        # + 0.0 folds -0.0 into 0.0
        return {"re": value.real + 0.0, "im": value.imag + 0.0}

    def to_internal_value(self, data):
        if not isinstance(data, dict) or "re" not in data:
            raise serializers.ValidationError('Expected {"re": float, "im": float}.')
        try:
            return complex(float(data["re"]), float(data.get("im", 0.0)))
        except (TypeError, ValueError):
            raise serializers.ValidationError("Complex parts must be numbers.")


# ===============================
# FOURIER SERIES
# ===============================

class FourierTermSerializer(serializers.Serializer):
    """One term {"m": [int, ...], "re": float, "im": float}"""
    m = serializers.ListField(child=serializers.IntegerField(), allow_empty=False)
    re = serializers.FloatField()
    im = serializers.FloatField(required=False, default=0.0)


class FourierSeriesSerializer(serializers.Serializer):
    """Series file {"p": int, "terms": [...]}, terms written in lexicographic frequency order"""
    p = serializers.IntegerField(min_value=1)
    terms = FourierTermSerializer(many=True)

    def validate(self, data):
        for term in data["terms"]:
            if len(term["m"]) != data["p"]:
                raise serializers.ValidationError(
                    {"terms": f"Frequency {term['m']} does not have length {data['p']}."}
                )
        return data

    def create(self, validated_data):
        return FourierSeries.from_terms(
            validated_data["p"],
            ((term["m"], complex(term["re"], term["im"])) for term in validated_data["terms"]),
        )

    def to_representation(self, instance):
        return {
            "p": instance.p,
            "terms": [
                {"m": list(m), "re": amplitude.real + 0.0, "im": amplitude.imag + 0.0}
                for m, amplitude in instance.terms()
            ],
        }


def series_to_dict(series: FourierSeries) -> dict:
    return FourierSeriesSerializer(series).data


def series_from_dict(data) -> FourierSeries:
    serializer = FourierSeriesSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


# ===============================
# PROBLEM CONFIG
# ===============================

@dataclass(frozen=True)
class Problem:
    """A validated ProblemConfig"""
    torus_map: AffineTorusMap
    g: FourierSeries
    f: Optional[FourierSeries] = None
    tol: Optional[float] = None
    hyperbolicity_band: Optional[float] = None
    input_tail: float = 0.0


class ProblemConfigSerializer(serializers.Serializer):
    """
    ProblemConfig:
        p, A (integer rows), b (rationals as "num/den" or decimals),
        g and optional f as inline terms, a series object, a path to a
        series file, or {"samples": "grid.npy", "radius": R},
        tol and hyperbolicityBand (optional)

    Relative paths resolve against context["base_dir"].
    """
    p = serializers.IntegerField(min_value=2)
    A = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    b = serializers.ListField(child=serializers.CharField(), required=False)
    g = serializers.JSONField()
    f = serializers.JSONField(required=False)
    tol = serializers.FloatField(required=False, min_value=0.0)
    hyperbolicityBand = serializers.FloatField(required=False, min_value=0.0, source="hyperbolicity_band")

    def _resolve(self, path) -> Path:
        path = Path(path)
        if not path.is_absolute():
            path = Path(self.context.get("base_dir", ".")) / path
        return path

    def _load_series(self, value, p: int, field: str):
        """Return (series, truncation tail)."""
        if isinstance(value, str):
            value = {"path": value}
        if isinstance(value, list):
            value = {"p": p, "terms": value}
        if not isinstance(value, dict):
            raise serializers.ValidationError({field: "Expected terms, a series object or a path."})

        if "samples" in value:
            try:
                samples = np.load(self._resolve(value["samples"]))
                series, tail = from_samples(samples, int(value.get("radius", 0)))
            except (OSError, ValueError, TorusCohomologyError) as exc:
                raise serializers.ValidationError({field: f"Cannot ingest samples: {exc}"})
            if series.p != p:
                raise serializers.ValidationError({field: f"Sample grid has dimension {series.p}, expected {p}."})
            return series, tail

        if "path" in value:
            try:
                value = read_json(self._resolve(value["path"]))
            except (OSError, ValueError) as exc:
                raise serializers.ValidationError({field: f"Cannot read series file: {exc}"})

        nested = FourierSeriesSerializer(data=value)
        if not nested.is_valid():
            raise serializers.ValidationError({field: nested.errors})
        series = nested.save()
        if series.p != p:
            raise serializers.ValidationError({field: f"Series has dimension {series.p}, expected {p}."})
        return series, 0.0

    def validate(self, data):
        p = data["p"]
        if len(data["A"]) != p or any(len(row) != p for row in data["A"]):
            raise serializers.ValidationError({"A": f"A must be a {p}x{p} integer matrix."})

        b = data.get("b") or ["0"] * p
        if len(b) != p:
            raise serializers.ValidationError({"b": f"b must have {p} entries."})
        try:
            data["b"] = tuple(parse_rational(x) for x in b)
        except TorusCohomologyError as exc:
            raise serializers.ValidationError({"b": exc.message})

        data["g"], data["input_tail"] = self._load_series(data["g"], p, "g")
        if "f" in data:
            data["f"], _ = self._load_series(data["f"], p, "f")
        return data

    def create(self, validated_data):
        return Problem(
            torus_map=AffineTorusMap.build(validated_data["A"], validated_data["b"]),
            g=validated_data["g"],
            f=validated_data.get("f"),
            tol=validated_data.get("tol"),
            hyperbolicity_band=validated_data.get("hyperbolicity_band"),
            input_tail=validated_data["input_tail"],
        )


def problem_config(torus_map: AffineTorusMap, g: FourierSeries) -> dict:
    """ProblemConfig payload for a map and right-hand side"""
    return {
        "p": torus_map.p,
        "A": torus_map.A.as_lists(),
        "b": [str(x) for x in torus_map.b],
        "g": series_to_dict(g),
    }


# ===============================
# REPORTS
# ===============================

class OrbitCheckSerializer(serializers.Serializer):
    representative = serializers.ListField(child=serializers.IntegerField())
    phi = ComplexField(source="value")
    magnitude = serializers.FloatField()
    passed = serializers.BooleanField()


class ObstructionReportSerializer(serializers.Serializer):
    solvable = serializers.BooleanField()
    tol = serializers.FloatField()
    phiZero = ComplexField(source="phi_zero")
    meanPassed = serializers.BooleanField(source="mean_passed")
    orbitChecks = OrbitCheckSerializer(source="orbit_checks", many=True)


class ContinuityRowSerializer(serializers.Serializer):
    r = serializers.IntegerField()
    lhs = serializers.FloatField()
    rhsTruncated = serializers.FloatField(source="rhs_truncated")
    rhsCorrected = serializers.FloatField(source="rhs_corrected")
    holdsTruncated = serializers.BooleanField(source="holds_truncated")
    holdsCorrected = serializers.BooleanField(source="holds_corrected")


class SolveResultSerializer(serializers.Serializer):
    status = serializers.CharField()
    residualNorm = serializers.FloatField(source="residual_norm")
    inputTail = serializers.FloatField(source="input_tail")
    searchRadius = serializers.FloatField(source="search_radius")
    boxRadius = serializers.IntegerField(source="box_radius")
    candidateCount = serializers.IntegerField(source="candidate_count")
    termCount = serializers.SerializerMethodField()
    continuity = ContinuityRowSerializer(many=True)
    obstructions = ObstructionReportSerializer(source="report")

    def get_termCount(self, obj):
        return len(obj.f)


class RootSerializer(serializers.Serializer):
    value = ComplexField()
    modulus = serializers.FloatField()
    multiplicity = serializers.IntegerField()
    geometricMultiplicity = serializers.IntegerField(source="geometric_multiplicity")


class SpectrumReportSerializer(serializers.Serializer):
    p = serializers.IntegerField()
    A = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    characteristicPolynomial = serializers.CharField(source="polynomial_text")
    coefficients = serializers.ListField(child=serializers.IntegerField())
    roots = RootSerializer(many=True)
    hyperbolic = serializers.BooleanField()
    diagonalizable = serializers.BooleanField()
    stableRank = serializers.IntegerField(source="stable_rank", allow_null=True)
    unstableRank = serializers.IntegerField(source="unstable_rank", allow_null=True)
    rhoMinus = serializers.FloatField(source="rho_minus", allow_null=True)
    rhoPlusInv = serializers.FloatField(source="rho_plus_inv", allow_null=True)
    n = serializers.IntegerField(allow_null=True)
    thetaMinus = serializers.FloatField(source="theta_minus", allow_null=True)
    thetaPlusInv = serializers.FloatField(source="theta_plus_inv", allow_null=True)
    eta = serializers.FloatField(allow_null=True)
    mu = serializers.FloatField(allow_null=True)
