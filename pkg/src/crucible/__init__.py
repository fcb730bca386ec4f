"""Canvas-driven test authoring and native execution for Alloy models."""

from .errors import CrucibleError
from .evaluator import RunResult, run_test
from .oracle import Scope, enumerate_satisfiable
from .parser import parse_formula_block, parse_model
from .schema import ModelSchema, resolve, schema_to_json
from .store import ProjectStore
from .testcase import Project, TestCase, Valuation, derive_valuation
from .translator import CommandString, generate_command_string

__all__ = [
    "CommandString",
    "CrucibleError",
    "ModelSchema",
    "Project",
    "ProjectStore",
    "RunResult",
    "Scope",
    "TestCase",
    "Valuation",
    "derive_valuation",
    "enumerate_satisfiable",
    "generate_command_string",
    "parse_formula_block",
    "parse_model",
    "resolve",
    "run_test",
    "schema_to_json",
]

__version__ = "0.1.0"
