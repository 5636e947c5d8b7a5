"""SystemFile JSON documents, the solution schema and CSV matrix export."""
import csv
import json
from fractions import Fraction
from typing import Dict, TextIO

from .khov import graded_support
from .km import KMMatrix, StructuredSystem
from .poly import FieldSpec


def field_to_json(field: FieldSpec):
    return {'Fp': field.modulus} if field.is_prime_field else 'QQ'


def scalar_to_json(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def monomial_label(exponent) -> str:
    factors = [f"x{j}" if k == 1 else f"x{j}^{k}" for j, k in enumerate(exponent) if k]
    return '*'.join(factors) or '1'


def system_to_json(system: StructuredSystem, **extra) -> Dict:
    """Generators as text, equations as exact coefficient forms over the generators."""
    par = system.par
    equations = []
    for equation in system.equations:
        coeffs = [{'alpha': list(alpha), 'c': scalar_to_json(c)} for alpha, c in sorted(equation.coeff_form.items(),
                                                                                         reverse=True)]
        equations.append({'degree': equation.degree, 'coeffs': coeffs})
    document = {
        'field': field_to_json(par.field),
        'vars': list(par.varnames),
        'weight': list(par.order.omega),
        'phi': [f.to_text() for f in par.phi],
        'equations': equations,
    }
    if system.label:
        document['label'] = system.label
    document.update({key: value for key, value in extra.items() if value is not None})
    return document


def instance_to_json(instance) -> Dict:
    return system_to_json(instance.system, dreg=instance.recommended_dreg, expected_count=instance.expected_count)


def dumps(document) -> str:
    return json.dumps(document, indent=2) + '\n'


def solutions_to_json(solutions, mode: str = 'first') -> Dict:
    ms = solutions.multiplication
    coords = solutions.normalized(mode)
    rows = []
    for i, row in enumerate(coords):
        entry = {'coords': [[float(z.real), float(z.imag)] for z in row]}
        if solutions.residuals:
            entry['residual'] = float(solutions.residuals[i])
        rows.append(entry)
    diagnostics = dict(solutions.diagnostics)
    document = {
        'delta': solutions.delta,
        'dreg': solutions.dreg,
        'h': [scalar_to_json(c) for c in ms.h_coeffs] if ms else [],
        'solutions': rows,
        'diagnostics': diagnostics,
    }
    if solutions.warnings:
        document['warnings'] = list(solutions.warnings)
    return document


def count_to_json(solutions) -> Dict:
    ms = solutions.multiplication
    return {
        'delta': ms.delta if ms else 0,
        'dreg': solutions.dreg,
        'h': [scalar_to_json(c) for c in ms.h_coeffs] if ms else [],
        'field': ms.field.label if ms else None,
    }


def write_km_csv(system: StructuredSystem, matrix: KMMatrix, stream: TextIO):
    par = system.par
    columns = graded_support(par, matrix.degree)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['i', 'gamma'] + [monomial_label(columns.monomials[beta]) for beta in matrix.col_labels])
    for (i, gamma), row in zip(matrix.row_labels, matrix.entries):
        lower = graded_support(par, gamma[0])
        writer.writerow([i, monomial_label(lower.monomials[gamma])] + [scalar_to_json(v) for v in row])


def write_matrices_csv(ms, stream: TextIO):
    """One block per multiplication matrix, rows ``j,r,entries...``."""
    writer = csv.writer(stream, lineterminator='\n')
    par = ms.system.par
    support = graded_support(par, ms.degree)
    writer.writerow(['j', 'row'] + [monomial_label(support.monomials[beta]) for beta in ms.b_cols])
    for j, mat in enumerate(ms.mats):
        for r, row in enumerate(mat):
            writer.writerow([j, r] + [scalar_to_json(v) for v in row])
