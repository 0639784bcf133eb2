"""Dirac-condition suite: [Q(f), Q(g)] = iℏ Q({f, g}) on admissible observables."""

import logging
from typing import List

import numpy as np

from app.routes import route
from engine.errors import PolarizationNotPreservedError
from engine.operators import dirac_defect, hermite_quadrature_matrix, prequantum_operator
from models.basis import BasisSpec
from models.observable import Observable
from models.results import CheckReport
from .base import option, run_check

logger = logging.getLogger(__name__)

PAIRS = [
    ("q", "p"),
    ("q**2", "p**2"),
    ("q*p", "q"),
    ("q*p", "p**2"),
    ("p**2/2 + q**2/2", "q"),
    ("p**2/2 + q**2/2", "q*p"),
    ("3*q + 2*p", "q**2 - p"),
]


def add_arguments(parser):
    parser.add_argument('--n', type=int, help='Truncation order N of the Hermite basis')


@route('dirac', add_arguments, help='Commutator defects of the prequantum map')
def run(args, state) -> List[CheckReport]:
    config = state['config']['operators']
    hbar = args.hbar
    N = option(args, 'n', config['dirac_order'])
    tolerance = config['dirac_tolerance']
    basis = BasisSpec.hermite(N, hbar=hbar)

    def commutators():
        rows = []
        for f_text, g_text in PAIRS:
            defect = dirac_defect(Observable.from_expr(f_text), Observable.from_expr(g_text), basis)
            rows.append({'f': f_text, 'g': g_text, 'defect': defect})
        worst = max(row['defect'] for row in rows)
        return {'pairs': rows, 'max_defect': worst}, worst <= tolerance

    def multiplication_oracle():
        f = Observable.from_expr("q**2 + q")
        exact = prequantum_operator(f, basis).entries
        quadrature = hermite_quadrature_matrix(f, basis)
        defect = float(np.max(np.abs(exact - quadrature)))
        return {'defect': defect}, defect <= tolerance

    def cubic_rejected():
        try:
            prequantum_operator(Observable.from_expr("q**3"), basis)
        except PolarizationNotPreservedError as e:
            return {'rejected': True, 'reason': str(e)}, True
        return {'rejected': False}, False

    inputs = {'N': N, 'hbar': hbar}
    return [
        run_check("dirac.commutators", inputs, commutators, {'dirac': tolerance}),
        run_check("dirac.multiplication-oracle", inputs, multiplication_oracle, {'dirac': tolerance}),
        run_check("dirac.cubic-rejected", inputs, cubic_rejected),
    ]
