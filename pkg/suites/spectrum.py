"""Oscillator spectrum suite: prequantum levels nℏ against corrected levels (n + ½)ℏ."""

import logging
from typing import List

import numpy as np
import pandas as pd

from app.routes import route
from engine.operators import corrected_operator, prequantum_operator, spectrum
from models.basis import BasisSpec
from models.observable import Observable
from models.results import CheckReport
from .base import option, run_check

logger = logging.getLogger(__name__)


def add_arguments(parser):
    parser.add_argument('--n', type=int, help='Truncation order N (levels 0..N-1 are reported)')


def oscillator() -> Observable:
    """ℋ = (p² + q²)/2 = z z̄ / 2."""
    return Observable.from_complex("z*zbar/2")


def _levels_check(check_id: str, levels: List[float], expected: np.ndarray, tolerance: float, inputs: dict):
    def body():
        defect = float(np.max(np.abs(np.asarray(levels) - expected)))
        return {'levels': levels, 'max_defect': defect}, defect <= tolerance
    return run_check(check_id, inputs, body, {'levels': tolerance})


@route('spectrum', add_arguments, help='Oscillator spectra, prequantum vs corrected')
def run(args, state) -> List[CheckReport]:
    config = state['config']['operators']
    hbar = args.hbar
    N = option(args, 'n', config['spectrum_order'])
    tolerance = config['hermitian_tolerance']
    H = oscillator()
    fock = BasisSpec.fock(N, hbar=hbar)
    hermite = BasisSpec.hermite(N, hbar=hbar)
    inputs = {'N': N, 'hbar': hbar, 'observable': H.expr}

    n = np.arange(N)
    prequantum = spectrum(prequantum_operator(H, fock))
    corrected = spectrum(corrected_operator(H, fock))
    schrodinger = spectrum(prequantum_operator(H, hermite))
    logger.info("corrected oscillator levels: %s", corrected)

    state.add_table('spectrum', pd.DataFrame({'n': n, 'energy': corrected}, columns=['n', 'energy']))
    return [
        _levels_check("spectrum.prequantum", prequantum, hbar * n, tolerance, inputs),
        _levels_check("spectrum.corrected", corrected, hbar * (n + 0.5), tolerance, inputs),
        _levels_check("spectrum.schrodinger", schrodinger, hbar * (n + 0.5), tolerance, inputs),
    ]
