import os
import sys
import multiprocessing as mp

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, 'src'))

from algebroid.chart import BaseChart
from algebroid.algebroid import ChartedAlgebroid
from algebroid.fields import zero_field
from poisson.hamiltonian import MechanicalHamiltonian
from utils.numeric_utils import make_rng

MODEL_FILES = os.path.join(ROOT, 'model_files')

# drift workers inherit models with closures, as under main_algebroid
mp.set_start_method('fork', force=True)

@pytest.fixture
def rng():
    return make_rng(1234)

@pytest.fixture
def model_files():
    return MODEL_FILES

@pytest.fixture
def bounded_line():
    """Free particle on TR restricted to the chart (-1, 1)."""
    alg = ChartedAlgebroid(BaseChart(['q1'], [-1.], [1.]), 1,
                           anchor=lambda q: np.eye(1),
                           structure=lambda q: np.zeros((1, 1, 1)),
                           name='bounded line',
                           constant=True)
    mech = MechanicalHamiltonian(lambda q: np.eye(1), zero_field(1, 'V'), constant_cometric=True)
    return alg, mech
