import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pipp_approx import diggle_gratton, piecewise_strauss_hard_core, strauss, strauss_hard_core  # noqa: E402


@pytest.fixture(
    params=[
        strauss(0.5, 0.1),
        strauss(0.0, 0.05),
        strauss_hard_core(0.3, 0.025, 0.05),
        piecewise_strauss_hard_core([0.2, 0.5], [0.05, 0.1]),
        piecewise_strauss_hard_core([0.8, 0.2], [0.1, 0.15], delta=0.05),
        diggle_gratton(0.3, 0.15),
        diggle_gratton(1.0, 0.05),
    ],
    ids=["S", "S-hard", "SHC", "PS", "PSHC", "DG-0.3", "DG-1"],
)
def any_model(request):
    return request.param
