import os
import subprocess
import sys

import numpy as np
import pytest

from finmode import _kernels, fixtures
from finmode._kernels import _pykernels
from finmode.dynamics import GalerkinSystem, default_truncation

compiled = pytest.mark.skipif(_kernels.BACKEND != "cython", reason="compiled extension not built")


def system_and_state(seed):
    f = fixtures.random_generic(seed, 7, span=1)
    sys_ = GalerkinSystem(default_truncation(f.support), nu=0.1, omega=1.3)
    rng = np.random.default_rng(seed)
    U = sys_.to_array(f) + 0.01 * (rng.normal(size=(len(sys_), 3)) + 1j * rng.normal(size=(len(sys_), 3)))
    return sys_, sys_.symmetrize(U)


@compiled
@pytest.mark.parametrize("seed", range(3))
def test_backends_agree(seed):
    from finmode._kernels import _ckernels

    s, U = system_and_state(seed)
    a = np.asarray(_ckernels.nonlinear_term(s.K, s.knorm2, U, s.out, s.i1, s.i2))
    b = _pykernels.nonlinear_term(s.K, s.knorm2, U, s.out, s.i1, s.i2)
    assert np.allclose(a, b, rtol=0, atol=1e-12 * np.abs(b).max())
    assert np.allclose(np.asarray(_ckernels.apply_linear(s.L, U)), _pykernels.apply_linear(s.L, U),
                       rtol=0, atol=1e-14)


def test_empty_truncation():
    s = GalerkinSystem([])
    U = np.zeros((0, 3), complex)
    assert _kernels.nonlinear_term(s.K, s.knorm2, U, s.out, s.i1, s.i2).shape == (0, 3)


def test_pure_python_switch():
    env = dict(os.environ, FINMODE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from finmode import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
