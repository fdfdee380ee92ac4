"""Time the Galerkin right-hand side with the compiled and NumPy backends.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from finmode import _kernels, fixtures
from finmode._kernels import _pykernels
from finmode.dynamics import GalerkinSystem, default_truncation

try:
    from finmode._kernels import _ckernels
except ImportError:
    _ckernels = None

CASES = [
    ("abc", lambda: fixtures.abc(1, 2, 3)),
    ("generic span 1", lambda: fixtures.random_generic(0, 8, span=1)),
    ("generic span 2", lambda: fixtures.random_generic(0, 12, span=2)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    print(f"selected backend: {_kernels.BACKEND}")
    print(f"{'case':<16}{'modes':>7}{'triads':>9}{'python ms':>12}{'cython ms':>12}{'speedup':>9}")
    for name, make in CASES:
        f = make()
        s = GalerkinSystem(default_truncation(f.support), nu=0.1, omega=1.0)
        U = s.to_array(f)
        call = (s.K, s.knorm2, U, s.out, s.i1, s.i2)
        t_py = min(timeit.repeat(lambda: _pykernels.nonlinear_term(*call), number=1, repeat=args.repeat))
        line = f"{name:<16}{len(s):>7}{s.n_triads:>9}{t_py * 1e3:>12.3f}"
        if _ckernels is not None:
            t_c = min(timeit.repeat(lambda: _ckernels.nonlinear_term(*call), number=1, repeat=args.repeat))
            diff = np.abs(np.asarray(_ckernels.nonlinear_term(*call)) - _pykernels.nonlinear_term(*call)).max()
            line += f"{t_c * 1e3:>12.3f}{t_py / t_c:>9.1f}"
            assert diff < 1e-10, diff
        else:
            line += f"{'n/a':>12}{'':>9}"
        print(line)


if __name__ == "__main__":
    main()
