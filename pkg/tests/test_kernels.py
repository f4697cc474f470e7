import os
import subprocess
import sys

import numpy as np
import pytest

from hyperforge import _kernels as kn
from hyperforge import catalog, forms

numba_only = pytest.mark.skipif(kn.BACKEND != "numba", reason="numba backend not active")

STRUCTURES = ["K", "Q2", "H3", "X2", "FAN8", "SQ7"]


@numba_only
@pytest.mark.parametrize("name", STRUCTURES)
def test_assoc_and_distrib_parity(name):
    S = catalog.by_name(name)
    for T in (S.add, S.mul):
        assert tuple(kn._assoc_witness_nb(T)) == kn._assoc_witness_np(T)
    for full in (False, True):
        assert tuple(kn._distrib_witness_nb(S.add, S.mul, full)) == \
            kn._distrib_witness_np(S.add, S.mul, full)


@numba_only
def test_image_parity():
    rng = np.random.default_rng(7)
    S = catalog.by_name("FAN8")
    for _ in range(50):
        A = rng.random(S.size) < 0.4
        B = rng.random(S.size) < 0.4
        assert (kn._image_nb(S.add, A, B) == kn._image_np(S.add, A, B)).all()


@numba_only
def test_bfs_parity():
    F = catalog.by_name("FAN8")
    G = forms.group(F)
    rng = np.random.default_rng(3)
    for _ in range(20):
        start = np.bincount(rng.integers(0, G.g, size=4), minlength=G.g).astype(np.int64)
        other = np.bincount(rng.integers(0, G.g, size=4), minlength=G.g).astype(np.int64)
        for mode in (0, 1):
            args = (start, G.mul, G.iso, G.neg, mode, kn.multiset_key(other, 5), 10 ** 5)
            nb = kn._bfs_nb(*args)
            np_ = kn._bfs_np(*args)
            assert bool(nb[0]) == bool(np_[0])
            assert int(nb[2]) == int(np_[2])


def _run(backend):
    env = dict(os.environ, HYPERFORGE_KERNELS=backend)
    cmd = [sys.executable, "-m", "hyperforge.cli", "hauptsatz", "--base", "catalog:FAN4",
           "--n", "2", "--terms", "2", "--json"]
    out = subprocess.run(cmd, capture_output=True, text=True, env=env, check=False)
    return out.returncode, out.stdout


def test_backends_give_same_report():
    assert _run("numpy") == _run("numba")


def test_bad_backend_rejected():
    env = dict(os.environ, HYPERFORGE_KERNELS="fortran")
    out = subprocess.run([sys.executable, "-c", "import hyperforge._kernels"],
                         capture_output=True, text=True, env=env)
    assert out.returncode != 0 and "HYPERFORGE_KERNELS" in out.stderr
