"""Backend parity and kernel-vs-predicate agreement.

The compiled and plain paths must be bit-identical, and the mark-code
enumerations must coincide with filtering every assignment through the
pure predicates.
"""

import itertools
import random

import numpy as np
import pytest

from meccount import Pdag, UndirectedGraph, set_backend, current_backend
from meccount import _kernels
from meccount.mecrules import _collider_triples, _encode, is_mec, is_partial_mec

from conftest import connected_graphs, random_connected_graph


@pytest.fixture
def restore_backend():
    before = current_backend()
    yield
    set_backend(before)


BACKENDS = ["python"] + (["numba"] if _kernels.HAVE_NUMBA else [])


def _random_encoded(rng):
    G = random_connected_graph(rng, rng.randint(2, 7))
    return G, _encode(G)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")
class TestParity:
    def test_acyclic_masks(self, restore_backend):
        rng = random.Random(70)
        for _ in range(12):
            G, (n, eu, ev, skel, pairs) = _random_encoded(rng)
            m = len(pairs)
            outs = {}
            for b in BACKENDS:
                set_backend(b)
                outs[b] = _kernels.acyclic_masks(n, eu, ev, 0, 1 << m)
            assert np.array_equal(outs["python"], outs["numba"])

    def test_mark_codes(self, restore_backend):
        rng = random.Random(71)
        for flag in (False, True):
            for _ in range(10):
                G, (n, eu, ev, skel, pairs) = _random_encoded(rng)
                outs = {}
                for b in BACKENDS:
                    set_backend(b)
                    outs[b] = _kernels.mark_codes(n, eu, ev, skel, flag)
                assert np.array_equal(outs["python"], outs["numba"])

    def test_collider_words(self, restore_backend):
        rng = random.Random(72)
        for _ in range(10):
            G, (n, eu, ev, skel, pairs) = _random_encoded(rng)
            m = len(pairs)
            e1, w1, e2, w2 = _collider_triples(n, pairs, skel)
            nwords = max(1, (len(e1) + 63) // 64)
            masks = _kernels.acyclic_masks(n, eu, ev, 0, 1 << m)
            outs = {}
            for b in BACKENDS:
                set_backend(b)
                outs[b] = _kernels.collider_words(masks, e1, w1, e2, w2, nwords)
            assert np.array_equal(outs["python"], outs["numba"])


class TestKernelSemantics:
    def _decode(self, G, pairs, code):
        und, dire = [], []
        for j, (i, k) in enumerate(pairs):
            t = (code >> (2 * j)) & 3
            u, v = G.vertices[i], G.vertices[k]
            if t == 0:
                und.append((u, v))
            elif t == 1:
                dire.append((u, v))
            else:
                dire.append((v, u))
        return Pdag(vertices=G.vertices, undirected=und, directed=dire)

    @pytest.mark.parametrize("require_protection", [False, True])
    def test_mark_codes_match_predicates(self, require_protection):
        pred = is_mec if require_protection else is_partial_mec
        for G in connected_graphs(4):
            n, eu, ev, skel, pairs = _encode(G)
            got = {
                self._decode(G, pairs, int(c))
                for c in _kernels.mark_codes(n, eu, ev, skel, require_protection)
            }
            expected = set()
            for marks in itertools.product((0, 1, 2), repeat=len(pairs)):
                code = sum(m << (2 * j) for j, m in enumerate(marks))
                P = self._decode(G, pairs, code)
                if pred(P):
                    expected.add(P)
            assert got == expected

    def test_chordal_bits_matches_lbfs_test(self):
        rng = random.Random(73)
        for _ in range(60):
            G = random_connected_graph(rng, rng.randint(2, 8))
            n, eu, ev, skel, pairs = _encode(G)
            und = skel.copy()
            assert _kernels.chordal_bits(n, und) == G.is_chordal()

    def test_acyclic_masks_chunk_stitching(self):
        G = UndirectedGraph(edges=[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
        n, eu, ev, skel, pairs = _encode(G)
        m = len(pairs)
        whole = _kernels.acyclic_masks(n, eu, ev, 0, 1 << m)
        parts = [
            _kernels.acyclic_masks(n, eu, ev, lo, min(lo + 7, 1 << m))
            for lo in range(0, 1 << m, 7)
        ]
        assert np.array_equal(whole, np.concatenate(parts))
