"""Acceptance suite: one test per release criterion, stated tolerances only.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL line
per criterion.
"""

import itertools
import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from meshlink import cli
from meshlink import guided_link as gl
from meshlink import phy, planner, propagation
from meshlink.planner import Node
from meshlink.presets import power_by_name, preset_by_name


@contextmanager
def criterion(name):
    try:
        yield
    except AssertionError:
        print(f"FAIL  {name}")
        raise
    print(f"PASS  {name}")


@pytest.fixture(scope="module")
def default_matrix():
    """One seeded default matrix run (42 cells, packet logs kept), timed."""
    model = phy.default_radio_model(phy.EMPIRICAL)
    start = time.perf_counter()
    results = gl.run_matrix(gl.MatrixConfig(), model, seed=0, collect_packets=True)
    elapsed = time.perf_counter() - start
    return results, elapsed


def thresholds_at_max(results):
    out = {}
    for res in results:
        if res.power.label == "Max":
            out.setdefault(res.preset.name, []).append(res.threshold_attenuation_db)
    return out


def test_threshold_reproduction(default_matrix):
    results, elapsed = default_matrix
    with criterion("threshold reproduction (empirical matrix, Max power)"):
        assert len(results) == 42
        thr = thresholds_at_max(results)
        for name in ("ShortTurbo", "ShortFast", "ShortSlow"):
            for value in thr[name]:
                assert 110.0 <= value <= 120.0, (name, value)
        for name in ("MediumFast", "MediumSlow"):
            for value in thr[name]:
                assert 135.0 <= value <= 150.0, (name, value)
        for value in thr["LongFast"]:
            assert abs(value - 155.0) <= 2.0, value
        for value in thr["LongSlow"]:
            assert abs(value - 180.0) <= 2.0, value
        assert elapsed < 10.0, f"42-cell matrix took {elapsed:.2f}s"


def test_family_gap(default_matrix):
    results, _ = default_matrix
    with criterion("family gap LongSlow - ShortTurbo in [60, 70] dB"):
        thr = thresholds_at_max(results)
        for long_slow_thr in thr["LongSlow"]:
            for short_turbo_thr in thr["ShortTurbo"]:
                gap = long_slow_thr - short_turbo_thr
                assert 60.0 <= gap <= 70.0, gap


def test_sensitivity_anchor():
    with criterion("datasheet sensitivity anchor SF12/125kHz = -137.0 +- 0.1 dBm"):
        model = phy.default_radio_model(phy.DATASHEET)
        value = phy.sensitivity_dbm(preset_by_name("LongSlow"), model)
        assert abs(value - (-137.0)) <= 0.1, value


def test_sub_noise_floor_failure_point():
    with criterion("datasheet LongSlow failure: mean SNR at last pass in [-20, -16] dB"):
        model = phy.default_radio_model(phy.DATASHEET)
        preset = preset_by_name("LongSlow")
        power = power_by_name("Max")
        chain = gl.auto_chain(preset, power, model)
        result = gl.run_sweep(preset, power, chain, model, seed=0, collect_packets=False)
        assert result.threshold_attenuation_db is not None
        last_pass = next(
            r for r in result.records if r.attenuation_db == result.threshold_attenuation_db
        )
        assert -20.0 <= last_pass.mean_snr_db <= -16.0, last_pass.mean_snr_db


def test_prx_correction_property():
    with criterion("received-power correction piecewise property on the full grid"):
        for k in range(0, 281):  # rssi -140 .. 0 in 0.5 dB steps
            rssi = -140.0 + k / 2.0
            for j in range(0, 81):  # snr -25 .. +15 in 0.5 dB steps
                snr = -25.0 + j / 2.0
                got = phy.corrected_prx_dbm(rssi, snr)
                if snr < 0:
                    assert got == rssi + snr
                else:
                    assert got == rssi


def test_per_matches_packet_log_recount(default_matrix):
    results, _ = default_matrix
    with criterion("PER equals brute-force packet-log recount for every burst"):
        checked = 0
        for res in results:
            tally: dict[float, list[int]] = {}
            for ev in res.packet_events:
                sent_lost = tally.setdefault(ev.attenuation_db, [0, 0])
                sent_lost[0] += 1
                if not ev.received:
                    sent_lost[1] += 1
            assert len(tally) == len(res.records)
            for record in res.records:
                sent, lost = tally[record.attenuation_db]
                assert sent == record.sent
                assert lost == record.lost
                assert record.per_percent == 100.0 * lost / sent  # exact
                checked += 1
        assert checked == 42 * 111


def test_rssi_artefact_rendering():
    with criterion("RSSI artefacts: saturation at 0 dBm, plateau at -100 dBm"):
        model = phy.default_radio_model()
        assert model.rssi_saturation_dbm == 0.0
        assert model.rssi_register_floor_dbm == -100.0
        assert phy.reported_rssi_dbm(10.0, model) == 0.0
        assert abs(phy.reported_rssi_dbm(-160.0, model) - (-100.0)) < 0.1


def test_long_moderate_anomaly():
    with criterion("LongModerate fault: threshold 80 +- 1 dB at SNR > +8; healthy otherwise"):
        lm = preset_by_name("LongModerate")
        power = power_by_name("Max")

        faulty = phy.default_radio_model(phy.EMPIRICAL)
        assert faulty.long_moderate_fault
        chain = gl.auto_chain(lm, power, faulty)
        res = gl.run_sweep(lm, power, chain, faulty, seed=0, collect_packets=False)
        assert abs(res.threshold_attenuation_db - faulty.fault_cutoff_db) <= 1.0
        last_pass = next(
            r for r in res.records if r.attenuation_db == res.threshold_attenuation_db
        )
        assert last_pass.mean_snr_db > 8.0

        healthy = phy.default_radio_model(phy.EMPIRICAL)
        healthy.long_moderate_fault = False
        thresholds = {}
        for name in ("MediumSlow", "LongModerate", "LongSlow"):
            preset = preset_by_name(name)
            chain = gl.auto_chain(preset, power, healthy)
            result = gl.run_sweep(preset, power, chain, healthy, seed=0, collect_packets=False)
            thresholds[name] = result.threshold_attenuation_db
        assert thresholds["MediumSlow"] < thresholds["LongModerate"] < thresholds["LongSlow"]


def test_path_loss_inversion():
    with criterion("path-loss inversion exact to 1e-6 dB over 1000 random models"):
        rng = np.random.default_rng(97)
        for _ in range(1000):
            model = propagation.PathLossModel(
                exponent=float(rng.uniform(1.6, 6.5)),
                frequency_hz=float(rng.uniform(400e6, 2.4e9)),
                reference_distance_m=float(rng.uniform(0.5, 10.0)),
                excess_loss_db=float(rng.uniform(0.0, 25.0)),
            )
            margin = float(rng.uniform(0.0, 15.0))
            budget = model.d0_loss_db + model.excess_loss_db + margin + float(
                rng.uniform(0.5, 150.0)
            )
            reach = propagation.max_range_m(model, budget, margin)
            error = abs(propagation.path_loss_db(model, reach) - (budget - margin))
            assert error < 1e-6, error


def test_table5_short_band():
    with criterion("dense-urban model reproduces Short row range/density within factor 2"):
        model = propagation.model_by_name("dense-urban")
        near = propagation.max_range_m(model, 110.0)  # Short band lower edge
        far = propagation.max_range_m(model, 120.0)  # Short band upper edge
        assert 200.0 / 2 <= near <= 400.0 * 2, near
        assert 200.0 / 2 <= far <= 400.0 * 2, far
        assert 200.0 <= far <= 400.0  # the 120 dB end lands inside the band itself
        densest = propagation.density_per_km2(near)
        assert 25.0 / 2 <= densest <= 80.0 * 2, densest


def brute_force_reachable(adjacency, a, b, hop_limit):
    if a == b:
        return True
    paths = [[a]]
    for _ in range(hop_limit):
        fresh = []
        for path in paths:
            for nxt in adjacency[path[-1]]:
                if nxt in path:
                    continue
                if nxt == b:
                    return True
                fresh.append(path + [nxt])
        paths = fresh
    return False


def brute_force_components(node_ids, adjacency):
    remaining = set(node_ids)
    components = []
    while remaining:
        seed_node = min(remaining)
        grown = {seed_node}
        while True:
            extension = {
                m for n in grown for m in adjacency[n] if m not in grown
            }
            if not extension:
                break
            grown |= extension
        components.append(sorted(grown))
        remaining -= grown
    return sorted(components)


def test_connectivity_oracle():
    with criterion("connectivity equals exhaustive path enumeration on 200 scenarios"):
        rng = np.random.default_rng(1234)
        presets = ["ShortTurbo", "ShortSlow", "MediumFast", "LongFast", "LongSlow"]
        for _ in range(200):
            n = int(rng.integers(1, 11))
            nodes = [
                Node(f"n{i}", float(x), float(y))
                for i, (x, y) in enumerate(rng.uniform(0, 4500, size=(n, 2)))
            ]
            scenario = planner.Scenario(
                nodes=nodes,
                preset=preset_by_name(str(rng.choice(presets))),
                power=power_by_name(str(rng.choice(["Low", "Medium", "Max"]))),
                path_loss=propagation.model_by_name(
                    str(rng.choice(["dense-urban", "urban", "suburban"]))
                ),
                radio=phy.default_radio_model(),
                fade_margin_db=float(rng.uniform(0, 12)),
                hop_limit=int(rng.integers(1, 5)),
            )
            adjacency = {node.id: set() for node in nodes}
            if n >= 2:
                for link in planner.assess_links(scenario):
                    if link.closed:
                        adjacency[link.a].add(link.b)
                        adjacency[link.b].add(link.a)
            report = planner.connectivity(scenario)
            ids = [node.id for node in nodes]
            assert sorted(report.components) == brute_force_components(ids, adjacency)
            for a, b in itertools.combinations(ids, 2):
                expected = brute_force_reachable(adjacency, a, b, scenario.hop_limit)
                assert (b in report.reachable[a]) == expected, (a, b)


def _files_equal(dir_a: Path, dir_b: Path):
    names_a = sorted(p.relative_to(dir_a) for p in dir_a.rglob("*") if p.is_file())
    names_b = sorted(p.relative_to(dir_b) for p in dir_b.rglob("*") if p.is_file())
    assert names_a == names_b
    for rel in names_a:
        assert (dir_a / rel).read_bytes() == (dir_b / rel).read_bytes(), rel


def test_artifact_determinism(tmp_path):
    with criterion("re-running a command from its embedded config is byte-identical"):
        sweep_args = ["sweep", "--preset", "long_slow", "--seed", "7"]
        a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
        assert cli.main(sweep_args + ["--output", str(a)]) == 0
        assert cli.main(sweep_args + ["--output", str(b)]) == 0
        _files_equal(a, b)
        # artifact doubles as the config that regenerates it
        assert cli.main(["sweep", "--config", str(a / "sweep.json"), "--output", str(c)]) == 0
        _files_equal(a, c)

        m1, m2 = tmp_path / "m1", tmp_path / "m2"
        matrix_args = ["matrix", "--presets", "long_moderate", "--seed", "3"]
        assert cli.main(matrix_args + ["--output", str(m1)]) == 0
        assert cli.main(["matrix", "--config", str(m1 / "index.json"), "--output", str(m2)]) == 0
        _files_equal(m1, m2)

        p1, p2 = tmp_path / "p1", tmp_path / "p2"
        assert cli.main(["plan", "--format", "json", "--output", str(p1)]) == 0
        assert cli.main(["plan", "--format", "json", "--output", str(p2)]) == 0
        _files_equal(p1, p2)

        t1, t2 = tmp_path / "t1", tmp_path / "t2"
        assert cli.main(["toa", "--output", str(t1)]) == 0
        assert cli.main(["toa", "--config", str(t1 / "toa.json"), "--output", str(t2)]) == 0
        _files_equal(t1, t2)
