import json
import math

import numpy as np
import pytest

from meshlink import propagation as pp
from meshlink.presets import PRESETS
from meshlink.propagation import (
    PathLossModel,
    density_per_km2,
    max_range_m,
    model_by_name,
    path_loss_db,
    regime_for,
)


class TestPathLoss:
    def test_free_space_1km_915mhz(self):
        model = model_by_name("free-space")
        # independent hand form: 32.45 + 20*log10(915 MHz) + 20*log10(1 km)
        expected = 32.45 + 20.0 * math.log10(915.0)
        assert path_loss_db(model, 1000.0) == pytest.approx(expected, abs=1e-9)
        assert path_loss_db(model, 1000.0) == pytest.approx(91.68, abs=0.01)

    def test_reference_distance_gives_reference_loss(self):
        model = PathLossModel(exponent=3.5, reference_loss_db=40.0)
        assert path_loss_db(model, model.reference_distance_m) == 40.0

    def test_doubling_distance_under_n35(self):
        model = model_by_name("dense-urban")
        step = path_loss_db(model, 2000.0) - path_loss_db(model, 1000.0)
        assert step == pytest.approx(10.0 * 3.5 * math.log10(2.0), abs=1e-9)

    def test_below_reference_distance_rejected(self):
        model = model_by_name("dense-urban")
        with pytest.raises(ValueError):
            path_loss_db(model, 0.5)

    def test_strictly_increasing(self):
        model = model_by_name("urban")
        distances = np.linspace(1.0, 10_000.0, 200)
        losses = [path_loss_db(model, d) for d in distances]
        assert all(b > a for a, b in zip(losses, losses[1:]))

    def test_excess_loss_is_flat(self):
        base = PathLossModel(exponent=3.5)
        lossy = PathLossModel(exponent=3.5, excess_loss_db=12.0)
        for d in (1.0, 50.0, 4000.0):
            assert path_loss_db(lossy, d) == pytest.approx(path_loss_db(base, d) + 12.0)


class TestMaxRange:
    def test_short_band_reconstruction(self):
        model = model_by_name("dense-urban")
        assert max_range_m(model, 120.0) == pytest.approx(333.79, abs=0.01)
        assert 200.0 <= max_range_m(model, 120.0) <= 400.0

    def test_inversion_identity_randomised(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            model = PathLossModel(
                exponent=float(rng.uniform(1.6, 6.5)),
                frequency_hz=float(rng.uniform(400e6, 2.4e9)),
                reference_distance_m=float(rng.uniform(0.5, 10.0)),
                excess_loss_db=float(rng.uniform(0.0, 20.0)),
            )
            margin = float(rng.uniform(0.0, 15.0))
            floor = model.d0_loss_db + model.excess_loss_db
            budget = floor + margin + float(rng.uniform(0.5, 140.0))
            reach = max_range_m(model, budget, margin)
            assert abs(path_loss_db(model, reach) - (budget - margin)) < 1e-6

    def test_monotone_in_budget(self):
        model = model_by_name("dense-urban")
        assert max_range_m(model, 110.0) < max_range_m(model, 120.0)

    def test_budget_too_small(self):
        model = model_by_name("dense-urban")
        with pytest.raises(ValueError):
            max_range_m(model, 30.0)


class TestDensity:
    def test_disc_bound_examples(self):
        assert density_per_km2(200.0, overlap_factor=1.0) == 8
        assert density_per_km2(200.0) == 24  # default overlap 3
        assert density_per_km2(1000.0, overlap_factor=1.0) == 1

    def test_doubling_range_quarters_raw_density(self):
        assert density_per_km2(400.0, overlap_factor=1.0) == 2  # 8 -> 2

    def test_validation(self):
        with pytest.raises(ValueError):
            density_per_km2(0.0)
        with pytest.raises(ValueError):
            density_per_km2(100.0, overlap_factor=0.5)


class TestRegimes:
    def test_partition_covers_catalog_exactly_once(self):
        regimes = {}
        for preset in PRESETS:
            regimes.setdefault(regime_for(preset), []).append(preset.name)
        assert regimes == {
            "HighDensity": ["ShortTurbo", "ShortFast", "ShortSlow"],
            "BalancedUrban": ["MediumFast", "MediumSlow", "LongFast"],
            "MaximumRange": ["LongModerate", "LongSlow"],
        }


class TestModelPresets:
    def test_builtin_names(self):
        assert set(pp.MODEL_PRESETS) == {"dense-urban", "urban", "suburban", "free-space"}
        assert pp.MODEL_PRESETS["dense-urban"].exponent == 3.5
        assert pp.MODEL_PRESETS["urban"].exponent == 4.0

    def test_free_space_is_forced_special_case(self):
        model = model_by_name("free-space")
        assert model.exponent == 2.0
        assert model.excess_loss_db == 0.0

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="dense-urban"):
            model_by_name("swamp")

    def test_exponent_bounds(self):
        with pytest.raises(ValueError):
            PathLossModel(exponent=1.0)
        with pytest.raises(ValueError):
            PathLossModel(exponent=7.0)

    def test_load_models_from_file(self, tmp_path):
        doc = {
            "campus": {"kind": "log_distance", "exponent": 2.9, "frequency_hz": 868e6},
            "lab": {"kind": "free_space"},
        }
        path = tmp_path / "models.json"
        path.write_text(json.dumps(doc))
        models = pp.load_models(str(path))
        assert models["campus"].exponent == 2.9
        assert models["campus"].name == "campus"
        assert models["lab"].exponent == 2.0

    def test_round_trip_dict(self):
        model = PathLossModel(exponent=4.2, excess_loss_db=6.0, name="custom")
        clone = pp.model_from_dict(pp.model_to_dict(model))
        assert clone == model
