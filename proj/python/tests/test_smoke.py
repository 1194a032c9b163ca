# Copyright 2026 The bintemp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import bintemp


def test_softmax_and_predict():
    p = bintemp.softmax([1.0, 0.0])
    assert p[0] == pytest.approx(0.73106, abs=1e-5)
    pred = bintemp.predict([3.0, 1.0, 0.0], 1.0)
    assert pred.predicted_class == 0
    e3 = math.exp(3.0)
    assert pred.confidence == pytest.approx(e3 / (e3 + math.e + 1.0), rel=1e-12)
    assert bintemp.predict([3.0, 1.0, 0.0], 2.0).confidence < pred.confidence


def test_errors_surface_as_value_errors():
    with pytest.raises(bintemp.BintempError):
        bintemp.scaled_softmax([1.0, 0.0], 0.0)
    with pytest.raises(ValueError):
        bintemp.softmax([float("nan"), 0.0])


def test_dataset_round_trip(tmp_path):
    logits = np.array([[1.0, 2.0, 0.5], [0.0, -1.0, 3.0]])
    data = bintemp.LogitDataset(logits, [1, 2], ["a", "b"])
    assert len(data) == 2
    assert data.num_classes == 3
    np.testing.assert_array_equal(data.logits, logits)
    path = str(tmp_path / "d.csv")
    bintemp.write_logits_csv(path, data)
    back = bintemp.read_logits_csv(path)
    np.testing.assert_array_equal(back.logits, logits)
    assert list(back.ids) == ["a", "b"]


def test_ece_hand_value():
    conf = [0.6, 0.8, 0.9, 0.3]
    correct = [True, False, True, False]
    assert f"{bintemp.ece_of(conf, correct, 2):.4f}" == "0.1500"
    report = bintemp.reliability(conf, correct, 2)
    assert [b.count for b in report.bins] == [1, 3]
    assert report.to_csv().startswith("lower,upper,count,accuracy,avg_confidence\n")


def test_ts_recovers_temperature():
    data = bintemp.generate(50000, profile="const:2.5", seed=1)
    fitted = bintemp.fit_temperature(data)
    assert abs(fitted.temperature - 2.5) <= 0.05
    ts = bintemp.fit_ts(data)
    assert ts.method == bintemp.MapMethod.TS
    assert ts.temperatures[0] == pytest.approx(fitted.temperature)


def test_bts_beats_ts_on_piecewise_data():
    val = bintemp.generate(100000, profile="piecewise:0.8,1.2,3.0", seed=3)
    test = bintemp.generate(100000, profile="piecewise:0.8,1.2,3.0", seed=4)
    spec = bintemp.bins_by_count(bintemp.raw_confidences(val), 10)
    assert spec.num_bins == 10
    labels = np.asarray(test.labels)

    def test_ece(cal_map):
        cls, conf, _ = bintemp.apply_map(test, cal_map)
        return bintemp.ece_of(conf.tolist(), (cls == labels).tolist())

    assert test_ece(bintemp.fit_bts(val, spec)) < test_ece(bintemp.fit_ts(val))


def test_apply_map_keeps_classes_and_map_json_round_trips():
    val = bintemp.generate(3000, profile="piecewise:0.8,1.2,3.0", seed=5)
    cal_map = bintemp.fit_bts(val, bintemp.bins_confidence_interval(15))
    cls, conf, bins = bintemp.apply_map(val, cal_map)
    np.testing.assert_array_equal(cls, np.argmax(val.logits, axis=1))
    assert np.all((conf > 0) & (conf <= 1))
    assert np.all((bins >= 0) & (bins < 15))
    assert bintemp.CalibrationMap.from_json(cal_map.to_json()) == cal_map


def test_abts_consistency_and_union():
    val = bintemp.generate(2000, profile="piecewise:0.8,1.2,3.0", seed=6)
    selection = bintemp.select_for_augmentation(val, 0.8)
    ids = list(selection.selected_ids)
    index = {sid: i for i, sid in enumerate(val.ids)}
    rows = [index[s] for s in ids]
    aug = bintemp.LogitDataset(val.logits[rows], [val.labels[i] for i in rows],
                               [s + "__aug1" for s in ids])
    spec = bintemp.bins_confidence_interval(10)
    abts = bintemp.fit_abts(val, aug, selection, spec)
    assert abts.method == bintemp.MapMethod.ABTS
    assert sum(abts.per_bin_counts) == len(val) + len(ids)

    bad = bintemp.LogitDataset(val.logits[:1], [val.labels[0]], ["ghost__aug1"])
    with pytest.raises(bintemp.BintempError, match="unknown"):
        bintemp.fit_abts(val, bad, selection, spec)


def test_augmentations():
    white = np.full((4, 4, 3), 255, dtype=np.uint8)
    assert np.all(bintemp.linear_contrast(white, 0.5) == 191)
    row = np.array([[10, 20, 30, 40]], dtype=np.uint8)
    np.testing.assert_array_equal(bintemp.shift_x(row, -1), [[20, 30, 40, 0]])
    np.testing.assert_array_equal(bintemp.brightness(row, 230), [[240, 250, 255, 255]])
    img = np.arange(48, dtype=np.uint8).reshape(4, 4, 3)
    np.testing.assert_array_equal(bintemp.gaussian_blur(img, 0.0), img)
    a = bintemp.apply_random(img, "blur:0,1", seed=3, draw_index=7)
    b = bintemp.apply_random(img, "blur:0,1", seed=3, draw_index=7)
    np.testing.assert_array_equal(a, b)


def test_reliability_svg_is_well_formed():
    data = bintemp.generate(5000, seed=7)
    cls, conf, _ = bintemp.apply_map(data, bintemp.fit_ts(data))
    correct = (cls == np.asarray(data.labels)).tolist()
    report = bintemp.reliability(conf.tolist(), correct, 15)
    svg = bintemp.render_reliability_svg(report, "smoke")
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    bars = [r for r in root.iter(ns + "rect") if r.get("class") == "acc-bar"]
    assert len(bars) == sum(1 for b in report.bins if b.count > 0)
