import csv
import io
import json

import numpy as np
import pytest
from scipy.stats import ks_2samp

from lpdendro.codes import circulant_array, hamming_7_4
from lpdendro.dendro import dendro_transform
from lpdendro.landscape import build_spectrum, histogram, run_restarts, spectrum_gap

ARRAY42 = circulant_array(((0, 0, 0, 0, 0, 0), (0, 1, 2, 3, 4, 5), (0, 2, 4, 6, 1, 3)), 7)


def synthetic(counts):
    return [{"d_eff": d, "kind": "Fractional", "count": n} for d, n in counts.items()]


def test_gap_synthetic():
    spec = synthetic({16.0: 2, 24.0: 1, 25.0: 1, 27.4: 500, 27.5: 800})
    lo, hi = spectrum_gap(spec, min_count=5)
    assert lo == 16.0 and hi == pytest.approx(27.4)


def test_gap_contiguous():
    spec = synthetic({16.4 + 0.05 * k: 6 + k for k in range(40)})
    assert spectrum_gap(spec, min_count=5) is None
    with pytest.raises(ValueError):
        spectrum_gap([], min_count=5)


def test_gap_nothing_populated():
    assert spectrum_gap(synthetic({3.0: 1, 9.0: 1}), min_count=5) is None


def test_histogram_groups_by_bin_and_kind():
    entries = histogram([(3.0, "Codeword"), (3.0, "Codeword"), (3.02, "Fractional"),
                         (7.1, "Fractional"), (7.12, "Fractional")], 0.05)
    assert entries == [
        {"d_eff": 3.0, "kind": "Codeword", "count": 2},
        {"d_eff": 3.02, "kind": "Fractional", "count": 1},
        {"d_eff": 7.1, "kind": "Fractional", "count": 2},
    ]


def test_single_restart():
    spec = build_spectrum(dendro_transform(hamming_7_4()), 1, seed=0, workers=1)
    assert len(spec.entries) == 1 and spec.entries[0]["count"] == 1


def test_spectrum_invariants_and_outputs():
    spec = build_spectrum(dendro_transform(hamming_7_4()), 30, seed=4, workers=1,
                          code_id="hamming7")
    assert sum(e["count"] for e in spec.entries) == len(spec.successes) == 30 - spec.aborted
    ds = [e["d_eff"] for e in spec.entries]
    assert ds == sorted(ds)
    for e in spec.entries:
        assert 1 <= e["d_eff"] <= 7
        if e["kind"] == "Codeword":
            assert abs(e["d_eff"] - round(e["d_eff"])) < 1e-6
    data = json.loads(spec.to_json())
    assert data["provenance"]["restarts"] == 30 and len(data["samples"]) == 30
    rows = list(csv.reader(io.StringIO(spec.to_csv())))
    assert rows[0] == ["d_eff", "kind", "count"] and len(rows) == len(spec.entries) + 1
    dens = np.loadtxt(io.StringIO(spec.density()))
    assert np.sum(dens.reshape(-1, 2)[:, 1]) * spec.bin_width == pytest.approx(1.0)


def test_deterministic_across_workers():
    code = dendro_transform(ARRAY42)
    a = build_spectrum(code, 16, seed=9, workers=1)
    b = build_spectrum(code, 16, seed=9, workers=3)
    assert a.entries == b.entries
    assert [s.d_eff for s in a.samples] == [s.d_eff for s in b.samples]


def test_original_and_dendro_spectra_agree():
    orig = [r.d_eff for r in run_restarts(ARRAY42, 60, seed=1, workers=2) if r.ok]
    dend = [r.d_eff for r in run_restarts(dendro_transform(ARRAY42), 60, seed=1, workers=2) if r.ok]
    assert min(orig) == pytest.approx(min(dend))
    assert ks_2samp(orig, dend).pvalue > 0.01
