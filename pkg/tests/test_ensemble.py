import io
import random

import pytest

from tomocausal.ensemble import (
    CSV_FIELDS,
    EnsembleRecord,
    compute_stats,
    csv_text,
    pearson_r,
    read_csv,
    run_ensemble,
    slope_through_origin,
    write_csv,
)
from tomocausal.optimizer import OptimizationSettings

FAST = OptimizationSettings(random_starts=4)


def _rec(k, d_q, d_tom, d_opt, degenerate=False):
    vals = dict.fromkeys(f for f in CSV_FIELDS if f not in ("index", "seed", "class"))
    vals.update(d_q=d_q, d_tom=d_tom, d_opt=d_opt, degenerate=degenerate, x_type="")
    return EnsembleRecord(index=k, seed=k, state_class="mixed", **vals)


class TestStatistics:
    def test_exact_line(self):
        x = [0.1 * k - 0.3 for k in range(10)]
        assert pearson_r(x, [0.5 * v for v in x]) == pytest.approx(1.0)
        assert slope_through_origin(x, [0.5 * v for v in x]) == pytest.approx(0.5)

    def test_anticorrelated(self):
        assert pearson_r([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_zero_variance(self):
        assert pearson_r([0.0] * 5, [1, 2, 3, 4, 5]) is None
        assert slope_through_origin([0.0] * 5, [1, 2, 3, 4, 5]) is None

    def test_order_invariant(self):
        rng = random.Random(3)
        recs = [_rec(k, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in range(200)]
        a = compute_stats(recs)
        rng.shuffle(recs)
        assert compute_stats(recs) == a

    def test_degenerate_excluded(self):
        recs = [_rec(0, 0.2, 0.1, 0.05), _rec(1, -0.2, -0.1, -0.05),
                _rec(2, None, None, None, True), _rec(3, 0.4, 0.2, -0.1)]
        s = compute_stats(recs)
        assert (s.n_total, s.n_used, s.n_excluded) == (4, 3, 1)
        assert s.sign_agreement_fraction == pytest.approx(2 / 3)


class TestRunEnsemble:
    def test_pure_class_symmetric(self):
        records, stats, _ = run_ensemble("pure", 100, 0, FAST)
        for r in records:
            assert abs(r.d_q) <= 1e-9 and abs(r.d_tom) <= 1e-9 and abs(r.d_opt) <= 1e-6

    def test_seeds_and_order(self):
        records, _, _ = run_ensemble("mixed", 5, 40, FAST)
        assert [r.index for r in records] == list(range(5))
        assert [r.seed for r in records] == list(range(40, 45))

    def test_workers_do_not_change_results(self):
        a, sa, _ = run_ensemble("mixed", 12, 7, FAST, workers=1)
        b, sb, _ = run_ensemble("mixed", 12, 7, FAST, workers=2)
        assert csv_text(a) == csv_text(b)
        assert sa == sb

    def test_x_counts(self):
        _, stats, _ = run_ensemble("x", 30, 0, FAST)
        assert stats.type_i_count + stats.type_ii_count + stats.inconsistent_count == 30

    @pytest.mark.parametrize("bad", [("mixed", 0), ("bogus", 3)])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            run_ensemble(*bad)


class TestCsv:
    def test_rows_and_header(self, tmp_path):
        records, _, _ = run_ensemble("x", 6, 0, FAST)
        path = tmp_path / "out.csv"
        with open(path, "w", newline="") as fh:
            write_csv(records, fh)
        text = path.read_text().splitlines()
        assert text[0].startswith("# generated ")
        assert text[1] == ",".join(CSV_FIELDS)
        rows = read_csv(path)
        assert len(rows) == 6
        assert rows[0]["class"] == "x"
        assert float(rows[2]["j_opt"]) == records[2].j_opt

    def test_byte_identical_reruns(self):
        a = csv_text(run_ensemble("mixed", 8, 3, FAST)[0])
        b = csv_text(run_ensemble("mixed", 8, 3, FAST)[0])
        assert a == b

    def test_degenerate_fields_empty(self):
        buf = io.StringIO()
        write_csv([_rec(0, None, None, None, True)], buf, timestamp=False)
        row = dict(zip(CSV_FIELDS, buf.getvalue().splitlines()[1].split(",")))
        assert row["d_q"] == row["d_tom"] == row["d_opt"] == ""
        assert row["degenerate"] == "1"

    def test_extra_columns(self):
        buf = io.StringIO()
        write_csv([_rec(0, 0.1, 0.1, 0.1)], buf, timestamp=False, extra={"alpha": [0.25]})
        lines = buf.getvalue().splitlines()
        assert lines[0].endswith(",alpha") and lines[1].endswith(",0.25")
