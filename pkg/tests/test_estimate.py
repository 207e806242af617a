import numpy as np
import pytest

from mroselect.estimate import (
    Histogram,
    RangePredicate,
    build_histogram,
    build_text_index,
    dump_histogram,
    interval_for_range,
    interval_for_substring,
    load_histogram,
    point_for_range,
    tokenize,
)

# lo=1, hi=401 gives the familiar 1-100 / 101-200 / ... bucket layout
REF_HIST = Histogram(lo=1.0, hi=401.0, counts=(200, 100, 400, 300))


class TestBuildHistogram:
    def test_reference_layout(self):
        values = (list(range(1, 101)) * 2 + list(range(101, 201))
                  + list(range(201, 301)) * 4 + list(range(301, 401)) * 3)
        hist = build_histogram(values, 4)
        assert hist.counts == (200, 100, 400, 300)
        assert hist.total == 1000

    def test_single_distinct_value(self):
        hist = build_histogram([5.0] * 7, 10)
        assert hist.counts == (7,)
        assert hist.hi > hist.lo  # synthesized unit width

    def test_single_bucket(self):
        hist = build_histogram([1.0, 2.0, 3.0], 1)
        assert hist.counts == (3,)

    def test_domain_maximum_lands_in_last_bucket(self):
        hist = build_histogram([0.0, 0.5, 1.0], 2)
        assert hist.counts == (1, 2)

    def test_empty_input(self):
        with pytest.raises(ValueError):
            build_histogram([], 4)

    def test_counts_partition_the_data(self):
        rng = np.random.default_rng(3)
        values = rng.normal(size=1000)
        for buckets in (1, 7, 32):
            assert build_histogram(values, buckets).total == 1000

    def test_file_round_trip(self, tmp_path):
        path = str(tmp_path / "hist.json")
        dump_histogram(REF_HIST, path)
        assert load_histogram(path) == REF_HIST

    def test_file_missing_field(self, tmp_path):
        path = tmp_path / "hist.json"
        path.write_text('{"lo": 0, "counts": [1]}')
        with pytest.raises(ValueError, match="missing 'hi'"):
            load_histogram(str(path))

    def test_invalid_histograms(self):
        with pytest.raises(ValueError):
            Histogram(lo=1.0, hi=1.0, counts=(3,))
        with pytest.raises(ValueError):
            Histogram(lo=0.0, hi=1.0, counts=())
        with pytest.raises(ValueError):
            Histogram(lo=0.0, hi=1.0, counts=(0, 0))


class TestIntervalForRange:
    def test_reference_lt(self):
        iv = interval_for_range(REF_HIST, RangePredicate("lt", 126.0))
        assert iv.s_lo == 0.2 and iv.s_hi == 0.3

    def test_lt_below_domain(self):
        iv = interval_for_range(REF_HIST, RangePredicate("lt", 1.0))
        assert (iv.s_lo, iv.s_hi) == (0.0, 0.0)

    def test_gt_above_domain(self):
        iv = interval_for_range(REF_HIST, RangePredicate("gt", 401.0))
        assert (iv.s_lo, iv.s_hi) == (0.0, 0.0)

    def test_lt_above_domain(self):
        iv = interval_for_range(REF_HIST, RangePredicate("lt", 500.0))
        assert (iv.s_lo, iv.s_hi) == (1.0, 1.0)

    def test_gt_below_domain(self):
        iv = interval_for_range(REF_HIST, RangePredicate("gt", 0.5))
        assert (iv.s_lo, iv.s_hi) == (1.0, 1.0)

    def test_gt_inside(self):
        iv = interval_for_range(REF_HIST, RangePredicate("gt", 126.0))
        assert iv.s_lo == pytest.approx(0.7)
        assert iv.s_hi == pytest.approx(0.8)

    def test_width_shrinks_under_refinement(self):
        rng = np.random.default_rng(11)
        values = rng.exponential(scale=10.0, size=5000)
        for pred in (RangePredicate("lt", 8.3), RangePredicate("gt", 2.7)):
            widths = []
            for buckets in (4, 8, 16, 32):  # nested refinements only
                iv = interval_for_range(build_histogram(values, buckets), pred)
                widths.append(iv.s_hi - iv.s_lo)
            assert all(a >= b - 1e-12 for a, b in zip(widths, widths[1:]))


class TestPointForRange:
    def test_reference_point(self):
        assert point_for_range(REF_HIST, RangePredicate("lt", 126.0)) == 0.225

    def test_bucket_boundary_equals_lower_bound(self):
        pred = RangePredicate("lt", 201.0)
        iv = interval_for_range(REF_HIST, pred)
        assert point_for_range(REF_HIST, pred) == iv.s_lo == pytest.approx(0.3)

    def test_beyond_domain(self):
        assert point_for_range(REF_HIST, RangePredicate("lt", 999.0)) == 1.0
        assert point_for_range(REF_HIST, RangePredicate("gt", 999.0)) == 0.0

    def test_point_always_inside_interval(self):
        rng = np.random.default_rng(13)
        values = rng.uniform(-3, 7, size=2000)
        hist = build_histogram(values, 9)
        for _ in range(200):
            pred = RangePredicate("lt" if rng.random() < 0.5 else "gt",
                                  float(rng.uniform(-4, 8)))
            iv = interval_for_range(hist, pred)
            p = point_for_range(hist, pred)
            assert iv.s_lo - 1e-12 <= p <= iv.s_hi + 1e-12

    def test_rejects_bad_op(self):
        with pytest.raises(ValueError):
            RangePredicate("le", 3.0)


CORPUS = [
    {"subject": "Invest now!", "body": "please invest in our fund"},
    {"subject": "meeting", "body": "reinvestment plans for Q3"},
    {"subject": "lunch", "body": "see you at noon"},
]


class TestTextIndex:
    CORPUS = CORPUS

    def test_tokenize(self):
        assert tokenize("Re-Invest NOW, please!") == ["re", "invest", "now", "please"]

    def test_word_document_frequency(self):
        idx = build_text_index(self.CORPUS)["body"]
        assert idx.word_doc_freq["invest"] == 1
        assert idx.doc_count == 3

    def test_gram_but_not_word_from_superstring(self):
        idx = build_text_index(self.CORPUS)["body"]
        # "reinvestment" feeds the 2-grams of "invest" without the word
        for gram in ("in", "nv", "ve", "es", "st"):
            assert idx.gram2_doc_freq[gram] >= 2
        assert idx.word_doc_freq.get("reinvestment", 0) == 1

    def test_single_character_words_have_no_grams(self):
        idx = build_text_index([{"f": "a b c"}])["f"]
        assert idx.word_doc_freq == {"a": 1, "b": 1, "c": 1}
        assert idx.gram2_doc_freq == {}

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            build_text_index([])


class TestIntervalForSubstring:
    def test_reference_interval(self):
        idx = build_text_index(CORPUS)["body"]
        iv = interval_for_substring(idx, "invest")
        assert iv.s_lo == pytest.approx(1 / 3)  # exact word match in one doc
        assert iv.s_hi == pytest.approx(2 / 3)  # every 2-gram appears in two docs

    def test_absent_everything_gives_zero(self):
        idx = build_text_index([{"f": "alpha beta"}])["f"]
        iv = interval_for_substring(idx, "zq")
        assert (iv.s_lo, iv.s_hi) == (0.0, 0.0)

    def test_universal_word_gives_one(self):
        idx = build_text_index([{"f": "spam"}, {"f": "spam"}])["f"]
        iv = interval_for_substring(idx, "spam")
        assert (iv.s_lo, iv.s_hi) == (1.0, 1.0)

    def test_short_keyword_rejected(self):
        idx = build_text_index([{"f": "hello"}])["f"]
        with pytest.raises(ValueError):
            interval_for_substring(idx, "h")

    def test_brackets_true_substring_selectivity(self):
        # oracle: exhaustive substring scan of the lowercased documents
        rng = np.random.default_rng(29)
        vocab = ["invest", "investigation", "reinvest", "vested", "divest",
                 "interest", "invoice", "vest", "foo", "barbaz", "quux",
                 "north", "investor", "no"]
        docs = []
        for _ in range(120):
            words = rng.choice(vocab, size=rng.integers(1, 8))
            docs.append({"t": " ".join(words)})
        idx = build_text_index(docs)["t"]
        for kw in ("invest", "vest", "in", "ba", "quux", "inve", "xx"):
            iv = interval_for_substring(idx, kw)
            truth = sum(1 for d in docs if kw in d["t"].lower()) / len(docs)
            assert iv.s_lo - 1e-12 <= truth <= iv.s_hi + 1e-12, (kw, truth, iv)
