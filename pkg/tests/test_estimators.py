import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from seqtag.crf import CRFTagger
from seqtag.neural import NeuralConfig, NeuralTagger
from seqtag.validation import TrainingError, check_sequences

TINY = dict(word_emb_dim=6, char_emb_dim=4, char_hidden_dim=4, word_hidden_dim=6, epochs=2)


def test_crf_params_and_clone():
    est = CRFTagger(c1=0.3, c2=0.02)
    assert est.get_params() == {"c1": 0.3, "c2": 0.02, "max_iterations": 100}
    twin = clone(est).set_params(c1=0.5)
    assert twin.c1 == 0.5 and est.c1 == 0.3


def test_neural_params_match_config():
    est = NeuralTagger(**TINY)
    assert est.get_config() == NeuralConfig(**TINY)
    assert NeuralTagger.from_config(est.get_config()).get_params() == est.get_params()
    assert clone(est).get_params() == est.get_params()


@pytest.mark.parametrize("est", [CRFTagger(max_iterations=30), NeuralTagger(**TINY)])
def test_fit_predict_score(est, det_corpus):
    X, y = det_corpus.X[:10], det_corpus.y[:10]
    with pytest.raises(NotFittedError):
        est.predict(X)
    assert est.fit(X, y) is est
    pred = est.predict(X)
    assert [len(p) for p in pred] == [len(w) for w in X]
    assert set(est.classes_) >= {lab for s in y for lab in s}
    assert 0.0 <= est.score(X, y) <= 1.0


@pytest.mark.parametrize("cls", [CRFTagger, lambda: NeuralTagger(**TINY)])
def test_fit_rejects_bad_input(cls):
    with pytest.raises(TrainingError):
        cls().fit([], [])
    with pytest.raises(ValueError, match="labels"):
        cls().fit([["a", "b"]], [["O"]])
    with pytest.raises(ValueError):
        cls().fit([["a"]], [["B-Planet"]])


def test_crf_negative_penalty():
    with pytest.raises(ValueError):
        CRFTagger(c1=-1).fit([["a"]], [["O"]])


def test_neural_bad_config():
    with pytest.raises(ValueError):
        NeuralTagger(dropout=1.5).fit([["a"]], [["O"]])


def test_check_sequences():
    with pytest.raises(ValueError):
        check_sequences("a b c")
    with pytest.raises(ValueError, match="empty"):
        check_sequences([[]])
    with pytest.raises(ValueError, match="invalid token"):
        check_sequences([["a b"]])
    with pytest.raises(ValueError, match="sentences"):
        check_sequences([["a"]], [["O"], ["O"]])
    assert check_sequences((("a",),), (("O",),)) == ([["a"]], [["O"]])
