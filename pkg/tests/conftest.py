"""
Shared fixtures and synthetic data generators for the test suite
"""
import numpy as np
import pandas as pd
import pytest

from models.lexicon import MoralLexicon
from modules.embedding_store import EmbeddingStore, write_embeddings
from modules.lexicon import write_lexicon
from modules.scorer import TokenBag


def make_store(mapping):
    return EmbeddingStore.from_mapping({word: list(vec) for word, vec in mapping.items()})


@pytest.fixture
def store_factory():
    return make_store


# ============================================================================
# Seeded random embedding + corpus (50 words, dimension 10, 20 documents)
# ============================================================================

@pytest.fixture
def synthetic_store():
    rng = np.random.default_rng(7)
    words = [f"w{i:02d}" for i in range(50)]
    return EmbeddingStore(words, rng.normal(size=(50, 10)))


@pytest.fixture
def synthetic_lexicon():
    return MoralLexicon.model_validate({
        "name": "synthetic",
        "dimensions": [
            {"name": "alpha", "virtues": ["w00", "w01", "w02", "zz_missing"], "vices": ["w03", "w04", "w05"]},
            {"name": "beta", "virtues": ["w06", "w07"], "vices": ["w08", "w09", "w10"]},
            {"name": "gamma", "virtues": ["w11", "w12", "w13"], "vices": ["w14"]},
        ],
    })


@pytest.fixture
def synthetic_corpus():
    """20 bags with mixed frequencies; every third bag carries an OOV token"""
    rng = np.random.default_rng(11)
    bags = []
    for doc in range(20):
        picks = rng.choice(50, size=rng.integers(1, 8), replace=False)
        tokens = {f"w{i:02d}": int(rng.integers(1, 5)) for i in picks}
        if doc % 3 == 0:
            tokens["oovword"] = 2
        bags.append(TokenBag(tokens))
    return bags


# ============================================================================
# Planted-signal partisanship corpus
# ============================================================================

def _planted_vectors(dimension: int = 10, seed: int = 0):
    """
    alpha words live on axis 0, beta words on axis 1, filler words on the
    remaining axes only, so every cross cosine is exactly zero
    """
    rng = np.random.default_rng(seed)
    vectors = {}
    for i in range(5):
        scale = 1.0 + 0.1 * i
        vectors[f"alphagood{i}"] = np.eye(dimension)[0] * scale
        vectors[f"alphabad{i}"] = -np.eye(dimension)[0] * scale
        vectors[f"betagood{i}"] = np.eye(dimension)[1] * scale
        vectors[f"betabad{i}"] = -np.eye(dimension)[1] * scale
    for i in range(30):
        vector = np.zeros(dimension)
        vector[2:] = rng.normal(size=dimension - 2)
        vectors[f"filler{i}"] = vector
    return vectors


PLANTED_LEXICON = {
    "name": "planted",
    "dimensions": [
        {"name": "alpha", "virtues": [f"alphagood{i}" for i in range(5)], "vices": [f"alphabad{i}" for i in range(5)]},
        {"name": "beta", "virtues": [f"betagood{i}" for i in range(5)], "vices": [f"betabad{i}" for i in range(5)]},
    ],
}


def planted_headlines(n: int = 200, seed: int = 0, signal: float = 0.95) -> pd.DataFrame:
    """
    Liberal headlines draw alpha words from the virtue pole with probability
    `signal`, conservative ones from the vice pole; beta and filler words are
    label independent. Word counts vary per headline so that no Intensity
    column is a linear function of its Bias column.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        liberal = i % 2 == 0
        words = []
        for _ in range(int(rng.choice([3, 5]))):
            virtue = rng.random() < signal if liberal else rng.random() >= signal
            words.append(f"alpha{'good' if virtue else 'bad'}{rng.integers(5)}")
        for _ in range(int(rng.integers(1, 4))):
            words.append(f"beta{'good' if rng.random() < 0.5 else 'bad'}{rng.integers(5)}")
        words.extend(f"filler{j}" for j in rng.integers(30, size=int(rng.integers(2, 7))))
        rng.shuffle(words)
        rows.append({
            "id": f"h{i:04d}",
            "title": " ".join(words),
            "publication": "Liberal Daily" if liberal else "Conservative Herald",
        })
    return pd.DataFrame(rows)


PLANTED_LEANINGS = {"Liberal Daily": "liberal", "Conservative Herald": "conservative", "Wire": "center"}


@pytest.fixture
def planted_files(tmp_path):
    """Writes embeddings, lexicon and a headline CSV; returns their paths"""

    def write(n: int = 200, seed: int = 0, signal: float = 0.95):
        store = make_store(_planted_vectors())
        embeddings = tmp_path / "planted_vectors.txt"
        write_embeddings(store, embeddings)
        lexicon = tmp_path / "planted_lexicon.json"
        write_lexicon(MoralLexicon.model_validate(PLANTED_LEXICON), lexicon)
        corpus = tmp_path / f"planted_headlines_{seed}.csv"
        planted_headlines(n, seed, signal).to_csv(corpus, index=False)
        return {"embeddings": embeddings, "lexicon": lexicon, "corpus": corpus, "store": store}

    return write


# ============================================================================
# Annotation fixture
# ============================================================================

def planted_annotations(n: int = 120, seed: int = 3) -> pd.DataFrame:
    """
    Annotated documents: care votes follow alpha virtue words, purity votes
    follow beta virtue words, non-moral votes only occur without care
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        care = i % 2 == 0
        purity = (i // 2) % 2 == 0
        words = [f"alpha{'good' if care else 'bad'}{rng.integers(5)}" for _ in range(int(rng.integers(1, 4)))]
        words += [f"beta{'good' if purity else 'bad'}{rng.integers(5)}" for _ in range(int(rng.integers(1, 4)))]
        words += [f"filler{j}" for j in rng.integers(30, size=int(rng.integers(1, 6)))]
        rng.shuffle(words)
        rows.append({
            "id": f"t{i:04d}",
            "text": " ".join(words),
            "annotator_count": 3,
            "care": 3 if care else int(rng.integers(0, 2)),
            "purity": 2 if purity else int(rng.integers(0, 2)),
            "non-moral": 0 if care else int(rng.integers(0, 4)),
        })
    return pd.DataFrame(rows)


def planted_feature_rows(ids, labels, seed: int = 0, width: int = 4) -> pd.DataFrame:
    """External vectors whose first column tracks the given 0/1 labels"""
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(len(ids), width))
    values[:, 0] += 3.0 * np.asarray(labels, dtype=float)
    frame = pd.DataFrame(values, columns=[f"dim{j}" for j in range(width)])
    frame.insert(0, "id", list(ids))
    return frame


@pytest.fixture
def annotation_file(tmp_path):
    path = tmp_path / "annotations.csv"
    planted_annotations().to_csv(path, index=False)
    return path


@pytest.fixture
def annotation_features_file(tmp_path):
    """External vectors for the planted annotations (first column tracks care)"""
    frame = planted_annotations()
    care = (frame["care"] >= 2).astype(int)
    path = tmp_path / "annotation_features.csv"
    planted_feature_rows(frame["id"], care, seed=1).to_csv(path, index=False)
    return path


@pytest.fixture
def headline_features_file(tmp_path):
    """External vectors for the planted headlines (first column tracks leaning)"""
    frame = planted_headlines()
    liberal = (frame["publication"] == "Liberal Daily").astype(int)
    path = tmp_path / "headline_features.csv"
    planted_feature_rows(frame["id"], liberal, seed=2).to_csv(path, index=False)
    return path


@pytest.fixture
def planted_store():
    return make_store(_planted_vectors())


@pytest.fixture
def planted_lexicon():
    return MoralLexicon.model_validate(PLANTED_LEXICON)


@pytest.fixture
def planted_leanings():
    return dict(PLANTED_LEANINGS)


@pytest.fixture
def headline_factory():
    return planted_headlines
